#pragma once

#include <string>
#include <vector>

#include "depgen/corpus.hpp"

namespace depgen {

// Corpus BLEU-4: pooled clipped n-gram counts, geometric mean, brevity
// penalty against the closest reference length. Lowercased whitespace
// tokenization. No smoothing unless asked.
double bleu4(const std::vector<std::string>& candidates,
             const std::vector<std::vector<std::string>>& references,
             bool smooth = false);

struct SlotError {
  long long redundant = 0;
  long long missing = 0;
  long long total = 0;
  double err = 0.0;
};

// Counts MR values missing from the sentence and value spans beyond their
// first occurrence, using the same span matching as training alignment.
SlotError slot_error(const std::string& sentence,
                     const MeaningRepresentation& mr);

struct ScenarioSlotError {
  std::string scenario;
  SlotError slots;
};

struct EvalReport {
  double bleu = 0.0;  // in [0,1]
  SlotError slots;    // corpus aggregate
  std::vector<ScenarioSlotError> per_scenario;

  std::string to_json() const;  // pretty-printed
};

}  // namespace depgen
