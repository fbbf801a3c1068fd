#pragma once

#include <map>
#include <string>
#include <vector>

#include "depgen/label.hpp"

namespace depgen {

// First-order Markov chain over meaning labels, with sentence-boundary
// sentinels. Keys are rendered labels; occurrence indices do not matter.
struct LabelModel {
  static constexpr const char* kStart = "^";
  static constexpr const char* kEnd = "$";

  std::map<std::string, long long> unigram;
  std::map<std::string, std::map<std::string, long long>> bigram;
  long long total_labels = 0;
  long long sequence_count = 0;

  bool knows(const MeaningLabel& label) const {
    return unigram.count(label.render()) > 0;
  }
};

struct ContentPlan {
  std::vector<MeaningLabel> labels;
  double log_probability = 0.0;
};

LabelModel train_label_model(
    const std::vector<std::vector<MeaningLabel>>& sequences);

// Relative frequency of the label among all training labels.
double label_probability(const LabelModel& model, const MeaningLabel& label);

// p(to | from). Null from means sentence start, null to means sentence end.
double transition_probability(const LabelModel& model,
                              const MeaningLabel* from,
                              const MeaningLabel* to);

// Log probability of the full sequence including boundary transitions.
// Returns -infinity when any step is unseen.
double sequence_log_probability(const LabelModel& model,
                                const std::vector<MeaningLabel>& sequence);

// Orders the given labels into the most probable sequence. Labels whose
// unigram probability falls below the threshold are dropped first. Small
// inputs are solved exactly; larger ones with a beam search over prefixes.
ContentPlan plan_content(const LabelModel& model,
                         std::vector<MeaningLabel> labels,
                         double threshold = 0.0,
                         std::size_t max_exhaustive = 8,
                         std::size_t beam_width = 64);

}  // namespace depgen
