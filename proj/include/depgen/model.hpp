#pragma once

#include <string>
#include <vector>

#include "depgen/align.hpp"
#include "depgen/corpus.hpp"
#include "depgen/features.hpp"
#include "depgen/ngram.hpp"
#include "depgen/planner.hpp"

namespace depgen {

inline constexpr int kModelVersion = 1;

struct ModelConfig {
  double threshold = 0.0;
  int max_exhaustive = 8;
  int perm_cap = 7;
  int node_cap = 100;
  double weight3 = TrigramLM::kW3;
  double weight2 = TrigramLM::kW2;
  double weight1 = TrigramLM::kW1;
};

struct TrainedModel {
  int version = kModelVersion;
  LabelModel label_model;
  FeatureModel feature_model;
  WordFeatureModel word_model;
  TrigramLM trigram;
  ModelConfig config;
};

struct TrainingResult {
  TrainedModel model;
  std::vector<AlignmentRecord> alignment;
  long long scenario_count = 0;
  long long sentence_count = 0;
};

// Aligns every reference that has a parsed tree, delexicalizes, and trains
// the label chain, the feature models, and the trigram LM.
TrainingResult train_model(const std::vector<Scenario>& scenarios,
                           const ModelConfig& config);

// Single sorted-key JSON document, counts only, with a trailing
// "#sha256:<hex>" integrity line.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace depgen
