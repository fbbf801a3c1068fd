#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depgen/features.hpp"
#include "depgen/label.hpp"

namespace depgen {

// Node of a tree under construction. Nodes live in the owning tree's arena
// so partial trees copy cheaply.
struct GenNode {
  NodeSignature signature;
  std::string incoming_deprel;
  int parent = -1;  // arena index, -1 for the root
  std::vector<int> children;
  bool expanded = false;
  int head_slot = 0;  // children placed left of this node in surface order
};

struct ScoredTree {
  std::vector<GenNode> nodes;  // index 0 is the root
  double score = 0.0;
  std::vector<MeaningLabel> remaining_labels;

  bool complete() const;
  // First unexpanded node in breadth-first, left-to-right order; -1 if none.
  int next_unexpanded() const;
  // Deterministic identity string, used for tie-breaking and deduplication.
  std::string canonical() const;
  int node_count() const { return static_cast<int>(nodes.size()); }
};

struct GenCandidate {
  const FeatureEntry* entry = nullptr;
  double probability = 0.0;
  int label_count = 0;                // plan labels the feature consumes
  std::vector<int> consumed;          // positions into remaining_labels
};

struct GenStats {
  long long comparisons = 0;  // feature match tests
  long long expansions = 0;
  long long rounds = 0;
};

// Greedy leftmost embedding of the feature's labels into the remaining plan
// labels, preserving relative order. Nullopt when no embedding exists.
std::optional<std::vector<int>> embed_labels(
    const std::vector<MeaningLabel>& feature_labels,
    const std::vector<MeaningLabel>& remaining);

// Features that can start a tree for the plan: ROOT parent, first plan label
// covered, all feature labels in plan order. Throws when none qualify.
std::vector<GenCandidate> root_candidates(const FeatureModel& model,
                                          const std::vector<MeaningLabel>& plan,
                                          GenStats* stats = nullptr);

// Features that can expand the given unexpanded node: parent context and
// node signature must match, child labels must fit the remaining plan.
std::vector<GenCandidate> expansion_candidates(const FeatureModel& model,
                                               const ScoredTree& tree,
                                               int node_index,
                                               GenStats* stats = nullptr);

// Beam search over partial trees. Returns up to beam_width complete trees
// sorted by score (ties by canonical string). Throws when no tree places
// every planned label.
std::vector<ScoredTree> produce_trees(const FeatureModel& model,
                                      const std::vector<MeaningLabel>& plan,
                                      int beam_width, int node_cap = 100,
                                      GenStats* stats = nullptr,
                                      std::vector<std::string>* trace = nullptr);

}  // namespace depgen
