#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depgen/corpus.hpp"
#include "depgen/label.hpp"

namespace depgen {

// A node as it appears inside a feature: meaning label (if any), PoS tag,
// and the surface word. Words are erased from skeleton features and from
// label-bearing nodes.
struct NodeSignature {
  std::optional<MeaningLabel> label;
  std::string pos;
  std::string word;

  auto operator<=>(const NodeSignature&) const = default;
  NodeSignature erased() const { return {label, pos, ""}; }
  std::string render(bool with_word) const;
};

struct FeatureChild {
  NodeSignature node;
  std::string deprel;
  auto operator<=>(const FeatureChild&) const = default;
};

// One-level slice of a dependency tree: the parent link above a node, the
// node itself, and its children in surface order.
struct DependencyFeature {
  bool root_parent = false;
  NodeSignature parent;
  std::string deprel;
  NodeSignature node;
  std::vector<FeatureChild> children;

  auto operator<=>(const DependencyFeature&) const = default;
  DependencyFeature skeleton() const;
  // Labels carried by the feature: node label first, then child labels in
  // surface order.
  std::vector<MeaningLabel> labels() const;
  std::string render(bool with_words = false) const;
  // Parent part plus node part; the denominator context of the feature.
  std::string context_render() const;
};

struct SubTree {
  DependencyFeature shape;  // words populated on non-label nodes
  int head_slot = 0;        // children left of the head in the surface string
};

struct FeatureEntry {
  DependencyFeature feature;
  long long count = 0;
  std::map<int, long long> slot_counts;

  // Most frequent head slot; ties go to the smaller slot.
  int dominant_slot() const;
};

struct FeatureModel {
  std::map<std::string, FeatureEntry> features;        // key: render()
  std::map<std::string, long long> context_total;      // key: context_render()

  double probability(const FeatureEntry& entry) const;
};

struct WordFeatureModel {
  std::map<std::string, FeatureEntry> features;        // key: render(true)
  std::map<std::string, long long> skeleton_total;     // key: render(false)
  std::map<std::string, std::string> pos_backoff;      // tag -> word

  double probability(const FeatureEntry& entry) const;
  // Corpus-wide most frequent word for the tag; the tag itself when unseen.
  std::string backoff_word(const std::string& pos) const;
};

std::vector<SubTree> extract_subtrees(const DependencyTree& tree);

DependencyFeature linearize_feature(const SubTree& st);

FeatureModel train_feature_model(const std::vector<DependencyTree>& trees);

WordFeatureModel train_word_features(const std::vector<DependencyTree>& trees);

}  // namespace depgen
