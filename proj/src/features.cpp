#include "depgen/features.hpp"

#include <algorithm>

namespace depgen {

std::string NodeSignature::render(bool with_word) const {
  std::string out;
  if (label) out += label->render() + ",";
  out += "(" + pos + ")";
  if (with_word && !label && !word.empty()) out += "=" + word;
  return out;
}

DependencyFeature DependencyFeature::skeleton() const {
  DependencyFeature out;
  out.root_parent = root_parent;
  out.parent = parent.erased();
  out.deprel = deprel;
  out.node = node.erased();
  out.children.reserve(children.size());
  for (const auto& child : children) {
    out.children.push_back({child.node.erased(), child.deprel});
  }
  return out;
}

std::vector<MeaningLabel> DependencyFeature::labels() const {
  std::vector<MeaningLabel> out;
  if (node.label) out.push_back(*node.label);
  for (const auto& child : children) {
    if (child.node.label) out.push_back(*child.node.label);
  }
  return out;
}

std::string DependencyFeature::context_render() const {
  std::string out;
  if (root_parent) {
    out += "ROOT," + deprel;
  } else {
    out += parent.render(false) + "," + deprel;
  }
  out += " -> " + node.render(false);
  return out;
}

std::string DependencyFeature::render(bool with_words) const {
  std::string out;
  if (root_parent) {
    out += "ROOT," + deprel;
  } else {
    out += parent.render(with_words) + "," + deprel;
  }
  out += " -> " + node.render(with_words) + " -> ";
  if (children.empty()) {
    out += "#";
    return out;
  }
  bool first = true;
  for (const auto& child : children) {
    if (!first) out += ",";
    first = false;
    out += "[" + child.node.render(with_words) + "," + child.deprel + "]";
  }
  return out;
}

int FeatureEntry::dominant_slot() const {
  int best = 0;
  long long best_count = -1;
  for (const auto& [slot, count] : slot_counts) {
    if (count > best_count) {
      best = slot;
      best_count = count;
    }
  }
  return best;
}

double FeatureModel::probability(const FeatureEntry& entry) const {
  const auto it = context_total.find(entry.feature.context_render());
  if (it == context_total.end() || it->second == 0) return 0.0;
  return static_cast<double>(entry.count) / static_cast<double>(it->second);
}

double WordFeatureModel::probability(const FeatureEntry& entry) const {
  const auto it = skeleton_total.find(entry.feature.render(false));
  if (it == skeleton_total.end() || it->second == 0) return 0.0;
  return static_cast<double>(entry.count) / static_cast<double>(it->second);
}

std::string WordFeatureModel::backoff_word(const std::string& pos) const {
  const auto it = pos_backoff.find(pos);
  if (it == pos_backoff.end()) return pos;
  return it->second;
}

namespace {

NodeSignature signature_of(const DependencyTree& tree, int index) {
  const Token& tok = tree.token_at(index);
  NodeSignature sig;
  const auto it = tree.label_of.find(index);
  if (it != tree.label_of.end()) {
    sig.label = it->second;
  } else {
    sig.word = tok.word;
  }
  sig.pos = tok.pos;
  return sig;
}

}  // namespace

std::vector<SubTree> extract_subtrees(const DependencyTree& tree) {
  std::vector<SubTree> out;
  out.reserve(tree.tokens.size());
  for (const Token& tok : tree.tokens) {
    SubTree st;
    st.shape.node = signature_of(tree, tok.index);
    st.shape.deprel = tok.deprel;
    if (tok.head == 0) {
      st.shape.root_parent = true;
    } else {
      st.shape.parent = signature_of(tree, tok.head);
    }
    for (int child : tree.children_of(tok.index)) {
      st.shape.children.push_back(
          {signature_of(tree, child), tree.token_at(child).deprel});
      if (child < tok.index) ++st.head_slot;
    }
    out.push_back(std::move(st));
  }
  return out;
}

DependencyFeature linearize_feature(const SubTree& st) {
  return st.shape.skeleton();
}

FeatureModel train_feature_model(const std::vector<DependencyTree>& trees) {
  FeatureModel model;
  for (const auto& tree : trees) {
    for (const auto& st : extract_subtrees(tree)) {
      const DependencyFeature feature = linearize_feature(st);
      auto& entry = model.features[feature.render(false)];
      if (entry.count == 0) entry.feature = feature;
      ++entry.count;
      ++entry.slot_counts[st.head_slot];
      ++model.context_total[feature.context_render()];
    }
  }
  return model;
}

WordFeatureModel train_word_features(
    const std::vector<DependencyTree>& trees) {
  WordFeatureModel model;
  std::map<std::string, std::map<std::string, long long>> tag_words;
  for (const auto& tree : trees) {
    for (const auto& st : extract_subtrees(tree)) {
      auto& entry = model.features[st.shape.render(true)];
      if (entry.count == 0) entry.feature = st.shape;
      ++entry.count;
      ++entry.slot_counts[st.head_slot];
      ++model.skeleton_total[st.shape.render(false)];
    }
    for (const Token& tok : tree.tokens) {
      if (tree.label_of.count(tok.index)) continue;
      ++tag_words[tok.pos][tok.word];
    }
  }
  for (const auto& [tag, words] : tag_words) {
    std::string best;
    long long best_count = -1;
    for (const auto& [word, count] : words) {
      if (count > best_count) {
        best = word;
        best_count = count;
      }
    }
    model.pos_backoff[tag] = best;
  }
  return model;
}

}  // namespace depgen
