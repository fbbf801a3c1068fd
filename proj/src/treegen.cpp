#include "depgen/treegen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <json.hpp>

#include "depgen/error.hpp"

namespace depgen {

namespace {

bool signature_matches(const NodeSignature& feature_side,
                       const NodeSignature& node_side) {
  if (feature_side.pos != node_side.pos) return false;
  if (feature_side.label.has_value() != node_side.label.has_value()) {
    return false;
  }
  if (feature_side.label &&
      !feature_side.label->same_slot_type(*node_side.label)) {
    return false;
  }
  return true;
}

bool candidate_order(const GenCandidate& a, const GenCandidate& b) {
  if (a.label_count != b.label_count) return a.label_count > b.label_count;
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.entry->feature.render(false) < b.entry->feature.render(false);
}

void render_node(const ScoredTree& tree, int index, std::string& out) {
  const GenNode& node = tree.nodes[index];
  out += node.signature.render(false);
  if (node.signature.label) {
    out += "~" + std::to_string(node.signature.label->occurrence);
  }
  out += "/" + node.incoming_deprel + "@" + std::to_string(node.head_slot);
  out += "(";
  bool first = true;
  for (int child : node.children) {
    if (!first) out += ",";
    first = false;
    render_node(tree, child, out);
  }
  out += ")";
}

}  // namespace

bool ScoredTree::complete() const {
  if (!remaining_labels.empty()) return false;
  for (const auto& node : nodes) {
    if (!node.expanded) return false;
  }
  return true;
}

int ScoredTree::next_unexpanded() const {
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int index = queue.front();
    queue.pop_front();
    if (!nodes[index].expanded) return index;
    for (int child : nodes[index].children) queue.push_back(child);
  }
  return -1;
}

std::string ScoredTree::canonical() const {
  std::string out;
  if (!nodes.empty()) render_node(*this, 0, out);
  return out;
}

std::optional<std::vector<int>> embed_labels(
    const std::vector<MeaningLabel>& feature_labels,
    const std::vector<MeaningLabel>& remaining) {
  std::vector<int> positions;
  positions.reserve(feature_labels.size());
  std::size_t cursor = 0;
  for (const auto& label : feature_labels) {
    while (cursor < remaining.size() &&
           !remaining[cursor].same_slot_type(label)) {
      ++cursor;
    }
    if (cursor == remaining.size()) return std::nullopt;
    positions.push_back(static_cast<int>(cursor));
    ++cursor;
  }
  return positions;
}

std::vector<GenCandidate> root_candidates(const FeatureModel& model,
                                          const std::vector<MeaningLabel>& plan,
                                          GenStats* stats) {
  std::vector<GenCandidate> out;
  for (const auto& [key, entry] : model.features) {
    if (stats) ++stats->comparisons;
    if (!entry.feature.root_parent) continue;
    const auto labels = entry.feature.labels();
    if (labels.empty() || !labels.front().same_slot_type(plan.front())) {
      continue;
    }
    auto embedding = embed_labels(labels, plan);
    if (!embedding || embedding->front() != 0) continue;
    GenCandidate cand;
    cand.entry = &entry;
    cand.probability = model.probability(entry);
    cand.label_count = static_cast<int>(labels.size());
    cand.consumed = *embedding;
    out.push_back(std::move(cand));
  }
  if (out.empty()) {
    throw DepgenError("no ROOT feature covers first label");
  }
  std::sort(out.begin(), out.end(), candidate_order);
  return out;
}

std::vector<GenCandidate> expansion_candidates(const FeatureModel& model,
                                               const ScoredTree& tree,
                                               int node_index,
                                               GenStats* stats) {
  const GenNode& node = tree.nodes[node_index];
  std::vector<GenCandidate> out;
  for (const auto& [key, entry] : model.features) {
    if (stats) ++stats->comparisons;
    const DependencyFeature& f = entry.feature;
    if (f.deprel != node.incoming_deprel) continue;
    if (node.parent < 0) {
      if (!f.root_parent) continue;
    } else {
      if (f.root_parent) continue;
      if (!signature_matches(f.parent,
                             tree.nodes[node.parent].signature)) {
        continue;
      }
    }
    if (!signature_matches(f.node, node.signature)) continue;
    std::vector<MeaningLabel> child_labels;
    for (const auto& child : f.children) {
      if (child.node.label) child_labels.push_back(*child.node.label);
    }
    auto embedding = embed_labels(child_labels, tree.remaining_labels);
    if (!embedding) continue;
    GenCandidate cand;
    cand.entry = &entry;
    cand.probability = model.probability(entry);
    cand.label_count = static_cast<int>(child_labels.size());
    cand.consumed = *embedding;
    out.push_back(std::move(cand));
  }
  std::sort(out.begin(), out.end(), candidate_order);
  return out;
}

namespace {

ScoredTree seed_tree(const GenCandidate& cand,
                     const std::vector<MeaningLabel>& plan) {
  const DependencyFeature& f = cand.entry->feature;
  ScoredTree tree;
  tree.remaining_labels = plan;
  tree.score = std::log(cand.probability);

  GenNode root;
  root.signature = f.node.erased();
  root.incoming_deprel = f.deprel;
  root.parent = -1;
  root.expanded = true;
  root.head_slot = cand.entry->dominant_slot();
  tree.nodes.push_back(root);

  // Bind plan occurrences to the feature's labels, node label first.
  std::size_t next_consumed = 0;
  if (f.node.label) {
    tree.nodes[0].signature.label =
        plan[cand.consumed[next_consumed++]];
  }
  for (const auto& child : f.children) {
    GenNode gen;
    gen.signature = child.node.erased();
    gen.incoming_deprel = child.deprel;
    gen.parent = 0;
    if (child.node.label) {
      gen.signature.label = plan[cand.consumed[next_consumed++]];
    }
    tree.nodes[0].children.push_back(static_cast<int>(tree.nodes.size()));
    tree.nodes.push_back(std::move(gen));
  }

  std::set<int> used(cand.consumed.begin(), cand.consumed.end());
  std::vector<MeaningLabel> rest;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (!used.count(static_cast<int>(i))) rest.push_back(plan[i]);
  }
  tree.remaining_labels = std::move(rest);
  return tree;
}

ScoredTree apply_expansion(const ScoredTree& base, int node_index,
                           const GenCandidate& cand) {
  ScoredTree tree = base;
  const DependencyFeature& f = cand.entry->feature;
  tree.score += std::log(cand.probability);
  GenNode& node = tree.nodes[node_index];
  node.expanded = true;
  node.head_slot = cand.entry->dominant_slot();
  std::size_t next_consumed = 0;
  std::vector<int> child_indices;
  for (const auto& child : f.children) {
    GenNode gen;
    gen.signature = child.node.erased();
    gen.incoming_deprel = child.deprel;
    gen.parent = node_index;
    if (child.node.label) {
      gen.signature.label =
          tree.remaining_labels[cand.consumed[next_consumed++]];
    }
    child_indices.push_back(static_cast<int>(tree.nodes.size()));
    tree.nodes.push_back(std::move(gen));
  }
  tree.nodes[node_index].children = std::move(child_indices);

  std::set<int> used(cand.consumed.begin(), cand.consumed.end());
  std::vector<MeaningLabel> rest;
  for (std::size_t i = 0; i < tree.remaining_labels.size(); ++i) {
    if (!used.count(static_cast<int>(i))) {
      rest.push_back(tree.remaining_labels[i]);
    }
  }
  tree.remaining_labels = std::move(rest);
  return tree;
}

bool tree_order(const ScoredTree& a, const ScoredTree& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.canonical() < b.canonical();
}

}  // namespace

std::vector<ScoredTree> produce_trees(const FeatureModel& model,
                                      const std::vector<MeaningLabel>& plan,
                                      int beam_width, int node_cap,
                                      GenStats* stats,
                                      std::vector<std::string>* trace) {
  if (plan.empty()) {
    throw DepgenError("no ROOT feature covers first label");
  }
  const std::size_t width = static_cast<std::size_t>(std::max(beam_width, 1));

  auto roots = root_candidates(model, plan, stats);
  if (roots.size() > width) roots.resize(width);

  std::vector<ScoredTree> frontier;
  for (const auto& cand : roots) {
    ScoredTree tree = seed_tree(cand, plan);
    if (trace) {
      trace->push_back(nlohmann::json{
          {"step", "root"},
          {"feature", cand.entry->feature.render(false)},
          {"score", tree.score}}.dump());
    }
    frontier.push_back(std::move(tree));
  }

  std::map<std::string, ScoredTree> completed;
  auto harvest = [&](ScoredTree&& tree) {
    if (!tree.remaining_labels.empty()) return;  // dead end, labels unplaced
    std::string key = tree.canonical();
    auto it = completed.find(key);
    if (it == completed.end() || tree.score > it->second.score) {
      completed[std::move(key)] = std::move(tree);
    }
  };

  for (auto it = frontier.begin(); it != frontier.end();) {
    if (it->next_unexpanded() < 0) {
      harvest(std::move(*it));
      it = frontier.erase(it);
    } else {
      ++it;
    }
  }

  while (!frontier.empty()) {
    if (stats) ++stats->rounds;
    std::vector<ScoredTree> next;
    for (const auto& partial : frontier) {
      const int target = partial.next_unexpanded();
      auto candidates = expansion_candidates(model, partial, target, stats);
      if (candidates.size() > width) candidates.resize(width);
      std::vector<ScoredTree> children;
      if (candidates.empty()) {
        // Nothing in the model covers this node; close it as a leaf.
        ScoredTree leaf = partial;
        leaf.nodes[target].expanded = true;
        children.push_back(std::move(leaf));
      } else {
        for (const auto& cand : candidates) {
          if (stats) ++stats->expansions;
          ScoredTree child = apply_expansion(partial, target, cand);
          if (child.node_count() > node_cap) continue;
          if (trace) {
            trace->push_back(nlohmann::json{
                {"step", "expand"},
                {"node", target},
                {"feature", cand.entry->feature.render(false)},
                {"score", child.score}}.dump());
          }
          children.push_back(std::move(child));
        }
      }
      for (auto& child : children) {
        if (child.next_unexpanded() < 0) {
          harvest(std::move(child));
        } else {
          next.push_back(std::move(child));
        }
      }
    }
    std::sort(next.begin(), next.end(), tree_order);
    if (next.size() > width) next.resize(width);
    frontier = std::move(next);
  }

  std::vector<ScoredTree> out;
  out.reserve(completed.size());
  for (auto& [key, tree] : completed) out.push_back(std::move(tree));
  std::sort(out.begin(), out.end(), tree_order);
  if (out.size() > width) out.resize(width);
  if (out.empty()) {
    throw DepgenError("generation failed for plan");
  }
  return out;
}

}  // namespace depgen
