#include "depgen/realize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "depgen/error.hpp"
#include "depgen/model.hpp"
#include "depgen/planner.hpp"

namespace depgen {

namespace {

DependencyFeature node_skeleton(const ScoredTree& tree, int index) {
  const GenNode& node = tree.nodes[index];
  DependencyFeature f;
  if (node.parent < 0) {
    f.root_parent = true;
  } else {
    f.parent = tree.nodes[node.parent].signature.erased();
  }
  f.deprel = node.incoming_deprel;
  f.node = node.signature.erased();
  for (int child : node.children) {
    f.children.push_back({tree.nodes[child].signature.erased(),
                          tree.nodes[child].incoming_deprel});
  }
  return f;
}

struct WordChoice {
  std::string word;
  WordOrigin origin = WordOrigin::kWordFeature;
  double log_prob = 0.0;
};

std::vector<WordChoice> node_choices(const ScoredTree& tree, int index,
                                     const WordFeatureModel& word_model,
                                     const MeaningRepresentation& mr) {
  const GenNode& node = tree.nodes[index];
  if (node.signature.label) {
    const auto value = mr.value_of(*node.signature.label);
    if (!value) {
      throw DepgenError("no value for label " +
                        node.signature.label->render() +
                        " in meaning representation");
    }
    return {WordChoice{*value, WordOrigin::kLabelValue, 0.0}};
  }
  const std::string query = node_skeleton(tree, index).render(false);
  struct Match {
    const FeatureEntry* entry;
  };
  std::vector<const FeatureEntry*> matches;
  for (const auto& [key, entry] : word_model.features) {
    if (entry.feature.render(false) == query) matches.push_back(&entry);
  }
  if (matches.empty()) {
    return {WordChoice{word_model.backoff_word(node.signature.pos),
                       WordOrigin::kPosBackoff, 0.0}};
  }
  std::sort(matches.begin(), matches.end(),
            [](const FeatureEntry* a, const FeatureEntry* b) {
              if (a->count != b->count) return a->count > b->count;
              return a->feature.render(true) < b->feature.render(true);
            });
  std::vector<WordChoice> out;
  out.reserve(matches.size());
  for (const FeatureEntry* entry : matches) {
    WordChoice choice;
    choice.word = entry->feature.node.word;
    choice.origin = WordOrigin::kWordFeature;
    choice.log_prob = std::log(word_model.probability(*entry));
    out.push_back(std::move(choice));
  }
  return out;
}

}  // namespace

std::vector<LexTree> lexicalize(const ScoredTree& tree,
                                const WordFeatureModel& word_model,
                                const MeaningRepresentation& mr,
                                int max_candidates) {
  const int n = tree.node_count();
  std::vector<std::vector<WordChoice>> choices;
  choices.reserve(n);
  for (int i = 0; i < n; ++i) {
    choices.push_back(node_choices(tree, i, word_model, mr));
  }

  // Best-first walk over per-node choice vectors, largest product first.
  struct State {
    double score;
    std::vector<int> picks;
  };
  auto worse = [](const State& a, const State& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.picks > b.picks;
  };
  std::priority_queue<State, std::vector<State>, decltype(worse)> queue(worse);
  std::set<std::vector<int>> seen;
  double base = 0.0;
  for (const auto& opts : choices) base += opts.front().log_prob;
  queue.push(State{base, std::vector<int>(n, 0)});
  seen.insert(queue.top().picks);

  std::vector<LexTree> out;
  while (!queue.empty() &&
         out.size() < static_cast<std::size_t>(std::max(max_candidates, 1))) {
    const State state = queue.top();
    queue.pop();
    LexTree lex;
    lex.lex_log_prob = state.score;
    lex.tree_score = tree.score;
    lex.nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
      const GenNode& src = tree.nodes[i];
      const WordChoice& choice = choices[i][state.picks[i]];
      LexNode node;
      node.word = choice.word;
      node.pos = src.signature.pos;
      node.origin = choice.origin;
      node.label = src.signature.label;
      node.parent = src.parent;
      node.children = src.children;
      node.head_slot = src.head_slot;
      lex.nodes.push_back(std::move(node));
    }
    out.push_back(std::move(lex));
    for (int i = 0; i < n; ++i) {
      if (state.picks[i] + 1 >=
          static_cast<int>(choices[i].size())) {
        continue;
      }
      State next = state;
      next.score += choices[i][next.picks[i] + 1].log_prob -
                    choices[i][next.picks[i]].log_prob;
      ++next.picks[i];
      if (seen.insert(next.picks).second) queue.push(next);
    }
  }
  return out;
}

double junction_score(const std::vector<Phrase>& units,
                      const std::vector<int>& order, const TrigramLM& lm) {
  const LmToken* u = nullptr;
  const LmToken* v = nullptr;
  double score = 0.0;
  for (int index : order) {
    const Phrase& phrase = units[index];
    score += std::log(lm.conditional(u, v, phrase.tokens.front().lm));
    if (phrase.tokens.size() == 1) {
      u = v;
      v = &phrase.tokens.front().lm;
    } else {
      u = &phrase.tokens.front().lm;
      v = &phrase.tokens.back().lm;
    }
  }
  return score;
}

namespace {

Phrase phrase_of(const LexTree& tree, int index, const TrigramLM& lm,
                 int perm_cap) {
  const LexNode& node = tree.nodes[index];
  Phrase head;
  head.tokens.push_back(RealToken{
      node.word,
      LmToken{node.label ? node.label->render() : node.word, node.pos}});

  std::vector<Phrase> units;
  double children_score = 0.0;
  const int slot =
      std::min(node.head_slot, static_cast<int>(node.children.size()));
  for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
    if (i == slot) units.push_back(head);
    Phrase child = phrase_of(tree, node.children[i], lm, perm_cap);
    children_score += child.log_score;
    units.push_back(std::move(child));
  }
  if (slot >= static_cast<int>(node.children.size())) {
    units.push_back(std::move(head));
  }

  const int k = static_cast<int>(units.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> best_order = order;
  double best = junction_score(units, order, lm);
  if (k <= perm_cap) {
    while (std::next_permutation(order.begin(), order.end())) {
      const double score = junction_score(units, order, lm);
      if (score > best) {
        best = score;
        best_order = order;
      }
    }
  }

  Phrase out;
  out.log_score = children_score + best;
  for (int ui : best_order) {
    for (auto& tok : units[ui].tokens) out.tokens.push_back(std::move(tok));
  }
  return out;
}

}  // namespace

Phrase linearize(const LexTree& tree, const TrigramLM& lm, int perm_cap) {
  return phrase_of(tree, 0, lm, perm_cap);
}

std::vector<GeneratedSentence> generate(const TrainedModel& model,
                                        const MeaningRepresentation& mr,
                                        const GenOptions& options,
                                        GenStats* stats,
                                        std::vector<std::string>* trace) {
  const auto labels = all_candidate_labels(mr);
  const ContentPlan plan = plan_content(model.label_model, labels,
                                        options.threshold,
                                        options.max_exhaustive);
  const auto trees = produce_trees(model.feature_model, plan.labels,
                                   options.beam, options.node_cap, stats,
                                   trace);
  std::map<std::string, GeneratedSentence> best;
  for (const auto& tree : trees) {
    for (const auto& lex :
         lexicalize(tree, model.word_model, mr, options.candidates)) {
      const Phrase phrase = linearize(lex, model.trigram, options.perm_cap);
      std::string sentence;
      for (const auto& tok : phrase.tokens) {
        if (!sentence.empty()) sentence += " ";
        sentence += tok.surface;
      }
      GeneratedSentence cand;
      cand.sentence = sentence;
      cand.tree_score = tree.score;
      cand.score = phrase.log_score +
                   options.tree_score_weight * tree.score;
      auto it = best.find(sentence);
      if (it == best.end() || cand.score > it->second.score) {
        best[sentence] = std::move(cand);
      }
    }
  }
  std::vector<GeneratedSentence> out;
  out.reserve(best.size());
  for (auto& [key, cand] : best) out.push_back(std::move(cand));
  std::sort(out.begin(), out.end(),
            [](const GeneratedSentence& a, const GeneratedSentence& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.sentence < b.sentence;
            });
  return out;
}

}  // namespace depgen
