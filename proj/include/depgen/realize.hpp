#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depgen/corpus.hpp"
#include "depgen/features.hpp"
#include "depgen/ngram.hpp"
#include "depgen/treegen.hpp"

namespace depgen {

enum class WordOrigin { kWordFeature, kLabelValue, kPosBackoff };

struct LexNode {
  std::string word;  // the MR value verbatim for label nodes
  std::string pos;
  WordOrigin origin = WordOrigin::kWordFeature;
  std::optional<MeaningLabel> label;
  int parent = -1;
  std::vector<int> children;
  int head_slot = 0;
};

struct LexTree {
  std::vector<LexNode> nodes;  // index 0 is the root
  double lex_log_prob = 0.0;   // sum of per-node word choice log probabilities
  double tree_score = 0.0;     // carried over from the source tree
};

// Token of a realized phrase. The language model sees labels by their
// rendered form, exactly as during training; the surface keeps the value.
struct RealToken {
  std::string surface;
  LmToken lm;
};

struct Phrase {
  std::vector<RealToken> tokens;
  double log_score = 0.0;
};

struct GeneratedSentence {
  std::string sentence;
  double score = 0.0;       // realization score (plus weighted tree score)
  double tree_score = 0.0;  // structure score of the source tree
};

struct GenOptions {
  int beam = 20;
  int candidates = 20;
  int top_k = 5;
  double threshold = 0.0;
  std::size_t max_exhaustive = 8;
  int perm_cap = 7;
  int node_cap = 100;
  double tree_score_weight = 0.0;
};

// Word choices for every tree node, combined into the top-C whole-tree
// assignments ranked by the product of per-node probabilities.
std::vector<LexTree> lexicalize(const ScoredTree& tree,
                                const WordFeatureModel& word_model,
                                const MeaningRepresentation& mr,
                                int max_candidates);

// Score the transition chain over unit boundaries: each unit's first token
// is scored against the first/last tokens of the preceding units.
double junction_score(const std::vector<Phrase>& units,
                      const std::vector<int>& order, const TrigramLM& lm);

// Bottom-up word ordering: per node, all orderings of the head and its
// child phrases are scored when they fit under perm_cap, otherwise the
// stored surface order is used.
Phrase linearize(const LexTree& tree, const TrigramLM& lm, int perm_cap);

struct TrainedModel;

// Full pipeline for one meaning representation: plan, build trees,
// lexicalize, linearize, deduplicate, rank. Returns every distinct
// sentence; callers truncate to top_k.
std::vector<GeneratedSentence> generate(const TrainedModel& model,
                                        const MeaningRepresentation& mr,
                                        const GenOptions& options,
                                        GenStats* stats = nullptr,
                                        std::vector<std::string>* trace = nullptr);

}  // namespace depgen
