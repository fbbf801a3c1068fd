#pragma once

#include <compare>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace depgen {

struct LmToken {
  std::string text;
  std::string pos;
  auto operator<=>(const LmToken&) const = default;
};

using LmSeq = std::vector<LmToken>;

// Interpolated trigram model over (word, pos) tokens. Unigram frequencies
// are add-one smoothed against a vocabulary that reserves one slot for
// unknown tokens, so every conditional stays finite and sums to 1.
struct TrigramLM {
  static constexpr double kW3 = 0.6;
  static constexpr double kW2 = 0.3;
  static constexpr double kW1 = 0.1;

  static const LmToken& bos();
  static const LmToken& eos();

  std::map<LmToken, long long> uni;
  std::map<std::pair<LmToken, LmToken>, long long> bi;
  std::map<std::tuple<LmToken, LmToken, LmToken>, long long> tri;
  std::map<LmToken, long long> bi_context;
  std::map<std::pair<LmToken, LmToken>, long long> tri_context;
  long long total_tokens = 0;

  long long vocabulary_size() const {
    return static_cast<long long>(uni.size()) + 1;
  }

  double unigram_f(const LmToken& w) const;
  double bigram_f(const LmToken& v, const LmToken& w) const;
  double trigram_f(const LmToken& u, const LmToken& v, const LmToken& w) const;

  // Interpolated p(w | u, v). Null contexts collapse the higher-order
  // weights onto the orders that remain, so a token with no known left
  // context is scored by its unigram frequency alone.
  double conditional(const LmToken* u, const LmToken* v,
                     const LmToken& w) const;
};

TrigramLM train_trigram(const std::vector<LmSeq>& sentences);

// Chained log probability of the sequence with boundary sentinels.
double trigram_score(const TrigramLM& lm, const LmSeq& seq);

}  // namespace depgen
