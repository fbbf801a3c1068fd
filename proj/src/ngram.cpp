#include "depgen/ngram.hpp"

#include <cmath>

namespace depgen {

const LmToken& TrigramLM::bos() {
  static const LmToken tok{"<s>", "<s>"};
  return tok;
}

const LmToken& TrigramLM::eos() {
  static const LmToken tok{"</s>", "</s>"};
  return tok;
}

double TrigramLM::unigram_f(const LmToken& w) const {
  const auto it = uni.find(w);
  const long long c = it == uni.end() ? 0 : it->second;
  return static_cast<double>(c + 1) /
         static_cast<double>(total_tokens + vocabulary_size());
}

double TrigramLM::bigram_f(const LmToken& v, const LmToken& w) const {
  const auto ctx = bi_context.find(v);
  if (ctx == bi_context.end() || ctx->second == 0) return unigram_f(w);
  const auto it = bi.find({v, w});
  const long long c = it == bi.end() ? 0 : it->second;
  return static_cast<double>(c) / static_cast<double>(ctx->second);
}

double TrigramLM::trigram_f(const LmToken& u, const LmToken& v,
                            const LmToken& w) const {
  const auto ctx = tri_context.find({u, v});
  if (ctx == tri_context.end() || ctx->second == 0) return bigram_f(v, w);
  const auto it = tri.find({u, v, w});
  const long long c = it == tri.end() ? 0 : it->second;
  return static_cast<double>(c) / static_cast<double>(ctx->second);
}

double TrigramLM::conditional(const LmToken* u, const LmToken* v,
                              const LmToken& w) const {
  if (u && v) {
    return kW3 * trigram_f(*u, *v, w) + kW2 * bigram_f(*v, w) +
           kW1 * unigram_f(w);
  }
  if (v) {
    return (kW3 + kW2) * bigram_f(*v, w) + kW1 * unigram_f(w);
  }
  return unigram_f(w);
}

TrigramLM train_trigram(const std::vector<LmSeq>& sentences) {
  TrigramLM lm;
  for (const auto& sent : sentences) {
    if (sent.empty()) continue;
    LmSeq padded;
    padded.reserve(sent.size() + 3);
    padded.push_back(TrigramLM::bos());
    padded.push_back(TrigramLM::bos());
    padded.insert(padded.end(), sent.begin(), sent.end());
    padded.push_back(TrigramLM::eos());
    for (std::size_t i = 0; i < padded.size(); ++i) {
      ++lm.uni[padded[i]];
      ++lm.total_tokens;
      if (i + 1 < padded.size()) {
        ++lm.bi[{padded[i], padded[i + 1]}];
        ++lm.bi_context[padded[i]];
      }
      if (i + 2 < padded.size()) {
        ++lm.tri[{padded[i], padded[i + 1], padded[i + 2]}];
        ++lm.tri_context[{padded[i], padded[i + 1]}];
      }
    }
  }
  return lm;
}

double trigram_score(const TrigramLM& lm, const LmSeq& seq) {
  const LmToken* u = &TrigramLM::bos();
  const LmToken* v = &TrigramLM::bos();
  double total = 0.0;
  for (const auto& w : seq) {
    total += std::log(lm.conditional(u, v, w));
    u = v;
    v = &w;
  }
  total += std::log(lm.conditional(u, v, TrigramLM::eos()));
  return total;
}

}  // namespace depgen
