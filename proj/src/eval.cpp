#include "depgen/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "depgen/align.hpp"
#include "depgen/error.hpp"

namespace depgen {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (unsigned char c : text) {
    lowered.push_back(static_cast<char>(std::tolower(c)));
  }
  std::vector<std::string> out;
  std::stringstream ss(lowered);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

using NgramCounts = std::map<std::vector<std::string>, long long>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i,
                                      tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace

double bleu4(const std::vector<std::string>& candidates,
             const std::vector<std::vector<std::string>>& references,
             bool smooth) {
  if (candidates.empty()) {
    throw DepgenError("empty candidate list");
  }
  if (candidates.size() != references.size()) {
    throw DepgenError("candidate and reference counts differ");
  }
  long long matched[5] = {0, 0, 0, 0, 0};
  long long total[5] = {0, 0, 0, 0, 0};
  long long cand_len = 0;
  long long ref_len = 0;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (references[i].empty()) {
      throw DepgenError("empty reference list for candidate " +
                        std::to_string(i));
    }
    const auto cand = tokenize(candidates[i]);
    std::vector<std::vector<std::string>> refs;
    refs.reserve(references[i].size());
    for (const auto& r : references[i]) refs.push_back(tokenize(r));

    cand_len += static_cast<long long>(cand.size());
    long long closest = static_cast<long long>(refs.front().size());
    for (const auto& r : refs) {
      const long long len = static_cast<long long>(r.size());
      const long long cur = std::llabs(closest -
                                       static_cast<long long>(cand.size()));
      const long long alt = std::llabs(len -
                                       static_cast<long long>(cand.size()));
      if (alt < cur || (alt == cur && len < closest)) closest = len;
    }
    ref_len += closest;

    for (int n = 1; n <= 4; ++n) {
      const auto cand_counts = count_ngrams(cand, n);
      NgramCounts best_ref;
      for (const auto& r : refs) {
        for (const auto& [gram, count] : count_ngrams(r, n)) {
          best_ref[gram] = std::max(best_ref[gram], count);
        }
      }
      for (const auto& [gram, count] : cand_counts) {
        const auto it = best_ref.find(gram);
        if (it != best_ref.end()) matched[n] += std::min(count, it->second);
        total[n] += count;
      }
    }
  }

  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    long long m = matched[n];
    long long t = total[n];
    if (smooth && n > 1) {
      m += 1;
      t += 1;
    }
    if (m == 0 || t == 0) return 0.0;
    log_sum += 0.25 * std::log(static_cast<double>(m) /
                               static_cast<double>(t));
  }
  if (cand_len == 0) return 0.0;
  const double bp =
      cand_len > ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(cand_len));
  return bp * std::exp(log_sum);
}

SlotError slot_error(const std::string& sentence,
                     const MeaningRepresentation& mr) {
  SlotError result;
  std::vector<std::pair<MeaningLabel, std::string>> slots;
  for (const auto& label : all_candidate_labels(mr)) {
    const auto value = mr.value_of(label);
    if (value) slots.emplace_back(label, *value);
  }
  result.total = static_cast<long long>(slots.size());
  if (result.total == 0) {
    throw DepgenError("meaning representation has no slots");
  }

  std::vector<AlignedItem> items;
  for (const auto& word : tokenize(sentence)) {
    AlignedItem item;
    item.word = word;
    items.push_back(std::move(item));
  }
  AlignmentRecord record;
  const auto aligned = align_items(std::move(items), mr, &record);
  result.missing = static_cast<long long>(record.unmatched.size());

  // Value spans surviving the first pass are redundant mentions.
  struct Candidate {
    int start;
    int len;
    int slot;
  };
  const int n = static_cast<int>(aligned.size());
  std::vector<Candidate> candidates;
  for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
    const auto value_tokens = [&] {
      std::stringstream ss(slots[s].second);
      std::vector<std::string> out;
      std::string tok;
      while (ss >> tok) out.push_back(tok);
      return out;
    }();
    for (int len = 1; len <= std::max<int>(2, value_tokens.size()); ++len) {
      for (int start = 0; start + len <= n; ++start) {
        std::vector<std::string> span;
        bool all_words = true;
        for (int k = start; k < start + len; ++k) {
          if (aligned[k].is_label()) {
            all_words = false;
            break;
          }
          span.push_back(aligned[k].word);
        }
        if (!all_words) continue;
        if (value_matches_span(slots[s].second, span)) {
          candidates.push_back(Candidate{start, len, s});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.len != b.len) return a.len > b.len;
              if (a.start != b.start) return a.start < b.start;
              return a.slot < b.slot;
            });
  std::vector<bool> taken(n, false);
  for (const auto& cand : candidates) {
    bool overlaps = false;
    for (int k = cand.start; k < cand.start + cand.len; ++k) {
      if (taken[k]) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) continue;
    for (int k = cand.start; k < cand.start + cand.len; ++k) taken[k] = true;
    ++result.redundant;
  }

  result.err = static_cast<double>(result.redundant + result.missing) /
               static_cast<double>(result.total);
  return result;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["bleu4"] = bleu * 100.0;
  doc["err"] = slots.err;
  doc["redundant"] = slots.redundant;
  doc["missing"] = slots.missing;
  doc["total_slots"] = slots.total;
  nlohmann::ordered_json per = nlohmann::ordered_json::array();
  for (const auto& s : per_scenario) {
    per.push_back({{"scenario", s.scenario},
                   {"err", s.slots.err},
                   {"redundant", s.slots.redundant},
                   {"missing", s.slots.missing},
                   {"total", s.slots.total}});
  }
  doc["per_scenario"] = std::move(per);
  return doc.dump(2);
}

}  // namespace depgen
