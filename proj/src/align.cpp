#include "depgen/align.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "depgen/error.hpp"

namespace depgen {

namespace {

std::string fold(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

const std::map<std::string, int>& number_words() {
  static const std::map<std::string, int> table = [] {
    std::map<std::string, int> t;
    const char* units[] = {"zero", "one",  "two",  "three", "four",
                           "five", "six",  "seven", "eight", "nine",
                           "ten",  "eleven", "twelve", "thirteen", "fourteen",
                           "fifteen", "sixteen", "seventeen", "eighteen",
                           "nineteen"};
    for (int i = 0; i < 20; ++i) t[units[i]] = i;
    const char* tens[] = {"twenty", "thirty", "forty",  "fifty",
                          "sixty",  "seventy", "eighty", "ninety"};
    for (int i = 0; i < 8; ++i) {
      const int base = (i + 2) * 10;
      t[tens[i]] = base;
      for (int u = 1; u <= 9; ++u) {
        t[std::string(tens[i]) + "-" + units[u]] = base + u;
      }
    }
    t["one hundred"] = 100;
    return t;
  }();
  return table;
}

// Parses a folded token sequence as an integer 0-100, via digits or the
// number-word table.
std::optional<int> parse_number(const std::vector<std::string>& tokens) {
  if (tokens.empty() || tokens.size() > 2) return std::nullopt;
  std::string joined = tokens[0];
  for (size_t i = 1; i < tokens.size(); ++i) joined += " " + tokens[i];
  if (tokens.size() == 1) {
    const std::string& t = tokens[0];
    if (!t.empty() && t.size() <= 3 &&
        std::all_of(t.begin(), t.end(), [](unsigned char c) {
          return std::isdigit(c);
        })) {
      const int v = std::stoi(t);
      if (v <= 100) return v;
      return std::nullopt;
    }
  }
  auto it = number_words().find(joined);
  if (it != number_words().end()) return it->second;
  // Two-token compounds like "twenty one".
  if (tokens.size() == 2) {
    auto hi = number_words().find(tokens[0]);
    auto lo = number_words().find(tokens[1]);
    if (hi != number_words().end() && lo != number_words().end() &&
        hi->second >= 20 && hi->second % 10 == 0 && lo->second >= 1 &&
        lo->second <= 9) {
      return hi->second + lo->second;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> number_word_value(const std::string& text) {
  auto it = number_words().find(fold(text));
  if (it != number_words().end()) return it->second;
  return std::nullopt;
}

bool value_matches_span(const std::string& value,
                        const std::vector<std::string>& span_tokens) {
  std::vector<std::string> value_tokens = split_ws(fold(value));
  std::vector<std::string> folded;
  folded.reserve(span_tokens.size());
  for (const auto& t : span_tokens) folded.push_back(fold(t));
  if (value_tokens == folded) return true;
  const auto lhs = parse_number(value_tokens);
  const auto rhs = parse_number(folded);
  return lhs && rhs && *lhs == *rhs;
}

std::vector<MeaningLabel> AlignedSentence::label_sequence() const {
  std::vector<MeaningLabel> out;
  for (const auto& item : items) {
    if (item.is_label()) out.push_back(*item.label);
  }
  return out;
}

std::string AlignedSentence::render() const {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += " ";
    out += item.is_label() ? item.label->render() : item.word;
  }
  return out;
}

std::string AlignmentRecord::to_json() const {
  nlohmann::ordered_json doc;
  doc["scenario"] = scenario;
  doc["ref_index"] = ref_index;
  auto dump = [](const std::vector<std::pair<MeaningLabel, std::string>>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [label, value] : v) {
      arr.push_back({{"label", label.render()}, {"value", value}});
    }
    return arr;
  };
  doc["matched"] = dump(matched);
  doc["unmatched"] = dump(unmatched);
  return doc.dump();
}

std::vector<AlignedItem> align_items(std::vector<AlignedItem> items,
                                     const MeaningRepresentation& mr,
                                     AlignmentRecord* record) {
  struct Slot {
    MeaningLabel label;
    std::string value;
    bool consumed = false;
  };
  std::vector<Slot> slots;
  for (const auto& label : all_candidate_labels(mr)) {
    auto value = mr.value_of(label);
    if (value) slots.push_back(Slot{label, *value});
  }
  // Labels already present consume their slots, so re-alignment is a no-op.
  for (const auto& item : items) {
    if (!item.is_label()) continue;
    for (auto& slot : slots) {
      if (!slot.consumed && slot.label == *item.label) {
        slot.consumed = true;
        break;
      }
    }
  }

  struct Candidate {
    int start;  // item index
    int len;
    int slot;
  };
  std::vector<Candidate> candidates;
  const int n = static_cast<int>(items.size());
  for (int s = 0; s < static_cast<int>(slots.size()); ++s) {
    if (slots[s].consumed) continue;
    std::vector<std::string> value_tokens = split_ws(slots[s].value);
    std::set<int> lens{static_cast<int>(value_tokens.size())};
    if (parse_number(split_ws(fold(slots[s].value)))) {
      lens.insert(1);
      lens.insert(2);
    }
    for (int len : lens) {
      if (len < 1) continue;
      for (int start = 0; start + len <= n; ++start) {
        std::vector<std::string> span;
        bool all_words = true;
        for (int k = start; k < start + len; ++k) {
          if (items[k].is_label()) {
            all_words = false;
            break;
          }
          span.push_back(items[k].word);
        }
        if (!all_words) continue;
        if (value_matches_span(slots[s].value, span)) {
          candidates.push_back(Candidate{start, len, s});
        }
      }
    }
  }
  // Longest spans first, then leftmost, then the slot whose record appears
  // earliest in the MR.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.len != b.len) return a.len > b.len;
              if (a.start != b.start) return a.start < b.start;
              return a.slot < b.slot;
            });

  std::vector<int> span_of(n, -1);  // item index -> accepted candidate
  std::vector<Candidate> accepted;
  for (const auto& cand : candidates) {
    if (slots[cand.slot].consumed) continue;
    bool overlaps = false;
    for (int k = cand.start; k < cand.start + cand.len; ++k) {
      if (span_of[k] >= 0) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) continue;
    slots[cand.slot].consumed = true;
    const int id = static_cast<int>(accepted.size());
    for (int k = cand.start; k < cand.start + cand.len; ++k) span_of[k] = id;
    accepted.push_back(cand);
  }

  std::vector<AlignedItem> out;
  for (int i = 0; i < n; ++i) {
    const int id = span_of[i];
    if (id < 0) {
      out.push_back(items[i]);
      continue;
    }
    if (accepted[id].start != i) continue;  // interior of a span
    AlignedItem item;
    item.label = slots[accepted[id].slot].label;
    item.span_start = i + 1;
    item.span_len = accepted[id].len;
    out.push_back(std::move(item));
  }

  if (record) {
    for (const auto& slot : slots) {
      // Report only slots this call decided about.
      (slot.consumed ? record->matched : record->unmatched)
          .emplace_back(slot.label, slot.value);
    }
  }
  return out;
}

AlignedSentence align_sentence(const Scenario& scenario, int ref_index,
                               AlignmentRecord* record) {
  if (ref_index < 0 ||
      ref_index >= static_cast<int>(scenario.references.size())) {
    throw DepgenError("scenario '" + scenario.id + "': reference index " +
                      std::to_string(ref_index) + " out of range");
  }
  if (record) {
    record->scenario = scenario.id;
    record->ref_index = ref_index;
  }
  std::vector<AlignedItem> items;
  for (const auto& word : split_ws(scenario.references[ref_index])) {
    AlignedItem item;
    item.word = word;
    items.push_back(std::move(item));
  }
  AlignedSentence aligned;
  aligned.items = align_items(std::move(items), scenario.mr, record);
  aligned.source_scenario = scenario.id;
  aligned.ref_index = ref_index;
  return aligned;
}

DependencyTree delexicalize_tree(const DependencyTree& tree,
                                 const AlignedSentence& aligned) {
  const int n = static_cast<int>(tree.tokens.size());
  std::vector<bool> dropped(n + 1, false);
  std::map<int, MeaningLabel> label_at;   // original token index -> label
  std::map<int, int> redirect;            // dropped token -> span head

  for (const auto& item : aligned.items) {
    if (!item.is_label()) continue;
    const int start = item.span_start;
    const int len = item.span_len;
    if (start < 1 || start + len - 1 > n) {
      throw DepgenError("aligned span [" + std::to_string(start) + "," +
                        std::to_string(start + len - 1) +
                        "] outside tree of " + std::to_string(n) + " tokens");
    }
    if (len == 1) {
      label_at[start] = *item.label;
      continue;
    }
    int head = 0;
    int external_heads = 0;
    for (int k = start; k < start + len; ++k) {
      const int h = tree.token_at(k).head;
      if (h < start || h >= start + len) {
        ++external_heads;
        head = k;
      }
    }
    if (external_heads != 1) {
      throw DepgenError("non-constituent value span for " +
                        item.label->render() + " in scenario '" +
                        aligned.source_scenario + "'");
    }
    label_at[head] = *item.label;
    for (int k = start; k < start + len; ++k) {
      if (k == head) continue;
      dropped[k] = true;
      redirect[k] = head;
    }
  }

  // Renumber surviving tokens, reroute heads that pointed into spans.
  std::vector<int> new_index(n + 1, 0);
  int next = 0;
  for (int i = 1; i <= n; ++i) {
    if (!dropped[i]) new_index[i] = ++next;
  }
  DependencyTree out;
  for (int i = 1; i <= n; ++i) {
    if (dropped[i]) continue;
    Token tok = tree.token_at(i);
    int h = tok.head;
    while (h != 0 && dropped[h]) h = redirect[h];
    tok.index = new_index[i];
    tok.head = h == 0 ? 0 : new_index[h];
    out.tokens.push_back(std::move(tok));
  }
  for (const auto& [orig, label] : label_at) {
    out.label_of[new_index[orig]] = label;
  }
  validate_tree(out, "delexicalized tree of scenario '" +
                         aligned.source_scenario + "'");
  return out;
}

}  // namespace depgen
