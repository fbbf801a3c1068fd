#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depgen/corpus.hpp"
#include "depgen/label.hpp"

namespace depgen {

// One item of an aligned sentence: either a plain word or a meaning label
// standing in for a matched value span.
struct AlignedItem {
  std::optional<MeaningLabel> label;
  std::string word;  // empty when label is set
  // For label items: 1-based start token and length of the matched span in
  // the original sentence.
  int span_start = 0;
  int span_len = 0;

  bool is_label() const { return label.has_value(); }
};

struct AlignedSentence {
  std::vector<AlignedItem> items;
  std::string source_scenario;
  int ref_index = 0;

  std::vector<MeaningLabel> label_sequence() const;
  std::string render() const;  // words and rendered labels joined by spaces
};

// Per-sentence record of which slots matched, for the alignment report.
struct AlignmentRecord {
  std::string scenario;
  int ref_index = 0;
  std::vector<std::pair<MeaningLabel, std::string>> matched;    // label, value
  std::vector<std::pair<MeaningLabel, std::string>> unmatched;  // label, value

  std::string to_json() const;
};

// Replaces maximal token spans equal to MR field values with their labels.
// Longer spans win over shorter, leftmost spans first, and ties between
// labels sharing a value go to the record that appears earlier in the MR.
// Matching is case-insensitive after whitespace normalization and treats
// digit and spelled-out numbers 0-100 as equal.
AlignedSentence align_sentence(const Scenario& scenario, int ref_index,
                               AlignmentRecord* record = nullptr);

// Same matcher over a pre-tokenized item list; existing label items are
// left untouched, which makes alignment idempotent.
std::vector<AlignedItem> align_items(std::vector<AlignedItem> items,
                                     const MeaningRepresentation& mr,
                                     AlignmentRecord* record = nullptr);

// Marks label-bearing tokens on a copy of the tree. Single-token spans mark
// their token; a multi-token span collapses onto its syntactic head (the one
// span token whose head lies outside the span) and re-attaches the children
// of dropped tokens there. Token ids are renumbered to stay contiguous.
DependencyTree delexicalize_tree(const DependencyTree& tree,
                                 const AlignedSentence& aligned);

// True when `value` and the token span are the same text under the matcher's
// equivalence (case folding, whitespace squeeze, number words).
bool value_matches_span(const std::string& value,
                        const std::vector<std::string>& span_tokens);

// Number words "zero".."one hundred" -> value, after case folding. Returns
// nullopt for anything else, including digit strings.
std::optional<int> number_word_value(const std::string& text);

}  // namespace depgen
