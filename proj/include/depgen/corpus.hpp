#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depgen/label.hpp"

namespace depgen {

// One field-value pair of a record, e.g. arg1 = "pink4".
struct FieldValue {
  std::string field;
  std::string value;
};

struct Record {
  std::string record_type;
  std::vector<FieldValue> fields;
};

// Generation input: an ordered set of records with field-value pairs.
struct MeaningRepresentation {
  std::vector<Record> records;

  // Value of the slot addressed by a label, if the label names an existing
  // (record occurrence, field).
  std::optional<std::string> value_of(const MeaningLabel& label) const;
};

// One token of a parsed sentence. `head` is the 1-based index of the parent
// token, 0 for the root.
struct Token {
  int index = 0;
  std::string word;
  std::string pos;
  int head = 0;
  std::string deprel;
};

struct DependencyTree {
  std::vector<Token> tokens;
  // Token index -> meaning label, populated by delexicalization.
  std::map<int, MeaningLabel> label_of;

  const Token& token_at(int index) const { return tokens.at(index - 1); }
  int root_index() const;
  std::vector<int> children_of(int index) const;  // surface order
};

// A training or test unit: one MR plus its reference sentences and their
// parse trees (references and trees are empty at test time).
struct Scenario {
  std::string id;
  MeaningRepresentation mr;
  std::vector<std::string> references;
  std::vector<DependencyTree> parsed_trees;
};

// Reads newline-delimited JSON scenarios. Validates every invariant; errors
// name the scenario id and offending field. When `require_trees` is set,
// every scenario must pair each reference with a tree.
std::vector<Scenario> load_scenarios(const std::string& path,
                                     bool require_trees = false);

// Reads CoNLL-U blocks (blank-line separated); only ID, FORM, UPOS, HEAD and
// DEPREL columns are used. Rejects self-loops, cycles, multiple roots and
// non-contiguous IDs.
std::vector<DependencyTree> load_conllu(const std::string& path);

// Attaches externally parsed trees to scenarios in reference order across
// the whole scenario list.
void attach_trees(std::vector<Scenario>& scenarios,
                  std::vector<DependencyTree> trees);

// All possible labels of an MR: one per (record type, field) pair in
// record-then-field order, with occurrence indices for repeated types.
std::vector<MeaningLabel> all_candidate_labels(
    const MeaningRepresentation& mr);

// Serializes one scenario back to its JSON-line form (inverse of the loader,
// used by the alignment report and round-trip checks).
std::string scenario_to_json(const Scenario& scenario);

// Validates tree shape: contiguous 1..n ids, no self-loops, single root,
// acyclic head links. Throws DepgenError with `context` in the message.
void validate_tree(const DependencyTree& tree, const std::string& context);

}  // namespace depgen
