#include "depgen/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "depgen/error.hpp"

namespace depgen {

using ordered_json = nlohmann::ordered_json;

std::optional<std::string> MeaningRepresentation::value_of(
    const MeaningLabel& label) const {
  int seen = 0;
  for (const auto& record : records) {
    if (record.record_type != label.record_type) continue;
    if (seen++ != label.occurrence) continue;
    for (const auto& fv : record.fields) {
      if (fv.field == label.field) return fv.value;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

int DependencyTree::root_index() const {
  for (const auto& tok : tokens) {
    if (tok.head == 0) return tok.index;
  }
  return 0;
}

std::vector<int> DependencyTree::children_of(int index) const {
  std::vector<int> out;
  for (const auto& tok : tokens) {
    if (tok.head == index) out.push_back(tok.index);
  }
  return out;
}

void validate_tree(const DependencyTree& tree, const std::string& context) {
  const int n = static_cast<int>(tree.tokens.size());
  if (n == 0) throw DepgenError(context + ": empty tree");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& tok = tree.tokens[i];
    if (tok.index != i + 1) {
      throw DepgenError(context + ": non-contiguous token ids at position " +
                        std::to_string(i + 1));
    }
    if (tok.head == tok.index) {
      throw DepgenError(context + ": self-loop at token " +
                        std::to_string(tok.index));
    }
    if (tok.head < 0 || tok.head > n) {
      throw DepgenError(context + ": head out of range at token " +
                        std::to_string(tok.index));
    }
    if (tok.head == 0) ++roots;
  }
  if (roots == 0) throw DepgenError(context + ": no root token");
  if (roots > 1) throw DepgenError(context + ": multiple roots");
  // Walking to the root from every token must terminate; a cycle traps the
  // walk below n steps only if it never reaches head 0.
  for (const auto& tok : tree.tokens) {
    int cur = tok.index;
    int steps = 0;
    while (cur != 0) {
      cur = tree.tokens[cur - 1].head;
      if (++steps > n) {
        throw DepgenError(context + ": cyclic head links at token " +
                          std::to_string(tok.index));
      }
    }
  }
  for (const auto& [index, label] : tree.label_of) {
    if (index < 1 || index > n) {
      throw DepgenError(context + ": label index " + std::to_string(index) +
                        " outside tree");
    }
  }
}

namespace {

void validate_field_value(const FieldValue& fv, const std::string& context) {
  if (fv.field.empty()) throw DepgenError(context + ": empty field name");
  if (fv.field.find_first_of(";@[]") != std::string::npos) {
    throw DepgenError(context + ": field name '" + fv.field +
                      "' contains a reserved character");
  }
  if (fv.value.empty()) {
    throw DepgenError(context + ": empty value for field '" + fv.field + "'");
  }
}

DependencyTree tree_from_rows(const ordered_json& rows,
                              const std::string& context) {
  DependencyTree tree;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 5) {
      throw DepgenError(context + ": tree row must be [id, form, upos, head, deprel]");
    }
    Token tok;
    tok.index = row[0].get<int>();
    tok.word = row[1].get<std::string>();
    tok.pos = row[2].get<std::string>();
    tok.head = row[3].get<int>();
    tok.deprel = row[4].get<std::string>();
    tree.tokens.push_back(std::move(tok));
  }
  validate_tree(tree, context);
  return tree;
}

Scenario scenario_from_json(const ordered_json& doc, int line_no) {
  Scenario scenario;
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw DepgenError("line " + std::to_string(line_no) +
                      ": scenario missing string 'id'");
  }
  scenario.id = doc["id"].get<std::string>();
  const std::string ctx = "scenario '" + scenario.id + "'";

  if (!doc.contains("records") || !doc["records"].is_array()) {
    throw DepgenError(ctx + ": missing 'records' array");
  }
  for (const auto& rec_json : doc["records"]) {
    Record record;
    if (!rec_json.contains("type") || !rec_json["type"].is_string() ||
        rec_json["type"].get<std::string>().empty()) {
      throw DepgenError(ctx + ": record missing non-empty 'type'");
    }
    record.record_type = rec_json["type"].get<std::string>();
    if (!rec_json.contains("fields") || !rec_json["fields"].is_object()) {
      throw DepgenError(ctx + ": record '" + record.record_type +
                        "' missing 'fields' object");
    }
    std::set<std::string> seen;
    for (const auto& [field, value] : rec_json["fields"].items()) {
      if (!value.is_string()) {
        throw DepgenError(ctx + ": field '" + field + "' value must be a string");
      }
      if (!seen.insert(field).second) {
        throw DepgenError(ctx + ": duplicate field '" + field + "'");
      }
      FieldValue fv{field, value.get<std::string>()};
      validate_field_value(fv, ctx);
      record.fields.push_back(std::move(fv));
    }
    scenario.mr.records.push_back(std::move(record));
  }
  if (scenario.mr.records.empty()) {
    throw DepgenError(ctx + ": MR must contain at least one record");
  }

  if (doc.contains("references")) {
    for (const auto& ref : doc["references"]) {
      if (!ref.is_string()) throw DepgenError(ctx + ": reference must be a string");
      scenario.references.push_back(ref.get<std::string>());
    }
  }
  if (doc.contains("trees")) {
    int tree_no = 0;
    for (const auto& rows : doc["trees"]) {
      ++tree_no;
      scenario.parsed_trees.push_back(tree_from_rows(
          rows, ctx + " tree " + std::to_string(tree_no)));
    }
  }
  return scenario;
}

}  // namespace

std::vector<Scenario> load_scenarios(const std::string& path,
                                     bool require_trees) {
  std::ifstream in(path);
  if (!in) throw DepgenError("cannot open scenario file: " + path);
  std::vector<Scenario> scenarios;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json doc;
    try {
      doc = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DepgenError("line " + std::to_string(line_no) +
                        ": malformed JSON: " + e.what());
    }
    scenarios.push_back(scenario_from_json(doc, line_no));
  }
  if (require_trees) {
    for (const auto& s : scenarios) {
      if (s.references.empty()) {
        throw DepgenError("scenario '" + s.id + "': no references");
      }
      if (s.references.size() != s.parsed_trees.size()) {
        throw DepgenError("scenario '" + s.id + "': " +
                          std::to_string(s.references.size()) +
                          " references but " +
                          std::to_string(s.parsed_trees.size()) + " trees");
      }
    }
  }
  return scenarios;
}

std::vector<DependencyTree> load_conllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DepgenError("cannot open CoNLL-U file: " + path);
  std::vector<DependencyTree> trees;
  DependencyTree current;
  std::string line;
  int block_no = 1;
  auto flush = [&] {
    if (!current.tokens.empty()) {
      validate_tree(current, "CoNLL-U block " + std::to_string(block_no));
      trees.push_back(std::move(current));
      current = DependencyTree{};
      ++block_no;
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() == 1) {
      // Tolerate space-separated input.
      cols.clear();
      std::stringstream ws(line);
      while (ws >> col) cols.push_back(col);
    }
    if (cols.size() < 8) {
      throw DepgenError("CoNLL-U block " + std::to_string(block_no) +
                        ": expected at least 8 columns, got " +
                        std::to_string(cols.size()));
    }
    // Multiword-token and empty-node lines carry ranged or decimal ids.
    if (cols[0].find('-') != std::string::npos ||
        cols[0].find('.') != std::string::npos) {
      continue;
    }
    Token tok;
    try {
      tok.index = std::stoi(cols[0]);
      tok.head = std::stoi(cols[6]);
    } catch (const std::exception&) {
      throw DepgenError("CoNLL-U block " + std::to_string(block_no) +
                        ": non-numeric ID or HEAD column");
    }
    tok.word = cols[1];
    tok.pos = cols[3];
    tok.deprel = cols[7];
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return trees;
}

void attach_trees(std::vector<Scenario>& scenarios,
                  std::vector<DependencyTree> trees) {
  size_t needed = 0;
  for (const auto& s : scenarios) needed += s.references.size();
  if (needed != trees.size()) {
    throw DepgenError("tree file supplies " + std::to_string(trees.size()) +
                      " trees but scenarios have " + std::to_string(needed) +
                      " references");
  }
  size_t next = 0;
  for (auto& s : scenarios) {
    s.parsed_trees.clear();
    for (size_t i = 0; i < s.references.size(); ++i) {
      s.parsed_trees.push_back(std::move(trees[next++]));
    }
  }
}

std::vector<MeaningLabel> all_candidate_labels(
    const MeaningRepresentation& mr) {
  std::vector<MeaningLabel> labels;
  std::map<std::string, int> type_occurrence;
  for (const auto& record : mr.records) {
    const int occurrence = type_occurrence[record.record_type]++;
    for (const auto& fv : record.fields) {
      labels.push_back(MeaningLabel{record.record_type, fv.field, occurrence});
    }
  }
  return labels;
}

std::string scenario_to_json(const Scenario& scenario) {
  ordered_json doc;
  doc["id"] = scenario.id;
  doc["records"] = ordered_json::array();
  for (const auto& record : scenario.mr.records) {
    ordered_json rec;
    rec["type"] = record.record_type;
    ordered_json fields = ordered_json::object();
    for (const auto& fv : record.fields) fields[fv.field] = fv.value;
    rec["fields"] = std::move(fields);
    doc["records"].push_back(std::move(rec));
  }
  doc["references"] = scenario.references;
  doc["trees"] = ordered_json::array();
  for (const auto& tree : scenario.parsed_trees) {
    ordered_json rows = ordered_json::array();
    for (const auto& tok : tree.tokens) {
      rows.push_back({tok.index, tok.word, tok.pos, tok.head, tok.deprel});
    }
    doc["trees"].push_back(std::move(rows));
  }
  return doc.dump();
}

}  // namespace depgen
