#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "depgen/corpus.hpp"
#include "depgen/error.hpp"
#include "toy.hpp"

using namespace depgen;
using depgen::test::make_record;
using depgen::test::make_tree;
using depgen::test::throws_containing;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("scenario loader reads records, references and inline trees") {
  const std::string line =
      R"({"id":"s1","records":[{"type":"pass","fields":{"arg1":"pink4","arg2":"pink7"}}],)"
      R"("references":["pink4 passes to pink7"],)"
      R"("trees":[[[1,"pink4","NNP",2,"nsubj"],[2,"passes","VBZ",0,"root"],)"
      R"([3,"to","IN",4,"case"],[4,"pink7","NNP",2,"obl"]]]})";
  const auto path = write_temp("depgen_corpus_basic.jsonl", line + "\n");
  const auto scenarios = load_scenarios(path, true);
  REQUIRE(scenarios.size() == 1);
  const Scenario& s = scenarios[0];
  CHECK(s.id == "s1");
  REQUIRE(s.mr.records.size() == 1);
  CHECK(s.mr.records[0].record_type == "pass");
  REQUIRE(s.mr.records[0].fields.size() == 2);
  CHECK(s.mr.records[0].fields[0].field == "arg1");
  CHECK(s.mr.records[0].fields[1].value == "pink7");
  REQUIRE(s.references.size() == 1);
  REQUIRE(s.parsed_trees.size() == 1);
  const DependencyTree& tree = s.parsed_trees[0];
  REQUIRE(tree.tokens.size() == 4);
  CHECK(tree.tokens[1].word == "passes");
  CHECK(tree.tokens[1].head == 0);
  CHECK(tree.root_index() == 2);
  CHECK(tree.children_of(2) == std::vector<int>{1, 4});
  std::remove(path.c_str());
}

TEST_CASE("scenario serializer round trips through the loader") {
  const auto& original = test::toy_scenarios();
  std::string text;
  for (const auto& s : original) text += scenario_to_json(s) + "\n";
  const auto path = write_temp("depgen_corpus_roundtrip.jsonl", text);
  const auto reloaded = load_scenarios(path, true);
  REQUIRE(reloaded.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(scenario_to_json(reloaded[i]) == scenario_to_json(original[i]));
  }
  std::remove(path.c_str());
}

TEST_CASE("candidate labels keep record order and occurrence indices") {
  MeaningRepresentation mr;
  mr.records.push_back(make_record("pass", {{"arg1", "a"}, {"arg2", "b"}}));
  mr.records.push_back(make_record("kick", {{"arg1", "c"}}));
  mr.records.push_back(make_record("pass", {{"arg1", "d"}}));
  const auto labels = all_candidate_labels(mr);
  REQUIRE(labels.size() == 4);
  CHECK(labels[0] == MeaningLabel{"pass", "arg1", 0});
  CHECK(labels[1] == MeaningLabel{"pass", "arg2", 0});
  CHECK(labels[2] == MeaningLabel{"kick", "arg1", 0});
  CHECK(labels[3] == MeaningLabel{"pass", "arg1", 1});
}

TEST_CASE("value_of resolves record occurrences") {
  MeaningRepresentation mr;
  mr.records.push_back(make_record("pass", {{"arg1", "a"}}));
  mr.records.push_back(make_record("pass", {{"arg1", "d"}}));
  CHECK(mr.value_of({"pass", "arg1", 0}) == "a");
  CHECK(mr.value_of({"pass", "arg1", 1}) == "d");
  CHECK_FALSE(mr.value_of({"pass", "arg1", 2}).has_value());
  CHECK_FALSE(mr.value_of({"pass", "arg2", 0}).has_value());
  CHECK_FALSE(mr.value_of({"kick", "arg1", 0}).has_value());
}

TEST_CASE("tree validation rejects malformed trees") {
  CHECK(throws_containing(
      [] {
        auto t = make_tree({{1, "a", "X", 1, "dep"}, {2, "b", "X", 0, "root"}});
        validate_tree(t, "t");
      },
      "self-loop"));
  CHECK(throws_containing(
      [] {
        auto t = make_tree({{1, "a", "X", 0, "root"}, {2, "b", "X", 0, "root"}});
        validate_tree(t, "t");
      },
      "multiple roots"));
  CHECK(throws_containing(
      [] {
        auto t = make_tree({{1, "a", "X", 2, "dep"},
                            {2, "b", "X", 1, "dep"},
                            {3, "c", "X", 0, "root"}});
        validate_tree(t, "t");
      },
      "cyclic"));
  CHECK(throws_containing(
      [] {
        auto t = make_tree({{1, "a", "X", 0, "root"}, {3, "b", "X", 1, "dep"}});
        validate_tree(t, "t");
      },
      "non-contiguous"));
  CHECK(throws_containing(
      [] {
        auto t = make_tree({{1, "a", "X", 0, "root"}, {2, "b", "X", 5, "dep"}});
        validate_tree(t, "t");
      },
      "head out of range"));
  CHECK(throws_containing(
      [] {
        DependencyTree t;
        validate_tree(t, "t");
      },
      "empty tree"));
}

TEST_CASE("scenario loader reports invalid input with the scenario id") {
  auto load_line = [](const std::string& line) {
    const auto path = write_temp("depgen_corpus_invalid.jsonl", line + "\n");
    try {
      load_scenarios(path);
    } catch (...) {
      std::remove(path.c_str());
      throw;
    }
    std::remove(path.c_str());
  };
  CHECK(throws_containing([&] { load_line("{not json"); }, "malformed JSON"));
  CHECK(throws_containing([&] { load_line(R"({"records":[]})"); },
                          "missing string 'id'"));
  CHECK(throws_containing([&] { load_line(R"({"id":"x","records":[]})"); },
                          "at least one record"));
  CHECK(throws_containing(
      [&] {
        load_line(R"({"id":"x","records":[{"type":"r","fields":{"a":""}}]})");
      },
      "empty value"));
  CHECK(throws_containing(
      [&] {
        load_line(R"({"id":"x","records":[{"type":"r","fields":{"a@b":"v"}}]})");
      },
      "reserved character"));
  CHECK(throws_containing(
      [&] {
        load_line(R"({"id":"x","records":[{"type":"r","fields":{"a":1}}]})");
      },
      "must be a string"));
}

TEST_CASE("loader enforces reference and tree pairing when required") {
  const std::string line =
      R"({"id":"x","records":[{"type":"r","fields":{"a":"v"}}],)"
      R"("references":["v here","v there"],)"
      R"("trees":[[[1,"v","NNP",0,"root"]]]})";
  const auto path = write_temp("depgen_corpus_pairing.jsonl", line + "\n");
  CHECK_NOTHROW(load_scenarios(path));
  CHECK(throws_containing([&] { load_scenarios(path, true); },
                          "2 references but 1 trees"));
  std::remove(path.c_str());
}

TEST_CASE("conllu loader reads blocks and skips ranged and decimal ids") {
  const std::string text =
      "# sent_id = 1\n"
      "1\tpink4\tpink4\tNNP\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tpasses\tpass\tVBZ\t_\t_\t0\troot\t_\t_\n"
      "2-3\tto-pink7\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "3\tto\tto\tIN\t_\t_\t4\tcase\t_\t_\n"
      "3.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "4\tpink7\tpink7\tNNP\t_\t_\t2\tobl\t_\t_\n"
      "\n"
      "1\tball\tball\tNN\t_\t_\t0\troot\t_\t_\n"
      "\n";
  const auto path = write_temp("depgen_corpus_blocks.conllu", text);
  const auto trees = load_conllu(path);
  REQUIRE(trees.size() == 2);
  REQUIRE(trees[0].tokens.size() == 4);
  CHECK(trees[0].tokens[2].word == "to");
  CHECK(trees[0].tokens[2].pos == "IN");
  CHECK(trees[0].tokens[2].head == 4);
  CHECK(trees[0].tokens[2].deprel == "case");
  CHECK(trees[1].tokens.size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("conllu loader rejects malformed blocks") {
  const auto bad_cols = write_temp("depgen_corpus_badcols.conllu",
                                   "1\ta\ta\tX\t_\t2\n\n");
  CHECK(throws_containing([&] { load_conllu(bad_cols); },
                          "at least 8 columns"));
  std::remove(bad_cols.c_str());

  const auto two_roots = write_temp(
      "depgen_corpus_tworoots.conllu",
      "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n\n");
  CHECK(throws_containing([&] { load_conllu(two_roots); }, "multiple roots"));
  std::remove(two_roots.c_str());
}

TEST_CASE("attach_trees pairs trees with references across scenarios") {
  Scenario a;
  a.id = "a";
  a.mr.records.push_back(make_record("r", {{"f", "v"}}));
  a.references = {"one", "two"};
  Scenario b = a;
  b.id = "b";
  b.references = {"three"};
  std::vector<Scenario> scenarios{a, b};

  std::vector<DependencyTree> trees;
  trees.push_back(make_tree({{1, "one", "X", 0, "root"}}));
  trees.push_back(make_tree({{1, "two", "X", 0, "root"}}));
  trees.push_back(make_tree({{1, "three", "X", 0, "root"}}));
  attach_trees(scenarios, trees);
  REQUIRE(scenarios[0].parsed_trees.size() == 2);
  REQUIRE(scenarios[1].parsed_trees.size() == 1);
  CHECK(scenarios[0].parsed_trees[1].tokens[0].word == "two");
  CHECK(scenarios[1].parsed_trees[0].tokens[0].word == "three");

  std::vector<DependencyTree> short_trees;
  short_trees.push_back(make_tree({{1, "one", "X", 0, "root"}}));
  CHECK(throws_containing(
      [&] { attach_trees(scenarios, short_trees); },
      "1 trees but scenarios have 3 references"));
}

TEST_CASE("missing scenario file raises a clear error") {
  CHECK(throws_containing(
      [] { load_scenarios("/nonexistent/depgen.jsonl"); },
      "cannot open scenario file"));
  CHECK(throws_containing([] { load_conllu("/nonexistent/depgen.conllu"); },
                          "cannot open CoNLL-U file"));
}
