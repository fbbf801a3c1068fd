#include <doctest.h>

#include <string>
#include <vector>

#include "depgen/align.hpp"
#include "depgen/corpus.hpp"
#include "depgen/error.hpp"
#include "toy.hpp"

using namespace depgen;
using depgen::test::make_record;
using depgen::test::make_tree;
using depgen::test::throws_containing;

namespace {

Scenario scenario_with(const std::string& id, Record record,
                       const std::string& reference) {
  Scenario s;
  s.id = id;
  s.mr.records.push_back(std::move(record));
  s.references.push_back(reference);
  return s;
}

}  // namespace

TEST_CASE("number words map to values and digits do not") {
  CHECK(number_word_value("seven") == 7);
  CHECK(number_word_value("Seven") == 7);
  CHECK(number_word_value("zero") == 0);
  CHECK(number_word_value("nineteen") == 19);
  CHECK(number_word_value("twenty-three") == 23);
  CHECK(number_word_value("ninety-nine") == 99);
  CHECK_FALSE(number_word_value("7").has_value());
  CHECK_FALSE(number_word_value("hundred").has_value());
  CHECK_FALSE(number_word_value("twenty three").has_value());
}

TEST_CASE("value span matching folds case and number forms") {
  CHECK(value_matches_span("pink4", {"pink4"}));
  CHECK(value_matches_span("Pink4", {"PINK4"}));
  CHECK(value_matches_span("new york", {"New", "York"}));
  CHECK_FALSE(value_matches_span("new york", {"new"}));
  CHECK(value_matches_span("7", {"seven"}));
  CHECK(value_matches_span("seven", {"7"}));
  CHECK(value_matches_span("21", {"twenty-one"}));
  CHECK(value_matches_span("21", {"twenty", "one"}));
  CHECK(value_matches_span("one hundred", {"100"}));
  CHECK(value_matches_span("101", {"101"}));
  CHECK_FALSE(value_matches_span("101", {"one", "hundred", "one"}));
  CHECK_FALSE(value_matches_span("7", {"eight"}));
}

TEST_CASE("alignment replaces value spans with labels") {
  const auto s = scenario_with(
      "s1", make_record("pass", {{"arg1", "pink4"}, {"arg2", "pink7"}}),
      "pink4 passes to pink7");
  AlignmentRecord record;
  const auto aligned = align_sentence(s, 0, &record);
  REQUIRE(aligned.items.size() == 4);
  CHECK(aligned.items[0].is_label());
  CHECK(aligned.items[0].label->field == "arg1");
  CHECK(aligned.items[0].span_start == 1);
  CHECK(aligned.items[0].span_len == 1);
  CHECK(aligned.items[1].word == "passes");
  CHECK(aligned.items[3].is_label());
  CHECK(aligned.items[3].span_start == 4);
  CHECK(aligned.render() == "[pass;@arg1] passes to [pass;@arg2]");
  CHECK(record.matched.size() == 2);
  CHECK(record.unmatched.empty());

  const auto labels = aligned.label_sequence();
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].field == "arg1");
  CHECK(labels[1].field == "arg2");
}

TEST_CASE("longer value spans win over their prefixes") {
  const auto s = scenario_with(
      "m", make_record("r", {{"a", "big apple pie"}, {"b", "big apple"}}),
      "the big apple pie is here");
  AlignmentRecord record;
  const auto aligned = align_sentence(s, 0, &record);
  REQUIRE(aligned.items.size() == 4);
  CHECK(aligned.items[1].is_label());
  CHECK(aligned.items[1].label->field == "a");
  CHECK(aligned.items[1].span_len == 3);
  REQUIRE(record.unmatched.size() == 1);
  CHECK(record.unmatched[0].first.field == "b");
}

TEST_CASE("leftmost span is taken and repeats stay words") {
  const auto s = scenario_with("m", make_record("r", {{"a", "x"}}),
                               "x and x again");
  const auto aligned = align_sentence(s, 0);
  REQUIRE(aligned.items.size() == 4);
  CHECK(aligned.items[0].is_label());
  CHECK(aligned.items[2].word == "x");
}

TEST_CASE("slots sharing a value are assigned in MR order") {
  const auto s = scenario_with("m",
                               make_record("r", {{"a", "x"}, {"b", "x"}}),
                               "x then x");
  const auto aligned = align_sentence(s, 0);
  REQUIRE(aligned.items.size() == 3);
  CHECK(aligned.items[0].label->field == "a");
  CHECK(aligned.items[2].label->field == "b");
}

TEST_CASE("numeric values match spelled-out spans") {
  const auto s = scenario_with(
      "m", make_record("score", {{"points", "7"}}), "scored seven points");
  const auto aligned = align_sentence(s, 0);
  REQUIRE(aligned.items.size() == 3);
  CHECK(aligned.items[1].is_label());
  CHECK(aligned.items[1].span_len == 1);

  const auto t = scenario_with(
      "m2", make_record("score", {{"points", "21"}}), "scored twenty one");
  const auto aligned2 = align_sentence(t, 0);
  REQUIRE(aligned2.items.size() == 2);
  CHECK(aligned2.items[1].is_label());
  CHECK(aligned2.items[1].span_len == 2);
}

TEST_CASE("alignment is idempotent over already aligned items") {
  const auto s = scenario_with("m", make_record("r", {{"a", "x"}}),
                               "x marks x");
  const auto once = align_sentence(s, 0);
  const auto twice = align_items(once.items, s.mr);
  REQUIRE(twice.size() == once.items.size());
  for (std::size_t i = 0; i < twice.size(); ++i) {
    CHECK(twice[i].is_label() == once.items[i].is_label());
    CHECK(twice[i].word == once.items[i].word);
  }
}

TEST_CASE("reference index bounds are checked") {
  const auto s = scenario_with("m", make_record("r", {{"a", "x"}}), "x");
  CHECK(throws_containing([&] { align_sentence(s, 1); }, "out of range"));
  CHECK(throws_containing([&] { align_sentence(s, -1); }, "out of range"));
}

TEST_CASE("delexicalization marks single-token spans in place") {
  const auto s = scenario_with(
      "s1", make_record("pass", {{"arg1", "pink4"}, {"arg2", "pink7"}}),
      "pink4 passes to pink7");
  const auto tree = make_tree({{1, "pink4", "NNP", 2, "nsubj"},
                               {2, "passes", "VBZ", 0, "root"},
                               {3, "to", "IN", 4, "case"},
                               {4, "pink7", "NNP", 2, "obl"}});
  const auto delex = delexicalize_tree(tree, align_sentence(s, 0));
  REQUIRE(delex.tokens.size() == 4);
  CHECK(delex.label_of.at(1) == MeaningLabel{"pass", "arg1", 0});
  CHECK(delex.label_of.at(4) == MeaningLabel{"pass", "arg2", 0});
  CHECK(delex.tokens[0].head == 2);
  CHECK(delex.tokens[2].head == 4);
}

TEST_CASE("multi-token spans collapse onto their internal head") {
  const auto s = scenario_with(
      "m", make_record("win", {{"team", "new york knicks"}}),
      "the new york knicks win");
  const auto tree = make_tree({{1, "the", "DT", 4, "det"},
                               {2, "new", "NNP", 4, "compound"},
                               {3, "york", "NNP", 4, "compound"},
                               {4, "knicks", "NNP", 5, "nsubj"},
                               {5, "win", "VBP", 0, "root"}});
  const auto delex = delexicalize_tree(tree, align_sentence(s, 0));
  REQUIRE(delex.tokens.size() == 3);
  CHECK(delex.tokens[0].word == "the");
  CHECK(delex.tokens[0].head == 2);
  CHECK(delex.tokens[1].word == "knicks");
  CHECK(delex.tokens[1].head == 3);
  CHECK(delex.tokens[2].head == 0);
  CHECK(delex.label_of.at(2) == MeaningLabel{"win", "team", 0});
  CHECK(delex.label_of.size() == 1);
}

TEST_CASE("children of dropped span tokens reattach to the span head") {
  const auto s = scenario_with(
      "m", make_record("win", {{"team", "york knicks"}}),
      "the very new york knicks win");
  const auto tree = make_tree({{1, "the", "DT", 5, "det"},
                               {2, "very", "RB", 3, "advmod"},
                               {3, "new", "JJ", 4, "amod"},
                               {4, "york", "NNP", 5, "compound"},
                               {5, "knicks", "NNP", 6, "nsubj"},
                               {6, "win", "VBP", 0, "root"}});
  const auto delex = delexicalize_tree(tree, align_sentence(s, 0));
  REQUIRE(delex.tokens.size() == 5);
  CHECK(delex.tokens[2].word == "new");
  CHECK(delex.tokens[2].head == 4);
  CHECK(delex.label_of.at(4) == MeaningLabel{"win", "team", 0});
}

TEST_CASE("non-constituent value spans are rejected") {
  const auto s = scenario_with("bad", make_record("r", {{"v", "b c"}}),
                               "a b c d");
  const auto tree = make_tree({{1, "a", "X", 4, "dep"},
                               {2, "b", "X", 1, "dep"},
                               {3, "c", "X", 4, "dep"},
                               {4, "d", "X", 0, "root"}});
  CHECK(throws_containing(
      [&] { delexicalize_tree(tree, align_sentence(s, 0)); },
      "non-constituent value span for [r;@v] in scenario 'bad'"));
}

TEST_CASE("aligned spans must stay inside the tree") {
  const auto s = scenario_with("m", make_record("r", {{"a", "x"}}),
                               "filler filler x");
  const auto tree = make_tree({{1, "filler", "X", 0, "root"}});
  CHECK(throws_containing(
      [&] { delexicalize_tree(tree, align_sentence(s, 0)); },
      "outside tree"));
}
