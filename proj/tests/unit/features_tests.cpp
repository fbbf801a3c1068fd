#include <doctest.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "depgen/features.hpp"
#include "toy.hpp"

using namespace depgen;
using depgen::test::make_tree;

namespace {

DependencyTree delex_s1() {
  auto tree = make_tree({{1, "pink4", "NNP", 2, "nsubj"},
                         {2, "passes", "VBZ", 0, "root"},
                         {3, "to", "IN", 4, "case"},
                         {4, "pink7", "NNP", 2, "obl"}});
  tree.label_of[1] = MeaningLabel{"pass", "arg1", 0};
  tree.label_of[4] = MeaningLabel{"pass", "arg2", 0};
  return tree;
}

DependencyTree random_tree(std::mt19937& rng) {
  const int n = std::uniform_int_distribution<int>(1, 50)(rng);
  DependencyTree tree;
  const char* tags[] = {"NN", "VB", "JJ", "IN"};
  const char* rels[] = {"nsubj", "obj", "obl", "det", "amod"};
  for (int i = 1; i <= n; ++i) {
    Token tok;
    tok.index = i;
    tok.word = "w" + std::to_string(i);
    tok.pos = tags[std::uniform_int_distribution<int>(0, 3)(rng)];
    tok.head = i == 1 ? 0 : std::uniform_int_distribution<int>(1, i - 1)(rng);
    tok.deprel = i == 1 ? "root"
                        : rels[std::uniform_int_distribution<int>(0, 4)(rng)];
    tree.tokens.push_back(std::move(tok));
  }
  return tree;
}

}  // namespace

TEST_CASE("node and feature rendering is canonical") {
  const auto tree = delex_s1();
  const auto subtrees = extract_subtrees(tree);
  REQUIRE(subtrees.size() == 4);

  CHECK(subtrees[1].shape.render(false) ==
        "ROOT,root -> (VBZ) -> "
        "[[pass;@arg1],(NNP),nsubj],[[pass;@arg2],(NNP),obl]");
  CHECK(subtrees[1].shape.render(true) ==
        "ROOT,root -> (VBZ)=passes -> "
        "[[pass;@arg1],(NNP),nsubj],[[pass;@arg2],(NNP),obl]");
  CHECK(subtrees[1].shape.context_render() == "ROOT,root -> (VBZ)");

  CHECK(subtrees[0].shape.render(false) ==
        "(VBZ),nsubj -> [pass;@arg1],(NNP) -> #");
  CHECK(subtrees[2].shape.render(false) ==
        "[pass;@arg2],(NNP),case -> (IN) -> #");
  CHECK(subtrees[2].shape.render(true) ==
        "[pass;@arg2],(NNP),case -> (IN)=to -> #");
  CHECK(subtrees[3].shape.render(false) ==
        "(VBZ),obl -> [pass;@arg2],(NNP) -> [(IN),case]");
  CHECK(subtrees[3].shape.context_render() ==
        "(VBZ),obl -> [pass;@arg2],(NNP)");
}

TEST_CASE("head slots count children left of the head") {
  const auto subtrees = extract_subtrees(delex_s1());
  CHECK(subtrees[0].head_slot == 0);
  CHECK(subtrees[1].head_slot == 1);
  CHECK(subtrees[2].head_slot == 0);
  CHECK(subtrees[3].head_slot == 1);
}

TEST_CASE("skeletons erase words but keep labels") {
  const auto subtrees = extract_subtrees(delex_s1());
  const auto skel = linearize_feature(subtrees[1]);
  CHECK(skel.render(true) == skel.render(false));
  CHECK(skel.labels().size() == 2);
  CHECK(skel.labels()[0] == MeaningLabel{"pass", "arg1", 0});
}

TEST_CASE("feature labels list the node label before child labels") {
  DependencyFeature f;
  f.node.label = MeaningLabel{"a", "x", 0};
  f.node.pos = "NN";
  f.children.push_back({{MeaningLabel{"b", "y", 0}, "NN", ""}, "obj"});
  const auto labels = f.labels();
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].record_type == "a");
  CHECK(labels[1].record_type == "b");
}

TEST_CASE("every token yields exactly one subtree") {
  std::mt19937 rng(5);
  for (int round = 0; round < 20; ++round) {
    const auto tree = random_tree(rng);
    CHECK(extract_subtrees(tree).size() == tree.tokens.size());
  }
}

TEST_CASE("feature model counts agree with a direct recount") {
  std::vector<DependencyTree> trees;
  for (const auto& s : test::toy_scenarios()) {
    for (std::size_t r = 0; r < s.references.size(); ++r) {
      trees.push_back(delexicalize_tree(s.parsed_trees[r],
                                        align_sentence(s, static_cast<int>(r))));
    }
  }
  const auto model = train_feature_model(trees);

  std::map<std::string, long long> counts;
  std::map<std::string, long long> contexts;
  std::size_t total_tokens = 0;
  for (const auto& tree : trees) {
    total_tokens += tree.tokens.size();
    for (const auto& st : extract_subtrees(tree)) {
      ++counts[st.shape.render(false)];
      ++contexts[st.shape.context_render()];
    }
  }

  REQUIRE(model.features.size() == counts.size());
  long long model_total = 0;
  for (const auto& [key, entry] : model.features) {
    CHECK(entry.count == counts.at(key));
    model_total += entry.count;
    CHECK(model.probability(entry) ==
          doctest::Approx(static_cast<double>(counts.at(key)) /
                          static_cast<double>(
                              contexts.at(entry.feature.context_render())))
              .epsilon(1e-12));
  }
  CHECK(model_total == static_cast<long long>(total_tokens));
  REQUIRE(model.context_total.size() == contexts.size());
  for (const auto& [key, total] : model.context_total) {
    CHECK(total == contexts.at(key));
  }
}

TEST_CASE("slot counts sum to the feature count") {
  const auto model = train_feature_model(
      {delex_s1(), delex_s1(), delex_s1()});
  for (const auto& [key, entry] : model.features) {
    long long sum = 0;
    for (const auto& [slot, count] : entry.slot_counts) sum += count;
    CHECK(sum == entry.count);
  }
  const auto& root = model.features.at(
      "ROOT,root -> (VBZ) -> "
      "[[pass;@arg1],(NNP),nsubj],[[pass;@arg2],(NNP),obl]");
  CHECK(root.count == 3);
  CHECK(root.slot_counts.at(1) == 3);
  CHECK(root.dominant_slot() == 1);
}

TEST_CASE("dominant slot breaks ties toward the smaller slot") {
  FeatureEntry entry;
  entry.slot_counts = {{0, 2}, {1, 2}};
  CHECK(entry.dominant_slot() == 0);
  entry.slot_counts = {{0, 2}, {1, 3}};
  CHECK(entry.dominant_slot() == 1);
  entry.slot_counts = {{2, 5}, {3, 5}, {1, 4}};
  CHECK(entry.dominant_slot() == 2);
}

TEST_CASE("word features keep surface words and pool by skeleton") {
  auto s2 = make_tree({{1, "pink2", "NNP", 2, "nsubj"},
                       {2, "passes", "VBZ", 0, "root"},
                       {3, "to", "IN", 4, "case"},
                       {4, "pink5", "NNP", 2, "obl"}});
  s2.label_of[1] = MeaningLabel{"pass", "arg1", 0};
  s2.label_of[4] = MeaningLabel{"pass", "arg2", 0};
  const auto model = train_word_features({delex_s1(), s2});

  const auto& verb = model.features.at(
      "ROOT,root -> (VBZ)=passes -> "
      "[[pass;@arg1],(NNP),nsubj],[[pass;@arg2],(NNP),obl]");
  CHECK(verb.count == 2);
  CHECK(model.skeleton_total.at(verb.feature.render(false)) == 2);
  CHECK(model.probability(verb) == doctest::Approx(1.0));

  CHECK(model.backoff_word("IN") == "to");
  CHECK(model.backoff_word("VBZ") == "passes");
  CHECK(model.backoff_word("ZZZ") == "ZZZ");
  CHECK(model.backoff_word("NNP") == "NNP");
}

TEST_CASE("backoff word ties go to the lexicographically smaller word") {
  const auto raw = make_tree({{1, "pink4", "NNP", 2, "nsubj"},
                              {2, "passes", "VBZ", 0, "root"},
                              {3, "to", "IN", 4, "case"},
                              {4, "pink7", "NNP", 2, "obl"}});
  const auto raw2 = make_tree({{1, "pink2", "NNP", 2, "nsubj"},
                               {2, "passes", "VBZ", 0, "root"},
                               {3, "to", "IN", 4, "case"},
                               {4, "pink5", "NNP", 2, "obl"}});
  const auto model = train_word_features({raw, raw2});
  CHECK(model.backoff_word("NNP") == "pink2");
}
