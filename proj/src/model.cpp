#include "depgen/model.hpp"

#include <algorithm>

#include "depgen/error.hpp"

namespace depgen {

TrainingResult train_model(const std::vector<Scenario>& scenarios,
                           const ModelConfig& config) {
  TrainingResult result;
  result.model.config = config;

  std::vector<std::vector<MeaningLabel>> label_sequences;
  std::vector<DependencyTree> delex_trees;
  std::vector<LmSeq> lm_sequences;

  for (const auto& scenario : scenarios) {
    ++result.scenario_count;
    const std::size_t usable = std::min(scenario.references.size(),
                                        scenario.parsed_trees.size());
    for (std::size_t r = 0; r < usable; ++r) {
      AlignmentRecord record;
      const AlignedSentence aligned =
          align_sentence(scenario, static_cast<int>(r), &record);
      result.alignment.push_back(std::move(record));
      DependencyTree delex =
          delexicalize_tree(scenario.parsed_trees[r], aligned);

      label_sequences.push_back(aligned.label_sequence());

      LmSeq seq;
      seq.reserve(delex.tokens.size());
      for (const Token& tok : delex.tokens) {
        const auto it = delex.label_of.find(tok.index);
        seq.push_back(LmToken{
            it != delex.label_of.end() ? it->second.render() : tok.word,
            tok.pos});
      }
      lm_sequences.push_back(std::move(seq));

      delex_trees.push_back(std::move(delex));
      ++result.sentence_count;
    }
  }

  result.model.label_model = train_label_model(label_sequences);
  result.model.feature_model = train_feature_model(delex_trees);
  result.model.word_model = train_word_features(delex_trees);
  result.model.trigram = train_trigram(lm_sequences);
  return result;
}

}  // namespace depgen
