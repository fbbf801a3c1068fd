#include "depgen/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "depgen/error.hpp"

namespace depgen {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool label_order(const MeaningLabel& a, const MeaningLabel& b) {
  return std::tie(a.record_type, a.field, a.occurrence) <
         std::tie(b.record_type, b.field, b.occurrence);
}

bool sequence_order(const std::vector<MeaningLabel>& a,
                    const std::vector<MeaningLabel>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      label_order);
}

}  // namespace

LabelModel train_label_model(
    const std::vector<std::vector<MeaningLabel>>& sequences) {
  LabelModel model;
  for (const auto& seq : sequences) {
    if (seq.empty()) continue;
    ++model.sequence_count;
    std::string prev = LabelModel::kStart;
    for (const auto& label : seq) {
      const std::string key = label.render();
      ++model.unigram[key];
      ++model.total_labels;
      ++model.bigram[prev][key];
      prev = key;
    }
    ++model.bigram[prev][LabelModel::kEnd];
  }
  if (model.total_labels == 0) {
    throw DepgenError("no meaning labels in training data");
  }
  return model;
}

double label_probability(const LabelModel& model, const MeaningLabel& label) {
  auto it = model.unigram.find(label.render());
  if (it == model.unigram.end()) return 0.0;
  return static_cast<double>(it->second) /
         static_cast<double>(model.total_labels);
}

double transition_probability(const LabelModel& model,
                              const MeaningLabel* from,
                              const MeaningLabel* to) {
  const std::string src = from ? from->render() : LabelModel::kStart;
  const std::string dst = to ? to->render() : LabelModel::kEnd;
  long long denom = 0;
  if (from) {
    auto it = model.unigram.find(src);
    if (it == model.unigram.end()) return 0.0;
    denom = it->second;
  } else {
    denom = model.sequence_count;
  }
  if (denom == 0) return 0.0;
  auto row = model.bigram.find(src);
  if (row == model.bigram.end()) return 0.0;
  auto cell = row->second.find(dst);
  if (cell == row->second.end()) return 0.0;
  return static_cast<double>(cell->second) / static_cast<double>(denom);
}

double sequence_log_probability(const LabelModel& model,
                                const std::vector<MeaningLabel>& sequence) {
  double total = 0.0;
  const MeaningLabel* prev = nullptr;
  for (const auto& label : sequence) {
    const double p = transition_probability(model, prev, &label);
    if (p <= 0.0) return kNegInf;
    total += std::log(p);
    prev = &label;
  }
  const double p_end = transition_probability(model, prev, nullptr);
  if (p_end <= 0.0) return kNegInf;
  return total + std::log(p_end);
}

ContentPlan plan_content(const LabelModel& model,
                         std::vector<MeaningLabel> labels, double threshold,
                         std::size_t max_exhaustive, std::size_t beam_width) {
  std::vector<MeaningLabel> kept;
  for (const auto& label : labels) {
    if (label_probability(model, label) >= threshold) kept.push_back(label);
  }
  if (kept.empty()) {
    throw DepgenError("content plan empty under threshold");
  }
  std::sort(kept.begin(), kept.end(), label_order);

  ContentPlan best;
  best.log_probability = kNegInf;
  if (kept.size() <= max_exhaustive) {
    std::vector<MeaningLabel> perm = kept;
    do {
      const double lp = sequence_log_probability(model, perm);
      if (lp > best.log_probability) {
        best.log_probability = lp;
        best.labels = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end(), label_order));
    if (best.labels.empty()) {
      // Every ordering scored -infinity; fall back to canonical order.
      best.labels = kept;
    }
    return best;
  }

  struct Partial {
    std::vector<MeaningLabel> order;
    std::vector<bool> used;
    double lp = 0.0;
  };
  auto partial_order = [](const Partial& a, const Partial& b) {
    if (a.lp != b.lp) return a.lp > b.lp;
    return sequence_order(a.order, b.order);
  };

  std::vector<Partial> beam{Partial{{}, std::vector<bool>(kept.size(), false),
                                    0.0}};
  for (std::size_t step = 0; step < kept.size(); ++step) {
    std::vector<Partial> next;
    for (const auto& partial : beam) {
      const MeaningLabel* prev =
          partial.order.empty() ? nullptr : &partial.order.back();
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (partial.used[i]) continue;
        // Equal slot types are interchangeable; always take the lowest
        // unused occurrence first.
        if (i > 0 && !partial.used[i - 1] &&
            kept[i].same_slot_type(kept[i - 1])) {
          continue;
        }
        const double p = transition_probability(model, prev, &kept[i]);
        Partial child = partial;
        child.order.push_back(kept[i]);
        child.used[i] = true;
        child.lp += p > 0.0 ? std::log(p) : kNegInf;
        next.push_back(std::move(child));
      }
    }
    std::sort(next.begin(), next.end(), partial_order);
    if (next.size() > beam_width) next.resize(beam_width);
    beam = std::move(next);
  }
  for (auto& partial : beam) {
    const double p = transition_probability(model, &partial.order.back(),
                                            nullptr);
    partial.lp += p > 0.0 ? std::log(p) : kNegInf;
  }
  std::sort(beam.begin(), beam.end(), partial_order);
  best.labels = beam.front().order;
  best.log_probability = beam.front().lp;
  return best;
}

}  // namespace depgen
