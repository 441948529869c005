#ifndef ABRIDGER_ASSESSMENT_HPP
#define ABRIDGER_ASSESSMENT_HPP

// Alignment quality against gold rows, and inter-rater agreement.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "abridger/aligner.hpp"
#include "abridger/error.hpp"
#include "abridger/similarity.hpp"

namespace abridger {

using SentencePair = std::pair<std::size_t, std::size_t>;

/// (original sentence, abridged sentence) pairs that share a row.
inline std::set<SentencePair> positive_pairs(const std::vector<AlignmentRow>& rows) {
  std::set<SentencePair> out;
  for (const auto& r : rows) {
    for (std::size_t i = r.o_start; i < r.o_end(); ++i) {
      for (std::size_t j = r.a_start; j < r.a_end(); ++j) out.emplace(i, j);
    }
  }
  return out;
}

/// Counts behind a row-level P/R/F1, so several chapters can be pooled.
struct PairCounts {
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t correct = 0;

  PairCounts& operator+=(const PairCounts& o) {
    predicted += o.predicted;
    gold += o.gold;
    correct += o.correct;
    return *this;
  }

  PrecisionRecall score() const {
    if (predicted == 0 && gold == 0) return {1.0, 1.0, 1.0};
    const double p = predicted ? double(correct) / double(predicted) : 0.0;
    const double r = gold ? double(correct) / double(gold) : 0.0;
    return {p, r, f1_score(p, r)};
  }
};

/// Sentence extent (original, abridged) covered by a row list.
inline std::pair<std::size_t, std::size_t> row_extent(
    const std::vector<AlignmentRow>& rows) {
  std::size_t o = 0, a = 0;
  for (const auto& r : rows) {
    o = std::max(o, r.o_end());
    a = std::max(a, r.a_end());
  }
  return {o, a};
}

inline PairCounts row_pair_counts(const std::vector<AlignmentRow>& pred,
                                  const std::vector<AlignmentRow>& gold,
                                  std::size_t n_original, std::size_t n_abridged) {
  auto check = [&](const std::vector<AlignmentRow>& rows, const char* which) {
    const auto [o, a] = row_extent(rows);
    if (o > n_original || a > n_abridged) {
      throw InputError(std::string(which) +
                       " rows reference sentences beyond the chapter (" +
                       std::to_string(o) + "/" + std::to_string(n_original) +
                       " original, " + std::to_string(a) + "/" +
                       std::to_string(n_abridged) + " abridged)");
    }
  };
  check(pred, "predicted");
  check(gold, "gold");
  const auto pp = positive_pairs(pred);
  const auto gp = positive_pairs(gold);
  PairCounts c;
  c.predicted = pp.size();
  c.gold = gp.size();
  for (const auto& x : pp) c.correct += gp.count(x);
  return c;
}

/// Row F1 over same-row sentence pairs. The chapter size defaults to the
/// extent of the gold rows; predicted rows past it are an error.
inline PrecisionRecall row_f1(const std::vector<AlignmentRow>& pred,
                              const std::vector<AlignmentRow>& gold) {
  const auto [o, a] = row_extent(gold);
  return row_pair_counts(pred, gold, o, a).score();
}

inline PrecisionRecall row_f1(const std::vector<AlignmentRow>& pred,
                              const std::vector<AlignmentRow>& gold,
                              std::size_t n_original, std::size_t n_abridged) {
  return row_pair_counts(pred, gold, n_original, n_abridged).score();
}

/// Labels from several raters over a set of items.
class AnnotationSet {
 public:
  void add(const std::string& item, const std::string& rater, int label) {
    auto [it, inserted] = labels_[item].emplace(rater, label);
    if (!inserted && it->second != label) {
      throw InputError("rater " + rater + " gave item " + item +
                       " two different labels");
    }
    raters_.insert(rater);
  }

  const std::set<std::string>& raters() const { return raters_; }
  std::size_t item_count() const { return labels_.size(); }
  const std::map<std::string, std::map<std::string, int>>& items() const {
    return labels_;
  }

 private:
  std::map<std::string, std::map<std::string, int>> labels_;
  std::set<std::string> raters_;
};

/// Fleiss' kappa. Every rater must label every item; a degenerate marginal
/// distribution (all labels in one category) raises DegenerateError.
inline double fleiss_kappa(const AnnotationSet& annotations) {
  const std::size_t raters = annotations.raters().size();
  const std::size_t items = annotations.item_count();
  if (raters < 2) throw InputError("fleiss_kappa needs at least two raters");
  if (items == 0) throw InputError("fleiss_kappa needs at least one item");

  std::map<int, std::size_t> category_totals;
  double agreement_sum = 0.0;
  for (const auto& [item, by_rater] : annotations.items()) {
    if (by_rater.size() != raters) {
      throw InputError("item " + item + " has " + std::to_string(by_rater.size()) +
                       " of " + std::to_string(raters) + " labels");
    }
    std::map<int, std::size_t> counts;
    for (const auto& [rater, label] : by_rater) ++counts[label];
    double sq = 0.0;
    for (const auto& [label, c] : counts) {
      sq += double(c) * double(c);
      category_totals[label] += c;
    }
    agreement_sum += (sq - double(raters)) / (double(raters) * double(raters - 1));
  }
  const double observed = agreement_sum / double(items);
  double expected = 0.0;
  const double all = double(items) * double(raters);
  for (const auto& [label, c] : category_totals) {
    const double p = double(c) / all;
    expected += p * p;
  }
  if (expected >= 1.0) {
    throw DegenerateError(
        "fleiss_kappa undefined: every label falls in a single category");
  }
  return (observed - expected) / (1.0 - expected);
}

}  // namespace abridger

#endif  // ABRIDGER_ASSESSMENT_HPP
