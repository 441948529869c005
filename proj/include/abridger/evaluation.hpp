#ifndef ABRIDGER_EVALUATION_HPP
#define ABRIDGER_EVALUATION_HPP

// Scoring a predicted abridgement against a reference abridgement of the
// same original: ROUGE-L plus F1 over correctly preserved, removed and
// added word types.
//
// A precision or recall whose denominator set is empty is 1 when the set it
// is compared against is empty too, and 0 otherwise.

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abridger/similarity.hpp"
#include "abridger/text.hpp"

namespace abridger {

using WordSet = std::set<std::string>;

inline WordSet word_set(const std::vector<std::string>& words) {
  return WordSet(words.begin(), words.end());
}

inline WordSet set_intersection(const WordSet& a, const WordSet& b) {
  WordSet out;
  for (const auto& w : a) {
    if (b.count(w)) out.insert(w);
  }
  return out;
}

inline WordSet set_difference(const WordSet& a, const WordSet& b) {
  WordSet out;
  for (const auto& w : a) {
    if (!b.count(w)) out.insert(w);
  }
  return out;
}

/// Set-agreement counts for one of the three relations.
struct SetCounts {
  std::size_t predicted = 0;
  std::size_t reference = 0;
  std::size_t correct = 0;

  SetCounts& operator+=(const SetCounts& o) {
    predicted += o.predicted;
    reference += o.reference;
    correct += o.correct;
    return *this;
  }

  PrecisionRecall score() const {
    const double p = predicted ? double(correct) / double(predicted)
                               : (reference == 0 ? 1.0 : 0.0);
    const double r = reference ? double(correct) / double(reference)
                               : (predicted == 0 ? 1.0 : 0.0);
    return {p, r, f1_score(p, r)};
  }
};

inline SetCounts compare_sets(const WordSet& pred, const WordSet& ref) {
  return {pred.size(), ref.size(), set_intersection(pred, ref).size()};
}

inline SetCounts prsv_counts(const WordSet& orig, const WordSet& pred,
                             const WordSet& ref) {
  return compare_sets(set_intersection(orig, pred), set_intersection(orig, ref));
}

inline SetCounts rmv_counts(const WordSet& orig, const WordSet& pred,
                            const WordSet& ref) {
  return compare_sets(set_difference(orig, pred), set_difference(orig, ref));
}

inline SetCounts add_counts(const WordSet& orig, const WordSet& pred,
                            const WordSet& ref) {
  return compare_sets(set_difference(pred, orig), set_difference(ref, orig));
}

inline PrecisionRecall prsv_f1(const WordSet& orig, const WordSet& pred,
                               const WordSet& ref) {
  return prsv_counts(orig, pred, ref).score();
}

inline PrecisionRecall rmv_f1(const WordSet& orig, const WordSet& pred,
                              const WordSet& ref) {
  return rmv_counts(orig, pred, ref).score();
}

inline PrecisionRecall add_f1(const WordSet& orig, const WordSet& pred,
                              const WordSet& ref) {
  return add_counts(orig, pred, ref).score();
}

struct EvalReport {
  std::size_t token_count = 0;  // tokens in the prediction
  double r_l = 0.0;
  PrecisionRecall prsv, rmv, add;
};

/// Everything needed to score one chapter and to pool it with others.
struct EvalCounts {
  std::size_t token_count = 0;
  std::size_t lcs = 0;
  std::size_t pred_len = 0;
  std::size_t ref_len = 0;
  SetCounts prsv, rmv, add;

  EvalCounts& operator+=(const EvalCounts& o) {
    token_count += o.token_count;
    lcs += o.lcs;
    pred_len += o.pred_len;
    ref_len += o.ref_len;
    prsv += o.prsv;
    rmv += o.rmv;
    add += o.add;
    return *this;
  }

  EvalReport report() const {
    EvalReport r;
    r.token_count = token_count;
    if (pred_len && ref_len && lcs) {
      const double p = double(lcs) / double(pred_len);
      const double rc = double(lcs) / double(ref_len);
      r.r_l = f1_score(p, rc);
    }
    r.prsv = prsv.score();
    r.rmv = rmv.score();
    r.add = add.score();
    return r;
  }
};

inline EvalCounts evaluate_counts(const std::vector<std::string>& orig_words,
                                  const std::vector<std::string>& pred_words,
                                  const std::vector<std::string>& ref_words) {
  const WordSet orig = word_set(orig_words);
  const WordSet pred = word_set(pred_words);
  const WordSet ref = word_set(ref_words);
  EvalCounts c;
  c.token_count = pred_words.size();
  c.pred_len = pred_words.size();
  c.ref_len = ref_words.size();
  c.lcs = lcs_length(pred_words, ref_words);
  c.prsv = prsv_counts(orig, pred, ref);
  c.rmv = rmv_counts(orig, pred, ref);
  c.add = add_counts(orig, pred, ref);
  return c;
}

inline EvalReport evaluate(std::string_view original_text,
                           std::string_view predicted_text,
                           std::string_view reference_text) {
  return evaluate_counts(word_list(original_text), word_list(predicted_text),
                         word_list(reference_text))
      .report();
}

/// Unweighted mean of per-chapter reports (token_count becomes the mean
/// token count, rounded down).
inline EvalReport mean_report(const std::vector<EvalReport>& reports) {
  EvalReport m;
  if (reports.empty()) return m;
  double toks = 0.0;
  auto acc = [](PrecisionRecall& dst, const PrecisionRecall& src) {
    dst.precision += src.precision;
    dst.recall += src.recall;
    dst.f1 += src.f1;
  };
  for (const auto& r : reports) {
    toks += double(r.token_count);
    m.r_l += r.r_l;
    acc(m.prsv, r.prsv);
    acc(m.rmv, r.rmv);
    acc(m.add, r.add);
  }
  const double k = double(reports.size());
  for (PrecisionRecall* pr : {&m.prsv, &m.rmv, &m.add}) {
    pr->precision /= k;
    pr->recall /= k;
    pr->f1 /= k;
  }
  m.r_l /= k;
  m.token_count = static_cast<std::size_t>(toks / k);
  return m;
}

}  // namespace abridger

#endif  // ABRIDGER_EVALUATION_HPP
