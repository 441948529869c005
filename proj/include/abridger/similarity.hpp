#ifndef ABRIDGER_SIMILARITY_HPP
#define ABRIDGER_SIMILARITY_HPP

// Word-overlap similarity: clipped ROUGE-N precision and LCS-based ROUGE-L.
// Both are generic over any sequence of equality-comparable items (token
// strings, interned ids).

#include <algorithm>
#include <cstddef>
#include <map>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

#include "abridger/error.hpp"

namespace abridger {

enum class SimilarityKind { rouge1_precision, rouge2_precision };

struct SimilarityConfig {
  SimilarityKind kind = SimilarityKind::rouge1_precision;

  constexpr std::size_t n() const {
    return kind == SimilarityKind::rouge1_precision ? 1 : 2;
  }
};

inline SimilarityKind parse_similarity(std::string_view name) {
  if (name == "rouge1p") return SimilarityKind::rouge1_precision;
  if (name == "rouge2p") return SimilarityKind::rouge2_precision;
  throw ConfigError("unknown similarity '" + std::string(name) +
                    "' (expected rouge1p or rouge2p)");
}

inline std::string_view to_string(SimilarityKind k) {
  return k == SimilarityKind::rouge1_precision ? "rouge1p" : "rouge2p";
}

/// Clipped n-gram precision of `hyp` against `ref`:
///   sum_g min(count_hyp(g), count_ref(g)) / #ngrams(hyp).
/// Zero when the hypothesis has no n-grams.
template <std::ranges::random_access_range Hyp,
          std::ranges::random_access_range Ref>
double rouge_n_precision(const Hyp& hyp, const Ref& ref, std::size_t n) {
  if (n == 0) throw ConfigError("rouge_n_precision: n must be >= 1");
  using T = std::ranges::range_value_t<Hyp>;
  const auto hyp_size = static_cast<std::size_t>(std::ranges::size(hyp));
  const auto ref_size = static_cast<std::size_t>(std::ranges::size(ref));
  if (hyp_size < n) return 0.0;

  std::map<std::vector<T>, std::size_t> ref_counts;
  if (ref_size >= n) {
    auto it = std::ranges::begin(ref);
    for (std::size_t i = 0; i + n <= ref_size; ++i) {
      ++ref_counts[std::vector<T>(it + i, it + i + n)];
    }
  }
  std::size_t matched = 0;
  const std::size_t total = hyp_size - n + 1;
  auto it = std::ranges::begin(hyp);
  for (std::size_t i = 0; i < total; ++i) {
    auto found = ref_counts.find(std::vector<T>(it + i, it + i + n));
    if (found != ref_counts.end() && found->second > 0) {
      --found->second;
      ++matched;
    }
  }
  return static_cast<double>(matched) / static_cast<double>(total);
}

/// Length of the longest common subsequence, O(|a|·|b|) time, O(|b|) space.
template <std::ranges::random_access_range A, std::ranges::random_access_range B>
std::size_t lcs_length(const A& a, const B& b) {
  const auto m = static_cast<std::size_t>(std::ranges::size(b));
  std::vector<std::size_t> row(m + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;  // row[j-1] of the previous iteration
    auto bit = std::ranges::begin(b);
    for (std::size_t j = 1; j <= m; ++j, ++bit) {
      const std::size_t up = row[j];
      row[j] = (x == *bit) ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[m];
}

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const PrecisionRecall&, const PrecisionRecall&) = default;
};

inline double f1_score(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

/// ROUGE-L over whole sequences: p = LCS/|pred|, r = LCS/|ref|.
template <std::ranges::random_access_range Pred,
          std::ranges::random_access_range Ref>
PrecisionRecall rouge_l(const Pred& pred, const Ref& ref) {
  const auto np = static_cast<std::size_t>(std::ranges::size(pred));
  const auto nr = static_cast<std::size_t>(std::ranges::size(ref));
  if (np == 0 || nr == 0) return {};
  const std::size_t lcs = lcs_length(pred, ref);
  if (lcs == 0) return {};
  const double p = static_cast<double>(lcs) / static_cast<double>(np);
  const double r = static_cast<double>(lcs) / static_cast<double>(nr);
  return {p, r, f1_score(p, r)};
}

template <std::ranges::random_access_range Pred,
          std::ranges::random_access_range Ref>
double rouge_l_f1(const Pred& pred, const Ref& ref) {
  return rouge_l(pred, ref).f1;
}

/// sim(o, a): the abridged span is the hypothesis, the original span the
/// reference.
template <std::ranges::random_access_range O, std::ranges::random_access_range A>
double span_similarity(const O& o_span_tokens, const A& a_span_tokens,
                       const SimilarityConfig& config) {
  return rouge_n_precision(a_span_tokens, o_span_tokens, config.n());
}

}  // namespace abridger

#endif  // ABRIDGER_SIMILARITY_HPP
