#ifndef ABRIDGER_ALIGNER_HPP
#define ABRIDGER_ALIGNER_HPP

// Monotone span alignment of an original chapter against its abridgement.
//
// Each row pairs 1..o_max original sentences with 0..a_max abridged
// sentences. A row earns max(0, sim - (max(o_len, a_len) - 1) * pn) and the
// dynamic program picks the segmentation of both sentence sequences with the
// largest total. Rows that drop an original sentence (a_len = 0) always
// cover exactly one original sentence.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abridger/chapters.hpp"
#include "abridger/error.hpp"
#include "abridger/similarity.hpp"
#include "abridger/text.hpp"

namespace abridger {

struct AlignerConfig {
  std::size_t o_max = 3;
  std::size_t a_max = 5;
  double pn = 0.175;
  SimilarityConfig similarity{};

  void validate() const {
    if (o_max < 1) throw ConfigError("o_max must be >= 1");
    if (!(pn >= 0.0 && pn <= 1.0)) throw ConfigError("pn must lie in [0, 1]");
  }
};

struct AlignmentRow {
  std::size_t o_start = 0;
  std::size_t o_len = 1;
  std::size_t a_start = 0;  // insertion point when a_len == 0
  std::size_t a_len = 0;
  double score = 0.0;  // unpenalized span similarity
  bool flagged = false;
  bool validated = false;

  std::size_t o_end() const { return o_start + o_len; }
  std::size_t a_end() const { return a_start + a_len; }
  friend bool operator==(const AlignmentRow&, const AlignmentRow&) = default;
};

inline double pair_score(double sim, std::size_t o_len, std::size_t a_len,
                         double pn) {
  const auto size = static_cast<double>(std::max(o_len, a_len));
  return std::max(0.0, sim - (size - 1.0) * pn);
}

/// Returns a description of the first violated row invariant, if any:
/// sorted rows whose original ranges partition [0, n_original), whose
/// non-empty abridged ranges partition [0, n_abridged), both monotone.
inline std::optional<std::string> check_rows(
    const std::vector<AlignmentRow>& rows, std::size_t n_original,
    std::size_t n_abridged) {
  std::size_t o_next = 0;
  std::size_t a_next = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const std::string where = "row " + std::to_string(k) + ": ";
    if (r.o_len == 0) return where + "empty original span";
    if (r.o_start != o_next) return where + "original span is not contiguous with the previous row";
    if (r.a_start != a_next) return where + "abridged span is not contiguous with the previous row";
    if (r.a_len == 0 && r.o_len != 1) return where + "rows with an empty abridged span must hold one original sentence";
    o_next = r.o_end();
    a_next = r.a_end();
  }
  if (o_next != n_original) {
    return "rows cover " + std::to_string(o_next) + " of " +
           std::to_string(n_original) + " original sentences";
  }
  if (a_next != n_abridged) {
    return "rows cover " + std::to_string(a_next) + " of " +
           std::to_string(n_abridged) + " abridged sentences";
  }
  return std::nullopt;
}

/// Span similarity over sentence ranges of two tokenized documents. N-grams
/// are interned once so each span pair costs O(span tokens).
class SpanScorer {
 public:
  SpanScorer(const std::vector<std::vector<std::string>>& original,
             const std::vector<std::vector<std::string>>& abridged,
             SimilarityConfig config)
      : n_(config.n()) {
    std::map<std::string, std::uint32_t> vocab;
    std::map<std::vector<std::uint32_t>, std::uint32_t> grams;
    auto build = [&](const std::vector<std::vector<std::string>>& sentences,
                     std::vector<std::uint32_t>& gram_ids,
                     std::vector<std::size_t>& offsets) {
      std::vector<std::uint32_t> ids;
      offsets.assign(1, 0);
      for (const auto& s : sentences) {
        for (const auto& w : s) {
          ids.push_back(vocab.emplace(w, static_cast<std::uint32_t>(vocab.size()))
                            .first->second);
        }
        offsets.push_back(ids.size());
      }
      gram_ids.clear();
      for (std::size_t i = 0; i + n_ <= ids.size(); ++i) {
        std::vector<std::uint32_t> key(ids.begin() + i, ids.begin() + i + n_);
        gram_ids.push_back(
            grams.emplace(std::move(key), static_cast<std::uint32_t>(grams.size()))
                .first->second);
      }
    };
    build(original, o_grams_, o_offsets_);
    build(abridged, a_grams_, a_offsets_);
    counts_.assign(grams.size(), 0);
  }

  /// Clipped n-gram precision of abridged sentences [a_start, +a_len)
  /// against original sentences [o_start, +o_len).
  double similarity(std::size_t o_start, std::size_t o_len, std::size_t a_start,
                    std::size_t a_len) {
    const auto [hb, he] = gram_range(a_offsets_, a_start, a_len);
    if (he <= hb) return 0.0;
    const auto [rb, re] = gram_range(o_offsets_, o_start, o_len);
    for (std::size_t i = rb; i < re; ++i) ++counts_[o_grams_[i]];
    std::size_t matched = 0;
    for (std::size_t i = hb; i < he; ++i) {
      auto& c = counts_[a_grams_[i]];
      if (c > 0) {
        --c;
        ++matched;
      }
    }
    for (std::size_t i = rb; i < re; ++i) counts_[o_grams_[i]] = 0;
    return static_cast<double>(matched) / static_cast<double>(he - hb);
  }

 private:
  std::pair<std::size_t, std::size_t> gram_range(
      const std::vector<std::size_t>& offsets, std::size_t first,
      std::size_t count) const {
    if (count == 0) return {0, 0};
    const std::size_t tb = offsets[first];
    const std::size_t te = offsets[first + count];
    if (te < tb + n_) return {0, 0};
    return {tb, te - n_ + 1};
  }

  std::size_t n_;
  std::vector<std::uint32_t> o_grams_, a_grams_;
  std::vector<std::size_t> o_offsets_, a_offsets_;
  std::vector<std::uint32_t> counts_;
};

struct AlignmentResult {
  std::vector<AlignmentRow> rows;
  double total_score = 0.0;  // sum of penalized pair scores
};

/// Aligns two sequences of tokenized sentences.
///
/// Candidate spans ending at each cell are scanned in ascending
/// (o_len, a_len) order and replace the incumbent only on a strictly larger
/// accumulated score, so the smaller span wins ties.
inline AlignmentResult align_sentences(
    const std::vector<std::vector<std::string>>& original,
    const std::vector<std::vector<std::string>>& abridged,
    const AlignerConfig& config) {
  config.validate();
  const std::size_t n = original.size();
  const std::size_t m = abridged.size();
  if (n == 0) throw InputError("cannot align an empty original chapter");

  SpanScorer scorer(original, abridged, config.similarity);
  constexpr double kUnreachable = -std::numeric_limits<double>::infinity();
  const std::size_t cols = m + 1;
  std::vector<double> best((n + 1) * cols, kUnreachable);
  struct Step {
    std::uint16_t o_len = 0;
    std::uint16_t a_len = 0;
    double sim = 0.0;
  };
  std::vector<Step> back((n + 1) * cols);
  best[0] = 0.0;

  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      double cur = kUnreachable;
      Step step;
      for (std::size_t ol = 1; ol <= std::min(config.o_max, i); ++ol) {
        for (std::size_t al = 0; al <= std::min(config.a_max, j); ++al) {
          if (al == 0 && ol > 1) continue;
          const double prev = best[(i - ol) * cols + (j - al)];
          if (prev == kUnreachable) continue;
          const double sim =
              al == 0 ? 0.0 : scorer.similarity(i - ol, ol, j - al, al);
          const double total = prev + pair_score(sim, ol, al, config.pn);
          if (total > cur) {
            cur = total;
            step = {static_cast<std::uint16_t>(ol),
                    static_cast<std::uint16_t>(al), sim};
          }
        }
      }
      best[i * cols + j] = cur;
      back[i * cols + j] = step;
    }
  }

  if (best[n * cols + m] == kUnreachable) {
    throw InputError("no alignment covers " + std::to_string(m) +
                     " abridged sentences with " + std::to_string(n) +
                     " original sentences and a_max=" +
                     std::to_string(config.a_max));
  }

  AlignmentResult result;
  result.total_score = best[n * cols + m];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0) {
    const Step& s = back[i * cols + j];
    AlignmentRow row;
    row.o_start = i - s.o_len;
    row.o_len = s.o_len;
    row.a_start = j - s.a_len;
    row.a_len = s.a_len;
    row.score = s.sim;
    result.rows.push_back(row);
    i -= s.o_len;
    j -= s.a_len;
  }
  std::reverse(result.rows.begin(), result.rows.end());
  return result;
}

/// Token texts of every sentence of a document.
inline std::vector<std::vector<std::string>> sentence_words(const Document& doc) {
  std::vector<std::vector<std::string>> out;
  out.reserve(doc.sentence_count());
  for (std::size_t s = 0; s < doc.sentence_count(); ++s) {
    out.push_back(token_texts(doc.sentence_tokens(s)));
  }
  return out;
}

inline std::vector<AlignmentRow> align_chapter(const ChapterPair& pair,
                                               const AlignerConfig& config) {
  return align_sentences(sentence_words(pair.original),
                         sentence_words(pair.abridged), config)
      .rows;
}

/// Unpenalized similarity of one row, recomputed from the documents.
inline double row_similarity(const Document& original, const Document& abridged,
                             const AlignmentRow& row,
                             const SimilarityConfig& config = {}) {
  if (row.a_len == 0) return 0.0;
  return span_similarity(
      token_texts(original.sentence_tokens(row.o_start, row.o_len)),
      token_texts(abridged.sentence_tokens(row.a_start, row.a_len)), config);
}

inline constexpr double kDefaultFlagThreshold = 0.9;

/// Marks rows for partial validation: score below the threshold and either
/// two or more abridged sentences or a neighbouring row with an empty
/// abridged span. Only the flagged field changes.
inline std::vector<AlignmentRow> flag_rows(std::vector<AlignmentRow> rows,
                                           double threshold = kDefaultFlagThreshold) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const bool prev_empty = k > 0 && rows[k - 1].a_len == 0;
    const bool next_empty = k + 1 < rows.size() && rows[k + 1].a_len == 0;
    rows[k].flagged = rows[k].score < threshold &&
                      (rows[k].a_len >= 2 || prev_empty || next_empty);
  }
  return rows;
}

/// A chapter pair together with its alignment rows.
struct AlignedChapter {
  ChapterPair pair;
  std::vector<AlignmentRow> rows;
};

}  // namespace abridger

#endif  // ABRIDGER_ALIGNER_HPP
