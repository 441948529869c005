#ifndef ABRIDGER_PASSAGE_MAP_HPP
#define ABRIDGER_PASSAGE_MAP_HPP

// Slices (shared contiguous word runs) between aligned spans, passage-level
// abridgement lookup, fixed-size passage units, and preserved/removed token
// labels.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abridger/aligner.hpp"
#include "abridger/chapters.hpp"
#include "abridger/error.hpp"
#include "abridger/text.hpp"

namespace abridger {

struct Slice {
  CharRange o_chars;
  CharRange a_chars;
  // Token index ranges into the token lists the slice was computed from.
  std::size_t o_token = 0;
  std::size_t a_token = 0;
  std::size_t word_count = 0;

  friend bool operator==(const Slice&, const Slice&) = default;
};

/// Greedy matching blocks: repeatedly take the longest common contiguous
/// run among still-unmatched tokens (ties: earliest original position, then
/// earliest abridged position) until nothing is shared. Slices never
/// overlap on either side but may cross, which is what makes reordering
/// visible. Result is sorted by original position.
inline std::vector<Slice> matching_slices(const std::vector<Token>& o_tokens,
                                          const std::vector<Token>& a_tokens) {
  const std::size_t n = o_tokens.size();
  const std::size_t m = a_tokens.size();
  std::vector<char> o_used(n, 0), a_used(m, 0);
  std::vector<Slice> out;
  // run[i][j]: common run length ending at (i-1, j-1) over unused tokens.
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (;;) {
    std::size_t best_len = 0, best_i = 0, best_j = 0;
    std::fill(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= n; ++i) {
      cur[0] = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (!o_used[i - 1] && !a_used[j - 1] &&
            o_tokens[i - 1].text == a_tokens[j - 1].text) {
          cur[j] = prev[j - 1] + 1;
          const std::size_t start_i = i - cur[j];
          const std::size_t start_j = j - cur[j];
          if (cur[j] > best_len ||
              (cur[j] == best_len &&
               (start_i < best_i || (start_i == best_i && start_j < best_j)))) {
            best_len = cur[j];
            best_i = start_i;
            best_j = start_j;
          }
        } else {
          cur[j] = 0;
        }
      }
      std::swap(prev, cur);
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) {
      o_used[best_i + k] = 1;
      a_used[best_j + k] = 1;
    }
    out.push_back({{o_tokens[best_i].char_start,
                    o_tokens[best_i + best_len - 1].char_end},
                   {a_tokens[best_j].char_start,
                    a_tokens[best_j + best_len - 1].char_end},
                   best_i,
                   best_j,
                   best_len});
  }
  std::sort(out.begin(), out.end(),
            [](const Slice& x, const Slice& y) { return x.o_token < y.o_token; });
  return out;
}

/// Slices of every row of an aligned chapter, in row order. Offsets are
/// chapter-level.
inline std::vector<Slice> chapter_slices(const Document& original,
                                         const Document& abridged,
                                         const std::vector<AlignmentRow>& rows) {
  std::vector<Slice> out;
  for (const auto& r : rows) {
    if (r.a_len == 0) continue;
    auto s = matching_slices(original.sentence_tokens(r.o_start, r.o_len),
                             abridged.sentence_tokens(r.a_start, r.a_len));
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

/// Abridged range for the original passage [o_l, o_m): from the earliest to
/// the latest abridged position among slices lying entirely inside the
/// passage. Empty when no slice is enclosed.
inline std::optional<CharRange> passage_abridgement(
    const std::vector<Slice>& slices, CharRange passage) {
  std::optional<CharRange> out;
  for (const auto& s : slices) {
    if (s.o_chars.start >= passage.start && s.o_chars.end <= passage.end) {
      if (!out) {
        out = s.a_chars;
      } else {
        out->start = std::min(out->start, s.a_chars.start);
        out->end = std::max(out->end, s.a_chars.end);
      }
    }
  }
  return out;
}

enum class PassageUnit { row, sentence, paragraph, chunk };

inline PassageUnit parse_passage_unit(std::string_view name) {
  if (name == "row") return PassageUnit::row;
  if (name == "sentence") return PassageUnit::sentence;
  if (name == "paragraph") return PassageUnit::paragraph;
  if (name == "chunk") return PassageUnit::chunk;
  throw ConfigError("unknown passage unit '" + std::string(name) +
                    "' (expected row, sentence, paragraph or chunk)");
}

inline std::string_view to_string(PassageUnit u) {
  switch (u) {
    case PassageUnit::row: return "row";
    case PassageUnit::sentence: return "sentence";
    case PassageUnit::paragraph: return "paragraph";
    case PassageUnit::chunk: return "chunk";
  }
  return "?";
}

struct ChunkConfig {
  std::size_t max_sentences = 10;
};

struct PassagePair {
  PassageUnit unit = PassageUnit::sentence;
  CharRange o_chars;
  std::size_t o_sentence_start = 0;
  std::size_t o_sentence_count = 0;
  std::optional<CharRange> a_chars;
};

/// Original-side passages of a chapter. Chunks greedily gather whole
/// paragraphs while the sentence total stays within max_sentences; a
/// paragraph longer than that forms a chunk of its own.
inline std::vector<PassagePair> make_passages(const Document& chapter,
                                              PassageUnit unit,
                                              const ChunkConfig& chunk = {}) {
  if (chunk.max_sentences < 1) throw ConfigError("chunk size must be >= 1");
  const auto& sents = chapter.sentences();
  std::vector<PassagePair> out;
  switch (unit) {
    case PassageUnit::sentence:
      for (std::size_t s = 0; s < sents.size(); ++s) {
        out.push_back({unit, sents[s], s, 1, std::nullopt});
      }
      return out;
    case PassageUnit::paragraph:
    case PassageUnit::chunk: {
      // Sentence count per paragraph.
      std::vector<std::pair<std::size_t, std::size_t>> paras;  // first, count
      std::size_t s = 0;
      for (const auto& p : chapter.paragraphs()) {
        const std::size_t first = s;
        while (s < sents.size() && sents[s].end <= p.end) ++s;
        paras.emplace_back(first, s - first);
      }
      if (unit == PassageUnit::paragraph) {
        for (const auto& [first, count] : paras) {
          out.push_back({unit, chapter.sentence_span(first, count), first, count,
                         std::nullopt});
        }
        return out;
      }
      std::size_t first = 0, count = 0;
      for (const auto& [pf, pc] : paras) {
        if (count > 0 && count + pc > chunk.max_sentences) {
          out.push_back({unit, chapter.sentence_span(first, count), first, count,
                         std::nullopt});
          count = 0;
        }
        if (count == 0) first = pf;
        count += pc;
      }
      if (count > 0) {
        out.push_back({unit, chapter.sentence_span(first, count), first, count,
                       std::nullopt});
      }
      return out;
    }
    case PassageUnit::row:
      throw ConfigError("row passages need alignment rows; use row_passages");
  }
  throw ConfigError("unknown passage unit");
}

/// One passage per alignment row: the row's original span.
inline std::vector<PassagePair> row_passages(const Document& original,
                                             const std::vector<AlignmentRow>& rows) {
  std::vector<PassagePair> out;
  for (const auto& r : rows) {
    out.push_back({PassageUnit::row, original.sentence_span(r.o_start, r.o_len),
                   r.o_start, r.o_len, std::nullopt});
  }
  return out;
}

/// Fills in each passage's abridged range from chapter slices.
inline std::vector<PassagePair> map_passages(std::vector<PassagePair> passages,
                                             const std::vector<Slice>& slices) {
  for (auto& p : passages) p.a_chars = passage_abridgement(slices, p.o_chars);
  return passages;
}

enum class TokenLabel : int { preserved = 0, removed = 1 };

struct LabeledToken {
  Token token;
  TokenLabel label = TokenLabel::removed;
};

/// A token is preserved when its (lowercased) text occurs anywhere in the
/// abridged tokens.
inline std::vector<LabeledToken> label_tokens(const std::vector<Token>& o_tokens,
                                              const std::vector<Token>& a_tokens) {
  std::set<std::string_view> a_types;
  for (const auto& t : a_tokens) a_types.insert(t.text);
  std::vector<LabeledToken> out;
  out.reserve(o_tokens.size());
  for (const auto& t : o_tokens) {
    out.push_back({t, a_types.count(t.text) ? TokenLabel::preserved
                                            : TokenLabel::removed});
  }
  return out;
}

/// Gold labels for every original token of an aligned chapter, each row
/// labeled against its own abridged span.
inline std::vector<LabeledToken> chapter_labels(const Document& original,
                                                const Document& abridged,
                                                const std::vector<AlignmentRow>& rows) {
  std::vector<LabeledToken> out;
  for (const auto& r : rows) {
    auto labels = label_tokens(original.sentence_tokens(r.o_start, r.o_len),
                               abridged.sentence_tokens(r.a_start, r.a_len));
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

}  // namespace abridger

#endif  // ABRIDGER_PASSAGE_MAP_HPP
