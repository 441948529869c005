#ifndef ABRIDGER_TEXT_HPP
#define ABRIDGER_TEXT_HPP

// Documents, sentence/paragraph segmentation and word tokenization.
//
// Offsets are half-open ranges over Unicode scalar values. A Document keeps
// the raw text untouched; segmentation only records where sentences and
// paragraphs sit, so every whitespace character (line breaks included)
// survives round trips.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abridger/error.hpp"
#include "abridger/unicode.hpp"

namespace abridger {

struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;

  constexpr std::size_t size() const { return end - start; }
  constexpr bool empty() const { return end <= start; }
  friend constexpr bool operator==(const CharRange&, const CharRange&) = default;
};

struct Token {
  std::string text;  // lowercased
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SegmenterOptions {
  /// Treat every single line break as a paragraph (and sentence) boundary.
  /// Off by default: paragraphs are separated by blank lines and single
  /// line breaks are ordinary whitespace (hard-wrapped text).
  bool line_is_paragraph = false;
};

/// Abbreviations after which a single period does not end a sentence.
/// Matching is on the lowercased word (internal periods included) that
/// precedes the period.
inline constexpr std::array<std::string_view, 38> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",   "st",    "jr",    "sr",   "prof",
    "rev",  "hon",  "capt", "col",  "gen",   "lt",    "sgt",  "maj",
    "messrs", "mme", "mlle", "mm",  "esq",   "etc",   "vs",   "viz",
    "no",   "vol",  "ch",   "chap", "fig",   "p",     "pp",   "e.g",
    "i.e",  "cf",   "ave",  "sq",   "gov",   "rt"};

namespace detail {

constexpr bool is_terminator(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x2026;
}

constexpr bool is_closer(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'}':
    case 0x2019:  // ’
    case 0x201D:  // ”
    case 0x00BB:  // »
      return true;
    default:
      return false;
  }
}

inline bool is_abbreviation(std::u32string_view text, std::size_t period) {
  std::size_t b = period;
  while (b > 0) {
    const char32_t c = text[b - 1];
    if (unicode::is_word_char(c) || (c == U'.' && b - 1 > 0 &&
                                     unicode::is_word_char(text[b - 2]))) {
      --b;
    } else {
      break;
    }
  }
  if (b == period) return false;
  const std::string word = unicode::lower_utf8(text.substr(b, period - b));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

/// True when the whitespace gap [from, to) separates paragraphs.
inline bool is_paragraph_gap(std::u32string_view text, std::size_t from,
                             std::size_t to, const SegmenterOptions& opts) {
  int breaks = 0;
  for (std::size_t i = from; i < to; ++i) {
    if (unicode::is_newline(text[i])) ++breaks;
  }
  return breaks >= (opts.line_is_paragraph ? 1 : 2);
}

inline std::size_t trim_end(std::u32string_view text, std::size_t from,
                            std::size_t end) {
  while (end > from && unicode::is_space(text[end - 1])) --end;
  return end;
}

}  // namespace detail

/// Rule-based sentence segmentation.
///
/// A sentence ends after a run of . ! ? … (plus trailing closing quotes and
/// brackets) that is followed by whitespace or end of text, unless the run
/// is a single period closing a known abbreviation. Paragraph gaps always
/// force a boundary. Returned ranges never include leading or trailing
/// whitespace.
inline std::vector<CharRange> segment_sentences(
    std::u32string_view text, const SegmenterOptions& opts = {}) {
  std::vector<CharRange> out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    while (i < n && unicode::is_space(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    std::size_t end = n;
    std::size_t next = n;
    while (i < n) {
      const char32_t c = text[i];
      if (unicode::is_space(c)) {
        std::size_t j = i;
        while (j < n && unicode::is_space(text[j])) ++j;
        if (detail::is_paragraph_gap(text, i, j, opts)) {
          end = i;
          next = j;
          break;
        }
        i = j;
        continue;
      }
      if (detail::is_terminator(c)) {
        std::size_t j = i;
        while (j < n && detail::is_terminator(text[j])) ++j;
        const bool single_period = (j == i + 1 && c == U'.');
        while (j < n && detail::is_closer(text[j])) ++j;
        if (j == n || unicode::is_space(text[j])) {
          if (!(single_period && detail::is_abbreviation(text, i))) {
            end = j;
            next = j;
            break;
          }
        }
        i = j;
        continue;
      }
      ++i;
    }
    if (i >= n) {
      end = detail::trim_end(text, start, n);
      next = n;
    }
    out.push_back({start, end});
    i = next;
  }
  return out;
}

/// Groups consecutive sentences into paragraphs. A paragraph span runs from
/// the start of its first sentence to the end of its last one.
inline std::vector<CharRange> segment_paragraphs(
    std::u32string_view text, const std::vector<CharRange>& sentences,
    const SegmenterOptions& opts = {}) {
  std::vector<CharRange> out;
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    if (k == 0 || detail::is_paragraph_gap(text, sentences[k - 1].end,
                                           sentences[k].start, opts)) {
      out.push_back(sentences[k]);
    } else {
      out.back().end = sentences[k].end;
    }
  }
  return out;
}

/// Tokenizes text[range]: maximal runs of word characters (letters, digits,
/// plus apostrophes and hyphens joining two word characters), and each
/// remaining punctuation mark on its own. Offsets are absolute in `text`.
inline std::vector<Token> tokenize(std::u32string_view text, CharRange range) {
  std::vector<Token> out;
  const std::size_t end = std::min(range.end, text.size());
  std::size_t i = range.start;
  while (i < end) {
    const char32_t c = text[i];
    if (unicode::is_space(c) || unicode::is_control(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (unicode::is_word_char(c)) {
      while (j < end) {
        if (unicode::is_word_char(text[j])) {
          ++j;
        } else if ((unicode::is_apostrophe(text[j]) ||
                    unicode::is_hyphen(text[j])) &&
                   j + 1 < end && unicode::is_word_char(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
    }
    out.push_back({unicode::lower_utf8(text.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

inline std::vector<Token> tokenize(std::u32string_view text) {
  return tokenize(text, {0, text.size()});
}

/// Token texts of a UTF-8 string.
inline std::vector<std::string> word_list(std::string_view utf8) {
  const std::u32string cps = unicode::decode(utf8);
  std::vector<std::string> out;
  for (auto& t : tokenize(cps)) out.push_back(std::move(t.text));
  return out;
}

/// A chapter (or any text) with its sentence and paragraph index.
class Document {
 public:
  Document() = default;

  /// Segments `utf8` with the rule-based segmenter.
  static Document from_text(std::string id, std::string utf8,
                            const SegmenterOptions& opts = {}) {
    Document d;
    d.id_ = std::move(id);
    d.text_ = std::move(utf8);
    d.cps_ = unicode::decode(d.text_);
    d.sentences_ = segment_sentences(d.cps_, opts);
    d.paragraphs_ = segment_paragraphs(d.cps_, d.sentences_, opts);
    return d;
  }

  /// Uses stored spans (e.g. a reviewed chapters.jsonl with hand-fixed
  /// sentence boundaries). Throws InputError if they break the invariants.
  static Document from_spans(std::string id, std::string utf8,
                             std::vector<CharRange> sentences,
                             std::vector<CharRange> paragraphs) {
    Document d;
    d.id_ = std::move(id);
    d.text_ = std::move(utf8);
    d.cps_ = unicode::decode(d.text_);
    d.sentences_ = std::move(sentences);
    d.paragraphs_ = std::move(paragraphs);
    d.validate();
    return d;
  }

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  std::u32string_view chars() const { return cps_; }
  std::size_t size() const { return cps_.size(); }
  const std::vector<CharRange>& sentences() const { return sentences_; }
  const std::vector<CharRange>& paragraphs() const { return paragraphs_; }
  std::size_t sentence_count() const { return sentences_.size(); }

  std::string substr(CharRange r) const {
    r.end = std::min(r.end, cps_.size());
    if (r.start >= r.end) return {};
    return unicode::encode(std::u32string_view(cps_).substr(r.start, r.size()));
  }

  /// Character range covering sentences [first, first + count).
  CharRange sentence_span(std::size_t first, std::size_t count) const {
    if (count == 0) {
      const std::size_t at =
          first < sentences_.size() ? sentences_[first].start
          : sentences_.empty()      ? 0
                                    : sentences_.back().end;
      return {at, at};
    }
    return {sentences_.at(first).start, sentences_.at(first + count - 1).end};
  }

  std::vector<Token> tokens(CharRange r) const { return tokenize(cps_, r); }
  std::vector<Token> tokens() const { return tokenize(cps_); }
  std::vector<Token> sentence_tokens(std::size_t first,
                                     std::size_t count = 1) const {
    if (count == 0) return {};
    return tokenize(cps_, sentence_span(first, count));
  }

  void validate() const {
    std::size_t prev_end = 0;
    for (std::size_t k = 0; k < sentences_.size(); ++k) {
      const auto& s = sentences_[k];
      if (s.empty() || s.end > cps_.size() || (k > 0 && s.start < prev_end)) {
        throw InputError("document " + id_ + ": sentence span " +
                         std::to_string(k) + " is empty, out of range or "
                         "overlapping");
      }
      for (std::size_t i = prev_end; i < s.start; ++i) {
        if (!unicode::is_space(cps_[i]) && (k > 0)) {
          throw InputError("document " + id_ +
                           ": non-whitespace text between sentences at " +
                           std::to_string(i));
        }
      }
      prev_end = s.end;
    }
    std::size_t next_sentence = 0;
    for (std::size_t p = 0; p < paragraphs_.size(); ++p) {
      const auto& para = paragraphs_[p];
      if (next_sentence >= sentences_.size() ||
          sentences_[next_sentence].start != para.start) {
        throw InputError("document " + id_ + ": paragraph " +
                         std::to_string(p) + " does not start on a sentence");
      }
      while (next_sentence < sentences_.size() &&
             sentences_[next_sentence].end < para.end) {
        ++next_sentence;
      }
      if (next_sentence >= sentences_.size() ||
          sentences_[next_sentence].end != para.end) {
        throw InputError("document " + id_ + ": paragraph " +
                         std::to_string(p) + " does not end on a sentence");
      }
      ++next_sentence;
    }
    if (!paragraphs_.empty() && next_sentence != sentences_.size()) {
      throw InputError("document " + id_ +
                       ": paragraphs do not cover every sentence");
    }
  }

 private:
  std::string id_;
  std::string text_;
  std::u32string cps_;
  std::vector<CharRange> sentences_;
  std::vector<CharRange> paragraphs_;
};

/// Tokens of document[range].
inline std::vector<Token> tokenize_words(const Document& doc, CharRange range) {
  if (range.end > doc.size() || range.start > range.end) {
    throw InputError("token range out of document bounds");
  }
  return doc.tokens(range);
}

inline std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

}  // namespace abridger

#endif  // ABRIDGER_TEXT_HPP
