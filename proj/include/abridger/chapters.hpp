#ifndef ABRIDGER_CHAPTERS_HPP
#define ABRIDGER_CHAPTERS_HPP

// Chapter heading detection and original/abridged chapter pairing.

#include <algorithm>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include "abridger/error.hpp"
#include "abridger/text.hpp"
#include "abridger/unicode.hpp"

namespace abridger {

/// Default heading patterns; the first is the plain numbered form
/// "Chapter 12: Title".
inline const std::vector<std::string>& default_heading_patterns() {
  static const std::vector<std::string> patterns = {
      R"(^Chapter [0-9]+:*[a-zA-Z\s]*$)",
      R"(^CHAPTER [0-9]+\.?[^a-z]*$)",
      R"(^(CHAPTER|Chapter) [IVXLCDM]+\.?.*$)",
  };
  return patterns;
}

/// Reads a pattern file: one regex per line, blank lines and lines starting
/// with '#' ignored.
inline std::vector<std::string> load_heading_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open heading pattern file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line);
  }
  if (out.empty()) throw ConfigError("heading pattern file has no patterns: " + path);
  return out;
}

struct DetectedChapter {
  std::string heading;
  CharRange body;  // scalar offsets into the book text
};

inline constexpr const char* kUntitledChapter = "untitled";

/// Splits a book into chapters at lines fully matching any heading pattern.
/// Each body runs from just after its heading line to the start of the next
/// heading line; text before the first heading is dropped. Without any
/// matching line the whole text is a single chapter headed kUntitledChapter.
inline std::vector<DetectedChapter> detect_chapters(
    std::string_view raw_text, const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw ConfigError("no heading patterns given");
  std::vector<std::regex> compiled;
  compiled.reserve(patterns.size());
  for (const auto& p : patterns) {
    try {
      compiled.emplace_back(p, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw ConfigError("invalid heading pattern '" + p + "': " + e.what());
    }
  }

  const std::u32string cps = unicode::decode(raw_text);
  struct Heading {
    std::string text;
    std::size_t line_start;
    std::size_t body_start;
  };
  std::vector<Heading> headings;
  std::size_t pos = 0;
  while (pos <= cps.size()) {
    std::size_t eol = pos;
    while (eol < cps.size() && cps[eol] != U'\n') ++eol;
    std::size_t content_end = eol;
    if (content_end > pos && cps[content_end - 1] == U'\r') --content_end;
    const std::string line = unicode::encode(
        std::u32string_view(cps).substr(pos, content_end - pos));
    for (const auto& re : compiled) {
      if (std::regex_match(line, re)) {
        headings.push_back(
            {line, pos, eol < cps.size() ? eol + 1 : cps.size()});
        break;
      }
    }
    if (eol >= cps.size()) break;
    pos = eol + 1;
  }

  std::vector<DetectedChapter> out;
  if (headings.empty()) {
    out.push_back({kUntitledChapter, {0, cps.size()}});
    return out;
  }
  for (std::size_t k = 0; k < headings.size(); ++k) {
    const std::size_t end =
        k + 1 < headings.size() ? headings[k + 1].line_start : cps.size();
    out.push_back({headings[k].text, {headings[k].body_start, end}});
  }
  return out;
}

struct ChapterPair {
  std::string book_id;
  std::string chapter_id;
  Document original;
  Document abridged;
  std::string split = "all";
};

/// Identifier of a chapter across books: "book::chapter", or just the
/// chapter id when there is no book id.
inline std::string chapter_key(const std::string& book_id,
                               const std::string& chapter_id) {
  return book_id.empty() ? chapter_id : book_id + "::" + chapter_id;
}

struct ChapterText {
  std::string heading;
  std::string text;
};

/// Extracts detected chapters as standalone UTF-8 texts.
inline std::vector<ChapterText> split_chapters(
    std::string_view raw_text, const std::vector<std::string>& patterns) {
  const std::u32string cps = unicode::decode(raw_text);
  std::vector<ChapterText> out;
  for (const auto& ch : detect_chapters(raw_text, patterns)) {
    out.push_back({ch.heading,
                   unicode::encode(std::u32string_view(cps).substr(
                       ch.body.start, ch.body.size()))});
  }
  return out;
}

/// Pairs chapters by position; the chapter id comes from the original
/// heading (made unique with a #n suffix when headings repeat).
inline std::vector<ChapterPair> pair_chapters(
    const std::string& book_id, const std::vector<ChapterText>& original,
    const std::vector<ChapterText>& abridged,
    const SegmenterOptions& opts = {}) {
  if (original.size() != abridged.size()) {
    const auto& longer = original.size() > abridged.size() ? original : abridged;
    const std::size_t first = std::min(original.size(), abridged.size());
    throw InputError("chapter count mismatch for book " + book_id + ": " +
                     std::to_string(original.size()) + " original vs " +
                     std::to_string(abridged.size()) +
                     " abridged; first unmatched heading: '" +
                     longer[first].heading + "' (" +
                     (original.size() > abridged.size() ? "original" : "abridged") +
                     ")");
  }
  std::vector<ChapterPair> out;
  std::vector<std::string> seen;
  for (std::size_t k = 0; k < original.size(); ++k) {
    std::string id = original[k].heading;
    int dup = 1;
    while (std::find(seen.begin(), seen.end(), id) != seen.end()) {
      id = original[k].heading + "#" + std::to_string(++dup);
    }
    seen.push_back(id);
    out.push_back({book_id, id,
                   Document::from_text(book_id + "/" + id + "/original",
                                       original[k].text, opts),
                   Document::from_text(book_id + "/" + id + "/abridged",
                                       abridged[k].text, opts),
                   "all"});
  }
  return out;
}

}  // namespace abridger

#endif  // ABRIDGER_CHAPTERS_HPP
