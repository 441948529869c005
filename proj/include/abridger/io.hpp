#ifndef ABRIDGER_IO_HPP
#define ABRIDGER_IO_HPP

// JSONL file formats: chapters, rows, passages, labels, predictions and
// annotations.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "abridger/abridgers.hpp"
#include "abridger/aligner.hpp"
#include "abridger/assessment.hpp"
#include "abridger/chapters.hpp"
#include "abridger/error.hpp"
#include "abridger/passage_map.hpp"

namespace abridger::io {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("write failed: " + path);
}

inline std::vector<json> parse_jsonl(const std::string& content,
                                     const std::string& source) {
  std::vector<json> out;
  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<json> read_jsonl(const std::string& path) {
  return parse_jsonl(read_file(path), path);
}

inline std::string to_jsonl(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.dump();
    out.push_back('\n');
  }
  return out;
}

inline void write_jsonl(const std::string& path, const std::vector<json>& records) {
  write_file(path, to_jsonl(records));
}

template <typename T>
T field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw InputError(where + ": missing field '" + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw InputError(where + ": bad field '" + name + "': " + e.what());
  }
}

inline json ranges_to_json(const std::vector<CharRange>& ranges) {
  json arr = json::array();
  for (const auto& r : ranges) arr.push_back({r.start, r.end});
  return arr;
}

inline std::vector<CharRange> ranges_from_json(const json& arr,
                                               const std::string& where) {
  std::vector<CharRange> out;
  if (!arr.is_array()) throw InputError(where + ": span list is not an array");
  for (const auto& r : arr) {
    if (!r.is_array() || r.size() != 2) throw InputError(where + ": bad span");
    out.push_back({r[0].get<std::size_t>(), r[1].get<std::size_t>()});
  }
  return out;
}

// ---- chapters.jsonl -------------------------------------------------------

inline json document_record(const ChapterPair& pair, const Document& doc,
                            const char* side) {
  json j = {{"book_id", pair.book_id},
            {"chapter_id", pair.chapter_id},
            {"side", side},
            {"text", doc.text()},
            {"sentence_spans", ranges_to_json(doc.sentences())},
            {"paragraph_spans", ranges_to_json(doc.paragraphs())}};
  if (pair.split != "all") j["split"] = pair.split;
  return j;
}

inline std::vector<json> chapters_to_records(const std::vector<ChapterPair>& pairs) {
  std::vector<json> out;
  for (const auto& p : pairs) {
    out.push_back(document_record(p, p.original, "original"));
    out.push_back(document_record(p, p.abridged, "abridged"));
  }
  return out;
}

inline void save_chapters(const std::string& path, const std::vector<ChapterPair>& pairs) {
  write_jsonl(path, chapters_to_records(pairs));
}

/// Loads chapter pairs in order of first appearance. Stored spans are
/// validated against the text.
inline std::vector<ChapterPair> load_chapters(const std::string& path) {
  std::vector<ChapterPair> out;
  std::map<std::string, std::size_t> index;
  std::map<std::string, int> seen_sides;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record " + std::to_string(++n);
    const auto book = j.value("book_id", std::string{});
    const auto chapter = field<std::string>(j, "chapter_id", where);
    const auto side = field<std::string>(j, "side", where);
    const std::string key = chapter_key(book, chapter);
    auto doc = Document::from_spans(
        key + "/" + side, field<std::string>(j, "text", where),
        ranges_from_json(j.at("sentence_spans"), where),
        ranges_from_json(j.value("paragraph_spans", json::array()), where));
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      ChapterPair p;
      p.book_id = book;
      p.chapter_id = chapter;
      p.split = j.value("split", std::string("all"));
      out.push_back(std::move(p));
    }
    auto& pair = out[it->second];
    int bit;
    if (side == "original") {
      pair.original = std::move(doc);
      bit = 1;
    } else if (side == "abridged") {
      pair.abridged = std::move(doc);
      bit = 2;
    } else {
      throw InputError(where + ": side must be 'original' or 'abridged'");
    }
    if (seen_sides[key] & bit) throw InputError(where + ": duplicate " + side + " side for " + key);
    seen_sides[key] |= bit;
  }
  for (const auto& [key, sides] : seen_sides) {
    if (sides != 3) throw InputError(path + ": chapter " + key + " lacks one side");
  }
  return out;
}

// ---- rows.jsonl -----------------------------------------------------------

struct ChapterRows {
  std::string book_id;
  std::string chapter_id;
  std::vector<AlignmentRow> rows;

  std::string key() const { return chapter_key(book_id, chapter_id); }
};

inline json row_record(const std::string& book_id, const std::string& chapter_id,
                       std::size_t index, const AlignmentRow& r) {
  return {{"book_id", book_id},     {"chapter_id", chapter_id},
          {"row_index", index},     {"o_start", r.o_start},
          {"o_len", r.o_len},       {"a_start", r.a_start},
          {"a_len", r.a_len},       {"score", r.score},
          {"flagged", r.flagged},   {"validated", r.validated}};
}

inline std::vector<json> rows_to_records(const std::vector<ChapterRows>& chapters) {
  std::vector<json> out;
  for (const auto& c : chapters) {
    for (std::size_t k = 0; k < c.rows.size(); ++k) {
      out.push_back(row_record(c.book_id, c.chapter_id, k, c.rows[k]));
    }
  }
  return out;
}

inline std::string rows_to_jsonl(const std::vector<ChapterRows>& chapters) {
  return to_jsonl(rows_to_records(chapters));
}

inline void save_rows(const std::string& path, const std::vector<ChapterRows>& chapters) {
  write_file(path, rows_to_jsonl(chapters));
}

inline std::vector<ChapterRows> parse_rows(const std::string& content,
                                           const std::string& source) {
  std::vector<ChapterRows> out;
  std::map<std::string, std::size_t> index;
  std::size_t n = 0;
  for (const auto& j : parse_jsonl(content, source)) {
    const std::string where = source + " record " + std::to_string(++n);
    const auto book = j.value("book_id", std::string{});
    const auto chapter = field<std::string>(j, "chapter_id", where);
    auto [it, inserted] = index.emplace(chapter_key(book, chapter), out.size());
    if (inserted) out.push_back({book, chapter, {}});
    auto& rows = out[it->second].rows;
    if (j.contains("row_index") && field<std::size_t>(j, "row_index", where) != rows.size()) {
      throw InputError(where + ": rows out of order");
    }
    AlignmentRow r;
    r.o_start = field<std::size_t>(j, "o_start", where);
    r.o_len = field<std::size_t>(j, "o_len", where);
    r.a_start = field<std::size_t>(j, "a_start", where);
    r.a_len = field<std::size_t>(j, "a_len", where);
    r.score = j.value("score", 0.0);
    r.flagged = j.value("flagged", false);
    r.validated = j.value("validated", false);
    rows.push_back(r);
  }
  return out;
}

inline std::vector<ChapterRows> load_rows(const std::string& path) {
  return parse_rows(read_file(path), path);
}

/// Pairs every chapter with its rows; missing rows are an error.
inline std::vector<AlignedChapter> join_rows(std::vector<ChapterPair> chapters,
                                             const std::vector<ChapterRows>& rows) {
  std::map<std::string, const ChapterRows*> by_key;
  for (const auto& r : rows) by_key[r.key()] = &r;
  std::vector<AlignedChapter> out;
  for (auto& c : chapters) {
    const auto it = by_key.find(chapter_key(c.book_id, c.chapter_id));
    if (it == by_key.end()) {
      throw InputError("no rows for chapter " + chapter_key(c.book_id, c.chapter_id));
    }
    if (auto err = check_rows(it->second->rows, c.original.sentence_count(),
                              c.abridged.sentence_count())) {
      throw InputError("rows of chapter " + it->first + ": " + *err);
    }
    out.push_back({std::move(c), it->second->rows});
  }
  return out;
}

// ---- passages.jsonl / labels.jsonl ----------------------------------------

inline json passage_record(const ChapterPair& c, const PassagePair& p) {
  json j = {{"book_id", c.book_id},
            {"chapter_id", c.chapter_id},
            {"unit", to_string(p.unit)},
            {"o_start_char", p.o_chars.start},
            {"o_end_char", p.o_chars.end}};
  if (p.a_chars) {
    j["a_start_char"] = p.a_chars->start;
    j["a_end_char"] = p.a_chars->end;
  }
  return j;
}

inline json label_record(const ChapterPair& c, const LabeledToken& t) {
  return {{"book_id", c.book_id},
          {"chapter_id", c.chapter_id},
          {"token_start", t.token.char_start},
          {"token_end", t.token.char_end},
          {"label", static_cast<int>(t.label)}};
}

/// Labels keyed by chapter_key, in file order.
inline std::map<std::string, std::vector<SpanLabel>> load_labels(const std::string& path) {
  std::map<std::string, std::vector<SpanLabel>> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record " + std::to_string(++n);
    const auto key = chapter_key(j.value("book_id", std::string{}),
                                 field<std::string>(j, "chapter_id", where));
    const int label = field<int>(j, "label", where);
    if (label != 0 && label != 1) throw InputError(where + ": label must be 0 or 1");
    out[key].push_back({field<std::size_t>(j, "token_start", where),
                        field<std::size_t>(j, "token_end", where),
                        static_cast<TokenLabel>(label)});
  }
  return out;
}

// ---- pred.jsonl -----------------------------------------------------------

struct PredictedText {
  std::string book_id;
  std::string chapter_id;
  std::string text;
};

inline void save_texts(const std::string& path, const std::vector<PredictedText>& texts) {
  std::vector<json> recs;
  for (const auto& t : texts) {
    recs.push_back({{"book_id", t.book_id}, {"chapter_id", t.chapter_id}, {"text", t.text}});
  }
  write_jsonl(path, recs);
}

/// Texts keyed by chapter_key. Accepts pred.jsonl records and, for
/// chapters.jsonl input, the side named by `side`.
inline std::map<std::string, std::string> load_texts(const std::string& path,
                                                     const std::string& side = "") {
  std::map<std::string, std::string> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record " + std::to_string(++n);
    if (j.contains("side") && !side.empty() && j.at("side").get<std::string>() != side) {
      continue;
    }
    const auto key = chapter_key(j.value("book_id", std::string{}),
                                 field<std::string>(j, "chapter_id", where));
    if (!out.emplace(key, field<std::string>(j, "text", where)).second) {
      throw InputError(where + ": duplicate text for chapter " + key);
    }
  }
  return out;
}

// ---- annotations ----------------------------------------------------------

/// One record per judgement: {"item", "rater", "label"}.
inline AnnotationSet load_annotations(const std::string& path) {
  AnnotationSet set;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record " + std::to_string(++n);
    const auto item = j.at("item").is_string() ? j.at("item").get<std::string>()
                                               : j.at("item").dump();
    set.add(item, field<std::string>(j, "rater", where), field<int>(j, "label", where));
  }
  return set;
}

}  // namespace abridger::io

#endif  // ABRIDGER_IO_HPP
