#ifndef ABRIDGER_ROW_STORE_HPP
#define ABRIDGER_ROW_STORE_HPP

// Reviewed alignment rows: base rows.jsonl plus an append-only log of
// validator corrections. The served state is always the base rows with the
// log replayed over them.

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abridger/aligner.hpp"
#include "abridger/error.hpp"
#include "abridger/io.hpp"

namespace abridger {

enum class CorrectionKind { move_sentence, merge_rows, split_row, approve };
enum class Side { original, abridged };

inline CorrectionKind parse_correction_kind(std::string_view s) {
  if (s == "move_sentence") return CorrectionKind::move_sentence;
  if (s == "merge_rows") return CorrectionKind::merge_rows;
  if (s == "split_row") return CorrectionKind::split_row;
  if (s == "approve") return CorrectionKind::approve;
  throw InputError("unknown correction kind '" + std::string(s) + "'");
}

inline std::string_view to_string(CorrectionKind k) {
  switch (k) {
    case CorrectionKind::move_sentence: return "move_sentence";
    case CorrectionKind::merge_rows: return "merge_rows";
    case CorrectionKind::split_row: return "split_row";
    case CorrectionKind::approve: return "approve";
  }
  return "?";
}

inline Side parse_side(std::string_view s) {
  if (s == "original") return Side::original;
  if (s == "abridged") return Side::abridged;
  throw InputError("side must be 'original' or 'abridged'");
}

inline std::string_view to_string(Side s) {
  return s == Side::original ? "original" : "abridged";
}

/// One validator action on a chapter's rows.
///
///   move_sentence  moves sentence `sent_index` on `side` from `source_row`
///                  into the adjacent `target_row`; it must sit at the edge
///                  of the source facing the target.
///   merge_rows     joins `source_row` with the adjacent `target_row`.
///   split_row      splits `source_row` so that `sent_index` on `side`
///                  starts a new row. An original-side split leaves all
///                  abridged sentences in the first half; an abridged-side
///                  split hands the last original sentence to the second.
///   approve        marks `source_row` validated.
struct Correction {
  std::string chapter_id;  // chapter key, see chapter_key()
  CorrectionKind kind = CorrectionKind::approve;
  Side side = Side::original;
  std::size_t sent_index = 0;
  std::size_t source_row = 0;
  std::size_t target_row = 0;
  std::string timestamp;
  std::string validator_id;
};

inline io::json to_json(const Correction& c) {
  return {{"chapter_id", c.chapter_id},     {"kind", to_string(c.kind)},
          {"side", to_string(c.side)},      {"sent_index", c.sent_index},
          {"source_row", c.source_row},     {"target_row", c.target_row},
          {"timestamp", c.timestamp},       {"validator_id", c.validator_id}};
}

inline Correction correction_from_json(const io::json& j) {
  const std::string where = "correction";
  Correction c;
  c.chapter_id = j.value("chapter_id", std::string{});
  c.kind = parse_correction_kind(io::field<std::string>(j, "kind", where));
  c.side = parse_side(j.value("side", std::string("original")));
  c.sent_index = j.value("sent_index", std::size_t{0});
  c.source_row = io::field<std::size_t>(j, "source_row", where);
  c.target_row = j.value("target_row", c.source_row);
  c.timestamp = j.value("timestamp", std::string{});
  c.validator_id = j.value("validator_id", std::string{});
  return c;
}

namespace detail {

/// Splits (o_len >= 2, a_len = 0) rows into single-sentence deletions.
inline std::vector<AlignmentRow> normalize_rows(const std::vector<AlignmentRow>& rows) {
  std::vector<AlignmentRow> out;
  for (const auto& r : rows) {
    if (r.a_len == 0 && r.o_len > 1) {
      for (std::size_t i = 0; i < r.o_len; ++i) {
        AlignmentRow single = r;
        single.o_start = r.o_start + i;
        single.o_len = 1;
        out.push_back(single);
      }
    } else {
      out.push_back(r);
    }
  }
  return out;
}

inline void require_adjacent(const Correction& c, std::size_t row_count) {
  if (c.target_row >= row_count) {
    throw NotFoundError("row " + std::to_string(c.target_row) + " does not exist");
  }
  if (c.target_row + 1 != c.source_row && c.source_row + 1 != c.target_row) {
    throw RejectedCorrection("target row " + std::to_string(c.target_row) +
                             " is not adjacent to row " + std::to_string(c.source_row));
  }
}

inline void move_sentence(std::vector<AlignmentRow>& rows, const Correction& c) {
  require_adjacent(c, rows.size());
  auto& src = rows[c.source_row];
  auto& dst = rows[c.target_row];
  const bool to_prev = c.target_row < c.source_row;
  const std::string at = " sentence " + std::to_string(c.sent_index);
  if (c.side == Side::original) {
    if (c.sent_index < src.o_start || c.sent_index >= src.o_end()) {
      throw RejectedCorrection("original" + at + " is not in row " + std::to_string(c.source_row));
    }
    const std::size_t edge = to_prev ? src.o_start : src.o_end() - 1;
    if (c.sent_index != edge) {
      throw RejectedCorrection("moving original" + at + " past its neighbours would cross rows");
    }
    if (src.o_len == 1 && src.a_len > 0) {
      throw RejectedCorrection("row " + std::to_string(c.source_row) +
                               " would keep abridged sentences without an original one; merge the rows instead");
    }
    if (to_prev) {
      ++src.o_start;
    } else {
      --dst.o_start;
    }
    --src.o_len;
    ++dst.o_len;
    if (src.o_len == 0) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(c.source_row));
  } else {
    if (c.sent_index < src.a_start || c.sent_index >= src.a_end()) {
      throw RejectedCorrection("abridged" + at + " is not in row " + std::to_string(c.source_row));
    }
    const std::size_t edge = to_prev ? src.a_start : src.a_end() - 1;
    if (c.sent_index != edge) {
      throw RejectedCorrection("moving abridged" + at + " past its neighbours would cross rows");
    }
    if (to_prev) {
      ++src.a_start;
    } else {
      --dst.a_start;
    }
    --src.a_len;
    ++dst.a_len;
  }
  src.validated = false;
  dst.validated = false;
}

inline void merge_rows(std::vector<AlignmentRow>& rows, const Correction& c) {
  require_adjacent(c, rows.size());
  const std::size_t first = std::min(c.source_row, c.target_row);
  AlignmentRow merged = rows[first];
  const AlignmentRow& second = rows[first + 1];
  merged.o_len += second.o_len;
  merged.a_len += second.a_len;
  merged.validated = false;
  rows[first] = merged;
  rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(first + 1));
}

inline void split_row(std::vector<AlignmentRow>& rows, const Correction& c) {
  AlignmentRow head = rows[c.source_row];
  AlignmentRow tail = head;
  head.validated = tail.validated = false;
  if (c.side == Side::original) {
    if (c.sent_index <= head.o_start || c.sent_index >= head.o_end()) {
      throw RejectedCorrection("original sentence " + std::to_string(c.sent_index) +
                               " does not split row " + std::to_string(c.source_row));
    }
    head.o_len = c.sent_index - head.o_start;
    tail.o_start = c.sent_index;
    tail.o_len -= head.o_len;
    tail.a_start = head.a_end();
    tail.a_len = 0;
  } else {
    if (c.sent_index <= head.a_start || c.sent_index >= head.a_end()) {
      throw RejectedCorrection("abridged sentence " + std::to_string(c.sent_index) +
                               " does not split row " + std::to_string(c.source_row));
    }
    if (head.o_len < 2) {
      throw RejectedCorrection("row " + std::to_string(c.source_row) +
                               " has a single original sentence; move the abridged sentences instead");
    }
    head.o_len -= 1;
    head.a_len = c.sent_index - head.a_start;
    tail.o_start = head.o_end();
    tail.o_len = 1;
    tail.a_start = c.sent_index;
    tail.a_len -= head.a_len;
  }
  rows[c.source_row] = head;
  rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(c.source_row + 1), tail);
}

}  // namespace detail

/// Applies one correction to a chapter's rows and returns the new rows with
/// scores and flags recomputed. Throws NotFoundError for unknown rows and
/// RejectedCorrection when the result would break the row invariants.
inline std::vector<AlignmentRow> apply_correction(
    std::vector<AlignmentRow> rows, const Document& original,
    const Document& abridged, const Correction& c,
    const SimilarityConfig& sim = {}, double threshold = kDefaultFlagThreshold) {
  if (c.source_row >= rows.size()) {
    throw NotFoundError("row " + std::to_string(c.source_row) + " does not exist in chapter " +
                        c.chapter_id);
  }
  if (c.kind == CorrectionKind::approve) {
    rows[c.source_row].validated = true;
    return rows;
  }
  switch (c.kind) {
    case CorrectionKind::move_sentence: detail::move_sentence(rows, c); break;
    case CorrectionKind::merge_rows: detail::merge_rows(rows, c); break;
    case CorrectionKind::split_row: detail::split_row(rows, c); break;
    case CorrectionKind::approve: break;
  }
  rows = detail::normalize_rows(rows);
  if (auto err = check_rows(rows, original.sentence_count(), abridged.sentence_count())) {
    throw RejectedCorrection(*err);
  }
  for (auto& r : rows) r.score = row_similarity(original, abridged, r, sim);
  return flag_rows(std::move(rows), threshold);
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Rows of every chapter as served, in base-file order.
struct StoreSnapshot {
  std::vector<io::ChapterRows> chapters;
  std::map<std::string, std::size_t> index;  // chapter key -> position

  const io::ChapterRows* find(const std::string& key) const {
    const auto it = index.find(key);
    return it == index.end() ? nullptr : &chapters[it->second];
  }
};

struct RowStoreOptions {
  SimilarityConfig similarity{};
  double flag_threshold = kDefaultFlagThreshold;
};

/// Single-writer store. Mutations are serialized; readers take immutable
/// snapshots and never see a half-applied correction.
class RowStore {
 public:
  using Options = RowStoreOptions;

  /// Replays `log_path` (if it exists) over `base_rows`.
  RowStore(std::vector<ChapterPair> chapters, std::vector<io::ChapterRows> base_rows,
           std::string log_path, Options options)
      : chapters_(std::make_shared<const std::vector<ChapterPair>>(std::move(chapters))),
        log_path_(std::move(log_path)),
        options_(options) {
    for (std::size_t k = 0; k < chapters_->size(); ++k) {
      const auto& c = (*chapters_)[k];
      doc_index_[chapter_key(c.book_id, c.chapter_id)] = k;
    }
    auto snap = std::make_shared<StoreSnapshot>();
    for (auto& cr : base_rows) {
      const auto* pair = chapter(cr.key());
      if (!pair) throw InputError("rows reference unknown chapter " + cr.key());
      if (auto err = check_rows(cr.rows, pair->original.sentence_count(),
                                pair->abridged.sentence_count())) {
        throw InputError("rows of chapter " + cr.key() + ": " + *err);
      }
      snap->index[cr.key()] = snap->chapters.size();
      snap->chapters.push_back(std::move(cr));
    }
    if (!log_path_.empty()) {
      std::ifstream in(log_path_);
      if (in) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
          ++lineno;
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          try {
            apply_to(*snap, correction_from_json(io::json::parse(line)));
          } catch (const std::exception& e) {
            throw InputError(log_path_ + ":" + std::to_string(lineno) +
                             ": cannot replay correction: " + e.what());
          }
        }
      }
    }
    snapshot_ = std::move(snap);
  }

  static RowStore open(const std::string& chapters_path, const std::string& rows_path,
                       const std::string& log_path, Options options = {}) {
    return RowStore(io::load_chapters(chapters_path), io::load_rows(rows_path), log_path,
                    options);
  }

  RowStore(RowStore&& other) noexcept
      : chapters_(std::move(other.chapters_)),
        doc_index_(std::move(other.doc_index_)),
        log_path_(std::move(other.log_path_)),
        options_(other.options_),
        snapshot_(std::move(other.snapshot_)) {}

  std::shared_ptr<const StoreSnapshot> snapshot() const {
    std::lock_guard<std::mutex> lock(snapshot_mutex_);
    return snapshot_;
  }

  const ChapterPair* chapter(const std::string& key) const {
    const auto it = doc_index_.find(key);
    return it == doc_index_.end() ? nullptr : &(*chapters_)[it->second];
  }

  const std::vector<ChapterPair>& chapters() const { return *chapters_; }

  /// Validates, applies and logs a correction; returns the chapter's new
  /// rows.
  io::ChapterRows apply(Correction c) {
    std::lock_guard<std::mutex> writer(writer_mutex_);
    if (c.timestamp.empty()) c.timestamp = utc_timestamp();
    auto next = std::make_shared<StoreSnapshot>(*snapshot());
    apply_to(*next, c);
    if (!log_path_.empty()) {
      std::ofstream log(log_path_, std::ios::app);
      if (!log) throw Error("cannot append to correction log " + log_path_);
      log << to_json(c).dump() << '\n';
      log.flush();
      if (!log) throw Error("cannot append to correction log " + log_path_);
    }
    io::ChapterRows result = *next->find(c.chapter_id);
    {
      std::lock_guard<std::mutex> lock(snapshot_mutex_);
      snapshot_ = std::move(next);
    }
    return result;
  }

  std::string export_jsonl() const { return io::rows_to_jsonl(snapshot()->chapters); }

 private:
  void apply_to(StoreSnapshot& snap, const Correction& c) const {
    const auto it = snap.index.find(c.chapter_id);
    const auto* pair = chapter(c.chapter_id);
    if (it == snap.index.end() || !pair) {
      throw NotFoundError("unknown chapter " + c.chapter_id);
    }
    auto& rows = snap.chapters[it->second].rows;
    rows = apply_correction(rows, pair->original, pair->abridged, c, options_.similarity,
                            options_.flag_threshold);
  }

  std::shared_ptr<const std::vector<ChapterPair>> chapters_;
  std::map<std::string, std::size_t> doc_index_;
  std::string log_path_;
  Options options_;
  std::shared_ptr<const StoreSnapshot> snapshot_;
  mutable std::mutex snapshot_mutex_;
  std::mutex writer_mutex_;
};

}  // namespace abridger

#endif  // ABRIDGER_ROW_STORE_HPP
