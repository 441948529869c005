#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <thread>

#include "abridger/error.hpp"
#include "abridger/row_store.hpp"
#include "support.hpp"

using namespace abridger;

namespace {

AlignmentRow row(std::size_t os, std::size_t ol, std::size_t as, std::size_t al) {
  AlignmentRow r;
  r.o_start = os;
  r.o_len = ol;
  r.a_start = as;
  r.a_len = al;
  return r;
}

struct Fixture {
  ChapterPair pair = testing_support::make_pair(
      "Alpha beta gamma. Delta epsilon. Zeta eta theta. Iota kappa.",
      "Alpha beta gamma. Delta epsilon zeta. Iota kappa.");
  std::vector<AlignmentRow> rows = {row(0, 1, 0, 1), row(1, 1, 1, 1), row(2, 1, 2, 0),
                                    row(3, 1, 2, 1)};

  Correction make(CorrectionKind kind, Side side, std::size_t sent, std::size_t src,
                  std::size_t dst) const {
    Correction c;
    c.chapter_id = "book::Chapter 1";
    c.kind = kind;
    c.side = side;
    c.sent_index = sent;
    c.source_row = src;
    c.target_row = dst;
    return c;
  }

  std::vector<AlignmentRow> apply(const Correction& c) const {
    return apply_correction(rows, pair.original, pair.abridged, c);
  }
};

}  // namespace

TEST(Corrections, ApproveChangesOnlyValidated) {
  Fixture f;
  f.rows[1].flagged = true;
  f.rows[1].score = 0.4;
  const auto out = f.apply(f.make(CorrectionKind::approve, Side::original, 0, 1, 1));
  auto expected = f.rows;
  expected[1].validated = true;
  EXPECT_EQ(out, expected);
}

TEST(Corrections, MoveAbridgedSentenceToPreviousRow) {
  Fixture f;
  const auto out = f.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 1, 1, 0));
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].a_start, 0u);
  EXPECT_EQ(out[0].a_len, 2u);
  EXPECT_EQ(out[1].a_len, 0u);
  EXPECT_EQ(out[1].a_start, 2u);
  // "alpha beta gamma . delta epsilon zeta ." against "alpha beta gamma ."
  EXPECT_DOUBLE_EQ(out[0].score, 4.0 / 8.0);
  EXPECT_EQ(out[1].score, 0.0);
  EXPECT_FALSE(check_rows(out, 4, 3).has_value());
  // (1,2) row below threshold is flagged, and so is the row above the new gap.
  EXPECT_TRUE(out[0].flagged);
}

TEST(Corrections, MoveOriginalSentenceDissolvesEmptyRow) {
  Fixture f;
  const auto out = f.apply(f.make(CorrectionKind::move_sentence, Side::original, 2, 2, 1));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[1].o_len, 2u);
  EXPECT_EQ(out[1].a_len, 1u);
  // "delta epsilon zeta ." against "delta epsilon . zeta eta theta ."
  EXPECT_DOUBLE_EQ(out[1].score, 1.0);
}

TEST(Corrections, CrossingMovesAreRejected) {
  Fixture f;
  f.rows = {row(0, 1, 0, 2), row(1, 1, 2, 0), row(2, 1, 2, 0), row(3, 1, 2, 1)};
  // Sentence 0 is not at the edge facing row 1.
  EXPECT_THROW(f.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 0, 0, 1)),
               RejectedCorrection);
  // Row 2 is not adjacent to row 0.
  EXPECT_THROW(f.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 1, 0, 2)),
               RejectedCorrection);
  // Sentence not in the source row.
  EXPECT_THROW(f.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 2, 0, 1)),
               RejectedCorrection);
  // Would leave abridged sentences without an original one.
  EXPECT_THROW(f.apply(f.make(CorrectionKind::move_sentence, Side::original, 0, 0, 1)),
               RejectedCorrection);
}

TEST(Corrections, UnknownRowIsNotFound) {
  Fixture f;
  EXPECT_THROW(f.apply(f.make(CorrectionKind::approve, Side::original, 0, 9, 9)), NotFoundError);
  EXPECT_THROW(f.apply(f.make(CorrectionKind::merge_rows, Side::original, 0, 3, 4)), NotFoundError);
}

TEST(Corrections, MergeAndSplit) {
  Fixture f;
  auto merged = f.apply(f.make(CorrectionKind::merge_rows, Side::original, 0, 1, 2));
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[1], (AlignmentRow{1, 2, 1, 1, 1.0, false, false}));

  Fixture g;
  g.rows = merged;
  const auto split = g.apply(g.make(CorrectionKind::split_row, Side::original, 2, 1, 1));
  ASSERT_EQ(split.size(), 4u);
  EXPECT_EQ(split[1].o_len, 1u);
  EXPECT_EQ(split[2].a_len, 0u);

  g.rows = {row(0, 1, 0, 1), row(1, 3, 1, 2)};
  const auto by_abridged = g.apply(g.make(CorrectionKind::split_row, Side::abridged, 2, 1, 1));
  ASSERT_EQ(by_abridged.size(), 3u);
  EXPECT_EQ(by_abridged[1].o_len, 2u);
  EXPECT_EQ(by_abridged[1].a_len, 1u);
  EXPECT_EQ(by_abridged[2].o_start, 3u);
  EXPECT_EQ(by_abridged[2].a_start, 2u);

  // Splitting at the first sentence of a row is not a split.
  EXPECT_THROW(g.apply(g.make(CorrectionKind::split_row, Side::original, 1, 1, 1)),
               RejectedCorrection);
  // An original-side split of a multi-sentence deletion run is normalized.
  g.rows = {row(0, 3, 0, 1), row(3, 1, 1, 2)};
  const auto n = g.apply(g.make(CorrectionKind::split_row, Side::original, 1, 0, 0));
  EXPECT_EQ(n.size(), 4u);
  EXPECT_FALSE(check_rows(n, 4, 3).has_value());
}

TEST(Corrections, JsonRoundTrip) {
  Fixture f;
  auto c = f.make(CorrectionKind::split_row, Side::abridged, 3, 1, 1);
  c.timestamp = "2026-01-01T00:00:00Z";
  c.validator_id = "v1";
  const auto back = correction_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(correction_from_json(io::json{{"kind", "move"}, {"source_row", 0}}), Error);
}

TEST(Store, ReplayReproducesState) {
  testing_support::TempDir dir;
  Fixture f;
  const std::vector<io::ChapterRows> base{{"book", "Chapter 1", f.rows}};
  const std::string log = dir.file("corrections.jsonl");
  std::string exported;
  {
    RowStore store({f.pair}, base, log, {});
    store.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 1, 1, 0));
    store.apply(f.make(CorrectionKind::approve, Side::original, 0, 0, 0));
    EXPECT_THROW(store.apply(f.make(CorrectionKind::approve, Side::original, 0, 7, 7)),
                 NotFoundError);
    exported = store.export_jsonl();
    EXPECT_TRUE(store.snapshot()->chapters[0].rows[0].validated);
  }
  RowStore reopened({f.pair}, base, log, {});
  EXPECT_EQ(reopened.export_jsonl(), exported);
  // Rejected corrections are not logged.
  EXPECT_EQ(io::read_jsonl(log).size(), 2u);
}

TEST(Store, CorruptLogNamesLine) {
  testing_support::TempDir dir;
  Fixture f;
  io::write_file(dir.file("log.jsonl"),
                 "{\"chapter_id\":\"book::Chapter 1\",\"kind\":\"approve\",\"source_row\":0}\n"
                 "{\"chapter_id\":\"book::Chapter 1\",\"kind\":\"approve\",\"source_row\":99}\n");
  try {
    RowStore store({f.pair}, {{"book", "Chapter 1", f.rows}}, dir.file("log.jsonl"), {});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Store, UnknownChapter) {
  Fixture f;
  RowStore store({f.pair}, {{"book", "Chapter 1", f.rows}}, "", {});
  auto c = f.make(CorrectionKind::approve, Side::original, 0, 0, 0);
  c.chapter_id = "nope";
  EXPECT_THROW(store.apply(c), NotFoundError);
  EXPECT_THROW(RowStore({f.pair}, {{"book", "Other", f.rows}}, "", {}), InputError);
}

TEST(Store, ReadersNeverSeeBrokenRows) {
  Fixture f;
  RowStore store({f.pair}, {{"book", "Chapter 1", f.rows}}, "", {});
  std::atomic<bool> done{false};
  std::atomic<int> violations{0};
  std::thread reader([&] {
    while (!done) {
      const auto snap = store.snapshot();
      if (check_rows(snap->chapters[0].rows, 4, 3)) ++violations;
    }
  });
  for (int k = 0; k < 200; ++k) {
    store.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 1, 1, 0));
    store.apply(f.make(CorrectionKind::move_sentence, Side::abridged, 1, 0, 1));
  }
  done = true;
  reader.join();
  EXPECT_EQ(violations.load(), 0);
  EXPECT_EQ(store.snapshot()->chapters[0].rows[1].a_len, 1u);
}
