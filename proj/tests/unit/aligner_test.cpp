#include <gtest/gtest.h>

#include <random>

#include "abridger/aligner.hpp"
#include "abridger/assessment.hpp"
#include "abridger/error.hpp"
#include "support.hpp"

using namespace abridger;
using testing_support::Sentences;

namespace {

AlignmentRow row(std::size_t os, std::size_t ol, std::size_t as, std::size_t al, double score = 1.0) {
  AlignmentRow r;
  r.o_start = os;
  r.o_len = ol;
  r.a_start = as;
  r.a_len = al;
  r.score = score;
  return r;
}

double penalized_total(const std::vector<AlignmentRow>& rows, double pn) {
  double t = 0.0;
  for (const auto& r : rows) t += pair_score(r.score, r.o_len, r.a_len, pn);
  return t;
}

}  // namespace

TEST(PairScore, Examples) {
  EXPECT_DOUBLE_EQ(pair_score(0.8, 1, 1, 0.175), 0.8);
  EXPECT_NEAR(pair_score(0.8, 3, 1, 0.175), 0.45, 1e-15);
  EXPECT_EQ(pair_score(0.1, 2, 3, 0.175), 0.0);
}

TEST(Aligner, TableRowOne) {
  const auto pair = testing_support::make_pair(
      "The letter was not unproductive. It re-established peace and kindness.",
      "The letter re-established peace and kindness.");
  const auto rows = align_chapter(pair, AlignerConfig{});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].o_len, 2u);
  EXPECT_EQ(rows[0].a_len, 1u);
  EXPECT_DOUBLE_EQ(rows[0].score, 1.0);
}

TEST(Aligner, EmptyAbridgementDeletesEverything) {
  const auto pair = testing_support::make_pair("A b. C d. E f.", "");
  const auto rows = align_chapter(pair, AlignerConfig{});
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(rows[k], row(k, 1, 0, 0, 0.0));
  }
}

TEST(Aligner, EmptyOriginalIsAnError) {
  EXPECT_THROW(align_sentences({}, {{"a"}}, AlignerConfig{}), InputError);
}

TEST(Aligner, UnreachableWhenAbridgedTooLong) {
  AlignerConfig cfg;
  cfg.a_max = 1;
  EXPECT_THROW(align_sentences({{"a"}}, {{"a"}, {"b"}}, cfg), InputError);
}

TEST(Aligner, ConfigValidation) {
  AlignerConfig cfg;
  cfg.o_max = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.o_max = 3;
  cfg.pn = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Aligner, IdentityIsOneToOne) {
  const Sentences s = {{"a", "b"}, {"c"}, {"d", "e", "f"}, {"g"}};
  const auto res = align_sentences(s, s, AlignerConfig{});
  ASSERT_EQ(res.rows.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(res.rows[k], row(k, 1, k, 1));
  EXPECT_DOUBLE_EQ(res.total_score, 4.0);
}

TEST(Aligner, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(2024);
  AlignerConfig cfg;
  for (int trial = 0; trial < 150; ++trial) {
    const auto o = testing_support::random_sentences(rng, 1, 6, 8, 10);
    const auto a = testing_support::random_sentences(rng, 0, 6, 8, 10);
    if (a.size() > cfg.a_max * o.size()) continue;
    const auto res = align_sentences(o, a, cfg);
    const double oracle = testing_support::brute_force_alignment(o, a, cfg.o_max, cfg.a_max, cfg.pn);
    EXPECT_NEAR(res.total_score, oracle, 1e-12);
    EXPECT_NEAR(penalized_total(res.rows, cfg.pn), res.total_score, 1e-12);
    EXPECT_FALSE(check_rows(res.rows, o.size(), a.size()).has_value());
  }
}

TEST(Aligner, RowsAreValidAndScored) {
  std::mt19937_64 rng(99);
  AlignerConfig cfg;
  cfg.similarity.kind = SimilarityKind::rouge2_precision;
  for (int trial = 0; trial < 50; ++trial) {
    const auto o = testing_support::random_sentences(rng, 1, 12, 8, 6);
    const auto a = testing_support::random_sentences(rng, 0, 8, 8, 6);
    if (a.size() > cfg.a_max * o.size()) continue;
    const auto rows = align_sentences(o, a, cfg).rows;
    ASSERT_FALSE(check_rows(rows, o.size(), a.size()).has_value());
    for (const auto& r : rows) {
      EXPECT_LE(r.o_len, cfg.o_max);
      EXPECT_LE(r.a_len, cfg.a_max);
      const double sim = r.a_len ? testing_support::naive_rouge_precision(
                                       testing_support::concat(a, r.a_start, r.a_len),
                                       testing_support::concat(o, r.o_start, r.o_len), 2)
                                 : 0.0;
      EXPECT_EQ(r.score, sim);
    }
  }
}

TEST(CheckRows, DetectsViolations) {
  EXPECT_FALSE(check_rows({row(0, 1, 0, 1), row(1, 1, 1, 0)}, 2, 1).has_value());
  EXPECT_TRUE(check_rows({row(0, 1, 0, 1), row(2, 1, 1, 0)}, 3, 1).has_value());  // gap
  EXPECT_TRUE(check_rows({row(0, 2, 0, 0)}, 2, 0).has_value());                   // (2,0)
  EXPECT_TRUE(check_rows({row(0, 1, 1, 1)}, 1, 2).has_value());                   // abridged gap
  EXPECT_TRUE(check_rows({row(0, 1, 0, 1)}, 2, 1).has_value());                   // not covering
}

TEST(Flagging, Examples) {
  // score 0.85, a_len 2, neighbours non-empty
  auto rows = flag_rows({row(0, 1, 0, 1), row(1, 1, 1, 2, 0.85), row(2, 1, 3, 1)});
  EXPECT_FALSE(rows[0].flagged);
  EXPECT_TRUE(rows[1].flagged);
  EXPECT_FALSE(rows[2].flagged);
  // score 0.95, a_len 3
  rows = flag_rows({row(0, 1, 0, 3, 0.95)});
  EXPECT_FALSE(rows[0].flagged);
  // score 0.5, a_len 1, next row empty
  rows = flag_rows({row(0, 1, 0, 1, 0.5), row(1, 1, 1, 0, 0.0)});
  EXPECT_TRUE(rows[0].flagged);
  // an empty row is itself low-scoring but needs a_len >= 2 or an empty neighbour
  EXPECT_FALSE(rows[1].flagged);
}

TEST(Flagging, ThresholdIsStrict) {
  auto rows = flag_rows({row(0, 1, 0, 2, 0.9)}, 0.9);
  EXPECT_FALSE(rows[0].flagged);
  rows = flag_rows({row(0, 1, 0, 2, 0.9)}, 0.91);
  EXPECT_TRUE(rows[0].flagged);
}

TEST(RowF1, Examples) {
  const std::vector<AlignmentRow> gold = {row(0, 2, 0, 1)};
  EXPECT_EQ(row_f1(gold, gold), (PrecisionRecall{1, 1, 1}));
  const std::vector<AlignmentRow> pred = {row(0, 1, 0, 1), row(1, 1, 1, 0)};
  const auto s = row_f1(pred, gold);
  EXPECT_DOUBLE_EQ(s.precision, 1.0);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 2.0 / 3.0);
  const std::vector<AlignmentRow> none = {row(0, 1, 0, 0), row(1, 1, 0, 0)};
  EXPECT_EQ(row_f1(none, gold), (PrecisionRecall{0, 0, 0}));
  EXPECT_EQ(row_f1(none, none), (PrecisionRecall{1, 1, 1}));
}

TEST(RowF1, OutOfRangeIsAnError) {
  const std::vector<AlignmentRow> gold = {row(0, 1, 0, 1)};
  const std::vector<AlignmentRow> pred = {row(0, 3, 0, 1)};
  EXPECT_THROW(row_f1(pred, gold), InputError);
  EXPECT_THROW(row_f1(gold, gold, 1, 0), InputError);
}

TEST(Kappa, PerfectAgreement) {
  AnnotationSet set;
  for (int item = 0; item < 10; ++item) {
    for (int rater = 0; rater < 5; ++rater) {
      set.add("i" + std::to_string(item), "r" + std::to_string(rater), item % 2);
    }
  }
  EXPECT_DOUBLE_EQ(fleiss_kappa(set), 1.0);
}

TEST(Kappa, HandComputed) {
  // P1 = (4+1-3)/6 = 1/3, P2 = 1, mean 2/3; p1 = 2/6, p0 = 4/6, Pe = 5/9;
  // kappa = (2/3 - 5/9) / (4/9) = 1/4.
  AnnotationSet set;
  set.add("1", "a", 1);
  set.add("1", "b", 1);
  set.add("1", "c", 0);
  set.add("2", "a", 0);
  set.add("2", "b", 0);
  set.add("2", "c", 0);
  EXPECT_NEAR(fleiss_kappa(set), 0.25, 1e-15);
}

TEST(Kappa, Errors) {
  AnnotationSet degenerate;
  for (const char* item : {"1", "2"}) {
    for (const char* r : {"a", "b"}) degenerate.add(item, r, 1);
  }
  EXPECT_THROW(fleiss_kappa(degenerate), DegenerateError);

  AnnotationSet incomplete;
  incomplete.add("1", "a", 1);
  incomplete.add("1", "b", 0);
  incomplete.add("2", "a", 1);
  EXPECT_THROW(fleiss_kappa(incomplete), InputError);

  AnnotationSet conflicting;
  conflicting.add("1", "a", 1);
  EXPECT_THROW(conflicting.add("1", "a", 0), InputError);
}
