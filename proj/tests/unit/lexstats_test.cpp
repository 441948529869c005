#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>

#include "abridger/error.hpp"
#include "abridger/lexstats.hpp"
#include "support.hpp"

using namespace abridger;

namespace {

std::vector<Token> toks(const std::string& s) { return tokenize(unicode::decode(s)); }

AlignmentRow row(std::size_t ol, std::size_t al, double score = 0.0) {
  AlignmentRow r;
  r.o_len = ol;
  r.a_len = al;
  r.score = score;
  return r;
}

double percent_sum(const Distribution& d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.counts.size(); ++k) s += d.percent(k);
  return s;
}

}  // namespace

TEST(LexRelations, TableRowOne) {
  const auto rel = lexical_relations(
      toks("The letter was not unproductive. It re-established peace and kindness."),
      toks("The letter re-established peace and kindness."));
  EXPECT_EQ(rel.o_rmv, 4u);  // was, not, unproductive, it
  EXPECT_EQ(rel.a_add, 0u);
  EXPECT_EQ(rel.o_prsv, 7u);
  EXPECT_EQ(rel.o_rmv_tokens, 4u);
  EXPECT_EQ(rel.o_prsv_tokens, 8u);
  EXPECT_TRUE(rel.has_rmv);
  EXPECT_FALSE(rel.has_add);
  EXPECT_FALSE(rel.has_reord);
}

TEST(LexRelations, IdentityAndEmpty) {
  const auto o = toks("a b b c.");
  const auto same = lexical_relations(o, o);
  EXPECT_EQ(same.o_rmv, 0u);
  EXPECT_EQ(same.a_add, 0u);
  EXPECT_EQ(same.o_prsv, 4u);
  const auto gone = lexical_relations(o, {});
  EXPECT_EQ(gone.o_prsv, 0u);
  EXPECT_EQ(gone.o_rmv, 4u);
  EXPECT_EQ(gone.a_add + gone.a_prsv, 0u);
}

TEST(LexRelations, PartitionOnRandomRows) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ow = testing_support::random_words(rng, 15, 9);
    const auto aw = testing_support::random_words(rng, 15, 9);
    const auto o = toks(testing_support::join(ow));
    const auto a = toks(testing_support::join(aw));
    const auto rel = lexical_relations(o, a);
    const std::set<std::string> ot(ow.begin(), ow.end()), at(aw.begin(), aw.end());
    EXPECT_EQ(rel.o_rmv + rel.o_prsv, ot.size());
    EXPECT_EQ(rel.a_add + rel.a_prsv, at.size());
    EXPECT_EQ(rel.o_prsv, rel.a_prsv);
    EXPECT_EQ(rel.o_rmv_tokens + rel.o_prsv_tokens, o.size());
    EXPECT_EQ(rel.a_add_tokens + rel.a_prsv_tokens, a.size());
  }
}

TEST(Reordering, Examples) {
  EXPECT_TRUE(detect_reordering(toks("a b c d"), toks("c d a b")));
  EXPECT_FALSE(detect_reordering(toks("a b c d e"), toks("b c d")));
  EXPECT_FALSE(detect_reordering(toks("a b c d"), {}));
  EXPECT_FALSE(detect_reordering(toks("a x b y c"), toks("a b c")));
}

TEST(ScoreBins, Examples) {
  std::vector<AlignmentRow> ones(4, row(1, 1, 1.0));
  const auto all = score_bins(ones);
  EXPECT_DOUBLE_EQ(all.percent("1.0"), 100.0);
  EXPECT_DOUBLE_EQ(all.percent("0.0"), 0.0);

  const auto mixed = score_bins({row(1, 1, 0.0), row(1, 1, 0.3), row(1, 1, 0.8), row(1, 1, 1.0)});
  EXPECT_DOUBLE_EQ(mixed.percent("0.0"), 25.0);
  EXPECT_DOUBLE_EQ(mixed.percent("(0.25,0.5]"), 25.0);
  EXPECT_DOUBLE_EQ(mixed.percent("(0.75,1.0)"), 25.0);
  EXPECT_DOUBLE_EQ(mixed.percent("1.0"), 25.0);
  EXPECT_DOUBLE_EQ(mixed.percent("(0,0.25]"), 0.0);

  const auto none = score_bins({});
  EXPECT_TRUE(none.empty());
  EXPECT_DOUBLE_EQ(percent_sum(none), 0.0);
}

TEST(ScoreBins, Edges) {
  EXPECT_EQ(score_bin(0.25), 1u);
  EXPECT_EQ(score_bin(0.2500001), 2u);
  EXPECT_EQ(score_bin(0.5), 2u);
  EXPECT_EQ(score_bin(0.75), 3u);
  EXPECT_EQ(score_bin(0.999), 4u);
}

TEST(SizeDistribution, Examples) {
  const auto all = size_distribution({row(1, 1), row(1, 1)});
  EXPECT_DOUBLE_EQ(all.percent("(1,1)"), 100.0);
  const auto four = size_distribution({row(1, 1), row(1, 0), row(2, 1), row(1, 3)});
  EXPECT_DOUBLE_EQ(four.percent("(1,1)"), 25.0);
  EXPECT_DOUBLE_EQ(four.percent("(1,0)"), 25.0);
  EXPECT_DOUBLE_EQ(four.percent("(2+,1)"), 25.0);
  EXPECT_DOUBLE_EQ(four.percent("(1,2+)"), 25.0);
  EXPECT_DOUBLE_EQ(four.percent("(2+,2+)"), 0.0);
  EXPECT_THROW(size_distribution({row(2, 0)}), InputError);
}

TEST(Distributions, SumToHundred) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AlignmentRow> rows;
    const std::size_t n = 1 + rng() % 60;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t al = rng() % 4;
      rows.push_back(row(al == 0 ? 1 : 1 + rng() % 3, al, rng() % 5 == 0 ? 1.0 : score(rng)));
    }
    EXPECT_NEAR(percent_sum(score_bins(rows)), 100.0, 0.1);
    EXPECT_NEAR(percent_sum(size_distribution(rows)), 100.0, 0.1);
  }
}

TEST(Categories, CountsAgainstLexicon) {
  const Lexicon lex({"the", "was", "not"});
  CategoryStats stats;
  accumulate_categories(stats, lex, toks("the letter was not unproductive ."), {});
  EXPECT_EQ(stats.original.function_words, 4u);
  EXPECT_EQ(stats.original.content_words, 2u);
  EXPECT_DOUBLE_EQ(stats.original.function_pct(), 400.0 / 6.0);
  EXPECT_EQ(stats.removed.total(), 6u);

  CategoryStats punct;
  accumulate_categories(punct, lex, toks(". , ; !"), {});
  EXPECT_DOUBLE_EQ(punct.original.function_pct(), 100.0);

  EXPECT_TRUE(category_stats({}, lex).original.empty());
}

TEST(Categories, LexiconFile) {
  testing_support::TempDir dir;
  {
    std::ofstream f(dir.file("lex.txt"));
    f << "# closed class\nThe\nof\n\n";
  }
  const auto lex = Lexicon::load(dir.file("lex.txt"));
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_TRUE(lex.is_function("the"));
  EXPECT_FALSE(lex.is_function("letter"));
  EXPECT_THROW(Lexicon::load(dir.file("missing.txt")), ConfigError);
  const auto bundled = Lexicon::load(std::string(ABRIDGER_SOURCE_DIR) + "/config/closed_class.txt");
  EXPECT_TRUE(bundled.is_function("which"));
}

TEST(CorpusSummary, Examples) {
  auto same = testing_support::make_pair("A b c. D e.", "A b c. D e.");
  std::vector<AlignedChapter> one{{same, {row(1, 1, 1.0), row(1, 1, 1.0)}}};
  one[0].rows[1].o_start = one[0].rows[1].a_start = 1;
  const auto s = corpus_summary(one);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s[0].pct_a_sents(), 100.0);
  EXPECT_DOUBLE_EQ(s[0].pct_a_words(), 100.0);

  SplitSummary two;
  two.chapters = 2;
  two.o_words = 100 + 300;
  two.a_words = 50 + 150;
  EXPECT_DOUBLE_EQ(two.pct_a_words(), 50.0);
}

TEST(CorpusSummary, GroupsBySplit) {
  auto a = testing_support::make_pair("A b. C d.", "A b.");
  auto b = testing_support::make_pair("E f.", "E f.", "Chapter 2");
  b.split = "test";
  std::vector<AlignedChapter> data{{a, {row(1, 1, 1.0), row(1, 0)}}, {b, {row(1, 1, 1.0)}}};
  data[0].rows[1].o_start = 1;
  data[0].rows[1].a_start = 1;
  const auto s = corpus_summary(data);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].split, "all");
  EXPECT_EQ(s[0].o_words, 6u);
  EXPECT_EQ(s[0].a_words, 3u);
  EXPECT_EQ(s[1].split, "test");
  EXPECT_EQ(s[1].chapters, 1u);
}
