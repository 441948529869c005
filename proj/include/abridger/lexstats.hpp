#ifndef ABRIDGER_LEXSTATS_HPP
#define ABRIDGER_LEXSTATS_HPP

// Corpus characterization: size statistics, row-size and score
// distributions, per-row lexical relations and a coarse function/content
// word split.

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abridger/aligner.hpp"
#include "abridger/error.hpp"
#include "abridger/passage_map.hpp"
#include "abridger/text.hpp"
#include "abridger/unicode.hpp"

namespace abridger {

struct LexRelation {
  // Type-level counts (distinct lowercased words).
  std::size_t o_rmv = 0;
  std::size_t o_prsv = 0;
  std::size_t a_add = 0;
  std::size_t a_prsv = 0;
  // Token-level counts (occurrences whose type is removed/added/preserved).
  std::size_t o_rmv_tokens = 0;
  std::size_t o_prsv_tokens = 0;
  std::size_t a_add_tokens = 0;
  std::size_t a_prsv_tokens = 0;
  bool has_rmv = false;
  bool has_prsv = false;
  bool has_add = false;
  bool has_reord = false;
};

/// True when the matching slices, read in abridged order, do not advance
/// strictly through the original.
inline bool detect_reordering(const std::vector<Token>& o_tokens,
                              const std::vector<Token>& a_tokens) {
  auto slices = matching_slices(o_tokens, a_tokens);
  if (slices.size() < 2) return false;
  std::sort(slices.begin(), slices.end(),
            [](const Slice& x, const Slice& y) { return x.a_token < y.a_token; });
  for (std::size_t k = 1; k < slices.size(); ++k) {
    if (slices[k].o_token <= slices[k - 1].o_token) return true;
  }
  return false;
}

inline LexRelation lexical_relations(const std::vector<Token>& o_tokens,
                                     const std::vector<Token>& a_tokens) {
  std::set<std::string_view> o_types, a_types;
  for (const auto& t : o_tokens) o_types.insert(t.text);
  for (const auto& t : a_tokens) a_types.insert(t.text);
  LexRelation rel;
  for (const auto& w : o_types) (a_types.count(w) ? rel.o_prsv : rel.o_rmv)++;
  for (const auto& w : a_types) (o_types.count(w) ? rel.a_prsv : rel.a_add)++;
  for (const auto& t : o_tokens) {
    (a_types.count(t.text) ? rel.o_prsv_tokens : rel.o_rmv_tokens)++;
  }
  for (const auto& t : a_tokens) {
    (o_types.count(t.text) ? rel.a_prsv_tokens : rel.a_add_tokens)++;
  }
  rel.has_rmv = rel.o_rmv > 0;
  rel.has_prsv = rel.o_prsv > 0;
  rel.has_add = rel.a_add > 0;
  rel.has_reord = detect_reordering(o_tokens, a_tokens);
  return rel;
}

/// Labeled percentages over a fixed list of buckets. `total` is the number
/// of counted items; empty() marks a distribution over no input.
struct Distribution {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  bool empty() const { return total == 0; }
  double percent(std::size_t k) const {
    return total ? 100.0 * double(counts[k]) / double(total) : 0.0;
  }
  double percent(std::string_view label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("no bucket " + std::string(label));
    return percent(static_cast<std::size_t>(it - labels.begin()));
  }
};

inline constexpr std::array<const char*, 6> kScoreBins = {
    "0.0", "(0,0.25]", "(0.25,0.5]", "(0.5,0.75]", "(0.75,1.0)", "1.0"};

inline std::size_t score_bin(double s) {
  if (s <= 0.0) return 0;
  if (s >= 1.0) return 5;
  if (s <= 0.25) return 1;
  if (s <= 0.5) return 2;
  if (s <= 0.75) return 3;
  return 4;
}

inline Distribution score_bins(const std::vector<AlignmentRow>& rows) {
  Distribution d{{kScoreBins.begin(), kScoreBins.end()}, std::vector<std::size_t>(6), 0};
  for (const auto& r : rows) {
    ++d.counts[score_bin(r.score)];
    ++d.total;
  }
  return d;
}

inline constexpr std::array<const char*, 5> kSizeCategories = {
    "(1,1)", "(1,0)", "(2+,1)", "(1,2+)", "(2+,2+)"};

inline Distribution size_distribution(const std::vector<AlignmentRow>& rows) {
  Distribution d{{kSizeCategories.begin(), kSizeCategories.end()},
                 std::vector<std::size_t>(5), 0};
  for (const auto& r : rows) {
    std::size_t k;
    if (r.a_len == 0) {
      if (r.o_len != 1) throw InputError("row with several original sentences and an empty abridged span");
      k = 1;
    } else if (r.o_len == 1) {
      k = r.a_len == 1 ? 0 : 3;
    } else {
      k = r.a_len == 1 ? 2 : 4;
    }
    ++d.counts[k];
    ++d.total;
  }
  return d;
}

/// Closed-class (function) word list; punctuation is always functional.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::set<std::string> words) : words_(std::move(words)) {}

  static Lexicon load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon file: " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      words.insert(unicode::lower_utf8(unicode::decode(line)));
    }
    return Lexicon(std::move(words));
  }

  bool is_function(std::string_view word) const {
    if (words_.count(std::string(word))) return true;
    const auto cps = unicode::decode(word);
    return !cps.empty() && std::all_of(cps.begin(), cps.end(),
                                       [](char32_t c) { return unicode::is_punct(c); });
  }

  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

struct CategoryShare {
  std::size_t function_words = 0;
  std::size_t content_words = 0;

  std::size_t total() const { return function_words + content_words; }
  bool empty() const { return total() == 0; }
  double function_pct() const {
    return empty() ? 0.0 : 100.0 * double(function_words) / double(total());
  }
  double content_pct() const {
    return empty() ? 0.0 : 100.0 * double(content_words) / double(total());
  }
  void add(const Lexicon& lex, std::string_view word) {
    (lex.is_function(word) ? function_words : content_words)++;
  }
};

/// Function/content shares over original words, removed original words,
/// abridged words and added abridged words (token counts).
struct CategoryStats {
  CategoryShare original;
  CategoryShare removed;
  CategoryShare abridged;
  CategoryShare added;
};

inline void accumulate_categories(CategoryStats& stats, const Lexicon& lex,
                                  const std::vector<Token>& o_tokens,
                                  const std::vector<Token>& a_tokens) {
  std::set<std::string_view> o_types, a_types;
  for (const auto& t : o_tokens) o_types.insert(t.text);
  for (const auto& t : a_tokens) a_types.insert(t.text);
  for (const auto& t : o_tokens) {
    stats.original.add(lex, t.text);
    if (!a_types.count(t.text)) stats.removed.add(lex, t.text);
  }
  for (const auto& t : a_tokens) {
    stats.abridged.add(lex, t.text);
    if (!o_types.count(t.text)) stats.added.add(lex, t.text);
  }
}

inline CategoryStats category_stats(const std::vector<AlignedChapter>& dataset,
                                    const Lexicon& lex) {
  CategoryStats stats;
  for (const auto& ch : dataset) {
    for (const auto& r : ch.rows) {
      accumulate_categories(stats, lex,
                            ch.pair.original.sentence_tokens(r.o_start, r.o_len),
                            ch.pair.abridged.sentence_tokens(r.a_start, r.a_len));
    }
  }
  return stats;
}

/// Accumulated lexical relations over many rows.
struct RelationTotals {
  std::size_t rows = 0;
  LexRelation sum;  // counts summed, flags unused
  std::size_t rows_rmv = 0, rows_prsv = 0, rows_add = 0, rows_reord = 0;

  void add(const LexRelation& r) {
    ++rows;
    sum.o_rmv += r.o_rmv;
    sum.o_prsv += r.o_prsv;
    sum.a_add += r.a_add;
    sum.a_prsv += r.a_prsv;
    sum.o_rmv_tokens += r.o_rmv_tokens;
    sum.o_prsv_tokens += r.o_prsv_tokens;
    sum.a_add_tokens += r.a_add_tokens;
    sum.a_prsv_tokens += r.a_prsv_tokens;
    rows_rmv += r.has_rmv;
    rows_prsv += r.has_prsv;
    rows_add += r.has_add;
    rows_reord += r.has_reord;
  }
};

inline RelationTotals relation_totals(const std::vector<AlignedChapter>& dataset) {
  RelationTotals t;
  for (const auto& ch : dataset) {
    for (const auto& r : ch.rows) {
      t.add(lexical_relations(ch.pair.original.sentence_tokens(r.o_start, r.o_len),
                              ch.pair.abridged.sentence_tokens(r.a_start, r.a_len)));
    }
  }
  return t;
}

struct SplitSummary {
  std::string split;
  std::size_t chapters = 0;
  std::size_t rows = 0;
  std::size_t o_pars = 0, a_pars = 0;
  std::size_t o_sents = 0, a_sents = 0;
  std::size_t o_words = 0, a_words = 0;

  double pct_a_sents() const {
    return o_sents ? 100.0 * double(a_sents) / double(o_sents) : 0.0;
  }
  double pct_a_words() const {
    return o_words ? 100.0 * double(a_words) / double(o_words) : 0.0;
  }
  double per_chapter(std::size_t v) const {
    return chapters ? double(v) / double(chapters) : 0.0;
  }
};

/// Per-split size totals. Words are tokens, punctuation included.
inline std::vector<SplitSummary> corpus_summary(
    const std::vector<AlignedChapter>& dataset) {
  std::map<std::string, SplitSummary> by_split;
  for (const auto& ch : dataset) {
    auto& s = by_split[ch.pair.split];
    s.split = ch.pair.split;
    ++s.chapters;
    s.rows += ch.rows.size();
    s.o_pars += ch.pair.original.paragraphs().size();
    s.a_pars += ch.pair.abridged.paragraphs().size();
    s.o_sents += ch.pair.original.sentence_count();
    s.a_sents += ch.pair.abridged.sentence_count();
    s.o_words += ch.pair.original.tokens().size();
    s.a_words += ch.pair.abridged.tokens().size();
  }
  std::vector<SplitSummary> out;
  for (auto& [k, v] : by_split) out.push_back(v);
  return out;
}

}  // namespace abridger

#endif  // ABRIDGER_LEXSTATS_HPP
