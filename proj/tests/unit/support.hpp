#ifndef ABRIDGER_TESTS_SUPPORT_HPP
#define ABRIDGER_TESTS_SUPPORT_HPP

// Random generators and independent reference implementations shared by the
// unit tests and the acceptance binary. The references are deliberately
// naive and share no code with the library.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "abridger/aligner.hpp"
#include "abridger/chapters.hpp"
#include "abridger/text.hpp"

namespace testing_support {

using Words = std::vector<std::string>;
using Sentences = std::vector<Words>;

inline Words random_words(std::mt19937_64& rng, std::size_t max_len, std::size_t vocab,
                          std::size_t min_len = 0) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  Words out(len(rng));
  for (auto& w : out) w = "w" + std::to_string(word(rng));
  return out;
}

inline Sentences random_sentences(std::mt19937_64& rng, std::size_t min_count,
                                  std::size_t max_count, std::size_t max_words,
                                  std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> count(min_count, max_count);
  Sentences out(count(rng));
  for (auto& s : out) s = random_words(rng, max_words, vocab, 1);
  return out;
}

// Clipped unigram/bigram precision by counting every hypothesis n-gram's
// occurrences directly, no maps.
inline double naive_rouge_precision(const Words& hyp, const Words& ref, std::size_t n) {
  if (hyp.size() < n) return 0.0;
  auto grams = [n](const Words& w) {
    std::vector<Words> g;
    for (std::size_t i = 0; i + n <= w.size(); ++i) g.emplace_back(w.begin() + i, w.begin() + i + n);
    return g;
  };
  const auto hg = grams(hyp);
  const auto rg = grams(ref);
  std::vector<Words> distinct;
  for (const auto& g : hg) {
    if (std::find(distinct.begin(), distinct.end(), g) == distinct.end()) distinct.push_back(g);
  }
  std::size_t matched = 0;
  for (const auto& g : distinct) {
    const auto ch = std::count(hg.begin(), hg.end(), g);
    const auto cr = std::count(rg.begin(), rg.end(), g);
    matched += static_cast<std::size_t>(std::min(ch, cr));
  }
  return double(matched) / double(hg.size());
}

// Exponential-time LCS.
inline std::size_t recursive_lcs(const Words& a, const Words& b, std::size_t i = 0,
                                 std::size_t j = 0) {
  if (i == a.size() || j == b.size()) return 0;
  if (a[i] == b[j]) return 1 + recursive_lcs(a, b, i + 1, j + 1);
  return std::max(recursive_lcs(a, b, i + 1, j), recursive_lcs(a, b, i, j + 1));
}

inline Words concat(const Sentences& s, std::size_t first, std::size_t count) {
  Words out;
  for (std::size_t k = first; k < first + count; ++k) out.insert(out.end(), s[k].begin(), s[k].end());
  return out;
}

// Best total penalized score over every monotone segmentation, found by
// exhaustive recursion over the next row's shape.
inline double brute_force_alignment(const Sentences& o, const Sentences& a,
                                    std::size_t o_max, std::size_t a_max, double pn) {
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  std::function<double(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (i == o.size()) return j == a.size() ? 0.0 : kNone;
    double best = kNone;
    for (std::size_t ol = 1; ol <= o_max && i + ol <= o.size(); ++ol) {
      for (std::size_t al = 0; al <= a_max && j + al <= a.size(); ++al) {
        if (al == 0 && ol > 1) continue;
        const double rest = go(i + ol, j + al);
        if (rest == kNone) continue;
        double sim = 0.0;
        if (al > 0) sim = naive_rouge_precision(concat(a, j, al), concat(o, i, ol), 1);
        const double size = double(std::max(ol, al));
        const double row = std::max(0.0, sim - (size - 1.0) * pn);
        best = std::max(best, row + rest);
      }
    }
    return best;
  };
  return go(0, 0);
}

inline std::string join(const Words& w, const std::string& sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += sep;
    out += w[k];
  }
  return out;
}

// Text whose sentences are exactly the given word lists.
inline std::string sentences_text(const Sentences& s) {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) out += ' ';
    out += join(s[k]) + ".";
  }
  return out;
}

inline abridger::ChapterPair make_pair(const std::string& original, const std::string& abridged,
                                       const std::string& chapter = "Chapter 1",
                                       const std::string& book = "book") {
  abridger::ChapterPair p;
  p.book_id = book;
  p.chapter_id = chapter;
  p.original = abridger::Document::from_text(chapter + "/o", original);
  p.abridged = abridger::Document::from_text(chapter + "/a", abridged);
  return p;
}

// Random valid row list over n original / m abridged sentences.
inline std::vector<abridger::AlignmentRow> random_rows(std::mt19937_64& rng, std::size_t n,
                                                       std::size_t m) {
  std::vector<abridger::AlignmentRow> rows;
  std::size_t i = 0, j = 0;
  std::uniform_int_distribution<int> coin(0, 3);
  while (i < n) {
    abridger::AlignmentRow r;
    r.o_start = i;
    r.a_start = j;
    const std::size_t o_left = n - i, a_left = m - j;
    if (o_left == 1) {
      r.o_len = 1;
      r.a_len = a_left;
    } else if (a_left > 0 && coin(rng) != 0) {
      r.o_len = 1 + std::size_t(coin(rng)) % std::min<std::size_t>(o_left - 1, 3);
      r.a_len = 1 + std::size_t(coin(rng)) % std::min<std::size_t>(a_left, 3);
    } else {
      r.o_len = 1;
      r.a_len = 0;
    }
    if (r.a_len == 0 && r.o_len > 1) r.o_len = 1;
    i += r.o_len;
    j += r.a_len;
    rows.push_back(r);
  }
  return rows;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("abridger_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support

#endif  // ABRIDGER_TESTS_SUPPORT_HPP
