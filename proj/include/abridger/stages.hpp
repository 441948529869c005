#ifndef ABRIDGER_STAGES_HPP
#define ABRIDGER_STAGES_HPP

// Corpus-level operations behind the CLI verbs and the pipeline: each takes
// loaded artifacts and returns the records of the stage's output format.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "abridger/abridgers.hpp"
#include "abridger/aligner.hpp"
#include "abridger/assessment.hpp"
#include "abridger/chapters.hpp"
#include "abridger/evaluation.hpp"
#include "abridger/io.hpp"
#include "abridger/lexstats.hpp"
#include "abridger/passage_map.hpp"

namespace abridger::stages {

using io::json;

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads; the
/// first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<ChapterPair> ingest(const std::string& book_id,
                                       const std::string& original_path,
                                       const std::string& abridged_path,
                                       const std::vector<std::string>& patterns,
                                       const SegmenterOptions& opts = {}) {
  return pair_chapters(book_id, split_chapters(io::read_file(original_path), patterns),
                       split_chapters(io::read_file(abridged_path), patterns), opts);
}

inline std::vector<io::ChapterRows> align(const std::vector<ChapterPair>& chapters,
                                          const AlignerConfig& config) {
  std::vector<io::ChapterRows> out(chapters.size());
  parallel_for(chapters.size(), [&](std::size_t i) {
    const auto& c = chapters[i];
    try {
      out[i] = {c.book_id, c.chapter_id, align_chapter(c, config)};
    } catch (const Error& e) {
      throw InputError("chapter " + chapter_key(c.book_id, c.chapter_id) + ": " + e.what());
    }
  });
  return out;
}

inline std::vector<io::ChapterRows> flag(std::vector<io::ChapterRows> rows, double threshold) {
  for (auto& c : rows) c.rows = flag_rows(std::move(c.rows), threshold);
  return rows;
}

inline std::vector<json> passages(const std::vector<AlignedChapter>& dataset,
                                  PassageUnit unit, const ChunkConfig& chunk) {
  std::vector<json> out;
  for (const auto& ch : dataset) {
    const auto slices = chapter_slices(ch.pair.original, ch.pair.abridged, ch.rows);
    auto units = unit == PassageUnit::row ? row_passages(ch.pair.original, ch.rows)
                                          : make_passages(ch.pair.original, unit, chunk);
    for (const auto& p : map_passages(std::move(units), slices)) {
      out.push_back(io::passage_record(ch.pair, p));
    }
  }
  return out;
}

inline std::vector<json> labels(const std::vector<AlignedChapter>& dataset) {
  std::vector<json> out;
  for (const auto& ch : dataset) {
    for (const auto& t : chapter_labels(ch.pair.original, ch.pair.abridged, ch.rows)) {
      out.push_back(io::label_record(ch.pair, t));
    }
  }
  return out;
}

inline json distribution_json(const Distribution& d) {
  json out = json::object();
  for (std::size_t k = 0; k < d.labels.size(); ++k) out[d.labels[k]] = d.percent(k);
  out["total"] = d.total;
  out["empty"] = d.empty();
  return out;
}

inline double pct(std::size_t part, std::size_t whole) {
  return whole ? 100.0 * double(part) / double(whole) : 0.0;
}

inline json share_json(const CategoryShare& s) {
  return {{"function_pct", s.function_pct()},
          {"content_pct", s.content_pct()},
          {"function_words", s.function_words},
          {"content_words", s.content_words},
          {"empty", s.empty()}};
}

inline json stats(const std::vector<AlignedChapter>& dataset, const Lexicon* lexicon) {
  json summary = json::array();
  for (const auto& s : corpus_summary(dataset)) {
    summary.push_back({{"split", s.split},
                       {"chapters", s.chapters},
                       {"rows", s.rows},
                       {"o_pars", s.o_pars},
                       {"a_pars", s.a_pars},
                       {"o_sents", s.o_sents},
                       {"a_sents", s.a_sents},
                       {"o_wrds", s.o_words},
                       {"a_wrds", s.a_words},
                       {"pct_a_sents", s.pct_a_sents()},
                       {"pct_a_wrds", s.pct_a_words()},
                       {"per_chapter",
                        {{"rows", s.per_chapter(s.rows)},
                         {"o_pars", s.per_chapter(s.o_pars)},
                         {"a_pars", s.per_chapter(s.a_pars)},
                         {"o_sents", s.per_chapter(s.o_sents)},
                         {"a_sents", s.per_chapter(s.a_sents)},
                         {"o_wrds", s.per_chapter(s.o_words)},
                         {"a_wrds", s.per_chapter(s.a_words)}}}});
  }
  std::vector<AlignmentRow> all_rows;
  for (const auto& ch : dataset) all_rows.insert(all_rows.end(), ch.rows.begin(), ch.rows.end());

  const auto rel = relation_totals(dataset);
  const auto& s = rel.sum;
  json relations = {
      {"types",
       {{"o_rmv_pct", pct(s.o_rmv, s.o_rmv + s.o_prsv)},
        {"o_prsv_pct", pct(s.o_prsv, s.o_rmv + s.o_prsv)},
        {"a_add_pct", pct(s.a_add, s.a_add + s.a_prsv)},
        {"a_prsv_pct", pct(s.a_prsv, s.a_add + s.a_prsv)}}},
      {"tokens",
       {{"o_rmv_pct", pct(s.o_rmv_tokens, s.o_rmv_tokens + s.o_prsv_tokens)},
        {"o_prsv_pct", pct(s.o_prsv_tokens, s.o_rmv_tokens + s.o_prsv_tokens)},
        {"a_add_pct", pct(s.a_add_tokens, s.a_add_tokens + s.a_prsv_tokens)},
        {"a_prsv_pct", pct(s.a_prsv_tokens, s.a_add_tokens + s.a_prsv_tokens)}}},
      {"rows",
       {{"rows_rmv_pct", pct(rel.rows_rmv, rel.rows)},
        {"rows_prsv_pct", pct(rel.rows_prsv, rel.rows)},
        {"rows_add_pct", pct(rel.rows_add, rel.rows)},
        {"rows_reord_pct", pct(rel.rows_reord, rel.rows)},
        {"total", rel.rows}}}};

  json categories = nullptr;
  if (lexicon) {
    const auto cs = category_stats(dataset, *lexicon);
    categories = {{"original", share_json(cs.original)},
                  {"removed", share_json(cs.removed)},
                  {"abridged", share_json(cs.abridged)},
                  {"added", share_json(cs.added)}};
  }
  return {{"summary", summary},
          {"row_sizes", distribution_json(size_distribution(all_rows))},
          {"score_bins", distribution_json(score_bins(all_rows))},
          {"lexical_relations", relations},
          {"categories", categories}};
}

/// Candidate abridgements for every chapter. `labels` is required for
/// ext_toks/ext_sents; `rows` for perfect_ext_toks.
inline std::vector<io::PredictedText> extract(
    const std::vector<ChapterPair>& chapters, const ExtractConfig& config,
    const std::map<std::string, std::vector<SpanLabel>>* labels,
    const std::vector<io::ChapterRows>* rows) {
  config.validate();
  std::map<std::string, const io::ChapterRows*> rows_by_key;
  if (rows) {
    for (const auto& r : *rows) rows_by_key[r.key()] = &r;
  }
  auto chapter_labels_for = [&](const std::string& key) -> const std::vector<SpanLabel>& {
    if (!labels) throw ConfigError("method needs a labels file");
    const auto it = labels->find(key);
    if (it == labels->end()) throw InputError("no labels for chapter " + key);
    return it->second;
  };
  std::vector<io::PredictedText> out;
  for (const auto& c : chapters) {
    const std::string key = chapter_key(c.book_id, c.chapter_id);
    std::string text;
    switch (config.method) {
      case ExtractMethod::copy:
        text = abridge_copy(c.original);
        break;
      case ExtractMethod::rand_toks:
        text = abridge_rand_tokens(c.original, config.token_fraction, config.seed);
        break;
      case ExtractMethod::ext_toks:
        text = abridge_ext_tokens(c.original, chapter_labels_for(key));
        break;
      case ExtractMethod::ext_sents:
        text = abridge_ext_sents(c.original, chapter_labels_for(key), config.sentence_threshold);
        break;
      case ExtractMethod::perfect_ext_toks: {
        if (!rows) throw ConfigError("perfect extraction needs gold rows");
        const auto it = rows_by_key.find(key);
        if (it == rows_by_key.end()) throw InputError("no rows for chapter " + key);
        text = abridge_perfect_ext_tokens(c.original, c.abridged, it->second->rows);
        break;
      }
    }
    out.push_back({c.book_id, c.chapter_id, std::move(text)});
  }
  return out;
}

inline json report_json(const EvalReport& r) {
  return {{"toks", r.token_count},
          {"r_l", r.r_l},
          {"prsv", r.prsv.f1},
          {"rmv", r.rmv.f1},
          {"add", r.add.f1},
          {"prsv_p", r.prsv.precision},
          {"prsv_r", r.prsv.recall},
          {"rmv_p", r.rmv.precision},
          {"rmv_r", r.rmv.recall},
          {"add_p", r.add.precision},
          {"add_r", r.add.recall}};
}

/// Scores predictions per chapter. The headline numbers are the unweighted
/// chapter mean; "pooled" sums counts over all chapters.
inline json evaluate(const std::string& name,
                     const std::map<std::string, std::string>& originals,
                     const std::map<std::string, std::string>& predictions,
                     const std::map<std::string, std::string>& references) {
  std::vector<EvalReport> per_chapter;
  EvalCounts pooled;
  json chapters = json::array();
  for (const auto& [key, original] : originals) {
    const auto p = predictions.find(key);
    const auto r = references.find(key);
    if (p == predictions.end()) throw InputError("no prediction for chapter " + key);
    if (r == references.end()) throw InputError("no reference for chapter " + key);
    const auto counts =
        evaluate_counts(word_list(original), word_list(p->second), word_list(r->second));
    pooled += counts;
    per_chapter.push_back(counts.report());
    json cj = report_json(per_chapter.back());
    cj["chapter_id"] = key;
    chapters.push_back(cj);
  }
  json out = {{"name", name}};
  out.update(report_json(mean_report(per_chapter)));
  out["chapter_count"] = per_chapter.size();
  out["pooled"] = report_json(pooled.report());
  out["chapters"] = chapters;
  return out;
}

inline json rowf1(const std::vector<io::ChapterRows>& pred,
                  const std::vector<io::ChapterRows>& gold) {
  std::map<std::string, const io::ChapterRows*> pred_by_key;
  for (const auto& p : pred) pred_by_key[p.key()] = &p;
  PairCounts total;
  json chapters = json::array();
  for (const auto& g : gold) {
    const auto it = pred_by_key.find(g.key());
    if (it == pred_by_key.end()) throw InputError("no predicted rows for chapter " + g.key());
    const auto [n_o, n_a] = row_extent(g.rows);
    const auto c = row_pair_counts(it->second->rows, g.rows, n_o, n_a);
    total += c;
    const auto s = c.score();
    chapters.push_back({{"chapter_id", g.key()},
                        {"precision", s.precision},
                        {"recall", s.recall},
                        {"f1", s.f1}});
  }
  const auto s = total.score();
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"chapters", chapters}};
}

}  // namespace abridger::stages

#endif  // ABRIDGER_STAGES_HPP
