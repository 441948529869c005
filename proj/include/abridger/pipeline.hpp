#ifndef ABRIDGER_PIPELINE_HPP
#define ABRIDGER_PIPELINE_HPP

// End-to-end run driven by a JSON config:
//   ingest -> align -> flag -> review -> passages -> labels -> stats
//          -> extract -> evaluate
// Each stage writes its own file under out_dir and is skipped when all its
// outputs are at least as new as all its inputs (the config included).
// The review stage replays out_dir/corrections.jsonl, written by
// `abridger serve`, over the flagged rows.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "abridger/error.hpp"
#include "abridger/io.hpp"
#include "abridger/row_store.hpp"
#include "abridger/stages.hpp"

namespace abridger {

struct PipelineConfig {
  std::string book_id = "book";
  std::filesystem::path original;
  std::filesystem::path abridged;
  std::filesystem::path out_dir = "out";
  std::filesystem::path heading_patterns;  // empty: built-in defaults
  std::filesystem::path lexicon;           // empty: no category stats
  std::filesystem::path labels;            // empty: gold labels drive ExtToks/ExtSents
  bool line_is_paragraph = false;
  AlignerConfig aligner{};
  double flag_threshold = kDefaultFlagThreshold;
  PassageUnit passage_unit = PassageUnit::sentence;
  ChunkConfig chunk{};
  std::vector<ExtractMethod> methods{ExtractMethod::copy};
  double token_fraction = 0.6;
  double sentence_threshold = 0.65;
  std::uint64_t seed = 0;
  std::filesystem::path config_file;  // set by load(); an input of every stage

  /// Reads a config file; relative paths resolve against its directory.
  static PipelineConfig load(const std::filesystem::path& path) {
    io::json j;
    try {
      j = io::json::parse(io::read_file(path.string()));
    } catch (const io::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    const auto base = path.parent_path();
    auto rel = [&](const std::string& p) -> std::filesystem::path {
      if (p.empty()) return {};
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    PipelineConfig c;
    c.config_file = path;
    try {
      c.book_id = j.value("book_id", c.book_id);
      if (!j.contains("original") || !j.contains("abridged")) {
        throw ConfigError(path.string() + ": 'original' and 'abridged' are required");
      }
      c.original = rel(j.at("original").get<std::string>());
      c.abridged = rel(j.at("abridged").get<std::string>());
      c.out_dir = rel(j.value("out_dir", std::string("out")));
      c.heading_patterns = rel(j.value("heading_patterns", std::string{}));
      c.lexicon = rel(j.value("lexicon", std::string{}));
      c.labels = rel(j.value("labels", std::string{}));
      c.line_is_paragraph = j.value("line_is_paragraph", false);
      if (j.contains("aligner")) {
        const auto& a = j.at("aligner");
        c.aligner.o_max = a.value("on", c.aligner.o_max);
        c.aligner.a_max = a.value("am", c.aligner.a_max);
        c.aligner.pn = a.value("pn", c.aligner.pn);
        c.aligner.similarity.kind = parse_similarity(a.value("sim", std::string("rouge1p")));
      }
      c.flag_threshold = j.value("flag_threshold", c.flag_threshold);
      c.passage_unit = parse_passage_unit(j.value("passage_unit", std::string("sentence")));
      c.chunk.max_sentences = j.value("chunk_sents", c.chunk.max_sentences);
      if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j.at("methods")) c.methods.push_back(parse_extract_method(m.get<std::string>()));
      }
      c.token_fraction = j.value("t", c.token_fraction);
      c.sentence_threshold = j.value("p", c.sentence_threshold);
      c.seed = j.value("seed", c.seed);
    } catch (const io::json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    c.aligner.validate();
    return c;
  }
};

struct StageOutcome {
  std::string name;
  bool ran = false;
};

namespace detail {

inline bool up_to_date(const std::vector<std::filesystem::path>& inputs,
                       const std::vector<std::filesystem::path>& outputs) {
  namespace fs = std::filesystem;
  fs::file_time_type newest_input = fs::file_time_type::min();
  for (const auto& in : inputs) {
    if (in.empty() || !fs::exists(in)) continue;
    newest_input = std::max(newest_input, fs::last_write_time(in));
  }
  for (const auto& out : outputs) {
    if (!fs::exists(out) || fs::last_write_time(out) < newest_input) return false;
  }
  return true;
}

}  // namespace detail

/// Runs every stage in order and reports which ones ran. A failing stage
/// aborts the run with an Error naming the stage.
inline std::vector<StageOutcome> run_pipeline(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path chapters = cfg.out_dir / "chapters.jsonl";
  const fs::path rows = cfg.out_dir / "rows.jsonl";
  const fs::path flagged = cfg.out_dir / "flagged.jsonl";
  const fs::path corrections = cfg.out_dir / "corrections.jsonl";
  const fs::path reviewed = cfg.out_dir / "reviewed.jsonl";
  const fs::path passages = cfg.out_dir / "passages.jsonl";
  const fs::path labels = cfg.out_dir / "labels.jsonl";
  const fs::path stats = cfg.out_dir / "stats.json";
  const fs::path summary = cfg.out_dir / "report.json";

  std::vector<StageOutcome> outcomes;
  auto stage = [&](const std::string& name, std::vector<fs::path> inputs,
                   const std::vector<fs::path>& outputs, const std::function<void()>& body) {
    inputs.push_back(cfg.config_file);
    if (detail::up_to_date(inputs, outputs)) {
      outcomes.push_back({name, false});
      return;
    }
    try {
      body();
    } catch (const std::exception& e) {
      throw Error("stage " + name + ": " + e.what());
    }
    outcomes.push_back({name, true});
  };

  auto aligned = [&] {
    return io::join_rows(io::load_chapters(chapters.string()), io::load_rows(reviewed.string()));
  };

  stage("ingest", {cfg.original, cfg.abridged, cfg.heading_patterns}, {chapters}, [&] {
    const auto patterns = cfg.heading_patterns.empty()
                              ? default_heading_patterns()
                              : load_heading_patterns(cfg.heading_patterns.string());
    SegmenterOptions opts;
    opts.line_is_paragraph = cfg.line_is_paragraph;
    io::save_chapters(chapters.string(),
                      stages::ingest(cfg.book_id, cfg.original.string(), cfg.abridged.string(),
                                     patterns, opts));
  });

  stage("align", {chapters}, {rows}, [&] {
    io::save_rows(rows.string(), stages::align(io::load_chapters(chapters.string()), cfg.aligner));
  });

  stage("flag", {rows}, {flagged}, [&] {
    io::save_rows(flagged.string(),
                  stages::flag(io::load_rows(rows.string()), cfg.flag_threshold));
  });

  stage("review", {chapters, flagged, corrections}, {reviewed}, [&] {
    RowStore store = RowStore::open(chapters.string(), flagged.string(), corrections.string(),
                                    {cfg.aligner.similarity, cfg.flag_threshold});
    io::write_file(reviewed.string(), store.export_jsonl());
  });

  stage("passages", {chapters, reviewed}, {passages}, [&] {
    io::write_jsonl(passages.string(),
                    stages::passages(aligned(), cfg.passage_unit, cfg.chunk));
  });

  stage("labels", {chapters, reviewed}, {labels}, [&] {
    io::write_jsonl(labels.string(), stages::labels(aligned()));
  });

  stage("stats", {chapters, reviewed, cfg.lexicon}, {stats}, [&] {
    std::optional<Lexicon> lex;
    if (!cfg.lexicon.empty()) lex = Lexicon::load(cfg.lexicon.string());
    io::write_file(stats.string(), stages::stats(aligned(), lex ? &*lex : nullptr).dump(2) + "\n");
  });

  std::vector<fs::path> reports;
  for (const auto method : cfg.methods) {
    const std::string tag(to_string(method));
    const fs::path pred = cfg.out_dir / ("pred_" + tag + ".jsonl");
    const fs::path report = cfg.out_dir / ("report_" + tag + ".json");
    reports.push_back(report);
    const fs::path label_source = cfg.labels.empty() ? labels : cfg.labels;

    stage("extract:" + tag, {chapters, reviewed, label_source}, {pred}, [&] {
      ExtractConfig ec{method, cfg.token_fraction, cfg.sentence_threshold, cfg.seed};
      const auto chs = io::load_chapters(chapters.string());
      const auto rws = io::load_rows(reviewed.string());
      std::map<std::string, std::vector<SpanLabel>> lbl;
      const bool needs_labels =
          method == ExtractMethod::ext_toks || method == ExtractMethod::ext_sents;
      if (needs_labels) lbl = io::load_labels(label_source.string());
      io::save_texts(pred.string(),
                     stages::extract(chs, ec, needs_labels ? &lbl : nullptr, &rws));
    });

    stage("evaluate:" + tag, {chapters, pred}, {report}, [&] {
      const auto report_json = stages::evaluate(
          std::string(display_name(method)), io::load_texts(chapters.string(), "original"),
          io::load_texts(pred.string()), io::load_texts(chapters.string(), "abridged"));
      io::write_file(report.string(), report_json.dump(2) + "\n");
    });
  }

  stage("report", reports, {summary}, [&] {
    io::json table = io::json::array();
    for (const auto& r : reports) {
      auto j = io::json::parse(io::read_file(r.string()));
      j.erase("chapters");
      table.push_back(j);
    }
    io::write_file(summary.string(), table.dump(2) + "\n");
  });

  return outcomes;
}

}  // namespace abridger

#endif  // ABRIDGER_PIPELINE_HPP
