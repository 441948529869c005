// abridger command-line entry point.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "abridger.hpp"
#include "abridger/service.hpp"

namespace fs = std::filesystem;
using namespace abridger;

namespace {

struct Globals {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

// Output paths are relative to --out-dir when one is given.
std::string out_path(const Globals& g, const std::string& p) {
  if (g.out_dir.empty() || fs::path(p).is_absolute()) return p;
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / p).string();
}

void emit(const Globals& g, const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    io::write_file(out_path(g, out), content);
  }
}

std::vector<std::string> patterns_from(const std::string& file) {
  return file.empty() ? default_heading_patterns() : load_heading_patterns(file);
}

ReviewService* g_service = nullptr;
void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Align original/abridged texts, derive passages and labels, run baselines"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "pipeline config (JSON)");
  app.add_option("--out-dir", g.out_dir, "directory for relative output paths");
  app.add_option("--seed", g.seed, "random seed");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "split texts into chapters and segment them");
  std::string in_orig, in_abr, in_book = "book", in_patterns, in_out = "chapters.jsonl";
  bool in_lines = false;
  ingest->add_option("--original", in_orig)->required()->check(CLI::ExistingFile);
  ingest->add_option("--abridged", in_abr)->required()->check(CLI::ExistingFile);
  ingest->add_option("--book", in_book);
  ingest->add_option("--patterns", in_patterns, "chapter heading regex file")
      ->check(CLI::ExistingFile);
  ingest->add_flag("--line-paragraphs", in_lines, "every newline ends a paragraph");
  ingest->add_option("--out", in_out);

  // align
  auto* align = app.add_subcommand("align", "align sentences of each chapter pair");
  std::string al_orig, al_abr, al_chapters, al_patterns, al_book = "book", al_out = "rows.jsonl";
  std::string al_sim = "rouge1p";
  AlignerConfig al_cfg;
  align->add_option("--original", al_orig)->check(CLI::ExistingFile);
  align->add_option("--abridged", al_abr)->check(CLI::ExistingFile);
  align->add_option("--chapters", al_chapters, "chapters.jsonl (instead of raw texts)")
      ->check(CLI::ExistingFile);
  align->add_option("--book", al_book);
  align->add_option("--patterns", al_patterns)->check(CLI::ExistingFile);
  align->add_option("--on", al_cfg.o_max, "max original sentences per row");
  align->add_option("--am", al_cfg.a_max, "max abridged sentences per row");
  align->add_option("--pn", al_cfg.pn, "per-extra-sentence penalty");
  align->add_option("--sim", al_sim, "rouge1p|rouge2p");
  align->add_option("--out", al_out);

  // flag
  auto* flag = app.add_subcommand("flag", "mark rows for manual review");
  std::string fl_rows, fl_out = "flagged.jsonl";
  double fl_thr = kDefaultFlagThreshold;
  flag->add_option("--rows", fl_rows)->required()->check(CLI::ExistingFile);
  flag->add_option("--threshold", fl_thr);
  flag->add_option("--out", fl_out);

  // rowf1
  auto* rowf1 = app.add_subcommand("rowf1", "score predicted rows against gold rows");
  std::string rf_pred, rf_gold, rf_out;
  rowf1->add_option("--pred", rf_pred)->required()->check(CLI::ExistingFile);
  rowf1->add_option("--gold", rf_gold)->required()->check(CLI::ExistingFile);
  rowf1->add_option("--out", rf_out);

  // kappa
  auto* kappa = app.add_subcommand("kappa", "Fleiss' kappa over annotations");
  std::string ka_ann;
  kappa->add_option("--annotations", ka_ann)->required()->check(CLI::ExistingFile);

  // passages
  auto* passages = app.add_subcommand("passages", "map original passages to abridgements");
  std::string pa_rows, pa_chapters = "chapters.jsonl", pa_unit = "sentence",
                       pa_out = "passages.jsonl";
  ChunkConfig pa_chunk;
  passages->add_option("--rows", pa_rows)->required()->check(CLI::ExistingFile);
  passages->add_option("--chapters", pa_chapters)->check(CLI::ExistingFile);
  passages->add_option("--unit", pa_unit, "row|sentence|paragraph|chunk");
  passages->add_option("--chunk-sents", pa_chunk.max_sentences);
  passages->add_option("--out", pa_out);

  // labels
  auto* labels = app.add_subcommand("labels", "label original tokens preserved/removed");
  std::string lb_rows, lb_chapters = "chapters.jsonl", lb_out = "labels.jsonl";
  labels->add_option("--rows", lb_rows)->required()->check(CLI::ExistingFile);
  labels->add_option("--chapters", lb_chapters)->check(CLI::ExistingFile);
  labels->add_option("--out", lb_out);

  // stats
  auto* stats = app.add_subcommand("stats", "corpus and lexical statistics");
  std::string st_rows, st_chapters = "chapters.jsonl", st_lexicon, st_out = "stats.json";
  stats->add_option("--rows", st_rows)->required()->check(CLI::ExistingFile);
  stats->add_option("--chapters", st_chapters)->check(CLI::ExistingFile);
  stats->add_option("--lexicon", st_lexicon)->check(CLI::ExistingFile);
  stats->add_option("--out", st_out);

  // extract
  auto* extract = app.add_subcommand("extract", "produce baseline abridgements");
  std::string ex_method = "copy", ex_chapters = "chapters.jsonl", ex_labels, ex_rows,
              ex_out = "pred.jsonl";
  double ex_t = 0.6, ex_p = 0.65;
  extract->add_option("--method", ex_method, "copy|rand|tokens|perfect|sents");
  extract->add_option("--chapters", ex_chapters)->check(CLI::ExistingFile);
  extract->add_option("--labels", ex_labels)->check(CLI::ExistingFile);
  extract->add_option("--rows", ex_rows, "rows for the perfect method")
      ->check(CLI::ExistingFile);
  extract->add_option("--t", ex_t, "token fraction for rand");
  extract->add_option("--p", ex_p, "sentence threshold for sents");
  extract->add_option("--out", ex_out);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score predicted abridgements");
  std::string ev_orig, ev_pred, ev_ref, ev_name, ev_out = "report.json";
  evaluate->add_option("--orig", ev_orig, "chapters.jsonl")->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--pred", ev_pred)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--ref", ev_ref, "reference texts (defaults to the abridged side of --orig)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--name", ev_name);
  evaluate->add_option("--out", ev_out);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP review service");
  std::string sv_chapters = "chapters.jsonl", sv_rows = "flagged.jsonl", sv_log, sv_static,
              sv_host = "127.0.0.1";
  int sv_port = 8080;
  double sv_thr = kDefaultFlagThreshold;
  std::string sv_sim = "rouge1p";
  serve->add_option("--chapters", sv_chapters)->check(CLI::ExistingFile);
  serve->add_option("--rows", sv_rows)->check(CLI::ExistingFile);
  serve->add_option("--log", sv_log, "correction log (default: corrections.jsonl next to rows)");
  serve->add_option("--static", sv_static, "UI asset directory");
  serve->add_option("--host", sv_host);
  serve->add_option("--port", sv_port);
  serve->add_option("--threshold", sv_thr);
  serve->add_option("--sim", sv_sim);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "run every stage from a config file");
  std::string pl_config;
  pipeline->add_option("--config", pl_config, "pipeline config (JSON)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      SegmenterOptions opts;
      opts.line_is_paragraph = in_lines;
      const auto chapters =
          stages::ingest(in_book, in_orig, in_abr, patterns_from(in_patterns), opts);
      io::save_chapters(out_path(g, in_out), chapters);
      std::cerr << "ingested " << chapters.size() << " chapter pairs\n";
    } else if (align->parsed()) {
      al_cfg.similarity.kind = parse_similarity(al_sim);
      al_cfg.validate();
      std::vector<ChapterPair> chapters;
      if (!al_chapters.empty()) {
        chapters = io::load_chapters(al_chapters);
      } else if (!al_orig.empty() && !al_abr.empty()) {
        chapters = stages::ingest(al_book, al_orig, al_abr, patterns_from(al_patterns));
      } else {
        throw ConfigError("align needs --chapters or both --original and --abridged");
      }
      emit(g, al_out, io::rows_to_jsonl(stages::align(chapters, al_cfg)));
    } else if (flag->parsed()) {
      emit(g, fl_out, io::rows_to_jsonl(stages::flag(io::load_rows(fl_rows), fl_thr)));
    } else if (rowf1->parsed()) {
      const auto j = stages::rowf1(io::load_rows(rf_pred), io::load_rows(rf_gold));
      emit(g, rf_out, j.dump(2) + "\n");
    } else if (kappa->parsed()) {
      std::cout << io::json{{"kappa", fleiss_kappa(io::load_annotations(ka_ann))}}.dump() << "\n";
    } else if (passages->parsed()) {
      const auto data = io::join_rows(io::load_chapters(pa_chapters), io::load_rows(pa_rows));
      emit(g, pa_out,
           io::to_jsonl(stages::passages(data, parse_passage_unit(pa_unit), pa_chunk)));
    } else if (labels->parsed()) {
      const auto data = io::join_rows(io::load_chapters(lb_chapters), io::load_rows(lb_rows));
      emit(g, lb_out, io::to_jsonl(stages::labels(data)));
    } else if (stats->parsed()) {
      const auto data = io::join_rows(io::load_chapters(st_chapters), io::load_rows(st_rows));
      std::optional<Lexicon> lex;
      if (!st_lexicon.empty()) lex = Lexicon::load(st_lexicon);
      emit(g, st_out, stages::stats(data, lex ? &*lex : nullptr).dump(2) + "\n");
    } else if (extract->parsed()) {
      ExtractConfig cfg{parse_extract_method(ex_method), ex_t, ex_p, g.seed.value_or(0)};
      const auto chapters = io::load_chapters(ex_chapters);
      std::map<std::string, std::vector<SpanLabel>> lbl;
      std::vector<io::ChapterRows> rows;
      if (!ex_labels.empty()) lbl = io::load_labels(ex_labels);
      if (!ex_rows.empty()) rows = io::load_rows(ex_rows);
      const auto preds = stages::extract(chapters, cfg, ex_labels.empty() ? nullptr : &lbl,
                                         ex_rows.empty() ? nullptr : &rows);
      io::save_texts(out_path(g, ex_out), preds);
    } else if (evaluate->parsed()) {
      const auto refs = ev_ref.empty() ? io::load_texts(ev_orig, "abridged")
                                       : io::load_texts(ev_ref, "abridged");
      const auto j = stages::evaluate(ev_name.empty() ? fs::path(ev_pred).stem().string() : ev_name,
                                      io::load_texts(ev_orig, "original"),
                                      io::load_texts(ev_pred), refs);
      emit(g, ev_out, j.dump(2) + "\n");
    } else if (serve->parsed()) {
      if (const char* env = std::getenv("ABRIDGER_PORT")) {
        try {
          sv_port = std::stoi(env);
        } catch (const std::exception&) {
          throw ConfigError(std::string("ABRIDGER_PORT is not a port number: ") + env);
        }
      }
      if (sv_log.empty()) {
        sv_log = (fs::path(sv_rows).parent_path() / "corrections.jsonl").string();
      }
      RowStore store = RowStore::open(sv_chapters, sv_rows, sv_log,
                                      {SimilarityConfig{parse_similarity(sv_sim)}, sv_thr});
      ReviewService service(store, sv_static);
      const int port = service.bind(sv_host, sv_port);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving on http://" << sv_host << ":" << port << "\n";
      service.run();
    } else if (pipeline->parsed()) {
      if (pl_config.empty()) pl_config = g.config;
      if (pl_config.empty()) throw ConfigError("pipeline needs --config");
      auto cfg = PipelineConfig::load(pl_config);
      if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
      if (g.seed) cfg.seed = *g.seed;
      for (const auto& s : run_pipeline(cfg)) {
        std::cerr << (s.ran ? "ran     " : "skipped ") << s.name << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
