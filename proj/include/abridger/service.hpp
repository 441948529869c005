#ifndef ABRIDGER_SERVICE_HPP
#define ABRIDGER_SERVICE_HPP

// HTTP API over a RowStore for the validation UI.
//
//   GET  /api/chapters
//   GET  /api/chapters/{id}/rows[?flagged=true]
//   GET  /api/chapters/{id}/text?side=original|abridged
//   POST /api/chapters/{id}/corrections
//   GET  /api/export

#include <filesystem>
#include <memory>
#include <string>

#include "httplib.h"

#include "abridger/error.hpp"
#include "abridger/io.hpp"
#include "abridger/row_store.hpp"

namespace abridger {

namespace detail {

inline io::json sentence_list(const Document& doc, std::size_t first, std::size_t count) {
  io::json arr = io::json::array();
  for (std::size_t s = first; s < first + count; ++s) {
    arr.push_back({{"index", s}, {"text", doc.substr(doc.sentences()[s])}});
  }
  return arr;
}

inline io::json row_view(const ChapterPair& pair, std::size_t index, const AlignmentRow& r) {
  return {{"row_index", index},
          {"o_start", r.o_start},
          {"o_len", r.o_len},
          {"a_start", r.a_start},
          {"a_len", r.a_len},
          {"score", r.score},
          {"flagged", r.flagged},
          {"validated", r.validated},
          {"original", sentence_list(pair.original, r.o_start, r.o_len)},
          {"abridged", sentence_list(pair.abridged, r.a_start, r.a_len)}};
}

inline void send_json(httplib::Response& res, const io::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, {{"error", message}}, status);
}

}  // namespace detail

class ReviewService {
 public:
  explicit ReviewService(RowStore& store, std::string static_dir = {})
      : store_(store), server_(std::make_unique<httplib::Server>()) {
    // Exclusive bind, so a second server on the same port fails loudly.
    server_->set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    routes();
    if (!static_dir.empty() && std::filesystem::is_directory(static_dir)) {
      server_->set_mount_point("/", static_dir);
    }
  }

  /// Binds to host:port (port 0 picks a free port). Throws Error when the
  /// port cannot be bound.
  int bind(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_->bind_to_any_port(host);
    } else {
      port_ = server_->bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) {
      throw Error("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    }
    return port_;
  }

  /// Blocks serving requests until stop().
  void run() { server_->listen_after_bind(); }
  void stop() { server_->stop(); }
  void wait_until_ready() const { server_->wait_until_ready(); }
  int port() const { return port_; }

 private:
  void routes() {
    server_->Get("/api/chapters", [this](const httplib::Request&, httplib::Response& res) {
      const auto snap = store_.snapshot();
      io::json out = io::json::array();
      for (const auto& c : snap->chapters) {
        std::size_t flagged = 0, validated = 0;
        for (const auto& r : c.rows) {
          flagged += r.flagged;
          validated += r.validated;
        }
        out.push_back({{"chapter_id", c.key()},
                       {"book_id", c.book_id},
                       {"title", c.chapter_id},
                       {"row_count", c.rows.size()},
                       {"flagged_count", flagged},
                       {"validated_count", validated}});
      }
      detail::send_json(res, out);
    });

    server_->Get(R"(/api/chapters/([^/]+)/rows)",
                 [this](const httplib::Request& req, httplib::Response& res) {
      const std::string key = req.matches[1];
      const auto snap = store_.snapshot();
      const auto* rows = snap->find(key);
      const auto* pair = store_.chapter(key);
      if (!rows || !pair) return detail::send_error(res, 404, "unknown chapter " + key);
      const bool only_flagged = req.get_param_value("flagged") == "true";
      io::json out = io::json::array();
      for (std::size_t k = 0; k < rows->rows.size(); ++k) {
        if (only_flagged && !rows->rows[k].flagged) continue;
        out.push_back(detail::row_view(*pair, k, rows->rows[k]));
      }
      detail::send_json(res, out);
    });

    server_->Get(R"(/api/chapters/([^/]+)/text)",
                 [this](const httplib::Request& req, httplib::Response& res) {
      const std::string key = req.matches[1];
      const auto* pair = store_.chapter(key);
      if (!pair) return detail::send_error(res, 404, "unknown chapter " + key);
      const std::string side = req.has_param("side") ? req.get_param_value("side") : "original";
      if (side != "original" && side != "abridged") {
        return detail::send_error(res, 400, "side must be original or abridged");
      }
      const Document& doc = side == "original" ? pair->original : pair->abridged;
      detail::send_json(res, {{"chapter_id", key},
                              {"side", side},
                              {"text", doc.text()},
                              {"sentence_spans", io::ranges_to_json(doc.sentences())},
                              {"paragraph_spans", io::ranges_to_json(doc.paragraphs())}});
    });

    server_->Post(R"(/api/chapters/([^/]+)/corrections)",
                  [this](const httplib::Request& req, httplib::Response& res) {
      Correction c;
      try {
        c = correction_from_json(io::json::parse(req.body));
      } catch (const std::exception& e) {
        return detail::send_error(res, 400, std::string("bad correction: ") + e.what());
      }
      c.chapter_id = req.matches[1];
      try {
        const auto updated = store_.apply(c);
        const auto* pair = store_.chapter(c.chapter_id);
        io::json rows = io::json::array();
        for (std::size_t k = 0; k < updated.rows.size(); ++k) {
          rows.push_back(detail::row_view(*pair, k, updated.rows[k]));
        }
        detail::send_json(res, {{"chapter_id", c.chapter_id}, {"rows", rows}});
      } catch (const NotFoundError& e) {
        detail::send_error(res, 404, e.what());
      } catch (const RejectedCorrection& e) {
        detail::send_error(res, 409, e.what());
      } catch (const std::exception& e) {
        detail::send_error(res, 500, e.what());
      }
    });

    server_->Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(store_.export_jsonl(), "application/x-ndjson");
    });
  }

  RowStore& store_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace abridger

#endif  // ABRIDGER_SERVICE_HPP
