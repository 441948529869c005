#ifndef ABRIDGER_ABRIDGERS_HPP
#define ABRIDGER_ABRIDGERS_HPP

// Naive and extractive abridgement baselines.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "abridger/error.hpp"
#include "abridger/passage_map.hpp"
#include "abridger/text.hpp"

namespace abridger {

enum class ExtractMethod { copy, rand_toks, ext_toks, perfect_ext_toks, ext_sents };

inline ExtractMethod parse_extract_method(std::string_view name) {
  if (name == "copy") return ExtractMethod::copy;
  if (name == "rand") return ExtractMethod::rand_toks;
  if (name == "tokens") return ExtractMethod::ext_toks;
  if (name == "perfect") return ExtractMethod::perfect_ext_toks;
  if (name == "sents") return ExtractMethod::ext_sents;
  throw ConfigError("unknown extraction method '" + std::string(name) +
                    "' (expected copy, rand, tokens, perfect or sents)");
}

inline std::string_view to_string(ExtractMethod m) {
  switch (m) {
    case ExtractMethod::copy: return "copy";
    case ExtractMethod::rand_toks: return "rand";
    case ExtractMethod::ext_toks: return "tokens";
    case ExtractMethod::perfect_ext_toks: return "perfect";
    case ExtractMethod::ext_sents: return "sents";
  }
  return "?";
}

/// Display names used in evaluation reports.
inline std::string_view display_name(ExtractMethod m) {
  switch (m) {
    case ExtractMethod::copy: return "Copy";
    case ExtractMethod::rand_toks: return "RandExtToks";
    case ExtractMethod::ext_toks: return "ExtToks";
    case ExtractMethod::perfect_ext_toks: return "PerfectExtToks";
    case ExtractMethod::ext_sents: return "ExtSents";
  }
  return "?";
}

struct ExtractConfig {
  ExtractMethod method = ExtractMethod::copy;
  double token_fraction = 0.6;     // T
  double sentence_threshold = 0.65;  // P
  std::uint64_t seed = 0;

  void validate() const {
    if (!(token_fraction >= 0.0 && token_fraction <= 1.0)) {
      throw ConfigError("T must lie in [0, 1]");
    }
    if (!(sentence_threshold >= 0.0 && sentence_threshold <= 1.0)) {
      throw ConfigError("P must lie in [0, 1]");
    }
  }
};

/// A label for the token at [start, end) of a chapter, as read from a
/// label provider.
struct SpanLabel {
  std::size_t start = 0;
  std::size_t end = 0;
  TokenLabel label = TokenLabel::removed;
};

inline std::string join_tokens(const std::vector<std::string_view>& words) {
  std::string out;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (k) out.push_back(' ');
    out.append(words[k]);
  }
  return out;
}

inline std::string abridge_copy(const Document& chapter) { return chapter.text(); }

/// Surface text of each token (original casing).
inline std::vector<std::string> surface_tokens(const Document& chapter,
                                               const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(chapter.substr({t.char_start, t.char_end}));
  return out;
}

/// Keeps round-half-up(T·N) of the N tokens, chosen uniformly without
/// replacement by selection sampling over a seeded mt19937_64, in original
/// order.
inline std::string abridge_rand_tokens(const Document& chapter, double fraction,
                                       std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("T must lie in [0, 1]");
  const auto tokens = chapter.tokens();
  const auto words = surface_tokens(chapter, tokens);
  const std::size_t n = words.size();
  std::size_t wanted = static_cast<std::size_t>(std::floor(fraction * double(n) + 0.5));
  wanted = std::min(wanted, n);
  std::mt19937_64 rng(seed);
  std::vector<std::string_view> kept;
  kept.reserve(wanted);
  for (std::size_t i = 0; i < n && kept.size() < wanted; ++i) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    if (double(n - i) * u < double(wanted - kept.size())) kept.push_back(words[i]);
  }
  return join_tokens(kept);
}

/// Matches provided labels to the chapter's tokens one for one.
inline std::vector<TokenLabel> match_labels(const std::vector<Token>& tokens,
                                            const std::vector<SpanLabel>& labels) {
  std::vector<TokenLabel> out;
  out.reserve(tokens.size());
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k >= labels.size()) {
      throw InputError("no label for token at offset " +
                       std::to_string(tokens[k].char_start));
    }
    if (labels[k].start != tokens[k].char_start || labels[k].end != tokens[k].char_end) {
      throw InputError("label span [" + std::to_string(labels[k].start) + "," +
                       std::to_string(labels[k].end) + ") does not match token at offset " +
                       std::to_string(tokens[k].char_start));
    }
    out.push_back(labels[k].label);
  }
  if (labels.size() > tokens.size()) {
    throw InputError("extra label at offset " + std::to_string(labels[tokens.size()].start));
  }
  return out;
}

/// Space-joined tokens labeled preserved.
inline std::string abridge_ext_tokens(const Document& chapter,
                                      const std::vector<SpanLabel>& labels) {
  const auto tokens = chapter.tokens();
  const auto matched = match_labels(tokens, labels);
  const auto words = surface_tokens(chapter, tokens);
  std::vector<std::string_view> kept;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (matched[k] == TokenLabel::preserved) kept.push_back(words[k]);
  }
  return join_tokens(kept);
}

inline std::vector<SpanLabel> to_span_labels(const std::vector<LabeledToken>& labels) {
  std::vector<SpanLabel> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back({l.token.char_start, l.token.char_end, l.label});
  return out;
}

/// ExtToks driven by gold labels derived from the reference rows.
inline std::string abridge_perfect_ext_tokens(const Document& original,
                                              const Document& abridged,
                                              const std::vector<AlignmentRow>& rows) {
  return abridge_ext_tokens(original,
                            to_span_labels(chapter_labels(original, abridged, rows)));
}

/// Keeps each sentence whose preserved-token fraction is at least P, with
/// the whitespace that followed it in the original.
inline std::string abridge_ext_sents(const Document& chapter,
                                     const std::vector<SpanLabel>& labels,
                                     double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("P must lie in [0, 1]");
  const auto tokens = chapter.tokens();
  const auto matched = match_labels(tokens, labels);
  const auto& sents = chapter.sentences();
  std::string out;
  std::size_t tk = 0;
  std::size_t kept_end = 0;  // byte length of `out` without trailing gap
  for (std::size_t s = 0; s < sents.size(); ++s) {
    std::size_t total = 0, preserved = 0;
    while (tk < tokens.size() && tokens[tk].char_start < sents[s].end) {
      ++total;
      preserved += matched[tk] == TokenLabel::preserved;
      ++tk;
    }
    const double frac = total ? double(preserved) / double(total) : 0.0;
    if (frac >= threshold) {
      out += chapter.substr(sents[s]);
      kept_end = out.size();
      const std::size_t gap_end =
          s + 1 < sents.size() ? sents[s + 1].start : sents[s].end;
      out += chapter.substr({sents[s].end, gap_end});
    }
  }
  out.resize(kept_end);
  return out;
}

}  // namespace abridger

#endif  // ABRIDGER_ABRIDGERS_HPP
