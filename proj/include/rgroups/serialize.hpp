#pragma once

#include <string>

#include <json.hpp>

#include "rgroups/certificate.hpp"
#include "rgroups/errors.hpp"
#include "rgroups/trivializer.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

using Json = nlohmann::json;

/// Presentation-file notation, "1" for the empty word.
inline std::string word_text(const Word& w) { return w.empty() ? std::string("1") : to_string(w); }

inline std::string letter_text(Letter x) { return std::string(1, x.to_char()); }

inline Json step_to_json(const DerivationStep& step) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RelatorStep>) {
          return {{"rule", "relator"}, {"relator", s.relator}, {"word", word_text(s.word)}};
        } else if constexpr (std::is_same_v<T, TailCollisionStep>) {
          return {{"rule", "tail-collision"}, {"left", s.left}, {"right", s.right}, {"split", s.split}, {"word", word_text(s.word)}};
        } else if constexpr (std::is_same_v<T, WReductionStep>) {
          return {{"rule", "w-reduction"}, {"host", s.host},   {"reducer", s.reducer},
                  {"start", s.start},      {"end", s.end},     {"conjugator", word_text(s.conjugator)},
                  {"s", letter_text(s.s)}, {"t", letter_text(s.t)}, {"word", word_text(s.word)}};
        } else {
          return {{"rule", "tail-match"}, {"left", s.left}, {"right", s.right}, {"word", word_text(s.word)}};
        }
      },
      step);
}

inline Json certificate_to_json(const Certificate& cert) {
  Json steps = Json::array();
  for (const auto& s : cert.steps) steps.push_back(step_to_json(s));
  return {{"x", letter_text(cert.x)}, {"y", letter_text(cert.y)}, {"steps", std::move(steps)}};
}

namespace detail {

inline Word json_word(const Json& j, const char* key, int m) {
  if (!j.contains(key) || !j.at(key).is_string()) throw CertificateError(std::string("step lacks string field '") + key + "'");
  const auto text = j.at(key).get<std::string>();
  try {
    Word w = parse_word(text, m);
    if (text != "1" && w.size() != text.size()) throw CertificateError(std::string("field '") + key + "' is not freely reduced");
    return w;
  } catch (const ParseError& e) {
    throw CertificateError(std::string("field '") + key + "': " + e.what());
  }
}

inline Letter json_letter(const Json& j, const char* key, int m) {
  const Word w = json_word(j, key, m);
  if (w.size() != 1) throw CertificateError(std::string("field '") + key + "' must be one letter");
  return w[0];
}

inline std::size_t json_index(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw CertificateError(std::string("step lacks nonnegative integer field '") + key + "'");
  }
  return j.at(key).get<std::size_t>();
}

}  // namespace detail

/// Inverse of certificate_to_json; structural problems raise CertificateError.
inline Certificate certificate_from_json(const Json& j, int m) {
  if (!j.is_object() || !j.contains("steps") || !j.at("steps").is_array()) throw CertificateError("certificate needs a steps array");
  Certificate cert{detail::json_letter(j, "x", m), detail::json_letter(j, "y", m), {}};
  for (const auto& s : j.at("steps")) {
    if (!s.is_object() || !s.contains("rule") || !s.at("rule").is_string()) throw CertificateError("step lacks a rule");
    const auto rule = s.at("rule").get<std::string>();
    const Word word = detail::json_word(s, "word", m);
    if (rule == "relator") {
      cert.steps.emplace_back(RelatorStep{detail::json_index(s, "relator"), word});
    } else if (rule == "tail-collision") {
      cert.steps.emplace_back(TailCollisionStep{detail::json_index(s, "left"), detail::json_index(s, "right"),
                                                detail::json_index(s, "split"), word});
    } else if (rule == "w-reduction") {
      cert.steps.emplace_back(WReductionStep{detail::json_index(s, "host"), detail::json_index(s, "reducer"),
                                             detail::json_index(s, "start"), detail::json_index(s, "end"),
                                             detail::json_word(s, "conjugator", m), detail::json_letter(s, "s", m),
                                             detail::json_letter(s, "t", m), word});
    } else if (rule == "tail-match") {
      cert.steps.emplace_back(TailMatchStep{detail::json_index(s, "left"), detail::json_index(s, "right"), word});
    } else {
      throw CertificateError("unknown rule '" + rule + "'");
    }
  }
  return cert;
}

inline Json stats_to_json(const TrivializerStats& s) {
  return {{"relators", s.relators},
          {"collisions_found", s.collisions_found},
          {"reductions_applied", s.reductions_applied},
          {"reduced_relators", s.reduced_relators},
          {"short_relators", s.short_relators},
          {"ell_prime", s.ell_prime},
          {"candidate_edges", s.candidate_edges},
          {"rounds", s.rounds}};
}

inline Json verdict_to_json(const Verdict& v) {
  Json reducers = Json::array();
  for (const auto& w : v.reducers) reducers.push_back(word_text(w));
  Json certs = Json::array();
  for (const auto& c : v.certificates) certs.push_back(certificate_to_json(c));
  return {{"outcome", to_string(v.outcome)},
          {"k", v.k},
          {"block_size", v.block_size},
          {"blocks", v.blocks},
          {"reducers", std::move(reducers)},
          {"statistics", stats_to_json(v.stats)},
          {"certificates", std::move(certs)}};
}

}  // namespace rgroups
