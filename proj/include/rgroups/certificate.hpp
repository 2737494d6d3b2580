#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/words.hpp"

// A certificate proves x =_G y for the group G presented by (m, R). It is a
// list of steps; each step asserts one word is trivial in G and may only cite
// earlier steps. Every step carries its claimed output word, and the checker
// recomputes that word with plain word operations.
//
// Rules (u, v denote outputs of earlier steps, so u =_G 1 and v =_G 1):
//   RelatorStep        a relator of R
//   TailCollisionStep  if u = P Q and v = P' Q with |P| = |P'| = split,
//                      then P^-1 P' =_G 1 (since P =_G Q^-1 =_G P')
//   WReductionStep     if host = A d w d^-1 B with w =_G 1, then A B =_G 1;
//                      s (last letter of A) and t (first of B) satisfy s != t^-1
//                      so A B stays freely reduced
//   TailMatchStep      TailCollisionStep with split 1: u = x Q, v = y Q give x^-1 y
//
// The certificate is valid when every step replays and the last step's word is
// the reduced form of x^-1 y.

namespace rgroups {

struct RelatorStep {
  std::size_t relator = 0;
  Word word;
};

struct TailCollisionStep {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t split = 0;
  Word word;
};

struct WReductionStep {
  std::size_t host = 0;
  std::size_t reducer = 0;
  /// Deleted segment d w d^-1, one-based inclusive positions in the host word.
  std::size_t start = 0;
  std::size_t end = 0;
  Word conjugator;
  Letter s;
  Letter t;
  Word word;
};

struct TailMatchStep {
  std::size_t left = 0;
  std::size_t right = 0;
  Word word;
};

using DerivationStep = std::variant<RelatorStep, TailCollisionStep, WReductionStep, TailMatchStep>;

inline const Word& step_word(const DerivationStep& step) {
  return std::visit([](const auto& s) -> const Word& { return s.word; }, step);
}

struct Certificate {
  Letter x;
  Letter y;
  std::vector<DerivationStep> steps;
};

namespace detail {

inline void check_letter_range(const Word& w, int m, const char* what) {
  for (Letter x : w) {
    if (x.code == 0 || x.generator_index() > m) throw CertificateError(std::string(what) + " uses a letter outside m");
  }
}

inline const Word& cited(const std::vector<Word>& outputs, std::size_t ref, std::size_t self) {
  if (ref >= self) {
    throw CertificateError("step " + std::to_string(self) + " cites step " + std::to_string(ref) +
                           " which is not earlier");
  }
  return outputs[ref];
}

/// P^-1 P' for u = P Q, v = P' Q; empty optional when lengths or tails differ.
inline std::optional<Word> tail_collision_word(const Word& u, const Word& v, std::size_t split) {
  if (u.size() != v.size() || split > u.size()) return std::nullopt;
  const auto tail_u = slice_view(u, split + 1, u.size());
  const auto tail_v = slice_view(v, split + 1, v.size());
  if (!std::equal(tail_u.begin(), tail_u.end(), tail_v.begin(), tail_v.end())) return std::nullopt;
  return concat_reduce(invert(slice(u, 1, split)), slice(v, 1, split));
}

}  // namespace detail

/// Replays the certificate against R. Returns false on any replay mismatch;
/// throws CertificateError when the certificate is malformed (dangling step
/// references, out-of-range positions or letters, or a relator citation that
/// does not match R).
inline bool check_certificate(const Presentation& R, const Certificate& cert) {
  const int m = R.m;
  if (cert.x.code == 0 || cert.y.code == 0 || cert.x.generator_index() > m || cert.y.generator_index() > m) {
    throw CertificateError("asserted letters lie outside the generator range");
  }
  if (cert.steps.empty()) throw CertificateError("certificate has no steps");

  std::vector<Word> outputs;
  outputs.reserve(cert.steps.size());
  bool ok = true;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& step = cert.steps[i];
    detail::check_letter_range(step_word(step), m, "claimed word");
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, RelatorStep>) {
            if (s.relator >= R.relators.size() || R.relators[s.relator] != s.word) {
              throw CertificateError("step " + std::to_string(i) + " cites a relator not in R");
            }
          } else if constexpr (std::is_same_v<T, TailCollisionStep> || std::is_same_v<T, TailMatchStep>) {
            const Word& u = detail::cited(outputs, s.left, i);
            const Word& v = detail::cited(outputs, s.right, i);
            std::size_t split = 1;
            if constexpr (std::is_same_v<T, TailCollisionStep>) split = s.split;
            if (split < 1) throw CertificateError("step " + std::to_string(i) + " has split 0");
            const auto w = detail::tail_collision_word(u, v, split);
            if (!w || *w != s.word) ok = false;
          } else {
            const Word& host = detail::cited(outputs, s.host, i);
            const Word& w = detail::cited(outputs, s.reducer, i);
            detail::check_letter_range(s.conjugator, m, "conjugator");
            if (s.s.code == 0 || s.t.code == 0 || s.s.generator_index() > m || s.t.generator_index() > m) {
              throw CertificateError("step " + std::to_string(i) + " flanking letters lie outside m");
            }
            if (s.start < 2 || s.end < s.start || s.end + 1 > host.size()) {
              throw CertificateError("step " + std::to_string(i) + " deletes a span without both flanking letters");
            }
            const Word segment = subword(host, s.start, s.end);
            const Word expected = concat_reduce(concat_reduce(s.conjugator, w), invert(s.conjugator));
            const bool literal = segment.size() == s.conjugator.size() * 2 + w.size() && segment == expected;
            const Letter before = host.at(s.start - 1);
            const Letter after = host.at(s.end + 1);
            if (!literal || before != s.s || after != s.t || cancels(before, after)) {
              ok = false;
              return;
            }
            std::vector<Letter> rest(host.begin(), host.begin() + static_cast<std::ptrdiff_t>(s.start - 1));
            rest.insert(rest.end(), host.begin() + static_cast<std::ptrdiff_t>(s.end), host.end());
            if (Word::from_reduced(std::move(rest)) != s.word) ok = false;
          }
        },
        step);
    outputs.push_back(step_word(step));
  }
  const Word conclusion = free_reduce(std::vector<Letter>{cert.x.inverse(), cert.y});
  return ok && outputs.back() == conclusion;
}

/// Human-readable derivation log.
inline std::string derivation_log(const Certificate& cert) {
  std::ostringstream out;
  out << "claim: " << cert.x.to_char() << " = " << cert.y.to_char() << "\n";
  auto show = [](const Word& w) { return w.empty() ? std::string("1") : to_string(w); };
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    out << "  [" << i << "] ";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, RelatorStep>) {
            out << show(s.word) << " = 1   relator #" << s.relator;
          } else if constexpr (std::is_same_v<T, TailCollisionStep>) {
            out << show(s.word) << " = 1   prefixes of [" << s.left << "] and [" << s.right << "] before a common tail at "
                << s.split + 1;
          } else if constexpr (std::is_same_v<T, WReductionStep>) {
            out << show(s.word) << " = 1   delete " << s.start << ".." << s.end << " of [" << s.host << "] = d w d^-1 with d = "
                << show(s.conjugator) << ", w = [" << s.reducer << "], s = " << s.s.to_char() << ", t = " << s.t.to_char();
          } else {
            out << show(s.word) << " = 1   first letters of [" << s.left << "] and [" << s.right
                << "] before a common tail";
          }
        },
        cert.steps[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace rgroups
