#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/parallel.hpp"
#include "rgroups/random.hpp"
#include "rgroups/rational.hpp"

namespace rgroups {

/// Generators are written as lowercase ASCII letters, so at most 26 of them.
inline constexpr int kMaxGenerators = 26;

/// A generator or its inverse. `code` is +g for generator g (1-based) and -g
/// for its inverse.
struct Letter {
  std::int8_t code = 1;

  static constexpr Letter generator(int g) { return Letter{static_cast<std::int8_t>(g)}; }
  static constexpr Letter inverse_of(int g) { return Letter{static_cast<std::int8_t>(-g)}; }

  /// Dense index in [0, 2m): generator g maps to 2(g-1), its inverse to 2(g-1)+1.
  static constexpr Letter from_index(int index) {
    const int g = index / 2 + 1;
    return (index % 2 == 0) ? generator(g) : inverse_of(g);
  }

  constexpr int generator_index() const { return code > 0 ? code : -code; }
  constexpr bool inverted() const { return code < 0; }
  constexpr Letter inverse() const { return Letter{static_cast<std::int8_t>(-code)}; }
  constexpr int index() const { return 2 * (generator_index() - 1) + (inverted() ? 1 : 0); }

  char to_char() const {
    const char base = inverted() ? 'A' : 'a';
    return static_cast<char>(base + generator_index() - 1);
  }

  constexpr auto operator<=>(const Letter&) const = default;
};

constexpr bool cancels(Letter x, Letter y) { return x.code == -y.code; }

inline Letter letter_from_char(char c, int m) {
  int g = 0;
  Letter letter;
  if (c >= 'a' && c <= 'z') {
    g = c - 'a' + 1;
    letter = Letter::generator(g);
  } else if (c >= 'A' && c <= 'Z') {
    g = c - 'A' + 1;
    letter = Letter::inverse_of(g);
  } else {
    throw ParseError(std::string("invalid letter '") + c + "'");
  }
  if (g > m) throw ParseError(std::string("letter '") + c + "' exceeds generator count m=" + std::to_string(m));
  return letter;
}

/// A freely reduced word. The empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Adopts letters that are already freely reduced; throws DomainError otherwise.
  static Word from_reduced(std::vector<Letter> letters) {
    for (std::size_t i = 1; i < letters.size(); ++i) {
      if (cancels(letters[i - 1], letters[i])) throw DomainError("word is not freely reduced");
    }
    Word w;
    w.letters_ = std::move(letters);
    return w;
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  /// Zero-based access.
  Letter operator[](std::size_t i) const { return letters_[i]; }

  /// One-based access, r[i] with 1 <= i <= |r|.
  Letter at(std::size_t i) const {
    if (i < 1 || i > letters_.size()) throw std::out_of_range("letter index out of range");
    return letters_[i - 1];
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  friend Word free_reduce(std::span<const Letter> raw);
  std::vector<Letter> letters_;
};

inline Word free_reduce(std::span<const Letter> raw) {
  Word w;
  w.letters_.reserve(raw.size());
  for (Letter x : raw) {
    if (!w.letters_.empty() && cancels(w.letters_.back(), x)) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(x);
    }
  }
  return w;
}

inline Word concat_reduce(const Word& u, const Word& v) {
  // Only the junction can cancel.
  std::size_t cut = 0;
  while (cut < u.size() && cut < v.size() && cancels(u[u.size() - 1 - cut], v[cut])) ++cut;
  std::vector<Letter> out;
  out.reserve(u.size() + v.size() - 2 * cut);
  out.insert(out.end(), u.begin(), u.end() - static_cast<std::ptrdiff_t>(cut));
  out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(cut), v.end());
  return Word::from_reduced(std::move(out));
}

inline Word invert(const Word& u) {
  std::vector<Letter> out;
  out.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) out.push_back(it->inverse());
  return Word::from_reduced(std::move(out));
}

/// Letters i..j of u, one-based and inclusive; 1 <= i <= j <= |u|.
inline Word subword(const Word& u, std::size_t i, std::size_t j) {
  if (i < 1 || i > j || j > u.size()) {
    throw std::out_of_range("subword [" + std::to_string(i) + ":" + std::to_string(j) + "] of a word of length " +
                            std::to_string(u.size()));
  }
  auto first = u.begin() + static_cast<std::ptrdiff_t>(i - 1);
  return Word::from_reduced(std::vector<Letter>(first, u.begin() + static_cast<std::ptrdiff_t>(j)));
}

/// Like subword, but i = j + 1 yields the empty word (used for prefixes and tails).
inline Word slice(const Word& u, std::size_t i, std::size_t j) {
  if (i == j + 1 && i >= 1 && j <= u.size()) return Word{};
  return subword(u, i, j);
}

/// Same as slice(u, i, j) but as a view; no allocation.
inline std::span<const Letter> slice_view(const Word& u, std::size_t i, std::size_t j) {
  if (i < 1 || i > j + 1 || j > u.size()) throw std::out_of_range("slice out of range");
  return u.letters().subspan(i - 1, j + 1 - i);
}

inline std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s.push_back(x.to_char());
  return s;
}

/// Parses a word in presentation-file notation and freely reduces it.
/// "1" denotes the empty word.
inline Word parse_word(std::string_view text, int m) {
  if (text == "1") return Word{};
  std::vector<Letter> raw;
  raw.reserve(text.size());
  for (char c : text) raw.push_back(letter_from_char(c, m));
  return free_reduce(raw);
}

/// 128-bit fingerprint of a letter sequence; collisions are resolved by the
/// callers with exact comparison.
struct Hash128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  constexpr auto operator<=>(const Hash128&) const = default;
};

inline Hash128 hash_letters(std::span<const Letter> s) {
  std::uint64_t a = 0xcbf29ce484222325ULL ^ s.size();
  std::uint64_t b = 0x9e3779b97f4a7c15ULL + s.size();
  for (Letter x : s) {
    const auto v = static_cast<std::uint64_t>(static_cast<std::uint8_t>(x.code));
    a = (a ^ v) * 0x100000001b3ULL;
    b = (b + v + 1) * 0xff51afd7ed558ccdULL;
    b ^= b >> 29;
  }
  return {splitmix64(a), splitmix64(b ^ (a << 1))};
}

struct ResourceBudget {
  std::uint64_t max_relators = std::uint64_t{1} << 25;
  std::uint64_t max_letters = std::uint64_t{1} << 31;
};

/// One presentation-sampling regime: m generators, relators of length ell,
/// num relators drawn independently.
struct ModelParams {
  int m = 2;
  int ell = 1;
  std::uint64_t num = 1;

  void validate() const {
    if (m < 2 || m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
    if (ell < 1) throw DomainError("ell must be >= 1");
    if (num < 1) throw DomainError("num must be >= 1");
  }

  /// D = log_{2m-1}(num) / ell.
  double density() const {
    return static_cast<double>(std::log(static_cast<long double>(num)) / std::log(static_cast<long double>(2 * m - 1)) /
                               ell);
  }
  double f() const { return 0.5 - density(); }
};

namespace detail {

inline void check_num_budget(int m, int ell, long double log_num, const ResourceBudget& budget) {
  const long double limit = std::log(static_cast<long double>(budget.max_relators)) + 1e-9L;
  if (log_num * std::log(static_cast<long double>(2 * m - 1)) > limit) {
    throw ResourceError("num = (2m-1)^" + std::to_string(static_cast<double>(log_num)) + " exceeds the relator budget " +
                        std::to_string(budget.max_relators));
  }
  (void)ell;
}

inline void check_letter_budget(const ModelParams& p, const ResourceBudget& budget) {
  if (p.num > budget.max_relators) {
    throw ResourceError("num = " + std::to_string(p.num) + " exceeds the relator budget " +
                        std::to_string(budget.max_relators));
  }
  if (p.num > budget.max_letters / static_cast<std::uint64_t>(p.ell)) {
    throw ResourceError("num * ell exceeds the letter budget " + std::to_string(budget.max_letters));
  }
}

}  // namespace detail

/// num = round((2m-1)^exponent) for an exact exponent = D * ell. Integer
/// exponents are evaluated exactly.
inline std::uint64_t materialize_num(int m, const Rational& exponent, const ResourceBudget& budget = {}) {
  const long double e = to_long_double(exponent);
  detail::check_num_budget(m, 0, e, budget);
  if (boost::multiprecision::denominator(exponent) == 1 && exponent >= 0) {
    const BigInt value = pow_big(BigInt(2 * m - 1), boost::multiprecision::numerator(exponent).convert_to<unsigned>());
    return std::max<std::uint64_t>(1, value.convert_to<std::uint64_t>());
  }
  const long double value = std::pow(static_cast<long double>(2 * m - 1), e);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(value)));
}

/// Floating-point exponent variant (used for f-expressions). Exponents within
/// 1e-12 of an integer are snapped to it.
inline std::uint64_t materialize_num(int m, long double exponent, const ResourceBudget& budget = {}) {
  const long double nearest = std::round(exponent);
  if (std::fabs(exponent - nearest) <= 1e-12L * std::max(1.0L, std::fabs(exponent))) {
    return materialize_num(m, Rational(static_cast<long long>(nearest)), budget);
  }
  detail::check_num_budget(m, 0, exponent, budget);
  const long double value = std::pow(static_cast<long double>(2 * m - 1), exponent);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(value)));
}

inline ModelParams params_from_density(int m, int ell, const Rational& density, const ResourceBudget& budget = {}) {
  ModelParams p{m, ell, 1};
  p.validate();
  p.num = materialize_num(m, density * ell, budget);
  return p;
}

inline ModelParams params_from_f(int m, int ell, long double f_value, const ResourceBudget& budget = {}) {
  ModelParams p{m, ell, 1};
  p.validate();
  p.num = materialize_num(m, static_cast<long double>(ell) * (0.5L - f_value), budget);
  return p;
}

/// Generator count plus a relator multiset (duplicates allowed).
struct Presentation {
  int m = 2;
  std::vector<Word> relators;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

/// Text form: line 1 `m=<int>`, then optional `#` comment lines, then one relator
/// per line. No trailing whitespace; LF endings.
inline std::string format_presentation(const Presentation& p, std::span<const std::string> comments = {}) {
  std::string out = "m=" + std::to_string(p.m) + "\n";
  for (const auto& c : comments) out += "# " + c + "\n";
  for (const auto& r : p.relators) {
    out += r.empty() ? std::string("1") : to_string(r);
    out += '\n';
  }
  return out;
}

inline Presentation parse_presentation(std::string_view text) {
  Presentation p;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') throw ParseError("line " + std::to_string(line_no) + ": CR line ending");
    if (!have_header) {
      if (line.substr(0, 2) != "m=") throw ParseError("line 1 must be 'm=<int>'");
      const Rational m = parse_rational(line.substr(2));
      if (boost::multiprecision::denominator(m) != 1 || m < 2 || m > kMaxGenerators) {
        throw ParseError("generator count must be an integer in [2, 26]");
      }
      p.m = static_cast<int>(m);
      have_header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": whitespace inside relator");
    }
    Word w = parse_word(line, p.m);
    if (line != "1" && w.size() != line.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": relator is not freely reduced");
    }
    p.relators.push_back(std::move(w));
  }
  if (!have_header) throw ParseError("empty presentation file");
  return p;
}

/// Uniform over the 2m(2m-1)^(ell-1) freely reduced words of length ell.
inline Word sample_word(int m, int ell, Rng& rng) {
  if (m < 2 || m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
  if (ell < 1) throw DomainError("ell must be >= 1");
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(ell));
  int prev = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * m)));
  letters.push_back(Letter::from_index(prev));
  for (int i = 1; i < ell; ++i) {
    const int forbidden = prev ^ 1;  // index of the inverse letter
    int next = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * m - 1)));
    if (next >= forbidden) ++next;
    letters.push_back(Letter::from_index(next));
    prev = next;
  }
  return Word::from_reduced(std::move(letters));
}

/// Relators are drawn in fixed chunks, chunk c from stream root.split(c), so
/// the result depends only on (params, root seed), never on `threads`.
inline constexpr std::size_t kSampleChunk = 4096;

inline Presentation sample_presentation(const ModelParams& params, const Rng& root, int threads = 1,
                                        const ResourceBudget& budget = {}) {
  params.validate();
  detail::check_letter_budget(params, budget);
  Presentation p;
  p.m = params.m;
  p.relators.resize(static_cast<std::size_t>(params.num));
  const std::size_t chunks = (p.relators.size() + kSampleChunk - 1) / kSampleChunk;
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Rng rng = root.split(c);
    const std::size_t end = std::min(p.relators.size(), (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < end; ++i) p.relators[i] = sample_word(params.m, params.ell, rng);
  });
  return p;
}

}  // namespace rgroups
