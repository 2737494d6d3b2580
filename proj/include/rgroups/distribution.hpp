#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/parallel.hpp"
#include "rgroups/random.hpp"
#include "rgroups/rational.hpp"
#include "rgroups/words.hpp"

// Conditional law of the letter x_n of a uniform freely reduced word given its
// first letter x_0. All probabilities are exact rationals.

namespace rgroups {

/// Position of x_n relative to x_0.
enum class Relation { SameAsFirst, InverseOfFirst, Other };

inline void check_generator_count(int m) {
  if (m < 2 || m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
}

/// 1 / (2m - 1).
inline Rational letter_ratio(int m) {
  check_generator_count(m);
  return Rational(1, 2 * m - 1);
}

/// s_n = sum_{k=0}^{n-1} (-1/(2m-1))^k, with s_0 = 0.
inline Rational partial_sum(int m, int n) {
  if (n < 0) throw DomainError("partial sum index must be >= 0");
  const Rational ratio = -letter_ratio(m);
  Rational sum = 0;
  Rational term = 1;
  for (int k = 0; k < n; ++k) {
    sum += term;
    term *= ratio;
  }
  return sum;
}

/// Closed form: the letter singled out by parity (x_0 for even n, its inverse
/// for odd n) has probability s_{n-1}/(2m-1); every other letter s_n/(2m-1).
inline Rational letter_law(int m, int n, Relation target) {
  if (n < 1) throw DomainError("letter law is defined for n >= 1 (it conditions on x_0)");
  const Rational ratio = letter_ratio(m);
  const bool even = n % 2 == 0;
  const bool singled_out = (even && target == Relation::SameAsFirst) || (!even && target == Relation::InverseOfFirst);
  return ratio * partial_sum(m, singled_out ? n - 1 : n);
}

struct LetterLawTable {
  Rational same;
  Rational inverse;
  Rational other;
  /// Probabilities for all 2m letters (dense Letter::index), conditioned on x_0 = a.
  std::vector<Rational> by_letter;
};

/// Independent route: exact transfer-matrix recursion over positions 1..n,
/// starting from x_0 = a. Each step moves uniformly to one of the 2m-1 letters
/// that do not cancel the current one.
inline LetterLawTable letter_law_oracle(int m, int n) {
  check_generator_count(m);
  if (n < 1) throw DomainError("letter law is defined for n >= 1");
  const int letters = 2 * m;
  const Rational step(1, 2 * m - 1);
  std::vector<Rational> dist(letters, Rational(0));
  dist[0] = 1;
  for (int pos = 1; pos <= n; ++pos) {
    std::vector<Rational> next(letters, Rational(0));
    for (int from = 0; from < letters; ++from) {
      if (dist[from] == 0) continue;
      const Rational share = dist[from] * step;
      for (int to = 0; to < letters; ++to) {
        if (to != (from ^ 1)) next[to] += share;
      }
    }
    dist = std::move(next);
  }
  LetterLawTable table;
  table.same = dist[0];
  table.inverse = dist[1];
  table.other = dist[2];
  for (int i = 3; i < letters; ++i) {
    if (dist[i] != table.other) throw std::logic_error("letter law oracle lost symmetry");
  }
  table.by_letter = std::move(dist);
  return table;
}

/// Decay-of-influence bracket [min, max] of s_{n-1}/(2m-1) and s_n/(2m-1).
inline std::pair<Rational, Rational> decay_bounds(int m, int n) {
  if (n < 1) throw DomainError("decay bounds are defined for n >= 1");
  const Rational ratio = letter_ratio(m);
  Rational a = ratio * partial_sum(m, n - 1);
  Rational b = ratio * partial_sum(m, n);
  if (b < a) std::swap(a, b);
  return {a, b};
}

/// counts[n][x0][x] = number of sampled words with first letter x0 and letter x
/// at offset n (dense letter indices), for 0 <= n <= max_offset.
struct LetterCounts {
  int m = 2;
  int max_offset = 1;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(int n, int x0, int x) const {
    const int L = 2 * m;
    return counts[(static_cast<std::size_t>(n) * L + x0) * L + x];
  }
};

/// Samples uniform reduced words of length max_offset + 1; the law of a prefix
/// of an infinite reduced word equals that of a finite uniform reduced word.
inline LetterCounts sample_letter_counts(int m, int max_offset, std::uint64_t samples, const Rng& root,
                                         int threads = 1) {
  check_generator_count(m);
  if (max_offset < 1) throw DomainError("max offset must be >= 1");
  const int L = 2 * m;
  const std::size_t cells = static_cast<std::size_t>(max_offset + 1) * L * L;
  constexpr std::uint64_t kChunk = 1U << 16;
  const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(cells, 0));
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Rng rng = root.split(c);
    const std::uint64_t count = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
    auto& local = partial[c];
    for (std::uint64_t s = 0; s < count; ++s) {
      const Word w = sample_word(m, max_offset + 1, rng);
      const int x0 = w[0].index();
      for (int n = 0; n <= max_offset; ++n) ++local[(static_cast<std::size_t>(n) * L + x0) * L + w[n].index()];
    }
  });
  LetterCounts out{m, max_offset, samples, std::vector<std::uint64_t>(cells, 0)};
  for (const auto& local : partial) {
    for (std::size_t i = 0; i < cells; ++i) out.counts[i] += local[i];
  }
  return out;
}

/// Exact conditional probability of letter x at offset n given x_0 = x0.
inline Rational conditional_law(int m, int n, int x0, int x) {
  if (x == x0) return letter_law(m, n, Relation::SameAsFirst);
  if (x == (x0 ^ 1)) return letter_law(m, n, Relation::InverseOfFirst);
  return letter_law(m, n, Relation::Other);
}

/// z-score of an empirical frequency against p under a binomial model; zero
/// when p is 0 or 1 and the count matches exactly, infinite otherwise.
inline double binomial_z(std::uint64_t hits, std::uint64_t trials, double p) {
  if (trials == 0) return 0.0;
  const double freq = static_cast<double>(hits) / static_cast<double>(trials);
  const double var = p * (1.0 - p) / static_cast<double>(trials);
  if (var <= 0.0) return freq == p ? 0.0 : std::numeric_limits<double>::infinity();
  return (freq - p) / std::sqrt(var);
}

}  // namespace rgroups
