#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/parallel.hpp"
#include "rgroups/random.hpp"
#include "rgroups/rational.hpp"

// q colour groups of z balls each are thrown independently into n boxes under
// a measure mu. The event of interest: some box receives a ball of every
// colour. Ball i belongs to colour group j when (j-1)z < i <= jz.

namespace rgroups {

enum class BoxMeasure { Uniform, Geometric, Harmonic };

inline std::string to_string(BoxMeasure m) {
  switch (m) {
    case BoxMeasure::Uniform: return "uniform";
    case BoxMeasure::Geometric: return "geometric";
    case BoxMeasure::Harmonic: return "harmonic";
  }
  return "?";
}

inline BoxMeasure parse_box_measure(const std::string& s) {
  if (s == "uniform") return BoxMeasure::Uniform;
  if (s == "geometric") return BoxMeasure::Geometric;
  if (s == "harmonic") return BoxMeasure::Harmonic;
  throw ParseError("unknown measure '" + s + "' (expected uniform, geometric or harmonic)");
}

/// Exact box probabilities: uniform 1/n; geometric proportional to 2^-i;
/// harmonic proportional to 1/i.
inline std::vector<Rational> box_measure(int n, BoxMeasure kind) {
  if (n < 1) throw DomainError("box count must be >= 1");
  std::vector<Rational> mu(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    switch (kind) {
      case BoxMeasure::Uniform: mu[i - 1] = Rational(1, n); break;
      case BoxMeasure::Geometric: mu[i - 1] = Rational(1) / pow_rational(Rational(2), i); break;
      case BoxMeasure::Harmonic: mu[i - 1] = Rational(1, i); break;
    }
  }
  Rational total = 0;
  for (const auto& p : mu) total += p;
  for (auto& p : mu) p /= total;
  return mu;
}

/// Default constant 2^(-q-2).
inline Rational default_coincidence_constant(int q) { return Rational(1) / pow_rational(Rational(2), q + 2); }

/// Largest admissible constant, -(1/4) ln(1 - 2^-q).
inline double max_coincidence_constant(int q) { return -0.25 * std::log1p(-std::ldexp(1.0, -q)); }

struct PigeonholeConfig {
  int n = 1;
  int q = 2;
  int z = 1;
  std::vector<Rational> mu;
  Rational c;

  void validate() const {
    if (n < 1) throw DomainError("box count n must be >= 1");
    if (q < 2) throw DomainError("colour count q must be >= 2");
    if (z < 1) throw DomainError("balls per colour z must be >= 1");
    if (mu.size() != static_cast<std::size_t>(n)) throw DomainError("measure must have one entry per box");
    Rational total = 0;
    for (const auto& p : mu) {
      if (p < 0) throw DomainError("measure entries must be nonnegative");
      total += p;
    }
    if (total != 1) throw DomainError("measure must sum to 1");
  }

  /// z >= 2 n^(1-1/q), decided exactly as z^q >= 2^q n^(q-1).
  bool hypothesis_met() const {
    return pow_big(BigInt(z), static_cast<unsigned>(q)) >=
           pow_big(BigInt(2), static_cast<unsigned>(q)) * pow_big(BigInt(n), static_cast<unsigned>(q - 1));
  }
};

inline PigeonholeConfig make_pigeonhole_config(int n, int q, int z, BoxMeasure kind = BoxMeasure::Uniform) {
  PigeonholeConfig cfg{n, q, z, box_measure(n, kind), default_coincidence_constant(q)};
  cfg.validate();
  return cfg;
}

/// Lower bound 1 - exp(-c z / n^(1-1/q)) on the coincidence probability.
inline double coincidence_bound(const PigeonholeConfig& cfg) {
  cfg.validate();
  if (!cfg.hypothesis_met()) {
    const double threshold = 2.0 * std::pow(static_cast<double>(cfg.n), 1.0 - 1.0 / cfg.q);
    throw DomainError("hypothesis z >= 2 n^(1-1/q) fails: z = " + std::to_string(cfg.z) + " < " +
                      std::to_string(threshold));
  }
  const double c = to_double(cfg.c);
  if (c <= 0.0 || c > max_coincidence_constant(cfg.q)) {
    throw DomainError("constant c must satisfy 0 < c <= -(1/4) ln(1 - 2^-q)");
  }
  const double scale = std::pow(static_cast<double>(cfg.n), 1.0 - 1.0 / cfg.q);
  return -std::expm1(-c * cfg.z / scale);
}

/// Exact probability by enumerating all n^(qz) placements.
inline Rational coincidence_exact(const PigeonholeConfig& cfg, std::uint64_t max_outcomes = std::uint64_t{1} << 22) {
  cfg.validate();
  const int balls = cfg.q * cfg.z;
  BigInt outcomes = pow_big(BigInt(cfg.n), static_cast<unsigned>(balls));
  if (outcomes > max_outcomes) {
    throw ResourceError("exact enumeration needs " + outcomes.str() + " outcomes (budget " +
                        std::to_string(max_outcomes) + ")");
  }
  // Weights over a common denominator keep the inner loop in integers.
  BigInt common = 1;
  for (const auto& p : cfg.mu) common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(p));
  std::vector<BigInt> weight(cfg.mu.size());
  for (std::size_t i = 0; i < cfg.mu.size(); ++i) {
    weight[i] = boost::multiprecision::numerator(cfg.mu[i]) * (common / boost::multiprecision::denominator(cfg.mu[i]));
  }

  std::vector<int> box(static_cast<std::size_t>(balls), 0);
  std::vector<int> level(static_cast<std::size_t>(cfg.n));
  BigInt hit_weight = 0;
  while (true) {
    std::fill(level.begin(), level.end(), 0);
    for (int j = 0; j < cfg.q; ++j) {
      for (int i = j * cfg.z; i < (j + 1) * cfg.z; ++i) {
        if (level[box[i]] == j) level[box[i]] = j + 1;
      }
    }
    if (std::find(level.begin(), level.end(), cfg.q) != level.end()) {
      BigInt w = 1;
      for (int b : box) w *= weight[b];
      hit_weight += w;
    }
    int pos = 0;
    while (pos < balls && ++box[pos] == cfg.n) box[pos++] = 0;
    if (pos == balls) break;
  }
  return Rational(hit_weight) / Rational(pow_big(common, static_cast<unsigned>(balls)));
}

struct SimulationResult {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo estimate. Trials run in fixed chunks, chunk c on stream
/// root.split(c), so the result is independent of `threads`.
inline SimulationResult coincidence_simulate(const PigeonholeConfig& cfg, std::uint64_t trials, const Rng& root,
                                             int threads = 1) {
  cfg.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  std::vector<double> cumulative(cfg.mu.size());
  double running = 0.0;
  for (std::size_t i = 0; i < cfg.mu.size(); ++i) cumulative[i] = running += to_double(cfg.mu[i]);
  const bool uniform = std::all_of(cfg.mu.begin(), cfg.mu.end(), [&](const Rational& p) { return p == cfg.mu[0]; });

  constexpr std::uint64_t kChunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Rng rng = root.split(c);
    const std::uint64_t count = std::min<std::uint64_t>(kChunk, trials - c * kChunk);
    std::vector<int> level(static_cast<std::size_t>(cfg.n), 0);
    std::vector<std::uint64_t> stamp(static_cast<std::size_t>(cfg.n), 0);
    auto draw = [&]() -> int {
      if (uniform) return static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n)));
      const double u = rng.uniform01() * cumulative.back();
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(), cfg.n - 1));
    };
    for (std::uint64_t t = 0; t < count; ++t) {
      const std::uint64_t epoch = t + 1;
      bool alive = true;
      for (int j = 0; j < cfg.q; ++j) {
        bool advanced = false;
        for (int i = 0; i < cfg.z; ++i) {
          const int b = draw();
          if (stamp[b] != epoch) {
            stamp[b] = epoch;
            level[b] = 0;
          }
          if (level[b] == j) {
            level[b] = j + 1;
            advanced = true;
          }
        }
        // Every ball is still drawn so the stream position does not depend on the outcome.
        if (!advanced) alive = false;
      }
      if (alive) {
        // A box reached level q iff the last colour advanced some box from q-1.
        bool found = false;
        for (int b = 0; b < cfg.n && !found; ++b) found = stamp[b] == epoch && level[b] == cfg.q;
        if (found) ++hits[c];
      }
    }
  });
  SimulationResult out;
  out.trials = trials;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

}  // namespace rgroups
