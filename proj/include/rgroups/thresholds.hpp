#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/expression.hpp"
#include "rgroups/rational.hpp"

namespace rgroups {

enum class Asymptotic { Diverges, Bounded, ConvergesToZero, ConvergesToMinusInfinity, Indeterminate };

inline const char* to_string(Asymptotic a) {
  switch (a) {
    case Asymptotic::Diverges: return "diverges";
    case Asymptotic::Bounded: return "bounded";
    case Asymptotic::ConvergesToZero: return "converges-to-0";
    case Asymptotic::ConvergesToMinusInfinity: return "converges-to-minus-infinity";
    case Asymptotic::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// Limit of a sum of monomials, read off its leading term.
inline Asymptotic limit_behaviour(const LogPowerExpr& e) {
  if (e.is_zero()) return Asymptotic::Bounded;
  const Monomial lead = e.leading();
  const Exponents flat{};
  if (flat < lead.exp) return lead.coeff > 0 ? Asymptotic::Diverges : Asymptotic::ConvergesToMinusInfinity;
  if (lead.exp == flat) return Asymptotic::Bounded;
  return Asymptotic::ConvergesToZero;
}

/// Doubling grid 2^lo, ..., 2^hi.
inline std::vector<long double> doubling_grid(int lo = 10, int hi = 40) {
  std::vector<long double> grid;
  for (int j = lo; j <= hi; ++j) grid.push_back(std::ldexp(1.0L, j));
  return grid;
}

/// Parses "start:stop:step" into an inclusive grid of ell values.
inline std::vector<long double> parse_ell_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw ParseError("grid must look like start:stop:step, got '" + text + "'");
  const Rational start = parse_rational(text.substr(0, a));
  const Rational stop = parse_rational(text.substr(a + 1, b - a - 1));
  const Rational step = parse_rational(text.substr(b + 1));
  if (step <= 0 || stop < start) throw ParseError("grid needs step > 0 and stop >= start");
  if ((stop - start) / step > 100000) throw ParseError("grid has more than 100000 points");
  std::vector<long double> grid;
  for (Rational x = start; x <= stop; x += step) grid.push_back(to_long_double(x));
  return grid;
}

struct TracePoint {
  long double ell = 0;
  long double value = 0;
};

/// Heuristic limit from the last three decades of a trace: strictly monotone
/// with growing magnitude counts as divergence, anything else as bounded.
inline Asymptotic trace_heuristic(const std::vector<TracePoint>& trace) {
  if (trace.empty()) return Asymptotic::Indeterminate;
  const long double cutoff = trace.back().ell / 1000.0L;
  std::vector<long double> tail;
  for (const auto& p : trace) {
    if (p.ell >= cutoff) tail.push_back(p.value);
  }
  if (tail.size() < 3 || !std::all_of(tail.begin(), tail.end(), [](long double v) { return std::isfinite(v); })) {
    return Asymptotic::Indeterminate;
  }
  bool up = true, down = true;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    up = up && tail[i] > tail[i - 1];
    down = down && tail[i] < tail[i - 1];
  }
  const bool growing = std::fabs(tail.back()) > std::fabs(tail.front());
  if (up && growing && tail.back() > 0) return Asymptotic::Diverges;
  if (down && growing && tail.back() < 0) return Asymptotic::ConvergesToMinusInfinity;
  return Asymptotic::Bounded;
}

/// Bounded and converging-to-zero are the same class for the heuristic.
inline bool verdicts_agree(Asymptotic symbolic, Asymptotic heuristic) {
  auto cls = [](Asymptotic a) { return a == Asymptotic::ConvergesToZero ? Asymptotic::Bounded : a; };
  if (symbolic == Asymptotic::Indeterminate || heuristic == Asymptotic::Indeterminate) return true;
  return cls(symbolic) == cls(heuristic);
}

struct ConditionResult {
  std::string name;
  Asymptotic symbolic = Asymptotic::Indeterminate;
  /// Quantity whose limit decides the condition; for spade this is log b up
  /// to an additive constant.
  LogPowerExpr expression;
  /// Named summands of `expression` where the condition has them.
  std::vector<std::pair<std::string, LogPowerExpr>> terms;
  /// Some constant was replaced by a rational approximation.
  bool approximate = false;
  std::string note;
  std::vector<TracePoint> trace;
  Asymptotic heuristic = Asymptotic::Indeterminate;
};

/// k - 2 ell f, which must diverge.
inline ConditionResult star_condition(const LogPowerExpr& k, const LogPowerExpr& f, const std::vector<long double>& grid,
                                      int m = 2) {
  ConditionResult r;
  r.name = "star";
  r.expression = k - Rational(2) * LogPowerExpr::ell() * f;
  r.terms = {{"k", k}, {"-2*ell*f", -(Rational(2) * LogPowerExpr::ell() * f)}};
  r.symbolic = limit_behaviour(r.expression);
  for (long double ell : grid) {
    const long double kv = k.eval(ell, m);
    if (kv > ell) throw DomainError("k(ell) exceeds ell at ell = " + std::to_string(static_cast<double>(ell)));
    r.trace.push_back({ell, kv - 2 * ell * f.eval(ell, m)});
  }
  r.heuristic = trace_heuristic(r.trace);
  return r;
}

/// b = (ell - 2) / ((2k + 2)(2m-1)^(2k)), which must diverge. Decided through
/// log b = log ell - 2k - log k + O(1) when k -> infinity and log ell + O(1)
/// when k stays bounded; the trace reports log b exactly.
inline ConditionResult spade_condition(const LogPowerExpr& k, int m, const std::vector<long double>& grid) {
  ConditionResult r;
  r.name = "spade";
  const Asymptotic k_limit = limit_behaviour(k);
  if (k_limit == Asymptotic::ConvergesToMinusInfinity) throw DomainError("k must stay positive");
  Asymptotic log_b = Asymptotic::Indeterminate;
  if (k_limit != Asymptotic::Diverges) {
    r.expression = LogPowerExpr::log();
    r.note = "k bounded: log b = log ell + O(1)";
    log_b = limit_behaviour(r.expression);
  } else if (const Monomial lead = k.leading(); lead.exp.loglog != 0) {
    r.note = "log k has a logloglog term; no symbolic verdict";
  } else {
    const LogPowerExpr log_k = LogPowerExpr::monomial(lead.exp.ell, 0, 1) + LogPowerExpr::monomial(lead.exp.log, 0, 0, 1);
    r.expression = LogPowerExpr::log() - Rational(2) * k - log_k;
    r.terms = {{"log ell", LogPowerExpr::log()}, {"-2k", -(Rational(2) * k)}, {"-log k", -log_k}};
    r.note = "log b up to an additive constant";
    log_b = limit_behaviour(r.expression);
  }
  switch (log_b) {
    case Asymptotic::Diverges: r.symbolic = Asymptotic::Diverges; break;
    case Asymptotic::ConvergesToMinusInfinity: r.symbolic = Asymptotic::ConvergesToZero; break;
    case Asymptotic::Indeterminate: r.symbolic = Asymptotic::Indeterminate; break;
    default: r.symbolic = Asymptotic::Bounded; break;
  }
  const long double base = std::log(static_cast<long double>(2 * m - 1));
  for (long double ell : grid) {
    const long double kv = k.eval(ell, m);
    if (!(2 * kv + 2 > 0) || ell <= 2) throw DomainError("spade needs ell > 2 and k > -1 on the grid");
    r.trace.push_back({ell, (std::log(ell - 2) - std::log(2 * kv + 2)) / base - 2 * kv});
  }
  const Asymptotic h = trace_heuristic(r.trace);
  r.heuristic = h == Asymptotic::ConvergesToMinusInfinity ? Asymptotic::ConvergesToZero
                : h == Asymptotic::Diverges                 ? Asymptotic::Diverges
                                                            : h;
  return r;
}

namespace detail {

/// log base 2m-1 of a positive rational: exact when it is a power of 2m-1,
/// otherwise a rational approximation (flagged through `approximate`).
inline Rational log_rational(const Rational& x, int m, bool& approximate) {
  const BigInt b = 2 * m - 1;
  for (int e = -64; e <= 64; ++e) {
    if (x == pow_rational(Rational(b), e)) return e;
  }
  approximate = true;
  const long double v = std::log(to_long_double(x)) / std::log(static_cast<long double>(2 * m - 1));
  return Rational(BigInt(static_cast<long long>(std::llround(v * 1e15L))), BigInt(1000000000000000LL));
}

}  // namespace detail

/// 3000 K^2 log(K ell) + 10^4 ell / K - ell f, which must tend to -infinity.
/// K has to be a single monomial c' ell^p log^q.
inline ConditionResult asterisk_condition(const LogPowerExpr& K, const LogPowerExpr& f, const std::vector<long double>& grid,
                                          int m = 2) {
  ConditionResult r;
  r.name = "asterisk";
  if (K.size() != 1 || K.leading().coeff <= 0) throw DomainError("K must be a single positive monomial");
  const Monomial k = K.leading();
  if (k.exp.loglog != 0) {
    r.note = "log K has a logloglog term; no symbolic verdict";
  } else {
    const LogPowerExpr log_K = LogPowerExpr(detail::log_rational(k.coeff, m, r.approximate)) +
                               LogPowerExpr::monomial(k.exp.ell, 0, 1) + LogPowerExpr::monomial(k.exp.log, 0, 0, 1);
    const LogPowerExpr first = Rational(3000) * K * K * (log_K + LogPowerExpr::log());
    const LogPowerExpr second = Rational(10000) * LogPowerExpr::ell() / K;
    const LogPowerExpr third = -(LogPowerExpr::ell() * f);
    r.terms = {{"3000*K^2*log(K*ell)", first}, {"10^4*ell/K", second}, {"-ell*f", third}};
    r.expression = first + second + third;
    r.symbolic = limit_behaviour(r.expression);
  }
  const long double base = std::log(static_cast<long double>(2 * m - 1));
  for (long double ell : grid) {
    const long double kv = K.eval(ell, m);
    if (!(kv > 0)) throw DomainError("K must be positive on the grid");
    r.trace.push_back({ell, 3000 * kv * kv * std::log(kv * ell) / base + 10000 * ell / kv - ell * f.eval(ell, m)});
  }
  r.heuristic = trace_heuristic(r.trace);
  return r;
}

enum class Phase { Trivial, Hyperbolic, Unknown };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Trivial: return "trivial";
    case Phase::Hyperbolic: return "hyperbolic";
    case Phase::Unknown: return "unknown";
  }
  return "?";
}

struct PhaseVerdict {
  Phase outcome = Phase::Unknown;
  /// Which clause decided, with the leading-term comparison behind it.
  std::string clause;
};

/// Hyperbolic when f eventually dominates 10^5 log^(1/3) / ell^(1/3), trivial
/// when it is eventually below log/(4 ell) - loglog/ell, unknown otherwise.
inline PhaseVerdict classify_rate(const LogPowerExpr& f) {
  const LogPowerExpr above = f - hyperbolic_threshold();
  if (above.is_zero() || above.leading().coeff > 0) {
    return {Phase::Hyperbolic, "f >= " + hyperbolic_threshold().str() + " eventually (f - threshold = " + above.str() + ")"};
  }
  const LogPowerExpr below = trivial_threshold() - f;
  if (below.is_zero() || below.leading().coeff > 0) {
    return {Phase::Trivial, "f <= " + trivial_threshold().str() + " eventually (threshold - f = " + below.str() + ")"};
  }
  return {Phase::Unknown, "between thresholds (f - upper = " + above.str() + "; lower - f = " + below.str() + ")"};
}

/// The family f = c0 log^beta / ell^alpha, which must be o(1).
inline PhaseVerdict classify_phase(const Rational& alpha, const Rational& beta, const Rational& c0) {
  if (c0 < 0) throw DomainError("coefficient c0 must be >= 0");
  if (c0 != 0 && !(alpha > 0 || (alpha == 0 && beta < 0))) {
    throw DomainError("f = c0 log^beta / ell^alpha is not o(1): need alpha > 0, or alpha = 0 and beta < 0");
  }
  return classify_rate(LogPowerExpr::monomial(c0, -alpha, beta));
}

/// Inclusive exact grid "start:stop:step".
inline std::vector<Rational> parse_rational_range(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw ParseError("range must look like start:stop:step, got '" + text + "'");
  const Rational start = parse_rational(text.substr(0, a));
  const Rational stop = parse_rational(text.substr(a + 1, b - a - 1));
  const Rational step = parse_rational(text.substr(b + 1));
  if (step <= 0 || stop < start) throw ParseError("range needs step > 0 and stop >= start");
  if ((stop - start) / step > 100000) throw ParseError("range has more than 100000 points");
  std::vector<Rational> out;
  for (Rational x = start; x <= stop; x += step) out.push_back(x);
  return out;
}

struct PhaseCell {
  Rational alpha;
  Rational beta;
  /// Empty when f is not o(1) at this cell.
  std::optional<PhaseVerdict> verdict;
};

inline std::vector<PhaseCell> phase_map(const std::vector<Rational>& alphas, const std::vector<Rational>& betas,
                                        const Rational& c0) {
  std::vector<PhaseCell> cells;
  cells.reserve(alphas.size() * betas.size());
  for (const auto& a : alphas) {
    for (const auto& b : betas) {
      PhaseCell cell{a, b, std::nullopt};
      if (c0 == 0 || a > 0 || (a == 0 && b < 0)) cell.verdict = classify_phase(a, b, c0);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

/// delta = 120 kappa^2 N^3 for kappa > 1/N.
inline double delta_constant(double kappa, double N) {
  if (!(N >= 1) || !(kappa * N > 1)) throw DomainError("need N >= 1 and kappa > 1/N");
  return 120.0 * kappa * kappa * N * N * N;
}

/// 18 kappa^2 N^2, same precondition.
inline double corollary_area_threshold(double kappa, double N) {
  if (!(N >= 1) || !(kappa * N > 1)) throw DomainError("need N >= 1 and kappa > 1/N");
  return 18.0 * kappa * kappa * N * N;
}

/// delta with kappa = c'' ell^(-2/3) and N = ell.
inline double delta_for_ell(double ell, double c2 = 1.0) { return delta_constant(c2 * std::pow(ell, -2.0 / 3.0), ell); }

/// Whether 18 (c'' ell^(-2/3))^2 ell^2 >= K^2 for K = ell^(1/3) log^(-2/3) ell.
inline bool area_threshold_covers_window(double ell, double c2 = 1.0, int m = 2) {
  const double kappa = c2 * std::pow(ell, -2.0 / 3.0);
  const double K = static_cast<double>(delta_K().eval(ell, m));
  return corollary_area_threshold(kappa, ell) >= K * K;
}

}  // namespace rgroups
