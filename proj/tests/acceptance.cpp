// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "rgroups/cli.hpp"
#include "rgroups/rgroups.hpp"

namespace fs = std::filesystem;
using namespace rgroups;

namespace {

struct Outcome1 {
  bool pass = true;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome1 distribution_exactness() {
  Outcome1 r;
  int cases = 0;
  for (int m = 2; m <= 5; ++m) {
    for (int n = 1; n <= 24; ++n) {
      const auto table = letter_law_oracle(m, n);
      const bool eq = letter_law(m, n, Relation::SameAsFirst) == table.same &&
                      letter_law(m, n, Relation::InverseOfFirst) == table.inverse &&
                      letter_law(m, n, Relation::Other) == table.other;
      const auto [lo, hi] = decay_bounds(m, n);
      Rational sum = 0;
      bool bracketed = true;
      for (int x = 0; x < 2 * m; ++x) {
        const Rational p = conditional_law(m, n, 0, x);
        sum += p;
        bracketed = bracketed && lo <= p && p <= hi;
      }
      if (!eq || sum != 1 || !bracketed) {
        r.pass = false;
        r.detail += " m=" + std::to_string(m) + ",n=" + std::to_string(n);
      }
      ++cases;
    }
  }
  if (r.pass) r.detail = std::to_string(cases) + " (m, n) cases exact, sums 1, bracketed";
  return r;
}

Outcome1 distribution_statistics() {
  const int m = 2;
  const std::uint64_t samples = 1000000;
  const auto counts = sample_letter_counts(m, 6, samples, Rng(20240601), hardware_threads());
  double worst = 0;
  for (int x0 = 0; x0 < 2 * m; ++x0) {
    const std::uint64_t given = counts.at(0, x0, x0);
    for (int n = 2; n <= 6; ++n) {
      for (int x = 0; x < 2 * m; ++x) {
        const double z = binomial_z(counts.at(n, x0, x), given, to_double(conditional_law(m, n, x0, x)));
        worst = std::max(worst, std::fabs(z));
      }
    }
  }
  return {worst < 4.0, "max |z| = " + num(worst) + " over 80 cells, 10^6 words"};
}

int smallest_z(int n, int q) {
  int z = 1;
  while (!make_pigeonhole_config(n, q, z).hypothesis_met()) ++z;
  return z;
}

Outcome1 pigeonhole() {
  Outcome1 r;
  if (coincidence_exact(make_pigeonhole_config(2, 2, 2)) != Rational(7, 8)) {
    r.pass = false;
    r.detail += " exact(2,2,2) != 7/8;";
  }
  const auto sim = coincidence_simulate(make_pigeonhole_config(2, 2, 2), 100000, Rng(3));
  if (std::fabs(sim.estimate - 0.875) > 3 * sim.standard_error) {
    r.pass = false;
    r.detail += " simulate(2,2,2) = " + num(sim.estimate) + ";";
  }
  int configs = 0;
  double tightest = 1;
  std::uint64_t stream = 0;
  for (int q : {2, 3}) {
    for (int n : {16, 64, 256}) {
      const int z0 = smallest_z(n, q);
      for (int z : {z0, 2 * z0, 4 * z0}) {
        for (auto kind : {BoxMeasure::Uniform, BoxMeasure::Harmonic, BoxMeasure::Geometric}) {
          const auto cfg = make_pigeonhole_config(n, q, z, kind);
          const double bound = coincidence_bound(cfg);
          const auto s = coincidence_simulate(cfg, 100000, Rng(500).split(stream++), hardware_threads());
          const double margin = s.estimate - 3 * s.standard_error - bound;
          tightest = std::min(tightest, margin);
          if (margin < 0) {
            r.pass = false;
            r.detail += " n=" + std::to_string(n) + ",q=" + std::to_string(q) + ",z=" + std::to_string(z) + "," +
                        to_string(kind) + ";";
          }
          ++configs;
        }
      }
    }
  }
  r.detail = "exact 7/8, simulate " + num(sim.estimate) + ", domination on " + std::to_string(configs) +
             " configs, smallest margin " + num(tightest) + r.detail;
  return r;
}

struct Cell {
  int m;
  int ell;
  Rational density;
};

Outcome1 trivializer_soundness() {
  std::vector<Cell> cells;
  const Rational densities[] = {Rational(9, 20), Rational(1, 2), Rational(11, 20)};
  for (int ell = 8; ell <= 24; ++ell) {
    for (const auto& d : densities) cells.push_back({2, ell, d});
  }
  for (int ell = 8; ell <= 16; ++ell) {
    for (const auto& d : densities) cells.push_back({3, ell, d});
  }
  const std::size_t runs = 1000;
  std::vector<int> bad(runs, 0), trivial(runs, 0), certs(runs, 0);
  parallel_chunks(runs, hardware_threads(), [&](std::size_t i) {
    const Cell& c = cells[i % cells.size()];
    const Presentation R = sample_presentation(params_from_density(c.m, c.ell, c.density), Rng(10000 + i));
    const Verdict v = trivialize(R, TrivializerConfig::make(c.m, c.ell));
    certs[i] = static_cast<int>(v.certificates.size());
    trivial[i] = v.outcome == Outcome::Trivial;
    try {
      for (const auto& cert : v.certificates) {
        if (!check_certificate(R, cert)) bad[i] = 1;
      }
      if (!check_verdict(R, v)) bad[i] = 1;
    } catch (const CertificateError&) {
      bad[i] = 1;
    }
    if (v.outcome == Outcome::Trivial && abelianization_guard(R) == AbelianizationVerdict::CertainlyNontrivial) bad[i] = 1;
  });
  const auto sum = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0L); };
  return {sum(bad) == 0, std::to_string(runs) + " runs over " + std::to_string(cells.size()) + " cells, " +
                             std::to_string(sum(certs)) + " certificates checked, " + std::to_string(sum(trivial)) +
                             " trivial, " + std::to_string(sum(bad)) + " violations"};
}

Outcome1 trivializer_efficacy() {
  const std::string path = std::string(RGROUPS_DATA_DIR) + "/efficacy_pilot.json";
  const auto pilot = nlohmann::json::parse(cli::read_file(path));
  const double floor = pilot.at("floor").get<double>();
  const int m = 2;
  const Rational density(11, 20);
  std::vector<int> hits;
  std::string detail;
  for (int ell : {12, 16, 20}) {
    std::vector<char> ok(50, 0);
    parallel_chunks(ok.size(), hardware_threads(), [&](std::size_t i) {
      const Presentation R = sample_presentation(params_from_density(m, ell, density), Rng(2000 + i));
      ok[i] = trivialize(R, TrivializerConfig::make(m, ell)).outcome == Outcome::Trivial;
    });
    hits.push_back(static_cast<int>(std::count(ok.begin(), ok.end(), 1)));
    detail += "ell=" + std::to_string(ell) + ": " + std::to_string(hits.back()) + "/50, ";
  }
  const bool monotone = hits[0] <= hits[1] && hits[1] <= hits[2];
  const bool above = hits[2] / 50.0 > floor;
  detail += "floor " + num(floor) + (monotone ? "" : ", not nondecreasing") + (above ? "" : ", below floor");
  return {monotone && above, detail};
}

// w = P^-1 P' with P, P' reduced of length k, differing in their first and last letters.
Word planted_w(int m, int k, Rng& rng) {
  while (true) {
    const Word p = sample_word(m, k, rng), q = sample_word(m, k, rng);
    if (p[0] == q[0] || p[k - 1] == q[k - 1]) continue;
    const Word head = invert(p);
    std::vector<Letter> letters(head.begin(), head.end());
    letters.insert(letters.end(), q.begin(), q.end());
    return Word::from_reduced(std::move(letters));
  }
}

Outcome1 reduction_rate() {
  Outcome1 r;
  const int m = 2;
  const std::size_t blocks = 100000, per_chunk = 1000;
  for (int k : {2, 3}) {
    const auto s = reduction_block_size(m, k);
    Rng setup(6000 + k);
    const Word w = planted_w(m, k, setup);
    std::vector<std::uint64_t> hits(blocks / per_chunk, 0);
    parallel_chunks(hits.size(), hardware_threads(), [&](std::size_t c) {
      Rng rng = Rng(7000 + k).split(c);
      for (std::size_t b = 0; b < per_chunk; ++b) {
        const Word block = sample_word(m, static_cast<int>(s + 2), rng);
        if (w_reduce_once(block, w, 3, s + 2)) ++hits[c];
      }
    });
    const double p = double(std::accumulate(hits.begin(), hits.end(), std::uint64_t{0})) / blocks;
    const double se = std::sqrt(p * (1 - p) / blocks);
    const bool ok = p > 0.25 - 3 * se;
    r.pass = r.pass && ok;
    r.detail += "k=" + std::to_string(k) + " w=" + to_string(w) + " block " + std::to_string(s) + ": rate " +
                num(p) + " (se " + num(se) + ")" + (k == 2 ? "; " : "");
  }
  return r;
}

Outcome1 tutte() {
  Outcome1 r;
  const long expected[] = {2, 9, 54};
  for (int n = 1; n <= 3; ++n) {
    if (tutte_count(n) != expected[n - 1] || enumerate_rooted_maps(n) != expected[n - 1]) r.pass = false;
  }
  // Closed form 2 * 3^n (2n)! / (n! (n+2)!) as an exact rational.
  Rational fact_2n = 1, fact_n = 1, fact_n2 = 2;
  for (int n = 1; n <= 50; ++n) {
    fact_2n *= (2 * n - 1) * (2 * n);
    fact_n *= n;
    fact_n2 *= n + 2;
    const Rational closed = 2 * pow_rational(Rational(3), n) * fact_2n / (fact_n * fact_n2);
    if (boost::multiprecision::denominator(closed) != 1 || Rational(tutte_count(n)) != closed) r.pass = false;
  }
  r.detail = "n=1..3 enumerated 2, 9, 54; closed form integral and equal through n=50";
  return r;
}

DiagramStats stats(long faces, long boundary, std::int64_t ell) { return {BigInt(faces), BigInt(boundary), ell}; }

Outcome1 bound_arithmetic() {
  Outcome1 r;
  struct Fixture {
    DiagramStats s;
    ModelParams p;
    double expected;
  };
  const std::vector<Fixture> fixtures = {
      {stats(1, 0, 10), {2, 10, 243}, 0.0},     {stats(1, 0, 10), {2, 10, 81}, -1.0},
      {stats(2, 4, 10), {2, 10, 81}, 0.0},      {stats(4, 6, 10), {2, 10, 9}, -2.25},
      {stats(3, 9, 12), {2, 12, 27}, -1.5},     {stats(5, 0, 12), {2, 12, 729}, 0.0},
      {stats(10, 30, 20), {2, 20, 6561}, -0.5}, {stats(2, 2, 8), {3, 8, 25}, -1.5},
      {stats(1, 8, 8), {3, 8, 625}, 4.0},       {stats(7, 14, 14), {2, 14, 2187}, 1.0},
  };
  int i = 0;
  for (const auto& f : fixtures) {
    ++i;
    if (std::fabs(fulfillability_bound(f.s, f.p) - f.expected) > 1e-12) {
      r.pass = false;
      r.detail += " fixture " + std::to_string(i) + ";";
    }
  }
  // Density one half never gives a negative exponent.
  for (long faces = 1; faces <= 5; ++faces) {
    if (fulfillability_exponent(stats(faces, 0, 10), Rational(1, 2)) < 0) r.pass = false;
  }
  const WindowParams win{BigInt(20), 10, false};
  const WindowParams w200{BigInt(200), 1, false};
  const bool table = local_global(stats(100, 0, 10), win).in_window && !local_global(stats(99, 0, 10), win).in_window &&
                     local_global(stats(192000, 0, 10), win).in_window &&
                     !local_global(stats(192001, 0, 10), win).in_window &&
                     local_global(stats(20000, 20000, 1), w200).satisfies_j &&
                     !local_global(stats(20000, 19999, 1), w200).satisfies_j &&
                     !local_global(stats(99, 0, 10), win).conclusion.has_value();
  if (!table) {
    r.pass = false;
    r.detail += " local-global table;";
  }
  r.detail = "10 fixtures, vacuous density 1/2, local-global boundary table" + r.detail;
  return r;
}

Outcome1 thresholds() {
  Outcome1 r;
  const auto grid = doubling_grid(10, 40);
  const auto star = star_condition(corollary_k(), trivial_threshold(), grid);
  const auto f_hyp = LogPowerExpr::monomial(100000, Rational(-1, 3), Rational(1, 3));
  const bool star_ok = star.expression == LogPowerExpr::loglog() && star.symbolic == Asymptotic::Diverges;
  const bool ast_ok = asterisk_condition(hyperbolic_K(1), f_hyp, grid).symbolic == Asymptotic::ConvergesToMinusInfinity &&
                      asterisk_condition(hyperbolic_K(1), LogPowerExpr{}, grid).symbolic == Asymptotic::Diverges;
  const bool named = classify_rate(hyperbolic_threshold()).outcome == Phase::Hyperbolic &&
                     classify_rate(trivial_threshold()).outcome == Phase::Trivial &&
                     classify_phase(Rational(1, 3), Rational(1, 3), 100000).outcome == Phase::Hyperbolic;

  Rng rng(909);
  const Rational coeffs[] = {Rational(1, 100), 1, 100000, 1000000};
  int pairs = 0, violations = 0;
  while (pairs < 10000) {
    const Rational a(static_cast<long>(rng.below(61)), 24), b(static_cast<long>(rng.below(73)) - 36, 12);
    const Rational a2(static_cast<long>(rng.below(61)), 24), b2(static_cast<long>(rng.below(73)) - 36, 12);
    const Rational& c = coeffs[rng.below(4)];
    const auto o1 = [](const Rational& x, const Rational& y) { return x > 0 || (x == 0 && y < 0); };
    if (!o1(a, b) || !o1(a2, b2)) continue;
    ++pairs;
    const Phase p = classify_phase(a, b, c).outcome, p2 = classify_phase(a2, b2, c).outcome;
    if (p == Phase::Trivial && (a2 > a || (a2 == a && b2 < b)) && p2 != Phase::Trivial) ++violations;
    if (p == Phase::Hyperbolic && (a2 < a || (a2 == a && b2 > b)) && p2 != Phase::Hyperbolic) ++violations;
  }

  int counts[3] = {0, 0, 0};
  bool regions = true;
  for (const auto& cell : phase_map(parse_rational_range("0:3/2:1/20"), parse_rational_range("-1:2:1/20"), 1)) {
    if (!cell.verdict) continue;
    const Phase p = cell.verdict->outcome;
    ++counts[static_cast<int>(p)];
    if (cell.alpha < Rational(1, 3) && p != Phase::Hyperbolic) regions = false;
    if (cell.alpha > 1 && p != Phase::Trivial) regions = false;
    if (cell.alpha > Rational(1, 3) && cell.alpha < 1 && p != Phase::Unknown) regions = false;
    if (p == Phase::Hyperbolic && cell.alpha > Rational(1, 3)) regions = false;
    if (p == Phase::Trivial && cell.alpha < 1) regions = false;
  }
  regions = regions && counts[0] > 0 && counts[1] > 0 && counts[2] > 0;

  r.pass = star_ok && ast_ok && named && violations == 0 && regions;
  std::ostringstream d;
  d << "star k-2ell*f = " << star.expression.str() << (star_ok ? "" : " (wrong)") << "; asterisk "
    << (ast_ok ? "ok" : "wrong") << "; named functions " << (named ? "ok" : "wrong") << "; monotonicity " << violations
    << " violations in " << pairs << " pairs; phase map trivial/hyperbolic/unknown " << counts[0] << "/" << counts[1]
    << "/" << counts[2] << (regions ? "" : " (bad boundaries)");
  r.detail = d.str();
  return r;
}

Outcome1 delta() {
  const double ref = delta_for_ell(1e3) / std::pow(1e3, 5.0 / 3.0);
  double worst = 0;
  for (double ell = 1e3; ell <= 1e9; ell *= 10) {
    worst = std::max(worst, std::fabs(delta_for_ell(ell) / std::pow(ell, 5.0 / 3.0) / ref - 1));
  }
  const bool exact = delta_constant(1, 2) == 960.0;
  return {worst <= 1e-12 && exact, "max relative deviation " + num(worst) + ", delta(1,2) = " +
                                       num(delta_constant(1, 2))};
}

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome1 reproducibility() {
  Outcome1 r;
  const fs::path dir = fs::temp_directory_path() / ("rgroups_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli_path = RGROUPS_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sample", "sample --m 2 --ell 16 --density 1/2 --seed 41"},
      {"trivialize", "trivialize --m 2 --ell 16 --density 11/20 --seed 42"},
      {"trivialize-m3", "trivialize --m 3 --ell 12 --f-expr '1/20' --seed 43"},
      {"verify-dist", "verify-dist --m 3 --n 6 --samples 200000 --seed 44"},
      {"pigeonhole", "pigeonhole --n 64 --q 3 --z 40 --mu harmonic --trials 200000 --seed 45"},
      {"sample-noseed", "sample --m 2 --ell 12 --num 500"},
  };
  int checked = 0;
  for (const auto& [name, args] : commands) {
    const std::string a = (dir / (name + ".a")).string(), b = (dir / (name + ".b")).string(),
                      c = (dir / (name + ".c")).string();
    const std::string quiet = " 2>" + quote((dir / (name + ".err")).string());
    bool ok = shell(quote(cli_path) + " " + args + " --threads 1 --out " + quote(a) + quiet) == 0;
    ok = ok && shell(quote(cli_path) + " replay --from " + quote(a + ".manifest.json") + " --threads 1 --out " + quote(b) +
                     quiet) == 0;
    ok = ok && shell(quote(cli_path) + " replay --from " + quote(a + ".manifest.json") + " --threads 4 --out " + quote(c) +
                     quiet) == 0;
    ok = ok && cli::read_file(a) == cli::read_file(b) && cli::read_file(a) == cli::read_file(c);
    if (!ok) {
      r.pass = false;
      r.detail += " " + name + ";";
    }
    ++checked;
  }
  fs::remove_all(dir);
  r.detail = std::to_string(checked) + " randomized runs replayed byte-identically at --threads 1 and 4" +
             (r.pass ? "" : "; mismatches:" + r.detail);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome1()>>> criteria = {
      {"distribution exactness", distribution_exactness},
      {"distribution statistics", distribution_statistics},
      {"pigeonhole oracle and domination", pigeonhole},
      {"trivializer soundness", trivializer_soundness},
      {"trivializer efficacy trend", trivializer_efficacy},
      {"w-reduction rate", reduction_rate},
      {"tutte oracle", tutte},
      {"bound arithmetic", bound_arithmetic},
      {"threshold reproduction", thresholds},
      {"delta constant", delta},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome1 r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !r.pass;
    std::printf("criterion %2zu %-34s %s  %.1fs  %s\n", i + 1, criteria[i].first.c_str(), r.pass ? "PASS" : "FAIL", secs,
                r.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
