#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "rgroups/diagrams.hpp"
#include "rgroups/distribution.hpp"
#include "rgroups/errors.hpp"
#include "rgroups/expression.hpp"
#include "rgroups/pigeonhole.hpp"
#include "rgroups/serialize.hpp"
#include "rgroups/thresholds.hpp"
#include "rgroups/trivializer.hpp"
#include "rgroups/words.hpp"

namespace rgroups::cli {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DomainError("failed writing '" + path + "'");
}

/// Everything needed to reproduce a run. The digest covers only the fields
/// that determine the outputs: not paths, thread count or timing.
struct RunContext {
  std::string subcommand;
  std::vector<std::string> argv;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string manifest_path;
  int threads = 1;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  std::time_t started_wall = std::time(nullptr);

  Json reproducible() const {
    Json j = {{"format_version", kFormatVersion},
              {"artifact_version", kArtifactVersion},
              {"subcommand", subcommand},
              {"argv", argv},
              {"parameters", parameters},
              {"rng", {{"name", Rng::kName}, {"version", Rng::kVersion}}}};
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return j;
  }
  std::string digest() const { return sha256_hex(reproducible().dump()); }

  Json manifest() const {
    Json j = reproducible();
    j["digest"] = digest();
    j["threads"] = threads;
    j["outputs"] = outputs;
    char when[32];
    std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started_wall));
    j["started_at"] = when;
    j["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return j;
  }

  /// Writes to the named file (recorded as an output) or to `out`.
  void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
      out << content;
    } else {
      write_file(path, content);
      outputs.push_back(path);
    }
  }

  void finish(std::ostream& err) const {
    std::string path = manifest_path;
    if (path.empty() && !out_path.empty()) path = out_path + ".manifest.json";
    const std::string text = manifest().dump(2) + "\n";
    if (path.empty()) {
      err << text;
    } else {
      write_file(path, text);
    }
  }
};

struct CommonOptions {
  std::string out;
  std::string manifest;
  int threads = 1;
};

inline void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--out", common.out, "Output file (default: standard output)");
  sub->add_option("--manifest", common.manifest, "Manifest file (default: <out>.manifest.json)");
  sub->add_option("--threads", common.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1, 256));
}

/// Arguments minus --out, --manifest and --threads (both `--x v` and `--x=v`).
inline std::vector<std::string> reproducible_argv(const std::vector<std::string>& args) {
  static const std::vector<std::string> dropped = {"--out", "--manifest", "--threads"};
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    bool skip = false;
    for (const auto& d : dropped) {
      if (args[i] == d) {
        skip = true;
        ++i;
      } else if (args[i].rfind(d + "=", 0) == 0) {
        skip = true;
      }
    }
    if (!skip) kept.push_back(args[i]);
  }
  return kept;
}

/// Seed given on the command line, or a fresh one that is then recorded in
/// argv so the manifest replays it.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> given, RunContext& ctx) {
  if (!given) {
    std::random_device rd;
    given = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    ctx.argv.push_back("--seed");
    ctx.argv.push_back(std::to_string(*given));
  }
  ctx.seed = *given;
  return *given;
}

struct RegimeOptions {
  int m = 2;
  int ell = 0;
  std::string density;
  std::string f_expr;
  std::uint64_t num = 0;
  std::optional<std::uint64_t> seed;
};

inline ModelParams resolve_regime(const RegimeOptions& o, Json& params) {
  ModelParams p;
  params["m"] = o.m;
  params["ell"] = o.ell;
  if (!o.density.empty()) {
    const Rational d = parse_rational(o.density);
    p = params_from_density(o.m, o.ell, d);
    params["density"] = to_string(d);
  } else if (!o.f_expr.empty()) {
    const LogPowerExpr f = parse_rate_function(o.f_expr);
    const long double value = f.eval(o.ell, o.m);
    p = params_from_f(o.m, o.ell, value);
    params["f_expr"] = f.str();
    params["f_value"] = static_cast<double>(value);
  } else {
    p = ModelParams{o.m, o.ell, o.num};
    p.validate();
    detail::check_letter_budget(p, ResourceBudget{});
  }
  detail::check_letter_budget(p, ResourceBudget{});
  params["num"] = p.num;
  params["density_materialized"] = p.density();
  return p;
}

inline void add_regime(CLI::App* sub, RegimeOptions& o, bool allow_presentation, std::string* presentation) {
  sub->add_option("--m", o.m, "Generator count")->check(CLI::Range(2, kMaxGenerators));
  auto* group = sub->add_option_group("regime", "How many relators to draw");
  group->add_option("--density", o.density, "Density D; num = round((2m-1)^(D ell))");
  group->add_option("--f-expr", o.f_expr, "f in c0*log^beta/ell^alpha form or a threshold keyword; D = 1/2 - f");
  group->add_option("--num", o.num, "Relator count")->check(CLI::PositiveNumber);
  if (allow_presentation) {
    group->add_option("--presentation", *presentation, "Presentation file instead of sampling");
  }
  group->require_option(1);
  sub->add_option("--ell", o.ell, "Relator length")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "64-bit seed (random and recorded when omitted)");
}

inline std::string digest_comments(const RunContext& ctx) {
  return "# format_version=" + std::to_string(kFormatVersion) + "\n# manifest_digest=" + ctx.digest() + "\n";
}

inline Json json_header(const RunContext& ctx) {
  return {{"format_version", kFormatVersion}, {"manifest_digest", ctx.digest()}, {"subcommand", ctx.subcommand}};
}

inline void require_ell(const RegimeOptions& o) {
  if (o.ell < 1) throw DomainError("--ell is required");
}

// ---- subcommand bodies ---------------------------------------------------

inline void do_sample(RunContext& ctx, const RegimeOptions& o, std::ostream& out) {
  require_ell(o);
  const ModelParams p = resolve_regime(o, ctx.parameters);
  const Rng root(resolve_seed(o.seed, ctx));
  const Presentation pres = sample_presentation(p, root, ctx.threads);
  const std::vector<std::string> comments = {"format_version=" + std::to_string(kFormatVersion),
                                             "manifest_digest=" + ctx.digest()};
  ctx.emit(ctx.out_path, format_presentation(pres, comments), out);
}

struct TrivializeOptions {
  RegimeOptions regime;
  std::string presentation;
  std::optional<int> k_override;
  int max_rounds = 1;
  std::string log_path;
};

inline void do_trivialize(RunContext& ctx, const TrivializeOptions& o, std::ostream& out) {
  Presentation pres;
  int ell = o.regime.ell;
  if (!o.presentation.empty()) {
    pres = parse_presentation(read_file(o.presentation));
    ell = 0;
    for (const auto& r : pres.relators) ell = std::max(ell, static_cast<int>(r.size()));
    if (ell < 2) throw DomainError("presentation needs a relator of length >= 2");
    ctx.parameters["presentation_sha256"] = sha256_hex(format_presentation(pres));
    ctx.parameters["m"] = pres.m;
    ctx.parameters["ell"] = ell;
    ctx.parameters["num"] = pres.relators.size();
  } else {
    require_ell(o.regime);
    const ModelParams p = resolve_regime(o.regime, ctx.parameters);
    pres = sample_presentation(p, Rng(resolve_seed(o.regime.seed, ctx)), ctx.threads);
  }
  if (ell < 2) throw DomainError("trivialize needs ell >= 2");
  const auto cfg = TrivializerConfig::make(pres.m, ell, o.k_override, o.max_rounds, ctx.threads);
  ctx.parameters["k"] = cfg.k;
  ctx.parameters["block_size"] = cfg.block_size;
  ctx.parameters["max_rounds"] = cfg.max_rounds;

  const Verdict v = trivialize(pres, cfg);
  if (!check_verdict(pres, v)) throw std::logic_error("internal error: emitted certificate failed replay");
  const auto guard = abelianization_guard(pres);
  if (v.outcome == Outcome::Trivial && guard == AbelianizationVerdict::CertainlyNontrivial) {
    throw std::logic_error("internal error: trivial verdict contradicts the abelianization");
  }

  Json j = json_header(ctx);
  j["parameters"] = ctx.parameters;
  j["abelianization"] = to_string(guard);
  j["certificates_checked"] = true;
  const Json verdict = verdict_to_json(v);
  for (const auto& [key, value] : verdict.items()) j[key] = value;
  ctx.emit(ctx.out_path, j.dump(2) + "\n", out);

  if (!o.log_path.empty()) {
    std::string log = digest_comments(ctx);
    log += "outcome: " + std::string(to_string(v.outcome)) + "\n";
    for (const auto& c : v.certificates) log += derivation_log(c);
    ctx.emit(o.log_path, log, out);
  }
}

struct VerifyDistOptions {
  int m = 2;
  int n = 6;
  std::uint64_t samples = 1000000;
  std::optional<std::uint64_t> seed;
};

inline void do_verify_dist(RunContext& ctx, const VerifyDistOptions& o, std::ostream& out) {
  check_generator_count(o.m);
  if (o.n < 1) throw DomainError("--n must be >= 1");
  if (o.samples < 1) throw DomainError("--samples must be >= 1");
  ctx.parameters = {{"m", o.m}, {"n", o.n}, {"samples", o.samples}};
  const Rng root(resolve_seed(o.seed, ctx));
  const LetterCounts counts = sample_letter_counts(o.m, o.n, o.samples, root, ctx.threads);
  const int L = 2 * o.m;

  std::string csv = digest_comments(ctx) + "n,relation,exact,oracle,empirical,z\n";
  for (int n = 1; n <= o.n; ++n) {
    const LetterLawTable oracle = letter_law_oracle(o.m, n);
    std::uint64_t same = 0, inverse = 0, other = 0;
    for (int x0 = 0; x0 < L; ++x0) {
      for (int x = 0; x < L; ++x) {
        const auto c = counts.at(n, x0, x);
        if (x == x0) same += c;
        else if (x == (x0 ^ 1)) inverse += c;
        else other += c;
      }
    }
    struct Row {
      const char* name;
      Relation rel;
      Rational oracle;
      std::uint64_t hits;
      int letters;
    };
    const Row rows[] = {{"same", Relation::SameAsFirst, oracle.same, same, 1},
                        {"inverse", Relation::InverseOfFirst, oracle.inverse, inverse, 1},
                        {"other", Relation::Other, oracle.other, other, L - 2}};
    for (const auto& row : rows) {
      const Rational exact = letter_law(o.m, n, row.rel);
      const double freq = static_cast<double>(row.hits) / static_cast<double>(o.samples) / row.letters;
      const double z = binomial_z(row.hits, o.samples, to_double(exact) * row.letters);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d,%s,%s,%s,%.10f,%.4f\n", n, row.name, to_string(exact).c_str(),
                    to_string(row.oracle).c_str(), freq, z);
      csv += buf;
    }
  }
  ctx.emit(ctx.out_path, csv, out);
}

struct PigeonholeOptions {
  int n = 2;
  int q = 2;
  int z = 2;
  std::string mu = "uniform";
  std::uint64_t trials = 100000;
  std::uint64_t exact_budget = std::uint64_t{1} << 22;
  std::optional<std::uint64_t> seed;
};

inline void do_pigeonhole(RunContext& ctx, const PigeonholeOptions& o, std::ostream& out) {
  const BoxMeasure kind = parse_box_measure(o.mu);
  const PigeonholeConfig cfg = make_pigeonhole_config(o.n, o.q, o.z, kind);
  ctx.parameters = {{"n", o.n}, {"q", o.q}, {"z", o.z}, {"mu", o.mu}, {"trials", o.trials}, {"c", to_string(cfg.c)},
                    {"exact_budget", o.exact_budget}};
  const Rng root(resolve_seed(o.seed, ctx));
  const SimulationResult sim = coincidence_simulate(cfg, o.trials, root, ctx.threads);

  Json j = json_header(ctx);
  j["parameters"] = ctx.parameters;
  j["hypothesis_met"] = cfg.hypothesis_met();
  try {
    j["bound"] = coincidence_bound(cfg);
  } catch (const DomainError& e) {
    j["bound"] = nullptr;
    j["bound_note"] = e.what();
  }
  j["estimate"] = sim.estimate;
  j["stderr"] = sim.standard_error;
  j["hits"] = sim.hits;
  j["trials"] = sim.trials;
  try {
    const Rational exact = coincidence_exact(cfg, o.exact_budget);
    j["exact"] = to_string(exact);
    j["exact_value"] = to_double(exact);
  } catch (const ResourceError& e) {
    j["exact"] = nullptr;
    j["exact_note"] = e.what();
  }
  ctx.emit(ctx.out_path, j.dump(2) + "\n", out);
}

struct DiagramOptions {
  int n = 3;
  int max_n = 4;
  std::string faces = "1";
  std::string boundary = "0";
  std::int64_t ell = 1;
  int m = 2;
  std::string density;
  std::string window_K;
  std::string K = "10000000000";
  bool conforming = false;
};

inline BigInt parse_big(const std::string& s, const char* what) {
  const Rational r = parse_rational(s);
  if (boost::multiprecision::denominator(r) != 1) throw ParseError(std::string(what) + " must be an integer");
  return boost::multiprecision::numerator(r);
}

inline void do_diagrams(RunContext& ctx, const std::string& which, const DiagramOptions& o, std::ostream& out) {
  Json j = json_header(ctx);
  if (which == "census") {
    ctx.parameters = {{"max_n", o.max_n}};
    std::string csv = digest_comments(ctx) + "n,count,oracle_count,skeletons,max_edge_excess\n";
    for (const auto& row : map_census(o.max_n, std::max(o.max_n, kDefaultMapBudget))) {
      csv += std::to_string(row.n) + "," + row.count.str() + "," + row.oracle.str() + "," + std::to_string(row.skeletons) +
             "," + (row.skeletons ? std::to_string(row.max_edge_excess) : std::string("")) + "\n";
    }
    ctx.emit(ctx.out_path, csv, out);
    return;
  }
  if (which == "tutte") {
    ctx.parameters = {{"n", o.n}};
    j = json_header(ctx);
    j["n"] = o.n;
    j["count"] = tutte_count(o.n).str();
  } else if (which == "bound") {
    ctx.parameters = {{"faces", o.faces}, {"ell", o.ell}, {"m", o.m}, {"window_K", o.window_K}};
    j = json_header(ctx);
    j["parameters"] = ctx.parameters;
    const DiagramBound b = o.window_K.empty() ? log_diagram_bound(to_double(parse_rational(o.faces)), static_cast<double>(o.ell), o.m)
                                              : log_window_diagram_bound(to_double(parse_rational(o.window_K)), static_cast<double>(o.ell), o.m);
    j["log_bound"] = b.log_bound;
    j["headline"] = b.headline;
    j["log_base"] = 2 * o.m - 1;
  } else if (which == "fulfill") {
    if (o.density.empty()) throw DomainError("--density is required");
    const DiagramStats stats{parse_big(o.faces, "--faces"), parse_big(o.boundary, "--boundary"), o.ell};
    const Rational d = parse_rational(o.density);
    ctx.parameters = {{"faces", stats.faces.str()}, {"boundary", stats.boundary.str()}, {"ell", o.ell}, {"density", to_string(d)}};
    j = json_header(ctx);
    j["parameters"] = ctx.parameters;
    const Rational e = fulfillability_exponent(stats, d);
    j["exponent"] = to_string(e);
    j["exponent_value"] = to_double(e);
    j["vacuous"] = e >= 0;
  } else if (which == "local-global") {
    const DiagramStats stats{parse_big(o.faces, "--faces"), parse_big(o.boundary, "--boundary"), o.ell};
    const WindowParams win{parse_big(o.K, "--K"), o.ell, o.conforming};
    ctx.parameters = {{"faces", stats.faces.str()}, {"boundary", stats.boundary.str()}, {"ell", o.ell},
                      {"K", win.K.str()},           {"conforming", o.conforming}};
    j = json_header(ctx);
    j["parameters"] = ctx.parameters;
    const LocalGlobalResult r = local_global(stats, win);
    j["in_window"] = r.in_window;
    j["satisfies_j"] = r.satisfies_j;
    j["conforming"] = r.conforming;
    if (r.conclusion) {
      j["conclusion"] = {{"required_boundary", to_string(r.conclusion->required_boundary)}, {"holds", r.conclusion->holds}};
    } else {
      j["conclusion"] = nullptr;
    }
  }
  ctx.emit(ctx.out_path, j.dump(2) + "\n", out);
}

struct ConditionOptions {
  std::string which;
  std::string k_expr = "corollary-k";
  std::string f_expr = "trivial-threshold";
  std::string K_expr = "hyperbolic-K";
  std::string ell_grid = "pow2:10:40";
  int m = 2;
};

/// "pow2:LO:HI" for 2^LO..2^HI, otherwise "start:stop:step".
inline std::vector<long double> resolve_grid(const std::string& text) {
  if (text.rfind("pow2:", 0) == 0) {
    const auto rest = text.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ParseError("grid must look like pow2:LO:HI");
    const int lo = std::stoi(rest.substr(0, colon));
    const int hi = std::stoi(rest.substr(colon + 1));
    if (lo < 1 || hi < lo || hi > 1000) throw ParseError("pow2 grid needs 1 <= LO <= HI <= 1000");
    return doubling_grid(lo, hi);
  }
  return parse_ell_grid(text);
}

inline void do_conditions(RunContext& ctx, const ConditionOptions& o, std::ostream& out) {
  check_generator_count(o.m);
  const auto grid = resolve_grid(o.ell_grid);
  ConditionResult r;
  ctx.parameters = {{"which", o.which}, {"ell_grid", o.ell_grid}, {"m", o.m}};
  if (o.which == "star") {
    const auto k = parse_expression(o.k_expr);
    const auto f = parse_rate_function(o.f_expr);
    ctx.parameters["k"] = k.str();
    ctx.parameters["f"] = f.str();
    r = star_condition(k, f, grid, o.m);
  } else if (o.which == "spade") {
    const auto k = parse_expression(o.k_expr);
    ctx.parameters["k"] = k.str();
    r = spade_condition(k, o.m, grid);
  } else {
    const auto K = parse_expression(o.K_expr);
    const auto f = parse_rate_function(o.f_expr);
    ctx.parameters["K"] = K.str();
    ctx.parameters["f"] = f.str();
    r = asterisk_condition(K, f, grid, o.m);
  }
  std::string csv = digest_comments(ctx);
  csv += "# condition=" + r.name + "\n";
  csv += "# symbolic=" + std::string(to_string(r.symbolic)) + "\n";
  csv += "# expression=" + r.expression.str() + "\n";
  for (const auto& [name, term] : r.terms) csv += "# term " + name + " = " + term.str() + "\n";
  if (!r.note.empty()) csv += "# note=" + r.note + "\n";
  csv += "# approximate=" + std::string(r.approximate ? "true" : "false") + "\n";
  csv += "# heuristic=" + std::string(to_string(r.heuristic)) + "\n";
  csv += "ell,value\n";
  for (const auto& p : r.trace) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17Lg,%.17Lg\n", p.ell, p.value);
    csv += buf;
  }
  ctx.emit(ctx.out_path, csv, out);
}

struct PhaseMapOptions {
  std::string alpha = "0:1.5:0.05";
  std::string beta = "-1:2:0.05";
  std::string coeff = "1";
};

inline std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void do_phase_map(RunContext& ctx, const PhaseMapOptions& o, std::ostream& out) {
  const auto alphas = parse_rational_range(o.alpha);
  const auto betas = parse_rational_range(o.beta);
  const Rational c0 = parse_rational(o.coeff);
  ctx.parameters = {{"alpha", o.alpha}, {"beta", o.beta}, {"coeff", to_string(c0)}};
  std::string csv = digest_comments(ctx) + "alpha,beta,verdict,clause\n";
  for (const auto& cell : phase_map(alphas, betas, c0)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,", to_double(cell.alpha), to_double(cell.beta));
    csv += buf;
    if (cell.verdict) {
      csv += std::string(to_string(cell.verdict->outcome)) + "," + csv_quote(cell.verdict->clause) + "\n";
    } else {
      csv += "excluded," + csv_quote("f is not o(1)") + "\n";
    }
  }
  ctx.emit(ctx.out_path, csv, out);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int do_replay(const std::string& from, const CommonOptions& common, std::ostream& out, std::ostream& err) {
  const Json m = Json::parse(read_file(from));
  if (m.value("artifact_version", "") != kArtifactVersion) {
    throw DomainError("manifest was written by artifact version " + m.value("artifact_version", std::string("?")));
  }
  std::vector<std::string> args = m.at("argv").get<std::vector<std::string>>();
  if (!common.out.empty()) {
    args.push_back("--out");
    args.push_back(common.out);
  }
  if (!common.manifest.empty()) {
    args.push_back("--manifest");
    args.push_back(common.manifest);
  }
  args.push_back("--threads");
  args.push_back(std::to_string(common.threads));
  return run(args, out, err);
}

/// Entry point; args excludes the program name. Exit codes: 0 success,
/// 1 domain, resource or input error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random group presentations at density one half: sampling, triviality certificates, bounds"};
  app.name("rgroups");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", kArtifactVersion);

  CommonOptions common;

  RegimeOptions sample_opts;
  auto* sample = app.add_subcommand("sample", "Sample a random presentation");
  add_regime(sample, sample_opts, false, nullptr);
  add_common(sample, common);

  TrivializeOptions triv_opts;
  auto* triv = app.add_subcommand("trivialize", "Run the triviality pipeline and emit certificates");
  add_regime(triv, triv_opts.regime, true, &triv_opts.presentation);
  triv->add_option("--k-override", triv_opts.k_override, "Head length k");
  triv->add_option("--max-rounds", triv_opts.max_rounds, "Rounds of w-reduction")->check(CLI::PositiveNumber);
  triv->add_option("--log", triv_opts.log_path, "Also write a readable derivation log");
  add_common(triv, common);

  VerifyDistOptions dist_opts;
  auto* dist = app.add_subcommand("verify-dist", "Compare letter laws with sampled frequencies");
  dist->add_option("--m", dist_opts.m, "Generator count")->check(CLI::Range(2, kMaxGenerators));
  dist->add_option("--n", dist_opts.n, "Largest offset")->check(CLI::PositiveNumber);
  dist->add_option("--samples", dist_opts.samples, "Sampled words")->check(CLI::PositiveNumber);
  dist->add_option("--seed", dist_opts.seed, "64-bit seed");
  add_common(dist, common);

  PigeonholeOptions pig_opts;
  auto* pig = app.add_subcommand("pigeonhole", "Coloured pigeonhole coincidence probability");
  pig->add_option("--n", pig_opts.n, "Boxes")->check(CLI::PositiveNumber);
  pig->add_option("--q", pig_opts.q, "Colours")->check(CLI::Range(2, 64));
  pig->add_option("--z", pig_opts.z, "Balls per colour")->check(CLI::PositiveNumber);
  pig->add_option("--mu", pig_opts.mu, "uniform, geometric or harmonic");
  pig->add_option("--trials", pig_opts.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  pig->add_option("--exact-budget", pig_opts.exact_budget, "Largest outcome count for exact enumeration");
  pig->add_option("--seed", pig_opts.seed, "64-bit seed");
  add_common(pig, common);

  DiagramOptions diag_opts;
  auto* diag = app.add_subcommand("diagrams", "Diagram counts and bounds");
  diag->require_subcommand(1);
  auto* tutte = diag->add_subcommand("tutte", "Rooted planar maps with n edges");
  tutte->add_option("--n", diag_opts.n, "Edges")->required()->check(CLI::Range(1, 100000));
  add_common(tutte, common);
  auto* census = diag->add_subcommand("census", "Exhaustive rooted map census against the closed form");
  census->add_option("--max-n", diag_opts.max_n, "Largest edge count")->check(CLI::Range(1, 6));
  add_common(census, common);
  auto* bound = diag->add_subcommand("bound", "Log of the diagram-count bound");
  bound->add_option("--faces", diag_opts.faces, "Face count F");
  bound->add_option("--window-K", diag_opts.window_K, "Use F = 480 K^2");
  bound->add_option("--ell", diag_opts.ell, "Relator length")->required()->check(CLI::PositiveNumber);
  bound->add_option("--m", diag_opts.m, "Generator count (log base 2m-1)")->check(CLI::Range(2, kMaxGenerators));
  add_common(bound, common);
  auto* fulfill = diag->add_subcommand("fulfill", "Fulfillability exponent");
  fulfill->add_option("--faces", diag_opts.faces, "|D|")->required();
  fulfill->add_option("--boundary", diag_opts.boundary, "|dD|")->required();
  fulfill->add_option("--ell", diag_opts.ell, "Relator length")->required()->check(CLI::PositiveNumber);
  fulfill->add_option("--density", diag_opts.density, "Density D")->required();
  add_common(fulfill, common);
  auto* lg = diag->add_subcommand("local-global", "Window and quadratic-inequality predicates");
  lg->add_option("--faces", diag_opts.faces, "|D|")->required();
  lg->add_option("--boundary", diag_opts.boundary, "|dD|")->required();
  lg->add_option("--ell", diag_opts.ell, "Relator length")->required()->check(CLI::PositiveNumber);
  lg->add_option("--K", diag_opts.K, "Window scale K");
  lg->add_flag("--conforming", diag_opts.conforming, "Reject K < 10^10");
  add_common(lg, common);

  ConditionOptions cond_opts;
  auto* cond = app.add_subcommand("conditions", "Evaluate star, spade or asterisk symbolically and on a grid");
  cond->add_option("--which", cond_opts.which, "star, spade or asterisk")
      ->required()
      ->check(CLI::IsMember({"star", "spade", "asterisk"}));
  cond->add_option("--k-expr", cond_opts.k_expr, "k(ell)");
  cond->add_option("--f-expr", cond_opts.f_expr, "f(ell)");
  cond->add_option("--K-expr", cond_opts.K_expr, "K(ell)");
  cond->add_option("--ell-grid", cond_opts.ell_grid, "start:stop:step or pow2:LO:HI");
  cond->add_option("--m", cond_opts.m, "Generator count (log base 2m-1)")->check(CLI::Range(2, kMaxGenerators));
  add_common(cond, common);

  PhaseMapOptions phase_opts;
  auto* phase = app.add_subcommand("phase-map", "Classify f = c0 log^beta / ell^alpha over a grid");
  phase->add_option("--alpha", phase_opts.alpha, "start:stop:step");
  phase->add_option("--beta", phase_opts.beta, "start:stop:step");
  phase->add_option("--coeff", phase_opts.coeff, "c0");
  add_common(phase, common);

  std::string replay_from;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest");
  replay->add_option("--from", replay_from, "Manifest to replay")->required();
  add_common(replay, common);

  std::vector<const char*> argv{"rgroups"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay->parsed()) return do_replay(replay_from, common, out, err);

    RunContext ctx;
    ctx.argv = reproducible_argv(args);
    ctx.out_path = common.out;
    ctx.manifest_path = common.manifest;
    ctx.threads = common.threads;
    if (sample->parsed()) {
      ctx.subcommand = "sample";
      do_sample(ctx, sample_opts, out);
    } else if (triv->parsed()) {
      ctx.subcommand = "trivialize";
      do_trivialize(ctx, triv_opts, out);
    } else if (dist->parsed()) {
      ctx.subcommand = "verify-dist";
      do_verify_dist(ctx, dist_opts, out);
    } else if (pig->parsed()) {
      ctx.subcommand = "pigeonhole";
      do_pigeonhole(ctx, pig_opts, out);
    } else if (diag->parsed()) {
      std::string which;
      for (auto* s : {tutte, census, bound, fulfill, lg}) {
        if (s->parsed()) which = s->get_name();
      }
      ctx.subcommand = "diagrams " + which;
      do_diagrams(ctx, which, diag_opts, out);
    } else if (cond->parsed()) {
      ctx.subcommand = "conditions";
      do_conditions(ctx, cond_opts, out);
    } else if (phase->parsed()) {
      ctx.subcommand = "phase-map";
      do_phase_map(ctx, phase_opts, out);
    }
    ctx.finish(err);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rgroups::cli
