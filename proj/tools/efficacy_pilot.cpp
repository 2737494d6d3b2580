// Calibrates the success-rate floor used by the acceptance run at m = 2,
// density 11/20. Writes the measurement and a manifest next to it.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <iostream>

#include "rgroups/cli.hpp"

using namespace rgroups;

int main(int argc, char** argv) {
  CLI::App app{"Trivializer efficacy pilot"};
  std::string out = "efficacy_pilot.json";
  std::uint64_t first_seed = 1000;
  int seeds = 200;
  int threads = 1;
  app.add_option("--out", out, "Output JSON");
  app.add_option("--first-seed", first_seed, "First seed");
  app.add_option("--seeds", seeds, "Seeds per length")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  const int m = 2;
  const Rational density(11, 20);
  const std::vector<int> lengths = {12, 16, 20};

  Json rates = Json::array();
  double p20 = 0;
  for (int ell : lengths) {
    std::vector<char> ok(static_cast<std::size_t>(seeds), 0);
    parallel_chunks(ok.size(), threads, [&](std::size_t i) {
      const Presentation R = sample_presentation(params_from_density(m, ell, density), Rng(first_seed + i));
      ok[i] = trivialize(R, TrivializerConfig::make(m, ell)).outcome == Outcome::Trivial;
    });
    const int hits = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
    const double p = double(hits) / seeds;
    if (ell == 20) p20 = p;
    rates.push_back({{"ell", ell}, {"trivial", hits}, {"runs", seeds}, {"rate", p}});
    std::cerr << "ell=" << ell << " trivial " << hits << "/" << seeds << "\n";
  }
  // Floor for a 50-seed acceptance run: three standard errors of that sample size below the pilot rate.
  const double floor = p20 - 3 * std::sqrt(p20 * (1 - p20) / 50);

  Json result;
  result["m"] = m;
  result["density"] = to_string(density);
  result["first_seed"] = first_seed;
  result["seeds"] = seeds;
  result["rng"] = {{"name", Rng::kName}, {"version", Rng::kVersion}};
  result["rates"] = rates;
  result["floor"] = floor;
  result["floor_rule"] = "rate(ell=20) - 3*sqrt(rate*(1-rate)/50)";
  const std::string body = result.dump(2) + "\n";
  cli::write_file(out, body);

  Json manifest;
  manifest["tool"] = "efficacy_pilot";
  manifest["artifact_version"] = cli::kArtifactVersion;
  manifest["argv"] = std::vector<std::string>(argv + 1, argv + argc);
  manifest["output"] = {{"path", out}, {"sha256", cli::sha256_hex(body)}};
  manifest["threads"] = threads;
  manifest["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  cli::write_file(out + ".manifest.json", manifest.dump(2) + "\n");
  std::cout << body;
  return 0;
}
