#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "hatk/analysis.hpp"
#include "hatk/bench.hpp"
#include "hatk/error.hpp"
#include "hatk/operators.hpp"

namespace {

using namespace hatk;

double relative_residual(const GridFunction& whole, const TelescopingTerms& t) {
  GridFunction sum = t.remainder;
  for (const auto& term : t.terms) sum += term;
  GridFunction diff = whole;
  diff -= sum;
  return l2_norm(diff) / l2_norm(whole);
}

int cmd_run(const std::string& path) {
  auto config = bench::ExperimentConfig::load(path);
  auto report = bench::run_campaign(config);
  for (const auto& t : report.targets) {
    std::printf("%-28s %s rows=%zu max=%.4g median=%.4g growth=%.4g%s%s\n", t.id.c_str(),
                t.passed ? "PASS" : "FAIL", t.aggregate.rows, t.aggregate.max_ratio, t.aggregate.median_ratio,
                t.aggregate.growth, t.error.empty() ? "" : " error: ", t.error.c_str());
  }
  if (!config.output.empty())
    for (const auto& f : config.formats) bench::emit_report(report, f, config.output);
  return report.passed() ? 0 : 1;
}

int cmd_list() {
  for (const auto& t : bench::target_registry()) {
    std::printf("%s\n  %s\n  exponents: %s\n", t.id.c_str(), t.anchor.c_str(), t.exponents.c_str());
    if (!t.param_name.empty()) {
      std::printf("  sweep %s:", t.param_name.c_str());
      for (double p : t.default_sweep) std::printf(" %g", p);
      std::printf("\n");
    }
  }
  return 0;
}

int cmd_range(const std::string& query) {
  auto result = bht_range_membership(RangeQuery::parse(query));
  std::cout << result.summary() << "\n";
  return result.member ? 0 : 1;
}

int cmd_demo(std::uint64_t seed, bool forest) {
  SampleGrid g1(4096);
  auto f = bench::random_band_limited(g1, bench::derive_seed(seed, {1}), 200.0);
  auto g = bench::random_band_limited(g1, bench::derive_seed(seed, {2}), 200.0);
  auto t1 = telescoping_decomposition(f, g);
  std::printf("1D N=4096 scales [%d, %d) relative residual %.3e\n", t1.k0, t1.k1, relative_residual(f * g, t1));

  SampleGrid g2(256, 1.0, 2);
  auto F = bench::random_band_limited(g2, bench::derive_seed(seed, {3}), 24.0);
  auto G = bench::random_band_limited(g2, bench::derive_seed(seed, {4}), 24.0);
  auto t2 = telescoping_decomposition(F, G);
  std::printf("2D 256x256 nine-term relative residual %.3e\n", relative_residual(F * G, t2));

  if (forest) {
    SampleGrid g(256);
    DyadicInterval I0{0, 0};
    auto family = dyadic_subintervals(I0, 4);
    auto e1 = bench::random_dyadic_set(g, bench::derive_seed(seed, {5}), 0.25);
    auto e2 = bench::random_dyadic_set(g, bench::derive_seed(seed, {6}), 0.5);
    auto e3 = bench::random_dyadic_set(g, bench::derive_seed(seed, {7}), 0.75);
    std::cout << stopping_decompose(family, e1, e2, e3, I0, 8.0).to_json() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-frequency harmonic analysis toolkit"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run an experiment campaign");
  run->add_option("config", config, "campaign config file")->required();

  auto* list = app.add_subcommand("list-targets", "list registered inequality targets");

  std::string query;
  auto* range = app.add_subcommand("range", "bilinear Hilbert transform range membership");
  range->add_option("query", query, "e.g. \"p=4 q=2 s=4/3 r1=4/3 r2=4 r=1\"")->required();

  std::uint64_t seed = 1;
  bool forest = false;
  auto* demo = app.add_subcommand("decompose-demo", "telescoping residuals and a sample stopping forest");
  demo->add_option("--seed", seed, "seed");
  demo->add_flag("--forest", forest, "print the stopping forest as JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config);
    if (*list) return cmd_list();
    if (*range) return cmd_range(query);
    if (*demo) return cmd_demo(seed, forest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
