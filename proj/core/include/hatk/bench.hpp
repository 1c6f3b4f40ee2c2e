#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hatk/grid.hpp"
#include "hatk/norms.hpp"

namespace hatk::bench {

// ---------------------------------------------------------------- RNG

/**
 * SplitMix64 in counter mode: draw i of a stream is mix(seed + (i + 1) * 0x9E3779B97F4A7C15),
 * mix being the SplitMix64 finalizer. Uniform doubles use the top 53 bits; normals use
 * Box-Muller on two consecutive uniforms.
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) noexcept;
  std::uint64_t at(std::uint64_t counter) const noexcept;

  std::uint64_t next() noexcept { return at(counter_++); }
  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// 64-bit FNV-1a of a string, for seeding streams by name.
std::uint64_t fnv1a(const std::string& text) noexcept;

/// Child seed from a parent seed and a list of integer labels.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) noexcept;

// ---------------------------------------------------------------- trial generators

/// Random complex (or real) spectrum on |xi| <= band, exact zero elsewhere; unit L2 norm.
GridFunction random_band_limited(const SampleGrid& grid, std::uint64_t seed, double band, bool real = false);

/// Piecewise constant on 2^depth equal cells, normal values.
GridFunction random_step_function(const SampleGrid& grid, std::uint64_t seed, int depth);

/// Sum of `count` Gaussian bumps with random centers, widths and signs (periodized).
GridFunction random_bump_train(const SampleGrid& grid, std::uint64_t seed, int count);

/// Union of random dyadic intervals with exactly measure / spacing sample points.
/// Throws DomainError if the measure is not a whole number of cells or exceeds the torus.
MeasurableSet random_dyadic_set(const SampleGrid& grid, std::uint64_t seed, double measure);

/// K band-limited components stacked along one vector axis.
GridFunction random_vector_function(const SampleGrid& grid, std::uint64_t seed, std::size_t K, double band);

struct TrialParams {
  std::string kind = "band-limited";  ///< band-limited, step, bump-train, set, vector
  std::size_t samples = 1024;
  int dimension = 1;
  double band = 32.0;
  int depth = 6;
  int count = 8;
  double measure = 0.25;
  std::size_t components = 4;
};

using Trial = std::variant<GridFunction, MeasurableSet>;

/// Dispatches on params.kind; deterministic per (params, seed).
Trial generate_trial(const TrialParams& params, std::uint64_t seed);

// ---------------------------------------------------------------- targets

struct TrialContext {
  std::size_t samples = 1024;   ///< 1D grid size; 2D targets use samples2d
  std::size_t samples2d = 128;
  std::uint64_t seed = 0;
  int trial = 0;
  double param = 0.0;    ///< swept structural parameter (K, n, tile factor, ...)
  double epsilon = 0.05;
};

struct TrialOutcome {
  double lhs = 0.0;
  double rhs = 0.0;
};

enum class GrowthPolicy {
  none,     ///< least-squares slope of log ratio against log param within +- tolerance
  bounded,  ///< same slope, only required to be at most tolerance (decay allowed)
  polylog,  ///< fitted kappa of ratio ~ C log^kappa(1 + param) at most tolerance
  ignore,
};

struct AcceptancePolicy {
  double cap = 50.0;
  GrowthPolicy growth = GrowthPolicy::ignore;
  double tolerance = 0.1;
};

struct InequalityTarget {
  std::string id;
  std::string anchor;       ///< the inequality in words
  std::string exponents;    ///< exponent configuration, rational syntax
  std::string param_name;   ///< name of the swept parameter, empty if none
  std::vector<double> default_sweep{0.0};
  bool uses_epsilon = false;
  AcceptancePolicy policy;
  std::function<TrialOutcome(const TrialContext&)> run;
};

/// All registered targets in canonical order.
const std::vector<InequalityTarget>& target_registry();
const InequalityTarget& find_target(const std::string& id);

// ---------------------------------------------------------------- campaigns

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::vector<std::size_t> grid_sizes{1024};
  std::size_t grid2d = 128;
  int trials = 10;
  std::vector<std::string> targets;
  std::vector<double> epsilons{0.05};
  std::map<std::string, std::vector<double>> sweeps;
  std::map<std::string, double> caps;
  std::map<std::string, double> tolerances;
  std::string output;  ///< path prefix; empty means no files
  std::vector<std::string> formats{"csv", "json", "plotdata"};

  /// Parses "key = value" lines; '#' starts a comment. See README for the keys.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

struct TrialRow {
  std::string target;
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double param = 0.0;
  double epsilon = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct Aggregate {
  std::size_t rows = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  double growth = 0.0;  ///< slope or kappa, depending on the policy
  std::map<double, double> max_by_param;
};

struct TargetSummary {
  std::string id;
  std::string param_name;
  AcceptancePolicy policy;
  Aggregate aggregate;
  bool passed = false;
  std::string error;  ///< evaluator error that aborted the target
};

struct TrialReport {
  std::vector<TrialRow> rows;
  std::vector<TargetSummary> targets;
  bool passed() const;
};

/// Aggregates recomputed from rows alone.
Aggregate aggregate_rows(const std::vector<TrialRow>& rows, GrowthPolicy growth);

/// Worker count from HATK_THREADS (default 1).
unsigned thread_count();

TrialReport run_campaign(const ExperimentConfig& config);

/// Re-executes one row from its recorded parameters.
TrialRow rerun_row(const TrialRow& row, std::size_t samples2d = 128);

// ---------------------------------------------------------------- reports

std::string report_csv(const TrialReport& report);
std::string report_json(const TrialReport& report);
std::string report_plotdata(const TrialReport& report);

/// Parses the CSV emitted above back into rows.
std::vector<TrialRow> parse_csv(const std::string& text);

/// Writes prefix.csv / prefix.json / prefix.plot.tsv; throws std::runtime_error on I/O failure.
void emit_report(const TrialReport& report, const std::string& format, const std::string& prefix);

}  // namespace hatk::bench
