#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hatk/dyadic.hpp"
#include "hatk/grid.hpp"
#include "hatk/norms.hpp"

namespace hatk {

/**
 * Localized averages |J|^-1 * integral |f| chi_J^M over dyadic J on a 1D torus.
 *
 * One correlation per scale is computed lazily through the DFT, after which
 * every position at that scale is a table lookup.
 */
class AverageTable {
 public:
  AverageTable(const GridFunction& f, int decay = 10);

  /// Average against the bump of I translated by shift * |I|.
  double average(const DyadicInterval& I, long shift = 0) const;
  const SampleGrid& grid() const noexcept { return grid_; }
  int decay() const noexcept { return decay_; }

 private:
  const std::vector<double>& scale_row(int scale) const;

  SampleGrid grid_;
  int decay_;
  std::vector<cplx> spectrum_;  // unnormalized DFT of |f|
  mutable std::map<int, std::vector<double>> rows_;
};

/// Coarsest scale whose intervals tile the torus exactly.
int torus_scale(const SampleGrid& grid);

/// <f, phi_I> for each I of the family, packets of the given window.
std::vector<cplx> packet_coefficients(const GridFunction& f, const std::vector<DyadicInterval>& family,
                                      PacketWindow window, long shift = 0);

enum class SizeFlavor { lacunary, non_lacunary, modified, bht, shifted };

std::string to_string(SizeFlavor flavor);

struct SizeReport {
  double value = 0.0;
  DyadicInterval witness;
  SizeFlavor flavor = SizeFlavor::modified;
  long shift = 0;
};

struct SizeOptions {
  int decay = 10;
  long shift = 0;  ///< used by the shifted flavor
};

/**
 * Sup over the family of the flavor's localized quantity:
 * non_lacunary |<f, phi_I>| / |I|^(1/2); lacunary |I0|^-1 ||S_I0 f||_{1,inf};
 * modified and bht |I|^-1 integral |f| chi_I; shifted the same with chi of I + n|I|.
 */
SizeReport size(const GridFunction& f, const std::vector<DyadicInterval>& family, SizeFlavor flavor,
                const SizeOptions& options = {});

/// Modified size over collection_plus(family, I0); the witness ranges over that enlarged set.
SizeReport size_tilde(const GridFunction& f, const std::vector<DyadicInterval>& family,
                      std::optional<DyadicInterval> I0 = std::nullopt, int decay = 10);

/// Tile size: sup over spatial intervals of the tiles, maxed with the I0 average when given.
SizeReport bht_size(const GridFunction& f, const std::vector<Tritile>& tiles,
                    std::optional<DyadicInterval> I0 = std::nullopt, int decay = 10);

struct EnergyReport {
  double value = 0.0;
  int level = 0;                       ///< n
  std::vector<DyadicInterval> family;  ///< disjoint witness D
};

/// Localized square function (sum_{I in family, I inside I0} |c_I|^2 / |I| 1_I)^(1/2).
GridFunction localized_square_function(const SampleGrid& grid, const std::vector<DyadicInterval>& family,
                                       const std::vector<cplx>& coefficients, const DyadicInterval& I0);

/**
 * sup_n 2^n sum_{I in D} |I| over disjoint D whose members reach level 2^n.
 * For each level, D is the greedy largest-first disjoint extraction, which is
 * exact for dyadic families. Lacunary members are scored by |I0|^-1 ||S_I0||_{1,inf}.
 */
EnergyReport energy(const GridFunction& f, const std::vector<DyadicInterval>& family, PacketFlavor flavor);

/// Shifted dyadic maximal function: sup over dyadic I containing x of |I|^-1 integral |f| chi_{I_n}.
GridFunction maximal(const GridFunction& f, long shift_n = 0, int decay = 10);

/// (sum_I |<f, psi_{I_n}>|^2 / |I| 1_I(x))^(1/2) over every resolvable lacunary scale.
GridFunction shifted_square(const GridFunction& f, long shift_n = 0);

struct ExceptionalInput {
  GridFunction function;
  GridFunction weight;
};

struct ExceptionalSet {
  MeasurableSet omega;
  MeasurableSet e_tilde;
  std::vector<double> thresholds;
  double ratio = 0.0;  ///< |E minus Omega| / |E|
  bool major = false;
};

/**
 * Omega = union over inputs of {M(f w) > C ||f w||_1 / |E|}.
 * Throws MajorSubsetError when E minus Omega is not major and `require_major` is set.
 */
ExceptionalSet exceptional_set(const MeasurableSet& protect, const std::vector<ExceptionalInput>& inputs,
                               double C, bool require_major = true);

/// One stopping-time selection I_j at level n with the stock members it captured.
struct StoppingSelection {
  int d = 0;
  int set = 1;  ///< 1, 2 or 3
  int level = 0;
  DyadicInterval interval;
  double average = 0.0;
  std::vector<DyadicInterval> members;
};

struct StoppingCell {
  int d = 0;
  int n1 = 0, n2 = 0, n3 = 0;
  DyadicInterval K;
  std::vector<DyadicInterval> members;
};

struct StoppingForest {
  DyadicInterval I0;
  double C = 0.0;
  int decay = 10;
  double e3_tilde_measure = 0.0;
  double e3_ratio = 1.0;
  double mass[3] = {0.0, 0.0, 0.0};  ///< ||1_Ej chi_I0||_1, with E3 replaced by its major subset
  std::map<int, std::vector<DyadicInterval>> buckets;  ///< d -> members
  std::vector<StoppingSelection> selections;
  std::vector<StoppingCell> cells;

  /// Deterministic JSON layout; see README for the schema.
  std::string to_json() const;
};

/**
 * Triple stopping time over a family inside I0. Distance buckets use
 * d = floor(log2(1 + dist(I, Omega^c)/|I|)) with periodic distance; each set
 * is swept by increasing level, selecting maximal dyadic J inside I0 whose
 * average lies in [2^-n-1, 2^-n].
 */
StoppingForest stopping_decompose(const std::vector<DyadicInterval>& family, const MeasurableSet& E1,
                                  const MeasurableSet& E2, const MeasurableSet& E3,
                                  const DyadicInterval& I0, double C, int decay = 10);

}  // namespace hatk
