#pragma once

#include <vector>

#include "hatk/dyadic.hpp"
#include "hatk/exponents.hpp"
#include "hatk/grid.hpp"

namespace hatk {

/// {0,1}-valued indicator on a grid; measure = count * cell measure.
class MeasurableSet {
 public:
  explicit MeasurableSet(GridFunction indicator);

  static MeasurableSet empty(const SampleGrid& grid);
  static MeasurableSet full(const SampleGrid& grid);
  /// Union of intervals on a 1D torus, positions wrapped.
  static MeasurableSet from_intervals(const SampleGrid& grid,
                                      const std::vector<DyadicInterval>& intervals);
  template <class Pred>
  static MeasurableSet from_predicate(const SampleGrid& grid, Pred pred) {
    GridFunction g(grid);
    for (std::size_t i = 0; i < grid.point_count(); ++i) g[i] = pred(i) ? 1.0 : 0.0;
    return MeasurableSet(std::move(g));
  }

  const GridFunction& indicator() const noexcept { return ind_; }
  const SampleGrid& grid() const noexcept { return ind_.grid(); }
  bool contains(std::size_t i) const { return ind_[i].real() != 0.0; }
  std::size_t count() const noexcept { return count_; }
  double measure() const noexcept { return static_cast<double>(count_) * ind_.grid().cell_measure(); }

  MeasurableSet set_union(const MeasurableSet& o) const;
  MeasurableSet set_intersection(const MeasurableSet& o) const;
  MeasurableSet set_difference(const MeasurableSet& o) const;
  MeasurableSet complement() const;

  bool operator==(const MeasurableSet& o) const;

 private:
  GridFunction ind_;
  std::size_t count_ = 0;
};

/// (sum |f w|^p dx)^(1/p); max |f w| when p is infinite.
double lp_norm(const GridFunction& f, double p);
double lp_norm(const GridFunction& f, double p, const GridFunction& weight);

/// Measure of {|f| > lambda}.
double distribution_function(const GridFunction& f, double lambda);

/// sup_lambda lambda * |{|f| > lambda}|^(1/p), attained at left limits of sample levels.
double weak_lp_norm(const GridFunction& f, double p);

/// Iterated norm over logical axes (x[, y], v1, ...), innermost exponent on the last axis.
/// Spatial axes carry the grid spacing as measure, vector axes counting measure.
double mixed_norm(const GridFunction& f, const MixedNormSpec& spec);

struct DualizationResult {
  MeasurableSet e_tilde;
  double ratio = 0.0;      ///< ||f 1_Etilde||_r / |E|^(1/r - 1/p)
  double threshold = 0.0;  ///< C A / |E|^(1/p)
  double weak_norm = 0.0;  ///< A
};

/**
 * Removes Omega = {|f| > C A / |E|^(1/p)} from E, A = ||f||_{p,inf}.
 * Throws MajorSubsetError (carrying |Etilde|/|E|) if |Etilde| < |E|/2.
 */
DualizationResult dualize_weak_via_Lr(const GridFunction& f, const MeasurableSet& E, double r,
                                      double p, double C = 4.0);

struct MajorSubsetResult {
  MeasurableSet e_prime;
  double value = 0.0;  ///< |<f, 1_E'>| / |E|^(1 - 1/p)
};

/// Same threshold as dualize_weak_via_Lr, paired against 1_E'.
MajorSubsetResult major_subset_L1(const GridFunction& f, const MeasurableSet& E, double p,
                                  double C = 4.0);

}  // namespace hatk
