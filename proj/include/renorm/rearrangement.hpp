#pragma once

#include <limits>
#include <span>
#include <vector>

namespace renorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A piecewise-constant function: one value per cell with the cell's measure.
struct CellFunction {
  std::span<const double> values;
  std::span<const double> measures;
};

/// Decreasing rearrangement of |u| as a step table. thresholds holds the distinct
/// values of |u| in ascending order, measures[j] the measure where |u| == thresholds[j].
struct RearrangementTable {
  std::vector<double> thresholds;
  std::vector<double> measures;
  double total_measure = 0.0;

  /// u*(s): right-continuous, nonincreasing, zero for s >= total_measure.
  double decreasing(double s) const;
  /// Integral of u* over [0, t], exact; t may exceed total_measure.
  double cumulative(double t) const;
};

struct LorentzIndex {
  double p = 1.0;
  double q = 1.0;  ///< kInf selects the weak-type (maximal average) form

  void validate() const;
};

/// Measure of {|u| > t}. Throws DomainError for t < 0 or non-finite values.
double distribution(const CellFunction& u, double t);

RearrangementTable rearrange(const CellFunction& u);

/// u**(t) = (1/t) * integral of u* over [0, t], for 0 < t <= total_measure.
double maximal_average(const RearrangementTable& table, double t);

/// L^{p,q} quasi-norm by exact integration over the step table. For q = inf this is the
/// supremum of t^{1/p} u**(t), taken over piece endpoints and interior critical points.
double lorentz_norm(const RearrangementTable& table, const LorentzIndex& idx);
double lorentz_norm(const CellFunction& u, const LorentzIndex& idx);

/// ||u||_p evaluated on the rearrangement table.
double lebesgue_norm(const RearrangementTable& table, double p);

/// ||u||_p from the layer-cake formula p * int t^{p-1} delta_u(t) dt, evaluated exactly
/// on the step distribution function. Throws DomainError unless 1 <= p < inf.
double lebesgue_norm_via_distribution(const CellFunction& u, double p);

}  // namespace renorm
