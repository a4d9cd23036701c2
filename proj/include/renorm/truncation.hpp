#pragma once

#include <functional>
#include <span>
#include <vector>

#include "renorm/grid.hpp"

namespace renorm {

/// Clamp of r to [-k, k]. Throws DomainError for k <= 0.
double truncate(double r, double k);

/// Primitive of truncate(., k) vanishing at 0: r^2/2 inside, k|r| - k^2/2 outside.
double theta(double r, double k);

enum class CutoffKind { hard_truncation, smooth_renorm, uniqueness_plateau };

/// Parameters of a cutoff family member. Only the fields relevant to `kind` are read:
/// hard_truncation uses k, smooth_renorm uses M, uniqueness_plateau uses s and sigma.
struct CutoffSpec {
  CutoffKind kind = CutoffKind::hard_truncation;
  double k = 1.0;
  double s = 1.0;
  double sigma = 1.0;
  double M = 1.0;

  void validate() const;
};

/// A renormalizing function with its first two derivatives. The second derivative
/// of the ramp families is a density on the ramp bands, so callers integrate it
/// against bounded integrands instead of sampling it at the kinks.
struct RenormFunction {
  std::function<double(double)> value;
  std::function<double(double)> slope;
  std::function<double(double)> curvature;
};

/// Fraction of M used as the width of the linear ramp of S'.
inline constexpr double kSmoothRenormBlendFraction = 0.125;

/// S with S' = 1 on |r| <= M - M/8, a linear ramp of S' down to 0 on M - M/8 <= |r| <= M,
/// and S' = 0 beyond. S(0) = 0, S is C^1 and |S''| <= 8/M.
RenormFunction smooth_renorm(const CutoffSpec& spec);

/// Plateau cutoff: slope is 1 on |r| < s, (s + sigma - |r|)/sigma on the ramp and 0 beyond;
/// value is the primitive of the slope with value(0) = 0.
RenormFunction uniqueness_plateau(const CutoffSpec& spec);

/// Dispatch on spec.kind. hard_truncation yields T_k with slope 1_{|r|<k} and zero curvature.
RenormFunction make_cutoff(const CutoffSpec& spec);

/// S = 0.
RenormFunction zero_renorm();

/// S = identity.
RenormFunction identity_renorm();

/// Exponential-in-time regularization of T_k(u) started from T_k(psi).
struct TimeRegularizer {
  double mu = 1.0;
  /// Smooth surrogate of the initial datum, one value per node.
  std::vector<double> psi;
};

/// eta_0 = T_k(psi), eta_{n+1} = e^{-mu dt} eta_n + (1 - e^{-mu dt}) T_k(u_{n+1}).
/// This is the exact causal exponential average for inputs piecewise constant in time,
/// so |eta| <= k always. Throws DomainError for mu <= 0, k <= 0, or a psi of wrong size.
Field time_regularize(const Field& u, double k, const TimeRegularizer& reg);

}  // namespace renorm
