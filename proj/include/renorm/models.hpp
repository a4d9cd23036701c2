#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <memory>
#include <string>
#include <vector>

#include "renorm/grid.hpp"

namespace renorm {

using SpaceTimeScalar = std::function<double(const Point&, double)>;

/// Convection growth exponent and integrability exponent of its weight for given (p, N).
struct Exponents {
  double gamma = 1.0;
  double m = 1.0;
  /// True for N = 1, where the formulas are used outside their stated range.
  bool extended_regime = false;
};

/// gamma = (N+2)(p-1)/(N+p), m = (N+p)/(p-1). Throws DomainError for p <= 1 or N < 1.
Exponents exponents(double p, int N);

/// Leray-Lions flux a(x, t, xi) with its structural constants.
struct FluxModel {
  std::string name;
  double p = 2.0;
  double alpha = 1.0;     ///< coercivity constant
  double k_growth = 1.0;  ///< growth constant
  double delta_reg = 0.0;
  SpaceTimeScalar b;      ///< growth offset, nonnegative
  std::function<Vec2(const Point&, double, const Vec2&)> eval;
  /// Scalar c(xi) with eval ~ c * xi, used to freeze the flux in the Picard linearization.
  std::function<double(const Point&, double, const Vec2&)> picard_coefficient;
};

/// Default regularization: 1e-8 for p < 2 (gradient of the flux singular at 0), else 0.
double default_delta_reg(double p);

/// a(xi) = (|xi|^2 + delta^2)^{(p-2)/2} xi with alpha = 1. For p >= 2 and delta > 0 the
/// growth bound uses k = 2^{(p-2)/2} and b = delta^{p-1}; otherwise k = 1 and b = 0.
FluxModel p_laplacian_flux(double p, double delta_reg);

/// Lower-order flux Phi(x, t, s) with |Phi| <= c(x, t) |s|^gamma.
struct ConvectionModel {
  std::string name;
  SpaceTimeScalar c;
  double gamma = 1.0;
  double m = 1.0;
  std::function<Vec2(const Point&, double, double)> eval;
  /// |Phi(r1) - Phi(r2)| <= |r1 - r2| holds for this instance.
  bool lipschitz_for_uniqueness = false;
  /// Level of the pre-composed truncation (infinite when not truncated).
  double truncation_level = std::numeric_limits<double>::infinity();
  /// Coefficient c0 of the weight c = c0 (1 + sin(2 pi x)/2).
  double c0 = 0.0;
};

ConvectionModel no_convection();

/// Phi = c(x,t) (2/pi) atan(s~) |s~|^{gamma-1} e with s~ = T_cap(s) and e a unit direction.
ConvectionModel growth_convection(double c0, double cap, const Exponents& ex, int dim);

/// Phi = c(x,t) g(s) e with g = sin for gamma <= 1 and g = s|s|^{gamma-1}/(1+|s|^gamma)
/// otherwise; c0 is reduced if needed so that Phi is 1-Lipschitz in s.
ConvectionModel lipschitz_convection(double c0, const Exponents& ex, int dim);

/// Phi_eps(x, t, s) = Phi(x, t, T_{1/eps}(s)). Throws DomainError for eps <= 0.
ConvectionModel convection_truncate(const ConvectionModel& model, double eps);

struct AxiomCheck {
  std::string condition;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Smallest (slack / scale) observed; negative means a violation beyond round-off.
  double worst_margin = 0.0;
};

/// Random sampling of coercivity, a(0) = 0, growth and monotonicity. Tolerances are
/// relative to max(1, magnitude of the compared terms). For p < 2 with delta > 0 the
/// coercivity check is the relaxed a.xi >= alpha |xi|^p - alpha delta^p.
std::vector<AxiomCheck> verify_flux_axioms(const FluxModel& flux, int dim, std::size_t samples,
                                           double tol, std::uint64_t seed);

/// Growth |Phi| <= c|s|^gamma, the bound c * level^gamma for truncated models, and the
/// 1-Lipschitz bound when the model is flagged for uniqueness.
std::vector<AxiomCheck> verify_convection_axioms(const ConvectionModel& conv, int dim,
                                                 std::size_t samples, double tol, std::uint64_t seed);

enum class DataKind { smooth, concentrated_bump, sign_changing };

struct DataParams {
  DataKind kind = DataKind::smooth;
  double amplitude = 1.0;  ///< scale (smooth) or mass (bumps) of u0
  double forcing = 0.0;    ///< scale (smooth, sign_changing) or total mass (bump) of f
  double width = 0.05;     ///< side of the bump boxes
};

/// Integrable data (f, u0) with analytically known L1 norms.
struct RoughData {
  DataParams params;
  DomainSpec domain;
  double T = 1.0;
  SpaceTimeScalar f;
  std::function<double(const Point&)> u0;
  double f_l1 = 0.0;
  double u0_l1 = 0.0;
};

RoughData make_data(const DataParams& params, const DomainSpec& domain, double T);

/// Midpoint-rule L1 norms on a lattice with `resolution` points per axis (and in time).
double sampled_l1_u0(const RoughData& data, int resolution);
double sampled_l1_f(const RoughData& data, int resolution);

struct RegularizedData {
  Field f_eps;                ///< level n holds the average of f over (t_{n-1}, t_n]
  std::vector<double> u0_eps; ///< zero on Dirichlet nodes
};

/// Truncate at 1/eps, average per cell, project to nodes with the lumped mass, then spread
/// with a triangular kernel of width max(eps, 2h) per axis. Every stage is L1-nonexpansive
/// with respect to the lumped mass. A nonzero seed widens the kernel by a factor in [1, 1.25).
RegularizedData regularize_data(const RoughData& data, double eps, std::shared_ptr<const Grid> grid,
                                std::uint64_t seed = 0);

/// ||f_eps - f||_{L1(Q)} and ||u0_eps - u0||_{L1}, by sub-cell quadrature of the interpolants.
double f_l1_error(const RoughData& data, const Field& f_eps);
double u0_l1_error(const RoughData& data, const Grid& grid, std::span<const double> u0_eps);

}  // namespace renorm
