#pragma once

// Generators and independent reference solutions shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "renorm/grid.hpp"

namespace testing_support {

/// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// Mix of small, moderate and large magnitudes with either sign, plus exact zeros.
  double wide_real() {
    switch (integer(0, 4)) {
      case 0: return 0.0;
      case 1: return uniform(-1.0, 1.0);
      case 2: return uniform(-10.0, 10.0);
      case 3: return uniform(-1e4, 1e4);
      default: return (coin() ? 1.0 : -1.0) * std::pow(10.0, uniform(-8.0, 8.0));
    }
  }

  double positive(double lo_exp = -3.0, double hi_exp = 3.0) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }

  /// Piecewise-constant field with repeated values so that ties are exercised.
  void field(std::vector<double>& values, std::vector<double>& measures, int n_max = 60) {
    const int n = integer(1, n_max);
    values.resize(n);
    measures.resize(n);
    std::vector<double> palette(integer(1, 8));
    for (auto& v : palette) v = uniform(-5.0, 5.0);
    for (int i = 0; i < n; ++i) {
      values[i] = coin() ? palette[integer(0, static_cast<int>(palette.size()) - 1)] : uniform(-5.0, 5.0);
      measures[i] = uniform(0.01, 1.0);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Exact amplitude a(t) of u = a(t) sin(pi x) for u_t - u_xx = F (1 + cos(pi t / T)/2) sin(pi x)
/// on (0, 1) with homogeneous Dirichlet data and a(0) = A.
inline double heat_amplitude(double A, double F, double T, double t) {
  const double lam = std::numbers::pi * std::numbers::pi;
  const double w = std::numbers::pi / T;
  const double decay = std::exp(-lam * t);
  const double constant_part = (1.0 - decay) / lam;
  const double cosine_part = (lam * std::cos(w * t) + w * std::sin(w * t) - lam * decay) / (lam * lam + w * w);
  return A * decay + F * (constant_part + 0.5 * cosine_part);
}

/// Thomas algorithm for a tridiagonal system; sub[0] and super[n-1] are ignored.
inline std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag, std::vector<double> super,
                                  std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * super[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
  return x;
}

inline std::shared_ptr<const renorm::Grid> unit_grid_1d(int cells, double T, std::size_t steps,
                                                        renorm::BoundarySpec bnd = {}) {
  renorm::DomainSpec d;
  return std::make_shared<const renorm::Grid>(renorm::build_grid(d, {cells, 1}, bnd, T, steps));
}

inline std::shared_ptr<const renorm::Grid> unit_grid_2d(int cells, double T, std::size_t steps,
                                                        renorm::BoundarySpec bnd = {}) {
  renorm::DomainSpec d;
  d.dim = 2;
  return std::make_shared<const renorm::Grid>(renorm::build_grid(d, {cells, cells}, bnd, T, steps));
}

}  // namespace testing_support
