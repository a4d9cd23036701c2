#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "renorm/errors.hpp"
#include "renorm/models.hpp"
#include "renorm/solver.hpp"
#include "support.hpp"

using namespace renorm;
using testing_support::Gen;

namespace {

double lumped_l1(const Grid& g, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += g.node_measure(i) * std::abs(v[i]);
  return s;
}

// Composite midpoint rule in 1D, independent of the library sampler.
template <class F>
double midpoint(F&& f, double a, double b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * (b - a) / n);
  return s * (b - a) / n;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("exponent identities") {
    Gen g(31);
    for (int trial = 0; trial < 500; ++trial) {
      const double p = 1.0 + g.positive(-2.0, 1.0);
      const int N = g.integer(1, 6);
      const Exponents e = exponents(p, N);
      CHECK(e.gamma * e.m == doctest::Approx(N + 2.0).epsilon(1e-13));
      const double pp = p / (p - 1.0);
      CHECK(pp / e.m + e.gamma * pp * N / (p * (N + 2.0)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(e.extended_regime == (N == 1));
    }
    CHECK(exponents(2.0, 2).gamma == doctest::Approx(1.0));
    CHECK(exponents(2.0, 2).m == doctest::Approx(4.0));
    CHECK(exponents(3.0, 3).gamma == doctest::Approx(5.0 / 3.0));
    CHECK(exponents(3.0, 3).m == doctest::Approx(3.0));
    CHECK(exponents(2.0, 1).gamma == doctest::Approx(1.0));
    CHECK(exponents(2.0, 1).m == doctest::Approx(3.0));
    CHECK_THROWS_AS(exponents(1.0, 2), DomainError);
    CHECK_THROWS_AS(exponents(2.0, 0), DomainError);
  }

  TEST_CASE("p-Laplacian flux satisfies the structural conditions") {
    for (double p : {1.5, 2.0, 3.0, 4.0})
      for (int dim : {1, 2}) {
        const FluxModel f = p_laplacian_flux(p, default_delta_reg(p));
        for (const auto& c : verify_flux_axioms(f, dim, 10000, 1e-9, 7)) {
          INFO("p = " << p << ", dim = " << dim << ", " << c.condition);
          CHECK(c.samples == 10000);
          CHECK(c.violations == 0);
        }
      }
    const FluxModel f = p_laplacian_flux(3.0, 0.0);
    const Vec2 a = f.eval({0.3, 0.0}, 0.0, {2.0, 0.0});
    CHECK(a[0] == doctest::Approx(4.0));
    CHECK(p_laplacian_flux(4.0, 0.0).eval({0.3, 0.0}, 0.0, {2.0, 0.0})[0] == doctest::Approx(8.0));
    const FluxModel sub = p_laplacian_flux(1.5, 0.0);
    for (double x : {1e-6, 1e-3, 0.5, 7.0}) {
      const Vec2 xi{x, 0.0};
      CHECK(dot(sub.eval({0.5, 0.0}, 0.0, xi), xi) == doctest::Approx(std::pow(x, 1.5)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(p_laplacian_flux(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(p_laplacian_flux(2.0, -1.0), DomainError);
  }

  TEST_CASE("flux with offset regularization for p > 2") {
    const FluxModel f = p_laplacian_flux(3.0, 0.1);
    CHECK(f.k_growth == doctest::Approx(std::sqrt(2.0)));
    CHECK(f.b({0.5, 0.5}, 0.0) == doctest::Approx(0.01));
    for (const auto& c : verify_flux_axioms(f, 2, 5000, 1e-9, 8)) CHECK(c.violations == 0);
  }

  TEST_CASE("convection models satisfy growth, truncation and Lipschitz bounds") {
    for (double p : {1.5, 2.0, 3.0})
      for (int dim : {1, 2}) {
        const Exponents ex = exponents(p, dim);
        const ConvectionModel grow = growth_convection(0.5, 10.0, ex, dim);
        const ConvectionModel lip = lipschitz_convection(2.0, ex, dim);
        CHECK(lip.lipschitz_for_uniqueness);
        CHECK(lip.c0 <= 2.0);
        for (const auto* m : {&grow, &lip}) {
          for (const auto& c : verify_convection_axioms(*m, dim, 10000, 1e-9, 9)) {
            INFO("p = " << p << ", dim = " << dim << ", " << m->name << ", " << c.condition);
            CHECK(c.violations == 0);
          }
          const ConvectionModel t = convection_truncate(*m, 0.25);
          CHECK(t.truncation_level == 4.0);
          const auto checks = verify_convection_axioms(t, dim, 10000, 1e-9, 10);
          CHECK(checks.size() >= 2);
          for (const auto& c : checks) CHECK(c.violations == 0);
        }
      }
    CHECK_THROWS_AS(convection_truncate(no_convection(), 0.0), DomainError);
    CHECK_THROWS_AS(growth_convection(-1.0, 1.0, exponents(2.0, 1), 1), DomainError);
  }

  TEST_CASE("truncated convection saturates beyond the level") {
    const ConvectionModel base = growth_convection(1.0, 100.0, exponents(2.0, 1), 1);
    const ConvectionModel t = convection_truncate(base, 0.5);
    const Point x{0.2, 0.0};
    CHECK(t.eval(x, 0.1, 50.0)[0] == base.eval(x, 0.1, 2.0)[0]);
    CHECK(t.eval(x, 0.1, -1.0)[0] == base.eval(x, 0.1, -1.0)[0]);
  }

  TEST_CASE("analytic L1 norms of the data") {
    for (int dim : {1, 2})
      for (DataKind kind : {DataKind::smooth, DataKind::concentrated_bump, DataKind::sign_changing}) {
        DomainSpec dom;
        dom.dim = dim;
        dom.x = {0.0, 2.0};
        DataParams par{kind, 1.5, 0.7, 0.1};
        const RoughData d = make_data(par, dom, 0.5);
        INFO("dim = " << dim << ", kind = " << static_cast<int>(kind));
        const int res = dim == 1 ? 4000 : 400;
        CHECK(sampled_l1_u0(d, res) == doctest::Approx(d.u0_l1).epsilon(1e-3));
        CHECK(sampled_l1_f(d, dim == 1 ? 1000 : 200) == doctest::Approx(d.f_l1).epsilon(2e-3));
      }
    // Closed-form 1D smooth norms against an independent midpoint rule.
    DomainSpec dom;
    const RoughData d = make_data(DataParams{DataKind::smooth, 2.0, 3.0, 0.05}, dom, 1.0);
    CHECK(d.u0_l1 == doctest::Approx(4.0 / std::numbers::pi));
    const double direct =
        midpoint([&](double x) { return std::abs(d.u0({x, 0.0})); }, 0.0, 1.0, 20000);
    CHECK(direct == doctest::Approx(d.u0_l1).epsilon(1e-6));
    CHECK_THROWS_AS(make_data(DataParams{DataKind::concentrated_bump, 1.0, 1.0, 0.5}, dom, 1.0), DomainError);
    CHECK_THROWS_AS(make_data(DataParams{}, dom, 0.0), DomainError);
  }

  TEST_CASE("regularized data is L1-nonexpansive and vanishes on Dirichlet nodes") {
    Gen g(33);
    for (int trial = 0; trial < 12; ++trial) {
      const bool two_d = trial % 3 == 0;
      const auto grid = two_d ? testing_support::unit_grid_2d(g.integer(4, 16), 0.2, 5)
                              : testing_support::unit_grid_1d(g.integer(8, 128), 0.2, 8);
      const DataKind kind = static_cast<DataKind>(g.integer(0, 2));
      const RoughData d = make_data(DataParams{kind, g.uniform(0.1, 5.0), g.uniform(0.0, 3.0), 0.1},
                                    grid->domain(), grid->T());
      const double eps = g.positive(-2.0, 0.0);
      const RegularizedData r = regularize_data(d, eps, grid, trial);
      INFO("trial " << trial);
      CHECK(lumped_l1(*grid, r.u0_eps) <= d.u0_l1 * (1.0 + 1e-2));
      double f_mass = 0.0;
      for (std::size_t n = 1; n <= grid->n_steps(); ++n) f_mass += grid->dt() * lumped_l1(*grid, r.f_eps.slice(n));
      CHECK(f_mass <= d.f_l1 * (1.0 + 1e-2) + 1e-14);
      for (std::size_t i = 0; i < grid->n_nodes(); ++i)
        if (grid->is_dirichlet(i)) CHECK(r.u0_eps[i] == 0.0);
      for (double v : r.u0_eps) CHECK(std::abs(v) <= 1.0 / eps * (1.0 + 1e-12));
    }
  }

  TEST_CASE("regularization examples") {
    const auto grid = testing_support::unit_grid_1d(200, 0.1, 4);
    const RoughData zero = make_data(DataParams{DataKind::smooth, 0.0, 0.0, 0.05}, grid->domain(), 0.1);
    const RegularizedData z = regularize_data(zero, 0.1, grid);
    for (double v : z.f_eps.values()) CHECK(v == 0.0);
    for (double v : z.u0_eps) CHECK(v == 0.0);

    const RoughData bump = make_data(DataParams{DataKind::concentrated_bump, 1.0, 0.0, 0.05}, grid->domain(), 0.1);
    const RegularizedData b = regularize_data(bump, 0.2, grid);
    CHECK(lumped_l1(*grid, b.u0_eps) <= 1.0 + 1e-12);

    // truncation inactive and width floored at 2h: eps no longer matters, and only the
    // mollifier and time-averaging errors remain
    const auto fine = testing_support::unit_grid_1d(200, 0.1, 40);
    const RoughData smooth = make_data(DataParams{DataKind::smooth, 1.0, 1.0, 0.05}, fine->domain(), 0.1);
    const RegularizedData s = regularize_data(smooth, 0.01, fine);
    const RegularizedData s2 = regularize_data(smooth, 0.001, fine);
    CHECK(std::equal(s.f_eps.values().begin(), s.f_eps.values().end(), s2.f_eps.values().begin()));
    CHECK(f_l1_error(smooth, s.f_eps) < 1e-2 * smooth.f_l1);
    CHECK(u0_l1_error(smooth, *fine, s.u0_eps) < 1e-3 * smooth.u0_l1);
  }

  TEST_CASE("regularization is deterministic in the seed") {
    const auto grid = testing_support::unit_grid_1d(64, 0.1, 4);
    const RoughData d = make_data(DataParams{DataKind::sign_changing, 0.5, 1.0, 0.05}, grid->domain(), 0.1);
    const RegularizedData a = regularize_data(d, 0.05, grid, 3);
    const RegularizedData b = regularize_data(d, 0.05, grid, 3);
    const RegularizedData c = regularize_data(d, 0.05, grid, 4);
    CHECK(a.u0_eps == b.u0_eps);
    CHECK(std::equal(a.f_eps.values().begin(), a.f_eps.values().end(), b.f_eps.values().begin()));
    CHECK(a.u0_eps != c.u0_eps);
    CHECK_THROWS_AS(regularize_data(d, 0.0, grid), DomainError);
    CHECK_THROWS_AS(regularize_data(d, 0.1, nullptr), DomainError);
  }

  TEST_CASE("regularized data converges as eps decreases") {
    const auto grid = testing_support::unit_grid_1d(512, 0.1, 8);
    const RoughData d = make_data(DataParams{DataKind::sign_changing, 0.2, 1.0, 0.1}, grid->domain(), 0.1);
    double prev_u = 1e300, prev_f = 1e300;
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
      const RegularizedData r = regularize_data(d, eps, grid);
      const double eu = u0_l1_error(d, *grid, r.u0_eps);
      const double ef = f_l1_error(d, r.f_eps);
      INFO("eps = " << eps);
      CHECK(eu < prev_u);
      CHECK(ef <= prev_f);
      prev_u = eu;
      prev_f = ef;
    }
    CHECK(prev_u < 0.25 * d.u0_l1);
  }
}
