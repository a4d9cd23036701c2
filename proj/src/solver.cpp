#include "renorm/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "renorm/errors.hpp"
#include "renorm/truncation.hpp"

namespace renorm {

namespace {

constexpr double kMinDamping = 1.0 / 1024.0;

std::size_t level_of(const Grid& grid, double t) {
  return static_cast<std::size_t>(std::llround(t / grid.dt()));
}

void cell_fluxes(const Grid& grid, std::span<const double> u, double t, const ProblemModels& models,
                 std::span<Vec2> flux, kernels::Exec exec) {
  const auto& cells = grid.cells();
  kernels::for_each_index(cells.size(), exec, [&](std::size_t k) {
    const Cell& c = cells[k];
    Vec2 grad{0.0, 0.0};
    double mean = 0.0;
    for (int v = 0; v < c.n_vertices; ++v) {
      const double uv = u[c.vertices[v]];
      grad[0] += uv * c.basis_gradient[v][0];
      grad[1] += uv * c.basis_gradient[v][1];
      mean += uv;
    }
    mean /= c.n_vertices;
    const Vec2 a = models.flux.eval(c.centroid, t, grad);
    const Vec2 phi = models.convection.eval(c.centroid, t, mean);
    flux[k] = {a[0] + phi[0], a[1] + phi[1]};
  });
}

class FreeNodes {
 public:
  explicit FreeNodes(const Grid& grid) : map_(grid.n_nodes(), -1) {
    for (std::size_t i = 0; i < grid.n_nodes(); ++i)
      if (!grid.is_dirichlet(i)) map_[i] = count_++;
  }
  int operator[](std::size_t i) const { return map_[i]; }
  int count() const { return count_; }

 private:
  std::vector<int> map_;
  int count_ = 0;
};

}  // namespace

void ApproximationSchedule::validate() const {
  if (eps_list.empty()) throw DomainError("schedule: eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw DomainError("schedule: eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw DomainError("schedule: eps_list must be strictly decreasing");
  }
  if (!(inner_tol > 0.0)) throw DomainError("schedule: inner_tol must be positive");
  if (inner_max_iters < 1) throw DomainError("schedule: inner_max_iters must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("schedule: damping must lie in (0, 1]");
}

std::vector<double> weak_residual(std::span<const double> u, std::span<const double> u_prev, double t_next,
                                  const ProblemModels& models, std::span<const double> f_next,
                                  const Grid& grid, kernels::Exec exec) {
  std::vector<Vec2> flux(grid.n_cells());
  cell_fluxes(grid, u, t_next, models, flux, exec);
  std::vector<double> r(grid.n_nodes(), 0.0);
  kernels::scatter_divergence(grid, flux, r, exec);
  const double inv_dt = 1.0 / grid.dt();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (grid.is_dirichlet(i)) {
      r[i] = 0.0;
      continue;
    }
    const double m = grid.node_measure(i);
    r[i] += m * (u[i] - u_prev[i]) * inv_dt - m * f_next[i];
  }
  return r;
}

double residual_norm(std::span<const double> residual) {
  double s = 0.0;
  for (double v : residual) s += v * v;
  return std::sqrt(s);
}

std::vector<double> step(std::span<const double> u_prev, double t_next, const ProblemModels& models,
                         std::span<const double> f_next, const Grid& grid,
                         const ApproximationSchedule& sched, StepStats* stats) {
  const std::size_t level = level_of(grid, t_next);
  const std::size_t n = grid.n_nodes();
  if (u_prev.size() != n || f_next.size() != n) throw DomainError("step: slice size does not match grid");

  const FreeNodes free(grid);
  const double inv_dt = 1.0 / grid.dt();
  // For p > 2 the frozen coefficient underestimates the flux Jacobian by up to a factor
  // p - 1 along the gradient; 2/p balances the error reduction over that band.
  const double omega_start = models.flux.p > 2.0 ? std::min(sched.damping, 2.0 / models.flux.p) : sched.damping;
  std::vector<double> u(u_prev.begin(), u_prev.end());
  for (std::size_t i = 0; i < n; ++i)
    if (grid.is_dirichlet(i)) u[i] = 0.0;

  const auto norm_of = [&](std::span<const double> w) {
    const double r = residual_norm(weak_residual(w, u_prev, t_next, models, f_next, grid));
    if (!std::isfinite(r)) {
      std::ostringstream msg;
      msg << "non-finite residual at time level " << level;
      throw NumericalBreakdown(msg.str(), level);
    }
    return r;
  };

  StepStats local;
  double r = norm_of(u);
  local.residual_history.push_back(r);

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Vec2> conv(grid.n_cells());
  std::vector<double> load(n);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseMatrix<double> A(free.count(), free.count());
  Eigen::VectorXd rhs(free.count());
  bool pattern_ready = false;

  for (int it = 0; it < sched.inner_max_iters && r > sched.inner_tol; ++it) {
    triplets.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (free[i] >= 0) triplets.emplace_back(free[i], free[i], grid.node_measure(i) * inv_dt);

    const auto& cells = grid.cells();
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell& c = cells[k];
      Vec2 grad{0.0, 0.0};
      double mean = 0.0;
      for (int v = 0; v < c.n_vertices; ++v) {
        grad[0] += u[c.vertices[v]] * c.basis_gradient[v][0];
        grad[1] += u[c.vertices[v]] * c.basis_gradient[v][1];
        mean += u[c.vertices[v]];
      }
      mean /= c.n_vertices;
      const double coef = models.flux.picard_coefficient(c.centroid, t_next, grad);
      conv[k] = models.convection.eval(c.centroid, t_next, mean);
      for (int a = 0; a < c.n_vertices; ++a) {
        const int ia = free[c.vertices[a]];
        if (ia < 0) continue;
        for (int b = 0; b < c.n_vertices; ++b) {
          const int ib = free[c.vertices[b]];
          if (ib < 0) continue;
          triplets.emplace_back(ia, ib, coef * c.measure * dot(c.basis_gradient[a], c.basis_gradient[b]));
        }
      }
    }
    A.setFromTriplets(triplets.begin(), triplets.end());
    if (!pattern_ready) {
      ldlt.analyzePattern(A);
      pattern_ready = true;
    }
    ldlt.factorize(A);
    if (ldlt.info() != Eigen::Success)
      throw NumericalBreakdown("Picard matrix factorization failed", level);

    std::fill(load.begin(), load.end(), 0.0);
    kernels::scatter_divergence(grid, conv, load, kernels::Exec::serial);
    for (std::size_t i = 0; i < n; ++i) {
      if (free[i] < 0) continue;
      const double m = grid.node_measure(i);
      rhs[free[i]] = m * u_prev[i] * inv_dt + m * f_next[i] - load[i];
    }
    const Eigen::VectorXd sol = ldlt.solve(rhs);

    double omega = omega_start;
    std::vector<double> trial(n, 0.0);
    double r_trial = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i)
        trial[i] = free[i] < 0 ? 0.0 : u[i] + omega * (sol[free[i]] - u[i]);
      r_trial = norm_of(trial);
      if (r_trial < r || omega <= kMinDamping) break;
      omega *= 0.5;
      local.damping_activated = true;
    }
    u.swap(trial);
    r = r_trial;
    local.residual_history.push_back(r);
    ++local.iterations;
  }
  local.residual = r;
  if (stats) *stats = local;
  if (r > sched.inner_tol) {
    std::ostringstream msg;
    msg << "inner iteration did not converge at time level " << level << " (t=" << t_next
        << ", residual=" << r << ")";
    throw NonConvergenceError(msg.str(), r, level, t_next);
  }
  return u;
}

Solution solve(const ProblemModels& models, const RoughData& data, std::shared_ptr<const Grid> grid,
               const ApproximationSchedule& sched, double eps, std::uint64_t seed) {
  sched.validate();
  if (!grid) throw DomainError("solve: missing grid");
  auto reg = regularize_data(data, eps, grid, seed);
  Solution sol{Field(grid), std::move(reg.f_eps), std::move(reg.u0_eps),
               ProblemModels{models.flux, convection_truncate(models.convection, eps)}, eps, seed, 0};
  std::copy(sol.u0_eps.begin(), sol.u0_eps.end(), sol.u.slice(0).begin());
  for (std::size_t n = 1; n <= grid->n_steps(); ++n) {
    StepStats stats;
    const auto next = step(sol.u.slice(n - 1), grid->time(n), sol.models, sol.f_eps.slice(n), *grid,
                           sched, &stats);
    std::copy(next.begin(), next.end(), sol.u.slice(n).begin());
    sol.total_iterations += stats.iterations;
  }
  return sol;
}

GradientField very_weak_gradient(const Field& u, double k) {
  if (!(k > 0.0)) throw DomainError("very_weak_gradient: k must be positive");
  const Grid& g = u.grid();
  GradientField out{u.grid_ptr(), std::vector<std::vector<Vec2>>(u.n_levels())};
  std::vector<double> tk(g.n_nodes());
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    const auto un = u.slice(n);
    for (std::size_t i = 0; i < tk.size(); ++i) tk[i] = truncate(un[i], k);
    auto& lvl = out.levels[n];
    lvl.resize(g.n_cells());
    kernels::cell_gradients(g, tk, lvl, kernels::Exec::parallel);
    for (std::size_t c = 0; c < g.n_cells(); ++c) {
      const Cell& cell = g.cells()[c];
      bool saturated = true;
      for (int v = 0; v < cell.n_vertices; ++v)
        if (std::abs(un[cell.vertices[v]]) < k) saturated = false;
      if (saturated) lvl[c] = {0.0, 0.0};
    }
  }
  return out;
}

GradientField field_gradient(const Field& u) {
  const Grid& g = u.grid();
  GradientField out{u.grid_ptr(), std::vector<std::vector<Vec2>>(u.n_levels())};
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    out.levels[n].resize(g.n_cells());
    kernels::cell_gradients(g, u.slice(n), out.levels[n], kernels::Exec::parallel);
  }
  return out;
}

}  // namespace renorm
