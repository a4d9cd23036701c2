#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "renorm/grid.hpp"
#include "renorm/kernels.hpp"
#include "renorm/models.hpp"

namespace renorm {

/// One run of the approximate problem: the regularization ladder and inner-solver controls.
struct ApproximationSchedule {
  std::vector<double> eps_list{0.5, 0.25, 0.125};
  /// Refine mesh and time step together with eps (level i uses 2^i times the base resolution).
  bool refine_with_eps = false;
  double inner_tol = 1e-10;
  int inner_max_iters = 200;
  double damping = 1.0;

  void validate() const;
};

struct ProblemModels {
  FluxModel flux;
  ConvectionModel convection;
};

struct StepStats {
  int iterations = 0;
  double residual = 0.0;
  bool damping_activated = false;
  /// Residual norm before the first and after every accepted iteration.
  std::vector<double> residual_history;
};

/// Discrete residual of the backward-Euler weak form at the nodes,
///   m_i (u_i - u_prev_i)/dt + sum_K |K| (a(grad u) + Phi(u_K)) . grad phi_i - m_i f_i,
/// with a and Phi evaluated at cell centroids and t_next. Dirichlet entries are zero.
std::vector<double> weak_residual(std::span<const double> u, std::span<const double> u_prev, double t_next,
                                  const ProblemModels& models, std::span<const double> f_next,
                                  const Grid& grid, kernels::Exec exec = kernels::Exec::parallel);

/// Euclidean norm of the residual over the free nodes.
double residual_norm(std::span<const double> residual);

/// Advance one backward-Euler step by damped Picard iteration on the frozen-coefficient
/// linearization, with the convection term taken at the current iterate. Each iteration
/// starts from `damping` (capped at 2/p for p > 2) and halves it whenever a trial iterate
/// would increase the residual.
/// Throws NonConvergenceError after inner_max_iters, NumericalBreakdown on NaN.
std::vector<double> step(std::span<const double> u_prev, double t_next, const ProblemModels& models,
                         std::span<const double> f_next, const Grid& grid,
                         const ApproximationSchedule& sched, StepStats* stats = nullptr);

/// A solved trajectory together with the regularized data and the eps-truncated models.
struct Solution {
  Field u;
  Field f_eps;
  std::vector<double> u0_eps;
  ProblemModels models;
  double eps = 1.0;
  std::uint64_t seed = 0;
  int total_iterations = 0;
};

/// Regularize the data at eps, truncate the convection at 1/eps, and march all time steps.
Solution solve(const ProblemModels& models, const RoughData& data, std::shared_ptr<const Grid> grid,
               const ApproximationSchedule& sched, double eps, std::uint64_t seed = 0);

/// Per-cell gradient of the interpolant of T_k(u) on every level; zero on cells where
/// |u| >= k at all vertices. Throws DomainError for k <= 0.
GradientField very_weak_gradient(const Field& u, double k);

/// Gradient of the interpolant of u itself on every level.
GradientField field_gradient(const Field& u);

}  // namespace renorm
