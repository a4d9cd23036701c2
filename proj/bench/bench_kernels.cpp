// Serial reference vs OpenMP kernels on a 2D grid, plus one nonlinear time step.
// Usage: bench_kernels [cells_per_axis] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <vector>

#include "renorm/kernels.hpp"
#include "renorm/models.hpp"
#include "renorm/solver.hpp"

using namespace renorm;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-20s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n", name, 1e3 * serial, 1e3 * parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int cells = argc > 1 ? std::atoi(argv[1]) : 256;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  DomainSpec d;
  d.dim = 2;
  const auto grid = std::make_shared<const Grid>(build_grid(d, {cells, cells}, {}, 0.01, 1));
  std::printf("grid %d x %d: %zu nodes, %zu cells, %d threads\n", cells, cells, grid->n_nodes(), grid->n_cells(),
              omp_get_max_threads());

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> u(grid->n_nodes());
  for (auto& v : u) v = U(rng);
  std::vector<Vec2> grad(grid->n_cells());
  std::vector<double> mean(grid->n_cells()), div(grid->n_nodes());

  using kernels::Exec;
  for (Exec e : {Exec::serial, Exec::parallel}) kernels::cell_gradients(*grid, u, grad, e);  // warm up
  report("cell_gradients", best_of(repeats, [&] { kernels::cell_gradients(*grid, u, grad, Exec::serial); }),
         best_of(repeats, [&] { kernels::cell_gradients(*grid, u, grad, Exec::parallel); }));
  report("cell_means", best_of(repeats, [&] { kernels::cell_means(*grid, u, mean, Exec::serial); }),
         best_of(repeats, [&] { kernels::cell_means(*grid, u, mean, Exec::parallel); }));
  report("scatter_divergence", best_of(repeats, [&] {
           std::fill(div.begin(), div.end(), 0.0);
           kernels::scatter_divergence(*grid, grad, div, Exec::serial);
         }),
         best_of(repeats, [&] {
           std::fill(div.begin(), div.end(), 0.0);
           kernels::scatter_divergence(*grid, grad, div, Exec::parallel);
         }));

  const Exponents ex = exponents(2.5, 2);
  const ProblemModels models{p_laplacian_flux(2.5, 0.0), growth_convection(0.5, 10.0, ex, 2)};
  std::vector<double> f(grid->n_nodes(), 1.0), zero(grid->n_nodes(), 0.0);
  report("weak_residual",
         best_of(repeats, [&] { weak_residual(u, zero, 0.01, models, f, *grid, Exec::serial); }),
         best_of(repeats, [&] { weak_residual(u, zero, 0.01, models, f, *grid, Exec::parallel); }));

  ApproximationSchedule sched;
  StepStats stats;
  const double t_step = best_of(1, [&] { step(zero, 0.01, models, f, *grid, sched, &stats); });
  std::printf("%-20s %9.3f ms (%d Picard iterations)\n", "nonlinear step", 1e3 * t_step, stats.iterations);
  return 0;
}
