#pragma once

// Per-cell kernels shared by assembly and quadrature. Every kernel has a serial
// reference path and an OpenMP path. The OpenMP path computes cell-local data in
// parallel and performs all reductions and scatters serially in cell order, so both
// paths produce bit-identical results for any thread count.

#include <cstddef>
#include <span>

#include "renorm/grid.hpp"

namespace renorm::kernels {

enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

/// Gradient of the P1 interpolant on each cell.
void cell_gradients(const Grid& grid, std::span<const double> nodal, std::span<Vec2> out, Exec exec);

/// Mean of the vertex values on each cell (the centroid value of the interpolant).
void cell_means(const Grid& grid, std::span<const double> nodal, std::span<double> out, Exec exec);

/// out_i += sum over cells K containing node i of |K| * flux_K . grad(phi_i)|_K.
void scatter_divergence(const Grid& grid, std::span<const Vec2> cell_flux, std::span<double> out,
                        Exec exec);

/// sum over cells of |K| * values_K, accumulated in cell order.
double cell_integral(const Grid& grid, std::span<const double> cell_values);

/// sum over nodes of m_i * values_i (lumped-mass quadrature), accumulated in node order.
double lumped_integral(const Grid& grid, std::span<const double> nodal_values);

}  // namespace renorm::kernels
