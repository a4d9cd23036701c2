#include "renorm/kernels.hpp"

#include <array>
#include <vector>

namespace renorm::kernels {

namespace {

Vec2 gradient_on(const Cell& c, std::span<const double> nodal) {
  Vec2 g{0.0, 0.0};
  for (int v = 0; v < c.n_vertices; ++v) {
    const double u = nodal[c.vertices[v]];
    g[0] += u * c.basis_gradient[v][0];
    g[1] += u * c.basis_gradient[v][1];
  }
  return g;
}

double mean_on(const Cell& c, std::span<const double> nodal) {
  double s = 0.0;
  for (int v = 0; v < c.n_vertices; ++v) s += nodal[c.vertices[v]];
  return s / c.n_vertices;
}

}  // namespace

void cell_gradients(const Grid& grid, std::span<const double> nodal, std::span<Vec2> out, Exec exec) {
  const auto& cells = grid.cells();
  for_each_index(cells.size(), exec, [&](std::size_t k) { out[k] = gradient_on(cells[k], nodal); });
}

void cell_means(const Grid& grid, std::span<const double> nodal, std::span<double> out, Exec exec) {
  const auto& cells = grid.cells();
  for_each_index(cells.size(), exec, [&](std::size_t k) { out[k] = mean_on(cells[k], nodal); });
}

void scatter_divergence(const Grid& grid, std::span<const Vec2> cell_flux, std::span<double> out,
                        Exec exec) {
  const auto& cells = grid.cells();
  if (exec == Exec::serial) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell& c = cells[k];
      for (int v = 0; v < c.n_vertices; ++v)
        out[c.vertices[v]] += c.measure * dot(cell_flux[k], c.basis_gradient[v]);
    }
    return;
  }
  std::vector<std::array<double, 3>> local(cells.size());
  for_each_index(cells.size(), exec, [&](std::size_t k) {
    const Cell& c = cells[k];
    for (int v = 0; v < c.n_vertices; ++v)
      local[k][v] = c.measure * dot(cell_flux[k], c.basis_gradient[v]);
  });
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    for (int v = 0; v < c.n_vertices; ++v) out[c.vertices[v]] += local[k][v];
  }
}

double cell_integral(const Grid& grid, std::span<const double> cell_values) {
  const auto& cells = grid.cells();
  double s = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) s += cells[k].measure * cell_values[k];
  return s;
}

double lumped_integral(const Grid& grid, std::span<const double> nodal_values) {
  double s = 0.0;
  for (std::size_t i = 0; i < nodal_values.size(); ++i) s += grid.node_measure(i) * nodal_values[i];
  return s;
}

}  // namespace renorm::kernels
