#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace renorm {

using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

enum class BoundaryTag { dirichlet, neumann };

/// Interval [x0, x1] (dim 1) or rectangle [x0, x1] x [y0, y1] (dim 2).
struct DomainSpec {
  int dim = 1;
  std::array<double, 2> x{0.0, 1.0};
  std::array<double, 2> y{0.0, 1.0};
};

/// Boundary condition per side. In 1D only left/right are read.
struct BoundarySpec {
  BoundaryTag left = BoundaryTag::dirichlet;
  BoundaryTag right = BoundaryTag::dirichlet;
  BoundaryTag bottom = BoundaryTag::dirichlet;
  BoundaryTag top = BoundaryTag::dirichlet;
};

/// A P1 simplex: segment in 1D, triangle in 2D.
struct Cell {
  std::array<int, 3> vertices{};
  int n_vertices = 2;
  double measure = 0.0;
  Point centroid{};
  /// Constant gradients of the local barycentric basis functions.
  std::array<Vec2, 3> basis_gradient{};
};

/// Uniform space-time mesh. Nodes are ordered x-fastest on a structured lattice;
/// rectangles are split into two triangles along the ascending diagonal.
class Grid {
 public:
  int dim() const noexcept { return dim_; }
  const DomainSpec& domain() const noexcept { return domain_; }
  const BoundarySpec& boundary() const noexcept { return boundary_; }
  std::array<int, 2> cells_per_axis() const noexcept { return cells_per_axis_; }
  std::array<int, 2> nodes_per_axis() const noexcept {
    return {cells_per_axis_[0] + 1, dim_ == 2 ? cells_per_axis_[1] + 1 : 1};
  }

  std::size_t n_nodes() const noexcept { return nodes_.size(); }
  std::size_t n_cells() const noexcept { return cells_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// Lumped (row-sum) mass of node i.
  double node_measure(std::size_t i) const { return node_measures_[i]; }
  std::span<const double> node_measures() const noexcept { return node_measures_; }
  std::span<const double> cell_measures() const noexcept { return cell_measures_; }
  double domain_measure() const noexcept { return domain_measure_; }

  std::optional<BoundaryTag> boundary_tag(std::size_t i) const { return tags_[i]; }
  bool is_dirichlet(std::size_t i) const { return tags_[i] == BoundaryTag::dirichlet; }
  std::size_t n_dirichlet() const noexcept { return n_dirichlet_; }

  /// Uniform spacing along x.
  double h() const noexcept { return (domain_.x[1] - domain_.x[0]) / cells_per_axis_[0]; }

  double T() const noexcept { return T_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  /// t_n = n * dt, n = 0..n_steps.
  double time(std::size_t n) const noexcept { return n == n_steps_ ? T_ : static_cast<double>(n) * dt_; }

  /// Same spatial and temporal layout (used to reject mismatched fields).
  bool same_layout(const Grid& other) const noexcept;

 private:
  friend Grid build_grid(const DomainSpec&, std::array<int, 2>, const BoundarySpec&, double, std::size_t);

  int dim_ = 1;
  DomainSpec domain_;
  BoundarySpec boundary_;
  std::array<int, 2> cells_per_axis_{1, 1};
  std::vector<Point> nodes_;
  std::vector<Cell> cells_;
  std::vector<double> node_measures_;
  std::vector<double> cell_measures_;
  std::vector<std::optional<BoundaryTag>> tags_;
  std::size_t n_dirichlet_ = 0;
  double domain_measure_ = 0.0;
  double T_ = 1.0;
  double dt_ = 1.0;
  std::size_t n_steps_ = 1;
};

/// Throws DomainError for fewer than two cells per axis, no time steps,
/// non-positive T, or a boundary without any Dirichlet part.
Grid build_grid(const DomainSpec& domain, std::array<int, 2> n_cells, const BoundarySpec& boundary,
                double T, std::size_t n_steps);

/// Same domain and boundary with `factor` times the cells per axis and time steps.
Grid refine(const Grid& grid, int factor);

/// Nodal values on every time level t_0..t_K, stored level-major.
class Field {
 public:
  explicit Field(std::shared_ptr<const Grid> grid);

  const Grid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }

  std::size_t n_levels() const noexcept { return grid_->n_steps() + 1; }
  std::size_t n_nodes() const noexcept { return grid_->n_nodes(); }

  std::span<double> slice(std::size_t level) {
    return {values_.data() + level * n_nodes(), n_nodes()};
  }
  std::span<const double> slice(std::size_t level) const {
    return {values_.data() + level * n_nodes(), n_nodes()};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double max_abs() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// Constant per-cell gradients on every time level.
struct GradientField {
  std::shared_ptr<const Grid> grid;
  std::vector<std::vector<Vec2>> levels;
};

}  // namespace renorm
