#include "renorm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

Cell make_segment(const std::vector<Point>& nodes, int a, int b) {
  Cell c;
  c.vertices = {a, b, -1};
  c.n_vertices = 2;
  const double h = nodes[b][0] - nodes[a][0];
  c.measure = h;
  c.centroid = {0.5 * (nodes[a][0] + nodes[b][0]), 0.0};
  c.basis_gradient = {Vec2{-1.0 / h, 0.0}, Vec2{1.0 / h, 0.0}, Vec2{0.0, 0.0}};
  return c;
}

Cell make_triangle(const std::vector<Point>& nodes, int a, int b, int d) {
  Cell c;
  c.vertices = {a, b, d};
  c.n_vertices = 3;
  const Point& p0 = nodes[a];
  const Point& p1 = nodes[b];
  const Point& p2 = nodes[d];
  const double j11 = p1[0] - p0[0], j12 = p2[0] - p0[0];
  const double j21 = p1[1] - p0[1], j22 = p2[1] - p0[1];
  const double det = j11 * j22 - j12 * j21;
  c.measure = 0.5 * std::abs(det);
  c.centroid = {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
  // Rows of J^{-1} are the gradients of the reference coordinates.
  const Vec2 g1{j22 / det, -j12 / det};
  const Vec2 g2{-j21 / det, j11 / det};
  c.basis_gradient = {Vec2{-g1[0] - g2[0], -g1[1] - g2[1]}, g1, g2};
  return c;
}

BoundaryTag merge(BoundaryTag a, BoundaryTag b) {
  return (a == BoundaryTag::dirichlet || b == BoundaryTag::dirichlet) ? BoundaryTag::dirichlet
                                                                      : BoundaryTag::neumann;
}

}  // namespace

Grid build_grid(const DomainSpec& domain, std::array<int, 2> n_cells, const BoundarySpec& boundary,
                double T, std::size_t n_steps) {
  if (domain.dim != 1 && domain.dim != 2) throw DomainError("grid dimension must be 1 or 2");
  if (n_cells[0] < 2 || (domain.dim == 2 && n_cells[1] < 2))
    throw DomainError("grid needs at least 2 cells per axis");
  if (n_steps < 1) throw DomainError("grid needs at least one time step");
  if (!(T > 0.0)) throw DomainError("final time must be positive");
  if (!(domain.x[1] > domain.x[0]) || (domain.dim == 2 && !(domain.y[1] > domain.y[0])))
    throw DomainError("domain extent must be positive");

  const bool any_dirichlet =
      boundary.left == BoundaryTag::dirichlet || boundary.right == BoundaryTag::dirichlet ||
      (domain.dim == 2 &&
       (boundary.bottom == BoundaryTag::dirichlet || boundary.top == BoundaryTag::dirichlet));
  if (!any_dirichlet) throw DomainError("boundary must contain a Dirichlet part");

  Grid g;
  g.dim_ = domain.dim;
  g.domain_ = domain;
  g.boundary_ = boundary;
  g.cells_per_axis_ = {n_cells[0], domain.dim == 2 ? n_cells[1] : 1};
  g.T_ = T;
  g.n_steps_ = n_steps;
  g.dt_ = T / static_cast<double>(n_steps);

  const int nx = g.cells_per_axis_[0];
  const double hx = (domain.x[1] - domain.x[0]) / nx;

  if (domain.dim == 1) {
    g.nodes_.resize(nx + 1);
    for (int i = 0; i <= nx; ++i)
      g.nodes_[i] = {i == nx ? domain.x[1] : domain.x[0] + i * hx, 0.0};
    for (int i = 0; i < nx; ++i) g.cells_.push_back(make_segment(g.nodes_, i, i + 1));
    g.tags_.assign(nx + 1, std::nullopt);
    g.tags_.front() = boundary.left;
    g.tags_.back() = boundary.right;
    g.domain_measure_ = domain.x[1] - domain.x[0];
  } else {
    const int ny = g.cells_per_axis_[1];
    const double hy = (domain.y[1] - domain.y[0]) / ny;
    const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    g.nodes_.resize(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    g.tags_.assign(g.nodes_.size(), std::nullopt);
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        const double x = i == nx ? domain.x[1] : domain.x[0] + i * hx;
        const double y = j == ny ? domain.y[1] : domain.y[0] + j * hy;
        g.nodes_[id(i, j)] = {x, y};
        std::optional<BoundaryTag> tag;
        const auto add = [&tag](BoundaryTag t) { tag = tag ? merge(*tag, t) : t; };
        if (i == 0) add(boundary.left);
        if (i == nx) add(boundary.right);
        if (j == 0) add(boundary.bottom);
        if (j == ny) add(boundary.top);
        g.tags_[id(i, j)] = tag;
      }
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        g.cells_.push_back(make_triangle(g.nodes_, id(i, j), id(i + 1, j), id(i + 1, j + 1)));
        g.cells_.push_back(make_triangle(g.nodes_, id(i, j), id(i + 1, j + 1), id(i, j + 1)));
      }
    }
    g.domain_measure_ = (domain.x[1] - domain.x[0]) * (domain.y[1] - domain.y[0]);
  }

  g.node_measures_.assign(g.nodes_.size(), 0.0);
  g.cell_measures_.reserve(g.cells_.size());
  for (const Cell& c : g.cells_) {
    g.cell_measures_.push_back(c.measure);
    for (int v = 0; v < c.n_vertices; ++v) g.node_measures_[c.vertices[v]] += c.measure / c.n_vertices;
  }
  g.n_dirichlet_ = static_cast<std::size_t>(std::count(g.tags_.begin(), g.tags_.end(),
                                                       std::optional<BoundaryTag>{BoundaryTag::dirichlet}));
  return g;
}

Grid refine(const Grid& grid, int factor) {
  if (factor < 1) throw DomainError("refinement factor must be >= 1");
  const auto n = grid.cells_per_axis();
  return build_grid(grid.domain(), {n[0] * factor, n[1] * factor}, grid.boundary(), grid.T(),
                    grid.n_steps() * static_cast<std::size_t>(factor));
}

bool Grid::same_layout(const Grid& other) const noexcept {
  return dim_ == other.dim_ && cells_per_axis_ == other.cells_per_axis_ &&
         domain_.x == other.domain_.x && (dim_ == 1 || domain_.y == other.domain_.y) &&
         n_steps_ == other.n_steps_ && T_ == other.T_ && tags_ == other.tags_;
}

Field::Field(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
  if (!grid_) throw DomainError("field requires a grid");
  values_.assign(n_levels() * n_nodes(), 0.0);
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace renorm
