#include "renorm/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "renorm/errors.hpp"
#include "renorm/kernels.hpp"
#include "renorm/truncation.hpp"

namespace renorm {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

Vec2 unit_direction(int dim) {
  return dim == 2 ? Vec2{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0} : Vec2{1.0, 0.0};
}

SpaceTimeScalar weight(double c0) {
  return [c0](const Point& x, double) { return c0 * (1.0 + 0.5 * std::sin(2.0 * kPi * x[0])); };
}

// Maximum of |d/dr| r^g / (1 + r^g) over r > 0, by a coarse scan plus golden refinement.
double rational_lipschitz(double g) {
  const auto deriv = [g](double r) {
    const double rg = std::pow(r, g);
    return g * std::pow(r, g - 1.0) / ((1.0 + rg) * (1.0 + rg));
  };
  double best_r = 1.0, best = deriv(1.0);
  for (int i = 1; i <= 4000; ++i) {
    const double r = 1e-3 * i;
    if (deriv(r) > best) best = deriv(r), best_r = r;
  }
  double a = std::max(1e-9, best_r - 1e-3), b = best_r + 1e-3;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (deriv(c) > deriv(d)) b = d; else a = c;
  }
  return std::max(best, deriv(0.5 * (a + b)));
}

struct Sample {
  Point x;
  double weight;  // fraction of the cell measure
};

std::vector<Sample> cell_samples(const Grid& grid, const Cell& c, int q) {
  std::vector<Sample> out;
  const auto& nodes = grid.nodes();
  if (c.n_vertices == 2) {
    const Point& a = nodes[c.vertices[0]];
    const Point& b = nodes[c.vertices[1]];
    for (int i = 0; i < q; ++i) {
      const double s = (i + 0.5) / q;
      out.push_back({{a[0] + s * (b[0] - a[0]), 0.0}, 1.0 / q});
    }
    return out;
  }
  const Point& p0 = nodes[c.vertices[0]];
  const Point& p1 = nodes[c.vertices[1]];
  const Point& p2 = nodes[c.vertices[2]];
  const auto map = [&](double a, double b) {
    return Point{p0[0] + a * (p1[0] - p0[0]) + b * (p2[0] - p0[0]),
                 p0[1] + a * (p1[1] - p0[1]) + b * (p2[1] - p0[1])};
  };
  const double w = 1.0 / (q * q);
  for (int j = 0; j < q; ++j) {
    for (int i = 0; i + j < q; ++i) {
      out.push_back({map((i + 1.0 / 3.0) / q, (j + 1.0 / 3.0) / q), w});
      if (i + j < q - 1) out.push_back({map((i + 2.0 / 3.0) / q, (j + 2.0 / 3.0) / q), w});
    }
  }
  return out;
}

// Interpolant value at x inside cell c (barycentric weights from the basis gradients).
double interpolate(const Grid& grid, const Cell& c, std::span<const double> nodal, const Point& x) {
  const Point& p0 = grid.nodes()[c.vertices[0]];
  double v = nodal[c.vertices[0]];
  for (int k = 1; k < c.n_vertices; ++k) {
    const Vec2& g = c.basis_gradient[k];
    const double lambda = g[0] * (x[0] - p0[0]) + g[1] * (x[1] - p0[1]);
    v += lambda * (nodal[c.vertices[k]] - nodal[c.vertices[0]]);
  }
  return v;
}

constexpr int kCellSamples1D = 16;
constexpr int kCellSamples2D = 6;
constexpr int kTimeSamples = 4;

int samples_per_cell(const Grid& g) { return g.dim() == 1 ? kCellSamples1D : kCellSamples2D; }

// Lumped L2 projection of cell averages onto nodes.
void cells_to_nodes(const Grid& grid, std::span<const double> cell_avg, std::span<double> nodal) {
  std::fill(nodal.begin(), nodal.end(), 0.0);
  const auto& cells = grid.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    for (int v = 0; v < c.n_vertices; ++v)
      nodal[c.vertices[v]] += cell_avg[k] * c.measure / c.n_vertices;
  }
  for (std::size_t i = 0; i < nodal.size(); ++i) nodal[i] /= grid.node_measure(i);
}

// Mass-conserving spread with a product triangular kernel on the node lattice.
class Mollifier {
 public:
  Mollifier(const Grid& grid, std::array<double, 2> width) : grid_(grid) {
    const auto n = grid.nodes_per_axis();
    const auto cells = grid.cells_per_axis();
    const double hx = (grid.domain().x[1] - grid.domain().x[0]) / cells[0];
    const double hy = grid.dim() == 2 ? (grid.domain().y[1] - grid.domain().y[0]) / cells[1] : 1.0;
    axis_[0] = make_axis(n[0], hx, width[0]);
    axis_[1] = grid.dim() == 2 ? make_axis(n[1], hy, width[1]) : std::vector<double>{1.0};
    nx_ = n[0];
    ny_ = n[1];
    // Per-source normalization: sum over receivers of m_j * kernel.
    norm_.assign(grid.n_nodes(), 0.0);
    for (int sy = 0; sy < ny_; ++sy)
      for (int sx = 0; sx < nx_; ++sx) {
        double s = 0.0;
        visit(sx, sy, [&](int j, double w) { s += grid_.node_measure(j) * w; });
        norm_[id(sx, sy)] = s;
      }
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (int sy = 0; sy < ny_; ++sy)
      for (int sx = 0; sx < nx_; ++sx) {
        const int i = id(sx, sy);
        const double mass = grid_.node_measure(i) * in[i];
        if (mass == 0.0) continue;
        visit(sx, sy, [&](int j, double w) { out[j] += mass * grid_.node_measure(j) * w / norm_[i]; });
      }
    for (std::size_t j = 0; j < out.size(); ++j) out[j] /= grid_.node_measure(j);
  }

 private:
  static std::vector<double> make_axis(int, double h, double width) {
    std::vector<double> w;
    for (int d = 0;; ++d) {
      const double r = d * h / width;
      if (r >= 1.0) break;
      w.push_back(1.0 - r);
    }
    return w;
  }

  int id(int x, int y) const { return y * nx_ + x; }

  template <class F>
  void visit(int sx, int sy, F&& f) const {
    const int rx = static_cast<int>(axis_[0].size()) - 1;
    const int ry = static_cast<int>(axis_[1].size()) - 1;
    for (int y = std::max(0, sy - ry); y <= std::min(ny_ - 1, sy + ry); ++y)
      for (int x = std::max(0, sx - rx); x <= std::min(nx_ - 1, sx + rx); ++x)
        f(id(x, y), axis_[0][std::abs(x - sx)] * axis_[1][std::abs(y - sy)]);
  }

  const Grid& grid_;
  std::array<std::vector<double>, 2> axis_;
  std::vector<double> norm_;
  int nx_ = 1, ny_ = 1;
};

double jitter_factor(std::uint64_t seed) {
  if (seed == 0) return 1.0;
  std::mt19937_64 rng(seed);
  return 1.0 + 0.25 * std::generate_canonical<double, 53>(rng);
}

// Normalized coordinate along axis d.
double unit(const DomainSpec& dom, const Point& x, int d) {
  const auto& r = d == 0 ? dom.x : dom.y;
  return (x[d] - r[0]) / (r[1] - r[0]);
}

double extent(const DomainSpec& dom, int d) {
  const auto& r = d == 0 ? dom.x : dom.y;
  return r[1] - r[0];
}

bool in_box(const DomainSpec& dom, const Point& x, std::array<double, 2> center, double side) {
  for (int d = 0; d < dom.dim; ++d)
    if (std::abs(x[d] - center[d]) >= 0.5 * side) return false;
  return true;
}

}  // namespace

Exponents exponents(double p, int N) {
  if (!(p > 1.0)) throw DomainError("exponents: p must exceed 1");
  if (N < 1) throw DomainError("exponents: dimension must be at least 1");
  Exponents e;
  e.gamma = (N + 2.0) * (p - 1.0) / (N + p);
  e.m = (N + p) / (p - 1.0);
  e.extended_regime = N < 2;
  return e;
}

double default_delta_reg(double p) { return p < 2.0 ? 1e-8 : 0.0; }

FluxModel p_laplacian_flux(double p, double delta_reg) {
  if (!(p > 1.0)) throw DomainError("p_laplacian_flux: p must exceed 1");
  if (!(delta_reg >= 0.0)) throw DomainError("p_laplacian_flux: delta_reg must be nonnegative");
  FluxModel f;
  f.name = "p_laplacian";
  f.p = p;
  f.alpha = 1.0;
  f.delta_reg = delta_reg;
  const bool offset = p > 2.0 && delta_reg > 0.0;
  f.k_growth = offset ? std::pow(2.0, 0.5 * (p - 2.0)) : 1.0;
  const double b = offset ? std::pow(delta_reg, p - 1.0) : 0.0;
  f.b = [b](const Point&, double) { return b; };
  const double d2 = delta_reg * delta_reg;
  const auto coef = [p, d2](const Vec2& xi) {
    if (p == 2.0) return 1.0;
    const double r2 = dot(xi, xi) + d2;
    return r2 > 0.0 ? std::pow(r2, 0.5 * (p - 2.0)) : 0.0;
  };
  f.eval = [coef](const Point&, double, const Vec2& xi) {
    const double c = coef(xi);
    return Vec2{c * xi[0], c * xi[1]};
  };
  // Frozen coefficient for the linearization, kept away from 0 and infinity so the
  // Picard matrix stays well conditioned; the nonlinear residual uses eval itself.
  f.picard_coefficient = [p, d2](const Point&, double, const Vec2& xi) {
    if (p == 2.0) return 1.0;
    const double r2 = std::max(dot(xi, xi) + d2, 1e-16);
    return std::pow(r2, 0.5 * (p - 2.0));
  };
  return f;
}

ConvectionModel no_convection() {
  ConvectionModel c;
  c.name = "none";
  c.c = [](const Point&, double) { return 0.0; };
  c.eval = [](const Point&, double, double) { return Vec2{0.0, 0.0}; };
  c.lipschitz_for_uniqueness = true;
  return c;
}

ConvectionModel growth_convection(double c0, double cap, const Exponents& ex, int dim) {
  if (!(c0 >= 0.0) || !(cap > 0.0)) throw DomainError("growth_convection: need c0 >= 0, cap > 0");
  ConvectionModel c;
  c.name = "growth";
  c.c0 = c0;
  c.c = weight(c0);
  c.gamma = ex.gamma;
  c.m = ex.m;
  const Vec2 e = unit_direction(dim);
  const double g = ex.gamma;
  c.eval = [w = c.c, e, g, cap](const Point& x, double t, double s) {
    const double st = std::min(cap, std::max(s, -cap));
    if (st == 0.0) return Vec2{0.0, 0.0};
    const double mag = w(x, t) * (2.0 / kPi) * std::atan(st) * std::pow(std::abs(st), g - 1.0);
    return Vec2{mag * e[0], mag * e[1]};
  };
  return c;
}

ConvectionModel lipschitz_convection(double c0, const Exponents& ex, int dim) {
  if (!(c0 >= 0.0)) throw DomainError("lipschitz_convection: need c0 >= 0");
  const double g = ex.gamma;
  const double lip = g <= 1.0 ? 1.0 : rational_lipschitz(g);
  // max of the weight is 1.5 c0
  const double c0_eff = std::min(c0, 1.0 / (1.5 * lip));
  ConvectionModel c;
  c.name = "lipschitz";
  c.c0 = c0_eff;
  c.c = weight(c0_eff);
  c.gamma = g;
  c.m = ex.m;
  c.lipschitz_for_uniqueness = true;
  const Vec2 e = unit_direction(dim);
  c.eval = [w = c.c, e, g](const Point& x, double t, double s) {
    double shape;
    if (g <= 1.0) {
      shape = std::sin(s);
    } else {
      const double a = std::pow(std::abs(s), g);
      shape = std::copysign(a / (1.0 + a), s);
    }
    const double mag = w(x, t) * shape;
    return Vec2{mag * e[0], mag * e[1]};
  };
  return c;
}

ConvectionModel convection_truncate(const ConvectionModel& model, double eps) {
  if (!(eps > 0.0)) throw DomainError("convection_truncate: eps must be positive");
  ConvectionModel out = model;
  const double level = std::min(model.truncation_level, 1.0 / eps);
  out.truncation_level = level;
  out.eval = [inner = model.eval, level](const Point& x, double t, double s) {
    return inner(x, t, truncate(s, level));
  };
  return out;
}

std::vector<AxiomCheck> verify_flux_axioms(const FluxModel& flux, int dim, std::size_t samples,
                                           double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit01(0.0, 1.0);
  std::uniform_real_distribution<double> exponent(-6.0, 1.0);
  const auto random_vec = [&]() {
    // Half the samples are log-uniform in magnitude to reach the region near 0.
    Vec2 v{2.0 * unit01(rng) - 1.0, dim == 2 ? 2.0 * unit01(rng) - 1.0 : 0.0};
    const double scale = unit01(rng) < 0.5 ? 10.0 : std::pow(10.0, exponent(rng));
    return Vec2{scale * v[0], scale * v[1]};
  };

  AxiomCheck coercive{"coercivity", 0, 0, std::numeric_limits<double>::infinity()};
  AxiomCheck zero{"zero_at_origin", 0, 0, std::numeric_limits<double>::infinity()};
  AxiomCheck growth{"growth", 0, 0, std::numeric_limits<double>::infinity()};
  AxiomCheck monotone{"monotonicity", 0, 0, std::numeric_limits<double>::infinity()};
  const auto record = [tol](AxiomCheck& c, double slack, double scale) {
    ++c.samples;
    const double margin = slack / std::max(1.0, scale);
    c.worst_margin = std::min(c.worst_margin, margin);
    if (margin < -tol) ++c.violations;
  };

  const bool relaxed = flux.p < 2.0 && flux.delta_reg > 0.0;
  const double relax = relaxed ? flux.alpha * std::pow(flux.delta_reg, flux.p) : 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x{unit01(rng), unit01(rng)};
    const double t = unit01(rng);
    const Vec2 xi = random_vec();
    const Vec2 xi2 = random_vec();
    const Vec2 a = flux.eval(x, t, xi);
    const Vec2 a2 = flux.eval(x, t, xi2);

    const double axi = dot(a, xi);
    const double lower = flux.alpha * std::pow(norm(xi), flux.p) - relax;
    record(coercive, axi - lower, std::max(std::abs(axi), std::abs(lower)));

    const Vec2 a0 = flux.eval(x, t, Vec2{0.0, 0.0});
    record(zero, -norm(a0), 1.0);

    const double bound = flux.k_growth * (flux.b(x, t) + std::pow(norm(xi), flux.p - 1.0));
    record(growth, bound - norm(a), bound);

    const Vec2 da{a[0] - a2[0], a[1] - a2[1]};
    const Vec2 dxi{xi[0] - xi2[0], xi[1] - xi2[1]};
    record(monotone, dot(da, dxi), norm(a) * norm(xi) + norm(a2) * norm(xi2));
  }
  return {coercive, zero, growth, monotone};
}

std::vector<AxiomCheck> verify_convection_axioms(const ConvectionModel& conv, int dim,
                                                 std::size_t samples, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit01(0.0, 1.0);
  const auto random_s = [&]() {
    const double sign = unit01(rng) < 0.5 ? -1.0 : 1.0;
    return unit01(rng) < 0.5 ? sign * 50.0 * unit01(rng) : sign * std::pow(10.0, -6.0 + 7.0 * unit01(rng));
  };
  AxiomCheck growth{"convection_growth", 0, 0, std::numeric_limits<double>::infinity()};
  AxiomCheck bounded{"truncated_bound", 0, 0, std::numeric_limits<double>::infinity()};
  AxiomCheck lipschitz{"lipschitz", 0, 0, std::numeric_limits<double>::infinity()};
  const auto record = [tol](AxiomCheck& c, double slack, double scale) {
    ++c.samples;
    const double margin = slack / std::max(1.0, scale);
    c.worst_margin = std::min(c.worst_margin, margin);
    if (margin < -tol) ++c.violations;
  };
  (void)dim;
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x{unit01(rng), unit01(rng)};
    const double t = unit01(rng);
    const double s = random_s();
    const double phi = norm(conv.eval(x, t, s));
    const double c = conv.c(x, t);
    const double g = c * std::pow(std::abs(s), conv.gamma);
    record(growth, g - phi, g);
    if (std::isfinite(conv.truncation_level)) {
      const double cap = c * std::pow(conv.truncation_level, conv.gamma);
      record(bounded, cap - phi, cap);
    }
    if (conv.lipschitz_for_uniqueness) {
      const double s2 = unit01(rng) < 0.5 ? random_s() : s + 1e-3 * (2.0 * unit01(rng) - 1.0);
      const Vec2 p1 = conv.eval(x, t, s);
      const Vec2 p2 = conv.eval(x, t, s2);
      const double diff = std::hypot(p1[0] - p2[0], p1[1] - p2[1]);
      record(lipschitz, std::abs(s - s2) - diff, std::abs(s - s2));
    }
  }
  std::vector<AxiomCheck> out{growth};
  if (bounded.samples) out.push_back(bounded);
  if (lipschitz.samples) out.push_back(lipschitz);
  return out;
}

RoughData make_data(const DataParams& params, const DomainSpec& domain, double T) {
  if (!(T > 0.0)) throw DomainError("make_data: T must be positive");
  RoughData d;
  d.params = params;
  d.domain = domain;
  d.T = T;
  const double A = params.amplitude, F = params.forcing, h = params.width;
  const int dim = domain.dim;
  double sine_l1 = 1.0;  // integral of prod sin(pi xi_d) over the domain
  for (int k = 0; k < dim; ++k) sine_l1 *= 2.0 * extent(domain, k) / kPi;
  const auto center = [&](double frac) {
    return std::array<double, 2>{domain.x[0] + frac * extent(domain, 0),
                                 dim == 2 ? domain.y[0] + 0.5 * extent(domain, 1) : 0.0};
  };
  const double box = dim == 2 ? h * h : h;

  switch (params.kind) {
    case DataKind::smooth: {
      d.u0 = [=](const Point& x) {
        double v = A;
        for (int k = 0; k < dim; ++k) v *= std::sin(kPi * unit(domain, x, k));
        return v;
      };
      d.f = [=](const Point& x, double t) {
        double v = F * (1.0 + 0.5 * std::cos(kPi * t / T));
        for (int k = 0; k < dim; ++k) v *= std::sin(kPi * unit(domain, x, k));
        return v;
      };
      d.u0_l1 = std::abs(A) * sine_l1;
      d.f_l1 = std::abs(F) * sine_l1 * T;
      break;
    }
    case DataKind::concentrated_bump:
    case DataKind::sign_changing: {
      if (!(h > 0.0) || h > extent(domain, 0) * 0.25 || (dim == 2 && h > extent(domain, 1) * 0.25))
        throw DomainError("make_data: bump width must be positive and fit the domain");
      if (params.kind == DataKind::concentrated_bump) {
        const auto c = center(0.5);
        d.u0 = [=](const Point& x) { return in_box(domain, x, c, h) ? A / box : 0.0; };
        d.f = [=](const Point& x, double) { return in_box(domain, x, c, h) ? F / (box * T) : 0.0; };
        d.u0_l1 = std::abs(A);
        d.f_l1 = std::abs(F);
      } else {
        const auto c1 = center(0.3), c2 = center(0.7);
        d.u0 = [=](const Point& x) {
          return in_box(domain, x, c1, h) ? A / box : (in_box(domain, x, c2, h) ? -A / box : 0.0);
        };
        d.f = [=](const Point& x, double t) {
          double v = F * std::sin(2.0 * kPi * unit(domain, x, 0)) * std::cos(kPi * t / T);
          if (dim == 2) v *= std::sin(kPi * unit(domain, x, 1));
          return v;
        };
        d.u0_l1 = 2.0 * std::abs(A);
        d.f_l1 = std::abs(F) * sine_l1 * 2.0 * T / kPi;
      }
      break;
    }
  }
  return d;
}

double sampled_l1_u0(const RoughData& data, int resolution) {
  const auto& dom = data.domain;
  const int ny = dom.dim == 2 ? resolution : 1;
  double sum = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < resolution; ++i) {
      const Point x{dom.x[0] + (i + 0.5) / resolution * extent(dom, 0),
                    dom.dim == 2 ? dom.y[0] + (j + 0.5) / ny * extent(dom, 1) : 0.0};
      sum += std::abs(data.u0(x));
    }
  double cell = extent(dom, 0) / resolution;
  if (dom.dim == 2) cell *= extent(dom, 1) / ny;
  return sum * cell;
}

double sampled_l1_f(const RoughData& data, int resolution) {
  const auto& dom = data.domain;
  const int ny = dom.dim == 2 ? resolution : 1;
  double sum = 0.0;
  for (int n = 0; n < resolution; ++n) {
    const double t = (n + 0.5) / resolution * data.T;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < resolution; ++i) {
        const Point x{dom.x[0] + (i + 0.5) / resolution * extent(dom, 0),
                      dom.dim == 2 ? dom.y[0] + (j + 0.5) / ny * extent(dom, 1) : 0.0};
        sum += std::abs(data.f(x, t));
      }
  }
  double cell = extent(dom, 0) / resolution * data.T / resolution;
  if (dom.dim == 2) cell *= extent(dom, 1) / ny;
  return sum * cell;
}

RegularizedData regularize_data(const RoughData& data, double eps, std::shared_ptr<const Grid> grid,
                                std::uint64_t seed) {
  if (!(eps > 0.0)) throw DomainError("regularize_data: eps must be positive");
  if (!grid) throw DomainError("regularize_data: missing grid");
  const Grid& g = *grid;
  const double level = 1.0 / eps;
  const double jitter = jitter_factor(seed);
  const auto cells_axis = g.cells_per_axis();
  const double hx = extent(g.domain(), 0) / cells_axis[0];
  const double hy = g.dim() == 2 ? extent(g.domain(), 1) / cells_axis[1] : hx;
  const Mollifier mollify(g, {std::max(eps, 2.0 * hx) * jitter, std::max(eps, 2.0 * hy) * jitter});

  const int q = samples_per_cell(g);
  std::vector<std::vector<Sample>> samples(g.n_cells());
  for (std::size_t k = 0; k < g.n_cells(); ++k) samples[k] = cell_samples(g, g.cells()[k], q);

  // average of T_level(func) over each cell, at the given times
  const auto regularize_slice = [&](const auto& func, std::span<const double> times, std::span<double> out) {
    std::vector<double> avg(g.n_cells(), 0.0), nodal(g.n_nodes());
    for (std::size_t k = 0; k < g.n_cells(); ++k) {
      double s = 0.0;
      for (const Sample& smp : samples[k])
        for (double t : times) s += smp.weight * truncate(func(smp.x, t), level);
      avg[k] = s / static_cast<double>(times.size());
    }
    cells_to_nodes(g, avg, nodal);
    mollify.apply(nodal, out);
  };

  RegularizedData out{Field(grid), std::vector<double>(g.n_nodes())};
  const double zero_time[] = {0.0};
  regularize_slice([&](const Point& x, double) { return data.u0(x); }, zero_time, out.u0_eps);
  for (std::size_t i = 0; i < g.n_nodes(); ++i)
    if (g.is_dirichlet(i)) out.u0_eps[i] = 0.0;

  kernels::for_each_index(g.n_steps() + 1, kernels::Exec::parallel, [&](std::size_t n) {
    std::array<double, kTimeSamples> times{};
    if (n == 0) {
      times.fill(0.0);
    } else {
      for (int s = 0; s < kTimeSamples; ++s)
        times[s] = g.time(n - 1) + (s + 0.5) / kTimeSamples * g.dt();
    }
    regularize_slice(data.f, times, out.f_eps.slice(n));
  });
  return out;
}

double f_l1_error(const RoughData& data, const Field& f_eps) {
  const Grid& g = f_eps.grid();
  const int q = samples_per_cell(g);
  double total = 0.0;
  for (std::size_t n = 1; n <= g.n_steps(); ++n) {
    const auto slice = f_eps.slice(n);
    for (const Cell& c : g.cells()) {
      for (const Sample& smp : cell_samples(g, c, q)) {
        const double v = interpolate(g, c, slice, smp.x);
        for (int s = 0; s < kTimeSamples; ++s) {
          const double t = g.time(n - 1) + (s + 0.5) / kTimeSamples * g.dt();
          total += c.measure * smp.weight * g.dt() / kTimeSamples * std::abs(v - data.f(smp.x, t));
        }
      }
    }
  }
  return total;
}

double u0_l1_error(const RoughData& data, const Grid& grid, std::span<const double> u0_eps) {
  const int q = samples_per_cell(grid);
  double total = 0.0;
  for (const Cell& c : grid.cells())
    for (const Sample& smp : cell_samples(grid, c, q))
      total += c.measure * smp.weight * std::abs(interpolate(grid, c, u0_eps, smp.x) - data.u0(smp.x));
  return total;
}

}  // namespace renorm
