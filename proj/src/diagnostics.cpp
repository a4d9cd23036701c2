#include "renorm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "renorm/errors.hpp"
#include "renorm/kernels.hpp"
#include "renorm/rearrangement.hpp"

namespace renorm {

namespace {

using kernels::Exec;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double norm2(const Vec2& v) { return std::sqrt(dot(v, v)); }
Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

std::vector<double> means_of(const Grid& g, std::span<const double> nodal) {
  std::vector<double> out(g.n_cells());
  kernels::cell_means(g, nodal, out, Exec::parallel);
  return out;
}

std::vector<Vec2> gradients_of(const Grid& g, std::span<const double> nodal) {
  std::vector<Vec2> out(g.n_cells());
  kernels::cell_gradients(g, nodal, out, Exec::parallel);
  return out;
}

void require_same_layout(const Grid& a, const Grid& b, const char* who) {
  if (!a.same_layout(b)) throw DomainError(std::string(who) + ": fields live on different grids");
}

// sum_n dt * sum_K |K| value(n, K) over levels 1..K, evaluated cell-parallel and reduced in order.
template <class F>
double space_time_cell_sum(const Grid& g, F&& value) {
  std::vector<double> cellv(g.n_cells());
  double total = 0.0;
  for (std::size_t n = 1; n <= g.n_steps(); ++n) {
    kernels::for_each_index(g.n_cells(), Exec::parallel, [&](std::size_t c) { cellv[c] = value(n, c); });
    total += g.dt() * kernels::cell_integral(g, cellv);
  }
  return total;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::informational: return "informational";
  }
  return "informational";
}

Verdict at_most(double value, double bound, double tol) {
  return value <= bound + tol ? Verdict::pass : Verdict::fail;
}

Verdict at_least(double value, double bound, double tol) {
  return value >= bound - tol ? Verdict::pass : Verdict::fail;
}

void DiagnosticsReport::add(std::string name, EntryParams params, double value, std::optional<double> bound,
                            Verdict verdict) {
  entries.push_back({std::move(name), params, value, bound, verdict});
}

bool DiagnosticsReport::all_pass() const { return count(Verdict::fail) == 0; }

std::size_t DiagnosticsReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [v](const ReportEntry& e) { return e.verdict == v; }));
}

void write_csv(std::ostream& out, const DiagnosticsReport& report) {
  const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& e : report.entries) {
    const auto& p = e.params;
    out << e.name << ',' << opt(p.k) << ',' << opt(p.n) << ',' << opt(p.eps) << ',' << opt(p.s) << ','
        << opt(p.sigma) << ',' << opt(p.mu) << ',' << format_double(e.value) << ',' << opt(e.bound) << ','
        << verdict_name(e.verdict) << '\n';
  }
}

TruncationEnergy truncation_energy(const Field& u, double k, double p) {
  if (!(k > 0.0)) throw DomainError("truncation_energy: k must be positive");
  if (!(p > 1.0)) throw DomainError("truncation_energy: p must exceed 1");
  const Grid& g = u.grid();
  TruncationEnergy e;
  std::vector<double> integrand(g.n_nodes());
  double sup = 0.0;
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    const auto un = u.slice(n);
    for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = un[i] * truncate(un[i], k);
    sup = std::max(sup, kernels::lumped_integral(g, integrand));
  }
  e.sup_term = 0.5 * sup;
  const GradientField grad = very_weak_gradient(u, k);
  e.gradient_term = space_time_cell_sum(g, [&](std::size_t n, std::size_t c) {
    return std::pow(norm2(grad.levels[n][c]), p);
  });
  e.lhs = e.sup_term + e.gradient_term;
  return e;
}

double data_mass(const Solution& sol) {
  const Grid& g = sol.u.grid();
  std::vector<double> a(g.n_nodes());
  double f_mass = 0.0;
  for (std::size_t n = 1; n < sol.f_eps.n_levels(); ++n) {
    const auto fn = sol.f_eps.slice(n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(fn[i]);
    f_mass += g.dt() * kernels::lumped_integral(g, a);
  }
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(sol.u0_eps[i]);
  return f_mass + kernels::lumped_integral(g, a);
}

TruncationEnergy truncation_energy(const Solution& sol, double k) {
  TruncationEnergy e = truncation_energy(sol.u, k, sol.models.flux.p);
  e.data_mass = data_mass(sol);
  return e;
}

LorentzApriori lorentz_apriori(const Field& u, double p, double M_est) {
  if (!(p > 1.0)) throw DomainError("lorentz_apriori: p must exceed 1");
  if (!(M_est > 0.0)) throw DomainError("lorentz_apriori: M_est must be positive");
  const Grid& g = u.grid();
  const double N = g.dim();
  const double head = p * (N + 1.0) - N;
  const double p_conj = p / (p - 1.0);

  LorentzApriori r;
  r.u_index = head / (N * (p - 1.0));
  r.grad_index = head / ((N + 1.0) * (p - 1.0));

  const std::size_t nc = g.n_cells();
  const std::size_t total = nc * g.n_steps();
  std::vector<double> u_vals(total), grad_vals(total), measures(total);
  for (std::size_t n = 1; n <= g.n_steps(); ++n) {
    const auto mean = means_of(g, u.slice(n));
    const auto grad = gradients_of(g, u.slice(n));
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t j = (n - 1) * nc + c;
      u_vals[j] = std::pow(std::abs(mean[c]), p - 1.0);
      grad_vals[j] = std::pow(norm2(grad[c]), p - 1.0);
      measures[j] = g.cells()[c].measure * g.dt();
    }
  }
  r.u_norm = lorentz_norm(CellFunction{u_vals, measures}, LorentzIndex{r.u_index, kInf});
  r.grad_norm = lorentz_norm(CellFunction{grad_vals, measures}, LorentzIndex{r.grad_index, kInf});

  const double Q = g.domain_measure() * g.T();
  r.u_scale = std::pow(M_est, (p - 1.0) * (N + p) / head) * std::pow(Q, (1.0 / p_conj) * N / (N + p_conj));
  r.grad_scale = std::pow(M_est, (N + 2.0) * (p - 1.0) / head);
  r.u_ratio = r.u_norm / r.u_scale;
  r.grad_ratio = r.grad_norm / r.grad_scale;
  return r;
}

TailEnergies tail_energies(const Field& u, double n_level, const ProblemModels& models) {
  if (!(n_level > 0.0)) throw DomainError("tail_energies: n must be positive");
  const Grid& g = u.grid();
  const double p = models.flux.p;
  TailEnergies t;
  std::vector<double> fl(g.n_cells()), gr(g.n_cells()), cv(g.n_cells());
  for (std::size_t n = 1; n <= g.n_steps(); ++n) {
    const auto mean = means_of(g, u.slice(n));
    const auto grad = gradients_of(g, u.slice(n));
    const double time = g.time(n);
    kernels::for_each_index(g.n_cells(), Exec::parallel, [&](std::size_t c) {
      if (!(std::abs(mean[c]) < n_level)) {
        fl[c] = gr[c] = cv[c] = 0.0;
        return;
      }
      const Point& x = g.cells()[c].centroid;
      const double gnorm = norm2(grad[c]);
      fl[c] = dot(models.flux.eval(x, time, grad[c]), grad[c]);
      gr[c] = std::pow(gnorm, p);
      cv[c] = norm2(models.convection.eval(x, time, mean[c])) * gnorm;
    });
    t.flux_tail += g.dt() * kernels::cell_integral(g, fl);
    t.grad_tail += g.dt() * kernels::cell_integral(g, gr);
    t.conv_tail += g.dt() * kernels::cell_integral(g, cv);
  }
  t.flux_tail /= n_level;
  t.grad_tail /= n_level;
  t.conv_tail /= n_level;
  return t;
}

TestFunction default_test_function(const Grid& grid) {
  const DomainSpec d = grid.domain();
  const double T = grid.T();
  const int dim = grid.dim();
  return [d, T, dim](const Point& x, double t) {
    const double xi = (x[0] - d.x[0]) / (d.x[1] - d.x[0]);
    double v = (T - t) * xi * (1.0 - xi);
    if (dim == 2) {
      const double eta = (x[1] - d.y[0]) / (d.y[1] - d.y[0]);
      v *= eta * (1.0 - eta);
    }
    return v;
  };
}

RenormalizedTerms renormalized_identity_terms(const Field& u, const Field& f_eps, const ProblemModels& models,
                                              const RenormFunction& S, double M_reduce,
                                              const TestFunction& phi) {
  require_same_layout(u.grid(), f_eps.grid(), "renormalized_residual");
  if (!(M_reduce > 0.0)) throw DomainError("renormalized_residual: M must be positive");
  const Grid& g = u.grid();
  const std::size_t nn = g.n_nodes();
  const std::size_t K = g.n_steps();

  const auto phi_at = [&](std::size_t n) {
    std::vector<double> v(nn);
    for (std::size_t i = 0; i < nn; ++i) v[i] = phi(g.nodes()[i], g.time(n));
    return v;
  };
  const auto lumped = [&](auto&& f) {
    std::vector<double> v(nn);
    for (std::size_t i = 0; i < nn; ++i) v[i] = f(i);
    return kernels::lumped_integral(g, v);
  };

  RenormalizedTerms r;
  std::vector<double> phi_prev = phi_at(0);
  {
    const auto u0 = u.slice(0);
    r.initial = -lumped([&](std::size_t i) { return phi_prev[i] * S.value(u0[i]); });
  }

  std::vector<double> fl(g.n_cells()), flc(g.n_cells()), cv(g.n_cells()), cvc(g.n_cells());
  std::vector<double> tm(nn);
  for (std::size_t n = 1; n <= K; ++n) {
    const auto un = u.slice(n);
    const auto fn = f_eps.slice(n);
    const std::vector<double> phin = phi_at(n);
    const double time = g.time(n);

    r.time -= lumped([&](std::size_t i) { return S.value(un[i]) * (phin[i] - phi_prev[i]); });
    r.source += g.dt() * lumped([&](std::size_t i) { return fn[i] * S.slope(un[i]) * phin[i]; });

    for (std::size_t i = 0; i < nn; ++i) tm[i] = truncate(un[i], M_reduce);
    const auto mean = means_of(g, un);
    const auto grad = gradients_of(g, un);
    const auto grad_tm = gradients_of(g, tm);
    const auto phi_mean = means_of(g, phin);
    const auto grad_phi = gradients_of(g, phin);
    kernels::for_each_index(g.n_cells(), Exec::parallel, [&](std::size_t c) {
      const Point& x = g.cells()[c].centroid;
      const double s1 = S.slope(mean[c]);
      const double s2 = S.curvature(mean[c]);
      const Vec2 a = models.flux.eval(x, time, grad[c]);
      const Vec2 cphi = models.convection.eval(x, time, truncate(mean[c], M_reduce));
      fl[c] = s1 * dot(a, grad_phi[c]);
      flc[c] = s2 * phi_mean[c] * dot(a, grad[c]);
      cv[c] = s1 * dot(cphi, grad_phi[c]);
      cvc[c] = s2 * phi_mean[c] * dot(cphi, grad_tm[c]);
    });
    r.flux += g.dt() * kernels::cell_integral(g, fl);
    r.flux_curv += g.dt() * kernels::cell_integral(g, flc);
    r.conv += g.dt() * kernels::cell_integral(g, cv);
    r.conv_curv += g.dt() * kernels::cell_integral(g, cvc);
    phi_prev = phin;
  }
  {
    const auto uK = u.slice(K);
    r.terminal = lumped([&](std::size_t i) { return phi_prev[i] * S.value(uK[i]); });
  }
  r.residual = std::abs(r.initial + r.time + r.flux + r.flux_curv + r.conv + r.conv_curv + r.terminal -
                        r.source);
  return r;
}

RenormalizedTerms renormalized_residual(const Field& u, const Field& f_eps, const ProblemModels& models,
                                        const RenormFunction& S, double M_reduce, const TestFunction& phi) {
  const Grid& g = u.grid();
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < g.n_nodes(); ++i) {
    scale = std::max(scale, std::abs(phi(g.nodes()[i], 0.0)));
    worst = std::max(worst, std::abs(phi(g.nodes()[i], g.T())));
  }
  if (worst > 1e-14 * std::max(1.0, scale))
    throw DomainError("renormalized_residual: test function must vanish at the final time");
  return renormalized_identity_terms(u, f_eps, models, S, M_reduce, phi);
}

RenormalizedTerms renormalized_residual(const Solution& sol, const RenormFunction& S, double M_reduce,
                                        const TestFunction& phi) {
  return renormalized_residual(sol.u, sol.f_eps, sol.models, S, M_reduce, phi);
}

std::vector<CauchyRow> gradient_convergence(std::span<const Field* const> us, double k, const FluxModel& flux) {
  if (!(k > 0.0)) throw DomainError("gradient_convergence: k must be positive");
  for (std::size_t i = 1; i < us.size(); ++i)
    require_same_layout(us[0]->grid(), us[i]->grid(), "gradient_convergence");
  std::vector<GradientField> grads;
  grads.reserve(us.size());
  for (const Field* u : us) grads.push_back(very_weak_gradient(*u, k));

  std::vector<CauchyRow> rows;
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    const Grid& g = us[i]->grid();
    const auto& a = grads[i].levels;
    const auto& b = grads[i + 1].levels;
    CauchyRow row;
    row.i = i;
    const double dist = space_time_cell_sum(g, [&](std::size_t n, std::size_t c) {
      return std::pow(norm2(sub(a[n][c], b[n][c])), flux.p);
    });
    row.cauchy_norm = std::pow(dist, 1.0 / flux.p);
    row.pairing = space_time_cell_sum(g, [&](std::size_t n, std::size_t c) {
      const Point& x = g.cells()[c].centroid;
      const double t = g.time(n);
      return dot(sub(flux.eval(x, t, a[n][c]), flux.eval(x, t, b[n][c])), sub(a[n][c], b[n][c]));
    });
    rows.push_back(row);
  }
  return rows;
}

UniquenessTerms uniqueness_gap(const Field& u, const Field& v, double s, double sigma, double k_small,
                               const ProblemModels& models, const Field* f_u, const Field* f_v) {
  require_same_layout(u.grid(), v.grid(), "uniqueness_gap");
  if (f_u) require_same_layout(u.grid(), f_u->grid(), "uniqueness_gap");
  if (f_v) require_same_layout(u.grid(), f_v->grid(), "uniqueness_gap");
  if (!(k_small > 0.0)) throw DomainError("uniqueness_gap: k_small must be positive");
  CutoffSpec spec;
  spec.kind = CutoffKind::uniqueness_plateau;
  spec.s = s;
  spec.sigma = sigma;
  const RenormFunction T = make_cutoff(spec);

  const Grid& g = u.grid();
  const std::size_t nn = g.n_nodes();
  UniquenessTerms r;

  std::vector<double> a(nn), w(nn);
  const auto plateau_gap = [&](std::size_t n) {
    const auto un = u.slice(n);
    const auto vn = v.slice(n);
    for (std::size_t i = 0; i < nn; ++i) w[i] = T.value(un[i]) - T.value(vn[i]);
  };
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    const auto un = u.slice(n);
    const auto vn = v.slice(n);
    for (std::size_t i = 0; i < nn; ++i) a[i] = std::abs(un[i] - vn[i]);
    r.gap = std::max(r.gap, kernels::lumped_integral(g, a));
  }

  const std::size_t K = g.n_steps();
  plateau_gap(K);
  for (std::size_t i = 0; i < nn; ++i) a[i] = theta(w[i], k_small);
  r.I0 = kernels::lumped_integral(g, a);
  plateau_gap(0);
  for (std::size_t i = 0; i < nn; ++i) a[i] = theta(w[i], k_small);
  r.I0 -= kernels::lumped_integral(g, a);

  std::vector<double> c1(g.n_cells()), c2(g.n_cells()), c3(g.n_cells()), c4(g.n_cells());
  for (std::size_t n = 1; n <= K; ++n) {
    const auto un = u.slice(n);
    const auto vn = v.slice(n);
    plateau_gap(n);
    for (std::size_t i = 0; i < nn; ++i) w[i] = truncate(w[i], k_small);
    const auto mu = means_of(g, un);
    const auto mv = means_of(g, vn);
    const auto gu = gradients_of(g, un);
    const auto gv = gradients_of(g, vn);
    const auto gw = gradients_of(g, w);
    const auto mw = means_of(g, w);
    const double time = g.time(n);
    kernels::for_each_index(g.n_cells(), Exec::parallel, [&](std::size_t c) {
      const Point& x = g.cells()[c].centroid;
      const Vec2 au = models.flux.eval(x, time, gu[c]);
      const Vec2 av = models.flux.eval(x, time, gv[c]);
      const Vec2 pu = models.convection.eval(x, time, mu[c]);
      const Vec2 pv = models.convection.eval(x, time, mv[c]);
      const double su = T.slope(mu[c]), sv = T.slope(mv[c]);
      const double cu = T.curvature(mu[c]), cv = T.curvature(mv[c]);
      c1[c] = dot({su * au[0] - sv * av[0], su * au[1] - sv * av[1]}, gw[c]);
      c2[c] = (cu * dot(au, gu[c]) - cv * dot(av, gv[c])) * mw[c];
      c3[c] = dot({su * pu[0] - sv * pv[0], su * pu[1] - sv * pv[1]}, gw[c]);
      c4[c] = (cu * dot(pu, gu[c]) - cv * dot(pv, gv[c])) * mw[c];
    });
    r.I1 += g.dt() * kernels::cell_integral(g, c1);
    r.I2 += g.dt() * kernels::cell_integral(g, c2);
    r.I3 += g.dt() * kernels::cell_integral(g, c3);
    r.I4 += g.dt() * kernels::cell_integral(g, c4);
    if (f_u || f_v) {
      for (std::size_t i = 0; i < nn; ++i) {
        const double fu = f_u ? f_u->slice(n)[i] : 0.0;
        const double fv = f_v ? f_v->slice(n)[i] : 0.0;
        a[i] = (fu * T.slope(un[i]) - fv * T.slope(vn[i])) * w[i];
      }
      r.I5 += g.dt() * kernels::lumped_integral(g, a);
    }
  }
  const double inv = 1.0 / k_small;
  r.I0 *= inv;
  r.I1 *= inv;
  r.I2 *= inv;
  r.I3 *= inv;
  r.I4 *= inv;
  r.I5 *= inv;
  r.balance = r.I0 + r.I1 + r.I2 + r.I3 + r.I4 - r.I5;
  return r;
}

double refinement_l1_gap(const Field& coarse, const Field& fine) {
  const Grid& gc = coarse.grid();
  const Grid& gf = fine.grid();
  const auto cc = gc.cells_per_axis();
  const auto cf = gf.cells_per_axis();
  const auto& dc = gc.domain();
  const auto& df = gf.domain();
  if (gc.dim() != gf.dim() || dc.x != df.x || (gc.dim() == 2 && dc.y != df.y) || gc.T() != gf.T())
    throw DomainError("refinement_l1_gap: grids cover different domains");
  const int r = cf[0] / cc[0];
  const std::size_t rt = gf.n_steps() / gc.n_steps();
  if (r < 1 || cf[0] != r * cc[0] || (gc.dim() == 2 && cf[1] != r * cc[1]) || rt < 1 ||
      gf.n_steps() != rt * gc.n_steps())
    throw DomainError("refinement_l1_gap: fine grid is not an integer refinement of the coarse grid");

  const auto nc = gc.nodes_per_axis();
  const auto nf = gf.nodes_per_axis();
  std::vector<std::size_t> map(gc.n_nodes());
  for (int iy = 0; iy < nc[1]; ++iy)
    for (int ix = 0; ix < nc[0]; ++ix)
      map[static_cast<std::size_t>(iy) * nc[0] + ix] =
          static_cast<std::size_t>(r * iy) * static_cast<std::size_t>(nf[0]) + static_cast<std::size_t>(r * ix);

  double worst = 0.0;
  std::vector<double> a(gc.n_nodes());
  for (std::size_t n = 0; n < coarse.n_levels(); ++n) {
    const auto c = coarse.slice(n);
    const auto f = fine.slice(n * rt);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(c[i] - f[map[i]]);
    worst = std::max(worst, kernels::lumped_integral(gc, a));
  }
  return worst;
}

std::vector<TimeRegularizationRow> time_regularization(const Field& u, double k, double p,
                                                       std::span<const double> mu_list,
                                                       std::span<const double> psi) {
  if (!(p > 1.0)) throw DomainError("time_regularization: p must exceed 1");
  const Grid& g = u.grid();
  Field tk(u.grid_ptr());
  {
    const auto src = u.values();
    auto dst = tk.values();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = truncate(src[i], k);
  }
  const GradientField gt = field_gradient(tk);
  std::vector<TimeRegularizationRow> rows;
  std::vector<double> a(g.n_nodes());
  for (double mu : mu_list) {
    const Field eta = time_regularize(u, k, TimeRegularizer{mu, std::vector<double>(psi.begin(), psi.end())});
    const GradientField ge = field_gradient(eta);
    TimeRegularizationRow row;
    row.mu = mu;
    row.grad_error = std::pow(space_time_cell_sum(g, [&](std::size_t n, std::size_t c) {
                                return std::pow(norm2(sub(ge.levels[n][c], gt.levels[n][c])), p);
                              }),
                              1.0 / p);
    double l2 = 0.0;
    for (std::size_t n = 1; n <= g.n_steps(); ++n) {
      const auto e = eta.slice(n);
      const auto t = tk.slice(n);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = (e[i] - t[i]) * (e[i] - t[i]);
      l2 += g.dt() * kernels::lumped_integral(g, a);
    }
    row.l2_error = std::sqrt(l2);
    row.max_abs = eta.max_abs();
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> observed_orders(std::span<const double> errors, double ratio) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0)
      out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(ratio));
    else
      out.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace renorm
