#include "renorm/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "renorm/errors.hpp"
#include "renorm/kernels.hpp"
#include "renorm/snapshot.hpp"
#include "renorm/truncation.hpp"

namespace renorm {

namespace {

struct Job {
  std::string key;
  std::shared_ptr<const Grid> grid;
  double eps = 1.0;
  std::uint64_t seed = 0;
};

class Plan {
 public:
  std::size_t add(const std::string& key, std::shared_ptr<const Grid> grid, double eps, std::uint64_t seed) {
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    jobs_.push_back({key, std::move(grid), eps, seed});
    index_[key] = jobs_.size() - 1;
    return jobs_.size() - 1;
  }
  const std::vector<Job>& jobs() const { return jobs_; }
  std::size_t at(const std::string& key) const { return index_.at(key); }

 private:
  std::vector<Job> jobs_;
  std::map<std::string, std::size_t> index_;
};

bool requested(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.diagnostics.list.begin(), cfg.diagnostics.list.end(), name) != cfg.diagnostics.list.end();
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_increase(const std::vector<double>& v) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) worst = std::max(worst, v[i + 1] - v[i]);
  return v.size() < 2 ? 0.0 : worst;
}

struct Context {
  const RunConfig& cfg;
  const std::vector<Solution>& sols;
  const Plan& plan;
  DiagnosticsReport& report;

  const Solution& get(const std::string& key) const { return sols[plan.at(key)]; }
  const Solution& finest() const { return get("eps" + std::to_string(cfg.schedule.eps_list.size() - 1)); }
};

struct EnergySweep {
  std::vector<TruncationEnergy> energies;
  double M_est = 0.0;
};

EnergySweep energy_sweep(const Solution& sol, const std::vector<double>& ks) {
  EnergySweep s;
  for (double k : ks) {
    s.energies.push_back(truncation_energy(sol, k));
    s.M_est = std::max(s.M_est, s.energies.back().lhs / k);
  }
  return s;
}

void run_truncation_energy(const Context& c) {
  const Solution& sol = c.finest();
  const auto& ks = c.cfg.diagnostics.energy_k;
  const EnergySweep sweep = energy_sweep(sol, ks);
  std::vector<double> lhs, per_k;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& e = sweep.energies[i];
    const EntryParams p{.k = ks[i], .eps = sol.eps};
    c.report.add("truncation_energy", p, e.lhs, std::nullopt, Verdict::informational);
    c.report.add("truncation_energy_sup_term", p, e.sup_term, std::nullopt, Verdict::informational);
    c.report.add("truncation_energy_gradient_term", p, e.gradient_term, std::nullopt, Verdict::informational);
    lhs.push_back(e.lhs);
    per_k.push_back(e.lhs / ks[i]);
  }
  const EntryParams p{.eps = sol.eps};
  c.report.add("truncation_energy_data_mass", p, sweep.energies.front().data_mass, std::nullopt,
               Verdict::informational);
  double min_step = 0.0;
  for (std::size_t i = 0; i + 1 < lhs.size(); ++i)
    min_step = i == 0 ? lhs[1] - lhs[0] : std::min(min_step, lhs[i + 1] - lhs[i]);
  const double scale = *std::max_element(lhs.begin(), lhs.end());
  c.report.add("truncation_energy_monotone", p, min_step, 0.0, at_least(min_step, 0.0, 1e-12 * std::max(1.0, scale)));
  const double hi = *std::max_element(per_k.begin(), per_k.end());
  const double lo = *std::min_element(per_k.begin(), per_k.end());
  const double ratio = lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  const double bound = c.cfg.diagnostics.energy_max_ratio;
  c.report.add("truncation_energy_ratio", p, ratio, bound, at_most(ratio, bound));
}

void run_lorentz_apriori(const Context& c) {
  const double p = c.cfg.p;
  const Solution* levels[2] = {&c.finest(), &c.get("fine2")};
  const char* suffix[2] = {"_x1", "_x2"};
  double u_ratio[2], g_ratio[2];
  for (int l = 0; l < 2; ++l) {
    const Solution& sol = *levels[l];
    const EnergySweep sweep = energy_sweep(sol, c.cfg.diagnostics.energy_k);
    const EntryParams ep{.eps = sol.eps};
    if (!(sweep.M_est > 0.0)) {
      c.report.add(std::string("lorentz_M_est") + suffix[l], ep, 0.0, std::nullopt, Verdict::informational);
      u_ratio[l] = g_ratio[l] = 0.0;
      continue;
    }
    const LorentzApriori r = lorentz_apriori(sol.u, p, sweep.M_est);
    c.report.add(std::string("lorentz_M_est") + suffix[l], ep, sweep.M_est, std::nullopt, Verdict::informational);
    c.report.add(std::string("lorentz_u_norm") + suffix[l], ep, r.u_norm, r.u_scale, Verdict::informational);
    c.report.add(std::string("lorentz_grad_norm") + suffix[l], ep, r.grad_norm, r.grad_scale, Verdict::informational);
    c.report.add(std::string("lorentz_u_ratio") + suffix[l], ep, r.u_ratio, std::nullopt, Verdict::informational);
    c.report.add(std::string("lorentz_grad_ratio") + suffix[l], ep, r.grad_ratio, std::nullopt,
                 Verdict::informational);
    u_ratio[l] = r.u_ratio;
    g_ratio[l] = r.grad_ratio;

    // Second form of the bound, with the initial energy as offset.
    std::vector<double> sq(sol.u0_eps.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = sol.u0_eps[i] * sol.u0_eps[i];
    const double L = 0.5 * kernels::lumped_integral(sol.u.grid(), sq);
    double M_offset = 0.0;
    for (std::size_t i = 0; i < sweep.energies.size(); ++i)
      M_offset = std::max(M_offset, (sweep.energies[i].lhs - L) / c.cfg.diagnostics.energy_k[i]);
    c.report.add(std::string("lorentz_M_with_offset") + suffix[l], ep, M_offset, L, Verdict::informational);
  }
  const double bound = c.cfg.diagnostics.lorentz_max_growth;
  const EntryParams ep{.eps = c.finest().eps};
  const auto growth = [](double a, double b) { return a > 0.0 ? b / a : (b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()); };
  const double gu = growth(u_ratio[0], u_ratio[1]);
  const double gg = growth(g_ratio[0], g_ratio[1]);
  c.report.add("lorentz_u_ratio_growth", ep, gu, bound, at_most(gu, bound));
  c.report.add("lorentz_grad_ratio_growth", ep, gg, bound, at_most(gg, bound));
}

void run_tail_energies(const Context& c) {
  const Solution& sol = c.finest();
  const auto& d = c.cfg.diagnostics;
  std::vector<double> flux, grad, conv;
  double coercivity = std::numeric_limits<double>::infinity();
  for (double n : d.tail_n) {
    const TailEnergies t = tail_energies(sol.u, n, sol.models);
    const EntryParams p{.n = n, .eps = sol.eps};
    c.report.add("tail_flux", p, t.flux_tail, std::nullopt, Verdict::informational);
    c.report.add("tail_grad", p, t.grad_tail, std::nullopt, Verdict::informational);
    c.report.add("tail_conv", p, t.conv_tail, std::nullopt, Verdict::informational);
    flux.push_back(t.flux_tail);
    grad.push_back(t.grad_tail);
    conv.push_back(t.conv_tail);
    coercivity = std::min(coercivity, t.flux_tail - sol.models.flux.alpha * t.grad_tail);
  }
  const EntryParams p{.eps = sol.eps};
  const std::pair<const char*, const std::vector<double>*> series[] = {
      {"tail_flux", &flux}, {"tail_grad", &grad}, {"tail_conv", &conv}};
  for (const auto& [name, v] : series) {
    const double inc = max_increase(*v);
    c.report.add(std::string(name) + "_monotone", p, inc, d.tail_slack, at_most(inc, d.tail_slack));
    const double frac = v->front() > 0.0 ? v->back() / v->front() : 0.0;
    c.report.add(std::string(name) + "_decay", p, frac, d.tail_max_final_fraction,
                 at_most(frac, d.tail_max_final_fraction));
  }
  // Exact coercivity a.xi >= alpha |xi|^p only holds without regularization or for p >= 2.
  const bool exact = sol.models.flux.delta_reg == 0.0 || sol.models.flux.p >= 2.0;
  c.report.add("tail_coercivity", p, coercivity, 0.0,
               exact ? at_least(coercivity, 0.0, 1e-12) : Verdict::informational);
}

void run_renormalized_residual(const Context& c) {
  const auto& d = c.cfg.diagnostics;
  const Solution& base = c.finest();
  const double M = d.residual_M > 0.0 ? d.residual_M : std::max(1.0, 2.0 * base.u.max_abs());
  CutoffSpec spec;
  spec.kind = CutoffKind::smooth_renorm;
  spec.M = M;
  const RenormFunction S = make_cutoff(spec);

  std::vector<double> residuals;
  for (int l = 0; l < d.residual_levels; ++l) {
    const Solution& sol = l == 0 ? base : c.get("fine" + std::to_string(1 << l));
    const auto terms = renormalized_residual(sol, S, M, default_test_function(sol.u.grid()));
    residuals.push_back(terms.residual);
    c.report.add("renormalized_residual_x" + std::to_string(1 << l), EntryParams{.eps = sol.eps}, terms.residual,
                 std::nullopt, Verdict::informational);
  }
  const auto orders = observed_orders(residuals);
  double worst = std::numeric_limits<double>::infinity();
  for (double o : orders) worst = std::isnan(o) ? -std::numeric_limits<double>::infinity() : std::min(worst, o);
  c.report.add("renormalized_residual_order", EntryParams{.eps = base.eps}, worst, d.residual_min_order,
               at_least(worst, d.residual_min_order));

  const TestFunction zero_phi = [](const Point&, double) { return 0.0; };
  const double r_phi = renormalized_residual(base, S, M, zero_phi).residual;
  const double r_S = renormalized_residual(base, zero_renorm(), M, default_test_function(base.u.grid())).residual;
  c.report.add("renormalized_residual_zero_phi", EntryParams{.eps = base.eps}, r_phi, 0.0, at_most(r_phi, 0.0));
  c.report.add("renormalized_residual_zero_S", EntryParams{.eps = base.eps}, r_S, 0.0, at_most(r_S, 0.0));

  // Size of every assembled term along the eps ladder.
  for (std::size_t i = 0; i < c.cfg.schedule.eps_list.size(); ++i) {
    const Solution& sol = c.get("eps" + std::to_string(i));
    const auto t = renormalized_residual(sol, S, M, default_test_function(sol.u.grid()));
    const EntryParams p{.eps = sol.eps};
    const std::pair<const char*, double> terms[] = {{"initial", t.initial}, {"time", t.time},
                                                    {"flux", t.flux},       {"flux_curv", t.flux_curv},
                                                    {"conv", t.conv},       {"conv_curv", t.conv_curv},
                                                    {"source", t.source}};
    for (const auto& [name, v] : terms)
      c.report.add(std::string("renormalized_term_") + name, p, v, std::nullopt, Verdict::informational);
  }
}

void run_gradient_convergence(const Context& c) {
  const auto& d = c.cfg.diagnostics;
  std::vector<const Field*> fields;
  for (std::size_t i = 0; i < c.cfg.schedule.eps_list.size(); ++i)
    fields.push_back(&c.get("eps" + std::to_string(i)).u);
  const auto rows = gradient_convergence(fields, d.gradient_k, c.finest().models.flux);
  const auto& eps = c.cfg.schedule.eps_list;
  for (const auto& r : rows) {
    const EntryParams p{.k = d.gradient_k, .eps = eps[r.i]};
    c.report.add("gradient_cauchy", p, r.cauchy_norm, std::nullopt, Verdict::informational);
    c.report.add("gradient_pairing", p, r.pairing, 0.0, at_least(r.pairing, 0.0, 1e-12));
  }
  const double bound = 1.0 - d.gradient_min_decrease;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double ratio = rows[i].cauchy_norm > 0.0 ? rows[i + 1].cauchy_norm / rows[i].cauchy_norm : 0.0;
    c.report.add("gradient_cauchy_ratio", EntryParams{.k = d.gradient_k, .eps = eps[i + 1]}, ratio, bound,
                 at_most(ratio, bound));
  }
}

void run_uniqueness_gap(const Context& c) {
  const auto& d = c.cfg.diagnostics;
  const Solution& u = c.finest();
  const Solution& v = c.get("v");
  const Solution& uref = c.get("fine2");
  const double s = d.uniqueness_s > 0.0 ? d.uniqueness_s : std::max(u.u.max_abs(), v.u.max_abs()) + 1.0;
  const EntryParams p{.eps = u.eps, .s = s, .sigma = d.uniqueness_sigma};

  const UniquenessTerms t =
      uniqueness_gap(u.u, v.u, s, d.uniqueness_sigma, d.uniqueness_k_small, u.models, &u.f_eps, &v.f_eps);
  const double E = refinement_l1_gap(u.u, uref.u);
  const bool hypothesis = u.models.convection.lipschitz_for_uniqueness;
  c.report.add("uniqueness_refinement_error", p, E, std::nullopt, Verdict::informational);
  c.report.add("uniqueness_gap", p, t.gap, d.uniqueness_factor * E,
               hypothesis ? at_most(t.gap, d.uniqueness_factor * E) : Verdict::informational);
  // I1 is a monotone pairing when the plateau is flat on the range of both runs (exact in 1D).
  const bool flat = s > std::max(u.u.max_abs(), v.u.max_abs()) && u.u.grid().dim() == 1;
  const std::pair<const char*, double> terms[] = {{"uniqueness_I0", t.I0}, {"uniqueness_I2", t.I2},
                                                  {"uniqueness_I3", t.I3}, {"uniqueness_I4", t.I4},
                                                  {"uniqueness_I5", t.I5}, {"uniqueness_balance", t.balance}};
  c.report.add("uniqueness_I1", p, t.I1, 0.0, flat ? at_least(t.I1, 0.0, 1e-12) : Verdict::informational);
  for (const auto& [name, value] : terms) c.report.add(name, p, value, std::nullopt, Verdict::informational);

  const UniquenessTerms self = uniqueness_gap(u.u, u.u, s, d.uniqueness_sigma, d.uniqueness_k_small, u.models,
                                              &u.f_eps, &u.f_eps);
  const double self_total = self.gap + std::abs(self.I0) + std::abs(self.I1) + std::abs(self.I2) +
                            std::abs(self.I3) + std::abs(self.I4) + std::abs(self.I5);
  c.report.add("uniqueness_self_gap", p, self_total, 0.0, at_most(self_total, 0.0));
}

void run_time_regularization(const Context& c) {
  const auto& d = c.cfg.diagnostics;
  const Solution& sol = c.finest();
  const auto rows = time_regularization(sol.u, d.time_reg_k, c.cfg.p, d.time_reg_mu, sol.u0_eps);
  std::vector<double> l2;
  double max_abs = 0.0;
  for (const auto& r : rows) {
    const EntryParams p{.k = d.time_reg_k, .eps = sol.eps, .mu = r.mu};
    c.report.add("time_regularization_grad_error", p, r.grad_error, std::nullopt, Verdict::informational);
    c.report.add("time_regularization_l2_error", p, r.l2_error, std::nullopt, Verdict::informational);
    l2.push_back(r.l2_error);
    max_abs = std::max(max_abs, r.max_abs);
  }
  const EntryParams p{.k = d.time_reg_k, .eps = sol.eps};
  c.report.add("time_regularization_bound", p, max_abs, d.time_reg_k,
               at_most(max_abs, d.time_reg_k, 1e-14 * d.time_reg_k));
  const double inc = max_increase(l2);
  c.report.add("time_regularization_l2_monotone", p, inc, 0.0, at_most(inc, 0.0, 1e-12));
}

using DiagnosticFn = void (*)(const Context&);

const std::map<std::string, DiagnosticFn>& diagnostic_table() {
  static const std::map<std::string, DiagnosticFn> table{
      {"truncation_energy", run_truncation_energy},       {"lorentz_apriori", run_lorentz_apriori},
      {"tail_energies", run_tail_energies},               {"renormalized_residual", run_renormalized_residual},
      {"gradient_convergence", run_gradient_convergence}, {"uniqueness_gap", run_uniqueness_gap},
      {"time_regularization", run_time_regularization}};
  return table;
}

Plan make_plan(const RunConfig& cfg) {
  Plan plan;
  const auto base = build_base_grid(cfg);
  const auto& eps = cfg.schedule.eps_list;
  std::shared_ptr<const Grid> finest_grid = base;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    auto g = cfg.schedule.refine_with_eps && i > 0
                 ? std::make_shared<const Grid>(refine(*base, 1 << i))
                 : base;
    plan.add("eps" + std::to_string(i), g, eps[i], cfg.seed);
    finest_grid = g;
  }
  const double e = eps.back();
  const auto add_refined = [&](int factor) {
    plan.add("fine" + std::to_string(factor), std::make_shared<const Grid>(refine(*finest_grid, factor)), e, cfg.seed);
  };
  if (requested(cfg, "lorentz_apriori") || requested(cfg, "uniqueness_gap")) add_refined(2);
  if (requested(cfg, "renormalized_residual"))
    for (int l = 1; l < cfg.diagnostics.residual_levels; ++l) add_refined(1 << l);
  if (requested(cfg, "uniqueness_gap")) {
    const auto& vc = cfg.diagnostics.uniqueness_v_n_cells;
    auto g = vc[0] == 0 ? finest_grid
                        : std::make_shared<const Grid>(build_grid(finest_grid->domain(), vc, finest_grid->boundary(),
                                                                  finest_grid->T(), finest_grid->n_steps()));
    plan.add("v", g, e, cfg.diagnostics.uniqueness_seed_b);
  }
  return plan;
}

void write_summary(std::ostream& out, const RunConfig& cfg, const Plan& plan, const std::vector<Solution>& sols,
                   const DiagnosticsReport& report, int code) {
  const Exponents ex = exponents(cfg.p, cfg.domain.dim);
  out << "renorm run summary\n";
  out << "config digest: " << report.config_digest << '\n';
  out << "started: " << report.started_at << '\n';
  out << "finished: " << report.finished_at << '\n';
  out << "exit code: " << code << '\n';
  out << "\nexponents: gamma = " << fmt(ex.gamma) << ", m = " << fmt(ex.m)
      << (ex.extended_regime ? " (N = 1: formulas used outside their stated range)" : "") << '\n';
  out << "\nsolves:\n";
  for (std::size_t j = 0; j < plan.jobs().size(); ++j) {
    const auto& job = plan.jobs()[j];
    const auto cells = job.grid->cells_per_axis();
    out << "  " << job.key << ": eps = " << fmt(job.eps) << ", seed = " << job.seed << ", cells = " << cells[0];
    if (job.grid->dim() == 2) out << "x" << cells[1];
    out << ", steps = " << job.grid->n_steps() << ", Picard iterations = " << sols[j].total_iterations
        << ", max|u| = " << fmt(sols[j].u.max_abs()) << '\n';
  }
  out << "\nverdicts: " << report.count(Verdict::pass) << " pass, " << report.count(Verdict::fail) << " fail, "
      << report.count(Verdict::informational) << " informational\n";
  for (const auto& e : report.entries)
    if (e.verdict == Verdict::fail)
      out << "  FAIL " << e.name << ": value " << fmt(e.value) << ", bound " << (e.bound ? fmt(*e.bound) : "-")
          << '\n';
  out << "\neffective configuration:\n" << echo_config(cfg);
}

}  // namespace

std::string digest(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutcome run(RunConfig cfg, const RunOptions& options, std::ostream& log, std::ostream& err) {
  if (options.output_dir) cfg.output_dir = *options.output_dir;
  if (options.seed) cfg.seed = *options.seed;
  validate(cfg);

  RunOutcome outcome;
  outcome.output_dir = cfg.output_dir;
  DiagnosticsReport& report = outcome.report;
  const std::string echo = echo_config(cfg);
  report.config_digest = digest(echo);
  report.started_at = now_utc();

  const ProblemModels models = build_models(cfg);
  const RoughData data = build_data(cfg);
  const Plan plan = make_plan(cfg);
  const auto& jobs = plan.jobs();
  if (!options.quiet) log << "solving " << jobs.size() << " trajectories\n";

  std::vector<std::optional<Solution>> slots(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const int threads = options.max_threads > 0 ? options.max_threads : omp_get_max_threads();
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      const Job& job = jobs[j];
      slots[j].emplace(solve(models, data, job.grid, cfg.schedule, job.eps, job.seed));
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!errors[j]) continue;
    try {
      std::rethrow_exception(errors[j]);
    } catch (const NonConvergenceError& e) {
      err << "error: solver did not converge at eps = " << jobs[j].eps << ", t = " << e.time() << " (step "
          << e.time_index() << ", residual " << e.residual() << ")\n";
      outcome.exit_code = exit_code::nonconvergence;
      return outcome;
    } catch (const NumericalBreakdown& e) {
      err << "error: numerical breakdown at eps = " << jobs[j].eps << ", step " << e.time_index() << ": "
          << e.what() << '\n';
      outcome.exit_code = exit_code::nonconvergence;
      return outcome;
    }
  }
  std::vector<Solution> sols;
  sols.reserve(jobs.size());
  for (auto& s : slots) sols.push_back(std::move(*s));

  for (std::size_t i = 0; i < cfg.schedule.eps_list.size(); ++i) {
    const Solution& sol = sols[plan.at("eps" + std::to_string(i))];
    const EntryParams p{.eps = sol.eps};
    report.add("solve_picard_iterations", p, sol.total_iterations, std::nullopt, Verdict::informational);
    report.add("data_u0_l1_error", p, u0_l1_error(data, sol.u.grid(), sol.u0_eps), std::nullopt,
               Verdict::informational);
    report.add("data_f_l1_error", p, f_l1_error(data, sol.f_eps), std::nullopt, Verdict::informational);
  }

  const Context ctx{cfg, sols, plan, report};
  for (const auto& name : cfg.diagnostics.list) {
    if (!options.quiet) log << "diagnostic " << name << '\n';
    try {
      diagnostic_table().at(name)(ctx);
    } catch (const DomainError& e) {
      err << "error: " << name << ": " << e.what() << '\n';
      report.add(name + "_error", EntryParams{}, 0.0, std::nullopt, Verdict::fail);
    }
  }
  report.finished_at = now_utc();
  outcome.exit_code = report.all_pass() ? exit_code::ok : exit_code::diagnostic_failure;

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < cfg.schedule.eps_list.size(); ++i)
    write_snapshot((dir / ("u_eps" + std::to_string(i) + ".snap")).string(), sols[plan.at("eps" + std::to_string(i))].u);
  {
    std::ofstream csv(dir / "diagnostics.csv");
    write_csv(csv, report);
  }
  {
    std::ofstream summary(dir / "summary.txt");
    write_summary(summary, cfg, plan, sols, report, outcome.exit_code);
  }
  {
    std::ofstream eff(dir / "effective.cfg");
    eff << echo;
  }
  if (!options.quiet) {
    log << report.count(Verdict::pass) << " pass, " << report.count(Verdict::fail) << " fail, "
        << report.count(Verdict::informational) << " informational; output in " << dir.string() << '\n';
  }
  return outcome;
}

}  // namespace renorm
