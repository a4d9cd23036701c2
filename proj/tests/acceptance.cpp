// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "renorm/config.hpp"
#include "renorm/rearrangement.hpp"
#include "renorm/runner.hpp"
#include "renorm/snapshot.hpp"
#include "renorm/truncation.hpp"
#include "support.hpp"

using namespace renorm;
namespace fs = std::filesystem;
using testing_support::Gen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------------------

Outcome truncation_calculus() {
  Gen g(1001);
  std::size_t violations = 0;
  const double tol = 1e-12;
  for (int i = 0; i < 10000; ++i) {
    const double r = g.wide_real(), k = g.positive(-4.0, 4.0);
    const double t = truncate(r, k), th = theta(r, k);
    const double scale = std::max(1.0, k * std::abs(r));
    if (0.5 * t * t > 0.5 * r * t + tol * scale) ++violations;
    if (0.5 * r * t > th + tol * scale) ++violations;
    if (th > k * std::abs(r) + tol * scale) ++violations;
    const double r2 = g.wide_real();
    if (std::abs(t - truncate(r2, k)) > std::abs(r - r2) * (1.0 + tol)) ++violations;

    CutoffSpec spec;
    spec.kind = CutoffKind::uniqueness_plateau;
    spec.s = g.positive(-1.0, 1.0);
    spec.sigma = g.positive(-2.0, 0.0);
    const RenormFunction T = make_cutoff(spec);
    const double x = std::abs(g.uniform(-1.5, 1.5) * (spec.s + spec.sigma));
    // exact primitive of the piecewise-linear slope
    double expect = std::min(x, spec.s);
    if (x > spec.s) {
      const double y = std::min(x, spec.s + spec.sigma) - spec.s;
      expect += y - 0.5 * y * y / spec.sigma;
    }
    if (std::abs(T.value(x) - expect) > tol * std::max(1.0, expect)) ++violations;
    if (std::abs(T.value(-x) + expect) > tol * std::max(1.0, expect)) ++violations;
  }
  return {violations == 0, fmt("%.0f violations over 10^4 samples", static_cast<double>(violations))};
}

Outcome rearrangement_suite() {
  Gen g(1002);
  std::size_t violations = 0;
  double worst = 0.0;
  std::vector<double> v, m;
  for (int trial = 0; trial < 100; ++trial) {
    g.field(v, m);
    const CellFunction u{v, m};
    const auto table = rearrange(u);
    for (double p : {1.0, 2.0, 3.5}) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * m[i];
      const double direct = std::pow(s, 1.0 / p);
      for (double got : {lebesgue_norm(table, p), lebesgue_norm_via_distribution(u, p),
                         lorentz_norm(table, LorentzIndex{p, p})}) {
        const double rel = std::abs(got - direct) / std::max(direct, 1e-300);
        worst = std::max(worst, rel);
        if (rel > 1e-10) ++violations;
      }
    }
    double prev = kInf;
    for (int i = 0; i < 200; ++i) {
      const double t = table.total_measure * (i + 0.5) / 200.0;
      const double star = table.decreasing(t);
      if (star > prev) ++violations;
      if (star > maximal_average(table, t) * (1.0 + 1e-14)) ++violations;
      prev = star;
    }
  }
  return {violations == 0, fmt("%.0f violations, worst relative norm error %.2e", static_cast<double>(violations), worst)};
}

Outcome model_axioms() {
  std::size_t violations = 0, checks = 0;
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (int dim : {1, 2}) {
      for (const auto& c : verify_flux_axioms(p_laplacian_flux(p, default_delta_reg(p)), dim, 10000, 1e-9, 17)) {
        violations += c.violations;
        ++checks;
      }
      const Exponents ex = exponents(p, dim);
      for (const ConvectionModel& m : {growth_convection(0.5, 10.0, ex, dim), lipschitz_convection(0.5, ex, dim)})
        for (const ConvectionModel& mm : {m, convection_truncate(m, 0.1)})
          for (const auto& c : verify_convection_axioms(mm, dim, 10000, 1e-9, 18)) {
            violations += c.violations;
            ++checks;
          }
    }
  return {violations == 0,
          fmt("%.0f violations in %.0f conditions x 10^4 samples", static_cast<double>(violations), static_cast<double>(checks))};
}

Outcome solver_oracle() {
  const auto start = std::chrono::steady_clock::now();
  const ProblemModels heat{p_laplacian_flux(2.0, 0.0), no_convection()};
  const double T = 0.1, A = 1.0, F = 2.0;
  std::vector<double> errors;
  for (std::size_t steps : {10, 20, 40}) {
    const auto g = testing_support::unit_grid_1d(512, T, steps);
    const RoughData d = make_data(DataParams{DataKind::smooth, A, F, 0.05}, g->domain(), T);
    const Solution s = solve(heat, d, g, ApproximationSchedule{}, 1e-3);
    const double a = testing_support::heat_amplitude(A, F, T, T);
    double err = 0.0;
    for (std::size_t i = 0; i < g->n_nodes(); ++i)
      err = std::max(err, std::abs(s.u.slice(steps)[i] - a * std::sin(std::numbers::pi * g->nodes()[i][0])));
    errors.push_back(err);
  }
  const double o1 = std::log2(errors[0] / errors[1]), o2 = std::log2(errors[1] / errors[2]);

  // Steady limit: a huge step reduces the scheme to K u = M f.
  const int cells = 200;
  const auto g = testing_support::unit_grid_1d(cells, 1e12, 1);
  const double h = 1.0 / cells;
  std::vector<double> zero(g->n_nodes(), 0.0), f(g->n_nodes());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(7.0 * g->nodes()[i][0]) + 1.0;
  const std::size_t n = cells - 1;
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = h * f[i + 1];
  const auto ref = testing_support::thomas(std::vector<double>(n, -1.0 / h), std::vector<double>(n, 2.0 / h),
                                           std::vector<double>(n, -1.0 / h), rhs);
  ApproximationSchedule sched;
  sched.inner_tol = 1e-12;
  const auto u = step(zero, 1e12, heat, f, *g, sched);
  double poisson = 0.0;
  for (std::size_t i = 0; i < n; ++i) poisson = std::max(poisson, std::abs(u[i + 1] - ref[i]));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = o1 >= 0.9 && o2 >= 0.9 && poisson <= 1e-8 && secs <= 30.0;
  return {ok, fmt("orders %.3f %.3f, Poisson error %.2e", o1, o2, poisson) + fmt(", %.2f s", secs)};
}

// ---------------------------------------------------------------------------------------

RunOutcome run_config(const std::string& name, const std::string& out_name) {
  const RunConfig cfg = load_config(std::string(RENORM_CONFIG_DIR) + "/" + name);
  RunOptions opts;
  opts.output_dir = (fs::path(RENORM_TEST_OUTPUT_DIR) / out_name).string();
  opts.quiet = true;
  fs::remove_all(*opts.output_dir);
  std::ostringstream log, err;
  return run(cfg, opts, log, err);
}

const ReportEntry* find(const RunOutcome& r, const std::string& name) {
  const ReportEntry* last = nullptr;
  for (const auto& e : r.report.entries)
    if (e.name == name) last = &e;
  return last;
}

// Every named entry is present with a pass verdict (informational does not count).
bool all_pass(const RunOutcome& r, const std::vector<std::string>& names, std::string& missing) {
  for (const auto& n : names) {
    bool seen = false;
    for (const auto& e : r.report.entries) {
      if (e.name != n) continue;
      seen = true;
      if (e.verdict != Verdict::pass) {
        missing = n + " " + verdict_name(e.verdict);
        return false;
      }
    }
    if (!seen) {
      missing = n + " missing";
      return false;
    }
  }
  return true;
}

Outcome from_run(const RunOutcome& r, const std::vector<std::string>& names, const std::string& detail) {
  std::string why;
  const bool ok = r.exit_code == exit_code::ok && all_pass(r, names, why);
  return {ok, ok ? detail : detail + " [" + why + "]"};
}

double value(const RunOutcome& r, const std::string& name) {
  const ReportEntry* e = find(r, name);
  return e ? e->value : std::nan("");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* text;
    std::function<Outcome()> check;
  };

  std::optional<RunOutcome> bump;
  const auto bump_run = [&]() -> const RunOutcome& {
    if (!bump) bump = run_config("bump_energy.cfg", "acceptance_bump");
    return *bump;
  };

  const std::vector<Criterion> criteria{
      {1, "truncation calculus", truncation_calculus},
      {2, "rearrangement identities", rearrangement_suite},
      {3, "flux and convection structural conditions", model_axioms},
      {4, "heat and steady oracles", solver_oracle},
      {5, "energy estimate linear in k",
       [&] {
         const auto& r = bump_run();
         return from_run(r, {"truncation_energy_ratio", "truncation_energy_monotone"},
                         fmt("lhs/k max/min %.3f", value(r, "truncation_energy_ratio")));
       }},
      {6, "tail energies decay",
       [&] {
         const auto& r = bump_run();
         return from_run(r,
                         {"tail_flux_monotone", "tail_grad_monotone", "tail_conv_monotone", "tail_flux_decay",
                          "tail_grad_decay", "tail_conv_decay"},
                         fmt("final/initial %.3f %.3f %.3f", value(r, "tail_flux_decay"), value(r, "tail_grad_decay"),
                             value(r, "tail_conv_decay")));
       }},
      {7, "renormalized identity residual",
       [&] {
         const RunOutcome r = run_config("smooth_renorm.cfg", "acceptance_renorm");
         return from_run(r,
                         {"renormalized_residual_order", "renormalized_residual_zero_phi",
                          "renormalized_residual_zero_S"},
                         fmt("observed order %.3f, zero cases %g %g", value(r, "renormalized_residual_order"),
                             value(r, "renormalized_residual_zero_phi"), value(r, "renormalized_residual_zero_S")));
       }},
      {8, "truncated gradients form a Cauchy sequence",
       [&] {
         const RunOutcome r = run_config("smooth_renorm.cfg", "acceptance_gradient");
         return from_run(r, {"gradient_cauchy_ratio", "gradient_pairing"},
                         fmt("Cauchy ratio %.3f (needs <= 0.75)", value(r, "gradient_cauchy_ratio")));
       }},
      {9, "uniqueness gap",
       [&] {
         const RunOutcome r = run_config("uniqueness.cfg", "acceptance_uniqueness");
         return from_run(r, {"uniqueness_gap", "uniqueness_I1", "uniqueness_self_gap"},
                         fmt("gap %.3e vs 10x estimate %.3e, I1 %.3e", value(r, "uniqueness_gap"),
                             10.0 * value(r, "uniqueness_refinement_error"), value(r, "uniqueness_I1")));
       }},
      {10, "reproducible outputs",
       [&] {
         const RunOutcome a = run_config("uniqueness.cfg", "acceptance_repeat_a");
         const RunOutcome b = run_config("uniqueness.cfg", "acceptance_repeat_b");
         bool same = a.exit_code == exit_code::ok && b.exit_code == exit_code::ok;
         std::size_t files = 0;
         for (const auto& entry : fs::directory_iterator(a.output_dir)) {
           const auto name = entry.path().filename().string();
           if (name != "diagnostics.csv" && entry.path().extension() != ".snap") continue;
           same = same && slurp(entry.path()) == slurp(fs::path(b.output_dir) / name);
           ++files;
         }
         // snapshot round trip
         const fs::path snap = fs::path(a.output_dir) / "u_eps0.snap";
         const Field u = read_snapshot(snap.string());
         const fs::path again = fs::path(a.output_dir) / "roundtrip.snap";
         write_snapshot(again.string(), u);
         const Field w = read_snapshot(again.string());
         const bool exact = std::equal(u.values().begin(), u.values().end(), w.values().begin()) &&
                            slurp(snap) == slurp(again);
         fs::remove(again);
         return Outcome{same && exact && files >= 4,
                        fmt("%.0f files byte-identical, round trip ", static_cast<double>(files)) +
                            (exact ? "exact" : "differs")};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.text, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
