#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "renorm/config.hpp"
#include "renorm/errors.hpp"
#include "renorm/kernels.hpp"
#include "renorm/rearrangement.hpp"
#include "renorm/runner.hpp"
#include "renorm/snapshot.hpp"

namespace {

using namespace renorm;

int thread_cap() {
  const char* env = std::getenv("RENORM_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) {
    std::cerr << "warning: ignoring RENORM_THREADS='" << env << "'\n";
    return 0;
  }
  return static_cast<int>(v);
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument(s);
  return v;
}

int cmd_run(const std::string& path, const RunOptions& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return exit_code::bad_input;
  }
  try {
    const RunOutcome out = run(cfg, opts, std::cout, std::cerr);
    return out.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::diagnostic_failure;
  }
}

int cmd_rearrange(const std::string& path, const std::string& p_text, const std::string& q_text) {
  LorentzIndex idx;
  try {
    idx = {parse_exponent(p_text), parse_exponent(q_text)};
    idx.validate();
  } catch (const std::exception&) {
    std::cerr << "error: invalid Lorentz index (" << p_text << ", " << q_text << ")\n";
    return exit_code::bad_input;
  }
  std::optional<Field> snap;
  try {
    snap.emplace(read_snapshot(path));
  } catch (const SnapshotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  }
  const Field& u = *snap;
  // |u| over Q: levels 1..K, one entry per cell with the cell-mean value.
  const Grid& g = u.grid();
  std::vector<double> values, measures;
  std::vector<double> mean(g.n_cells());
  for (std::size_t n = 1; n < u.n_levels(); ++n) {
    kernels::cell_means(g, u.slice(n), mean, kernels::Exec::serial);
    for (std::size_t c = 0; c < g.n_cells(); ++c) {
      values.push_back(mean[c]);
      measures.push_back(g.cells()[c].measure * g.dt());
    }
  }
  const RearrangementTable table = rearrange(CellFunction{values, measures});
  std::printf("L^{%s,%s} norm: %.17g\n", p_text.c_str(), q_text.c_str(), lorentz_norm(table, idx));
  if (std::isfinite(idx.p))
    std::printf("L^%s norm: %.17g\n", p_text.c_str(), lebesgue_norm(table, idx.p));
  else
    std::printf("L^inf norm: %.17g\n", table.thresholds.empty() ? 0.0 : table.thresholds.back());
  return exit_code::ok;
}

int cmd_verify_models(const std::string& path, const RunOptions& opts) {
  RunConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return exit_code::bad_input;
  }
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const ProblemModels m = build_models(cfg);
  const Exponents ex = exponents(cfg.p, cfg.domain.dim);
  constexpr std::size_t kSamples = 10000;
  constexpr double kTol = 1e-9;
  auto checks = verify_flux_axioms(m.flux, cfg.domain.dim, kSamples, kTol, seed);
  const auto conv = verify_convection_axioms(m.convection, cfg.domain.dim, kSamples, kTol, seed + 1);
  checks.insert(checks.end(), conv.begin(), conv.end());
  if (!opts.quiet) {
    std::printf("flux %s (p = %g, delta = %g), convection %s (gamma = %g, m = %g%s)\n", m.flux.name.c_str(),
                m.flux.p, m.flux.delta_reg, m.convection.name.c_str(), ex.gamma, ex.m,
                ex.extended_regime ? ", N = 1 extended regime" : "");
    std::printf("%-20s %10s %10s %14s\n", "condition", "samples", "violations", "worst margin");
  }
  std::size_t violations = 0;
  for (const auto& c : checks) {
    violations += c.violations;
    if (!opts.quiet)
      std::printf("%-20s %10zu %10zu %14.6e\n", c.condition.c_str(), c.samples, c.violations, c.worst_margin);
  }
  return violations == 0 ? exit_code::ok : exit_code::diagnostic_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renormalized solutions of nonlinear parabolic problems: solver, diagnostics, rearrangement"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string output_dir;
  std::uint64_t seed = 0;
  app.add_option("--output-dir", output_dir, "Override the configured output directory");
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_flag("--quiet", opts.quiet, "Suppress progress output");

  std::string config_path, snapshot_path, p_text, q_text;
  auto* run_cmd = app.add_subcommand("run", "Solve the eps ladder and evaluate the configured diagnostics");
  run_cmd->add_option("config", config_path, "Configuration file")->required();
  auto* rearr = app.add_subcommand("rearrange", "Print the L^{p,q} and L^p norms of a snapshot over Q");
  rearr->add_option("snapshot", snapshot_path, "Snapshot file")->required();
  rearr->add_option("p", p_text, "Lorentz exponent p (or inf)")->required();
  rearr->add_option("q", q_text, "Lorentz exponent q (or inf)")->required();
  auto* verify = app.add_subcommand("verify-models", "Sample the structural conditions of the configured models");
  verify->add_option("config", config_path, "Configuration file")->required();
  for (auto* sub : {run_cmd, rearr, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::bad_input;
  }
  if (app.count("--output-dir")) opts.output_dir = output_dir;
  if (app.count("--seed")) opts.seed = seed;
  opts.max_threads = thread_cap();
  if (opts.max_threads > 0) omp_set_num_threads(opts.max_threads);

  if (run_cmd->parsed()) return cmd_run(config_path, opts);
  if (rearr->parsed()) return cmd_rearrange(snapshot_path, p_text, q_text);
  return cmd_verify_models(config_path, opts);
}
