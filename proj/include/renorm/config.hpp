#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "renorm/grid.hpp"
#include "renorm/models.hpp"
#include "renorm/solver.hpp"

namespace renorm {

/// Unreadable, malformed or inconsistent configuration. line/column are 1-based and
/// zero when the problem is not tied to a position in the text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct DiagnosticsConfig {
  std::vector<std::string> list{"truncation_energy"};

  std::vector<double> energy_k{1.0, 2.0, 4.0, 8.0};
  double energy_max_ratio = 3.0;

  double lorentz_max_growth = 2.0;

  std::vector<double> tail_n{2.0, 4.0, 8.0, 16.0};
  double tail_slack = 1e-9;
  double tail_max_final_fraction = 0.5;

  double residual_M = 0.0;  ///< 0 selects 2 max|u| of the base run
  int residual_levels = 3;
  double residual_min_order = 0.8;

  double gradient_k = 1.0;
  double gradient_min_decrease = 0.25;

  double uniqueness_s = 0.0;  ///< 0 selects max(|u|, |v|) + 1
  double uniqueness_sigma = 0.1;
  double uniqueness_k_small = 0.01;
  std::uint64_t uniqueness_seed_b = 1;
  double uniqueness_factor = 10.0;
  /// Resolution of the second run; {0, 0} reuses the first run's grid.
  std::array<int, 2> uniqueness_v_n_cells{0, 0};

  double time_reg_k = 1.0;
  std::vector<double> time_reg_mu{10.0, 100.0, 1000.0};
};

struct RunConfig {
  DomainSpec domain;
  std::array<int, 2> n_cells{64, 1};
  BoundarySpec boundary;
  double T = 0.1;
  std::size_t n_steps = 100;
  double p = 2.0;

  std::string flux_name = "p_laplacian";
  std::optional<double> delta_reg;  ///< unset selects default_delta_reg(p)

  std::string convection_name = "none";
  double convection_c0 = 0.5;
  double convection_cap = 10.0;

  DataParams data;
  ApproximationSchedule schedule;
  DiagnosticsConfig diagnostics;

  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

inline const std::vector<std::string>& known_diagnostics() {
  static const std::vector<std::string> names{"truncation_energy", "lorentz_apriori",   "tail_energies",
                                              "renormalized_residual", "gradient_convergence",
                                              "uniqueness_gap", "time_regularization"};
  return names;
}

/// Flat `key = value` text with dotted section prefixes; `#` starts a comment. Lists are
/// whitespace separated. Unknown keys and malformed values raise ConfigError with position;
/// the result is validated.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Cross-field checks: dimensions, resolutions, exponents(p, N), schedule and names.
void validate(const RunConfig& cfg);

/// Every effective parameter, defaults included, in the input format. Parsing the echo
/// yields the same configuration.
std::string echo_config(const RunConfig& cfg);

ProblemModels build_models(const RunConfig& cfg);
RoughData build_data(const RunConfig& cfg);
std::shared_ptr<const Grid> build_base_grid(const RunConfig& cfg);

}  // namespace renorm
