#include "renorm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

struct Token {
  std::string text;
  int column = 0;
};

using Tokens = std::vector<Token>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

[[noreturn]] void fail_at(const std::string& what, int line, const Token& tok) {
  throw ConfigError(what + " '" + tok.text + "'", line, tok.column);
}

double real(const Token& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.text.c_str(), &end);
  if (tok.text.empty() || end != tok.text.c_str() + tok.text.size() || std::isnan(v))
    fail_at("expected a number, got", line, tok);
  return v;
}

long long integer(const Token& tok, int line) {
  long long v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail_at("expected an integer, got", line, tok);
  return v;
}

std::uint64_t unsigned_integer(const Token& tok, int line) {
  std::uint64_t v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail_at("expected a nonnegative integer, got", line, tok);
  return v;
}

bool boolean(const Token& tok, int line) {
  if (tok.text == "true") return true;
  if (tok.text == "false") return false;
  fail_at("expected true or false, got", line, tok);
}

const Token& single(const Tokens& t, int line) {
  if (t.size() != 1) throw ConfigError("expected exactly one value", line, t.size() > 1 ? t[1].column : 0);
  return t[0];
}

std::vector<double> reals(const Tokens& t, int line) {
  std::vector<double> v;
  for (const auto& tok : t) v.push_back(real(tok, line));
  return v;
}

BoundaryTag tag(const Token& tok, int line) {
  if (tok.text == "dirichlet") return BoundaryTag::dirichlet;
  if (tok.text == "neumann") return BoundaryTag::neumann;
  fail_at("expected dirichlet or neumann, got", line, tok);
}

const char* tag_name(BoundaryTag t) { return t == BoundaryTag::dirichlet ? "dirichlet" : "neumann"; }

const char* data_kind_name(DataKind k) {
  switch (k) {
    case DataKind::smooth: return "smooth";
    case DataKind::concentrated_bump: return "concentrated_bump";
    case DataKind::sign_changing: return "sign_changing";
  }
  return "smooth";
}

// A real that may be spelled `auto`, stored as 0.
double real_or_auto(const Tokens& t, int line) {
  const Token& tok = single(t, line);
  return tok.text == "auto" ? 0.0 : real(tok, line);
}

std::string auto_or(double v) { return v == 0.0 ? "auto" : fmt(v); }

struct KeySpec {
  const char* name;
  std::function<void(RunConfig&, const Tokens&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table{
      {"problem.dim",
       [](RunConfig& c, const Tokens& t, int l) { c.domain.dim = static_cast<int>(integer(single(t, l), l)); },
       [](const RunConfig& c) { return std::to_string(c.domain.dim); }},
      {"problem.domain",
       [](RunConfig& c, const Tokens& t, int l) {
         if (t.size() != 2 && t.size() != 4) throw ConfigError("expected 2 or 4 bounds", l, t.empty() ? 0 : t[0].column);
         c.domain.x = {real(t[0], l), real(t[1], l)};
         if (t.size() == 4) c.domain.y = {real(t[2], l), real(t[3], l)};
       },
       [](const RunConfig& c) {
         std::string s = fmt(c.domain.x[0]) + " " + fmt(c.domain.x[1]);
         if (c.domain.dim == 2) s += " " + fmt(c.domain.y[0]) + " " + fmt(c.domain.y[1]);
         return s;
       }},
      {"problem.n_cells",
       [](RunConfig& c, const Tokens& t, int l) {
         if (t.size() != 1 && t.size() != 2) throw ConfigError("expected 1 or 2 cell counts", l, t.empty() ? 0 : t[0].column);
         const int nx = static_cast<int>(integer(t[0], l));
         c.n_cells = {nx, t.size() == 2 ? static_cast<int>(integer(t[1], l)) : nx};
       },
       [](const RunConfig& c) {
         return c.domain.dim == 2 ? std::to_string(c.n_cells[0]) + " " + std::to_string(c.n_cells[1])
                                  : std::to_string(c.n_cells[0]);
       }},
      {"problem.boundary",
       [](RunConfig& c, const Tokens& t, int l) {
         if (t.size() != 2 && t.size() != 4) throw ConfigError("expected 2 or 4 boundary tags", l, t.empty() ? 0 : t[0].column);
         c.boundary.left = tag(t[0], l);
         c.boundary.right = tag(t[1], l);
         if (t.size() == 4) {
           c.boundary.bottom = tag(t[2], l);
           c.boundary.top = tag(t[3], l);
         }
       },
       [](const RunConfig& c) {
         std::string s = std::string(tag_name(c.boundary.left)) + " " + tag_name(c.boundary.right);
         if (c.domain.dim == 2) s += std::string(" ") + tag_name(c.boundary.bottom) + " " + tag_name(c.boundary.top);
         return s;
       }},
      {"problem.T", [](RunConfig& c, const Tokens& t, int l) { c.T = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.T); }},
      {"problem.n_steps",
       [](RunConfig& c, const Tokens& t, int l) {
         const long long v = integer(single(t, l), l);
         if (v < 1) fail_at("n_steps must be >= 1, got", l, t[0]);
         c.n_steps = static_cast<std::size_t>(v);
       },
       [](const RunConfig& c) { return std::to_string(c.n_steps); }},
      {"problem.p", [](RunConfig& c, const Tokens& t, int l) { c.p = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.p); }},
      {"flux.name", [](RunConfig& c, const Tokens& t, int l) { c.flux_name = single(t, l).text; },
       [](const RunConfig& c) { return c.flux_name; }},
      {"flux.delta_reg",
       [](RunConfig& c, const Tokens& t, int l) {
         const Token& tok = single(t, l);
         if (tok.text == "auto")
           c.delta_reg.reset();
         else
           c.delta_reg = real(tok, l);
       },
       [](const RunConfig& c) { return c.delta_reg ? fmt(*c.delta_reg) : std::string("auto"); }},
      {"convection.name", [](RunConfig& c, const Tokens& t, int l) { c.convection_name = single(t, l).text; },
       [](const RunConfig& c) { return c.convection_name; }},
      {"convection.c0", [](RunConfig& c, const Tokens& t, int l) { c.convection_c0 = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.convection_c0); }},
      {"convection.cap", [](RunConfig& c, const Tokens& t, int l) { c.convection_cap = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.convection_cap); }},
      {"data.kind",
       [](RunConfig& c, const Tokens& t, int l) {
         const Token& tok = single(t, l);
         if (tok.text == "smooth")
           c.data.kind = DataKind::smooth;
         else if (tok.text == "concentrated_bump")
           c.data.kind = DataKind::concentrated_bump;
         else if (tok.text == "sign_changing")
           c.data.kind = DataKind::sign_changing;
         else
           fail_at("unknown data kind", l, tok);
       },
       [](const RunConfig& c) { return std::string(data_kind_name(c.data.kind)); }},
      {"data.amplitude", [](RunConfig& c, const Tokens& t, int l) { c.data.amplitude = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.data.amplitude); }},
      {"data.forcing", [](RunConfig& c, const Tokens& t, int l) { c.data.forcing = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.data.forcing); }},
      {"data.width", [](RunConfig& c, const Tokens& t, int l) { c.data.width = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.data.width); }},
      {"schedule.eps", [](RunConfig& c, const Tokens& t, int l) { c.schedule.eps_list = reals(t, l); },
       [](const RunConfig& c) { return join(c.schedule.eps_list); }},
      {"schedule.refine_with_eps",
       [](RunConfig& c, const Tokens& t, int l) { c.schedule.refine_with_eps = boolean(single(t, l), l); },
       [](const RunConfig& c) { return std::string(c.schedule.refine_with_eps ? "true" : "false"); }},
      {"schedule.inner_tol", [](RunConfig& c, const Tokens& t, int l) { c.schedule.inner_tol = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.schedule.inner_tol); }},
      {"schedule.inner_max_iters",
       [](RunConfig& c, const Tokens& t, int l) {
         c.schedule.inner_max_iters = static_cast<int>(integer(single(t, l), l));
       },
       [](const RunConfig& c) { return std::to_string(c.schedule.inner_max_iters); }},
      {"schedule.damping", [](RunConfig& c, const Tokens& t, int l) { c.schedule.damping = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.schedule.damping); }},
      {"diagnostics.list",
       [](RunConfig& c, const Tokens& t, int l) {
         c.diagnostics.list.clear();
         for (const auto& tok : t) {
           const auto& known = known_diagnostics();
           if (std::find(known.begin(), known.end(), tok.text) == known.end())
             fail_at("unknown diagnostic", l, tok);
           c.diagnostics.list.push_back(tok.text);
         }
       },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.diagnostics.list.size(); ++i) s += (i ? " " : "") + c.diagnostics.list[i];
         return s;
       }},
      {"diagnostics.truncation_energy.k",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.energy_k = reals(t, l); },
       [](const RunConfig& c) { return join(c.diagnostics.energy_k); }},
      {"diagnostics.truncation_energy.max_ratio",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.energy_max_ratio = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.energy_max_ratio); }},
      {"diagnostics.lorentz_apriori.max_growth",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.lorentz_max_growth = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.lorentz_max_growth); }},
      {"diagnostics.tail_energies.n",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.tail_n = reals(t, l); },
       [](const RunConfig& c) { return join(c.diagnostics.tail_n); }},
      {"diagnostics.tail_energies.slack",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.tail_slack = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.tail_slack); }},
      {"diagnostics.tail_energies.max_final_fraction",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.tail_max_final_fraction = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.tail_max_final_fraction); }},
      {"diagnostics.renormalized_residual.M",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.residual_M = real_or_auto(t, l); },
       [](const RunConfig& c) { return auto_or(c.diagnostics.residual_M); }},
      {"diagnostics.renormalized_residual.levels",
       [](RunConfig& c, const Tokens& t, int l) {
         c.diagnostics.residual_levels = static_cast<int>(integer(single(t, l), l));
       },
       [](const RunConfig& c) { return std::to_string(c.diagnostics.residual_levels); }},
      {"diagnostics.renormalized_residual.min_order",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.residual_min_order = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.residual_min_order); }},
      {"diagnostics.gradient_convergence.k",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.gradient_k = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.gradient_k); }},
      {"diagnostics.gradient_convergence.min_decrease",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.gradient_min_decrease = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.gradient_min_decrease); }},
      {"diagnostics.uniqueness_gap.s",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.uniqueness_s = real_or_auto(t, l); },
       [](const RunConfig& c) { return auto_or(c.diagnostics.uniqueness_s); }},
      {"diagnostics.uniqueness_gap.sigma",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.uniqueness_sigma = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.uniqueness_sigma); }},
      {"diagnostics.uniqueness_gap.k_small",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.uniqueness_k_small = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.uniqueness_k_small); }},
      {"diagnostics.uniqueness_gap.seed_b",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.uniqueness_seed_b = unsigned_integer(single(t, l), l); },
       [](const RunConfig& c) { return std::to_string(c.diagnostics.uniqueness_seed_b); }},
      {"diagnostics.uniqueness_gap.factor",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.uniqueness_factor = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.uniqueness_factor); }},
      {"diagnostics.uniqueness_gap.v_n_cells",
       [](RunConfig& c, const Tokens& t, int l) {
         if (t.size() == 1 && t[0].text == "same") {
           c.diagnostics.uniqueness_v_n_cells = {0, 0};
           return;
         }
         if (t.size() != 1 && t.size() != 2) throw ConfigError("expected 'same' or 1-2 cell counts", l, t.empty() ? 0 : t[0].column);
         const int nx = static_cast<int>(integer(t[0], l));
         c.diagnostics.uniqueness_v_n_cells = {nx, t.size() == 2 ? static_cast<int>(integer(t[1], l)) : nx};
       },
       [](const RunConfig& c) {
         const auto& v = c.diagnostics.uniqueness_v_n_cells;
         if (v[0] == 0) return std::string("same");
         return c.domain.dim == 2 ? std::to_string(v[0]) + " " + std::to_string(v[1]) : std::to_string(v[0]);
       }},
      {"diagnostics.time_regularization.k",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.time_reg_k = real(single(t, l), l); },
       [](const RunConfig& c) { return fmt(c.diagnostics.time_reg_k); }},
      {"diagnostics.time_regularization.mu",
       [](RunConfig& c, const Tokens& t, int l) { c.diagnostics.time_reg_mu = reals(t, l); },
       [](const RunConfig& c) { return join(c.diagnostics.time_reg_mu); }},
      {"output_dir", [](RunConfig& c, const Tokens& t, int l) { c.output_dir = single(t, l).text; },
       [](const RunConfig& c) { return c.output_dir; }},
      {"seed", [](RunConfig& c, const Tokens& t, int l) { c.seed = unsigned_integer(single(t, l), l); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

bool strictly_increasing_positive(const std::vector<double>& v) {
  if (v.empty()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) return false;
    if (i > 0 && !(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = raw.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, static_cast<int>(first) + 1);

    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) throw ConfigError("missing key", line_no, static_cast<int>(first) + 1);

    Tokens tokens;
    std::size_t pos = eq + 1;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string::npos) break;
      const auto end = std::min(line.find_first_of(" \t\r", pos), line.size());
      tokens.push_back({line.substr(pos, end - pos), static_cast<int>(pos) + 1});
      pos = end;
    }
    if (tokens.empty()) throw ConfigError("missing value for '" + key + "'", line_no, static_cast<int>(eq) + 2);

    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return key == k.name; });
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'", line_no, static_cast<int>(first) + 1);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no, static_cast<int>(first) + 1);
    it->set(cfg, tokens, line_no);
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_config(in);
}

void validate(const RunConfig& cfg) {
  const auto check = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  check(cfg.domain.dim == 1 || cfg.domain.dim == 2, "problem.dim must be 1 or 2");
  check(std::isfinite(cfg.T) && cfg.T > 0.0, "problem.T must be positive");
  try {
    (void)exponents(cfg.p, cfg.domain.dim);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("problem.p: ") + e.what());
  }
  check(cfg.flux_name == "p_laplacian", "flux.name must be p_laplacian");
  check(!cfg.delta_reg || (*cfg.delta_reg >= 0.0 && std::isfinite(*cfg.delta_reg)), "flux.delta_reg must be >= 0");
  check(cfg.convection_name == "none" || cfg.convection_name == "growth" || cfg.convection_name == "lipschitz",
        "convection.name must be none, growth or lipschitz");
  check(cfg.convection_c0 >= 0.0 && std::isfinite(cfg.convection_c0), "convection.c0 must be >= 0");
  check(cfg.convection_cap > 0.0, "convection.cap must be positive");
  check(cfg.data.amplitude >= 0.0 && std::isfinite(cfg.data.amplitude), "data.amplitude must be >= 0");
  check(std::isfinite(cfg.data.forcing), "data.forcing must be finite");
  check(cfg.data.width > 0.0, "data.width must be positive");
  try {
    cfg.schedule.validate();
    (void)build_base_grid(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const auto& d = cfg.diagnostics;
  check(strictly_increasing_positive(d.energy_k), "diagnostics.truncation_energy.k must be positive and increasing");
  check(d.energy_max_ratio >= 1.0, "diagnostics.truncation_energy.max_ratio must be >= 1");
  check(d.lorentz_max_growth > 0.0, "diagnostics.lorentz_apriori.max_growth must be positive");
  check(strictly_increasing_positive(d.tail_n), "diagnostics.tail_energies.n must be positive and increasing");
  check(d.tail_slack >= 0.0, "diagnostics.tail_energies.slack must be >= 0");
  check(d.residual_M >= 0.0, "diagnostics.renormalized_residual.M must be positive or auto");
  check(d.residual_levels >= 2 && d.residual_levels <= 5, "diagnostics.renormalized_residual.levels must be in [2, 5]");
  check(d.gradient_k > 0.0, "diagnostics.gradient_convergence.k must be positive");
  check(d.uniqueness_s >= 0.0, "diagnostics.uniqueness_gap.s must be positive or auto");
  check(d.uniqueness_sigma > 0.0, "diagnostics.uniqueness_gap.sigma must be positive");
  check(d.uniqueness_k_small > 0.0, "diagnostics.uniqueness_gap.k_small must be positive");
  check(d.uniqueness_factor > 0.0, "diagnostics.uniqueness_gap.factor must be positive");
  check(d.time_reg_k > 0.0, "diagnostics.time_regularization.k must be positive");
  check(strictly_increasing_positive(d.time_reg_mu), "diagnostics.time_regularization.mu must be positive and increasing");
}

std::string echo_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& k : key_table()) out << k.name << " = " << k.get(cfg) << '\n';
  return out.str();
}

ProblemModels build_models(const RunConfig& cfg) {
  const int dim = cfg.domain.dim;
  const Exponents ex = exponents(cfg.p, dim);
  ProblemModels m{p_laplacian_flux(cfg.p, cfg.delta_reg.value_or(default_delta_reg(cfg.p))), no_convection()};
  if (cfg.convection_name == "growth")
    m.convection = growth_convection(cfg.convection_c0, cfg.convection_cap, ex, dim);
  else if (cfg.convection_name == "lipschitz")
    m.convection = lipschitz_convection(cfg.convection_c0, ex, dim);
  return m;
}

RoughData build_data(const RunConfig& cfg) { return make_data(cfg.data, cfg.domain, cfg.T); }

std::shared_ptr<const Grid> build_base_grid(const RunConfig& cfg) {
  return std::make_shared<const Grid>(build_grid(cfg.domain, cfg.n_cells, cfg.boundary, cfg.T, cfg.n_steps));
}

}  // namespace renorm
