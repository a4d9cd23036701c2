#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "renorm/config.hpp"
#include "renorm/runner.hpp"
#include "renorm/snapshot.hpp"

using namespace renorm;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ConfigError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("unreachable");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(RENORM_TEST_OUTPUT_DIR) / name;
  fs::remove_all(p);
  return p;
}

RunOutcome run_quiet(const RunConfig& cfg, const fs::path& dir) {
  RunOptions opts;
  opts.output_dir = dir.string();
  opts.quiet = true;
  std::ostringstream log, err;
  return run(cfg, opts, log, err);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults and basic parsing") {
    const RunConfig c = parse("# comment\nproblem.p = 3   # trailing\nschedule.eps = 0.4 0.2\n");
    CHECK(c.p == 3.0);
    CHECK(c.schedule.eps_list == std::vector<double>{0.4, 0.2});
    CHECK(c.n_steps == 100);
    CHECK(c.diagnostics.list == std::vector<std::string>{"truncation_energy"});
    CHECK_FALSE(c.delta_reg.has_value());
    CHECK(parse("flux.delta_reg = 0.01\n").delta_reg == 0.01);
  }

  TEST_CASE("errors carry line and column") {
    const ConfigError unknown = parse_error("problem.p = 2\n  problem.q = 3\n");
    CHECK(unknown.line() == 2);
    CHECK(unknown.column() == 3);
    CHECK(std::string(unknown.what()).find("line 2, column 3") != std::string::npos);

    const ConfigError bad_number = parse_error("problem.T = abc\n");
    CHECK(bad_number.line() == 1);
    CHECK(bad_number.column() == 13);

    const ConfigError missing = parse_error("\nproblem.T =\n");
    CHECK(missing.line() == 2);

    const ConfigError dup = parse_error("problem.T = 1\nproblem.T = 2\n");
    CHECK(dup.line() == 2);

    CHECK_THROWS_AS(parse("diagnostics.list = truncation_energy nonsense\n"), ConfigError);
    CHECK_THROWS_AS(parse("data.kind = sawtooth\n"), ConfigError);
    CHECK_THROWS_AS(parse("problem.n_cells = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
  }

  TEST_CASE("exponent p must exceed 1") {
    CHECK_THROWS_AS(parse("problem.p = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("problem.p = 1\n"), ConfigError);
    RunConfig c;
    c.p = 0.5;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }

  TEST_CASE("echo round trip") {
    for (const char* name : {"heat_smoke.cfg", "bump_energy.cfg", "smooth_renorm.cfg", "uniqueness.cfg"}) {
      const RunConfig c = load_config(std::string(RENORM_CONFIG_DIR) + "/" + name);
      const std::string echo = echo_config(c);
      CHECK(echo_config(parse(echo)) == echo);
    }
    RunConfig c;
    c.domain.dim = 2;
    c.n_cells = {8, 6};
    c.delta_reg = 1e-6;
    c.diagnostics.uniqueness_v_n_cells = {16, 12};
    const std::string echo = echo_config(c);
    const RunConfig back = parse(echo);
    CHECK(back.n_cells == c.n_cells);
    CHECK(back.delta_reg == 1e-6);
    CHECK(back.diagnostics.uniqueness_v_n_cells == c.diagnostics.uniqueness_v_n_cells);
  }

  TEST_CASE("heat smoke run writes its outputs") {
    const fs::path dir = scratch("config_heat");
    const RunOutcome out = run_quiet(load_config(std::string(RENORM_CONFIG_DIR) + "/heat_smoke.cfg"), dir);
    CHECK(out.exit_code == exit_code::ok);
    CHECK(out.report.entries.size() >= 6);
    CHECK(out.report.all_pass());
    for (const char* f : {"diagnostics.csv", "summary.txt", "effective.cfg", "u_eps0.snap", "u_eps2.snap"})
      CHECK(fs::exists(dir / f));
    const std::string csv = slurp(dir / "diagnostics.csv");
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const Field u = read_snapshot((dir / "u_eps2.snap").string());
    CHECK(u.grid().n_nodes() == 65);
  }

  TEST_CASE("repeated runs are byte identical") {
    RunConfig c = load_config(std::string(RENORM_CONFIG_DIR) + "/smooth_renorm.cfg");
    const fs::path a = scratch("config_repeat_a"), b = scratch("config_repeat_b");
    REQUIRE(run_quiet(c, a).exit_code == exit_code::ok);
    REQUIRE(run_quiet(c, b).exit_code == exit_code::ok);
    CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
    for (int i = 0; i < 3; ++i) {
      const std::string f = "u_eps" + std::to_string(i) + ".snap";
      CHECK(slurp(a / f) == slurp(b / f));
    }
  }

  TEST_CASE("mismatched uniqueness grid fails the diagnostic") {
    RunConfig c = load_config(std::string(RENORM_CONFIG_DIR) + "/uniqueness.cfg");
    c.diagnostics.uniqueness_v_n_cells = {48, 1};
    const RunOutcome out = run_quiet(c, scratch("config_mismatch"));
    CHECK(out.exit_code == exit_code::diagnostic_failure);
    bool found = false;
    for (const auto& e : out.report.entries)
      if (e.name == "uniqueness_gap_error") found = e.verdict == Verdict::fail;
    CHECK(found);
  }

  TEST_CASE("digest") {
    CHECK(digest("") == "cbf29ce484222325");
    CHECK(digest("a") == "af63dc4c8601ec8c");
  }
}
