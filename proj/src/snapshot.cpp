#include "renorm/snapshot.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "renorm/errors.hpp"

namespace renorm {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* tag_name(BoundaryTag t) { return t == BoundaryTag::dirichlet ? "dirichlet" : "neumann"; }

BoundaryTag parse_tag(const std::string& s) {
  if (s == "dirichlet") return BoundaryTag::dirichlet;
  if (s == "neumann") return BoundaryTag::neumann;
  throw SnapshotError("snapshot: unknown boundary tag '" + s + "'");
}

double parse_double(const std::string& token) {
  // strtod handles the full %.17g round trip, including inf/nan spellings.
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size())
    throw SnapshotError("snapshot: bad number '" + token + "'");
  return v;
}

std::size_t parse_count(const std::string& token) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw SnapshotError("snapshot: bad count '" + token + "'");
  return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& field) {
  const Grid& g = field.grid();
  const auto nodes = g.nodes_per_axis();
  out << "# dim " << g.dim() << '\n';
  out << "# nodes " << nodes[0];
  if (g.dim() == 2) out << ' ' << nodes[1];
  out << '\n';
  out << "# dt " << format_double(g.dt()) << '\n';
  out << "# n_steps " << g.n_steps() << '\n';
  out << "# T " << format_double(g.T()) << '\n';
  const auto& d = g.domain();
  out << "# domain " << format_double(d.x[0]) << ' ' << format_double(d.x[1]);
  if (g.dim() == 2) out << ' ' << format_double(d.y[0]) << ' ' << format_double(d.y[1]);
  out << '\n';
  const auto& b = g.boundary();
  out << "# boundary " << tag_name(b.left) << ' ' << tag_name(b.right);
  if (g.dim() == 2) out << ' ' << tag_name(b.bottom) << ' ' << tag_name(b.top);
  out << '\n';
  for (std::size_t n = 0; n < field.n_levels(); ++n) {
    const auto row = field.slice(n);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void write_snapshot(const std::string& path, const Field& field) {
  std::ofstream out(path);
  if (!out) throw SnapshotError("cannot open snapshot for writing: " + path);
  write_snapshot(out, field);
  if (!out) throw SnapshotError("failed writing snapshot: " + path);
}

Field read_snapshot(std::istream& in) {
  std::map<std::string, std::vector<std::string>> header;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key, tok;
      ls >> hash >> key;
      if (key.empty()) throw SnapshotError("snapshot: empty header line");
      std::vector<std::string> vals;
      while (ls >> tok) vals.push_back(tok);
      header[key] = vals;
      continue;
    }
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_double(tok));
    rows.push_back(std::move(row));
  }
  for (const char* key : {"dim", "nodes", "dt", "n_steps"})
    if (!header.count(key) || header[key].empty())
      throw SnapshotError(std::string("snapshot: missing header '# ") + key + "'");

  DomainSpec dom;
  dom.dim = static_cast<int>(parse_count(header["dim"][0]));
  if (dom.dim != 1 && dom.dim != 2) throw SnapshotError("snapshot: dim must be 1 or 2");
  const auto& nodes = header["nodes"];
  if (nodes.size() != static_cast<std::size_t>(dom.dim)) throw SnapshotError("snapshot: bad '# nodes'");
  std::array<int, 2> cells{static_cast<int>(parse_count(nodes[0])) - 1,
                           dom.dim == 2 ? static_cast<int>(parse_count(nodes[1])) - 1 : 1};
  const double dt = parse_double(header["dt"][0]);
  const std::size_t n_steps = parse_count(header["n_steps"][0]);
  const double T = header.count("T") ? parse_double(header["T"].at(0)) : dt * static_cast<double>(n_steps);
  if (header.count("domain")) {
    const auto& v = header["domain"];
    if (v.size() != static_cast<std::size_t>(2 * dom.dim)) throw SnapshotError("snapshot: bad '# domain'");
    dom.x = {parse_double(v[0]), parse_double(v[1])};
    if (dom.dim == 2) dom.y = {parse_double(v[2]), parse_double(v[3])};
  }
  BoundarySpec bnd;
  if (header.count("boundary")) {
    const auto& v = header["boundary"];
    if (v.size() != static_cast<std::size_t>(2 * dom.dim)) throw SnapshotError("snapshot: bad '# boundary'");
    bnd.left = parse_tag(v[0]);
    bnd.right = parse_tag(v[1]);
    if (dom.dim == 2) {
      bnd.bottom = parse_tag(v[2]);
      bnd.top = parse_tag(v[3]);
    }
  }

  std::shared_ptr<const Grid> grid;
  try {
    grid = std::make_shared<const Grid>(build_grid(dom, cells, bnd, T, n_steps));
  } catch (const DomainError& e) {
    throw SnapshotError(std::string("snapshot: inconsistent header: ") + e.what());
  }
  if (rows.size() != n_steps + 1) throw SnapshotError("snapshot: expected n_steps + 1 rows of values");
  Field field(grid);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (rows[n].size() != grid->n_nodes()) throw SnapshotError("snapshot: row has wrong number of values");
    std::copy(rows[n].begin(), rows[n].end(), field.slice(n).begin());
  }
  return field;
}

Field read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SnapshotError("cannot open snapshot: " + path);
  return read_snapshot(in);
}

}  // namespace renorm
