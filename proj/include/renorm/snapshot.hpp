#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "renorm/grid.hpp"

namespace renorm {

/// Malformed or truncated snapshot text.
class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text snapshot: header lines `# dim`, `# nodes`, `# dt`, `# n_steps`, followed by the
/// optional `# T`, `# domain` and `# boundary` lines, then one row of nodal values per
/// time level printed with 17 significant digits. Reading it back is bit-exact.
void write_snapshot(std::ostream& out, const Field& field);
void write_snapshot(const std::string& path, const Field& field);

Field read_snapshot(std::istream& in);
Field read_snapshot(const std::string& path);

}  // namespace renorm
