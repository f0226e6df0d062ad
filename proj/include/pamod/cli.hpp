#ifndef PAMOD_CLI_HPP
#define PAMOD_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pamod/subset.hpp"

namespace pamod {

enum ExitCode : int {
  exit_ok = 0,
  exit_io = 1,
  exit_validation = 2,
  exit_capacity = 3,
};

/// Parses `all`, `none`, `prefix:k`, `ids:1,5,9` or `@file` (one id per line,
/// blank lines and `#` comments ignored). Throws std::invalid_argument for a
/// malformed spec and io_error for an unreadable file.
VertexSubset parse_subset_spec(std::string_view spec, vertex_t n, std::uint32_t h);

/// Runs one invocation; `args` excludes the program name. JSON goes to `out`,
/// diagnostics (and --verbose summaries) to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pamod

#endif  // PAMOD_CLI_HPP
