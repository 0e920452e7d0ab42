#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vcd::cli {

/// Runs one subcommand. Returns 0 on success, 1 on metric/IO errors and
/// 2 on usage errors; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vcd::cli
