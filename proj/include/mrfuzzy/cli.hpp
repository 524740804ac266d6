#pragma once

#include <iosfwd>

namespace mrfuzzy {

/// Entry point of the mrfuzzy tool. Subcommands: fit, predict, bench, report.
/// Returns 0 on success, 1 on a usage error, 2 on a data error and 3 on a
/// numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace mrfuzzy
