#pragma once

#include <iosfwd>

namespace symplopt::acceptance {

/// Runs the full verification suite, printing one pass/fail line per
/// criterion to `out`. Returns the number of failed criteria (0 on a clean
/// run), which doubles as the CLI exit code of `spbench check`.
int run_all(std::ostream& out);

}  // namespace symplopt::acceptance
