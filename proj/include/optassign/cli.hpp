#pragma once

namespace optassign {

/// Command-line entry point (gen / solve / verify / bench / compare).
/// Returns 0 on success, 1 when `verify` finds an unstable matching, 2 on
/// usage errors and 3 on runtime failures.
int cli_main(int argc, const char* const* argv);

}  // namespace optassign
