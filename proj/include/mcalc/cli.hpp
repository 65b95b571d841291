#pragma once

namespace mcalc {

// Full command-line entry point (verbs: verify, compute).  Returns the
// process exit status: 0 all checks passed / value computed, 1 at least one
// identity failed, 2 configuration or usage error.
int run_cli(int argc, char** argv);

}  // namespace mcalc
