#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcalc/verification.hpp"

namespace mcalc {

// Shared knobs for the seeded verification suites.
struct SuiteOptions {
    std::vector<Manifold> manifolds;  // empty selects euclidean:1, euclidean:2, sphere:3
    std::uint64_t seed = 42;
    FDConfig fd;
    FlowConfig flow;
    double tol_override = 0.0;  // > 0 replaces every per-check tolerance
};

// Canonical suite order (also the expansion of "all").
const std::vector<std::string>& suite_names();

std::vector<VerificationReport> run_suite(const std::string& name, const SuiteOptions& opts);

// Expands "all", rejects unknown names, drops repeats, concatenates reports
// in request order.  A suite with no instances for the selected manifolds
// contributes a single passing placeholder entry so reports are never empty.
std::vector<VerificationReport> run_suites(const std::vector<std::string>& names,
                                           const SuiteOptions& opts);

}  // namespace mcalc
