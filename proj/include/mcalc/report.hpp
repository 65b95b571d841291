#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcalc/verification.hpp"

namespace mcalc {

// Provenance of a verify run, echoed into the report so results can be
// reproduced from the file alone.  No clocks anywhere: identical inputs must
// produce byte-identical reports.
struct RunMetadata {
    std::uint64_t seed = 42;
    std::vector<std::string> suites;
    std::vector<std::string> manifolds;
};

enum class ReportFormat { Json, Csv };

// Shortest round-trippable decimal form (printf %.17g).
std::string format_g17(double v);

std::string to_json(const std::vector<VerificationReport>& reports, const RunMetadata& meta);

// Header: identity,instance,lhs,rhs,residual,tolerance,pass
// The instance column carries instance_hash() so rows stay parseable no
// matter what punctuation the descriptor uses.
std::string to_csv(const std::vector<VerificationReport>& reports);

// Writes to `path`, or stdout when path is empty.  Empty report lists and
// unwritable paths raise input_error.
void emit_report(const std::vector<VerificationReport>& reports, const RunMetadata& meta,
                 const std::string& path, ReportFormat format);

}  // namespace mcalc
