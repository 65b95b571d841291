#pragma once

#include <functional>
#include <vector>

namespace mcalc {

// Controls for one-sided limits and finite-difference gradients.
struct FDConfig {
    double step0 = 1e-2;           // coarsest step of the one-sided ladder
    int levels = 6;                // ladder uses s_k = step0 * 2^-k, k = 0..levels
    int richardson_order = 2;      // extrapolation passes applied to the ladder
    double tol = 1e-6;             // convergence: |last - prev| <= tol * (1 + |last|)
    double spread_threshold = 0.5; // raw-ladder spread at which we flag oscillation
    double grad_step = 1e-5;       // central-difference scale, h = grad_step * (1 + |x|)
    bool grad_richardson = false;  // extra two-level extrapolation on gradient stencils

    std::vector<double> schedule() const;  // the s_k, coarsest first
    void validate() const;                 // throws input_error
};

// Outcome of a one-sided limit lim_{s->0+} q(s).
struct DerivativeEstimate {
    double value = 0.0;
    std::vector<double> ladder;  // raw quotients q(s_k), coarsest first
    bool converged = false;
    double spread = 0.0;         // max - min over the raw ladder
    bool oscillating = false;    // not converged and spread >= threshold
};

// One extrapolation sweep per order: r_k <- (2^j r_{k+1} - r_k) / (2^j - 1),
// matching the step halving of FDConfig::schedule.  Returns the final column.
std::vector<double> richardson_ladder(const std::vector<double>& quotients, int order);

// Extrapolates + classifies a raw ladder.  Throws numeric_error on non-finite
// entries; never throws for slow convergence (that is what the flags are for).
DerivativeEstimate settle_ladder(std::vector<double> quotients, const FDConfig& cfg);

// Builds the ladder by evaluating quotient(s_k) over the schedule.
DerivativeEstimate one_sided_limit(const std::function<double(double)>& quotient,
                                   const FDConfig& cfg);

}  // namespace mcalc
