#include "mcalc/fd.hpp"

#include <algorithm>
#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

std::vector<double> FDConfig::schedule() const {
    validate();
    std::vector<double> s(static_cast<std::size_t>(levels) + 1);
    double cur = step0;
    for (auto& v : s) {
        v = cur;
        cur *= 0.5;
    }
    return s;
}

void FDConfig::validate() const {
    if (!(step0 > 0.0) || !std::isfinite(step0)) throw input_error("FDConfig: step0 must be positive and finite");
    if (levels < 2) throw input_error("FDConfig: need at least two halvings (levels >= 2)");
    if (richardson_order < 0 || richardson_order > levels - 1)
        throw input_error("FDConfig: richardson_order must lie in [0, levels-1]");
    if (!(tol > 0.0)) throw input_error("FDConfig: tol must be positive");
    if (!(spread_threshold > 0.0)) throw input_error("FDConfig: spread_threshold must be positive");
    if (!(grad_step > 0.0)) throw input_error("FDConfig: grad_step must be positive");
}

std::vector<double> richardson_ladder(const std::vector<double>& quotients, int order) {
    if (quotients.empty()) throw input_error("richardson_ladder: empty ladder");
    if (order < 0 || static_cast<std::size_t>(order) >= quotients.size())
        throw input_error("richardson_ladder: order incompatible with ladder length");
    std::vector<double> col = quotients;
    for (int j = 1; j <= order; ++j) {
        double f = std::pow(2.0, j);
        for (std::size_t k = 0; k + 1 < col.size(); ++k) col[k] = (f * col[k + 1] - col[k]) / (f - 1.0);
        col.pop_back();
    }
    return col;
}

DerivativeEstimate settle_ladder(std::vector<double> quotients, const FDConfig& cfg) {
    cfg.validate();
    if (quotients.size() != static_cast<std::size_t>(cfg.levels) + 1)
        throw input_error("settle_ladder: ladder length disagrees with the schedule");
    for (double q : quotients)
        if (!std::isfinite(q)) throw numeric_error("settle_ladder: non-finite quotient");

    DerivativeEstimate est;
    est.ladder = std::move(quotients);
    auto [mn, mx] = std::minmax_element(est.ladder.begin(), est.ladder.end());
    est.spread = *mx - *mn;

    auto col = richardson_ladder(est.ladder, cfg.richardson_order);
    est.value = col.back();
    double step = std::abs(col[col.size() - 1] - col[col.size() - 2]);
    est.converged = step <= cfg.tol * (1.0 + std::abs(est.value));
    est.oscillating = !est.converged && est.spread >= cfg.spread_threshold;
    return est;
}

DerivativeEstimate one_sided_limit(const std::function<double(double)>& quotient,
                                   const FDConfig& cfg) {
    auto steps = cfg.schedule();
    std::vector<double> ladder;
    ladder.reserve(steps.size());
    for (double s : steps) ladder.push_back(quotient(s));
    return settle_ladder(std::move(ladder), cfg);
}

}  // namespace mcalc
