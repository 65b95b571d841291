#include "mcalc/quadrature.hpp"

#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw input_error("gauss_legendre: node count must be positive");
    GaussLegendre rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    for (int k = 0; k < (n + 1) / 2; ++k) {
        // Chebyshev-based starting guess, then Newton on P_n.
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[k] = -x;  // ascending order
        rule.weights[k] = w;
        rule.nodes[n - 1 - k] = x;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact midpoint for odd rules
    return rule;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    auto rule = gauss_legendre(n);
    double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * acc;
}

}  // namespace mcalc
