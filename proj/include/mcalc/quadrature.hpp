#pragma once

#include <functional>
#include <vector>

namespace mcalc {

// Gauss-Legendre rule on [-1,1], exact for polynomials of degree 2n-1.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);

// \int_a^b f using the n-node rule mapped onto [a,b].
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace mcalc
