#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mcalc/measures.hpp"

namespace mcalc {

// Declared smoothness/growth class of a functional, ordered roughly by how
// much the verification checks may assume of it.
enum class Regularity { None, L1Only, E1K, E11, E11B };

std::string to_string(Regularity r);

// A functional of measures with optional analytic derivative hooks.  Hooks,
// when present, are trusted over finite differences; the test-suite cross
// checks them against the quotient machinery on random instances.
struct Functional {
    std::string name;
    std::function<double(const ParticleMeasure&)> eval;
    // x -> derivative of s |-> f(eta + s*delta_x) at s = 0+.
    std::function<double(const ParticleMeasure&, const Point&)> extrinsic;
    // Riemannian x-gradient of the extrinsic derivative.
    std::function<TangentVector(const ParticleMeasure&, const Point&)> grad_extrinsic;
    Regularity tag = Regularity::None;
};

// f(eta) = outer(eta(inner_1), ..., eta(inner_n)).
struct CylindricalSpec {
    std::string name;
    std::function<double(const std::vector<double>&)> outer;
    std::function<std::vector<double>(const std::vector<double>&)> outer_grad;
    std::vector<ScalarField> inner;
    bool bounded_inner_gradients = false;  // upgrades the tag from E11 to E11B
};

// Derivative hooks follow the chain rule: extrinsic is sum_i d_i outer * inner_i(x),
// its gradient sum_i d_i outer * grad inner_i(x) (attached only when every
// inner field carries a gradient hook).
Functional make_cylindrical(const CylindricalSpec& spec);

// Inner-field constructors.
ScalarField coordinate_field(const Manifold& m, int axis);
// rho_o^k; the gradient hook returns 0 at the origin (the correct limit for
// k >= 2) and raises domain_error at the spherical cut locus of o.
ScalarField dist_origin_power(const Manifold& m, double k);

// Catalog: total_mass | moment:<k> | first_moment_squared | sphere_height |
// oscillator_mass.  first_moment_squared is eta(x_0)^2, sphere_height is
// eta(x_3) on sphere:3; oscillator_mass is the kinked-oscillation example
// psi(eta(M)) with psi(t) = (t-2) sin(ln|t-2|) and carries no hooks.
Functional builtin_functional(const Manifold& m, const std::string& name);

// Smooth cutoff: 1 on [1/2,3/2], 0 outside (1/4,2), exp(-1/t)-style ramps.
double bump_h(double r);
double bump_h_prime(double r);

// f_tilde(eta) = bump_h(eta(M)) * f(eta / eta(M)); evaluates to 0 when the
// total mass is outside the bump support (no normalization of tiny masses).
// Restriction to unit-mass measures reproduces f.
Functional probability_extension(const Functional& f);

// A density curve r |-> 1 + h(r, .) used by the reweighting identity.
struct DensityPerturbation {
    double eps0 = 0.0;                                 // h is defined for r in [0, eps0]
    std::function<double(double, const Point&)> h;     // h(0, .) = 0
    std::function<double(double, const Point&)> hdot;  // one-sided d/dr h

    // 1 + h(r, x); throws input_error if the density dips below 0.
    double density(double r, const Point& x) const;
};

// h(r, x) = r * b(x).  b may take either sign; the density stays admissible
// as long as eps0 * max(0, -min b) <= 1.
DensityPerturbation linear_perturbation(const ScalarField& b, double eps0);

// Copy of f with the analytic hooks removed (forces quotient/FD code paths).
Functional strip_hooks(const Functional& f);

}  // namespace mcalc
