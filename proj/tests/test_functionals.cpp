#include <cmath>

#include "doctest.h"
#include "mcalc/calculus.hpp"
#include "mcalc/errors.hpp"
#include "mcalc/functionals.hpp"

using namespace mcalc;

namespace {

const Manifold E1 = Manifold::euclidean(1);
const Manifold E2 = Manifold::euclidean(2);
const Manifold S3 = Manifold::sphere(3);

Point pt(std::vector<double> c) { return Point{std::move(c)}; }

ParticleMeasure unit_pair() {
    return ParticleMeasure(E1, {{1.0, pt({0.0})}, {1.0, pt({1.0})}});
}

}  // namespace

TEST_CASE("total_mass carries exact hooks") {
    Functional f = builtin_functional(E2, "total_mass");
    CHECK(f.tag == Regularity::E11B);
    ParticleMeasure mu(E2, {{0.5, pt({1.0, 2.0})}, {1.75, pt({-1.0, 0.0})}});
    CHECK(f.eval(mu) == doctest::Approx(2.25));
    CHECK(f.extrinsic(mu, pt({3.0, 3.0})) == 1.0);
    TangentVector g = f.grad_extrinsic(mu, pt({3.0, 3.0}));
    CHECK(g.norm() == 0.0);
}

TEST_CASE("second moment on the line") {
    Functional f = builtin_functional(E1, "moment:2");
    CHECK(f.tag == Regularity::E11);  // unbounded gradient on euclidean space
    ParticleMeasure eta = ParticleMeasure::dirac(E1, 1.0, pt({3.0}));
    CHECK(f.eval(eta) == doctest::Approx(9.0));
    CHECK(f.extrinsic(eta, pt({-2.0})) == doctest::Approx(4.0));
    TangentVector g = f.grad_extrinsic(eta, pt({3.0}));
    CHECK(g.components[0] == doctest::Approx(6.0));

    CHECK(builtin_functional(S3, "moment:2").tag == Regularity::E11B);
    CHECK_THROWS_AS(builtin_functional(E1, "moment:abc"), input_error);
    CHECK_THROWS_AS(builtin_functional(E1, "moment:2x"), input_error);
    CHECK_THROWS_AS(builtin_functional(E1, "nope"), input_error);
}

TEST_CASE("first_moment_squared hook matches the quotient limit") {
    Functional f = builtin_functional(E1, "first_moment_squared");
    CHECK(f.tag == Regularity::E11B);
    ParticleMeasure eta = unit_pair();
    CHECK(f.eval(eta) == doctest::Approx(1.0));
    double hook = f.extrinsic(eta, pt({3.0}));
    CHECK(hook == doctest::Approx(6.0));
    // quotient ((1+3s)^2 - 1)/s is affine in s; the extrapolation is exact
    DerivativeEstimate est = extrinsic_fd(strip_hooks(f), eta, pt({3.0}), FDConfig{});
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(hook).epsilon(1e-9));
}

TEST_CASE("sphere_height is the third coordinate") {
    Functional f = builtin_functional(S3, "sphere_height");
    ParticleMeasure eta = ParticleMeasure::dirac(S3, 1.0, pt({0.0, 0.0, 1.0}));
    CHECK(f.eval(eta) == doctest::Approx(1.0));
    CHECK(f.extrinsic(eta, pt({1.0, 0.0, 0.0})) == doctest::Approx(0.0));
    TangentVector g = f.grad_extrinsic(eta, pt({1.0, 0.0, 0.0}));
    CHECK(g.components[0] == doctest::Approx(0.0));
    CHECK(g.components[2] == doctest::Approx(1.0));
    // at the pole the height gradient projects to zero
    CHECK(f.grad_extrinsic(eta, pt({0.0, 0.0, 1.0})).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(builtin_functional(E2, "sphere_height"), input_error);
    CHECK_THROWS_AS(builtin_functional(Manifold::sphere(4), "sphere_height"), input_error);
}

TEST_CASE("oscillator_mass evaluates psi of the total mass") {
    Functional f = builtin_functional(E1, "oscillator_mass");
    CHECK(f.tag == Regularity::L1Only);
    CHECK(!f.extrinsic);
    CHECK(!f.grad_extrinsic);

    auto at_mass = [&](double m) {
        return f.eval(ParticleMeasure::dirac(E1, m, pt({0.0})));
    };
    CHECK(at_mass(3.0) == doctest::Approx(0.0));           // sin(log 1) = 0
    CHECK(at_mass(2.0) == 0.0);                            // exact kink value
    double u = std::exp(3.14159265358979323846 / 2.0);
    CHECK(at_mass(2.0 + u) == doctest::Approx(u).epsilon(1e-12));
    double v = std::exp(-3.14159265358979323846 / 2.0);
    CHECK(at_mass(2.0 - v) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("distance-power fields") {
    ScalarField rho2 = dist_origin_power(E1, 2.0);
    CHECK(rho2.value(pt({3.0})) == doctest::Approx(9.0));
    CHECK(rho2.gradient(pt({3.0})).components[0] == doctest::Approx(6.0));
    CHECK(rho2.gradient(pt({0.0})).norm() == 0.0);  // limit at the origin

    ScalarField srho = dist_origin_power(S3, 2.0);
    CHECK(srho.value(pt({1.0, 0.0, 0.0})) ==
          doctest::Approx(std::pow(3.14159265358979323846 / 2.0, 2.0)));
    // gradient is undefined at the cut locus of the origin
    CHECK_THROWS_AS(srho.gradient(pt({0.0, 0.0, -1.0})), domain_error);

    CHECK_THROWS_AS(dist_origin_power(E1, 0.5), input_error);

    ScalarField c0 = coordinate_field(E2, 0);
    CHECK(c0.value(pt({4.0, -1.0})) == 4.0);
    CHECK_THROWS_AS(coordinate_field(E2, 2), input_error);
    CHECK_THROWS_AS(coordinate_field(E2, -1), input_error);
}

TEST_CASE("cylindrical composition validates and chains correctly") {
    CylindricalSpec bad;
    bad.name = "bad";
    CHECK_THROWS_AS(make_cylindrical(bad), input_error);  // no outer map

    CylindricalSpec prod;
    prod.name = "prod";
    prod.outer = [](const std::vector<double>& t) { return t[0] * t[1]; };
    prod.outer_grad = [](const std::vector<double>& t) {
        return std::vector<double>{t[1], t[0]};
    };
    prod.inner = {coordinate_field(E2, 0), dist_origin_power(E2, 2.0)};
    Functional f = make_cylindrical(prod);
    CHECK(f.tag == Regularity::E11);

    ParticleMeasure eta(E2, {{1.0, pt({1.0, 0.0})}, {0.5, pt({2.0, 2.0})}});
    // t = (1*1 + 0.5*2, 1*1 + 0.5*8) = (2, 5)
    CHECK(f.eval(eta) == doctest::Approx(10.0));
    Point x = pt({-1.0, 3.0});
    CHECK(f.extrinsic(eta, x) == doctest::Approx(5.0 * -1.0 + 2.0 * 10.0));

    DerivativeEstimate est = extrinsic_fd(strip_hooks(f), eta, x, FDConfig{});
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(f.extrinsic(eta, x)).epsilon(1e-7));

    TangentVector g = f.grad_extrinsic(eta, x);
    // 5 * e_0 + 2 * (2x) at x = (-1, 3)
    CHECK(g.components[0] == doctest::Approx(5.0 + 2.0 * -2.0));
    CHECK(g.components[1] == doctest::Approx(2.0 * 6.0));
}

TEST_CASE("bump profile values and derivative") {
    CHECK(bump_h(0.25) == 0.0);
    CHECK(bump_h(0.2) == 0.0);
    CHECK(bump_h(2.0) == 0.0);
    CHECK(bump_h(3.0) == 0.0);
    CHECK(bump_h(0.5) == 1.0);
    CHECK(bump_h(1.0) == 1.0);
    CHECK(bump_h(1.5) == 1.0);
    CHECK(bump_h(0.375) == doctest::Approx(0.5));   // symmetric point of the ramp
    CHECK(bump_h(1.75) == doctest::Approx(0.5));
    CHECK(bump_h(0.3) == doctest::Approx(1.0 / (1.0 + std::exp(15.0 / 4.0))));

    CHECK(bump_h_prime(1.0) == 0.0);
    CHECK(bump_h_prime(0.25) == 0.0);
    CHECK(bump_h_prime(2.0) == 0.0);
    for (double r : {0.3, 0.42, 1.6, 1.9}) {
        double h = 1e-6;
        double fd = (bump_h(r + h) - bump_h(r - h)) / (2.0 * h);
        CHECK(bump_h_prime(r) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(bump_h_prime(0.3) > 0.0);
    CHECK(bump_h_prime(1.9) < 0.0);
}

TEST_CASE("probability extension restricts to the original on unit mass") {
    Functional base = builtin_functional(E1, "first_moment_squared");
    Functional ext = probability_extension(base);
    ParticleMeasure unit = unit_pair().scaled(0.5);  // mass 1
    CHECK(ext.eval(unit) == doctest::Approx(base.eval(unit)));
    CHECK(ext.extrinsic(unit, pt({2.0})) ==
          doctest::Approx(base.extrinsic(unit, pt({2.0})) -
                          integrate(unit, [&](const Point& y) {
                              return base.extrinsic(unit, y);
                          })));

    CHECK(ext.eval(ParticleMeasure::dirac(E1, 3.0, pt({1.0}))) == 0.0);
    CHECK(ext.eval(ParticleMeasure::dirac(E1, 0.2, pt({1.0}))) == 0.0);
}

TEST_CASE("probability extension hooks agree with quotients off unit mass") {
    Functional ext = probability_extension(builtin_functional(E1, "first_moment_squared"));
    Point x = pt({0.8});
    // flat region of the bump: only the normalization term contributes
    ParticleMeasure flat(E1, {{0.7, pt({0.5})}, {0.5, pt({2.0})}});
    CHECK(ext.extrinsic(flat, x) == doctest::Approx(-0.609375));
    DerivativeEstimate est = extrinsic_fd(strip_hooks(ext), flat, x, FDConfig{});
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(ext.extrinsic(flat, x)).epsilon(1e-6));

    // ramp region: the mass derivative of the bump joins in
    ParticleMeasure ramp(E1, {{1.0, pt({0.5})}, {0.7, pt({2.0})}});
    DerivativeEstimate est2 = extrinsic_fd(strip_hooks(ext), ramp, x, FDConfig{});
    CHECK(est2.converged);
    CHECK(est2.value == doctest::Approx(ext.extrinsic(ramp, x)).epsilon(1e-5));

    TangentVector g = ext.grad_extrinsic(ramp, x);
    CHECK(g.components[0] != 0.0);
    CHECK_THROWS_AS(probability_extension(Functional{}), input_error);
}

TEST_CASE("density perturbations stay admissible") {
    ScalarField b;
    b.value = [](const Point& p) { return p.coords[0]; };
    DensityPerturbation pert = linear_perturbation(b, 0.25);
    Point x = pt({2.0});
    CHECK(pert.density(0.0, x) == doctest::Approx(1.0));
    CHECK(pert.density(0.2, x) == doctest::Approx(1.4));
    CHECK(pert.hdot(0.1, x) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pert.density(0.3, x), input_error);   // past eps0
    CHECK_THROWS_AS(pert.density(-0.1, x), input_error);
    CHECK_THROWS_AS(pert.density(0.25, pt({-5.0})), input_error);  // 1 - 1.25 < 0

    CHECK_THROWS_AS(linear_perturbation(b, 0.0), input_error);
    CHECK_THROWS_AS(linear_perturbation(ScalarField{}, 0.1), input_error);
}

TEST_CASE("strip_hooks forces the quotient path") {
    Functional f = builtin_functional(E1, "first_moment_squared");
    Functional g = strip_hooks(f);
    CHECK(g.name == "first_moment_squared[fd]");
    CHECK(!g.extrinsic);
    CHECK(!g.grad_extrinsic);
    CHECK(g.tag == f.tag);
    ParticleMeasure eta = unit_pair();
    CHECK(g.eval(eta) == f.eval(eta));
}
