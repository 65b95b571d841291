#include <cmath>

#include "doctest.h"
#include "mcalc/errors.hpp"
#include "mcalc/geometry.hpp"
#include "mcalc/rng.hpp"

using namespace mcalc;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

Point sphere_point(SeededRng& rng) { return Point{rng.unit_vector(3)}; }

// Transport as the solution of the geodesic frame ODE V' = -<V, gamma'> gamma
// along the unit-speed great circle from x to y, integrated with RK4.  Used
// as an independent oracle for the closed-form parallel_transport.
std::vector<double> transport_ode(const Manifold& m, const Point& x, const Point& y,
                                  const std::vector<double>& v0) {
    TangentVector u = m.log_map(x, y);
    double len = u.norm();
    if (len < 1e-15) return v0;
    std::vector<double> dir = scaled(1.0 / len, u.components);
    auto gamma = [&](double t) {
        return axpy(std::sin(t), dir, scaled(std::cos(t), x.coords));
    };
    auto gamma_dot = [&](double t) {
        return axpy(std::cos(t), dir, scaled(-std::sin(t), x.coords));
    };
    auto rhs = [&](double t, const std::vector<double>& V) {
        auto g = gamma(t);
        auto gd = gamma_dot(t);
        return scaled(-dot(V, gd), g);
    };
    int steps = 2000;
    double h = len / steps;
    std::vector<double> V = v0;
    for (int i = 0; i < steps; ++i) {
        double t = i * h;
        auto k1 = rhs(t, V);
        auto k2 = rhs(t + h / 2, axpy(h / 2, k1, V));
        auto k3 = rhs(t + h / 2, axpy(h / 2, k2, V));
        auto k4 = rhs(t + h, axpy(h, k3, V));
        for (std::size_t c = 0; c < V.size(); ++c)
            V[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    }
    return V;
}

}  // namespace

TEST_CASE("euclidean distance, exp, log are the flat operations") {
    Manifold m = Manifold::euclidean(2);
    Point x{{0.0, 0.0}}, y{{3.0, 4.0}};
    CHECK(m.distance(x, y) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(m.distance(x, x) == 0.0);

    TangentVector u = m.log_map(x, y);
    CHECK(u.components[0] == doctest::Approx(3.0));
    CHECK(u.components[1] == doctest::Approx(4.0));
    Point back = m.exp_map(x, u);
    CHECK(max_abs_diff(back.coords, y.coords) == 0.0);

    Manifold e1 = Manifold::euclidean(1);
    CHECK(e1.distance(Point{{0.0}}, Point{{1.0}}) == doctest::Approx(1.0));
    CHECK(e1.exp_map(Point{{0.0}}, TangentVector{Point{{0.0}}, {2.0}}).coords[0] ==
          doctest::Approx(2.0));
}

TEST_CASE("euclidean transport is the identity on components") {
    Manifold m = Manifold::euclidean(2);
    TangentVector v{Point{{0.5, -1.0}}, {1.0, 0.0}};
    TangentVector w = m.parallel_transport(Point{{0.5, -1.0}}, Point{{7.0, 3.0}}, v);
    CHECK(w.base.coords[0] == doctest::Approx(7.0));
    CHECK(w.components[0] == doctest::Approx(1.0));
    CHECK(w.components[1] == doctest::Approx(0.0));
}

TEST_CASE("sphere constructors and validation") {
    Manifold s = Manifold::sphere(3);
    CHECK(s.describe() == "sphere:3");
    CHECK(s.ambient_dim() == 3);
    // default origin: last coordinate axis
    CHECK(s.origin().coords[2] == doctest::Approx(1.0));

    CHECK_THROWS_AS(s.check_point(Point{{1.0, 1.0, 0.0}}), input_error);
    CHECK_THROWS_AS(s.check_point(Point{{1.0, 0.0}}), input_error);
    CHECK_THROWS_AS(
        s.check_tangent(TangentVector{Point{{1.0, 0.0, 0.0}}, {1.0, 0.0, 0.0}}), input_error);
    CHECK_THROWS_AS(Manifold::sphere(1), input_error);
    CHECK_THROWS_AS(Manifold::euclidean(0), input_error);
    CHECK_THROWS_AS(Manifold::sphere(3, Point{{2.0, 0.0, 0.0}}), input_error);
}

TEST_CASE("sphere distance: north pole to equator is pi/2") {
    Manifold s = Manifold::sphere(3);
    Point north{{0.0, 0.0, 1.0}}, eq{{1.0, 0.0, 0.0}};
    CHECK(s.distance(north, eq) == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(s.distance(eq, eq) == 0.0);
    CHECK(s.dist_origin(eq) == doctest::Approx(M_PI / 2));
}

TEST_CASE("sphere exp/log closed forms") {
    Manifold s = Manifold::sphere(3);
    Point north{{0.0, 0.0, 1.0}};
    // quarter turn towards e_x
    Point quarter = s.exp_map(north, TangentVector{north, {M_PI / 2, 0.0, 0.0}});
    CHECK(max_abs_diff(quarter.coords, {1.0, 0.0, 0.0}) < 1e-15);
    // zero vector is a fixed point
    Point same = s.exp_map(north, TangentVector{north, {0.0, 0.0, 0.0}});
    CHECK(max_abs_diff(same.coords, north.coords) == 0.0);
    // |v| = distance of the endpoint
    TangentVector v{north, {0.3, 0.4, 0.0}};
    CHECK(s.distance(north, s.exp_map(north, v)) == doctest::Approx(0.5).epsilon(1e-12));
    // injectivity radius
    CHECK_THROWS_AS(s.exp_map(north, TangentVector{north, {M_PI, 0.0, 0.0}}), domain_error);
    // log inverts exp
    TangentVector u = s.log_map(north, quarter);
    CHECK(max_abs_diff(u.components, {M_PI / 2, 0.0, 0.0}) < 1e-15);
    // antipodal logarithm is undefined
    CHECK_THROWS_AS(s.log_map(north, Point{{0.0, 0.0, -1.0}}), domain_error);
}

TEST_CASE("sphere exp/log round trip on random pairs") {
    Manifold s = Manifold::sphere(3);
    SeededRng rng(20240817);
    for (int i = 0; i < 200; ++i) {
        Point x = sphere_point(rng), y = sphere_point(rng);
        if (s.distance(x, y) >= M_PI - 1e-3) continue;
        TangentVector u = s.log_map(x, y);
        CHECK(max_abs_diff(s.exp_map(x, u).coords, y.coords) < 1e-12);
        CHECK(std::abs(u.norm() - s.distance(x, y)) < 1e-12);
    }
}

TEST_CASE("sphere parallel transport: frozen quarter-turn value") {
    Manifold s = Manifold::sphere(3);
    Point north{{0.0, 0.0, 1.0}}, eq{{1.0, 0.0, 0.0}};
    // the along-geodesic direction e_x at the pole rotates into -e_z at the equator
    TangentVector t = s.parallel_transport(north, eq, TangentVector{north, {1.0, 0.0, 0.0}});
    CHECK(max_abs_diff(t.components, {0.0, 0.0, -1.0}) < 1e-14);
    // the normal direction e_y is carried unchanged
    TangentVector n = s.parallel_transport(north, eq, TangentVector{north, {0.0, 1.0, 0.0}});
    CHECK(max_abs_diff(n.components, {0.0, 1.0, 0.0}) < 1e-14);
}

TEST_CASE("sphere parallel transport agrees with the frame ODE") {
    Manifold s = Manifold::sphere(3);
    SeededRng rng(77);
    int done = 0;
    for (int i = 0; i < 12 && done < 8; ++i) {
        Point x = sphere_point(rng), y = sphere_point(rng);
        if (s.distance(x, y) >= M_PI - 0.1) continue;
        TangentVector v = s.project_tangent(x, rng.unit_vector(3));
        if (v.norm() < 1e-3) continue;
        TangentVector got = s.parallel_transport(x, y, v);
        auto want = transport_ode(s, x, y, v.components);
        CHECK(max_abs_diff(got.components, want) < 1e-8);
        ++done;
    }
    CHECK(done >= 5);
}

TEST_CASE("transport preserves norms and inner products") {
    Manifold s = Manifold::sphere(3);
    SeededRng rng(5150);
    for (int i = 0; i < 100; ++i) {
        Point x = sphere_point(rng), y = sphere_point(rng);
        if (s.distance(x, y) >= M_PI - 1e-2) continue;
        TangentVector v = s.project_tangent(x, rng.unit_vector(3));
        TangentVector w = s.project_tangent(x, rng.unit_vector(3));
        TangentVector tv = s.parallel_transport(x, y, v);
        TangentVector tw = s.parallel_transport(x, y, w);
        CHECK(std::abs(tv.norm() - v.norm()) < 1e-12);
        CHECK(std::abs(dot(tv.components, tw.components) - dot(v.components, w.components)) <
              1e-12);
        // transported vectors are tangent at the destination
        CHECK(std::abs(dot(tv.components, y.coords)) < 1e-12);
    }
}

TEST_CASE("tangent_basis is orthonormal and tangent") {
    for (const Manifold& m : {Manifold::euclidean(3), Manifold::sphere(3), Manifold::sphere(4)}) {
        SeededRng rng(31337);
        Point x = m.kind() == ManifoldKind::Sphere ? Point{rng.unit_vector(m.ambient_dim())}
                                                   : Point{{0.3, -1.2, 0.7}};
        auto basis = m.tangent_basis(x);
        int expect = m.kind() == ManifoldKind::Sphere ? m.ambient_dim() - 1 : m.ambient_dim();
        CHECK(static_cast<int>(basis.size()) == expect);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            CHECK(std::abs(basis[i].norm() - 1.0) < 1e-12);
            CHECK_NOTHROW(m.check_tangent(basis[i]));
            for (std::size_t j = i + 1; j < basis.size(); ++j)
                CHECK(std::abs(dot(basis[i].components, basis[j].components)) < 1e-12);
        }
    }
}

TEST_CASE("scalar_gradient: flat polynomial example") {
    Manifold m = Manifold::euclidean(2);
    ScalarField phi;
    phi.value = [](const Point& p) { return p.coords[0] * p.coords[0]; };
    TangentVector g = scalar_gradient(m, phi, Point{{1.0, 2.0}}, FDConfig{});
    CHECK(g.components[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(g.components[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("scalar_gradient: spherical distance field, frozen value") {
    Manifold s = Manifold::sphere(3);  // origin (0,0,1)
    ScalarField rho;
    rho.value = [&s](const Point& p) { return s.dist_origin(p); };
    // at (1,0,0) the distance to the pole decreases fastest towards +e_z
    TangentVector g = scalar_gradient(s, rho, Point{{1.0, 0.0, 0.0}}, FDConfig{});
    CHECK(g.components[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(g.components[1] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(g.components[2] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("scalar_gradient prefers the analytic hook") {
    Manifold m = Manifold::euclidean(1);
    ScalarField phi;
    phi.value = [](const Point&) { return 0.0; };  // hook contradicts the value on purpose
    phi.gradient = [](const Point& p) { return TangentVector{p, {42.0}}; };
    TangentVector g = scalar_gradient(m, phi, Point{{0.0}}, FDConfig{});
    CHECK(g.components[0] == doctest::Approx(42.0));
}

TEST_CASE("geodesic distance obeys the origin shift bound") {
    Manifold s = Manifold::sphere(3);
    SeededRng rng(99881);
    for (int i = 0; i < 100; ++i) {
        Point x = sphere_point(rng);
        TangentVector v = s.project_tangent(x, rng.unit_vector(3));
        double bound = s.dist_origin(x) + v.norm();
        CHECK(s.dist_origin(s.exp_map(x, v)) <= bound + 1e-12);
    }
}

TEST_CASE("same_space distinguishes kind, dimension and origin") {
    CHECK(Manifold::euclidean(2).same_space(Manifold::euclidean(2)));
    CHECK_FALSE(Manifold::euclidean(2).same_space(Manifold::euclidean(3)));
    CHECK_FALSE(Manifold::euclidean(3).same_space(Manifold::sphere(3)));
    CHECK_FALSE(Manifold::euclidean(1).same_space(Manifold::euclidean(1, Point{{5.0}})));
}
