#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mcalc/errors.hpp"
#include "mcalc/measures.hpp"
#include "mcalc/rng.hpp"

using namespace mcalc;

namespace {
const Manifold E1 = Manifold::euclidean(1);
const Manifold E2 = Manifold::euclidean(2);

ParticleMeasure two_unit_atoms() {
    return ParticleMeasure(E1, {Atom{1.0, Point{{0.0}}}, Atom{1.0, Point{{1.0}}}});
}
}  // namespace

TEST_CASE("measure construction validates and normalizes atoms") {
    ParticleMeasure mu = two_unit_atoms();
    CHECK(mu.total_mass() == doctest::Approx(2.0));
    CHECK(mu.size() == 2);

    // zero-weight atoms are dropped
    ParticleMeasure nu(E1, {Atom{0.0, Point{{5.0}}}, Atom{2.0, Point{{1.0}}}});
    CHECK(nu.size() == 1);
    CHECK(nu.total_mass() == doctest::Approx(2.0));

    CHECK_THROWS_AS(ParticleMeasure(E1, {Atom{-1.0, Point{{0.0}}}}), input_error);
    CHECK_THROWS_AS(ParticleMeasure(E1, {Atom{1.0, Point{{0.0, 0.0}}}}), input_error);
    Manifold s = Manifold::sphere(3);
    CHECK_THROWS_AS(ParticleMeasure(s, {Atom{1.0, Point{{1.0, 1.0, 0.0}}}}), input_error);

    CHECK(ParticleMeasure::zero(E1).empty());
    CHECK(ParticleMeasure::dirac(E1, 2.0, Point{{3.0}}).total_mass() == doctest::Approx(2.0));
}

TEST_CASE("moment integrates distance powers against the weights") {
    ParticleMeasure mu(E1, {Atom{0.5, Point{{0.0}}}, Atom{0.5, Point{{2.0}}}});
    CHECK(mu.moment(2.0) == doctest::Approx(2.0));  // 0.5*0 + 0.5*4
    CHECK(mu.moment(1.0) == doctest::Approx(1.0));
    CHECK(mu.scaled(3.0).total_mass() == doctest::Approx(3.0));
    CHECK_THROWS_AS(mu.scaled(-1.0), input_error);
}

TEST_CASE("integrate is linear and rejects non-finite integrands") {
    ParticleMeasure mu = two_unit_atoms();
    CHECK(integrate(mu, [](const Point& p) { return p.coords[0]; }) == doctest::Approx(1.0));
    CHECK(integrate(mu, [](const Point&) { return 2.5; }) == doctest::Approx(5.0));
    CHECK_THROWS_AS(
        integrate(mu, [](const Point&) { return std::numeric_limits<double>::infinity(); }),
        numeric_error);
}

TEST_CASE("add_dirac and convex_combine") {
    ParticleMeasure mu = two_unit_atoms();
    CHECK(add_dirac(mu, 0.0, Point{{9.0}}).size() == 2);  // unchanged
    ParticleMeasure nu = add_dirac(mu, 0.5, Point{{9.0}});
    CHECK(nu.size() == 3);
    CHECK(nu.total_mass() == doctest::Approx(2.5));
    CHECK_THROWS_AS(add_dirac(mu, -0.1, Point{{9.0}}), input_error);

    ParticleMeasure d = ParticleMeasure::dirac(E1, 1.0, Point{{4.0}});
    ParticleMeasure blend = convex_combine(mu.scaled(0.5), d, 0.25);
    CHECK(blend.total_mass() == doctest::Approx(1.0));
    CHECK(convex_combine(mu, d, 0.0).total_mass() == doctest::Approx(2.0));
    CHECK(convex_combine(mu, d, 1.0).total_mass() == doctest::Approx(1.0));
    CHECK_THROWS_AS(convex_combine(mu, d, 1.5), input_error);
}

TEST_CASE("pushforward carries weights, reweight scales them") {
    ParticleMeasure mu = two_unit_atoms();
    ParticleMeasure shifted =
        pushforward(mu, [](const Point& p) { return Point{{p.coords[0] + 10.0}}; });
    CHECK(shifted.total_mass() == doctest::Approx(2.0));
    CHECK(shifted.atoms()[0].location.coords[0] == doctest::Approx(10.0));

    ParticleMeasure scaled = reweight(mu, [](const Point& p) { return p.coords[0] + 1.0; });
    CHECK(scaled.total_mass() == doctest::Approx(1.0 + 2.0));  // weights 1*1, 1*2
    CHECK_THROWS_AS(reweight(mu, [](const Point& p) { return p.coords[0] - 0.5; }), input_error);
}

TEST_CASE("sample_field and the L2 pairing") {
    ParticleMeasure mu(E2, {Atom{2.0, Point{{1.0, 0.0}}}, Atom{3.0, Point{{0.0, 1.0}}}});
    VectorField unit_x;
    unit_x.at = [](const Point& p) { return TangentVector{p, {1.0, 0.0}}; };
    auto samples = sample_field(unit_x, mu);
    REQUIRE(samples.size() == 2);
    CHECK(l2_inner(mu, samples, samples) == doctest::Approx(5.0));  // total mass
    CHECK(l2_norm(mu, samples) == doctest::Approx(std::sqrt(5.0)));
    CHECK(l2_inner(mu, unit_x, unit_x) == doctest::Approx(5.0));

    VectorField misanchored;
    misanchored.at = [](const Point&) { return TangentVector{Point{{9.0, 9.0}}, {1.0, 0.0}}; };
    CHECK_THROWS_AS(sample_field(misanchored, mu), input_error);
}

TEST_CASE("optimal_coupling satisfies the cross-mass marginals") {
    SeededRng rng(2024);
    ParticleMeasure gamma(E1, {Atom{0.4, Point{{0.0}}}, Atom{1.1, Point{{2.0}}}});
    ParticleMeasure eta(E1, {Atom{0.7, Point{{1.0}}}, Atom{0.2, Point{{3.0}}}, Atom{0.6, Point{{-1.0}}}});
    Coupling c = optimal_coupling(gamma, eta, 2.0);
    REQUIRE(c.rows == 2);
    REQUIRE(c.cols == 3);
    for (std::size_t i = 0; i < c.rows; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < c.cols; ++j) {
            row += c.plan[i * c.cols + j];
            CHECK(c.plan[i * c.cols + j] >= 0.0);
        }
        CHECK(row == doctest::Approx(eta.total_mass() * gamma.atoms()[i].weight).epsilon(1e-12));
    }
    for (std::size_t j = 0; j < c.cols; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < c.rows; ++i) col += c.plan[i * c.cols + j];
        CHECK(col == doctest::Approx(gamma.total_mass() * eta.atoms()[j].weight).epsilon(1e-12));
    }
    CHECK_THROWS_AS(optimal_coupling(gamma, eta, 0.0), input_error);
}

TEST_CASE("wasserstein metric: frozen hand values") {
    ParticleMeasure d0 = ParticleMeasure::dirac(E1, 1.0, Point{{0.0}});
    ParticleMeasure d1 = ParticleMeasure::dirac(E1, 1.0, Point{{1.0}});
    CHECK(wasserstein_p(d0, d1, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

    ParticleMeasure split(E1, {Atom{0.5, Point{{0.0}}}, Atom{0.5, Point{{2.0}}}});
    CHECK(wasserstein_p(split, d1, 2.0) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(wasserstein_p(d0, d0, 2.0) == 0.0);
    CHECK(wasserstein_p(split, split, 0.5) == 0.0);
    CHECK(wasserstein_p(d0, d1, 1.0) == doctest::Approx(wasserstein_p(d1, d0, 1.0)));
    // measures of different mass are at positive distance
    CHECK(wasserstein_p(d0.scaled(2.0), d0, 2.0) > 0.9);
}

TEST_CASE("wasserstein guards: p > 0 and the pair cap") {
    ParticleMeasure d0 = ParticleMeasure::dirac(E1, 1.0, Point{{0.0}});
    CHECK_THROWS_AS(wasserstein_p(d0, d0, -1.0), input_error);

    std::vector<Atom> many;
    for (int i = 0; i < 101; ++i) many.push_back(Atom{1.0, Point{{static_cast<double>(i)}}});
    ParticleMeasure big(E1, many);
    CHECK_THROWS_AS(wasserstein_p(big, big, 1.0), input_error);  // 101*101 > 1e4
}

TEST_CASE("measure text format round trip") {
    std::istringstream in(
        "# two atoms\n"
        "\n"
        "1 0.5 -0.25\n"
        "0.25 -1 3\n");
    ParticleMeasure mu = parse_measure(E2, in, "inline");
    REQUIRE(mu.size() == 2);
    CHECK(mu.atoms()[1].weight == doctest::Approx(0.25));
    CHECK(mu.atoms()[1].location.coords[1] == doctest::Approx(3.0));

    const char* path = "roundtrip_measure.txt";
    save_measure(mu, path);
    ParticleMeasure back = load_measure(E2, path);
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.atoms()[i].weight == mu.atoms()[i].weight);  // %.17g is exact
        CHECK(back.atoms()[i].location.coords == mu.atoms()[i].location.coords);
    }
    std::remove(path);
}

TEST_CASE("measure parser reports line numbers") {
    std::istringstream bad_weight("x 1 2\n");
    CHECK_THROWS_WITH_AS(parse_measure(E2, bad_weight, "m"), "m:1: unreadable weight",
                         input_error);
    std::istringstream short_row("1 0.5\n");
    CHECK_THROWS_AS(parse_measure(E2, short_row, "m"), input_error);
    std::istringstream long_row("1 0.5 0.5 9\n");
    CHECK_THROWS_WITH_AS(parse_measure(E2, long_row, "m"), "m:1: trailing tokens", input_error);
    std::istringstream second_line("1 0 0\nbroken\n");
    try {
        parse_measure(E2, second_line, "m");
        FAIL("expected input_error");
    } catch (const input_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_measure(E2, "no_such_measure_file.txt"), input_error);
}
