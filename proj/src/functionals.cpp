#include "mcalc/functionals.hpp"

#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

// exp(-1/t) glue: a(0) = 0 with all derivatives, a(t) -> 1/e at t = 1.
double ramp_a(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double ramp_a_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// Smooth 0 -> 1 transition on [0,1].
double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = ramp_a(t), b = ramp_a(1.0 - t);
    return a / (a + b);
}

double smoothstep_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double a = ramp_a(t), b = ramp_a(1.0 - t);
    double da = ramp_a_prime(t), db = ramp_a_prime(1.0 - t);
    double denom = (a + b) * (a + b);
    return (da * b + a * db) / denom;
}

double oscillator_psi(double t) {
    double u = t - 2.0;
    if (u == 0.0) return 0.0;
    return u * std::sin(std::log(std::abs(u)));
}

std::vector<double> inner_values(const CylindricalSpec& spec, const ParticleMeasure& mu) {
    std::vector<double> t(spec.inner.size());
    for (std::size_t i = 0; i < spec.inner.size(); ++i) t[i] = integrate(mu, spec.inner[i].value);
    return t;
}

}  // namespace

std::string to_string(Regularity r) {
    switch (r) {
        case Regularity::None: return "none";
        case Regularity::L1Only: return "L1_only";
        case Regularity::E1K: return "E1K";
        case Regularity::E11: return "E11";
        case Regularity::E11B: return "E11B";
    }
    return "none";
}

Functional make_cylindrical(const CylindricalSpec& spec) {
    if (!spec.outer || !spec.outer_grad) throw input_error("make_cylindrical: outer map and gradient are required");
    if (spec.inner.empty()) throw input_error("make_cylindrical: need at least one inner field");
    bool all_grads = true;
    for (const auto& f : spec.inner) {
        if (!f.value) throw input_error("make_cylindrical: inner field lacks a value function");
        if (!f.gradient) all_grads = false;
    }

    Functional f;
    f.name = spec.name.empty() ? "cylindrical" : spec.name;
    f.tag = spec.bounded_inner_gradients ? Regularity::E11B : Regularity::E11;
    CylindricalSpec s = spec;  // owned by the closures below

    f.eval = [s](const ParticleMeasure& mu) {
        double v = s.outer(inner_values(s, mu));
        if (!std::isfinite(v)) throw numeric_error(s.name + ": non-finite value");
        return v;
    };
    f.extrinsic = [s](const ParticleMeasure& mu, const Point& x) {
        auto g = s.outer_grad(inner_values(s, mu));
        if (g.size() != s.inner.size()) throw input_error(s.name + ": outer gradient arity mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * s.inner[i].value(x);
        return acc;
    };
    if (all_grads) {
        f.grad_extrinsic = [s](const ParticleMeasure& mu, const Point& x) {
            auto g = s.outer_grad(inner_values(s, mu));
            if (g.size() != s.inner.size()) throw input_error(s.name + ": outer gradient arity mismatch");
            std::vector<double> acc(mu.manifold().ambient_dim(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                TangentVector gi = s.inner[i].gradient(x);
                mu.manifold().check_tangent(gi);
                acc = axpy(g[i], gi.components, acc);
            }
            return mu.manifold().project_tangent(x, acc);
        };
    }
    return f;
}

ScalarField coordinate_field(const Manifold& m, int axis) {
    if (axis < 0 || axis >= m.ambient_dim()) throw input_error("coordinate_field: axis out of range");
    ScalarField f;
    f.value = [axis](const Point& p) { return p.coords.at(axis); };
    Manifold mf = m;
    f.gradient = [mf, axis](const Point& p) {
        std::vector<double> e(mf.ambient_dim(), 0.0);
        e[axis] = 1.0;
        return mf.project_tangent(p, e);
    };
    return f;
}

ScalarField dist_origin_power(const Manifold& m, double k) {
    if (!(k >= 1.0)) throw input_error("dist_origin_power: exponent must be at least 1");
    ScalarField f;
    Manifold mf = m;
    f.value = [mf, k](const Point& p) { return std::pow(mf.dist_origin(p), k); };
    f.gradient = [mf, k](const Point& p) {
        double rho = mf.dist_origin(p);
        if (rho < 1e-12) return mf.zero_tangent(p);
        // grad rho_o = -log_p(o)/rho, so grad rho_o^k = -k rho^{k-2} log_p(o).
        TangentVector lg = mf.log_map(p, mf.origin());
        return TangentVector{p, scaled(-k * std::pow(rho, k - 2.0), lg.components)};
    };
    return f;
}

Functional builtin_functional(const Manifold& m, const std::string& name) {
    if (name == "total_mass") {
        Functional f;
        f.name = name;
        f.tag = Regularity::E11B;
        f.eval = [](const ParticleMeasure& mu) { return mu.total_mass(); };
        f.extrinsic = [](const ParticleMeasure&, const Point&) { return 1.0; };
        f.grad_extrinsic = [](const ParticleMeasure& mu, const Point& x) {
            return mu.manifold().zero_tangent(x);
        };
        return f;
    }
    if (name.rfind("moment:", 0) == 0) {
        double k;
        try {
            std::size_t used = 0;
            k = std::stod(name.substr(7), &used);
            if (used != name.size() - 7) throw input_error("");
        } catch (...) {
            throw input_error("builtin_functional: bad exponent in '" + name + "'");
        }
        CylindricalSpec spec;
        spec.name = name;
        spec.outer = [](const std::vector<double>& t) { return t[0]; };
        spec.outer_grad = [](const std::vector<double>&) { return std::vector<double>{1.0}; };
        spec.inner = {dist_origin_power(m, k)};
        spec.bounded_inner_gradients = m.kind() == ManifoldKind::Sphere;  // rho is bounded there
        Functional f = make_cylindrical(spec);
        f.tag = spec.bounded_inner_gradients ? Regularity::E11B : Regularity::E11;
        return f;
    }
    if (name == "first_moment_squared") {
        CylindricalSpec spec;
        spec.name = name;
        spec.outer = [](const std::vector<double>& t) { return t[0] * t[0]; };
        spec.outer_grad = [](const std::vector<double>& t) { return std::vector<double>{2.0 * t[0]}; };
        spec.inner = {coordinate_field(m, 0)};
        spec.bounded_inner_gradients = true;
        return make_cylindrical(spec);
    }
    if (name == "sphere_height") {
        if (m.kind() != ManifoldKind::Sphere || m.ambient_dim() != 3)
            throw input_error("builtin_functional: sphere_height needs sphere:3");
        CylindricalSpec spec;
        spec.name = name;
        spec.outer = [](const std::vector<double>& t) { return t[0]; };
        spec.outer_grad = [](const std::vector<double>&) { return std::vector<double>{1.0}; };
        spec.inner = {coordinate_field(m, 2)};
        spec.bounded_inner_gradients = true;
        return make_cylindrical(spec);
    }
    if (name == "oscillator_mass") {
        Functional f;
        f.name = name;
        f.tag = Regularity::L1Only;  // geodesic shifts see it, dirac insertions do not settle
        f.eval = [](const ParticleMeasure& mu) { return oscillator_psi(mu.total_mass()); };
        return f;
    }
    throw input_error("builtin_functional: unknown name '" + name + "'");
}

double bump_h(double r) {
    if (!(r > 0.25) || r >= 2.0) return 0.0;
    if (r >= 0.5 && r <= 1.5) return 1.0;
    if (r < 0.5) return smoothstep((r - 0.25) / 0.25);
    return smoothstep((2.0 - r) / 0.5);
}

double bump_h_prime(double r) {
    if (!(r > 0.25) || r >= 2.0) return 0.0;
    if (r >= 0.5 && r <= 1.5) return 0.0;
    if (r < 0.5) return smoothstep_prime((r - 0.25) / 0.25) / 0.25;
    return -smoothstep_prime((2.0 - r) / 0.5) / 0.5;
}

Functional probability_extension(const Functional& f) {
    if (!f.eval) throw input_error("probability_extension: functional lacks eval");
    Functional g;
    g.name = "prob_ext(" + f.name + ")";
    g.tag = f.tag;
    Functional base = f;

    g.eval = [base](const ParticleMeasure& mu) {
        double m = mu.total_mass();
        if (m <= 0.25 || m >= 2.0) return 0.0;  // outside the bump support
        return bump_h(m) * base.eval(mu.scaled(1.0 / m));
    };
    if (f.extrinsic) {
        // d/ds of bump_h(m+s) f((mu+s delta_x)/(m+s)) at s=0+: the mass factor
        // differentiates to bump_h'(m) f(nu); the normalized argument moves in
        // the signed direction (delta_x - nu)/m.
        g.extrinsic = [base](const ParticleMeasure& mu, const Point& x) {
            double m = mu.total_mass();
            if (m <= 0.25 || m >= 2.0) return 0.0;
            ParticleMeasure nu = mu.scaled(1.0 / m);
            double de_x = base.extrinsic(nu, x);
            double de_avg = integrate(nu, [&](const Point& y) { return base.extrinsic(nu, y); });
            return bump_h_prime(m) * base.eval(nu) + bump_h(m) / m * (de_x - de_avg);
        };
    }
    if (f.grad_extrinsic) {
        g.grad_extrinsic = [base](const ParticleMeasure& mu, const Point& x) {
            double m = mu.total_mass();
            if (m <= 0.25 || m >= 2.0) return mu.manifold().zero_tangent(x);
            ParticleMeasure nu = mu.scaled(1.0 / m);
            TangentVector gv = base.grad_extrinsic(nu, x);
            return TangentVector{x, scaled(bump_h(m) / m, gv.components)};
        };
    }
    return g;
}

double DensityPerturbation::density(double r, const Point& x) const {
    if (!h) throw input_error("DensityPerturbation: missing h");
    if (!(r >= 0.0) || r > eps0) throw input_error("DensityPerturbation: r outside [0, eps0]");
    double d = 1.0 + h(r, x);
    if (d < -1e-12) throw input_error("DensityPerturbation: density went negative");
    return std::max(d, 0.0);
}

DensityPerturbation linear_perturbation(const ScalarField& b, double eps0) {
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw input_error("linear_perturbation: eps0 must be positive");
    if (!b.value) throw input_error("linear_perturbation: field lacks a value function");
    DensityPerturbation p;
    p.eps0 = eps0;
    auto bv = b.value;
    p.h = [bv](double r, const Point& x) { return r * bv(x); };
    p.hdot = [bv](double, const Point& x) { return bv(x); };
    return p;
}

Functional strip_hooks(const Functional& f) {
    Functional g;
    g.name = f.name + "[fd]";
    g.eval = f.eval;
    g.tag = f.tag;
    return g;
}

}  // namespace mcalc
