#include "mcalc/calculus.hpp"

#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

double checked_eval(const Functional& f, const ParticleMeasure& mu) {
    double v = f.eval(mu);
    if (!std::isfinite(v)) throw numeric_error(f.name + ": non-finite value");
    return v;
}

void require_eval(const Functional& f, const char* where) {
    if (!f.eval) throw input_error(std::string(where) + ": functional lacks an eval function");
}

}  // namespace

void FlowConfig::validate() const {
    if (substeps_per_unit < 1) throw input_error("FlowConfig: substeps_per_unit must be at least 1");
}

Point flow_point(const Manifold& m, const VectorField& v, const Point& x, double time,
                 const FlowConfig& cfg) {
    cfg.validate();
    if (!v.at) throw input_error("flow_point: missing field");
    m.check_point(x);
    if (!(time >= 0.0) || !std::isfinite(time)) throw input_error("flow_point: time must be finite and nonnegative");
    if (time == 0.0) return x;

    const bool spherical = m.kind() == ManifoldKind::Sphere;
    // Stage points leave the sphere by O(h^2 |v|^2) before renormalization;
    // the guard only catches genuine blow-ups, not truncation-scale drift.
    auto velocity = [&](std::vector<double> q) {
        Point p{std::move(q)};
        if (spherical) {
            double n = norm2(p.coords);
            if (std::abs(n - 1.0) > 1e-3) throw numeric_error("flow_point: trajectory drifted off the sphere");
            for (auto& c : p.coords) c /= n;
        }
        TangentVector t = v.at(p);
        m.check_tangent(t);
        if (t.base.coords != p.coords)
            throw input_error("flow_point: field returned a vector anchored off the query point");
        return spherical ? m.project_tangent(p, t.components).components : t.components;
    };

    int nsteps = std::max(1, static_cast<int>(std::ceil(time * cfg.substeps_per_unit)));
    double h = time / nsteps;
    std::vector<double> p = x.coords;
    for (int step = 0; step < nsteps; ++step) {
        auto k1 = velocity(p);
        auto k2 = velocity(axpy(0.5 * h, k1, p));
        auto k3 = velocity(axpy(0.5 * h, k2, p));
        auto k4 = velocity(axpy(h, k3, p));
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (spherical) {
            double n = norm2(p);
            if (std::abs(n - 1.0) > 1e-3) throw numeric_error("flow_point: trajectory drifted off the sphere");
            for (auto& c : p) c /= n;
        }
    }
    for (double c : p)
        if (!std::isfinite(c)) throw numeric_error("flow_point: non-finite trajectory");
    return Point{std::move(p)};
}

DerivativeEstimate extrinsic_fd(const Functional& f, const ParticleMeasure& eta, const Point& x,
                                const FDConfig& cfg) {
    require_eval(f, "extrinsic_fd");
    eta.manifold().check_point(x);
    double f0 = checked_eval(f, eta);
    return one_sided_limit(
        [&](double s) { return (checked_eval(f, add_dirac(eta, s, x)) - f0) / s; }, cfg);
}

DerivativeEstimate centered_extrinsic_fd(const Functional& f, const ParticleMeasure& mu,
                                         const Point& x, const FDConfig& cfg) {
    require_eval(f, "centered_extrinsic_fd");
    mu.manifold().check_point(x);
    if (std::abs(mu.total_mass() - 1.0) > 1e-9)
        throw input_error("centered_extrinsic_fd: the base measure must carry unit mass");
    double f0 = checked_eval(f, mu);
    ParticleMeasure delta = ParticleMeasure::dirac(mu.manifold(), 1.0, x);
    return one_sided_limit(
        [&](double s) { return (checked_eval(f, convex_combine(mu, delta, s)) - f0) / s; }, cfg);
}

TangentVector grad_extrinsic(const Functional& f, const ParticleMeasure& eta, const Point& x,
                             const FDConfig& cfg) {
    require_eval(f, "grad_extrinsic");
    const Manifold& m = eta.manifold();
    m.check_point(x);
    if (f.grad_extrinsic) {
        TangentVector g = f.grad_extrinsic(eta, x);
        m.check_tangent(g);
        return m.project_tangent(x, g.components);
    }
    ScalarField field;
    if (f.extrinsic) {
        field.value = [&](const Point& y) { return f.extrinsic(eta, y); };
    } else {
        field.value = [&](const Point& y) {
            DerivativeEstimate est = extrinsic_fd(f, eta, y, cfg);
            if (!est.converged)
                throw numeric_error(f.name + ": extrinsic quotient did not settle at a gradient stencil point");
            return est.value;
        };
    }
    return scalar_gradient(m, field, x, cfg);
}

DerivativeEstimate intrinsic_directional(const Functional& f, const ParticleMeasure& eta,
                                         const VectorField& v, const FDConfig& cfg,
                                         const FlowConfig& flow) {
    require_eval(f, "intrinsic_directional");
    if (!v.at) throw input_error("intrinsic_directional: missing field");
    if (!v.compact_support)
        throw input_error("intrinsic_directional: the field must declare compact support");
    const Manifold& m = eta.manifold();
    double f0 = checked_eval(f, eta);
    return one_sided_limit(
        [&](double s) {
            ParticleMeasure shifted =
                pushforward(eta, [&](const Point& y) { return flow_point(m, v, y, s, flow); });
            return (checked_eval(f, shifted) - f0) / s;
        },
        cfg);
}

DerivativeEstimate l_directional(const Functional& f, const ParticleMeasure& eta,
                                 const std::vector<TangentVector>& v, const FDConfig& cfg) {
    require_eval(f, "l_directional");
    const Manifold& m = eta.manifold();
    if (v.size() != eta.size()) throw input_error("l_directional: field sample is not aligned with the atoms");
    for (std::size_t i = 0; i < v.size(); ++i) {
        m.check_tangent(v[i]);
        if (v[i].base.coords != eta.atoms()[i].location.coords)
            throw input_error("l_directional: sample vector anchored off its atom");
    }
    double f0 = checked_eval(f, eta);
    return one_sided_limit(
        [&](double s) {
            std::vector<Atom> shifted;
            shifted.reserve(eta.size());
            for (std::size_t i = 0; i < eta.size(); ++i) {
                const Atom& a = eta.atoms()[i];
                shifted.push_back(Atom{
                    a.weight,
                    m.exp_map(a.location, TangentVector{a.location, scaled(s, v[i].components)})});
            }
            ParticleMeasure nu(m, std::move(shifted));
            return (checked_eval(f, nu) - f0) / s;
        },
        cfg);
}

DerivativeEstimate l_directional(const Functional& f, const ParticleMeasure& eta,
                                 const VectorField& v, const FDConfig& cfg) {
    return l_directional(f, eta, sample_field(v, eta), cfg);
}

TangentVector l_field_via_dirac(const Functional& f, const ParticleMeasure& eta, const Point& x,
                                const FDConfig& cfg) {
    require_eval(f, "l_field_via_dirac");
    const Manifold& m = eta.manifold();
    m.check_point(x);
    auto steps = cfg.schedule();
    const int d = m.ambient_dim();
    std::vector<std::vector<double>> ladders(d, std::vector<double>(steps.size()));
    for (std::size_t k = 0; k < steps.size(); ++k) {
        double s = steps[k];
        ScalarField field;
        field.value = [&](const Point& y) { return checked_eval(f, add_dirac(eta, s, y)); };
        TangentVector g = scalar_gradient(m, field, x, cfg);
        for (int i = 0; i < d; ++i) ladders[i][k] = g.components[i] / s;
    }
    std::vector<double> comps(d);
    for (int i = 0; i < d; ++i) comps[i] = settle_ladder(std::move(ladders[i]), cfg).value;
    return m.project_tangent(x, comps);
}

std::pair<TangentVector, TangentVector> dirac_gradient(const Functional& f,
                                                       const ParticleMeasure& eta, double s,
                                                       const Point& x, const FDConfig& cfg) {
    require_eval(f, "dirac_gradient");
    const Manifold& m = eta.manifold();
    m.check_point(x);
    if (!(s > 0.0) || !std::isfinite(s)) throw input_error("dirac_gradient: weight must be positive");
    ScalarField field;
    field.value = [&](const Point& y) { return checked_eval(f, add_dirac(eta, s, y)); };
    TangentVector left = scalar_gradient(m, field, x, cfg);
    TangentVector g = grad_extrinsic(f, add_dirac(eta, s, x), x, cfg);
    TangentVector right{x, scaled(s, g.components)};
    return {std::move(left), std::move(right)};
}

}  // namespace mcalc
