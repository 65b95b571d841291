#include "mcalc/measures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mcalc/errors.hpp"
#include "mcalc/transport.hpp"

namespace mcalc {

ParticleMeasure::ParticleMeasure(Manifold manifold, std::vector<Atom> atoms)
    : manifold_(std::move(manifold)) {
    atoms_.reserve(atoms.size());
    for (auto& a : atoms) {
        if (!std::isfinite(a.weight) || a.weight < 0.0)
            throw input_error("measure: weights must be finite and nonnegative");
        manifold_.check_point(a.location);
        if (a.weight == 0.0) continue;
        mass_ += a.weight;
        atoms_.push_back(std::move(a));
    }
}

ParticleMeasure ParticleMeasure::dirac(const Manifold& m, double weight, Point x) {
    return ParticleMeasure(m, {Atom{weight, std::move(x)}});
}

double ParticleMeasure::moment(double p) const {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.weight * std::pow(manifold_.dist_origin(a.location), p);
    return acc;
}

ParticleMeasure ParticleMeasure::scaled(double c) const {
    if (!std::isfinite(c) || c < 0.0) throw input_error("measure: scale must be finite and nonnegative");
    std::vector<Atom> out = atoms_;
    for (auto& a : out) a.weight *= c;
    return ParticleMeasure(manifold_, std::move(out));
}

double integrate(const ParticleMeasure& mu, const std::function<double(const Point&)>& h) {
    if (!h) throw input_error("integrate: missing integrand");
    double acc = 0.0;
    for (const auto& a : mu.atoms()) {
        double v = h(a.location);
        if (!std::isfinite(v)) throw numeric_error("integrate: non-finite integrand value");
        acc += a.weight * v;
    }
    return acc;
}

ParticleMeasure add_dirac(const ParticleMeasure& mu, double s, const Point& x) {
    if (!std::isfinite(s) || s < 0.0) throw input_error("add_dirac: weight must be finite and nonnegative");
    mu.manifold().check_point(x);
    if (s == 0.0) return mu;
    std::vector<Atom> atoms = mu.atoms();
    atoms.push_back(Atom{s, x});
    return ParticleMeasure(mu.manifold(), std::move(atoms));
}

ParticleMeasure convex_combine(const ParticleMeasure& mu, const ParticleMeasure& nu, double s) {
    require_same_space(mu.manifold(), nu.manifold(), "convex_combine");
    if (!(s >= 0.0 && s <= 1.0)) throw input_error("convex_combine: s must lie in [0,1]");
    std::vector<Atom> atoms;
    atoms.reserve(mu.size() + nu.size());
    for (const auto& a : mu.atoms()) atoms.push_back(Atom{(1.0 - s) * a.weight, a.location});
    for (const auto& a : nu.atoms()) atoms.push_back(Atom{s * a.weight, a.location});
    return ParticleMeasure(mu.manifold(), std::move(atoms));
}

ParticleMeasure pushforward(const ParticleMeasure& mu,
                            const std::function<Point(const Point&)>& map) {
    if (!map) throw input_error("pushforward: missing point map");
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    for (const auto& a : mu.atoms()) atoms.push_back(Atom{a.weight, map(a.location)});
    return ParticleMeasure(mu.manifold(), std::move(atoms));
}

ParticleMeasure reweight(const ParticleMeasure& mu,
                         const std::function<double(const Point&)>& g) {
    if (!g) throw input_error("reweight: missing density");
    std::vector<Atom> atoms;
    atoms.reserve(mu.size());
    for (const auto& a : mu.atoms()) {
        double d = g(a.location);
        if (!std::isfinite(d) || d < 0.0) throw input_error("reweight: density must be finite and nonnegative");
        atoms.push_back(Atom{a.weight * d, a.location});
    }
    return ParticleMeasure(mu.manifold(), std::move(atoms));
}

std::vector<TangentVector> sample_field(const VectorField& v, const ParticleMeasure& mu) {
    if (!v.at) throw input_error("sample_field: missing field");
    std::vector<TangentVector> out;
    out.reserve(mu.size());
    for (const auto& a : mu.atoms()) {
        TangentVector t = v.at(a.location);
        mu.manifold().check_tangent(t);
        if (t.base.coords != a.location.coords)
            throw input_error("sample_field: field returned a vector anchored off the sample point");
        out.push_back(std::move(t));
    }
    return out;
}

double l2_inner(const ParticleMeasure& mu, const std::vector<TangentVector>& a,
                const std::vector<TangentVector>& b) {
    if (a.size() != mu.size() || b.size() != mu.size())
        throw input_error("l2_inner: sampled fields are not aligned with the atoms");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += mu.atoms()[i].weight * dot(a[i].components, b[i].components);
    return acc;
}

double l2_inner(const ParticleMeasure& mu, const VectorField& a, const VectorField& b) {
    return l2_inner(mu, sample_field(a, mu), sample_field(b, mu));
}

double l2_norm(const ParticleMeasure& mu, const std::vector<TangentVector>& a) {
    return std::sqrt(l2_inner(mu, a, a));
}

Coupling optimal_coupling(const ParticleMeasure& gamma, const ParticleMeasure& eta, double p) {
    require_same_space(gamma.manifold(), eta.manifold(), "optimal_coupling");
    if (!(p > 0.0) || !std::isfinite(p)) throw input_error("optimal_coupling: p must be positive");
    Coupling c;
    c.rows = gamma.size();
    c.cols = eta.size();
    if (gamma.empty() || eta.empty()) return c;  // no mass to couple
    if (c.rows * c.cols > 10000)
        throw input_error("optimal_coupling: instance exceeds the 1e4 atom-pair cap");

    std::vector<double> supply(c.rows), demand(c.cols), cost(c.rows * c.cols);
    for (std::size_t i = 0; i < c.rows; ++i) supply[i] = eta.total_mass() * gamma.atoms()[i].weight;
    for (std::size_t j = 0; j < c.cols; ++j) demand[j] = gamma.total_mass() * eta.atoms()[j].weight;
    const Manifold& m = gamma.manifold();
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j)
            cost[i * c.cols + j] =
                std::pow(m.distance(gamma.atoms()[i].location, eta.atoms()[j].location), p);
    TransportResult lp = solve_transport(supply, demand, cost);
    c.plan = std::move(lp.flow);
    c.cost = lp.cost;
    return c;
}

double wasserstein_p(const ParticleMeasure& gamma, const ParticleMeasure& eta, double p) {
    require_same_space(gamma.manifold(), eta.manifold(), "wasserstein_p");
    if (!(p > 0.0) || !std::isfinite(p)) throw input_error("wasserstein_p: p must be positive");
    double mass_term = std::abs((gamma.total_mass() + gamma.moment(p)) -
                                (eta.total_mass() + eta.moment(p)));
    Coupling c = optimal_coupling(gamma, eta, p);
    double coupling_term = gamma.empty() || eta.empty() ? 0.0 : std::pow(c.cost, 1.0 / std::max(p, 1.0));
    return mass_term + coupling_term;
}

ParticleMeasure parse_measure(const Manifold& m, std::istream& in, const std::string& name) {
    std::vector<Atom> atoms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double w;
        if (!(row >> w))
            throw input_error(name + ":" + std::to_string(lineno) + ": unreadable weight");
        std::vector<double> coords(m.ambient_dim());
        for (auto& c : coords)
            if (!(row >> c))
                throw input_error(name + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(m.ambient_dim()) + " coordinates after the weight");
        std::string extra;
        if (row >> extra)
            throw input_error(name + ":" + std::to_string(lineno) + ": trailing tokens");
        atoms.push_back(Atom{w, Point{std::move(coords)}});
    }
    return ParticleMeasure(m, std::move(atoms));
}

ParticleMeasure load_measure(const Manifold& m, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("load_measure: cannot open '" + path + "'");
    return parse_measure(m, in, path);
}

void save_measure(const ParticleMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("save_measure: cannot open '" + path + "'");
    char buf[64];
    for (const auto& a : mu.atoms()) {
        std::snprintf(buf, sizeof buf, "%.17g", a.weight);
        out << buf;
        for (double c : a.location.coords) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out << ' ' << buf;
        }
        out << '\n';
    }
    if (!out) throw input_error("save_measure: write failed for '" + path + "'");
}

}  // namespace mcalc
