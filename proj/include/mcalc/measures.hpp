#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcalc/geometry.hpp"

namespace mcalc {

struct Atom {
    double weight;
    Point location;
};

// A finite nonnegative measure with finitely many weighted atoms.  Weights
// are strictly positive after construction (zero-weight atoms are dropped,
// negative ones rejected); locations are validated against the manifold.
class ParticleMeasure {
 public:
    ParticleMeasure(Manifold manifold, std::vector<Atom> atoms);

    static ParticleMeasure zero(const Manifold& m) { return ParticleMeasure(m, {}); }
    static ParticleMeasure dirac(const Manifold& m, double weight, Point x);

    const Manifold& manifold() const { return manifold_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const { return mass_; }

    double moment(double p) const;        // integral of rho_o^p
    ParticleMeasure scaled(double c) const;  // c times the measure, c >= 0

 private:
    Manifold manifold_;
    std::vector<Atom> atoms_;
    double mass_ = 0.0;
};

// Integral of h against mu.  Throws numeric_error on non-finite values of h.
double integrate(const ParticleMeasure& mu, const std::function<double(const Point&)>& h);

// mu + s*delta_x (s = 0 returns mu unchanged; s < 0 rejected).
ParticleMeasure add_dirac(const ParticleMeasure& mu, double s, const Point& x);

// (1-s)*mu + s*nu for s in [0,1].
ParticleMeasure convex_combine(const ParticleMeasure& mu, const ParticleMeasure& nu, double s);

// Image measure under a point map: weights carried verbatim.
ParticleMeasure pushforward(const ParticleMeasure& mu,
                            const std::function<Point(const Point&)>& map);

// Density rescaling: weights become w * g(x); g must be nonnegative and
// finite at every atom.
ParticleMeasure reweight(const ParticleMeasure& mu,
                         const std::function<double(const Point&)>& g);

// A tangent vector field.  `compact_support` is a declaration by whoever
// built the field; flow-based derivatives require it.
struct VectorField {
    std::function<TangentVector(const Point&)> at;
    bool compact_support = false;
};

// Field values aligned with mu's atom order.
std::vector<TangentVector> sample_field(const VectorField& v, const ParticleMeasure& mu);

// L^2(mu) pairing of atom-aligned tangent fields.
double l2_inner(const ParticleMeasure& mu, const std::vector<TangentVector>& a,
                const std::vector<TangentVector>& b);
double l2_inner(const ParticleMeasure& mu, const VectorField& a, const VectorField& b);
double l2_norm(const ParticleMeasure& mu, const std::vector<TangentVector>& a);

// Optimal plan between gamma-atoms (rows) and eta-atoms (columns) under the
// cross-mass normalization: row sums are eta(M)*gamma_i, column sums are
// gamma(M)*eta_j, and the cost of a cell is distance^p.
struct Coupling {
    std::size_t rows = 0, cols = 0;
    std::vector<double> plan;  // row-major
    double cost = 0.0;         // sum plan * distance^p
};
Coupling optimal_coupling(const ParticleMeasure& gamma, const ParticleMeasure& eta, double p);

// Metric between finite measures of possibly different total mass:
//   |gamma(1+rho_o^p) - eta(1+rho_o^p)| + (min coupling cost)^(1/max(p,1)).
// Requires p > 0 and size(gamma)*size(eta) <= 1e4.
double wasserstein_p(const ParticleMeasure& gamma, const ParticleMeasure& eta, double p);

// Text format: one atom per line, "weight x_1 ... x_d"; blank lines and
// lines starting with '#' are skipped.
ParticleMeasure parse_measure(const Manifold& m, std::istream& in, const std::string& name);
ParticleMeasure load_measure(const Manifold& m, const std::string& path);
void save_measure(const ParticleMeasure& mu, const std::string& path);

}  // namespace mcalc
