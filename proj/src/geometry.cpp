#include "mcalc/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mcalc/errors.hpp"

namespace mcalc {

namespace {

constexpr double kPointTol = 1e-12;    // unit-norm slack for sphere points
constexpr double kTangentTol = 1e-10;  // tangency slack for sphere vectors
constexpr double kAntipodalGap = 1e-8; // distance to pi at which log gives up

double clamp1(double t) { return std::max(-1.0, std::min(1.0, t)); }

void require_finite(const std::vector<double>& v, const char* where) {
    for (double c : v)
        if (!std::isfinite(c)) throw input_error(std::string(where) + ": non-finite coordinate");
}

void require_anchor(const Point& x, const TangentVector& v, const char* where) {
    if (v.base.coords.size() != x.coords.size())
        throw input_error(std::string(where) + ": tangent vector anchored in another dimension");
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        if (std::abs(v.base.coords[i] - x.coords[i]) > kPointTol)
            throw input_error(std::string(where) + ": tangent vector anchored at a different point");
}

}  // namespace

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> axpy(double a, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw input_error("axpy: dimension mismatch");
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

std::vector<double> scaled(double a, const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

double TangentVector::norm() const { return norm2(components); }

Manifold Manifold::euclidean(int dim) {
    if (dim < 1) throw input_error("euclidean: dimension must be at least 1");
    return Manifold(ManifoldKind::Euclidean, dim, Point{std::vector<double>(dim, 0.0)});
}

Manifold Manifold::euclidean(int dim, Point origin) {
    Manifold m = euclidean(dim);
    if (origin.dim() != dim) throw input_error("euclidean: origin dimension mismatch");
    require_finite(origin.coords, "euclidean origin");
    m.origin_ = std::move(origin);
    return m;
}

Manifold Manifold::sphere(int ambient_dim) {
    if (ambient_dim < 2) throw input_error("sphere: ambient dimension must be at least 2");
    std::vector<double> pole(ambient_dim, 0.0);
    pole.back() = 1.0;
    return Manifold(ManifoldKind::Sphere, ambient_dim, Point{std::move(pole)});
}

Manifold Manifold::sphere(int ambient_dim, Point origin) {
    Manifold m = sphere(ambient_dim);
    if (origin.dim() != ambient_dim) throw input_error("sphere: origin dimension mismatch");
    require_finite(origin.coords, "sphere origin");
    if (std::abs(norm2(origin.coords) - 1.0) > kPointTol)
        throw input_error("sphere: origin must have unit norm");
    m.origin_ = std::move(origin);
    return m;
}

std::string Manifold::describe() const {
    return (kind_ == ManifoldKind::Euclidean ? "euclidean:" : "sphere:") + std::to_string(ambient_dim_);
}

void Manifold::check_point(const Point& x) const {
    if (x.dim() != ambient_dim_) throw input_error("point dimension does not match the manifold");
    require_finite(x.coords, "point");
    if (kind_ == ManifoldKind::Sphere && std::abs(norm2(x.coords) - 1.0) > kPointTol)
        throw input_error("point is not on the unit sphere");
}

void Manifold::check_tangent(const TangentVector& v) const {
    check_point(v.base);
    if (static_cast<int>(v.components.size()) != ambient_dim_)
        throw input_error("tangent vector dimension does not match the manifold");
    require_finite(v.components, "tangent vector");
    if (kind_ == ManifoldKind::Sphere) {
        double slack = kTangentTol * std::max(1.0, norm2(v.components));
        if (std::abs(dot(v.base.coords, v.components)) > slack)
            throw input_error("tangent vector is not orthogonal to its base point");
    }
}

double Manifold::distance(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    if (kind_ == ManifoldKind::Euclidean) {
        double s = 0.0;
        for (int i = 0; i < ambient_dim_; ++i) {
            double d = x.coords[i] - y.coords[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    // acos(<x,y>) is only ~1e-8 accurate near coincident points; equal
    // coordinates must give exactly 0 (atom self-distances rely on it).
    if (x.coords == y.coords) return 0.0;
    return std::acos(clamp1(dot(x.coords, y.coords)));
}

double Manifold::dist_origin(const Point& x) const { return distance(x, origin_); }

Point Manifold::exp_map(const Point& x, const TangentVector& v) const {
    check_point(x);
    check_tangent(v);
    require_anchor(x, v, "exp_map");
    if (kind_ == ManifoldKind::Euclidean) return Point{axpy(1.0, v.components, x.coords)};

    // Project out residual normal drift before measuring the geodesic length.
    std::vector<double> u = axpy(-dot(x.coords, v.components), x.coords, v.components);
    double n = norm2(u);
    if (n >= M_PI) throw domain_error("exp_map: |v| reaches the injectivity radius pi");
    if (n == 0.0) return x;
    std::vector<double> r(ambient_dim_);
    double c = std::cos(n), s = std::sin(n) / n;
    for (int i = 0; i < ambient_dim_; ++i) r[i] = c * x.coords[i] + s * u[i];
    double rn = norm2(r);
    for (auto& ci : r) ci /= rn;
    return Point{std::move(r)};
}

TangentVector Manifold::log_map(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    if (kind_ == ManifoldKind::Euclidean) {
        std::vector<double> d(ambient_dim_);
        for (int i = 0; i < ambient_dim_; ++i) d[i] = y.coords[i] - x.coords[i];
        return TangentVector{x, std::move(d)};
    }
    double d = distance(x, y);
    if (d >= M_PI - kAntipodalGap)
        throw domain_error("log_map: points are antipodal (or within 1e-8 of it)");
    std::vector<double> u = axpy(-dot(x.coords, y.coords), x.coords, y.coords);
    double n = norm2(u);
    if (n < 1e-15) return zero_tangent(x);
    return TangentVector{x, scaled(d / n, u)};
}

TangentVector Manifold::parallel_transport(const Point& x, const Point& y,
                                           const TangentVector& v) const {
    check_tangent(v);
    require_anchor(x, v, "parallel_transport");
    check_point(y);
    if (kind_ == ManifoldKind::Euclidean) return TangentVector{y, v.components};

    double theta = distance(x, y);
    if (theta < 1e-15) return TangentVector{y, v.components};
    TangentVector lg = log_map(x, y);
    std::vector<double> e = scaled(1.0 / theta, lg.components);
    double a = dot(v.components, e);
    // The component along the geodesic rotates in the (x, e) plane; the
    // orthogonal complement is untouched.
    std::vector<double> r(ambient_dim_);
    double c = std::cos(theta), s = std::sin(theta);
    for (int i = 0; i < ambient_dim_; ++i)
        r[i] = v.components[i] - a * e[i] + a * (-s * x.coords[i] + c * e[i]);
    // Numerical cleanup: remove drift normal to the arrival point.
    double dn = dot(y.coords, r);
    for (int i = 0; i < ambient_dim_; ++i) r[i] -= dn * y.coords[i];
    return TangentVector{y, std::move(r)};
}

TangentVector Manifold::project_tangent(const Point& x, const std::vector<double>& ambient) const {
    check_point(x);
    if (static_cast<int>(ambient.size()) != ambient_dim_)
        throw input_error("project_tangent: dimension mismatch");
    require_finite(ambient, "project_tangent");
    if (kind_ == ManifoldKind::Euclidean) return TangentVector{x, ambient};
    return TangentVector{x, axpy(-dot(x.coords, ambient), x.coords, ambient)};
}

std::vector<TangentVector> Manifold::tangent_basis(const Point& x) const {
    check_point(x);
    std::vector<TangentVector> basis;
    if (kind_ == ManifoldKind::Euclidean) {
        for (int i = 0; i < ambient_dim_; ++i) {
            std::vector<double> e(ambient_dim_, 0.0);
            e[i] = 1.0;
            basis.push_back(TangentVector{x, std::move(e)});
        }
        return basis;
    }
    // Gram-Schmidt of the coordinate axes against x; keeps d-1 directions.
    for (int i = 0; i < ambient_dim_ && static_cast<int>(basis.size()) < ambient_dim_ - 1; ++i) {
        std::vector<double> w(ambient_dim_, 0.0);
        w[i] = 1.0;
        w = axpy(-x.coords[i], x.coords, w);
        for (const auto& b : basis) w = axpy(-dot(b.components, w), b.components, w);
        double n = norm2(w);
        if (n > 1e-6) basis.push_back(TangentVector{x, scaled(1.0 / n, w)});
    }
    return basis;
}

TangentVector Manifold::zero_tangent(const Point& x) const {
    check_point(x);
    return TangentVector{x, std::vector<double>(ambient_dim_, 0.0)};
}

bool Manifold::same_space(const Manifold& other) const {
    return kind_ == other.kind_ && ambient_dim_ == other.ambient_dim_ &&
           origin_.coords == other.origin_.coords;
}

void require_same_space(const Manifold& a, const Manifold& b, const char* where) {
    if (!a.same_space(b))
        throw input_error(std::string(where) + ": operands live on different manifolds");
}

TangentVector scalar_gradient(const Manifold& m, const ScalarField& field, const Point& x,
                              const FDConfig& cfg) {
    cfg.validate();
    m.check_point(x);
    if (!field.value) throw input_error("scalar_gradient: field has no value function");
    if (field.gradient) {
        TangentVector g = field.gradient(x);
        m.check_tangent(g);
        if (g.base.coords != x.coords) throw input_error("scalar_gradient: hook returned a misplaced vector");
        return m.project_tangent(x, g.components);  // clears sub-tolerance drift
    }

    auto basis = m.tangent_basis(x);
    double h = cfg.grad_step * (1.0 + norm2(x.coords));
    auto along = [&](const TangentVector& e, double t) {
        Point p = m.exp_map(x, TangentVector{x, scaled(t, e.components)});
        double val = field.value(p);
        if (!std::isfinite(val)) throw numeric_error("scalar_gradient: non-finite field value");
        return val;
    };
    std::vector<double> comps(m.ambient_dim(), 0.0);
    for (const auto& e : basis) {
        auto central = [&](double step) { return (along(e, step) - along(e, -step)) / (2.0 * step); };
        double d = central(h);
        if (cfg.grad_richardson) d = (4.0 * central(0.5 * h) - d) / 3.0;
        for (int i = 0; i < m.ambient_dim(); ++i) comps[i] += d * e.components[i];
    }
    return TangentVector{x, std::move(comps)};
}

}  // namespace mcalc
