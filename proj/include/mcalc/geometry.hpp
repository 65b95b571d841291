#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mcalc/fd.hpp"

namespace mcalc {

// -- small dense-vector helpers (ambient coordinates) -----------------------

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
std::vector<double> axpy(double a, const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> scaled(double a, const std::vector<double>& x);

// -- points and tangent vectors ---------------------------------------------

// A point in ambient coordinates.  For spheres the coordinates live on the
// unit sphere of R^d; for Euclidean space they are the point itself.
struct Point {
    std::vector<double> coords;

    int dim() const { return static_cast<int>(coords.size()); }
};

// A tangent vector anchored at `base`, stored in ambient coordinates.  On the
// sphere the components are orthogonal to the base point (within 1e-10).
struct TangentVector {
    Point base;
    std::vector<double> components;

    double norm() const;
};

enum class ManifoldKind { Euclidean, Sphere };

// Descriptor for the two supported spaces: R^d with the flat metric, and the
// unit sphere S^{d-1} embedded in R^d with the round metric.  `origin` is the
// reference point o used by the distance weight rho_o.
class Manifold {
 public:
    static Manifold euclidean(int dim);                  // o = 0
    static Manifold euclidean(int dim, Point origin);
    static Manifold sphere(int ambient_dim);             // o = last coordinate axis
    static Manifold sphere(int ambient_dim, Point origin);

    ManifoldKind kind() const { return kind_; }
    int ambient_dim() const { return ambient_dim_; }
    const Point& origin() const { return origin_; }
    std::string describe() const;  // "euclidean:2", "sphere:3"

    // Dimension check, plus unit-norm check (1e-12) on spheres.
    void check_point(const Point& x) const;
    // check_point on the base plus tangency check (1e-10) on spheres.
    void check_tangent(const TangentVector& v) const;

    double distance(const Point& x, const Point& y) const;
    double dist_origin(const Point& x) const;  // rho_o(x)

    // Geodesic exponential.  Sphere: |v| must stay below the injectivity
    // radius pi (domain_error otherwise); the result is renormalized.
    Point exp_map(const Point& x, const TangentVector& v) const;

    // Inverse of exp_map.  Sphere: x and y must not be antipodal
    // (distance >= pi - 1e-8 raises domain_error).
    TangentVector log_map(const Point& x, const Point& y) const;

    // Parallel transport along the unique minimizing geodesic from x to y.
    TangentVector parallel_transport(const Point& x, const Point& y,
                                     const TangentVector& v) const;

    // Orthogonal projection of an ambient vector onto the tangent space at x.
    TangentVector project_tangent(const Point& x, const std::vector<double>& ambient) const;

    // Deterministic orthonormal basis of the tangent space at x.
    std::vector<TangentVector> tangent_basis(const Point& x) const;

    TangentVector zero_tangent(const Point& x) const;

    bool same_space(const Manifold& other) const;

 private:
    Manifold(ManifoldKind k, int d, Point o) : kind_(k), ambient_dim_(d), origin_(std::move(o)) {}

    ManifoldKind kind_;
    int ambient_dim_;
    Point origin_;
};

void require_same_space(const Manifold& a, const Manifold& b, const char* where);

// -- scalar fields and their gradients ---------------------------------------

// A scalar field with an optional analytic gradient hook.  When the hook is
// present it is trusted and preferred over finite differences.
struct ScalarField {
    std::function<double(const Point&)> value;
    std::function<TangentVector(const Point&)> gradient;  // may be empty
};

// Riemannian gradient of `field` at x: the analytic hook when available,
// otherwise central differences along a tangent basis (geodesic stencils on
// the sphere).  Throws numeric_error on non-finite field values.
TangentVector scalar_gradient(const Manifold& m, const ScalarField& field, const Point& x,
                              const FDConfig& cfg);

}  // namespace mcalc
