#pragma once

#include <utility>

#include "mcalc/fd.hpp"
#include "mcalc/functionals.hpp"
#include "mcalc/measures.hpp"

namespace mcalc {

// Controls for integrating atom trajectories along a vector field.
struct FlowConfig {
    int substeps_per_unit = 64;  // RK4 steps per unit of flow time
    void validate() const;
};

// Endpoint of the flow of `v` started at x and run for `time` (RK4; on the
// sphere each stage is renormalized and the field re-projected, with a
// numeric_error if the trajectory drifts off the manifold).
Point flow_point(const Manifold& m, const VectorField& v, const Point& x, double time,
                 const FlowConfig& cfg);

// One-sided quotient ladder of s |-> (f(eta + s delta_x) - f(eta)) / s.
DerivativeEstimate extrinsic_fd(const Functional& f, const ParticleMeasure& eta, const Point& x,
                                const FDConfig& cfg);

// Same limit along s |-> f((1-s) mu + s delta_x); mu must carry unit mass
// (within 1e-9).  Equals the extrinsic derivative minus its mu-average.
DerivativeEstimate centered_extrinsic_fd(const Functional& f, const ParticleMeasure& mu,
                                         const Point& x, const FDConfig& cfg);

// Riemannian x-gradient of the extrinsic derivative: analytic hook when f
// has one, otherwise finite differences over the (analytic or quotient)
// extrinsic derivative.
TangentVector grad_extrinsic(const Functional& f, const ParticleMeasure& eta, const Point& x,
                             const FDConfig& cfg);

// Derivative along the flow of v: s |-> (f(flow_s(v)# eta) - f(eta)) / s.
// v must declare compact support.
DerivativeEstimate intrinsic_directional(const Functional& f, const ParticleMeasure& eta,
                                         const VectorField& v, const FDConfig& cfg,
                                         const FlowConfig& flow);

// Derivative along geodesic shifts: atoms move to exp_x(s v(x)).
DerivativeEstimate l_directional(const Functional& f, const ParticleMeasure& eta,
                                 const std::vector<TangentVector>& v, const FDConfig& cfg);
DerivativeEstimate l_directional(const Functional& f, const ParticleMeasure& eta,
                                 const VectorField& v, const FDConfig& cfg);

// Extrapolated limit of (1/s) grad_x f(eta + s delta_x); componentwise
// ladders over the FD schedule, projected back to the tangent space.
TangentVector l_field_via_dirac(const Functional& f, const ParticleMeasure& eta, const Point& x,
                                const FDConfig& cfg);

// The rescaled-gradient pair at weight s > 0:
//   first  = grad_x of y |-> f(eta + s delta_y) at x,
//   second = s * grad_extrinsic(f, eta + s delta_x, x).
// Equality of the two is the finite-weight form of the gradient identity.
std::pair<TangentVector, TangentVector> dirac_gradient(const Functional& f,
                                                       const ParticleMeasure& eta, double s,
                                                       const Point& x, const FDConfig& cfg);

}  // namespace mcalc
