#pragma once

#include <string>
#include <vector>

#include "mcalc/calculus.hpp"

namespace mcalc {

// One checked identity instance.  `pass` holds exactly when
// residual <= tolerance; residuals are relative to 1 + |lhs| unless a check
// documents otherwise.
struct VerificationReport {
    std::string identity;
    std::string instance;    // deterministic human-readable descriptor
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string diagnostic;      // non-empty when something needs explaining
    std::vector<double> ladder;  // raw quotients when a limit was involved

    std::string instance_hash() const;  // 16 hex chars over identity|instance
};

// A finitely supported random variable with an s-parametrized position path
// and declared initial velocities.  probabilities are positive and sum to 1;
// position(0,k) anchors velocity(k).
struct RandomFamily {
    Manifold manifold;
    std::vector<double> probabilities;
    std::function<Point(double, std::size_t)> position;
    std::function<TangentVector(std::size_t)> velocity;
    double q = 2.0;  // declared integrability exponent of the velocities

    ParticleMeasure law(double s) const;  // particle measure of the positions
    void validate() const;                // shape checks; throws input_error
};

// Flow derivative against the gradient pairing:
//   lhs = intrinsic_directional(f, eta, v),
//   rhs = l2_inner(grad_extrinsic field, v) in L^2(eta).
VerificationReport check_intrinsic_vs_grad(const Functional& f, const ParticleMeasure& eta,
                                           const VectorField& v, const FDConfig& cfg,
                                           const FlowConfig& flow, double tol = 1e-5,
                                           const std::string& instance = "");

// Geodesic-shift derivative against the flow derivative along the same field.
VerificationReport check_l_vs_intrinsic(const Functional& f, const ParticleMeasure& eta,
                                        const VectorField& v, const FDConfig& cfg,
                                        const FlowConfig& flow, double tol = 1e-5,
                                        const std::string& instance = "");

// Chord rule: f(gamma) - f(eta) equals the r-integral over [0,1] of the
// extrinsic derivative of the blend r*gamma + (1-r)*eta paired with the
// signed difference gamma - eta (integrated as two nonnegative sums).
VerificationReport check_lfd_identity(const Functional& f, const ParticleMeasure& eta,
                                      const ParticleMeasure& gamma, int n_q = 16,
                                      double tol = 1e-6, const FDConfig& cfg = FDConfig{},
                                      const std::string& instance = "");

// Density curve rule: f((1+h_eps) eta) - f(eta) equals the r-integral over
// [0,eps] of integrate(eta, D^E((1+h_r) eta) * hdot_r).
VerificationReport check_reweight_identity(const Functional& f, const ParticleMeasure& eta,
                                           const DensityPerturbation& pert, double eps,
                                           int n_q = 16, double tol = 1e-6,
                                           const FDConfig& cfg = FDConfig{},
                                           const std::string& instance = "");

// Rescaled-gradient identity at finite weight s, plus the s->0 ladder limit
// against grad_extrinsic.  residual = max(vector residual, ladder residual/10),
// so the vector part is held to tol and the ladder part to 10*tol.
VerificationReport check_dirac_gradient(const Functional& f, const ParticleMeasure& eta,
                                        double s, const Point& x, const FDConfig& cfg,
                                        double tol = 1e-6, const std::string& instance = "");

// Centered quotient against extrinsic quotient minus its mu-average.
VerificationReport check_centered(const Functional& f, const ParticleMeasure& mu, const Point& x,
                                  const FDConfig& cfg, double tol = 1e-6,
                                  const std::string& instance = "");

// Chain rule through the law of a discrete random variable:
//   d/ds f(law(s)) at 0+  ==  sum_k P_k <grad D^E f(law(0))(xi_0(k)), velocity(k)>.
// Declared velocities are cross-checked against a log-map quotient of the
// position path (input_error on disagreement).  Requires tag E11 or E11B.
VerificationReport check_distribution_derivative(const Functional& f, const RandomFamily& family,
                                                 const FDConfig& cfg, double tol = 1e-5,
                                                 const std::string& instance = "");

// Separation witness: at total mass 2 the oscillator functional's extrinsic
// ladder must fail to converge with spread >= the configured threshold while
// every geodesic-shift derivative is exactly 0.  Away from mass 2 only the
// exact-zero part applies (noted in the diagnostic).  residual encodes both:
// max(|l_directional value|, 0 if the oscillation requirement held else 1),
// tolerance 0.
VerificationReport check_counterexample(const ParticleMeasure& eta, const VectorField& v,
                                        const Point& x, const FDConfig& cfg,
                                        const std::string& instance = "");

}  // namespace mcalc
