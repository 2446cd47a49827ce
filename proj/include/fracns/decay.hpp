#pragma once

// Decay-estimate parameter chain, the comparison ODE Z' = c Z^{1+mu}, the
// algebraic envelope C ||(-Delta)^s u0|| / (1 + beta t)^gamma, and an Osgood
// bound evaluator for the modulus Gamma(y) = y ln(e + y).

#include "fracns/solver.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace fracns {

/// alpha = (3/2)(1/2 - 1/q), the Gagliardo-Nirenberg exponent.
double gn_alpha(double q);
/// mu = theta (1 - alpha) / (2 - theta alpha) + eta.
double nonlinear_mu(double q, double eta);

struct DecayParams {
    double theta = 0.0;
    double alpha = 0.0;
    double mu = 0.0;
    double gamma = 0.0;  ///< 1 / (2 mu)
    double beta = 0.0;   ///< mu c_fit / 2
    double c_fit = 1.0;
};

/// Throws std::domain_error for s outside (1/2, 1), q <= 3, eta <= 0 or mu >= 1.
DecayParams derive_params(double s, double q, double eta, double c_fit);

/// 1 / (mu c y0^mu); +infinity when y0 == 0.
double comparison_blowup_time(double y0, double mu, double c);

/// Z(t) = y0 / (1 - mu c y0^mu t)^{1/mu}. Throws std::domain_error at or after
/// the blow-up time.
double comparison_ode(double y0, double mu, double c, double t);

/// c_fit sqrt(y0) / (1 + beta t)^gamma; bounds the norm, not its square.
double envelope(double y0, const DecayParams& params, double t);

struct DecayEnvelope {
    double y0 = 0.0;
    DecayParams params;
    double blowup_time = std::numeric_limits<double>::infinity();

    double norm_bound(double t) const { return envelope(y0, params, t); }
};

struct EnvelopeCalibration {
    DecayEnvelope envelope;
    std::size_t calibration_samples = 0;
    std::size_t held_out_samples = 0;
    std::size_t held_out_violations = 0;
    double worst_margin = 0.0;  ///< min over held-out samples of (bound - measured) / bound
};

/// Chooses the smallest c_fit >= 1 whose envelope bounds the first
/// `calibration_fraction` of the samples, then counts violations on the rest.
/// `norms` are measured ||(-Delta)^s u(t)||_{L2}; y0 = norms[0]^2.
EnvelopeCalibration calibrate_envelope(std::span<const double> times, std::span<const double> norms, double s,
                                       double q, double eta, double calibration_fraction = 0.1);

struct ComparisonCheck {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t beyond_blowup = 0;  ///< samples past Z's blow-up time (trivially bounded)
};

/// Counts samples with Y(t) > Z(t), Y = norms^2.
ComparisonCheck comparison_principle_check(std::span<const double> times, std::span<const double> norms, double mu,
                                           double c);

/// Decay rate: minus the least-squares slope of ln(norm) against ln(t) over
/// samples with t >= t_min.
double late_time_decay_exponent(std::span<const double> times, std::span<const double> norms, double t_min);

/// Run monitor that appends ys_l2 = ||(-Delta)^s u||_{L2}^2.
class DecayMonitor {
public:
    explicit DecayMonitor(double s) : s_(s) {}
    void operator()(const Snapshot& snap, DiagnosticRecord& rec) const;

private:
    double s_;
};

// ---------------------------------------------------------------------------

/// G(r) = int_1^r dy / (y ln(e + y)) by adaptive Gauss-Kronrod quadrature.
double osgood_g(double r);

/// G^{-1}(G(rho0) + gamma_integral): the largest value rho can reach when
/// rho <= rho0 + int gamma Gamma(rho). Bisection on [rho0, rho0 * 1e12],
/// expanding the bracket as needed. Throws std::invalid_argument for rho0 <= 0.
double osgood_bound(double rho0, double gamma_integral);

struct LogPolyPair {
    double lhs;        ///< y ln(e + sqrt(y))
    double rhs_shape;  ///< 1 + y^{1 + eta}
};

LogPolyPair log_poly_bound_check(double y, double eta);

/// sup of lhs / rhs_shape over a log-spaced grid on [0, y_max]; the minimal
/// constant C_eta on that grid.
double log_poly_constant(double eta, double y_max = 1e8, std::size_t points = 20001);

}  // namespace fracns
