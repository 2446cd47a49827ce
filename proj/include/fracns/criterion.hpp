#pragma once

// Parameter algebra and the running monitor for the logarithmically improved
// regularity integral
//     int_0^T ||(-Delta)^s u||_{Lq}^p (1 + ln(e + ||(-Delta)^s u||_{Lq}))^{-delta} dt,
// with 2/p + 3/q = 2s - 1. Natural logarithms throughout.

#include "fracns/grid.hpp"
#include "fracns/solver.hpp"

#include <utility>
#include <vector>

namespace fracns {

/// p = 2 / (2s - 1 - 3/q). Throws std::domain_error when s is outside
/// (1/2, 1) or q <= 3/(2s - 1).
double solve_scaling(double s, double q);

/// delta_0 = min{(q - 3)/(6q), (2s - 1)/(4s)}.
double delta_max(double s, double q);

/// theta = (3/2) q / (3q - 2), the gradient interpolation exponent.
double gradient_theta(double q);

struct ThetaPIdentity {
    double theta_p;
    bool equals_two;  ///< |theta p - 2| < 1e-10
};

/// Evaluates theta * p. The value is reported, not assumed to be 2.
ThetaPIdentity theta_p_identity(double s, double q);

struct CriterionParams {
    double s = 0.75;
    double q = 12.0;
    double p = 8.0;
    double delta = 0.05;
    double eta = 0.01;
    double nu = 0.1;

    /// Validates s, q, delta < delta_0 and mu < 1, and derives p.
    /// Throws std::domain_error naming the violated constraint.
    static CriterionParams make(double s, double q, double delta, double eta, double nu);
};

/// (1 + ln(e + x))^{-delta}
double log_weight(double x, double delta);

/// X^p (1 + ln(e + X))^{-delta} for a precomputed X >= 0.
double criterion_integrand_value(double x, const CriterionParams& params);

struct CriterionSample {
    double frac_lq;    ///< X = ||(-Delta)^s u||_{Lq}
    double integrand;  ///< X^p (1 + ln(e + X))^{-delta}
};

CriterionSample criterion_integrand(const SpectralField& u, const CriterionParams& params);

struct CriterionState {
    double integral = 0.0;
    double last_t = 0.0;
    double last_value = 0.0;
    bool started = false;  ///< a baseline sample has been taken
    std::vector<std::pair<double, double>> samples;  ///< (t, integrand)
};

/// Trapezoidal accumulation. The first sample only sets the baseline.
/// Throws std::invalid_argument when t <= last_t or value < 0.
CriterionState accumulate(CriterionState state, double t, double value);

struct SmallnessResult {
    bool holds;
    double lhs;  ///< ||(-Delta)^{s/2} u0||_{Lq}
    double rhs;  ///< c0 / (1 + ln(e + ||u0||_{H^s}))^delta
};

SmallnessResult smallness_check(const SpectralField& u0, const CriterionParams& params, double c0 = 1.0);

/// Run monitor that appends frac_lq, criterion_integrand, criterion_integral.
class CriterionMonitor {
public:
    explicit CriterionMonitor(CriterionParams params, CriterionState state = {})
        : params_(params), state_(std::move(state)) {}

    void operator()(const Snapshot& snap, DiagnosticRecord& rec);
    const CriterionState& state() const { return state_; }

private:
    CriterionParams params_;
    CriterionState state_;
};

}  // namespace fracns
