#include "fracns/criterion.hpp"

#include "fracns/decay.hpp"
#include "fracns/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fracns {

double solve_scaling(double s, double q) {
    if (!(s > 0.5 && s < 1.0)) throw std::domain_error("scaling relation: s must lie in (1/2, 1)");
    const double two_over_p = 2.0 * s - 1.0 - 3.0 / q;
    // Points within rounding of the boundary q = 3/(2s - 1) count as on it.
    if (!(q > 3.0) || !(two_over_p > 1e-12 * (2.0 * s - 1.0))) {
        std::ostringstream os;
        os << "scaling relation 2/p + 3/q = 2s - 1 has no positive p: need q > 3/(2s-1) = " << 3.0 / (2.0 * s - 1.0)
           << ", got q = " << q;
        throw std::domain_error(os.str());
    }
    return 2.0 / two_over_p;
}

double delta_max(double s, double q) { return std::min((q - 3.0) / (6.0 * q), (2.0 * s - 1.0) / (4.0 * s)); }

double gradient_theta(double q) { return 1.5 * q / (3.0 * q - 2.0); }

ThetaPIdentity theta_p_identity(double s, double q) {
    const double tp = gradient_theta(q) * solve_scaling(s, q);
    return {tp, std::abs(tp - 2.0) < 1e-10};
}

CriterionParams CriterionParams::make(double s, double q, double delta, double eta, double nu) {
    CriterionParams p;
    p.s = s;
    p.q = q;
    p.p = solve_scaling(s, q);
    const double d0 = delta_max(s, q);
    if (!(delta > 0.0 && delta < d0)) {
        std::ostringstream os;
        os << "logarithmic exponent delta must lie in (0, delta_0) with delta_0 = min{(q-3)/(6q), (2s-1)/(4s)} = "
           << d0 << ", got delta = " << delta;
        throw std::domain_error(os.str());
    }
    p.delta = delta;
    if (!(eta > 0.0)) throw std::domain_error("eta must be > 0");
    if (!(nonlinear_mu(q, eta) < 1.0)) throw std::domain_error("eta too large: mu = theta(1-alpha)/(2-theta alpha) + eta must be < 1");
    p.eta = eta;
    if (!(nu > 0.0)) throw std::domain_error("nu must be > 0");
    p.nu = nu;
    return p;
}

double log_weight(double x, double delta) { return std::pow(1.0 + std::log(std::numbers::e + x), -delta); }

double criterion_integrand_value(double x, const CriterionParams& params) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, params.p) * log_weight(x, params.delta);
}

CriterionSample criterion_integrand(const SpectralField& u, const CriterionParams& params) {
    const double x = lq_norm(frac_laplacian(u, FracOrder(params.s)), params.q);
    return {x, criterion_integrand_value(x, params)};
}

CriterionState accumulate(CriterionState state, double t, double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("accumulate: integrand must be >= 0");
    if (state.started) {
        if (!(t > state.last_t)) throw std::invalid_argument("accumulate: sample times must increase");
        state.integral += 0.5 * (state.last_value + value) * (t - state.last_t);
    }
    state.started = true;
    state.last_t = t;
    state.last_value = value;
    state.samples.emplace_back(t, value);
    return state;
}

SmallnessResult smallness_check(const SpectralField& u0, const CriterionParams& params, double c0) {
    if (!(c0 > 0.0)) throw std::invalid_argument("smallness_check: c0 must be > 0");
    const double lhs = lq_norm(frac_laplacian(u0, FracOrder(params.s / 2.0)), params.q);
    const double hs = sobolev_l2_norm(u0, params.s);
    const double rhs = c0 * log_weight(hs, params.delta);
    return {lhs <= rhs, lhs, rhs};
}

void CriterionMonitor::operator()(const Snapshot& snap, DiagnosticRecord& rec) {
    const auto sample = criterion_integrand(snap.u, params_);
    state_ = accumulate(std::move(state_), snap.t, sample.integrand);
    rec.set("frac_lq", sample.frac_lq);
    rec.set("criterion_integrand", sample.integrand);
    rec.set("criterion_integral", state_.integral);
}

}  // namespace fracns
