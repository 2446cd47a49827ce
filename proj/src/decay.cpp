#include "fracns/decay.hpp"

#include "fracns/criterion.hpp"
#include "fracns/fracops.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracns {

double gn_alpha(double q) { return 1.5 * (0.5 - 1.0 / q); }

double nonlinear_mu(double q, double eta) {
    const double theta = gradient_theta(q);
    const double alpha = gn_alpha(q);
    return theta * (1.0 - alpha) / (2.0 - theta * alpha) + eta;
}

DecayParams derive_params(double s, double q, double eta, double c_fit) {
    if (!(s > 0.5 && s < 1.0)) throw std::domain_error("derive_params: s must lie in (1/2, 1)");
    if (!(q > 3.0)) throw std::domain_error("derive_params: q must be > 3");
    if (!(eta > 0.0)) throw std::domain_error("derive_params: eta must be > 0");
    if (!(c_fit > 0.0)) throw std::domain_error("derive_params: c_fit must be > 0");
    DecayParams p;
    p.theta = gradient_theta(q);
    p.alpha = gn_alpha(q);
    p.mu = nonlinear_mu(q, eta);
    if (!(p.mu < 1.0)) throw std::domain_error("derive_params: eta makes mu >= 1");
    p.gamma = 1.0 / (2.0 * p.mu);
    p.c_fit = c_fit;
    p.beta = p.mu * c_fit / 2.0;
    return p;
}

double comparison_blowup_time(double y0, double mu, double c) {
    if (y0 <= 0.0 || c <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (mu * c * std::pow(y0, mu));
}

double comparison_ode(double y0, double mu, double c, double t) {
    if (y0 == 0.0) return 0.0;
    const double base = 1.0 - mu * c * std::pow(y0, mu) * t;
    if (!(base > 0.0)) throw std::domain_error("comparison_ode: t is at or beyond the blow-up time");
    return y0 / std::pow(base, 1.0 / mu);
}

double envelope(double y0, const DecayParams& params, double t) {
    return params.c_fit * std::sqrt(y0) / std::pow(1.0 + params.beta * t, params.gamma);
}

namespace {

bool bounds_all(std::span<const double> times, std::span<const double> norms, std::size_t count, double y0,
                const DecayParams& p) {
    for (std::size_t i = 0; i < count; ++i)
        // sqrt(norms[0]^2) may differ from norms[0] in the last bit.
        if (envelope(y0, p, times[i]) * (1.0 + 1e-12) < norms[i]) return false;
    return true;
}

}  // namespace

EnvelopeCalibration calibrate_envelope(std::span<const double> times, std::span<const double> norms, double s,
                                       double q, double eta, double calibration_fraction) {
    if (times.size() != norms.size() || times.size() < 2)
        throw std::invalid_argument("calibrate_envelope: need matching series with >= 2 samples");
    const double y0 = norms[0] * norms[0];
    const std::size_t ncal =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(calibration_fraction * times.size())), 1,
                                times.size());

    // Log-spaced scan from c = 1, then bisection between the last failure and
    // the first success.
    double lo = 1.0, hi = 1.0;
    bool found = bounds_all(times, norms, ncal, y0, derive_params(s, q, eta, 1.0));
    for (double c = 1.0; !found && c < 1e6;) {
        lo = c;
        c *= 1.25;
        if (bounds_all(times, norms, ncal, y0, derive_params(s, q, eta, c))) {
            hi = c;
            found = true;
        }
    }
    if (!found) throw std::runtime_error("calibrate_envelope: no c_fit in [1, 1e6] bounds the calibration window");
    if (hi > lo)
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (bounds_all(times, norms, ncal, y0, derive_params(s, q, eta, mid))) hi = mid;
            else lo = mid;
        }

    EnvelopeCalibration out;
    out.envelope.y0 = y0;
    out.envelope.params = derive_params(s, q, eta, hi);
    out.envelope.blowup_time = comparison_blowup_time(y0, out.envelope.params.mu, hi);
    out.calibration_samples = ncal;
    out.held_out_samples = times.size() - ncal;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = ncal; i < times.size(); ++i) {
        const double bound = out.envelope.norm_bound(times[i]);
        if (norms[i] > bound) ++out.held_out_violations;
        out.worst_margin = std::min(out.worst_margin, (bound - norms[i]) / bound);
    }
    return out;
}

ComparisonCheck comparison_principle_check(std::span<const double> times, std::span<const double> norms, double mu,
                                           double c) {
    ComparisonCheck out;
    if (norms.empty()) return out;
    const double y0 = norms[0] * norms[0];
    const double tstar = comparison_blowup_time(y0, mu, c);
    for (std::size_t i = 0; i < times.size(); ++i) {
        ++out.checked;
        if (times[i] >= tstar) {
            ++out.beyond_blowup;
            continue;
        }
        const double y = norms[i] * norms[i];
        // Y(0) = Z(0) exactly; allow rounding in the squared norm.
        if (y > comparison_ode(y0, mu, c, times[i]) * (1.0 + 1e-12)) ++out.violations;
    }
    return out;
}

double late_time_decay_exponent(std::span<const double> times, std::span<const double> norms, double t_min) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] <= 0.0 || norms[i] <= 0.0) continue;
        const double x = std::log(times[i]), y = std::log(norms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("late_time_decay_exponent: need >= 2 samples past t_min");
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("late_time_decay_exponent: degenerate time samples");
    return -(m * sxy - sx * sy) / denom;
}

void DecayMonitor::operator()(const Snapshot& snap, DiagnosticRecord& rec) const {
    const double norm = sobolev_l2_norm(snap.u, 2.0 * s_);
    rec.set("ys_l2", norm * norm);
}

// ---------------------------------------------------------------------------

double osgood_g(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("osgood_g: r must be > 0");
    if (r == 1.0) return 0.0;
    // Substitute y = e^x so the integrand 1 / ln(e + e^x) is smooth and slowly varying.
    auto integrand = [](double x) { return 1.0 / std::log(std::numbers::e + std::exp(x)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::log(r), 15, 1e-14);
}

double osgood_bound(double rho0, double gamma_integral) {
    if (!(rho0 > 0.0)) throw std::invalid_argument("osgood_bound: rho0 must be > 0");
    if (gamma_integral <= 0.0) return rho0;
    const double target = osgood_g(rho0) + gamma_integral;
    double lo = rho0;
    double hi = rho0 * 1e12;
    while (osgood_g(hi) < target) {
        lo = hi;
        hi *= 1e12;
        if (!std::isfinite(hi)) throw std::overflow_error("osgood_bound: bound exceeds double range");
    }
    // Bisect in log space; G is smooth and increasing.
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 200 && lhi - llo > 1e-15 * std::max(1.0, std::abs(lhi)); ++it) {
        const double mid = 0.5 * (llo + lhi);
        if (osgood_g(std::exp(mid)) < target) llo = mid;
        else lhi = mid;
    }
    return std::exp(0.5 * (llo + lhi));
}

LogPolyPair log_poly_bound_check(double y, double eta) {
    if (y < 0.0 || !(eta > 0.0)) throw std::invalid_argument("log_poly_bound_check: need y >= 0 and eta > 0");
    return {y * std::log(std::numbers::e + std::sqrt(y)), 1.0 + std::pow(y, 1.0 + eta)};
}

double log_poly_constant(double eta, double y_max, std::size_t points) {
    double best = 0.0;
    const double lmin = std::log10(1e-8), lmax = std::log10(y_max);
    for (std::size_t i = 0; i < points; ++i) {
        const double y = std::pow(10.0, lmin + (lmax - lmin) * double(i) / double(points - 1));
        const auto pr = log_poly_bound_check(y, eta);
        best = std::max(best, pr.lhs / pr.rhs_shape);
    }
    return best;
}

}  // namespace fracns
