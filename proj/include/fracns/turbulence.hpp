#pragma once

// Turbulence diagnostics: shell spectra, nonlinear transfer and flux,
// structure functions, the multifractal formulas, the modified Kolmogorov
// spectrum model and its fit, the local intermittency measure, exceptional
// sets, and the stretched-exponential tail fit.
//
// Ensemble averages are spatial averages over the periodic box.

#include "fracns/grid.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracns {

/// Shell index of a wavevector: floor(|k| + 1/2), i.e. shells [k - 1/2, k + 1/2).
int shell_index(const Wavevector& k);
/// Largest shell index present on the box.
int max_shell(const BoxSpec& box);

struct ShellSpectrum {
    std::vector<int> k;         ///< 1 .. k_max
    std::vector<double> e_k;    ///< sum over the shell of |u_k|^2 / 2
    std::vector<double> t_k;    ///< filled by transfer_flux, else zeros
    std::vector<double> pi_k;   ///< -cumulative sum of t_k
    double eps = 0.0;           ///< 2 nu sum_k |k|^2 |u_k|^2 / 2
    double nu = 0.0;
    double mean_energy = 0.0;   ///< |u_0|^2 / 2, excluded from the shells

    /// sum e_k + mean_energy == ||u||^2 / (2 (2pi)^3)
    double total_energy() const;
};

/// Bins |u_k|^2 / 2 into integer shells. t_k and pi_k are left at zero.
ShellSpectrum shell_spectrum(const SpectralField& u, double nu);

/// sum over modes of |k|^{2s} |u_k|^2 / 2; equals sobolev_l2_norm(u, s)^2 / (2 (2pi)^3).
double sobolev_moment(const SpectralField& u, double s);

struct TransferFlux {
    std::vector<double> t_k;   ///< shells 1 .. k_max
    std::vector<double> pi_k;  ///< -cumulative sum
    double total = 0.0;        ///< sum of t_k
    double scale = 0.0;        ///< Cauchy-Schwarz bound sqrt(sum |u_k|^2 sum |N_k|^2)
    /// |total| / scale (0 when scale == 0)
    double relative_residual() const { return scale == 0.0 ? 0.0 : std::abs(total) / scale; }
};

/// T(k) = sum over the shell of Re(conj(u_k) . N_k), N = -P[(u . grad) u].
TransferFlux transfer_flux(const SpectralField& u);

/// Fills t_k and pi_k of `spec` from transfer_flux(u).
void attach_transfer(ShellSpectrum& spec, const SpectralField& u);

struct FluxDeviationReport {
    std::vector<int> k;
    std::vector<double> ratio;  ///< |Pi(k) - eps| (1 + ln(k/k0))^w / eps
    double weight_exponent = 0.0;  ///< w = delta (2s - 1)/(2s)
    double empirical_c = 0.0;      ///< max ratio over k >= k0
};

/// Throws std::invalid_argument unless eps > 0 and k0 >= 1.
FluxDeviationReport flux_deviation_bound(std::span<const double> pi_k, double eps, int k0, double s, double delta);

// ---------------------------------------------------------------------------

struct StructureFunctions {
    std::vector<int> r;                           ///< separations in grid cells, 0 .. max_r
    std::vector<double> orders;
    std::vector<std::vector<double>> s_p;         ///< [order][r], averaged over the three axes
    std::array<std::vector<std::vector<double>>, 3> per_axis;  ///< [axis][order][r]

    double separation(int i) const { return r[i] * dx; }
    double dx = 0.0;
};

/// S_p(r) = < |u(x + r e_d) - u(x)|^p > over x and the three axes d, with
/// periodic wraparound. Throws std::invalid_argument for empty orders or
/// max_r outside [0, n/2).
StructureFunctions structure_functions(const PhysicalField& u, const std::vector<double>& orders, int max_r);

// ---------------------------------------------------------------------------

struct MultifractalParams {
    double s = 0.75;
    double delta = 0.1;
    double h0 = 1.0 / 3.0;
    double sigma2 = 3.0;  ///< (3 - 2s)/(2s - 1)

    /// Throws std::domain_error unless s in (1/2, 3/2) and delta >= 0.
    static MultifractalParams make(double s, double delta);
};

/// p/3 - p (p - 3) sigma^2 / (3 (1 + delta)).
double zeta_p(double p, const MultifractalParams& params);

/// D_delta(h) = D0(h) - delta/(1 + delta) (3 - D0(h)), D0(h) = 3 - (h - h0)^2 / (2 sigma^2).
double singularity_spectrum(double h, const MultifractalParams& params);
double singularity_spectrum_d0(double h, const MultifractalParams& params);

/// min_h [p h + 3 - D_delta(h)] by grid search on
/// [h0 - 6 sigma (1 + delta), h0 + 6 sigma (1 + delta)] with `h_points`
/// nodes, widened until the minimiser is interior, then parabolic refinement.
double legendre_zeta(double p, const MultifractalParams& params, int h_points = 4001);

// ---------------------------------------------------------------------------

/// C eps^{2/3} k^{-5/3} (1 + beta_t ln(k/k0) / (1 + ln(k/k0))^{1 + delta}).
/// Throws std::invalid_argument for k < k0 or k0 <= 0.
double spectrum_model(double k, double k0, double eps, double beta_t, double delta, double c_kolm);

class InsufficientBandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpectrumFit {
    double c_kolm = 0.0;
    double beta_t = 0.0;
    double residual = 0.0;  ///< RMS of log-space residuals
    double k_nu = 0.0;      ///< eps^{1/4} nu^{-3/4}
    int shells_used = 0;
};

/// Least squares in log space over shells with k0 <= k <= min(k_nu, k_max)
/// and E(k) > 0. Throws InsufficientBandError with fewer than 5 shells.
SpectrumFit fit_spectrum_model(const ShellSpectrum& spec, double k0, double delta);

struct BetaTimeFit {
    double beta0 = 0.0;
    double alpha_model = 0.0;  ///< 2 gamma / 3
    double residual_model = 0.0;  ///< RMS log residual with alpha fixed at alpha_model
    double alpha_free = 0.0;      ///< exponent from an unconstrained fit
    double residual_free = 0.0;
};

/// Fits beta(t) = beta0 / (1 + gamma t)^alpha to (t, beta) pairs with beta > 0.
/// Throws std::invalid_argument with fewer than 2 usable points.
BetaTimeFit fit_beta_time_law(std::span<const double> t, std::span<const double> beta, double gamma);

/// eps0 / (1 + gamma t)^{(3 gamma - 1)/2}
double eps_decay_model(double t, double eps0, double gamma);

// ---------------------------------------------------------------------------

struct LimResult {
    RealCube values;
    bool degenerate = false;  ///< zero mean increment; values are all ones
    double max_value = 0.0;
};

/// LIM_r(x) = d(x) / <d>, d(x) = (1/3) sum_axes |u(x + r e_d) - u(x)|^2.
/// Throws std::invalid_argument unless 1 <= r < n/2.
LimResult lim_field(const PhysicalField& u, int r);

struct ExceptionalSet {
    std::vector<std::uint8_t> mask;
    double measure_fraction = 0.0;
};

/// Points with grad_mag > threshold. Throws std::invalid_argument for threshold <= 0.
ExceptionalSet exceptional_set(const RealCube& grad_mag, double threshold);

/// delta/(1 + delta) ln(1/eps) / (1 + ln(1/eps)). Throws std::invalid_argument
/// unless 0 < eps_frac < 1 and delta > 0.
double kappa_eps(double eps_frac, double delta);

class InsufficientSamplesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TailFit {
    double c = 0.0;       ///< prefactor C
    double c_rate = 0.0;  ///< rate c in C exp(-c lambda^{1/(1+delta)})
    double residual = 0.0;
    bool degenerate = false;
    int points_used = 0;
};

/// Least squares of ln P(X > lambda) against lambda^{1/(1+delta)} over the
/// upper decile of the samples. Throws InsufficientSamplesError below 100 samples.
TailFit tail_fit(std::span<const double> samples, double delta);

}  // namespace fracns
