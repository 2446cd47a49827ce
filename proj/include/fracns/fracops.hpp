#pragma once

// Fractional Laplacian (Fourier multiplier |k|^{2s}), fractional Sobolev and
// Lebesgue norms on the torus, Littlewood-Paley blocks and the Bony
// paraproduct split.

#include "fracns/grid.hpp"

#include <tuple>
#include <vector>

namespace fracns {

/// Exponent s of (-Delta)^s. The operator accepts s in (0, 2].
class FracOrder {
public:
    explicit FracOrder(double s);

    double value() const { return s_; }
    /// The range used by the regularity criterion, s in (1/2, 1).
    bool criterion_admissible() const { return s_ > 0.5 && s_ < 1.0; }

private:
    double s_;
};

SpectralField frac_laplacian(const SpectralField& f, FracOrder order);
ScalarSpectral frac_laplacian(const ScalarSpectral& f, FracOrder order);

/// ||(-Delta)^{s/2} f||_{L2} = sqrt((2pi)^3 sum_k |k|^{2s} |f_k|^2). Requires
/// s >= 0; s = 0 is the L2 norm. The mean mode contributes only at s = 0.
double sobolev_l2_norm(const SpectralField& f, double s);
double sobolev_l2_norm(const ScalarSpectral& f, double s);

/// Collocation quadrature of (int |u|^q dx)^{1/q} over the torus, |u| the
/// Euclidean magnitude. q = infinity returns the grid maximum. Throws
/// std::invalid_argument for q < 1.
double lq_norm(const SpectralField& f, double q);
double lq_norm(const PhysicalField& f, double q);
double lq_norm(const ScalarSpectral& f, double q);

/// ||(-Delta)^{s/2} f|| / (||(-Delta)^{s1/2} f||^{1-theta} ||(-Delta)^{s2/2} f||^theta)
/// with theta = (s - s1)/(s2 - s1); at most 1 by Hoelder in frequency. Returns 0
/// for the zero field. Requires 0 <= s1 < s < s2.
double interpolation_ratio(const SpectralField& f, double s, double s1, double s2);

/// ||(-Delta)^s u||_{Lq} / (||(-Delta)^s u||^{1-alpha} ||(-Delta)^{s+1/2} u||^alpha)
/// with alpha = (3/2)(1/2 - 1/q). Returns 0 for the zero field.
double gagliardo_nirenberg_ratio(const SpectralField& u, double s, double q);

// ---------------------------------------------------------------------------
// Littlewood-Paley

/// Radial cutoff: 1 on [0,1], 0 on [2, inf), exp(1 - 1/(1 - t^2)) with
/// t = r - 1 in between.
double lp_phi(double r);
/// psi(r) = phi(r) - phi(2r).
double lp_psi(double r);

struct LPBands {
    int j_min = 0;
    int j_max = 0;

    /// j_min = 0, j_max = ceil(log2(sqrt(3) n / 2)) so that every grid
    /// wavevector lies inside the covered range.
    static LPBands for_box(const BoxSpec& box);
};

/// Delta_j f: multiplies each mode by psi(2^{-j}|k|).
ScalarSpectral lp_project(const ScalarSpectral& f, int j, const LPBands& bands);
SpectralField lp_project(const SpectralField& f, int j, const LPBands& bands);
/// S_{j_min - 1} f = phi(2^{1 - j_min}|k|) f, the block below the first band.
ScalarSpectral lp_low_block(const ScalarSpectral& f, const LPBands& bands);
SpectralField lp_low_block(const SpectralField& f, const LPBands& bands);

/// sum_j ||Delta_j f||^2 / ||f - S_{j_min} f||^2 over the bands of `bands`.
double lp_energy_ratio(const SpectralField& f, const LPBands& bands);

struct BonyParts {
    ScalarSpectral t_f_g;  ///< sum_j S_{j-2} f Delta_j g
    ScalarSpectral t_g_f;  ///< sum_j S_{j-2} g Delta_j f
    ScalarSpectral rest;   ///< sum_{|i-j|<=1} Delta_i f Delta_j g
};

/// Exact paraproduct split; all products are formed on the 2n box, so the
/// returned fields live there and sum to f*g.
BonyParts bony_decompose(const ScalarSpectral& f, const ScalarSpectral& g, const LPBands& bands);

struct BonyVectorParts {
    SpectralField t_f_g, t_g_f, rest;
};
/// Componentwise split of f_i g_i.
BonyVectorParts bony_decompose(const SpectralField& f, const SpectralField& g, const LPBands& bands);

}  // namespace fracns
