#pragma once

// Periodic box [0, 2pi)^3 with a uniform n^3 collocation grid. Velocity
// fields are stored either as physical samples or as full complex Fourier
// coefficient cubes (no half-spectrum packing).
//
// Normalisation: the forward transform divides by n^3, so coefficients are
// Fourier-series coefficients and
//     sum_k |u_k|^2 == mean_x |u(x)|^2,   ||u||_{L2}^2 == (2pi)^3 sum_k |u_k|^2.
//
// Memory layout of every cube: index(i1, i2, i3) = i1 + n*(i2 + n*i3), i.e.
// the x1 index runs fastest.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace fracns {

using Complex = std::complex<double>;
using ComplexCube = std::vector<Complex>;
using RealCube = std::vector<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Box volume (2pi)^3.
inline constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;

class BoxSpec {
public:
    /// Throws std::invalid_argument unless n is a power of two and n >= 16.
    explicit BoxSpec(int n);

    int n() const { return n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double dx() const { return kTwoPi / n_; }
    double length() const { return kTwoPi; }

    /// Integer wavenumber of an axis index: {0, 1, ..., n/2, -n/2+1, ..., -1}.
    int wavenumber(int index) const { return index <= n_ / 2 ? index : index - n_; }
    /// Axis index of a wavenumber in (-n/2, n/2].
    int axis_index(int k) const { return k >= 0 ? k : k + n_; }
    bool is_nyquist(int index) const { return index == n_ / 2; }

    std::size_t index(int i1, int i2, int i3) const {
        return static_cast<std::size_t>(i1) +
               static_cast<std::size_t>(n_) * (static_cast<std::size_t>(i2) +
                                               static_cast<std::size_t>(n_) * i3);
    }
    /// Index of the mode -k (mod n on every axis).
    std::size_t conjugate_index(int i1, int i2, int i3) const {
        return index((n_ - i1) % n_, (n_ - i2) % n_, (n_ - i3) % n_);
    }

    friend bool operator==(const BoxSpec&, const BoxSpec&) = default;

private:
    int n_;
};

struct Wavevector {
    int k1, k2, k3;
    int norm_sq() const { return k1 * k1 + k2 * k2 + k3 * k3; }
    int max_abs() const;
};

/// Calls fn(flat_index, wavevector) for every mode of the box, in storage order.
void for_each_mode(const BoxSpec& box, const std::function<void(std::size_t, Wavevector)>& fn);

struct ScalarSpectral {
    BoxSpec box;
    ComplexCube c;

    static ScalarSpectral zeros(const BoxSpec& box);
};

struct ScalarPhysical {
    BoxSpec box;
    RealCube v;

    static ScalarPhysical zeros(const BoxSpec& box);
};

/// Divergence-free velocity in Fourier space (the solver state).
struct SpectralField {
    BoxSpec box;
    std::array<ComplexCube, 3> c;

    static SpectralField zeros(const BoxSpec& box);

    ScalarSpectral component(int d) const { return {box, c[d]}; }
    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator*=(double a);
};

SpectralField operator*(double a, SpectralField f);

struct PhysicalField {
    BoxSpec box;
    std::array<RealCube, 3> v;

    static PhysicalField zeros(const BoxSpec& box);
};

/// Physical coordinate of grid index i along any axis.
inline double grid_coordinate(const BoxSpec& box, int i) { return box.dx() * i; }

/// Samples fn(x1, x2, x3) -> {u1, u2, u3} on the collocation grid.
PhysicalField sample(const BoxSpec& box,
                     const std::function<std::array<double, 3>(double, double, double)>& fn);
ScalarPhysical sample_scalar(const BoxSpec& box,
                             const std::function<double(double, double, double)>& fn);

// ---------------------------------------------------------------------------
// Transforms

PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& f);
ScalarPhysical to_physical(const ScalarSpectral& f);
ScalarSpectral to_spectral(const ScalarPhysical& f);

// ---------------------------------------------------------------------------
// Per-mode operators

/// u_k -> u_k - k (k . u_k) / |k|^2; identity on k = 0.
SpectralField leray_project(const SpectralField& f);

/// Zeroes every mode with max(|k1|,|k2|,|k3|) > n/3.
SpectralField dealias(const SpectralField& f);
ScalarSpectral dealias(const ScalarSpectral& f);
bool is_dealiased_mode(const BoxSpec& box, const Wavevector& k);

/// Spectral derivative d/dx_axis (axis 0..2). The Nyquist plane of the
/// differentiated axis is zeroed so the result stays Hermitian.
ScalarSpectral derivative(const ScalarSpectral& f, int axis);

/// grad[i][j] = d u_j / d x_i in physical space.
std::array<std::array<RealCube, 3>, 3> velocity_gradient(const SpectralField& f);

/// Pointwise Frobenius norm |grad u|(x).
RealCube gradient_magnitude(const SpectralField& f);

/// Spectral divergence.
ScalarSpectral divergence(const SpectralField& f);

/// Embeds into the 2n box (zero padding; Nyquist planes are split evenly
/// between +n/2 and -n/2 so Hermitian symmetry is kept).
ScalarSpectral pad(const ScalarSpectral& f);
SpectralField pad(const SpectralField& f);
/// Keeps modes with |k_i| < target.n()/2 on every axis.
ScalarSpectral truncate(const ScalarSpectral& f, const BoxSpec& target);
SpectralField truncate(const SpectralField& f, const BoxSpec& target);

/// Alias-free pointwise product of two band-limited scalars, returned on the
/// 2n box.
ScalarSpectral padded_product(const ScalarSpectral& a, const ScalarSpectral& b);

// ---------------------------------------------------------------------------
// Norms, inner products and invariant checks

/// (2pi)^3 sum_k conj(a_k) . b_k, real part.
double inner_product(const SpectralField& a, const SpectralField& b);
double inner_product(const ScalarSpectral& a, const ScalarSpectral& b);
double l2_norm_sq(const SpectralField& f);
double l2_norm(const SpectralField& f);
double l2_norm(const ScalarSpectral& f);
double max_abs_diff(const SpectralField& a, const SpectralField& b);
double max_abs_coeff(const SpectralField& f);

/// max_k |k . u_k| / max_k |u_k| over k != 0 (0 for the zero field).
double max_divergence(const SpectralField& f);
/// max_k |u_{-k} - conj(u_k)| relative to the largest coefficient.
double hermitian_defect(const SpectralField& f);
double hermitian_defect(const ScalarSpectral& f);
bool is_finite(const SpectralField& f);

/// Random smooth solenoidal field: Gaussian white noise filtered by
/// envelope(|k|), Nyquist planes and the mean removed, Leray-projected.
SpectralField random_solenoidal(const BoxSpec& box, const std::function<double(double)>& envelope,
                                std::uint64_t seed);

/// Mean of |u|^2 over the grid (equals sum_k |u_k|^2 for exact Parseval).
double grid_mean_square(const PhysicalField& f);
double grid_max_magnitude(const PhysicalField& f);

}  // namespace fracns
