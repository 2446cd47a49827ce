#include "fracns/grid.hpp"

#include "fracns/fft.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace fracns {

BoxSpec::BoxSpec(int n) : n_(n) {
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("BoxSpec: n must be a power of two >= 16, got " + std::to_string(n));
}

int Wavevector::max_abs() const {
    return std::max({std::abs(k1), std::abs(k2), std::abs(k3)});
}

void for_each_mode(const BoxSpec& box, const std::function<void(std::size_t, Wavevector)>& fn) {
    const int n = box.n();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < n; ++i3) {
        const int k3 = box.wavenumber(i3);
        for (int i2 = 0; i2 < n; ++i2) {
            const int k2 = box.wavenumber(i2);
            for (int i1 = 0; i1 < n; ++i1, ++idx) fn(idx, {box.wavenumber(i1), k2, k3});
        }
    }
}

ScalarSpectral ScalarSpectral::zeros(const BoxSpec& box) { return {box, ComplexCube(box.size())}; }
ScalarPhysical ScalarPhysical::zeros(const BoxSpec& box) { return {box, RealCube(box.size())}; }

SpectralField SpectralField::zeros(const BoxSpec& box) {
    return {box, {ComplexCube(box.size()), ComplexCube(box.size()), ComplexCube(box.size())}};
}

PhysicalField PhysicalField::zeros(const BoxSpec& box) {
    return {box, {RealCube(box.size()), RealCube(box.size()), RealCube(box.size())}};
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    assert(box == o.box);
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < c[d].size(); ++i) c[d][i] += o.c[d][i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& comp : c)
        for (auto& v : comp) v *= a;
    return *this;
}

SpectralField operator*(double a, SpectralField f) {
    f *= a;
    return f;
}

PhysicalField sample(const BoxSpec& box,
                     const std::function<std::array<double, 3>(double, double, double)>& fn) {
    auto out = PhysicalField::zeros(box);
    const int n = box.n();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < n; ++i3)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1, ++idx) {
                const auto u = fn(grid_coordinate(box, i1), grid_coordinate(box, i2), grid_coordinate(box, i3));
                for (int d = 0; d < 3; ++d) out.v[d][idx] = u[d];
            }
    return out;
}

ScalarPhysical sample_scalar(const BoxSpec& box, const std::function<double(double, double, double)>& fn) {
    auto out = ScalarPhysical::zeros(box);
    const int n = box.n();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < n; ++i3)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1, ++idx)
                out.v[idx] = fn(grid_coordinate(box, i1), grid_coordinate(box, i2), grid_coordinate(box, i3));
    return out;
}

// ---------------------------------------------------------------------------

ScalarPhysical to_physical(const ScalarSpectral& f) {
    ComplexCube work(f.box.size());
    fft::transform(f.box.n(), fft::Direction::Backward, f.c, work);
    auto out = ScalarPhysical::zeros(f.box);
    for (std::size_t i = 0; i < work.size(); ++i) out.v[i] = work[i].real();
    return out;
}

ScalarSpectral to_spectral(const ScalarPhysical& f) {
    ComplexCube in(f.v.begin(), f.v.end());
    auto out = ScalarSpectral::zeros(f.box);
    fft::transform(f.box.n(), fft::Direction::Forward, in, out.c);
    const double scale = 1.0 / static_cast<double>(f.box.size());
    for (auto& v : out.c) v *= scale;
    return out;
}

PhysicalField to_physical(const SpectralField& f) {
    assert(hermitian_defect(f) < 1e-10);
    PhysicalField out{f.box, {}};
    for (int d = 0; d < 3; ++d) out.v[d] = to_physical(f.component(d)).v;
    return out;
}

SpectralField to_spectral(const PhysicalField& f) {
    SpectralField out{f.box, {}};
    for (int d = 0; d < 3; ++d) out.c[d] = to_spectral(ScalarPhysical{f.box, f.v[d]}).c;
    return out;
}

// ---------------------------------------------------------------------------

SpectralField leray_project(const SpectralField& f) {
    SpectralField out = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        const int k2 = k.norm_sq();
        if (k2 == 0) return;
        const Complex kdotu = double(k.k1) * f.c[0][i] + double(k.k2) * f.c[1][i] + double(k.k3) * f.c[2][i];
        const Complex s = kdotu / double(k2);
        out.c[0][i] -= double(k.k1) * s;
        out.c[1][i] -= double(k.k2) * s;
        out.c[2][i] -= double(k.k3) * s;
    });
    return out;
}

bool is_dealiased_mode(const BoxSpec& box, const Wavevector& k) {
    // max|k_i| <= n/3 without floating point: 3 max|k_i| <= n
    return 3 * k.max_abs() <= box.n();
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        if (!is_dealiased_mode(f.box, k))
            for (auto& comp : out.c) comp[i] = 0.0;
    });
    return out;
}

ScalarSpectral dealias(const ScalarSpectral& f) {
    ScalarSpectral out = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        if (!is_dealiased_mode(f.box, k)) out.c[i] = 0.0;
    });
    return out;
}

ScalarSpectral derivative(const ScalarSpectral& f, int axis) {
    ScalarSpectral out = ScalarSpectral::zeros(f.box);
    const int nyq = f.box.n() / 2;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        const int ka = axis == 0 ? k.k1 : (axis == 1 ? k.k2 : k.k3);
        if (ka == nyq) return;
        out.c[i] = Complex(0.0, double(ka)) * f.c[i];
    });
    return out;
}

std::array<std::array<RealCube, 3>, 3> velocity_gradient(const SpectralField& f) {
    std::array<std::array<RealCube, 3>, 3> g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = to_physical(derivative(f.component(j), i)).v;
    return g;
}

RealCube gradient_magnitude(const SpectralField& f) {
    const auto g = velocity_gradient(f);
    RealCube out(f.box.size(), 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (std::size_t x = 0; x < out.size(); ++x) out[x] += g[i][j][x] * g[i][j][x];
    for (auto& v : out) v = std::sqrt(v);
    return out;
}

ScalarSpectral divergence(const SpectralField& f) {
    ScalarSpectral out = ScalarSpectral::zeros(f.box);
    for (int d = 0; d < 3; ++d) {
        const auto dd = derivative(f.component(d), d);
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += dd.c[i];
    }
    return out;
}

// ---------------------------------------------------------------------------

ScalarSpectral pad(const ScalarSpectral& f) {
    const int n = f.box.n();
    const BoxSpec big(2 * n);
    auto out = ScalarSpectral::zeros(big);
    // Each source axis index maps to one or two (Nyquist) target indices with weights.
    auto targets = [&](int index, int* tgt, double* w) -> int {
        const int k = f.box.wavenumber(index);
        if (f.box.is_nyquist(index)) {
            tgt[0] = big.axis_index(k);
            tgt[1] = big.axis_index(-k);
            w[0] = w[1] = 0.5;
            return 2;
        }
        tgt[0] = big.axis_index(k);
        w[0] = 1.0;
        return 1;
    };
    int t1[2], t2[2], t3[2];
    double w1[2], w2[2], w3[2];
    for (int i3 = 0; i3 < n; ++i3) {
        const int c3 = targets(i3, t3, w3);
        for (int i2 = 0; i2 < n; ++i2) {
            const int c2 = targets(i2, t2, w2);
            for (int i1 = 0; i1 < n; ++i1) {
                const int c1 = targets(i1, t1, w1);
                const Complex v = f.c[f.box.index(i1, i2, i3)];
                if (v == Complex(0.0)) continue;
                for (int a = 0; a < c1; ++a)
                    for (int b = 0; b < c2; ++b)
                        for (int c = 0; c < c3; ++c)
                            out.c[big.index(t1[a], t2[b], t3[c])] += w1[a] * w2[b] * w3[c] * v;
            }
        }
    }
    return out;
}

SpectralField pad(const SpectralField& f) {
    SpectralField out{BoxSpec(2 * f.box.n()), {}};
    for (int d = 0; d < 3; ++d) out.c[d] = pad(f.component(d)).c;
    return out;
}

ScalarSpectral truncate(const ScalarSpectral& f, const BoxSpec& target) {
    if (target.n() > f.box.n()) throw std::invalid_argument("truncate: target box is larger than source");
    auto out = ScalarSpectral::zeros(target);
    const int half = target.n() / 2;
    for_each_mode(target, [&](std::size_t i, Wavevector k) {
        if (std::abs(k.k1) >= half || std::abs(k.k2) >= half || std::abs(k.k3) >= half) return;
        out.c[i] = f.c[f.box.index(f.box.axis_index(k.k1), f.box.axis_index(k.k2), f.box.axis_index(k.k3))];
    });
    return out;
}

SpectralField truncate(const SpectralField& f, const BoxSpec& target) {
    SpectralField out{target, {}};
    for (int d = 0; d < 3; ++d) out.c[d] = truncate(f.component(d), target).c;
    return out;
}

ScalarSpectral padded_product(const ScalarSpectral& a, const ScalarSpectral& b) {
    if (!(a.box == b.box)) throw std::invalid_argument("padded_product: box mismatch");
    const auto pa = to_physical(pad(a));
    const auto pb = to_physical(pad(b));
    ScalarPhysical prod{pa.box, RealCube(pa.v.size())};
    for (std::size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = pa.v[i] * pb.v[i];
    return to_spectral(prod);
}

// ---------------------------------------------------------------------------

double inner_product(const ScalarSpectral& a, const ScalarSpectral& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.c.size(); ++i) s += (std::conj(a.c[i]) * b.c[i]).real();
    return kBoxVolume * s;
}

double inner_product(const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < a.c[d].size(); ++i) s += (std::conj(a.c[d][i]) * b.c[d][i]).real();
    return kBoxVolume * s;
}

double l2_norm_sq(const SpectralField& f) {
    double s = 0.0;
    for (const auto& comp : f.c)
        for (const auto& v : comp) s += std::norm(v);
    return kBoxVolume * s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

double l2_norm(const ScalarSpectral& f) {
    double s = 0.0;
    for (const auto& v : f.c) s += std::norm(v);
    return std::sqrt(kBoxVolume * s);
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < a.c[d].size(); ++i) m = std::max(m, std::abs(a.c[d][i] - b.c[d][i]));
    return m;
}

double max_abs_coeff(const SpectralField& f) {
    double m = 0.0;
    for (const auto& comp : f.c)
        for (const auto& v : comp) m = std::max(m, std::abs(v));
    return m;
}

double max_divergence(const SpectralField& f) {
    double worst = 0.0;
    double scale = 0.0;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        if (k.norm_sq() == 0) return;
        const double mag = std::sqrt(std::norm(f.c[0][i]) + std::norm(f.c[1][i]) + std::norm(f.c[2][i]));
        scale = std::max(scale, mag);
        const Complex kdotu = double(k.k1) * f.c[0][i] + double(k.k2) * f.c[1][i] + double(k.k3) * f.c[2][i];
        worst = std::max(worst, std::abs(kdotu) / std::sqrt(double(k.norm_sq())));
    });
    return scale > 0.0 ? worst / scale : 0.0;
}

double hermitian_defect(const ScalarSpectral& f) {
    const int n = f.box.n();
    double worst = 0.0, scale = 0.0;
    for (int i3 = 0; i3 < n; ++i3)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i1 = 0; i1 < n; ++i1) {
                const Complex a = f.c[f.box.index(i1, i2, i3)];
                const Complex b = f.c[f.box.conjugate_index(i1, i2, i3)];
                scale = std::max(scale, std::abs(a));
                worst = std::max(worst, std::abs(b - std::conj(a)));
            }
    return scale > 0.0 ? worst / scale : 0.0;
}

double hermitian_defect(const SpectralField& f) {
    double worst = 0.0;
    for (int d = 0; d < 3; ++d) worst = std::max(worst, hermitian_defect(f.component(d)));
    return worst;
}

bool is_finite(const SpectralField& f) {
    for (const auto& comp : f.c)
        for (const auto& v : comp)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

SpectralField random_solenoidal(const BoxSpec& box, const std::function<double(double)>& envelope,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto noise = PhysicalField::zeros(box);
    for (auto& comp : noise.v)
        for (auto& v : comp) v = normal(rng);
    auto f = to_spectral(noise);
    const int nyq = box.n() / 2;
    for_each_mode(box, [&](std::size_t i, Wavevector k) {
        const bool drop = k.norm_sq() == 0 || k.k1 == nyq || k.k2 == nyq || k.k3 == nyq;
        const double w = drop ? 0.0 : envelope(std::sqrt(double(k.norm_sq())));
        for (auto& comp : f.c) comp[i] *= w;
    });
    return leray_project(f);
}

double grid_mean_square(const PhysicalField& f) {
    double s = 0.0;
    for (const auto& comp : f.v)
        for (double v : comp) s += v * v;
    return s / static_cast<double>(f.box.size());
}

double grid_max_magnitude(const PhysicalField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.box.size(); ++i) {
        const double mag2 = f.v[0][i] * f.v[0][i] + f.v[1][i] * f.v[1][i] + f.v[2][i] * f.v[2][i];
        m = std::max(m, mag2);
    }
    return std::sqrt(m);
}

}  // namespace fracns
