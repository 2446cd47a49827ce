#include "fracns/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracns {

FracOrder::FracOrder(double s) : s_(s) {
    if (!(s > 0.0 && s <= 2.0))
        throw std::invalid_argument("FracOrder: s must lie in (0, 2], got " + std::to_string(s));
}

namespace {

// |k|^{2s} per mode, 0 on the mean.
std::vector<double> frac_multiplier(const BoxSpec& box, double s) {
    std::vector<double> m(box.size());
    for_each_mode(box, [&](std::size_t i, Wavevector k) {
        const int k2 = k.norm_sq();
        m[i] = k2 == 0 ? 0.0 : std::pow(double(k2), s);
    });
    return m;
}

double weighted_sum(const BoxSpec& box, const ComplexCube* comps, int ncomp, double s) {
    double acc = 0.0;
    for_each_mode(box, [&](std::size_t i, Wavevector k) {
        const int k2 = k.norm_sq();
        double w;
        if (k2 == 0) w = s == 0.0 ? 1.0 : 0.0;
        else w = s == 0.0 ? 1.0 : std::pow(double(k2), s);
        double e = 0.0;
        for (int d = 0; d < ncomp; ++d) e += std::norm(comps[d][i]);
        acc += w * e;
    });
    return acc;
}

double lq_from_magnitudes(const BoxSpec& box, const RealCube& mag, double q) {
    if (std::isinf(q)) return mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
    const double cell = std::pow(box.dx(), 3);
    double sum = 0.0;
    for (double m : mag) sum += std::pow(m, q);
    return std::pow(sum * cell, 1.0 / q);
}

void check_q(double q) {
    if (std::isnan(q) || q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1 or infinity");
}

}  // namespace

SpectralField frac_laplacian(const SpectralField& f, FracOrder order) {
    const auto m = frac_multiplier(f.box, order.value());
    SpectralField out = f;
    for (auto& comp : out.c)
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= m[i];
    return out;
}

ScalarSpectral frac_laplacian(const ScalarSpectral& f, FracOrder order) {
    const auto m = frac_multiplier(f.box, order.value());
    ScalarSpectral out = f;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] *= m[i];
    return out;
}

double sobolev_l2_norm(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_l2_norm: order must be >= 0");
    return std::sqrt(kBoxVolume * weighted_sum(f.box, f.c.data(), 3, s));
}

double sobolev_l2_norm(const ScalarSpectral& f, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_l2_norm: order must be >= 0");
    return std::sqrt(kBoxVolume * weighted_sum(f.box, &f.c, 1, s));
}

double lq_norm(const PhysicalField& f, double q) {
    check_q(q);
    RealCube mag(f.box.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::sqrt(f.v[0][i] * f.v[0][i] + f.v[1][i] * f.v[1][i] + f.v[2][i] * f.v[2][i]);
    return lq_from_magnitudes(f.box, mag, q);
}

double lq_norm(const SpectralField& f, double q) {
    check_q(q);
    return lq_norm(to_physical(f), q);
}

double lq_norm(const ScalarSpectral& f, double q) {
    check_q(q);
    auto p = to_physical(f);
    for (auto& v : p.v) v = std::abs(v);
    return lq_from_magnitudes(f.box, p.v, q);
}

double interpolation_ratio(const SpectralField& f, double s, double s1, double s2) {
    if (!(s1 >= 0.0 && s1 < s && s < s2)) throw std::invalid_argument("interpolation_ratio: need 0 <= s1 < s < s2");
    const double theta = (s - s1) / (s2 - s1);
    const double num = sobolev_l2_norm(f, s);
    if (num == 0.0) return 0.0;
    return num / (std::pow(sobolev_l2_norm(f, s1), 1.0 - theta) * std::pow(sobolev_l2_norm(f, s2), theta));
}

double gagliardo_nirenberg_ratio(const SpectralField& u, double s, double q) {
    const double alpha = 1.5 * (0.5 - 1.0 / q);
    const double num = lq_norm(frac_laplacian(u, FracOrder(s)), q);
    if (num == 0.0) return 0.0;
    return num / (std::pow(sobolev_l2_norm(u, 2.0 * s), 1.0 - alpha) * std::pow(sobolev_l2_norm(u, 2.0 * s + 1.0), alpha));
}

// ---------------------------------------------------------------------------

double lp_phi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double t = r - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double lp_psi(double r) { return lp_phi(r) - lp_phi(2.0 * r); }

LPBands LPBands::for_box(const BoxSpec& box) {
    const double kmax = std::sqrt(3.0) * box.n() / 2.0;
    return {0, static_cast<int>(std::ceil(std::log2(kmax)))};
}

namespace {

void check_band(int j, const LPBands& bands) {
    if (j < bands.j_min || j > bands.j_max)
        throw std::invalid_argument("lp_project: band index outside [j_min, j_max]");
}

ScalarSpectral apply_radial(const ScalarSpectral& f, const std::function<double(double)>& m) {
    ScalarSpectral out = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) { out.c[i] *= m(std::sqrt(double(k.norm_sq()))); });
    return out;
}

SpectralField apply_radial(const SpectralField& f, const std::function<double(double)>& m) {
    SpectralField out = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        const double w = m(std::sqrt(double(k.norm_sq())));
        for (auto& comp : out.c) comp[i] *= w;
    });
    return out;
}

}  // namespace

ScalarSpectral lp_project(const ScalarSpectral& f, int j, const LPBands& bands) {
    check_band(j, bands);
    const double scale = std::ldexp(1.0, -j);
    return apply_radial(f, [scale](double r) { return lp_psi(scale * r); });
}

SpectralField lp_project(const SpectralField& f, int j, const LPBands& bands) {
    check_band(j, bands);
    const double scale = std::ldexp(1.0, -j);
    return apply_radial(f, [scale](double r) { return lp_psi(scale * r); });
}

ScalarSpectral lp_low_block(const ScalarSpectral& f, const LPBands& bands) {
    const double scale = std::ldexp(1.0, 1 - bands.j_min);
    return apply_radial(f, [scale](double r) { return lp_phi(scale * r); });
}

SpectralField lp_low_block(const SpectralField& f, const LPBands& bands) {
    const double scale = std::ldexp(1.0, 1 - bands.j_min);
    return apply_radial(f, [scale](double r) { return lp_phi(scale * r); });
}

double lp_energy_ratio(const SpectralField& f, const LPBands& bands) {
    double bands_sq = 0.0;
    for (int j = bands.j_min; j <= bands.j_max; ++j) bands_sq += l2_norm_sq(lp_project(f, j, bands));
    const double scale = std::ldexp(1.0, -bands.j_min);
    SpectralField high = f;
    for_each_mode(f.box, [&](std::size_t i, Wavevector k) {
        const double w = 1.0 - lp_phi(scale * std::sqrt(double(k.norm_sq())));
        for (auto& comp : high.c) comp[i] *= w;
    });
    const double denom = l2_norm_sq(high);
    if (denom == 0.0) throw std::invalid_argument("lp_energy_ratio: field has no energy above the low block");
    return bands_sq / denom;
}

BonyParts bony_decompose(const ScalarSpectral& f, const ScalarSpectral& g, const LPBands& bands) {
    if (!(f.box == g.box)) throw std::invalid_argument("bony_decompose: box mismatch");
    const auto pf = pad(f);
    const auto pg = pad(g);
    const BoxSpec& big = pf.box;

    // Physical values of the blocks: index 0 is the low block, b >= 1 is Delta_{j_min + b - 1}.
    const int nblocks = bands.j_max - bands.j_min + 2;
    std::vector<RealCube> bf(nblocks), bg(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        ScalarSpectral sf = b == 0 ? lp_low_block(pf, bands) : lp_project(pf, bands.j_min + b - 1, bands);
        ScalarSpectral sg = b == 0 ? lp_low_block(pg, bands) : lp_project(pg, bands.j_min + b - 1, bands);
        bf[b] = to_physical(sf).v;
        bg[b] = to_physical(sg).v;
    }

    const std::size_t count = big.size();
    RealCube tfg(count, 0.0), tgf(count, 0.0), rest(count, 0.0);
    RealCube low_f(count, 0.0), low_g(count, 0.0);  // sum of blocks a <= b - 2
    for (int b = 0; b < nblocks; ++b) {
        if (b >= 2)
            for (std::size_t x = 0; x < count; ++x) {
                low_f[x] += bf[b - 2][x];
                low_g[x] += bg[b - 2][x];
            }
        for (std::size_t x = 0; x < count; ++x) {
            tfg[x] += low_f[x] * bg[b][x];
            tgf[x] += low_g[x] * bf[b][x];
            double near = bf[b][x];
            if (b > 0) near += bf[b - 1][x];
            if (b + 1 < nblocks) near += bf[b + 1][x];
            rest[x] += near * bg[b][x];
        }
    }
    return {to_spectral(ScalarPhysical{big, std::move(tfg)}), to_spectral(ScalarPhysical{big, std::move(tgf)}),
            to_spectral(ScalarPhysical{big, std::move(rest)})};
}

BonyVectorParts bony_decompose(const SpectralField& f, const SpectralField& g, const LPBands& bands) {
    const BoxSpec big(2 * f.box.n());
    BonyVectorParts out{SpectralField::zeros(big), SpectralField::zeros(big), SpectralField::zeros(big)};
    for (int d = 0; d < 3; ++d) {
        auto parts = bony_decompose(f.component(d), g.component(d), bands);
        out.t_f_g.c[d] = std::move(parts.t_f_g.c);
        out.t_g_f.c[d] = std::move(parts.t_g_f.c);
        out.rest.c[d] = std::move(parts.rest.c);
    }
    return out;
}

}  // namespace fracns
