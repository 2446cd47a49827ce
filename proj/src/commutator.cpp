#include "fracns/commutator.hpp"

#include "fracns/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracns {

namespace {

// (a . grad) b on the grid of a and b (both already on the same box).
PhysicalField advect(const PhysicalField& a, const SpectralField& b) {
    const auto grad = velocity_gradient(b);  // grad[j][i] = d b_i / d x_j
    auto out = PhysicalField::zeros(a.box);
    const std::size_t count = a.box.size();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (std::size_t x = 0; x < count; ++x) out.v[i][x] += a.v[j][x] * grad[j][i][x];
    return out;
}

double max_gradient(const SpectralField& u) {
    const auto g = gradient_magnitude(u);
    return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
}

}  // namespace

SpectralField commutator(const SpectralField& u, double s) {
    const FracOrder order(s);
    const auto big = pad(u);
    const auto big_phys = to_physical(big);
    auto first = frac_laplacian(to_spectral(advect(big_phys, big)), order);
    const auto second = to_spectral(advect(big_phys, frac_laplacian(big, order)));
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < first.c[d].size(); ++i) first.c[d][i] -= second.c[d][i];
    return first;
}

double default_sigma(double s) { return 0.1 * (1.0 - s); }

CommutatorReport lemma31_report(const SpectralField& u, double s, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0 - s)) throw std::invalid_argument("lemma31_report: need 0 < sigma < 1 - s");
    CommutatorReport r;
    r.lhs = l2_norm(commutator(u, s));
    const double grad_inf = max_gradient(u);
    const double log_term = std::log(std::numbers::e + sobolev_l2_norm(u, 2.0 * (s + sigma)));
    r.term_a = grad_inf * sobolev_l2_norm(u, 2.0 * s) * log_term;
    r.term_b = grad_inf * sobolev_l2_norm(u, 2.0 * s + 1.0) / log_term;
    const double denom = r.term_a + r.term_b;
    r.ratio = denom > 0.0 ? r.lhs / denom : 0.0;
    return r;
}

Lemma21Report lemma21_report(const ScalarSpectral& f, const ScalarSpectral& g, double s) {
    if (!(s > 0.5 && s < 1.0)) throw std::invalid_argument("lemma21_report: s must lie in (1/2, 1)");
    if (!(f.box == g.box)) throw std::invalid_argument("lemma21_report: box mismatch");
    const FracOrder order(s);
    const auto fg = frac_laplacian(padded_product(f, g), order);
    const auto f_lg = padded_product(f, frac_laplacian(g, order));
    ScalarSpectral diff = fg;
    for (std::size_t i = 0; i < diff.c.size(); ++i) diff.c[i] -= f_lg.c[i];

    Lemma21Report r;
    r.lhs = l2_norm(diff);
    double grad_inf = 0.0;
    {
        std::array<ScalarPhysical, 3> df{to_physical(derivative(f, 0)), to_physical(derivative(f, 1)),
                                         to_physical(derivative(f, 2))};
        for (std::size_t x = 0; x < f.box.size(); ++x)
            grad_inf = std::max(grad_inf, std::sqrt(df[0].v[x] * df[0].v[x] + df[1].v[x] * df[1].v[x] +
                                                    df[2].v[x] * df[2].v[x]));
    }
    r.rhs = grad_inf * sobolev_l2_norm(g, 2.0 * s - 1.0);
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

SpectralField commutator_ensemble_field(const BoxSpec& box, std::uint64_t seed) {
    return random_solenoidal(box, [](double k) { return std::exp(-0.2 * k * k); }, seed);
}

EnsembleSummary commutator_ensemble(int n, int count, std::uint64_t first_seed, double s, double sigma) {
    const BoxSpec box(n);
    EnsembleSummary out;
    out.reports.reserve(count);
    for (int i = 0; i < count; ++i) {
        out.reports.push_back(lemma31_report(commutator_ensemble_field(box, first_seed + i), s, sigma));
        out.max_ratio = std::max(out.max_ratio, out.reports.back().ratio);
    }
    return out;
}

}  // namespace fracns
