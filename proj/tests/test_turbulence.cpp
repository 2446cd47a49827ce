#include "fields.hpp"

#include "fracns/fracops.hpp"
#include "fracns/solver.hpp"
#include "fracns/turbulence.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace fracns;
using fracns::testing::shear;

TEST_CASE("shell indexing") {
    CHECK(shell_index({0, 0, 0}) == 0);
    CHECK(shell_index({1, 0, 0}) == 1);
    CHECK(shell_index({1, 1, 0}) == 1);
    CHECK(shell_index({1, 1, 1}) == 2);
    CHECK(shell_index({0, -3, 0}) == 3);
    CHECK(max_shell(BoxSpec(16)) == shell_index({8, 8, 8}));
}

TEST_CASE("shell spectrum satisfies Parseval") {
    const BoxSpec box(16);
    InitSpec spec{InitKind::RandomSpectrum, 1.0};
    spec.peak_k = 3;
    const auto u = make_initial(spec, box, 7);
    const auto sp = shell_spectrum(u, 0.1);
    CHECK(sp.total_energy() == doctest::Approx(l2_norm_sq(u) / (2.0 * kBoxVolume)).epsilon(1e-13));
    CHECK(sp.eps == doctest::Approx(2.0 * 0.1 * sobolev_moment(u, 1.0)).epsilon(1e-13));
    CHECK(sobolev_moment(u, 0.75) ==
          doctest::Approx(std::pow(sobolev_l2_norm(u, 0.75), 2) / (2.0 * kBoxVolume)).epsilon(1e-13));

    const auto one = shell_spectrum(to_spectral(shear(box)), 0.1);
    for (std::size_t i = 0; i < one.k.size(); ++i) CHECK(one.e_k[i] == doctest::Approx(one.k[i] == 1 ? 0.25 : 0.0));
}

TEST_CASE("nonlinear transfer conserves energy") {
    const BoxSpec box(16);
    const auto u = make_initial({InitKind::TaylorGreen, 1.0}, box);
    const auto tf = transfer_flux(u);
    CHECK(tf.scale > 0.0);
    CHECK(tf.relative_residual() < 1e-12);
    CHECK(std::abs(tf.pi_k.back()) < 1e-12 * tf.scale);
    for (std::size_t i = 0; i < tf.t_k.size(); ++i) {
        double cum = 0.0;
        for (std::size_t j = 0; j <= i; ++j) cum += tf.t_k[j];
        CHECK(tf.pi_k[i] == doctest::Approx(-cum));
    }
    auto sp = shell_spectrum(u, 0.1);
    attach_transfer(sp, u);
    CHECK(sp.t_k == tf.t_k);
    CHECK(transfer_flux(SpectralField::zeros(box)).relative_residual() == 0.0);
}

TEST_CASE("flux deviation report") {
    const std::vector<double> flat(10, 2.0);
    const auto r = flux_deviation_bound(flat, 2.0, 2, 0.75, 0.1);
    CHECK(r.empirical_c == 0.0);
    CHECK(r.weight_exponent == doctest::Approx(0.1 * 0.5 / 1.5));

    // |Pi - eps| = eps / (1 + ln(k/k0))^w gives C = 1.
    const double w = 0.1 * 0.5 / 1.5;
    std::vector<double> pi;
    for (int k = 1; k <= 20; ++k) pi.push_back(2.0 + 2.0 / std::pow(1.0 + std::log(double(k)), w));
    CHECK(flux_deviation_bound(pi, 2.0, 1, 0.75, 0.1).empirical_c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(flux_deviation_bound(pi, 0.0, 1, 0.75, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(flux_deviation_bound(pi, 1.0, 0, 0.75, 0.1), std::invalid_argument);
}

TEST_CASE("second-order structure function of a shear") {
    const BoxSpec box(32);
    const auto sf = structure_functions(shear(box), {1.0, 2.0}, 8);
    REQUIRE(sf.r.size() == 9);
    for (std::size_t i = 0; i < sf.r.size(); ++i) {
        const double a = sf.separation(int(i));
        CHECK(sf.per_axis[1][1][i] == doctest::Approx(2.0 * std::pow(std::sin(a / 2.0), 2)).epsilon(1e-12));
        CHECK(sf.per_axis[0][1][i] == doctest::Approx(0.0));
        CHECK(sf.s_p[1][i] == doctest::Approx(sf.per_axis[1][1][i] / 3.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(structure_functions(shear(box), {}, 4), std::invalid_argument);
    CHECK_THROWS_AS(structure_functions(shear(box), {2.0}, 16), std::invalid_argument);
}

TEST_CASE("multifractal exponents") {
    const auto m = MultifractalParams::make(0.75, 0.5);
    CHECK(m.sigma2 == doctest::Approx(3.0));
    CHECK(zeta_p(2.0, m) == doctest::Approx(2.0).epsilon(1e-14));
    for (double d : {0.0, 0.1, 1.0}) CHECK(zeta_p(3.0, MultifractalParams::make(0.8, d)) == doctest::Approx(1.0));
    CHECK(singularity_spectrum(m.h0, m) == doctest::Approx(3.0));
    CHECK(singularity_spectrum_d0(m.h0 + std::sqrt(6.0), m) == doctest::Approx(2.0));
    CHECK(singularity_spectrum(m.h0 + std::sqrt(6.0), m) == doctest::Approx(5.0 / 3.0));
    CHECK_THROWS_AS(MultifractalParams::make(0.5, 0.1), std::domain_error);
    CHECK_THROWS_AS(MultifractalParams::make(0.75, -0.1), std::domain_error);
}

TEST_CASE("numerical Legendre transform matches the exact transform of D_delta") {
    for (double s : {0.6, 0.75, 0.9})
        for (double d : {0.0, 0.05, 0.5}) {
            const auto m = MultifractalParams::make(s, d);
            for (double p : {1.0, 3.0, 6.0, 8.0}) {
                const double exact = p / 3.0 - p * p * m.sigma2 * (1.0 + d) / (2.0 * (1.0 + 2.0 * d));
                CHECK(legendre_zeta(p, m) == doctest::Approx(exact).epsilon(1e-9).scale(1.0));
            }
        }
}

TEST_CASE("spectrum model") {
    CHECK(spectrum_model(1.0, 1.0, 8.0, 0.3, 0.1, 1.5) == doctest::Approx(1.5 * 4.0));
    CHECK(spectrum_model(std::exp(1.0), 1.0, 1.0, 1.0, 0.0, 1.0) ==
          doctest::Approx(1.5 * std::pow(std::exp(1.0), -5.0 / 3.0)));
    CHECK_THROWS_AS(spectrum_model(0.5, 1.0, 1.0, 0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_model(1.0, 0.0, 1.0, 0.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("spectrum fit recovers synthetic parameters") {
    ShellSpectrum sp;
    sp.eps = 1.0;
    sp.nu = 1e-3;
    for (int k = 1; k <= 40; ++k) {
        sp.k.push_back(k);
        sp.e_k.push_back(k < 2 ? 1.0 : spectrum_model(k, 2.0, 1.0, 0.7, 0.1, 1.6));
    }
    const auto fit = fit_spectrum_model(sp, 2.0, 0.1);
    CHECK(fit.c_kolm == doctest::Approx(1.6).epsilon(1e-6));
    CHECK(fit.beta_t == doctest::Approx(0.7).epsilon(1e-5));
    CHECK(fit.residual < 1e-8);
    CHECK(fit.shells_used == 39);

    ShellSpectrum few = sp;
    few.k.resize(5);
    few.e_k.resize(5);
    CHECK_THROWS_AS(fit_spectrum_model(few, 2.0, 0.1), InsufficientBandError);
}

TEST_CASE("beta time law and epsilon decay") {
    std::vector<double> t, b;
    const double gamma = 0.6;
    for (int i = 0; i <= 30; ++i) {
        t.push_back(0.5 * i);
        b.push_back(2.0 / std::pow(1.0 + gamma * t.back(), 2.0 * gamma / 3.0));
    }
    const auto f = fit_beta_time_law(t, b, gamma);
    CHECK(f.beta0 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.alpha_model == doctest::Approx(0.4));
    CHECK(f.residual_model < 1e-10);
    CHECK(f.alpha_free == doctest::Approx(0.4).epsilon(1e-6));
    CHECK_THROWS_AS(fit_beta_time_law(std::span(t).first(1), std::span(b).first(1), gamma), std::invalid_argument);

    CHECK(eps_decay_model(0.0, 3.0, 2.0) == 3.0);
    CHECK(eps_decay_model(1.0, 3.0, 1.0) == doctest::Approx(1.5));
}

TEST_CASE("local intermittency measure") {
    const BoxSpec box(32);
    const auto lim = lim_field(shear(box), 2);
    double mean = 0.0;
    for (double v : lim.values) mean += v;
    mean /= double(lim.values.size());
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(lim.degenerate);
    // d(x) ~ cos^2(x2 + r dx / 2): max over mean is 2, attained for even r.
    CHECK(lim.max_value == doctest::Approx(2.0).epsilon(1e-12));

    const auto zero = lim_field(to_physical(SpectralField::zeros(box)), 1);
    CHECK(zero.degenerate);
    for (double v : zero.values) CHECK(v == 1.0);
    CHECK_THROWS_AS(lim_field(shear(box), 0), std::invalid_argument);
    CHECK_THROWS_AS(lim_field(shear(box), 16), std::invalid_argument);
}

TEST_CASE("exceptional set and kappa") {
    RealCube g(100);
    for (int i = 0; i < 100; ++i) g[i] = i;
    const auto es = exceptional_set(g, 89.5);
    CHECK(es.measure_fraction == doctest::Approx(0.1));
    CHECK(es.mask[95] == 1);
    CHECK(es.mask[5] == 0);
    CHECK_THROWS_AS(exceptional_set(g, 0.0), std::invalid_argument);

    CHECK(kappa_eps(std::exp(-4.0), 1.0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK_THROWS_AS(kappa_eps(1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(kappa_eps(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("tail fit recovers a stretched exponential") {
    const double delta = 0.5, rate = 2.0;
    std::mt19937_64 rng(12345);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(10000);
    // P(X > lambda) = exp(-rate lambda^{1/(1+delta)})
    for (auto& v : x) v = std::pow(expo(rng) / rate, 1.0 + delta);
    const auto f = tail_fit(x, delta);
    CHECK_FALSE(f.degenerate);
    CHECK(f.c_rate == doctest::Approx(rate).epsilon(0.1));
    CHECK(f.c == doctest::Approx(1.0).epsilon(0.3));
    CHECK(f.points_used >= 900);

    CHECK_THROWS_AS(tail_fit(std::span(x).first(50), delta), InsufficientSamplesError);
    const std::vector<double> flat(200, 1.0);
    CHECK(tail_fit(flat, delta).degenerate);
}
