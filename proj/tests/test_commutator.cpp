#include "fields.hpp"

#include "fracns/commutator.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fracns;
using fracns::testing::shear;

TEST_CASE("commutator vanishes for shear and zero data") {
    const BoxSpec box(16);
    const auto c = commutator(to_spectral(shear(box)), 0.75);
    CHECK(c.box.n() == 32);
    CHECK(max_abs_coeff(c) < 1e-14);
    const auto r = lemma31_report(SpectralField::zeros(box), 0.75, default_sigma(0.75));
    CHECK(r.lhs == 0.0);
    CHECK(r.ratio == 0.0);
}

TEST_CASE("commutator is quadratic") {
    const BoxSpec box(16);
    const auto u = commutator_ensemble_field(box, 3);
    const double a = l2_norm(commutator(u, 0.75));
    CHECK(a > 0.0);
    CHECK(l2_norm(commutator(2.0 * u, 0.75)) == doctest::Approx(4.0 * a).epsilon(1e-12));
    CHECK(lemma31_report(2.0 * u, 0.75, 0.025).lhs == doctest::Approx(4.0 * a).epsilon(1e-12));
}

TEST_CASE("sigma range") {
    CHECK(default_sigma(0.75) == doctest::Approx(0.025));
    const auto u = commutator_ensemble_field(BoxSpec(16), 1);
    CHECK_THROWS_AS(lemma31_report(u, 0.75, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma31_report(u, 0.75, 0.25), std::invalid_argument);
    CHECK_NOTHROW(lemma31_report(u, 0.75, 0.2));
}

TEST_CASE("scalar commutator estimate on f = g = cos x1") {
    const BoxSpec box(16);
    const auto f = to_spectral(sample_scalar(box, [](double x, double, double) { return std::cos(x); }));
    const auto r = lemma21_report(f, f, 0.75);
    // (-Delta)^s cos^2 - cos (-Delta)^s cos = -1/2 + (sqrt2 - 1/2) cos 2x1.
    const double expected = std::sqrt(0.25 + std::pow(0.5 - std::numbers::sqrt2, 2) / 2.0) / std::sqrt(0.5);
    CHECK(r.ratio == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(std::sqrt(kBoxVolume / 2.0)).epsilon(1e-12));
}

TEST_CASE("ensemble fields are reproducible and smooth") {
    const BoxSpec box(16);
    const auto a = commutator_ensemble_field(box, 5);
    const auto b = commutator_ensemble_field(box, 5);
    CHECK(max_abs_diff(a, b) == 0.0);
    CHECK(max_abs_diff(a, commutator_ensemble_field(box, 6)) > 0.0);
    CHECK(max_divergence(a) < 1e-12);
    const auto ens = commutator_ensemble(16, 3, 1, 0.75, 0.025);
    REQUIRE(ens.reports.size() == 3);
    for (const auto& r : ens.reports) {
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
        CHECK(r.ratio <= ens.max_ratio);
    }
}
