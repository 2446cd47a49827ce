#include "fields.hpp"

#include "fracns/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <iomanip>

using namespace fracns;
using fracns::testing::shear;
using fracns::testing::taylor_green_2d;

// ||u(t=1)||^2 for A = 1, n = 32, nu = 0.05, dt = 0.01, pinned from the first run.
constexpr double kTaylorGreenEnergyAtOne = 45.577879413826366;

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.nu = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SolverConfig{};
    cfg.output_every = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(parse_init_kind("vortex"), std::invalid_argument);
    CHECK(parse_init_kind(to_string(InitKind::RandomSpectrum)) == InitKind::RandomSpectrum);
}

TEST_CASE("nonlinear term vanishes for shear, 2D Taylor-Green and zero") {
    const BoxSpec box(16);
    CHECK(max_abs_coeff(nonlinear_term(to_spectral(shear(box)))) < 1e-15);
    CHECK(max_abs_coeff(nonlinear_term(to_spectral(taylor_green_2d(box)))) < 1e-15);
    CHECK(max_abs_coeff(nonlinear_term(SpectralField::zeros(box))) == 0.0);
}

TEST_CASE("nonlinear term of 3D Taylor-Green is solenoidal and nonzero") {
    const BoxSpec box(16);
    const auto u = make_initial({InitKind::TaylorGreen, 1.0}, box);
    const auto n = nonlinear_term(u);
    CHECK(max_abs_coeff(n) > 0.01);
    CHECK(max_divergence(n) < 1e-13);
    CHECK(std::abs(inner_product(u, n)) < 1e-13 * l2_norm(u) * l2_norm(n));
}

TEST_CASE("single-mode shear decays exactly") {
    const BoxSpec box(16);
    auto u = to_spectral(shear(box, 0.7));
    const auto u0 = u;
    const double nu = 0.1, dt = 0.01;
    for (int i = 0; i < 100; ++i) u = step(u, nu, dt);
    const auto expected = std::exp(-nu * 1.0) * u0;
    CHECK(max_abs_diff(u, expected) < 1e-10);
}

TEST_CASE("2D Taylor-Green decays as exp(-2 nu t)") {
    const BoxSpec box(16);
    auto u = to_spectral(taylor_green_2d(box));
    const auto u0 = u;
    const double nu = 0.1, dt = 1e-3;
    for (int i = 0; i < 1000; ++i) u = step(u, nu, dt);
    const auto expected = std::exp(-2.0 * nu) * u0;
    CHECK(max_abs_diff(u, expected) < 1e-8 * max_abs_coeff(expected));
}

TEST_CASE("IF-RK4 converges at fourth order on 3D Taylor-Green") {
    const BoxSpec box(16);
    const auto u0 = make_initial({InitKind::TaylorGreen, 1.0}, box);
    const double nu = 0.05, t = 0.5;
    auto integrate = [&](double dt) {
        auto u = u0;
        const int steps = static_cast<int>(std::lround(t / dt));
        for (int i = 0; i < steps; ++i) u = step(u, nu, dt);
        return u;
    };
    const auto ref = integrate(0.05 / 8);
    const double e1 = max_abs_diff(integrate(0.05), ref);
    const double e2 = max_abs_diff(integrate(0.025), ref);
    const double ratio = e1 / e2;
    MESSAGE("error ratio dt -> dt/2: " << ratio);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("initial conditions") {
    const BoxSpec box(16);
    SUBCASE("Taylor-Green energy is (2pi)^3 / 8") {
        const auto u = make_initial({InitKind::TaylorGreen, 1.0}, box);
        CHECK(std::abs(0.5 * l2_norm_sq(u) - kBoxVolume / 8.0) < 1e-12 * kBoxVolume);
        CHECK(max_divergence(u) < 1e-12);
    }
    SUBCASE("shear is sin(x2) and exactly divergence free") {
        const auto u = make_initial({InitKind::SingleModeShear, 1.0}, box);
        CHECK(max_abs_diff(u, to_spectral(shear(box))) < 1e-16);
        CHECK(max_divergence(u) == 0.0);
    }
    SUBCASE("random spectrum is deterministic, solenoidal and scaled") {
        InitSpec spec{InitKind::RandomSpectrum, 0.5};
        spec.peak_k = 3;
        const auto a = make_initial(spec, box, 42);
        const auto b = make_initial(spec, box, 42);
        for (int d = 0; d < 3; ++d) CHECK(a.c[d] == b.c[d]);
        CHECK(max_divergence(a) < 1e-12);
        CHECK(std::abs(std::sqrt(grid_mean_square(to_physical(a))) - 0.5) < 1e-12);
        const auto c = make_initial(spec, box, 43);
        CHECK(max_abs_diff(a, c) > 0.0);
        spec.peak_k = 6;
        CHECK_THROWS_AS(make_initial(spec, box, 1), std::invalid_argument);
    }
}

TEST_CASE("run records and energy identity") {
    const BoxSpec box(16);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.output_every = 1;
    SUBCASE("shear: equality to 1e-8") {
        const auto res = run({InitKind::SingleModeShear, 1.0}, box, cfg, {});
        REQUIRE(res.records.size() == 501);
        for (const auto& r : res.records) {
            CHECK(r.energy_ok);
            CHECK(std::abs(r.energy_lhs - res.records.front().l2_sq) < 1e-8 * res.records.front().l2_sq);
        }
        CHECK(res.records.back().t == doctest::Approx(0.5));
    }
    SUBCASE("zero initial data") {
        const auto res = run({InitKind::TaylorGreen, 0.0}, box, cfg, {});
        for (const auto& r : res.records) {
            CHECK(r.l2_sq == 0.0);
            CHECK(r.grad_sq == 0.0);
            CHECK(r.dissipation_integral == 0.0);
        }
    }
    SUBCASE("monitors see every sample and add columns") {
        cfg.output_every = 50;
        int calls = 0;
        std::vector<Monitor> monitors{[&](const Snapshot& s, DiagnosticRecord& r) {
            ++calls;
            r.set("step_twice", 2.0 * s.step);
        }};
        const auto res = run({InitKind::TaylorGreen, 0.1}, box, cfg, monitors);
        CHECK(calls == 11);
        CHECK(res.records.back().get("step_twice").value() == 1000.0);
        CHECK_FALSE(res.records.back().get("missing").has_value());
    }
}

TEST_CASE("CFL guard warns") {
    const BoxSpec box(16);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 0.5;
    cfg.t_end = 0.5;
    const auto res = run({InitKind::TaylorGreen, 1.0}, box, cfg, {});
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("CFL") != std::string::npos);
}

TEST_CASE("blow-up is detected and reported") {
    const BoxSpec box(16);
    SolverConfig cfg;
    cfg.nu = 1e-4;
    cfg.dt = 5.0;  // far beyond stability
    cfg.t_end = 500.0;
    cfg.output_every = 1;
    try {
        run({InitKind::TaylorGreen, 1.0}, box, cfg, {});
        FAIL("expected a blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.step() > 0);
        CHECK_FALSE(e.trail().empty());
    }
}

TEST_CASE("3D Taylor-Green regression at n=32") {
    const BoxSpec box(32);
    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.output_every = 10;
    const auto res = run({InitKind::TaylorGreen, 1.0}, box, cfg, {});
    for (std::size_t i = 1; i < res.records.size(); ++i) {
        CHECK(res.records[i].l2_sq < res.records[i - 1].l2_sq);
        CHECK(res.records[i].energy_ok);
        CHECK(std::isfinite(res.records[i].grad_sq));
    }
    const double e_end = res.records.back().l2_sq;
    MESSAGE("||u(1)||^2 = " << std::setprecision(17) << e_end);
    CHECK(e_end == doctest::Approx(kTaylorGreenEnergyAtOne).epsilon(1e-9));
}
