// Acceptance checks 1-11. `acceptance N` runs one criterion, no argument runs
// all. Each criterion prints one line per sub-check and a final
// "criterion N: PASS|FAIL" line; the exit code is 0 iff every selected
// criterion passed.

#include "fracns/checkpoint.hpp"
#include "fracns/cli/commands.hpp"
#include "fracns/cli/verify.hpp"
#include "fracns/commutator.hpp"
#include "fracns/criterion.hpp"
#include "fracns/decay.hpp"
#include "fracns/fracops.hpp"
#include "fracns/solver.hpp"
#include "fracns/turbulence.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace fracns;

namespace {

class Report {
public:
    explicit Report(int id) : id_(id) {}

    // measured <= tol passes.
    void check(const std::string& name, double measured, double tol) { check(name, measured, tol, measured <= tol); }
    void check(const std::string& name, double measured, double tol, bool ok) {
        std::printf("  criterion %d / %-44s %s measured=%.6e tol=%.3e\n", id_, name.c_str(), ok ? "PASS" : "FAIL",
                    measured, tol);
        all_ = all_ && ok;
    }
    bool finish(const std::string& title) const {
        std::printf("criterion %d: %s %s\n", id_, all_ ? "PASS" : "FAIL", title.c_str());
        std::fflush(stdout);
        return all_;
    }

private:
    int id_;
    bool all_ = true;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. Fractional Laplacian on single Fourier modes.
bool criterion1() {
    Report r(1);
    const BoxSpec box(16);
    const int ks[][3] = {{1, 0, 0}, {2, 0, 0}, {0, 3, 0}, {1, 1, 0}, {1, 2, 3}, {4, -1, 2}, {0, 0, 7}, {-3, 5, 1},
                         {2, 2, 2}, {6, 0, -6}};
    const double ss[] = {0.75, 0.3, 1.0, 1.7, 0.55, 2.0, 0.9, 0.1, 1.25, 0.6};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto& k = ks[i % 10];
        const double s = ss[(i + i / 10) % 10];
        const auto f = to_spectral(sample_scalar(box, [&](double x, double y, double z) {
            return std::cos(k[0] * x + k[1] * y + k[2] * z) + 0.5 * std::sin(k[0] * x + k[1] * y + k[2] * z);
        }));
        const auto g = frac_laplacian(f, FracOrder(s));
        const double expected = std::pow(double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), s);
        for (std::size_t m = 0; m < f.c.size(); ++m)
            if (std::abs(f.c[m]) > 1e-8) worst = std::max(worst, std::abs(g.c[m] / f.c[m] - expected) / expected);
    }
    r.check("20 (k, s) pairs, max relative error", worst, 1e-12);

    const auto f = to_spectral(sample_scalar(box, [](double x, double, double) { return std::cos(2.0 * x); }));
    const auto g = frac_laplacian(f, FracOrder(0.75));
    r.check("k=(2,0,0), s=0.75 gives 2^1.5", rel(l2_norm(g) / l2_norm(f), std::pow(2.0, 1.5)), 1e-12);
    return r.finish("spectral operator exactness");
}

// 2. Exact-solution regression.
bool criterion2() {
    Report r(2);
    const BoxSpec box(16);
    {
        auto u = make_initial({InitKind::SingleModeShear, 1.0}, box);
        const auto u0 = u;
        const double nu = 0.1, dt = 0.01;
        for (int i = 0; i < 100; ++i) u = step(u, nu, dt);
        r.check("shear after 100 steps, max coefficient error", max_abs_diff(u, std::exp(-nu * 100 * dt) * u0),
                1e-10);
    }
    {
        auto u = to_spectral(sample(box, [](double x, double y, double) {
            return std::array<double, 3>{std::cos(x) * std::sin(y), -std::sin(x) * std::cos(y), 0.0};
        }));
        const auto u0 = u;
        const double nu = 0.1, dt = 1e-3;
        for (int i = 0; i < 1000; ++i) u = step(u, nu, dt);
        const auto expected = std::exp(-2.0 * nu) * u0;
        r.check("2D Taylor-Green at t=1, relative error", max_abs_diff(u, expected) / max_abs_coeff(expected), 1e-8);
    }
    return r.finish("exact-solution regression");
}

// 3. Energy balance on monitored runs; transfer sums to zero.
bool criterion3() {
    Report r(3);
    struct Case {
        const char* name;
        InitSpec init;
        int n;
        double nu, dt, t_end;
    };
    InitSpec random{InitKind::RandomSpectrum, 1.0};
    random.peak_k = 3;
    const Case cases[] = {{"Taylor-Green A=1 n=32", {InitKind::TaylorGreen, 1.0}, 32, 0.05, 0.005, 1.0},
                          {"random spectrum n=16", random, 16, 0.02, 0.002, 0.5},
                          {"Taylor-Green A=0.01 n=16", {InitKind::TaylorGreen, 0.01}, 16, 0.1, 0.01, 2.0}};
    for (const auto& c : cases) {
        SolverConfig cfg;
        cfg.nu = c.nu;
        cfg.dt = c.dt;
        cfg.t_end = c.t_end;
        cfg.output_every = 10;
        cfg.seed = 11;
        double worst_transfer = 0.0;
        std::vector<Monitor> monitors{[&](const Snapshot& s, DiagnosticRecord&) {
            worst_transfer = std::max(worst_transfer, transfer_flux(s.u).relative_residual());
        }};
        InitSpec init = c.init;
        const auto res = run(init, BoxSpec(c.n), cfg, monitors);
        const double e0 = res.records.front().l2_sq;
        double worst = 0.0;
        bool all_ok = true;
        for (const auto& rec : res.records) {
            worst = std::max(worst, std::abs(rec.energy_lhs - e0) / e0);
            all_ok = all_ok && rec.energy_ok;
        }
        r.check(std::string(c.name) + ": energy balance", worst, 1e-6, worst <= 1e-6 && all_ok);
        r.check(std::string(c.name) + ": transfer sum", worst_transfer, 1e-8);
    }
    return r.finish("energy inequality and transfer conservation");
}

// 4. Legendre transform of D_delta against the closed-form zeta_p.
bool criterion4() {
    Report r(4);
    double zeta3 = 0.0, closed = 0.0, exact = 0.0;
    double ws = 0.0, wd = 0.0, wp = 0.0;
    for (double s : {0.6, 0.75, 0.9})
        for (double d : {0.01, 0.1, 0.5}) {
            const auto m = MultifractalParams::make(s, d);
            zeta3 = std::max(zeta3, std::abs(zeta_p(3.0, m) - 1.0));
            for (int i = 0; i <= 32; ++i) {
                const double p = 0.25 * i;
                const double lz = legendre_zeta(p, m);
                const double e = std::abs(lz - zeta_p(p, m));
                if (e > closed) {
                    closed = e;
                    ws = s;
                    wd = d;
                    wp = p;
                }
                const double analytic = p / 3.0 - p * p * m.sigma2 * (1.0 + d) / (2.0 * (1.0 + 2.0 * d));
                exact = std::max(exact, std::abs(lz - analytic));
            }
        }
    r.check("zeta_3 = 1", zeta3, 1e-12);
    r.check("numerical Legendre vs analytic transform of D_delta", exact, 1e-6);
    std::ostringstream where;
    where << "Legendre vs closed-form zeta_p (worst s=" << ws << " d=" << wd << " p=" << wp << ")";
    r.check(where.str(), closed, 1e-6);
    return r.finish("multifractal algebra equivalence");
}

// 5. Spectrum-model fit round trip.
bool criterion5() {
    Report r(5);
    struct Case {
        double c, beta, delta, k0, eps;
    };
    const Case cases[] = {{1.5, 0.5, 0.05, 1.0, 1.0}, {1.6, 2.0, 0.1, 2.0, 0.3}, {0.8, -0.2, 0.5, 1.0, 5.0},
                          {2.1, 0.0, 0.01, 3.0, 1.0}};
    double worst_param = 0.0, worst_res = 0.0;
    for (const auto& c : cases) {
        ShellSpectrum sp;
        sp.eps = c.eps;
        sp.nu = 1e-4;
        for (int k = 1; k <= 48; ++k) {
            sp.k.push_back(k);
            sp.e_k.push_back(k < c.k0 ? 1.0 : spectrum_model(k, c.k0, c.eps, c.beta, c.delta, c.c));
        }
        const auto fit = fit_spectrum_model(sp, c.k0, c.delta);
        worst_param = std::max(worst_param, rel(fit.c_kolm, c.c));
        worst_param = std::max(worst_param, c.beta == 0.0 ? std::abs(fit.beta_t) : rel(fit.beta_t, c.beta));
        worst_res = std::max(worst_res, fit.residual);
    }
    r.check("(C, beta) relative error", worst_param, 0.02);
    r.check("RMS log residual", worst_res, 1e-6);
    return r.finish("spectrum-model round trip");
}

// 6. Criterion monitor on the exact single-mode decay vs 1D quadrature.
bool criterion6() {
    Report r(6);
    const double a = 1.0, nu = 0.1, t_end = 1.0;
    const auto params = CriterionParams::make(0.75, 12.0, 0.05, 0.01, nu);
    SolverConfig cfg;
    cfg.nu = nu;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.output_every = 1;
    CriterionMonitor mon(params);
    std::vector<Monitor> monitors{std::ref(mon)};
    run({InitKind::SingleModeShear, a}, BoxSpec(16), cfg, monitors);

    // ||(-Delta)^s u(t)||_{Lq} = A e^{-nu t} ((2pi)^3 <|sin|^q>)^{1/q}.
    const double q = params.q;
    const double mean_sin_q =
        boost::math::tgamma((q + 1.0) / 2.0) / (std::sqrt(std::numbers::pi) * boost::math::tgamma(q / 2.0 + 1.0));
    const double lq_factor = std::pow(kBoxVolume * mean_sin_q, 1.0 / q);
    const auto integrand = [&](double t) {
        const double x = a * std::exp(-nu * t) * lq_factor;
        return std::pow(x, params.p) * std::pow(1.0 + std::log(std::numbers::e + x), -params.delta);
    };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, t_end, 15, 1e-14);
    r.check("monitor integral vs Gauss-Kronrod", rel(mon.state().integral, oracle), 1e-6);
    return r.finish("criterion monitor oracle");
}

// 7. Comparison ODE by finite differences; Osgood bound vs ODE oracles.
bool criterion7() {
    Report r(7);
    double fd = 0.0;
    for (double y0 : {0.1, 0.25, 1.0})
        for (double mu : {0.1, 0.5, 0.9})
            for (double c : {0.5, 2.0}) {
                const double tb = comparison_blowup_time(y0, mu, c);
                for (double frac : {0.1, 0.5, 0.9}) {
                    const double t = frac * tb;
                    const double h = 1e-4 * tb;
                    const double d = (-comparison_ode(y0, mu, c, t + 2 * h) + 8 * comparison_ode(y0, mu, c, t + h) -
                                      8 * comparison_ode(y0, mu, c, t - h) + comparison_ode(y0, mu, c, t - 2 * h)) /
                                     (12 * h);
                    fd = std::max(fd, rel(d, c * std::pow(comparison_ode(y0, mu, c, t), 1.0 + mu)));
                }
            }
    r.check("Z' = c Z^{1+mu} by finite differences", fd, 1e-6);

    double rk4 = 0.0, adaptive = 0.0;
    using State = std::vector<double>;
    for (double rho0 : {0.01, 0.5, 3.0, 100.0})
        for (double g : {0.1, 1.0, 3.0}) {
            const double b = osgood_bound(rho0, g);
            rk4 = std::max(rk4, rel(b, cli::osgood_ode_oracle(rho0, g)));
            State x{rho0};
            boost::numeric::odeint::integrate_adaptive(
                boost::numeric::odeint::make_controlled<boost::numeric::odeint::runge_kutta_dopri5<State>>(1e-13,
                                                                                                          1e-13),
                [](const State& y, State& dy, double) { dy[0] = y[0] * std::log(std::numbers::e + y[0]); }, x, 0.0, g,
                1e-4);
            adaptive = std::max(adaptive, rel(b, x[0]));
        }
    r.check("Osgood bound vs RK4 oracle", rk4, 1e-6);
    r.check("Osgood bound vs adaptive Dormand-Prince", adaptive, 1e-6);
    return r.finish("comparison ODE and Osgood evaluator");
}

// 8. Decay envelope on a small-data Taylor-Green run.
bool criterion8() {
    Report r(8);
    const BoxSpec box(16);
    const double s = 0.75, q = 12.0, eta = 0.01, nu = 0.1;
    const auto params = CriterionParams::make(s, q, 0.05, eta, nu);
    const InitSpec init{InitKind::TaylorGreen, 0.01};
    const auto small = smallness_check(make_initial(init, box), params, 1.0);
    r.check("smallness condition (lhs - rhs)", small.lhs - small.rhs, 0.0, small.holds);

    SolverConfig cfg;
    cfg.nu = nu;
    cfg.dt = 0.01;
    cfg.t_end = 5.0;
    cfg.output_every = 5;
    DecayMonitor mon(s);
    std::vector<Monitor> monitors{std::cref(mon)};
    const auto res = run(init, box, cfg, monitors);
    std::vector<double> t, norm;
    for (const auto& rec : res.records) {
        t.push_back(rec.t);
        norm.push_back(std::sqrt(rec.get("ys_l2").value()));
    }
    const auto cal = calibrate_envelope(t, norm, s, q, eta, 0.1);
    std::printf("  criterion 8 / c_fit=%.6g calibration=%zu held_out=%zu worst_margin=%.6g\n",
                cal.envelope.params.c_fit, cal.calibration_samples, cal.held_out_samples, cal.worst_margin);
    r.check("held-out envelope violations", double(cal.held_out_violations), 0.0,
            cal.held_out_violations == 0 && cal.held_out_samples > 0);
    return r.finish("decay envelope property");
}

// 9. Commutator ensemble: pinned maximum and fresh seeds.
bool criterion9() {
    Report r(9);
    const double s = 0.75, sigma = default_sigma(s);
    const auto pinned = commutator_ensemble(32, 100, 1, s, sigma);
    r.check("seeds 1..100 reproduce pinned R_max", rel(pinned.max_ratio, cli::pinned::kCommutatorRatioMax), 1e-9);
    const auto fresh = commutator_ensemble(32, 100, 1001, s, sigma);
    bool finite = true;
    for (const auto& rep : fresh.reports) finite = finite && std::isfinite(rep.ratio);
    r.check("fresh seeds 1001..1100 max ratio", fresh.max_ratio, 2.0 * cli::pinned::kCommutatorRatioMax,
            finite && fresh.max_ratio < 2.0 * cli::pinned::kCommutatorRatioMax);
    return r.finish("commutator ensemble stability");
}

// 10. Interpolation inequalities.
bool criterion10() {
    Report r(10);
    const BoxSpec box(16);
    const std::function<double(double)> envelope = [](double k) { return std::exp(-0.1 * k * k); };
    const std::function<double(double)> flat = [](double) { return 1.0; };
    double worst = 0.0;
    const double triples[][3] = {{0.5, 0.0, 1.0}, {1.0, 0.5, 2.0}, {1.5, 1.0, 3.0}, {0.75, 0.25, 1.75}};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto u = random_solenoidal(box, seed % 2 ? envelope : flat, seed);
        for (const auto& t : triples) worst = std::max(worst, interpolation_ratio(u, t[0], t[1], t[2]));
    }
    r.check("frequency interpolation constant", worst, 1.0 + 1e-10);

    double gn = 0.0;
    bool finite = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const double g = gagliardo_nirenberg_ratio(random_solenoidal(box, envelope, seed), 0.75, 12.0);
        finite = finite && std::isfinite(g);
        gn = std::max(gn, g);
    }
    r.check("Gagliardo-Nirenberg max reproduces pinned value", rel(gn, cli::pinned::kGagliardoNirenbergMax), 1e-9,
            finite && rel(gn, cli::pinned::kGagliardoNirenbergMax) <= 1e-9);
    return r.finish("interpolation inequalities");
}

// 11. Checkpoint round trip, deterministic reruns, resume, verify exit codes.
bool criterion11() {
    Report r(11);
    const BoxSpec box(16);
    InitSpec init{InitKind::RandomSpectrum, 0.5};
    init.peak_k = 3;
    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.dt = 0.005;
    cfg.t_end = 0.5;
    cfg.output_every = 10;
    cfg.seed = 5;

    const auto dir = std::filesystem::temp_directory_path() / ("fracns_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto u0 = to_physical(make_initial(init, box, cfg.seed));
    write_checkpoint(dir / "u0.fns", u0, 0.25);
    const auto back = read_checkpoint(dir / "u0.fns");
    bool same = back.time == 0.25;
    for (int d = 0; d < 3; ++d) same = same && back.field.v[d] == u0.v[d];
    r.check("checkpoint write/read bit-exact", same ? 0.0 : 1.0, 0.0, same);

    std::optional<PhysicalField> saved;
    RunStart saved_start;
    CheckpointPolicy policy;
    policy.every = 40;
    policy.final_checkpoint = false;
    policy.sink = [&](const PhysicalField& f, double, long step, const RunStart& acc) {
        if (step == 40) {
            saved = f;
            saved_start = acc;
        }
    };
    const auto a = run(init, box, cfg, {}, policy);
    const auto b = run(init, box, cfg, {}, policy);
    const double rerun = max_abs_diff(a.final_state, b.final_state);
    r.check("deterministic rerun, max difference", rerun, 0.0, rerun == 0.0);

    bool resumed_ok = false;
    double resume_diff = 1.0;
    if (saved) {
        const auto c = run_from(checkpoint_state(*saved), saved_start, cfg, {}, policy);
        resume_diff = max_abs_diff(a.final_state, c.final_state);
        resumed_ok = resume_diff == 0.0 && c.records.back().l2_sq == a.records.back().l2_sq &&
                     c.records.back().dissipation_integral == a.records.back().dissipation_integral;
    }
    r.check("resume from step 40, max difference", resume_diff, 0.0, resumed_ok);

    for (const std::string suite : {"nosuch", "osgood", "multifractal", "interpolation"}) {
        std::ostringstream out, err;
        const int code = cli::cmd_verify(suite, 1000, out, err);
        int expected = cli::kExitUsage;
        if (suite != "nosuch") {
            const auto checks = cli::run_suite(suite, 1000);
            const bool all = std::all_of(checks.begin(), checks.end(), [](const cli::Check& c) { return c.passed; });
            expected = all ? cli::kExitOk : cli::kExitVerifyFailed;
        }
        r.check("verify " + suite + " exit code " + std::to_string(code), double(std::abs(code - expected)), 0.0,
                code == expected);
    }
    std::filesystem::remove_all(dir);
    return r.finish("infrastructure");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8,
                                                      criterion9, criterion10, criterion11};
    std::vector<int> selected;
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > int(criteria.size())) {
            std::cerr << "usage: acceptance [1-11]\n";
            return 2;
        }
        selected.push_back(id);
    } else {
        for (int i = 1; i <= int(criteria.size()); ++i) selected.push_back(i);
    }
    bool all = true;
    for (int id : selected) {
        try {
            all = criteria[id - 1]() && all;
        } catch (const std::exception& e) {
            std::printf("criterion %d: FAIL exception: %s\n", id, e.what());
            all = false;
        }
    }
    return all ? 0 : 1;
}
