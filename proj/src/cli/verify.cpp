#include "fracns/cli/verify.hpp"

#include "fracns/commutator.hpp"
#include "fracns/decay.hpp"
#include "fracns/fracops.hpp"
#include "fracns/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fracns::cli {

namespace {

constexpr double kCommutatorS = 0.75;
constexpr double kGnS = 0.75;
constexpr double kGnQ = 12.0;

Check make_check(std::string suite, std::string name, double measured, double limit, bool passed,
                 std::string detail = {}) {
    return {std::move(suite), std::move(name), passed, measured, limit, std::move(detail)};
}

std::string describe(double s, double delta, double p) {
    std::ostringstream os;
    os << "worst at s=" << s << " delta=" << delta << " p=" << p;
    return os.str();
}

std::vector<Check> multifractal_suite() {
    const double ss[] = {0.6, 0.75, 0.9};
    const double ds[] = {0.01, 0.1, 0.5};
    std::vector<Check> out;

    double zeta3 = 0.0;
    double legendre = 0.0, lw_s = 0, lw_d = 0, lw_p = 0;
    double vertex = 0.0;
    bool ordering = true;
    for (double s : ss)
        for (double d : ds) {
            const auto m = MultifractalParams::make(s, d);
            zeta3 = std::max(zeta3, std::abs(zeta_p(3.0, m) - 1.0));
            for (int i = 0; i <= 16; ++i) {
                const double p = 0.5 * i;
                const double err = std::abs(legendre_zeta(p, m) - zeta_p(p, m));
                if (err > legendre) {
                    legendre = err;
                    lw_s = s;
                    lw_d = d;
                    lw_p = p;
                }
            }
            vertex = std::max(vertex, std::abs(singularity_spectrum(m.h0, m) - 3.0));
            for (int i = -200; i <= 200; ++i) {
                const double h = m.h0 + 0.05 * i;
                const double dd = singularity_spectrum(h, m), d0 = singularity_spectrum_d0(h, m);
                if (dd > d0 + 1e-15 || d0 > 3.0) ordering = false;
            }
        }
    out.push_back(make_check("multifractal", "zeta3_closed_form", zeta3, 1e-12, zeta3 <= 1e-12));
    out.push_back(make_check("multifractal", "legendre_vs_closed_form", legendre, 1e-6, legendre <= 1e-6,
                             describe(lw_s, lw_d, lw_p)));
    out.push_back(make_check("multifractal", "spectrum_vertex_at_h0", vertex, 1e-12, vertex <= 1e-12));
    out.push_back(make_check("multifractal", "d_delta_below_d0_below_3", ordering ? 0.0 : 1.0, 0.0, ordering));
    return out;
}

std::vector<Check> interpolation_suite(std::uint64_t seed) {
    std::vector<Check> out;
    const BoxSpec box(16);
    auto envelope = [](double k) { return std::exp(-0.1 * k * k); };

    double worst = 0.0;
    const double triples[][3] = {{0.5, 0.0, 1.0}, {1.0, 0.5, 2.0}, {1.5, 1.0, 3.0}, {0.75, 0.25, 1.75}};
    for (int i = 0; i < 20; ++i) {
        const auto u = random_solenoidal(box, envelope, seed + i);
        for (const auto& t : triples) worst = std::max(worst, interpolation_ratio(u, t[0], t[1], t[2]));
    }
    out.push_back(make_check("interpolation", "frequency_interpolation_constant", worst, 1.0 + 1e-10,
                             worst <= 1.0 + 1e-10));

    double gn = 0.0;
    bool finite = true;
    for (int i = 0; i < 100; ++i) {
        const double r = gagliardo_nirenberg_ratio(random_solenoidal(box, envelope, seed + i), kGnS, kGnQ);
        finite = finite && std::isfinite(r);
        gn = std::max(gn, r);
    }
    out.push_back(make_check("interpolation", "gagliardo_nirenberg_max_ratio", gn, 1e3, finite && gn < 1e3));
    if (pinned::kGagliardoNirenbergMax > 0.0)
        out.push_back(make_check("interpolation", "gagliardo_nirenberg_within_2x_pinned", gn,
                                 2.0 * pinned::kGagliardoNirenbergMax, gn <= 2.0 * pinned::kGagliardoNirenbergMax));

    const auto bands = LPBands::for_box(box);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = lp_energy_ratio(random_solenoidal(box, [](double) { return 1.0; }, seed + i), bands);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.push_back(make_check("interpolation", "littlewood_paley_energy_ratio_min", lo, 0.3, lo >= 0.3));
    out.push_back(make_check("interpolation", "littlewood_paley_energy_ratio_max", hi, 3.0, hi <= 3.0));
    return out;
}

std::vector<Check> commutator_suite(std::uint64_t seed) {
    std::vector<Check> out;
    const auto ens = commutator_ensemble(32, 100, seed, kCommutatorS, default_sigma(kCommutatorS));
    bool finite = true;
    for (const auto& r : ens.reports)
        finite = finite && std::isfinite(r.lhs) && std::isfinite(r.term_a) && std::isfinite(r.term_b) &&
                 std::isfinite(r.ratio) && r.lhs >= 0 && r.term_a >= 0 && r.term_b >= 0;
    out.push_back(make_check("commutator", "ensemble_entries_finite", finite ? 0.0 : 1.0, 0.0, finite));
    const double limit = 2.0 * pinned::kCommutatorRatioMax;
    out.push_back(make_check("commutator", "ensemble_max_within_2x_pinned", ens.max_ratio, limit,
                             limit > 0.0 && ens.max_ratio <= limit));

    const BoxSpec box(16);
    const auto u = commutator_ensemble_field(box, seed);
    const auto c1 = commutator(u, kCommutatorS);
    const auto c2 = commutator(2.0 * u, kCommutatorS);
    double err = 0.0, scale = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < c1.c[d].size(); ++i) {
            err = std::max(err, std::abs(c2.c[d][i] - 4.0 * c1.c[d][i]));
            scale = std::max(scale, std::abs(4.0 * c1.c[d][i]));
        }
    const double rel = scale > 0.0 ? err / scale : err;
    out.push_back(make_check("commutator", "quadratic_homogeneity", rel, 1e-10, rel <= 1e-10));
    return out;
}

std::vector<Check> osgood_suite() {
    std::vector<Check> out;
    const double cases[][2] = {{1.0, 1.0}, {0.5, 0.3}, {2.0, 2.0}, {10.0, 0.5}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const double a = osgood_bound(c[0], c[1]);
        const double b = osgood_ode_oracle(c[0], c[1]);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    out.push_back(make_check("osgood", "osgood_bound_vs_ode_oracle", worst, 1e-6, worst <= 1e-6));

    // Z' = c Z^{1+mu} by centred differences.
    double fd = 0.0;
    const double mu = 0.5, c = 2.0, y0 = 0.25;
    for (double t : {0.1, 0.5, 1.0, 1.5}) {
        const double h = 1e-5;
        const double dz = (comparison_ode(y0, mu, c, t + h) - comparison_ode(y0, mu, c, t - h)) / (2 * h);
        const double rhs = c * std::pow(comparison_ode(y0, mu, c, t), 1.0 + mu);
        fd = std::max(fd, std::abs(dz - rhs) / rhs);
    }
    out.push_back(make_check("osgood", "comparison_ode_finite_difference", fd, 1e-6, fd <= 1e-6));

    const double ceta = log_poly_constant(0.1);
    out.push_back(make_check("osgood", "log_poly_constant_finite", ceta, 0.0, std::isfinite(ceta) && ceta > 0.0));
    return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"multifractal", "interpolation", "commutator", "osgood", "all"};
    return names;
}

std::vector<Check> run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "multifractal") return multifractal_suite();
    if (name == "interpolation") return interpolation_suite(seed);
    if (name == "commutator") return commutator_suite(seed);
    if (name == "osgood") return osgood_suite();
    if (name == "all") {
        std::vector<Check> out;
        for (const auto& n : {"multifractal", "interpolation", "commutator", "osgood"}) {
            auto part = run_suite(n, seed);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    throw std::invalid_argument("unknown suite '" + name +
                                "' (expected multifractal, interpolation, commutator, osgood or all)");
}

nlohmann::json checks_to_json(const std::vector<Check>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        nlohmann::json j{{"suite", c.suite},     {"name", c.name},   {"passed", c.passed},
                         {"measured", c.measured}, {"limit", c.limit}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return {{"passed", all}, {"checks", std::move(arr)}};
}

double osgood_ode_oracle(double rho0, double gamma_integral, int steps) {
    auto f = [](double r) { return r * std::log(std::numbers::e + r); };
    const double h = gamma_integral / steps;
    double r = rho0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(r), k2 = f(r + 0.5 * h * k1), k3 = f(r + 0.5 * h * k2), k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

}  // namespace fracns::cli
