#include "fracns/solver.hpp"

#include "fracns/checkpoint.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <sstream>

namespace fracns {

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("solver: nu must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("solver: t_end must be > 0");
    if (output_every < 1) throw std::invalid_argument("solver: output_every must be >= 1");
}

long SolverConfig::total_steps() const { return std::lround(t_end / dt); }

InitKind parse_init_kind(const std::string& name) {
    if (name == "taylor_green") return InitKind::TaylorGreen;
    if (name == "single_mode_shear") return InitKind::SingleModeShear;
    if (name == "random_spectrum") return InitKind::RandomSpectrum;
    throw std::invalid_argument("unknown init kind '" + name +
                                "' (expected taylor_green, single_mode_shear or random_spectrum)");
}

std::string to_string(InitKind kind) {
    switch (kind) {
        case InitKind::TaylorGreen: return "taylor_green";
        case InitKind::SingleModeShear: return "single_mode_shear";
        case InitKind::RandomSpectrum: return "random_spectrum";
    }
    return "unknown";
}

namespace {

SpectralField random_spectrum_field(const InitSpec& spec, const BoxSpec& box, std::uint64_t seed) {
    if (spec.peak_k < 1 || 3 * spec.peak_k >= box.n())
        throw std::invalid_argument("random_spectrum: peak_k must satisfy 1 <= peak_k < n/3");

    auto u = random_solenoidal(box, [](double) { return 1.0; }, seed);

    // Rescale each integer shell to the target spectrum shape.
    std::map<int, double> shell_energy;
    for_each_mode(box, [&](std::size_t i, Wavevector k) {
        const int shell = static_cast<int>(std::floor(std::sqrt(double(k.norm_sq())) + 0.5));
        double e = 0.0;
        for (const auto& comp : u.c) e += std::norm(comp[i]);
        shell_energy[shell] += 0.5 * e;
    });
    auto shape = [&](int shell) {
        const double x = double(shell) / spec.peak_k;
        return shell < spec.peak_k ? std::pow(x, 4.0) : std::pow(x, spec.spectrum_slope);
    };
    for_each_mode(box, [&](std::size_t i, Wavevector k) {
        const int shell = static_cast<int>(std::floor(std::sqrt(double(k.norm_sq())) + 0.5));
        double w = 0.0;
        if (shell > 0 && is_dealiased_mode(box, k) && shell_energy[shell] > 0.0)
            w = std::sqrt(shape(shell) / shell_energy[shell]);
        for (auto& comp : u.c) comp[i] *= w;
    });

    double mean_sq = 0.0;
    for (const auto& comp : u.c)
        for (const auto& v : comp) mean_sq += std::norm(v);
    if (mean_sq > 0.0) u *= spec.amplitude / std::sqrt(mean_sq);
    return u;
}

}  // namespace

SpectralField make_initial(const InitSpec& spec, const BoxSpec& box, std::uint64_t seed) {
    const double a = spec.amplitude;
    switch (spec.kind) {
        case InitKind::TaylorGreen: {
            auto u = to_spectral(sample(box, [a](double x, double y, double z) {
                return std::array<double, 3>{a * std::sin(x) * std::cos(y) * std::cos(z),
                                             -a * std::cos(x) * std::sin(y) * std::cos(z), 0.0};
            }));
            return leray_project(dealias(u));
        }
        case InitKind::SingleModeShear: {
            // sin(x2) = (e^{i x2} - e^{-i x2}) / 2i
            auto u = SpectralField::zeros(box);
            u.c[0][box.index(0, 1, 0)] = Complex(0.0, -0.5 * a);
            u.c[0][box.index(0, box.n() - 1, 0)] = Complex(0.0, 0.5 * a);
            return u;
        }
        case InitKind::RandomSpectrum: return random_spectrum_field(spec, box, seed);
    }
    throw std::invalid_argument("make_initial: unknown kind");
}

SpectralField nonlinear_term(const SpectralField& u) {
    const auto phys = to_physical(u);
    const auto grad = velocity_gradient(u);  // grad[j][i] = d u_i / d x_j
    PhysicalField adv = PhysicalField::zeros(u.box);
    const std::size_t count = u.box.size();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (std::size_t x = 0; x < count; ++x) adv.v[i][x] += phys.v[j][x] * grad[j][i][x];
    auto n = leray_project(dealias(to_spectral(adv)));
    n *= -1.0;
    return n;
}

double gradient_norm_sq(const SpectralField& u) {
    double s = 0.0;
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        const double k2 = k.norm_sq();
        if (k2 == 0) return;
        s += k2 * (std::norm(u.c[0][i]) + std::norm(u.c[1][i]) + std::norm(u.c[2][i]));
    });
    return kBoxVolume * s;
}

double gradient_norm_rate(const SpectralField& u, double nu) {
    const auto n = nonlinear_term(u);
    double acc = 0.0;
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        const double k2 = k.norm_sq();
        if (k2 == 0) return;
        for (int d = 0; d < 3; ++d)
            acc += k2 * ((std::conj(u.c[d][i]) * n.c[d][i]).real() - nu * k2 * std::norm(u.c[d][i]));
    });
    return 2.0 * kBoxVolume * acc;
}

SpectralField step(const SpectralField& u, double nu, double dt) {
    std::vector<double> e_full(u.box.size()), e_half(u.box.size());
    for_each_mode(u.box, [&](std::size_t i, Wavevector k) {
        const double rate = nu * k.norm_sq();
        e_full[i] = std::exp(-rate * dt);
        e_half[i] = std::exp(-0.5 * rate * dt);
    });
    auto combine = [&](const SpectralField& base, const std::vector<double>& eb, double a, const SpectralField& k,
                       const std::vector<double>* ek) {
        SpectralField out = base;
        for (int d = 0; d < 3; ++d)
            for (std::size_t i = 0; i < out.c[d].size(); ++i)
                out.c[d][i] = eb[i] * base.c[d][i] + a * (ek ? (*ek)[i] : 1.0) * k.c[d][i];
        return out;
    };

    // Lawson (integrating-factor) RK4.
    const auto k1 = nonlinear_term(u);
    const auto k2 = nonlinear_term(combine(u, e_half, 0.5 * dt, k1, &e_half));
    const auto k3 = nonlinear_term(combine(u, e_half, 0.5 * dt, k2, nullptr));
    const auto k4 = nonlinear_term(combine(u, e_full, dt, k3, &e_half));

    SpectralField out = u;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < out.c[d].size(); ++i)
            out.c[d][i] = e_full[i] * u.c[d][i] +
                          dt / 6.0 *
                              (e_full[i] * k1.c[d][i] + 2.0 * e_half[i] * (k2.c[d][i] + k3.c[d][i]) + k4.c[d][i]);
    return out;
}

SpectralField step(const SpectralField& u, const SolverConfig& cfg) { return step(u, cfg.nu, cfg.dt); }

// ---------------------------------------------------------------------------

void DiagnosticRecord::set(const std::string& name, double value) {
    for (auto& [k, v] : extra)
        if (k == name) {
            v = value;
            return;
        }
    extra.emplace_back(name, value);
}

std::optional<double> DiagnosticRecord::get(const std::string& name) const {
    for (const auto& [k, v] : extra)
        if (k == name) return v;
    return std::nullopt;
}

RunStart initial_run_start(const SpectralField& u0, double nu) {
    RunStart s;
    s.step = 0;
    s.initial_l2_sq = l2_norm_sq(u0);
    s.initial_max_velocity = grid_max_magnitude(to_physical(u0));
    s.dissipation_integral = 0.0;
    s.initial_grad_rate = gradient_norm_rate(u0, nu);
    return s;
}

namespace {

std::string format_trail(const DiagnosticRecord* r) {
    if (r == nullptr) return {};
    std::ostringstream os;
    os.precision(17);
    os << "step=" << r->step << " t=" << r->t << " l2_sq=" << r->l2_sq << " grad_sq=" << r->grad_sq
       << " dissipation_integral=" << r->dissipation_integral;
    for (const auto& [k, v] : r->extra) os << ' ' << k << '=' << v;
    return os.str();
}

}  // namespace

RunResult run_from(SpectralField u, const RunStart& start, const SolverConfig& cfg,
                   std::span<const Monitor> monitors, const CheckpointPolicy& policy) {
    cfg.validate();
    RunResult result{{}, SpectralField::zeros(u.box), start, {}};

    const long total = cfg.total_steps();
    long step_index = start.step;
    double integral = start.dissipation_integral;
    double grad_prev = gradient_norm_sq(u);

    {
        const double umax = grid_max_magnitude(to_physical(u));
        if (umax > 0.0 && cfg.dt > 0.5 * u.box.dx() / umax) {
            std::ostringstream os;
            os << "CFL guard: dt=" << cfg.dt << " exceeds 0.5*dx/max|u|=" << 0.5 * u.box.dx() / umax;
            result.warnings.push_back(os.str());
        }
    }

    auto accumulators = [&] {
        RunStart s = start;
        s.step = step_index;
        s.dissipation_integral = integral;
        return s;
    };

    auto take_sample = [&] {
        DiagnosticRecord rec;
        rec.step = step_index;
        rec.t = step_index * cfg.dt;
        rec.l2_sq = l2_norm_sq(u);
        rec.grad_sq = grad_prev;
        rec.dissipation_integral =
            integral + cfg.nu * cfg.dt * cfg.dt / 6.0 * (start.initial_grad_rate - gradient_norm_rate(u, cfg.nu));
        rec.energy_lhs = rec.l2_sq + rec.dissipation_integral;
        rec.energy_ok = rec.energy_lhs <= start.initial_l2_sq * (1.0 + kEnergyTolerance);
        rec.max_divergence = max_divergence(u);
        rec.hermitian_defect = hermitian_defect(u);
        const Snapshot snap{step_index, rec.t, u, cfg};
        for (const auto& m : monitors) m(snap, rec);
        result.records.push_back(std::move(rec));
    };

    auto blowup_check_velocity = [&] {
        if (start.initial_max_velocity <= 0.0) return;
        const double umax = grid_max_magnitude(to_physical(u));
        if (umax > 1e6 * start.initial_max_velocity) {
            std::ostringstream os;
            os << "blow-up: max|u|=" << umax << " exceeds 1e6 x initial at t=" << step_index * cfg.dt;
            throw BlowUpError(os.str(), step_index * cfg.dt, step_index,
                              format_trail(result.records.empty() ? nullptr : &result.records.back()));
        }
    };

    if (step_index == 0) take_sample();

    while (step_index < total) {
        u = step(u, cfg);
        ++step_index;
        if (!is_finite(u)) {
            std::ostringstream os;
            os << "blow-up: non-finite state at t=" << step_index * cfg.dt;
            throw BlowUpError(os.str(), step_index * cfg.dt, step_index,
                              format_trail(result.records.empty() ? nullptr : &result.records.back()));
        }
        assert(max_divergence(u) < 1e-10);
        const double grad_now = gradient_norm_sq(u);
        integral += cfg.nu * cfg.dt * (grad_prev + grad_now);  // 2 nu * trapezoid
        grad_prev = grad_now;

        const bool last = step_index == total;
        const bool checkpoint =
            policy.sink && ((policy.every > 0 && step_index % policy.every == 0) || (last && policy.final_checkpoint));
        std::optional<PhysicalField> samples;
        if (checkpoint) {
            // Continue from exactly what a resumed run would load.
            samples = to_physical(u);
            u = checkpoint_state(*samples);
            grad_prev = gradient_norm_sq(u);
        }
        if (step_index % cfg.output_every == 0 || last) {
            blowup_check_velocity();
            take_sample();
        }
        if (checkpoint) policy.sink(*samples, step_index * cfg.dt, step_index, accumulators());
    }

    result.final_state = std::move(u);
    result.final_accumulators = accumulators();
    return result;
}

RunResult run(const InitSpec& init, const BoxSpec& box, const SolverConfig& cfg,
              std::span<const Monitor> monitors, const CheckpointPolicy& policy) {
    cfg.validate();
    auto u0 = make_initial(init, box, cfg.seed);
    const auto start = initial_run_start(u0, cfg.nu);
    return run_from(std::move(u0), start, cfg, monitors, policy);
}

}  // namespace fracns
