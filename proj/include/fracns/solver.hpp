#pragma once

// Pseudo-spectral integration of the unforced incompressible Navier-Stokes
// equations on the periodic box:
//     du/dt = -P[(u . grad) u] + nu Laplacian u,
// with the viscous term handled by an exact integrating factor and classical
// RK4 on the projected nonlinearity. Pressure never appears; the Leray
// projection enforces incompressibility.

#include "fracns/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracns {

struct SolverConfig {
    double nu = 0.1;
    double dt = 1e-3;
    double t_end = 1.0;
    long output_every = 1;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless nu, dt, t_end > 0 and output_every >= 1.
    void validate() const;
    long total_steps() const;
};

enum class InitKind { TaylorGreen, SingleModeShear, RandomSpectrum };

InitKind parse_init_kind(const std::string& name);
std::string to_string(InitKind kind);

struct InitSpec {
    InitKind kind = InitKind::TaylorGreen;
    double amplitude = 1.0;
    double spectrum_slope = -5.0 / 3.0;  ///< random kind only
    int peak_k = 4;                      ///< random kind only
};

/// taylor_green:      A (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)
/// single_mode_shear: A (sin x2, 0, 0)
/// random_spectrum:   random phases, E(k) ~ k^4 below peak_k and
///                    k^spectrum_slope above, cut at the 2/3 limit; scaled so
///                    that the grid rms of |u| equals A. Uses `seed`.
/// Throws std::invalid_argument if peak_k >= n/3 or peak_k < 1 (random kind).
SpectralField make_initial(const InitSpec& spec, const BoxSpec& box, std::uint64_t seed = 0);

/// -P[(u . grad) u], formed from dealiased physical products.
SpectralField nonlinear_term(const SpectralField& u);

/// Thrown when the state stops being finite or max|u| exceeds 1e6 x initial.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t, long step, std::string trail)
        : std::runtime_error(what), t_(t), step_(step), trail_(std::move(trail)) {}
    double time() const { return t_; }
    long step() const { return step_; }
    /// Last diagnostics as text (may be empty before the first sample).
    const std::string& trail() const { return trail_; }

private:
    double t_;
    long step_;
    std::string trail_;
};

/// Advances one IF-RK4 step of size dt with viscosity nu.
SpectralField step(const SpectralField& u, double nu, double dt);
SpectralField step(const SpectralField& u, const SolverConfig& cfg);

/// ||grad u||_{L2}^2 = (2pi)^3 sum |k|^2 |u_k|^2.
double gradient_norm_sq(const SpectralField& u);

/// d/dt ||grad u||^2 along the flow: 2 (2pi)^3 sum |k|^2 Re(conj(u_k) . (N_k - nu |k|^2 u_k)).
double gradient_norm_rate(const SpectralField& u, double nu);

// ---------------------------------------------------------------------------
// Orchestration

struct DiagnosticRecord {
    long step = 0;
    double t = 0.0;
    double l2_sq = 0.0;                 ///< ||u||^2
    double grad_sq = 0.0;               ///< ||grad u||^2
    /// 2 nu int_0^t ||grad u||^2: per-step trapezoid plus the Euler-Maclaurin
    /// end correction dt^2/12 (g'(0) - g'(t)), g = ||grad u||^2.
    double dissipation_integral = 0.0;
    double energy_lhs = 0.0;            ///< ||u||^2 + dissipation_integral
    bool energy_ok = true;              ///< energy_lhs <= ||u0||^2 (1 + 1e-6)
    double max_divergence = 0.0;
    double hermitian_defect = 0.0;
    /// Monitor-provided columns in insertion order.
    std::vector<std::pair<std::string, double>> extra;

    void set(const std::string& name, double value);
    std::optional<double> get(const std::string& name) const;
};

inline constexpr double kEnergyTolerance = 1e-6;

struct Snapshot {
    long step;
    double t;
    const SpectralField& u;
    const SolverConfig& cfg;
};

/// Called at every sample; may append columns to the record.
using Monitor = std::function<void(const Snapshot&, DiagnosticRecord&)>;

/// Accumulator state needed to continue a run from a checkpoint.
struct RunStart {
    long step = 0;
    double initial_l2_sq = 0.0;
    double initial_max_velocity = 0.0;
    double dissipation_integral = 0.0;  ///< uncorrected trapezoid sum
    double initial_grad_rate = 0.0;     ///< g'(0) for the end correction
};

struct CheckpointPolicy {
    long every = 0;  ///< 0 disables periodic checkpoints
    /// Receives the physical samples to write, after the sample (if any) at the
    /// same step has gone through the monitors. The run continues from
    /// checkpoint_state(samples), so a resumed run matches bit for bit.
    std::function<void(const PhysicalField&, double t, long step, const RunStart& accumulators)> sink;
    bool final_checkpoint = true;
};

struct RunResult {
    std::vector<DiagnosticRecord> records;
    SpectralField final_state;
    RunStart final_accumulators;
    std::vector<std::string> warnings;
};

/// Runs from t = start.step * dt to t_end, sampling every output_every steps
/// (and at the first and last step). Throws BlowUpError.
RunResult run_from(SpectralField u, const RunStart& start, const SolverConfig& cfg,
                   std::span<const Monitor> monitors, const CheckpointPolicy& policy = {});

RunResult run(const InitSpec& init, const BoxSpec& box, const SolverConfig& cfg,
              std::span<const Monitor> monitors, const CheckpointPolicy& policy = {});

/// Fresh accumulators for a run starting at step 0 from u0.
RunStart initial_run_start(const SpectralField& u0, double nu);

}  // namespace fracns
