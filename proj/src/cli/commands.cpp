#include "fracns/cli/commands.hpp"

#include "fracns/checkpoint.hpp"
#include "fracns/cli/config.hpp"
#include "fracns/cli/verify.hpp"
#include "fracns/criterion.hpp"
#include "fracns/decay.hpp"
#include "fracns/fft.hpp"
#include "fracns/fracops.hpp"
#include "fracns/turbulence.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#ifndef FRACNS_VERSION
#define FRACNS_VERSION "unknown"
#endif

namespace fracns::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string version_string() { return FRACNS_VERSION; }

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string step_tag(long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%08ld", step);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

// Hash of the configuration with the output directory blanked, so a run can be
// resumed into another directory.
std::string config_hash(RunConfig cfg) {
    cfg.outputs.directory = "-";
    return fnv1a_hex(serialize_config(cfg));
}

/// Streams diagnostics rows; on resume keeps the rows up to the resume step.
class DiagnosticsWriter {
public:
    DiagnosticsWriter(const fs::path& path, std::optional<long> resume_step) : path_(path) {
        if (resume_step && fs::exists(path)) {
            std::ifstream in(path);
            std::string line;
            std::vector<std::string> kept;
            if (std::getline(in, line)) {
                header_ = split_csv(line);
                kept.push_back(line);
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    const auto cells = split_csv(line);
                    if (std::stol(cells.at(0)) > *resume_step) break;
                    rows_.push_back(cells);
                    kept.push_back(line);
                }
            }
            out_.open(path, std::ios::binary | std::ios::trunc);
            for (const auto& k : kept) out_ << k << '\n';
        } else {
            out_.open(path, std::ios::binary | std::ios::trunc);
        }
        if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    }

    void write(const DiagnosticRecord& r) {
        if (header_.empty()) {
            header_ = {"step",       "t",       "l2_sq",          "grad_sq",         "dissipation_integral",
                       "energy_lhs", "energy_ok", "max_divergence", "hermitian_defect"};
            for (const auto& [k, v] : r.extra) header_.push_back(k);
            for (std::size_t i = 0; i < header_.size(); ++i) out_ << (i ? "," : "") << header_[i];
            out_ << '\n';
        }
        std::vector<std::string> cells{std::to_string(r.step), num(r.t), num(r.l2_sq), num(r.grad_sq),
                                       num(r.dissipation_integral), num(r.energy_lhs),
                                       r.energy_ok ? "true" : "false", num(r.max_divergence),
                                       num(r.hermitian_defect)};
        for (const auto& [k, v] : r.extra) cells.push_back(num(v));
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        out_.flush();
        rows_.push_back(std::move(cells));
    }

    /// Values of a column over every row (kept and new); NaN where missing.
    std::vector<double> column(const std::string& name) const {
        std::vector<double> out;
        const auto it = std::find(header_.begin(), header_.end(), name);
        if (it == header_.end()) return out;
        const std::size_t idx = it - header_.begin();
        for (const auto& row : rows_) {
            if (idx >= row.size()) out.push_back(std::nan(""));
            else if (row[idx] == "true") out.push_back(1.0);
            else if (row[idx] == "false") out.push_back(0.0);
            else out.push_back(std::stod(row[idx]));
        }
        return out;
    }

private:
    fs::path path_;
    std::ofstream out_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_spectrum_csv(const fs::path& path, const ShellSpectrum& sp) {
    std::ostringstream os;
    os << "k,e_k,t_k,pi_k\n";
    for (std::size_t j = 0; j < sp.k.size(); ++j)
        os << sp.k[j] << ',' << num(sp.e_k[j]) << ',' << num(sp.t_k[j]) << ',' << num(sp.pi_k[j]) << '\n';
    write_text(path, os.str());
}

void write_structure_csv(const fs::path& path, const StructureFunctions& sf) {
    std::ostringstream os;
    os << "r";
    for (double p : sf.orders) os << ",S_" << num(p);
    os << '\n';
    for (std::size_t i = 0; i < sf.r.size(); ++i) {
        os << num(sf.separation(static_cast<int>(i)));
        for (std::size_t o = 0; o < sf.orders.size(); ++o) os << ',' << num(sf.s_p[o][i]);
        os << '\n';
    }
    write_text(path, os.str());
}

json criterion_state_json(const CriterionState& s) {
    return {{"integral", s.integral}, {"last_t", s.last_t}, {"last_value", s.last_value}, {"started", s.started}};
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_params(double s, double q, double eta, std::ostream& out, std::ostream& err) {
    try {
        const double p = solve_scaling(s, q);
        const auto dp = derive_params(s, q, eta, 1.0);
        const auto tp = theta_p_identity(s, q);
        const std::pair<const char*, std::string> rows[] = {
            {"s", num(s)},
            {"q", num(q)},
            {"eta", num(eta)},
            {"p", num(p)},
            {"delta_0", num(delta_max(s, q))},
            {"theta", num(dp.theta)},
            {"alpha", num(dp.alpha)},
            {"mu", num(dp.mu)},
            {"gamma", num(dp.gamma)},
            {"theta_p", num(tp.theta_p)},
            {"theta_p_equals_2", tp.equals_two ? "true" : "false"},
        };
        for (const auto& [k, v] : rows) out << std::left << std::setw(18) << k << v << '\n';
        return kExitOk;
    } catch (const std::domain_error& e) {
        err << "fracns params: " << e.what() << '\n';
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(opts.config);
    } catch (const ConfigError& e) {
        err << "fracns simulate: " << e.what() << '\n';
        return kExitUsage;
    }
    if (opts.output_dir) cfg.outputs.directory = opts.output_dir->string();
    const fs::path dir = cfg.outputs.directory;
    const std::string hash = config_hash(cfg);

    const BoxSpec box(cfg.n);
    const auto crit = CriterionParams::make(cfg.criterion.s, cfg.criterion.q, cfg.criterion.delta,
                                            cfg.criterion.eta, cfg.solver.nu);

    // Initial state, either fresh or from a checkpoint plus its sidecar.
    const auto u_init = make_initial(cfg.init, box, cfg.solver.seed);
    SpectralField u = u_init;
    RunStart start = initial_run_start(u_init, cfg.solver.nu);
    CriterionState crit_state;
    std::optional<long> resume_step;
    if (opts.resume) {
        try {
            const auto ck = read_checkpoint(*opts.resume);
            if (ck.field.box.n() != cfg.n) throw CheckpointError("checkpoint grid size does not match grid.n");
            fs::path sidecar = *opts.resume;
            sidecar.replace_extension(".json");
            std::ifstream in(sidecar);
            if (!in) throw CheckpointError("missing sidecar '" + sidecar.string() + "'");
            const json j = json::parse(in);
            if (j.at("config_hash").get<std::string>() != hash)
                throw CheckpointError("checkpoint was written with a different configuration");
            start.step = j.at("step").get<long>();
            start.initial_l2_sq = j.at("initial_l2_sq").get<double>();
            start.initial_max_velocity = j.at("initial_max_velocity").get<double>();
            start.dissipation_integral = j.at("dissipation_integral").get<double>();
            start.initial_grad_rate = j.at("initial_grad_rate").get<double>();
            const auto& c = j.at("criterion");
            crit_state.integral = c.at("integral").get<double>();
            crit_state.last_t = c.at("last_t").get<double>();
            crit_state.last_value = c.at("last_value").get<double>();
            crit_state.started = c.at("started").get<bool>();
            u = checkpoint_state(ck.field);
            resume_step = start.step;
        } catch (const CheckpointError& e) {
            err << "fracns simulate: " << e.what() << '\n';
            return kExitUsage;
        } catch (const json::exception& e) {
            err << "fracns simulate: malformed checkpoint sidecar: " << e.what() << '\n';
            return kExitUsage;
        }
    }

    fs::create_directories(dir);
    if (cfg.outputs.emit_spectra) fs::create_directories(dir / "spectra");
    if (cfg.outputs.emit_structure) fs::create_directories(dir / "structure");
    if (cfg.outputs.checkpoint_every > 0) fs::create_directories(dir / "checkpoints");

    DiagnosticsWriter diag(dir / "diagnostics.csv", resume_step);
    auto crit_monitor = std::make_shared<CriterionMonitor>(crit, crit_state);
    const DecayMonitor decay_monitor(cfg.criterion.s);
    double max_transfer_residual = 0.0;

    std::vector<Monitor> monitors;
    monitors.emplace_back([crit_monitor](const Snapshot& s, DiagnosticRecord& r) { (*crit_monitor)(s, r); });
    monitors.emplace_back(decay_monitor);
    monitors.emplace_back([&](const Snapshot& s, DiagnosticRecord& r) {
        auto sp = shell_spectrum(s.u, s.cfg.nu);
        const auto tf = transfer_flux(s.u);
        sp.t_k = tf.t_k;
        sp.pi_k = tf.pi_k;
        r.set("eps", sp.eps);
        r.set("transfer_residual", tf.relative_residual());
        max_transfer_residual = std::max(max_transfer_residual, tf.relative_residual());
        if (cfg.outputs.emit_spectra) write_spectrum_csv(dir / "spectra" / ("spectrum_" + step_tag(s.step) + ".csv"), sp);
        if (cfg.outputs.emit_structure)
            write_structure_csv(dir / "structure" / ("structure_" + step_tag(s.step) + ".csv"),
                                structure_functions(to_physical(s.u), cfg.outputs.structure_orders, cfg.n / 2 - 1));
    });
    monitors.emplace_back([&](const Snapshot&, DiagnosticRecord& r) { diag.write(r); });

    CheckpointPolicy policy;
    if (cfg.outputs.checkpoint_every > 0) {
        fs::create_directories(dir / "checkpoints");
        policy.every = cfg.outputs.checkpoint_every;
        policy.sink = [&](const PhysicalField& field, double t, long step, const RunStart& acc) {
            const fs::path base = dir / "checkpoints" / ("ckpt_" + step_tag(step));
            fs::path bin = base;
            bin += ".fns";
            fs::path side = base;
            side += ".json";
            write_checkpoint(bin, field, t);
            const json j{{"step", step},
                         {"t", t},
                         {"config_hash", hash},
                         {"initial_l2_sq", acc.initial_l2_sq},
                         {"initial_max_velocity", acc.initial_max_velocity},
                         {"dissipation_integral", acc.dissipation_integral},
                         {"initial_grad_rate", acc.initial_grad_rate},
                         {"criterion", criterion_state_json(crit_monitor->state())}};
            write_text(side, j.dump(2) + "\n");
        };
    }

    const auto small = smallness_check(u_init, crit, cfg.criterion.c0);
    json manifest{{"tool", "fracns"},
                  {"version", version_string()},
                  {"config_hash", hash},
                  {"config", serialize_config(cfg)},
                  {"fft_threads", fft::worker_count()},
                  {"total_steps", cfg.solver.total_steps()},
                  {"smallness", {{"holds", small.holds}, {"lhs", small.lhs}, {"rhs", small.rhs}, {"c0", cfg.criterion.c0}}}};
    manifest["resumed_from"] = opts.resume ? json(opts.resume->string()) : json(nullptr);

    int code = kExitOk;
    try {
        const auto result = run_from(u, start, cfg.solver, monitors, policy);
        manifest["status"] = "completed";
        manifest["final_step"] = result.final_accumulators.step;
        manifest["warnings"] = result.warnings;
        for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    } catch (const BlowUpError& e) {
        manifest["status"] = "blow_up";
        manifest["blow_up"] = {{"message", e.what()}, {"t", e.time()}, {"step", e.step()}, {"trail", e.trail()}};
        err << "fracns simulate: " << e.what() << '\n';
        if (!e.trail().empty()) err << "last diagnostics: " << e.trail() << '\n';
        code = kExitBlowUp;
    }
    manifest["criterion_integral"] = crit_monitor->state().integral;
    manifest["max_transfer_residual"] = max_transfer_residual;

    const auto ok = diag.column("energy_ok");
    manifest["energy_inequality_all_ok"] = std::all_of(ok.begin(), ok.end(), [](double v) { return v == 1.0; });

    // Decay envelope, calibrated on the first 10% of samples.
    const auto times = diag.column("t");
    const auto ys = diag.column("ys_l2");
    if (code == kExitOk && times.size() >= 2) {
        std::vector<double> norms(ys.size());
        std::transform(ys.begin(), ys.end(), norms.begin(), [](double y) { return std::sqrt(y); });
        std::ostringstream csv;
        csv << "t,ys_l2,envelope,comparison_ode\n";
        try {
            const auto cal = calibrate_envelope(times, norms, cfg.criterion.s, cfg.criterion.q, cfg.criterion.eta);
            const auto& env = cal.envelope;
            for (std::size_t i = 0; i < times.size(); ++i) {
                const double z = times[i] < env.blowup_time
                                     ? comparison_ode(env.y0, env.params.mu, env.params.c_fit, times[i])
                                     : std::numeric_limits<double>::infinity();
                csv << num(times[i]) << ',' << num(ys[i]) << ',' << num(env.norm_bound(times[i])) << ',' << num(z)
                    << '\n';
            }
            manifest["envelope"] = {{"c_fit", env.params.c_fit},
                                    {"mu", env.params.mu},
                                    {"gamma", env.params.gamma},
                                    {"beta", env.params.beta},
                                    {"calibration_samples", cal.calibration_samples},
                                    {"held_out_samples", cal.held_out_samples},
                                    {"held_out_violations", cal.held_out_violations},
                                    {"worst_margin", cal.worst_margin}};
        } catch (const std::exception& e) {
            manifest["envelope"] = {{"error", e.what()}};
            for (std::size_t i = 0; i < times.size(); ++i)
                csv << num(times[i]) << ',' << num(ys[i]) << ",nan,nan\n";
        }
        write_text(dir / "decay.csv", csv.str());
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    if (code == kExitOk) out << "run complete: " << dir.string() << '\n';
    return code;
}

// ---------------------------------------------------------------------------

namespace {

ShellSpectrum read_spectrum_csv(const fs::path& path, double eps, double nu) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty spectrum file");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "k" || header[1] != "e_k")
        throw std::runtime_error("spectrum file must start with columns k,e_k");
    ShellSpectrum sp;
    sp.eps = eps;
    sp.nu = nu;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() < 2) throw std::runtime_error("malformed spectrum row: " + line);
        sp.k.push_back(std::stoi(cells[0]));
        sp.e_k.push_back(std::stod(cells[1]));
        sp.t_k.push_back(cells.size() > 2 ? std::stod(cells[2]) : 0.0);
        sp.pi_k.push_back(cells.size() > 3 ? std::stod(cells[3]) : 0.0);
    }
    return sp;
}

void print_fit(std::ostream& out, const ShellSpectrum& sp, double k0, double delta) {
    const auto fit = fit_spectrum_model(sp, k0, delta);
    out << "[fit]\nc_kolm=" << num(fit.c_kolm) << "\nbeta_t=" << num(fit.beta_t) << "\nresidual=" << num(fit.residual)
        << "\nk_nu=" << num(fit.k_nu) << "\nshells_used=" << fit.shells_used << "\n\n";
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.checkpoint.has_value() == opts.spectrum_csv.has_value()) {
        err << "fracns analyze: give exactly one of a checkpoint path or --spectrum-csv\n";
        return kExitUsage;
    }
    try {
        if (opts.output_dir) fs::create_directories(*opts.output_dir);

        if (opts.spectrum_csv) {
            if (!opts.eps) {
                err << "fracns analyze: --eps is required with --spectrum-csv\n";
                return kExitUsage;
            }
            const auto sp = read_spectrum_csv(*opts.spectrum_csv, *opts.eps, opts.nu);
            const bool any = opts.fit_spectrum || opts.flux;
            if (opts.fit_spectrum || !any) print_fit(out, sp, opts.k0, opts.delta);
            if (opts.flux) {
                const auto rep = flux_deviation_bound(sp.pi_k, sp.eps, static_cast<int>(opts.k0), opts.s, opts.delta);
                out << "[flux]\nweight_exponent=" << num(rep.weight_exponent) << "\nempirical_c=" << num(rep.empirical_c)
                    << "\n\n";
            }
            return kExitOk;
        }

        std::optional<Checkpoint> loaded;
        try {
            loaded = read_checkpoint(*opts.checkpoint);
        } catch (const CheckpointError& e) {
            err << "fracns analyze: " << e.what() << '\n';
            return kExitUsage;
        }
        const Checkpoint& ck = *loaded;
        const auto u = checkpoint_state(ck.field);
        const int n = u.box.n();
        out << "[checkpoint]\nn=" << n << "\ntime=" << num(ck.time) << "\n\n";

        const bool any = opts.spectra || opts.flux || opts.structure || opts.fit_spectrum || opts.tail ||
                         opts.lim_r > 0 || opts.exceptional_threshold || opts.exceptional_quantile;
        auto sp = shell_spectrum(u, opts.nu);
        attach_transfer(sp, u);

        if (opts.spectra || !any) {
            const auto nonzero =
                std::count_if(sp.e_k.begin(), sp.e_k.end(), [&](double e) { return e > 1e-14 * sp.total_energy(); });
            out << "[spectrum]\nshells=" << sp.k.size() << "\nnonzero_shells=" << nonzero
                << "\ntotal_energy=" << num(sp.total_energy()) << "\neps=" << num(sp.eps)
                << "\ntransfer_residual=" << num(transfer_flux(u).relative_residual()) << "\n\n";
            if (opts.output_dir) write_spectrum_csv(*opts.output_dir / "spectrum.csv", sp);
        }
        if (opts.flux) {
            if (sp.eps > 0.0) {
                const auto rep = flux_deviation_bound(sp.pi_k, sp.eps, static_cast<int>(opts.k0), opts.s, opts.delta);
                out << "[flux]\nweight_exponent=" << num(rep.weight_exponent)
                    << "\nempirical_c=" << num(rep.empirical_c) << "\n\n";
            } else {
                out << "[flux]\nskipped=zero dissipation\n\n";
            }
        }
        if (opts.structure) {
            const int max_r = opts.max_r > 0 ? opts.max_r : n / 2 - 1;
            const auto sf = structure_functions(ck.field, opts.orders, max_r);
            out << "[structure]\nmax_r=" << max_r << "\norders=" << sf.orders.size() << "\n";
            for (std::size_t o = 0; o < sf.orders.size(); ++o)
                out << "S_" << num(sf.orders[o]) << "(dx)=" << num(sf.s_p[o][std::min(1, max_r)]) << '\n';
            out << '\n';
            if (opts.output_dir) write_structure_csv(*opts.output_dir / "structure.csv", sf);
        }
        if (opts.lim_r > 0) {
            const auto lim = lim_field(ck.field, opts.lim_r);
            double mean = 0.0;
            for (double v : lim.values) mean += v;
            mean /= double(lim.values.size());
            out << "[lim]\nr=" << opts.lim_r << "\nmean=" << num(mean) << "\nmax=" << num(lim.max_value)
                << "\ndegenerate=" << (lim.degenerate ? "true" : "false") << "\n\n";
        }
        const auto grad = gradient_magnitude(u);
        if (opts.exceptional_threshold || opts.exceptional_quantile) {
            double threshold = opts.exceptional_threshold.value_or(0.0);
            if (opts.exceptional_quantile) {
                auto sorted = grad;
                std::sort(sorted.begin(), sorted.end());
                const double qv = std::clamp(*opts.exceptional_quantile, 0.0, 1.0);
                threshold = sorted[static_cast<std::size_t>(qv * double(sorted.size() - 1))];
            }
            const auto ex = exceptional_set(grad, threshold);
            out << "[exceptional_set]\nthreshold=" << num(threshold) << "\nmeasure_fraction=" << num(ex.measure_fraction)
                << "\n\n";
        }
        if (opts.fit_spectrum) print_fit(out, sp, opts.k0, opts.delta);
        if (opts.tail) {
            const auto tf = tail_fit(grad, opts.delta);
            out << "[tail]\nsamples=|grad u|\nc=" << num(tf.c) << "\nc_rate=" << num(tf.c_rate)
                << "\nresidual=" << num(tf.residual) << "\ndegenerate=" << (tf.degenerate ? "true" : "false")
                << "\n\n";
        }
        return kExitOk;
    } catch (const InsufficientBandError& e) {
        err << "fracns analyze: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "fracns analyze: " << e.what() << '\n';
        return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out, std::ostream& err,
               const std::optional<fs::path>& json_path) {
    std::vector<Check> checks;
    try {
        checks = run_suite(suite, seed);
    } catch (const std::invalid_argument& e) {
        err << "fracns verify: " << e.what() << '\n';
        return kExitUsage;
    }
    json j = checks_to_json(checks);
    j["suite"] = suite;
    j["seed"] = seed;
    out << j.dump(2) << '\n';
    if (json_path) write_text(*json_path, j.dump(2) + "\n");
    for (const auto& c : checks)
        if (!c.passed) err << "FAILED " << c.suite << "/" << c.name << ": measured " << num(c.measured) << ", limit "
                           << num(c.limit) << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    return j["passed"].get<bool>() ? kExitOk : kExitVerifyFailed;
}

}  // namespace fracns::cli
