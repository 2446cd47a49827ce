#include "fracns/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace fracns::cli;

    CLI::App app{"Fractional-regularity diagnostics for pseudo-spectral Navier-Stokes runs"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    double s = 0.75, q = 12.0, eta = 0.01;
    auto* params = app.add_subcommand("params", "Print the exponent chain for (s, q, eta)");
    params->add_option("--s", s, "Fractional order s in (1/2, 1)")->required();
    params->add_option("--q", q, "Lebesgue exponent q")->required();
    params->add_option("--eta", eta, "Small positive eta")->capture_default_str();

    SimulateOptions sim;
    std::string sim_config, sim_output, sim_resume;
    auto* simulate = app.add_subcommand("simulate", "Run the solver with all monitors attached");
    simulate->add_option("config", sim_config, "Run configuration file")->required();
    simulate->add_option("--output", sim_output, "Output directory (overrides outputs.directory)");
    simulate->add_option("--resume", sim_resume, "Resume from an FNS1 checkpoint");

    AnalyzeOptions an;
    std::string an_checkpoint, an_csv, an_output;
    double an_eps = 0.0, an_threshold = 0.0, an_quantile = 0.0;
    auto* analyze = app.add_subcommand("analyze", "Offline analysis of a checkpoint or spectrum file");
    analyze->add_option("checkpoint", an_checkpoint, "FNS1 checkpoint");
    analyze->add_option("--spectrum-csv", an_csv, "Spectrum CSV with columns k,e_k[,t_k,pi_k]");
    analyze->add_option("--output", an_output, "Directory for CSV outputs");
    analyze->add_flag("--spectra", an.spectra, "Shell spectrum");
    analyze->add_flag("--flux", an.flux, "Flux deviation report");
    analyze->add_flag("--structure", an.structure, "Structure functions");
    analyze->add_flag("--fit-spectrum", an.fit_spectrum, "Fit the modified spectrum model");
    analyze->add_flag("--tail", an.tail, "Stretched-exponential tail fit of |grad u|");
    analyze->add_option("--lim", an.lim_r, "Local intermittency measure at separation r (grid cells)");
    auto* thr = analyze->add_option("--threshold", an_threshold, "Exceptional-set threshold on |grad u|");
    auto* qua = analyze->add_option("--quantile", an_quantile, "Exceptional-set threshold as a quantile of |grad u|");
    analyze->add_option("--orders", an.orders, "Structure-function orders")->capture_default_str();
    analyze->add_option("--max-r", an.max_r, "Largest separation in grid cells (default n/2 - 1)");
    analyze->add_option("--nu", an.nu, "Viscosity")->capture_default_str();
    auto* eps_opt = analyze->add_option("--eps", an_eps, "Dissipation rate (spectrum CSV input)");
    analyze->add_option("--k0", an.k0, "Inertial-range start k0")->capture_default_str();
    analyze->add_option("--s", an.s, "Fractional order s")->capture_default_str();
    analyze->add_option("--delta", an.delta, "Logarithmic exponent delta")->capture_default_str();

    std::string suite;
    std::uint64_t seed = 1000;
    std::string json_out;
    auto* verify = app.add_subcommand("verify", "Run an identity/inequality suite");
    verify->add_option("suite", suite, "multifractal, interpolation, commutator, osgood or all")->required();
    verify->add_option("--seed", seed, "First seed of the fresh random ensembles")->capture_default_str();
    verify->add_option("--json", json_out, "Also write the JSON summary to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (params->parsed()) return cmd_params(s, q, eta, std::cout, std::cerr);
    if (simulate->parsed()) {
        sim.config = sim_config;
        if (!sim_output.empty()) sim.output_dir = sim_output;
        if (!sim_resume.empty()) sim.resume = sim_resume;
        return cmd_simulate(sim, std::cout, std::cerr);
    }
    if (analyze->parsed()) {
        if (!an_checkpoint.empty()) an.checkpoint = an_checkpoint;
        if (!an_csv.empty()) an.spectrum_csv = an_csv;
        if (!an_output.empty()) an.output_dir = an_output;
        if (eps_opt->count()) an.eps = an_eps;
        if (thr->count()) an.exceptional_threshold = an_threshold;
        if (qua->count()) an.exceptional_quantile = an_quantile;
        return cmd_analyze(an, std::cout, std::cerr);
    }
    if (verify->parsed()) {
        std::optional<std::filesystem::path> path;
        if (!json_out.empty()) path = json_out;
        return cmd_verify(suite, seed, std::cout, std::cerr, path);
    }
    return kExitUsage;
}
