#pragma once

// Subcommands of the fracns tool. Each returns a process exit code:
// 0 ok, 1 verification failure, 2 usage or configuration error, 3 blow-up.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracns::cli {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitBlowUp = 3 };

/// Prints p, delta_0, theta, alpha, mu, gamma, theta p and the theta p = 2 flag.
int cmd_params(double s, double q, double eta, std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> output_dir;  ///< overrides outputs.directory
    std::optional<std::filesystem::path> resume;      ///< FNS1 checkpoint with a .json sidecar
};

/// Writes diagnostics.csv, decay.csv, spectra/, structure/, checkpoints/ and
/// manifest.json under the output directory.
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
    std::optional<std::filesystem::path> checkpoint;
    std::optional<std::filesystem::path> spectrum_csv;  ///< columns k, e_k[, t_k, pi_k]
    std::optional<std::filesystem::path> output_dir;     ///< CSV outputs; reports go to stdout

    bool spectra = false;
    bool flux = false;
    bool structure = false;
    bool fit_spectrum = false;
    bool tail = false;
    int lim_r = 0;  ///< 0 disables the LIM report
    std::optional<double> exceptional_threshold;
    std::optional<double> exceptional_quantile;  ///< threshold at this quantile of |grad u|

    std::vector<double> orders{2.0, 3.0, 4.0, 6.0};
    int max_r = 0;  ///< 0 means n/2 - 1
    double nu = 0.1;
    std::optional<double> eps;  ///< required with spectrum_csv
    double k0 = 1.0;
    double s = 0.75;
    double delta = 0.05;
};

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);

/// Runs a verification suite and prints the JSON summary.
int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out, std::ostream& err,
               const std::optional<std::filesystem::path>& json_path = std::nullopt);

/// 64-bit FNV-1a, as lowercase hex.
std::string fnv1a_hex(const std::string& data);

/// Version stamp compiled into the tool.
std::string version_string();

}  // namespace fracns::cli
