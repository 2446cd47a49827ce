#pragma once

// Run configuration: a flat, sectioned key = value text format (a TOML
// subset with strings, numbers, booleans and numeric lists).
//
//   [grid]      n
//   [solver]    nu, dt, t_end, output_every, seed
//   [criterion] s, q, delta, eta, c0
//   [init]      kind, amplitude, spectrum_slope, peak_k
//   [outputs]   directory, emit_spectra, emit_structure, structure_orders,
//               checkpoint_every

#include "fracns/solver.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracns::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CriterionSettings {
    double s = 0.75;
    double q = 12.0;
    double delta = 0.05;
    double eta = 0.01;
    double c0 = 1.0;
};

struct OutputSettings {
    std::string directory = "run";
    bool emit_spectra = true;
    bool emit_structure = true;
    std::vector<double> structure_orders{2.0, 3.0, 4.0, 6.0};
    long checkpoint_every = 0;
};

struct RunConfig {
    int n = 16;
    SolverConfig solver;
    CriterionSettings criterion;
    InitSpec init;
    OutputSettings outputs;

    friend bool operator==(const RunConfig&, const RunConfig&);
};

/// Parses and validates. Throws ConfigError with a line number for syntax
/// problems, unknown keys or wrong types, and for violated invariants.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; numbers use 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

/// Re-checks every module-level invariant. Throws ConfigError.
void validate(const RunConfig& cfg);

}  // namespace fracns::cli
