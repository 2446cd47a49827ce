#pragma once

// Identity and inequality suites behind `fracns verify`.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracns::cli {

/// Regression constants pinned from the first ensemble runs (seeds 1..100).
namespace pinned {
/// Max of lhs / (term_a + term_b) over the commutator ensemble (n = 32,
/// envelope e^{-0.2 k^2}), s = 0.75, sigma = 0.1 (1 - s).
inline constexpr double kCommutatorRatioMax = 0.078424888509363438;
/// Max Gagliardo-Nirenberg ratio over 100 fields (n = 16, envelope e^{-0.1 k^2}),
/// s = 0.75, q = 12.
inline constexpr double kGagliardoNirenbergMax = 0.07228509329791931;
}  // namespace pinned

struct Check {
    std::string suite;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
};

const std::vector<std::string>& suite_names();

/// Runs one suite ("multifractal", "interpolation", "commutator", "osgood")
/// or every suite ("all"). `seed` selects fresh random fields for the
/// ensemble suites. Throws std::invalid_argument for an unknown name.
std::vector<Check> run_suite(const std::string& name, std::uint64_t seed);

nlohmann::json checks_to_json(const std::vector<Check>& checks);

/// Independent route to the Osgood bound: RK4 integration of
/// rho' = rho ln(e + rho) over a pseudo-time of length gamma_integral.
double osgood_ode_oracle(double rho0, double gamma_integral, int steps = 200000);

}  // namespace fracns::cli
