#pragma once

// The commutator [(-Delta)^s, u . grad] u and empirical checks of the two
// commutator estimates. All checks are falsification-oriented: they report
// ratios whose boundedness can be observed, never the estimates themselves.

#include "fracns/grid.hpp"

#include <cstdint>
#include <vector>

namespace fracns {

/// (-Delta)^s ((u . grad) u) - (u . grad)((-Delta)^s u), with both products
/// formed alias-free on the 2n box; the result lives on the 2n box.
SpectralField commutator(const SpectralField& u, double s);

struct CommutatorReport {
    double lhs = 0.0;     ///< ||[(-Delta)^s, u . grad] u||
    double term_a = 0.0;  ///< ||grad u||_inf ||(-Delta)^s u|| ln(e + ||(-Delta)^{s+sigma} u||)
    double term_b = 0.0;  ///< ||grad u||_inf ||(-Delta)^{s+1/2} u|| / ln(e + ||(-Delta)^{s+sigma} u||)
    double ratio = 0.0;   ///< lhs / (term_a + term_b), 0 for the zero field
};

/// sigma default of 0.1 (1 - s).
double default_sigma(double s);

/// Throws std::invalid_argument unless 0 < sigma < 1 - s.
CommutatorReport lemma31_report(const SpectralField& u, double s, double sigma);

struct Lemma21Report {
    double lhs = 0.0;  ///< ||(-Delta)^s (f g) - f (-Delta)^s g||
    double rhs = 0.0;  ///< ||grad f||_inf ||(-Delta)^{s - 1/2} g||
    double ratio = 0.0;
};

/// L2 version of the scalar commutator estimate. Requires s in (1/2, 1).
Lemma21Report lemma21_report(const ScalarSpectral& f, const ScalarSpectral& g, double s);

/// Smooth random field of the commutator ensemble: envelope e^{-0.2 |k|^2}.
SpectralField commutator_ensemble_field(const BoxSpec& box, std::uint64_t seed);

struct EnsembleSummary {
    std::vector<CommutatorReport> reports;
    double max_ratio = 0.0;
};

/// lemma31_report on `count` fields with seeds first_seed, first_seed + 1, ...
EnsembleSummary commutator_ensemble(int n, int count, std::uint64_t first_seed, double s, double sigma);

}  // namespace fracns
