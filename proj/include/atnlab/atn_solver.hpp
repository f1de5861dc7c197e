#pragma once

#include <cstdint>
#include <vector>

#include "atnlab/step_function.hpp"

namespace atnlab {

// Finite-dimensional approximation problem: approximate each target in L1 by
// nonnegative combinations of n generator functions composed with shifts from
// a fixed symmetric set, all represented as step functions on windows.
struct AtnProblem {
    std::vector<StepFunction> targets;  // common window and oracle
    int generator_count = 1;            // n
    std::vector<std::int64_t> shifts;   // finite, symmetric around 0
    IndexInterval generator_window;
    int max_iterations = 40;            // alternation budget; 0 returns the initial witness
    double stop_tolerance = 1e-9;       // stop when e* improves by less than this
    int restarts = 3;                   // random restarts beyond the seeded start
    bool mass_normalization = false;    // enforce sum(alpha_i) = ||f_i||

    void validate() const;
};

struct AtnWitness {
    std::vector<StepFunction> generators; // unit L1 norm unless numerically zero
    // coefficients[i][m][j] >= 0: target i, generator m, shift index j
    std::vector<std::vector<std::vector<double>>> coefficients;
    std::vector<double> target_errors; // e_i
    double max_error = 0.0;            // e* = max_i e_i
    double mean_error = 0.0;
    std::vector<double> trace;         // objective after each half-step, starting at alpha = 0
    int iterations = 0;
};

struct CoefficientSolution {
    std::vector<double> alpha;
    double error = 0.0;
};

// Best nonnegative combination of the columns for one target in L1, solved
// exactly as a linear program (residuals split into signed parts). All-zero
// columns degrade gracefully to alpha = 0, error = ||target||.
CoefficientSolution solve_coefficients(const StepFunction& target,
                                       const std::vector<StepFunction>& columns,
                                       bool mass_normalization = false);

AtnWitness alternate_optimize(const AtnProblem& problem, std::uint64_t seed);

// e*(n) for n = 1..n_max with warm-start nesting, so the profile is
// nonincreasing by construction.
std::vector<AtnWitness> defect_profile(const AtnProblem& base, int n_max, std::uint64_t seed);

// Evaluates e_i = ||f_i - sum alpha . shifted generators|| for a witness
// against a problem, rebuilding the approximation from scratch.
std::vector<double> witness_errors(const AtnProblem& problem, const AtnWitness& witness);

} // namespace atnlab
