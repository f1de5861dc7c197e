#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atnlab/measures.hpp"

namespace atnlab {

// An instance of the ball-mass statistic sum_i |support_i| nu(ball_i): n
// supports, one funny word per support, ball radius eps and slack delta.
struct Theorem21Instance {
    std::vector<Support> supports;
    std::vector<FunnyWord> words;
    double eps = 0.0;
    double delta = 0.0;

    int n() const { return static_cast<int>(supports.size()); }
    std::size_t min_support_size() const;
    void validate() const;
};

enum class Verdict {
    condition_met,           // statistic clears 1 - delta (with its uncertainty)
    violated_at_resolution,  // even the optimistic statistic stays below 1 - delta
};

std::string to_string(Verdict v);

struct WitnessReport {
    Theorem21Instance instance;
    std::vector<BallEstimate> balls; // per i, half_width 0 for exact oracles
    double statistic = 0.0;          // sum_i |support_i| * ball_i
    double optimistic_statistic = 0.0; // + sum_i |support_i| * half_width_i
    double threshold = 0.0;          // 1 - delta
    Verdict verdict = Verdict::violated_at_resolution;
    std::uint64_t seed = 0;          // echoed by the search
    std::uint64_t budget = 0;
};

// Evaluates the statistic for the given instance: exact ball measures for
// exact oracles, estimates with half widths otherwise. The verdict is
// conservative against Monte-Carlo noise: a violation is declared only when
// the optimistic statistic stays at or below the threshold.
WitnessReport theorem21_statistic(const Theorem21Instance& instance, const MeasureOracle& oracle,
                                  double confidence = 0.95);

// Per-coordinate most probable symbol, ties to the smallest symbol.
FunnyWord greedy_funny_word(const MeasureOracle& oracle, const Support& support);

struct EvidenceParams {
    int n = 1;
    double eps = 0.1;
    double delta = 0.1;
    std::vector<std::size_t> support_sizes; // one per i, or a single broadcast size
    std::size_t budget = 16;                // search rounds
    double confidence = 0.95;
    int random_words_per_round = 4;
    int hill_climb_sweeps = 2;
};

// Maximizes the statistic over supports (contiguous and random within the
// oracle window) and words (greedy seed, random restarts, coordinate-flip
// hill climbing). Candidates are ranked by the optimistic statistic with
// deterministic index tie-breaks.
WitnessReport non_atn_evidence(const MeasureOracle& oracle, const EvidenceParams& params,
                               std::uint64_t seed);

} // namespace atnlab
