#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "atnlab/measures.hpp"

namespace atnlab {

struct EntropyRow {
    int m = 0;
    double block_entropy = 0.0; // H_m in nats
    double rate = 0.0;          // H_m / m
    double increment = 0.0;     // H_m - H_{m-1} (H_0 = 0)
    std::size_t distinct_blocks = 0;
    std::optional<std::uint64_t> samples;
    // Miller-Madow corrected estimate, H_m + (distinct - 1) / (2 N); equals
    // H_m for exact oracles.
    double corrected = 0.0;
};

struct EntropyProfile {
    std::vector<EntropyRow> rows;
    bool empirical = false;
};

// -sum nu(b) ln nu(b) over length-m blocks, with 0 ln 0 = 0.
double block_entropy(const MeasureOracle& oracle, int m);

// -sum p(i) ln p(i)
double bernoulli_entropy_exact(const ProbabilityVector& p);

EntropyProfile entropy_profile(const MeasureOracle& oracle, int m_max);

// Columns: m,H_m,rate,increment,distinct_blocks,samples,corrected
void write_entropy_csv(std::ostream& out, const EntropyProfile& profile);

} // namespace atnlab
