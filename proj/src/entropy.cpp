#include "atnlab/entropy.hpp"

#include <cmath>
#include <ostream>

namespace atnlab {

namespace {

double neg_plogp_sum(const std::vector<double>& probs) {
    // Kahan summation; the exact-oracle acceptance tolerance is 1e-9.
    double sum = 0.0, carry = 0.0;
    for (double q : probs) {
        if (q <= 0.0) continue;
        const double term = -q * std::log(q) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum < 0.0 ? 0.0 : sum;
}

} // namespace

double block_entropy(const MeasureOracle& oracle, int m) {
    if (m < 1) throw std::invalid_argument("block length must be positive");
    return neg_plogp_sum(oracle.block_distribution(m).probs);
}

double bernoulli_entropy_exact(const ProbabilityVector& p) {
    return neg_plogp_sum(p.entries());
}

EntropyProfile entropy_profile(const MeasureOracle& oracle, int m_max) {
    if (m_max < 1) throw std::invalid_argument("block length must be positive");
    EntropyProfile profile;
    profile.empirical = !oracle.exact();
    profile.rows.reserve(static_cast<std::size_t>(m_max));
    double previous = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        const BlockDistribution d = oracle.block_distribution(m);
        EntropyRow row;
        row.m = m;
        row.block_entropy = neg_plogp_sum(d.probs);
        row.rate = row.block_entropy / m;
        row.increment = row.block_entropy - previous;
        row.distinct_blocks = d.distinct;
        row.samples = d.samples;
        row.corrected = row.block_entropy;
        if (d.samples && *d.samples > 0)
            row.corrected += static_cast<double>(d.distinct - 1) /
                             (2.0 * static_cast<double>(*d.samples));
        profile.rows.push_back(row);
        previous = row.block_entropy;
    }
    return profile;
}

void write_entropy_csv(std::ostream& out, const EntropyProfile& profile) {
    out << "m,H_m,rate,increment,distinct_blocks,samples,corrected\n";
    for (const EntropyRow& row : profile.rows) {
        out << row.m << ',' << row.block_entropy << ',' << row.rate << ',' << row.increment
            << ',' << row.distinct_blocks << ',';
        if (row.samples) out << *row.samples;
        out << ',' << row.corrected << '\n';
    }
}

} // namespace atnlab
