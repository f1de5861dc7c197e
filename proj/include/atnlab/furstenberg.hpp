#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "atnlab/measures.hpp"

namespace atnlab {

struct TorusPoint {
    double s = 0.0;
    double t = 0.0;

    TorusPoint() = default;
    TorusPoint(double s_, double t_);

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

// Parameters of the torus skew product (s,t) -> (s+alpha, 2s+t+alpha) and its
// coding into the alphabet {1,...,k+1} (0-based internally).
struct SkewParams {
    double alpha;
    int k;

    // Rejects alpha within 1e-12 of a rational with denominator <= 10^4
    // unless allow_rational is set (test-only escape hatch; also admits 0).
    SkewParams(double alpha_, int k_, bool allow_rational = false);

    static double golden_alpha() { return 0.61803398874989484820; } // frac((1+sqrt 5)/2)
    int alphabet() const { return k + 1; }
};

bool near_rational(double x, std::int64_t max_denominator, double tolerance);

// One application of T.
TorusPoint skew_step(const TorusPoint& z, double alpha);

// T^n(z) by the closed form (s + n alpha, t + n^2 alpha + 2 n s), evaluated in
// compensated double-double arithmetic; |n| is capped at 10^6, past which the
// n^2 alpha term would need a wider format.
TorusPoint skew_power(const TorusPoint& z, double alpha, std::int64_t n);

std::vector<TorusPoint> skew_orbit(const TorusPoint& z, double alpha, std::int64_t n_from,
                                   std::int64_t n_to);

// Partition cell of the t-coordinate: cells [i/(k+1), (i+1)/(k+1)), i = 0..k.
int code_symbol(double t, int k);

// x_n = cell of T^n(z) for n in the window / support.
Word code_point(const TorusPoint& z, const SkewParams& params, const IndexInterval& window);
FunnyWord code_point(const TorusPoint& z, const SkewParams& params, const Support& support);

// The torus rotation R(s,t) = (s, t + 1/(k+1)) that cycles coded symbols.
TorusPoint cell_rotation(const TorusPoint& z, int k);

// Codes i.i.d. Haar-uniform points on the window; deterministic for a given
// seed and independent of the worker count (samples are generated in fixed
// chunks with per-chunk substreams).
EmpiricalMeasure sample_coded_measure(const SkewParams& params, const IndexInterval& window,
                                      std::uint64_t n_samples, std::uint64_t seed,
                                      int workers = 1);

struct CharacterSum {
    std::complex<double> value;  // sum of (k+1)-th roots of unity over the support
    std::vector<std::int64_t> counts; // counts[i] = #{j : y_j = x_j + i mod (k+1)}
    std::int64_t support_size = 0;
};

// S = sum_j eps^((y_j - x_j) mod (k+1)) with eps = exp(2 pi i/(k+1)).
CharacterSum character_sum(const FunnyWord& y, const FunnyWord& x);

struct PairCorrelationCell {
    int i = 0;
    int j = 0;
    int lag = 0;
    double frequency = 0.0;
    double sigma = 0.0;
    bool pass = false; // |frequency - expected| <= 3 sigma
};

struct PairCorrelationReport {
    int k = 0;
    double expected = 0.0; // 1/(k+1)^2
    std::vector<PairCorrelationCell> cells;
    bool pass = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

PairCorrelationReport pair_correlations(const SkewParams& params, int max_lag,
                                        std::uint64_t n_samples, std::uint64_t seed);

struct CharSumMomentReport {
    std::int64_t support_size = 0;
    double mean_square = 0.0; // sample mean of |S|^2
    double sigma = 0.0;       // standard error of the mean
    bool pass = false;        // |mean - n| <= 3 sigma
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string base_word; // text form of the fixed word x
};

// Checks E(|S|^2) = |support| against the sampled coded measure; the base
// word is the coding of one Haar-sampled point (substream 0 of the seed).
CharSumMomentReport charsum_moment(const SkewParams& params, const Support& support,
                                   std::uint64_t n_samples, std::uint64_t seed);

struct MarkovTailReport {
    std::int64_t support_size = 0;
    double threshold = 0.0; // (2k+1)/(2k+2) * n
    double bound = 0.0;     // ((2k+2)/(2k+1))^2 / n
    double estimate = 0.0;  // empirical tail frequency
    double sigma = 0.0;
    bool pass = false; // estimate <= bound + 3 sigma
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string base_word;
};

MarkovTailReport markov_tail_check(const SkewParams& params, const Support& support,
                                   const FunnyWord& x, std::uint64_t n_samples,
                                   std::uint64_t seed);

// Coding of one Haar-sampled point (substream 0x0BA5E of the seed); the
// default base word for the character-sum experiments.
FunnyWord sampled_base_word(const SkewParams& params, const Support& support,
                            std::uint64_t seed);

struct Ineq3Report {
    std::int64_t support_size = 0;
    double radius = 0.0;         // 1/(4k+4)
    double ball_estimate = 0.0;  // nu(B)
    double sigma = 0.0;          // of the ball estimate
    double statistic = 0.0;      // k * |support| * nu(B)
    double threshold = 0.0;      // 1 - 1/(4k^2+4k+1)
    double margin = 0.0;         // 3 * k * |support| * sigma
    bool pass = false;           // statistic <= threshold + margin
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string base_word;
};

Ineq3Report ineq3_check(const SkewParams& params, const Support& support, const FunnyWord& x,
                        std::uint64_t n_samples, std::uint64_t seed);

} // namespace atnlab
