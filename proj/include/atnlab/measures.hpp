#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atnlab/words.hpp"

namespace atnlab {

// Hard cap on exhaustive block enumeration (k^m states).
inline constexpr std::size_t kEnumerationBudget = 10'000'000;

// Probability vector with strictly positive entries; inputs are renormalized
// on construction and must sum to 1 within 1e-12 beforehand.
class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> entries);

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int symbol) const { return p_[static_cast<std::size_t>(symbol)]; }
    const std::vector<double>& entries() const { return p_; }
    double max_entry() const;

private:
    std::vector<double> p_;
};

struct BallEstimate {
    double value = 0.0;
    double half_width = 0.0; // 0 for exact oracles
};

struct BlockDistribution {
    std::vector<double> probs;             // nonzero block probabilities
    std::size_t distinct = 0;              // number of distinct blocks seen
    std::optional<std::uint64_t> samples;  // sample count for empirical oracles
};

// Repeated ball-measure evaluations against one fixed support.
class BallQuery {
public:
    virtual ~BallQuery() = default;
    virtual BallEstimate measure(const FunnyWord& w, double eps) const = 0;
};

// Source of cylinder and Hamming-ball probabilities. Implementations are
// immutable after construction and safe to query concurrently.
class MeasureOracle {
public:
    virtual ~MeasureOracle() = default;

    virtual int alphabet_size() const = 0;
    virtual bool exact() const = 0;
    // Domain restriction; nullopt means every finite support is admissible.
    virtual std::optional<IndexInterval> domain() const = 0;

    virtual double cylinder_measure(const FunnyWord& w) const = 0;
    // Joint distribution of the coordinates in `support`, indexed by packed
    // block (first coordinate most significant): k^|support| entries.
    virtual std::vector<double> support_distribution(const Support& support) const = 0;
    virtual std::vector<double> coordinate_marginal(std::int64_t index) const = 0;
    // Distribution of length-m blocks (anchored at the domain start for
    // empirical oracles; position-free for product measures).
    virtual BlockDistribution block_distribution(int m) const = 0;
    virtual std::vector<Word> sample_words(const IndexInterval& window, std::size_t count,
                                           std::uint64_t seed) const = 0;
    virtual BallEstimate ball_measure(const FunnyWord& w, double eps,
                                      double confidence) const = 0;
    virtual std::unique_ptr<BallQuery> make_ball_query(const Support& support,
                                                       double confidence) const = 0;
};

class BernoulliMeasure final : public MeasureOracle {
public:
    explicit BernoulliMeasure(ProbabilityVector p) : p_(std::move(p)) {}

    const ProbabilityVector& p() const { return p_; }

    int alphabet_size() const override { return p_.size(); }
    bool exact() const override { return true; }
    std::optional<IndexInterval> domain() const override { return std::nullopt; }
    double cylinder_measure(const FunnyWord& w) const override;
    std::vector<double> support_distribution(const Support& support) const override;
    std::vector<double> coordinate_marginal(std::int64_t index) const override;
    BlockDistribution block_distribution(int m) const override;
    std::vector<Word> sample_words(const IndexInterval& window, std::size_t count,
                                   std::uint64_t seed) const override;
    BallEstimate ball_measure(const FunnyWord& w, double eps, double confidence) const override;
    std::unique_ptr<BallQuery> make_ball_query(const Support& support,
                                               double confidence) const override;

private:
    ProbabilityVector p_;
};

// Finite multiset of equal-window sample words, acting as an oracle at its
// own resolution. Raw samples are kept verbatim; ball queries group them by
// restriction to the query support once the sample count is large.
class EmpiricalMeasure final : public MeasureOracle {
public:
    EmpiricalMeasure(IndexInterval window, int alphabet, const std::vector<Word>& samples,
                     std::uint64_t seed);

    const IndexInterval& window() const { return window_; }
    std::uint64_t sample_count() const { return count_; }
    std::uint64_t seed() const { return seed_; }
    Word sample(std::uint64_t row) const;

    int alphabet_size() const override { return k_; }
    bool exact() const override { return false; }
    std::optional<IndexInterval> domain() const override { return window_; }
    double cylinder_measure(const FunnyWord& w) const override;
    std::vector<double> support_distribution(const Support& support) const override;
    std::vector<double> coordinate_marginal(std::int64_t index) const override;
    BlockDistribution block_distribution(int m) const override;
    std::vector<Word> sample_words(const IndexInterval& window, std::size_t count,
                                   std::uint64_t seed) const override;
    BallEstimate ball_measure(const FunnyWord& w, double eps, double confidence) const override;
    std::unique_ptr<BallQuery> make_ball_query(const Support& support,
                                               double confidence) const override;

    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static EmpiricalMeasure load(std::istream& in);
    static EmpiricalMeasure load_file(const std::string& path);

    // Builder used by samplers that produce rows incrementally.
    class Builder {
    public:
        Builder(IndexInterval window, int alphabet, std::uint64_t count, std::uint64_t seed);
        void set_row(std::uint64_t row, const std::vector<int>& symbols);
        EmpiricalMeasure finish();

    private:
        friend class EmpiricalMeasure;
        IndexInterval window_;
        int k_;
        std::uint64_t count_;
        std::uint64_t seed_;
        std::vector<std::uint8_t> data_;
    };

private:
    EmpiricalMeasure(Builder&& b);
    std::vector<std::size_t> support_columns(const Support& support) const;

    IndexInterval window_;
    int k_ = 2;
    std::uint64_t count_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint8_t> data_; // count_ rows of window length
};

// ---- spec operations -------------------------------------------------------

double cylinder_measure_bernoulli(const ProbabilityVector& p, const FunnyWord& w);

// Exact mu_p{x : d(x|_support, w) < eps} via the Poisson-binomial mismatch
// count; strict inequality resolved by mismatch_budget().
double ball_measure_bernoulli_exact(const ProbabilityVector& p, const FunnyWord& w, double eps);

// C(m, floor(m*eps)) * r^(m - floor(m*eps)); exact integers up to m = 30,
// log-space beyond.
double ball_measure_binomial_bound(std::int64_t m, double eps, double r);

// r (1-eps)^eps / ((1-eps) eps^eps r^eps)
double stirling_ratio(double eps, double r);

BallEstimate ball_measure_empirical(const EmpiricalMeasure& em, const FunnyWord& w, double eps,
                                    double confidence);

// ---- numeric helpers -------------------------------------------------------

// P(K <= k_max) for K a sum of independent Bernoulli(mismatch_probs[i]).
double poisson_binomial_tail(const std::vector<double>& mismatch_probs, int k_max);

// z with P(|N(0,1)| <= z) = confidence.
double normal_quantile_two_sided(double confidence);

// Normal-approximation half width, switching to a Wilson-interval half width
// when the estimate is within 10/n of the boundary.
double proportion_half_width(double estimate, std::uint64_t n, double confidence);

std::size_t checked_block_count(int k, std::size_t length, std::size_t budget = kEnumerationBudget);

} // namespace atnlab
