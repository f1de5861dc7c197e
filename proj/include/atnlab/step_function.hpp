#pragma once

#include <memory>
#include <span>
#include <vector>

#include "atnlab/measures.hpp"

namespace atnlab {

// Block enumeration order: first coordinate most significant, so packed
// indices run in lexicographic symbol order.
std::size_t pack_block(std::span<const int> symbols, int k);
std::vector<int> unpack_block(std::size_t index, int k, std::size_t length);

// Nonnegative cylinder-measurable function on a finite coordinate window,
// carrying the oracle that supplies its block weights. The finite-dimensional
// stand-in for nonnegative integrable functions.
class StepFunction {
public:
    StepFunction(std::shared_ptr<const MeasureOracle> oracle, IndexInterval window,
                 std::vector<double> values);

    static StepFunction constant(std::shared_ptr<const MeasureOracle> oracle,
                                 IndexInterval window, double value);
    // 1_block / nu(block): unit L1 norm by construction.
    static StepFunction normalized_indicator(std::shared_ptr<const MeasureOracle> oracle,
                                             IndexInterval window, std::size_t block);

    const std::shared_ptr<const MeasureOracle>& oracle() const { return oracle_; }
    const IndexInterval& window() const { return window_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t block_count() const { return values_.size(); }

    double l1_norm() const;
    StepFunction scaled(double factor) const;
    // Rescales to unit L1 norm; returns the previous norm. A numerically
    // zero function is left untouched and reports norm 0.
    double normalize();

    friend bool operator==(const StepFunction& a, const StepFunction& b) {
        return a.window_ == b.window_ && a.values_ == b.values_ && a.oracle_ == b.oracle_;
    }

private:
    std::shared_ptr<const MeasureOracle> oracle_;
    IndexInterval window_;
    std::vector<double> values_;
    std::vector<double> weights_;
};

// sum_b |f(b) - g(b)| nu(b); requires a common window and oracle.
double l1_distance(const StepFunction& f, const StepFunction& g);

// The function g o S^t, which reads coordinates (window of g) - t, projected
// onto target_window by conditional expectation under g's oracle. Preserves
// nonnegativity and, for shift-invariant oracles, the L1 norm.
StepFunction shift_column(const StepFunction& g, std::int64_t t,
                          const IndexInterval& target_window);

// Matrix P with (proj g)(b) = sum_v P[b][v] g(v) for the same projection,
// row-major over target blocks. shift_column is this matrix applied to g.
std::vector<double> shift_projection_matrix(const MeasureOracle& oracle,
                                            const IndexInterval& generator_window,
                                            std::int64_t t,
                                            const IndexInterval& target_window);

} // namespace atnlab
