#include "atnlab/step_function.hpp"

#include <cmath>

namespace atnlab {

std::size_t pack_block(std::span<const int> symbols, int k) {
    std::size_t index = 0;
    for (int s : symbols) index = index * static_cast<std::size_t>(k) + static_cast<std::size_t>(s);
    return index;
}

std::vector<int> unpack_block(std::size_t index, int k, std::size_t length) {
    std::vector<int> symbols(length);
    for (std::size_t i = length; i > 0; --i) {
        symbols[i - 1] = static_cast<int>(index % static_cast<std::size_t>(k));
        index /= static_cast<std::size_t>(k);
    }
    return symbols;
}

StepFunction::StepFunction(std::shared_ptr<const MeasureOracle> oracle, IndexInterval window,
                           std::vector<double> values)
    : oracle_(std::move(oracle)), window_(window), values_(std::move(values)) {
    if (!oracle_) throw std::invalid_argument("step function needs an oracle");
    const std::size_t expected =
        checked_block_count(oracle_->alphabet_size(), static_cast<std::size_t>(window_.length()));
    if (values_.size() != expected)
        throw std::invalid_argument("step function: one value per window block required");
    for (double& v : values_) {
        if (v < -1e-9) throw std::invalid_argument("step function values must be nonnegative");
        if (v < 0.0) v = 0.0;
    }
    weights_ = oracle_->support_distribution(Support::interval(window_));
}

StepFunction StepFunction::constant(std::shared_ptr<const MeasureOracle> oracle,
                                    IndexInterval window, double value) {
    const std::size_t blocks =
        checked_block_count(oracle->alphabet_size(), static_cast<std::size_t>(window.length()));
    return {std::move(oracle), window, std::vector<double>(blocks, value)};
}

StepFunction StepFunction::normalized_indicator(std::shared_ptr<const MeasureOracle> oracle,
                                                IndexInterval window, std::size_t block) {
    const std::size_t blocks =
        checked_block_count(oracle->alphabet_size(), static_cast<std::size_t>(window.length()));
    if (block >= blocks) throw std::invalid_argument("block index out of range");
    const std::vector<double> weights = oracle->support_distribution(Support::interval(window));
    if (weights[block] <= 0.0)
        throw std::invalid_argument("cannot normalize an indicator of a null block");
    std::vector<double> values(blocks, 0.0);
    values[block] = 1.0 / weights[block];
    return {std::move(oracle), window, std::move(values)};
}

double StepFunction::l1_norm() const {
    double sum = 0.0;
    for (std::size_t b = 0; b < values_.size(); ++b) sum += values_[b] * weights_[b];
    return sum;
}

StepFunction StepFunction::scaled(double factor) const {
    std::vector<double> values(values_);
    for (double& v : values) v *= factor;
    return {oracle_, window_, std::move(values)};
}

double StepFunction::normalize() {
    const double norm = l1_norm();
    if (norm <= 1e-12) return 0.0;
    for (double& v : values_) v /= norm;
    return norm;
}

double l1_distance(const StepFunction& f, const StepFunction& g) {
    if (f.window() != g.window() || f.oracle() != g.oracle())
        throw std::invalid_argument("window mismatch");
    double sum = 0.0;
    for (std::size_t b = 0; b < f.block_count(); ++b)
        sum += std::abs(f.values()[b] - g.values()[b]) * f.weights()[b];
    return sum;
}

std::vector<double> shift_projection_matrix(const MeasureOracle& oracle,
                                            const IndexInterval& generator_window,
                                            std::int64_t t,
                                            const IndexInterval& target_window) {
    const int k = oracle.alphabet_size();
    // g o S^t reads coordinates (window of g) - t.
    const Support reads =
        Support::interval(generator_window.first - t, generator_window.last - t);
    const Support target = Support::interval(target_window);
    const Support joint_support = support_union(reads, target);
    const std::size_t joint_blocks = checked_block_count(k, joint_support.size());
    const std::vector<double> joint = oracle.support_distribution(joint_support);

    std::vector<std::size_t> read_pos(reads.size()), target_pos(target.size());
    for (std::size_t i = 0; i < reads.size(); ++i)
        read_pos[i] = joint_support.position_of(reads[i]);
    for (std::size_t i = 0; i < target.size(); ++i)
        target_pos[i] = joint_support.position_of(target[i]);

    std::vector<std::size_t> place(joint_support.size(), 1);
    for (std::size_t i = joint_support.size() - 1; i > 0; --i)
        place[i - 1] = place[i] * static_cast<std::size_t>(k);

    const std::size_t gen_blocks = checked_block_count(k, reads.size());
    const std::size_t tgt_blocks = checked_block_count(k, target.size());
    std::vector<double> matrix(tgt_blocks * gen_blocks, 0.0);
    std::vector<double> mass(tgt_blocks, 0.0);
    for (std::size_t q = 0; q < joint_blocks; ++q) {
        const double w = joint[q];
        if (w <= 0.0) continue;
        std::size_t gi = 0;
        for (const std::size_t p : read_pos)
            gi = gi * static_cast<std::size_t>(k) + (q / place[p]) % static_cast<std::size_t>(k);
        std::size_t ui = 0;
        for (const std::size_t p : target_pos)
            ui = ui * static_cast<std::size_t>(k) + (q / place[p]) % static_cast<std::size_t>(k);
        matrix[ui * gen_blocks + gi] += w;
        mass[ui] += w;
    }
    for (std::size_t ui = 0; ui < tgt_blocks; ++ui) {
        if (mass[ui] <= 0.0) continue;
        const double inv = 1.0 / mass[ui];
        for (std::size_t gi = 0; gi < gen_blocks; ++gi) matrix[ui * gen_blocks + gi] *= inv;
    }
    return matrix;
}

StepFunction shift_column(const StepFunction& g, std::int64_t t,
                          const IndexInterval& target_window) {
    const std::vector<double> matrix =
        shift_projection_matrix(*g.oracle(), g.window(), t, target_window);
    const std::size_t gen_blocks = g.block_count();
    const std::size_t tgt_blocks = matrix.size() / gen_blocks;
    std::vector<double> values(tgt_blocks, 0.0);
    for (std::size_t ui = 0; ui < tgt_blocks; ++ui) {
        double acc = 0.0;
        for (std::size_t gi = 0; gi < gen_blocks; ++gi)
            acc += matrix[ui * gen_blocks + gi] * g.values()[gi];
        values[ui] = acc;
    }
    return {g.oracle(), target_window, std::move(values)};
}

} // namespace atnlab
