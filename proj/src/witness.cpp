#include "atnlab/witness.hpp"

#include <algorithm>

#include "atnlab/rng.hpp"

namespace atnlab {

namespace {

// Pessimistic per-ball score used while searching; for exact oracles this is
// just the ball measure.
double ball_score(const BallEstimate& b) { return b.value - b.half_width; }

struct Candidate {
    FunnyWord word;
    BallEstimate ball;

    Candidate(FunnyWord w, BallEstimate b) : word(std::move(w)), ball(b) {}
};

Candidate hill_climb(const BallQuery& query, FunnyWord word, double eps, int alphabet,
                     int sweeps) {
    BallEstimate current = query.measure(word, eps);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t pos = 0; pos < word.size(); ++pos) {
            const int original = word.symbols()[pos];
            int best_symbol = original;
            for (int s = 0; s < alphabet; ++s) {
                if (s == original) continue;
                std::vector<int> symbols = word.symbols();
                symbols[pos] = s;
                const FunnyWord flipped(word.support(), std::move(symbols));
                const BallEstimate flipped_ball = query.measure(flipped, eps);
                if (ball_score(flipped_ball) > ball_score(current)) {
                    current = flipped_ball;
                    best_symbol = s;
                }
            }
            if (best_symbol != original) {
                std::vector<int> symbols = word.symbols();
                symbols[pos] = best_symbol;
                word = FunnyWord(word.support(), std::move(symbols));
                improved = true;
            }
        }
        if (!improved) break;
    }
    return {std::move(word), current};
}

FunnyWord random_word(const Support& support, int alphabet, Rng& rng) {
    std::vector<int> symbols(support.size());
    for (int& s : symbols) s = static_cast<int>(rng.below(static_cast<std::uint64_t>(alphabet)));
    return {support, std::move(symbols)};
}

Support random_support(const IndexInterval& window, std::size_t size, bool contiguous,
                       Rng& rng) {
    const auto length = static_cast<std::uint64_t>(window.length());
    if (contiguous) {
        const std::uint64_t slack = length - size;
        const std::int64_t offset =
            window.first + (slack == 0 ? 0 : static_cast<std::int64_t>(rng.below(slack + 1)));
        return Support::interval(offset, offset + static_cast<std::int64_t>(size) - 1);
    }
    // Partial Fisher-Yates over the window indices.
    std::vector<std::int64_t> pool(static_cast<std::size_t>(length));
    for (std::size_t i = 0; i < pool.size(); ++i)
        pool[i] = window.first + static_cast<std::int64_t>(i);
    std::vector<std::int64_t> chosen;
    chosen.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng.below(length - i);
        std::swap(pool[i], pool[static_cast<std::size_t>(j)]);
        chosen.push_back(pool[i]);
    }
    return Support(std::move(chosen));
}

WitnessReport assemble_report(Theorem21Instance instance, std::vector<BallEstimate> balls) {
    WitnessReport report;
    report.threshold = 1.0 - instance.delta;
    report.statistic = 0.0;
    report.optimistic_statistic = 0.0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        const auto size = static_cast<double>(instance.supports[i].size());
        report.statistic += size * balls[i].value;
        report.optimistic_statistic += size * (balls[i].value + balls[i].half_width);
    }
    report.verdict = report.optimistic_statistic > report.threshold
                         ? Verdict::condition_met
                         : Verdict::violated_at_resolution;
    report.instance = std::move(instance);
    report.balls = std::move(balls);
    return report;
}

} // namespace

std::size_t Theorem21Instance::min_support_size() const {
    std::size_t m = supports.front().size();
    for (const Support& s : supports) m = std::min(m, s.size());
    return m;
}

void Theorem21Instance::validate() const {
    if (supports.empty() || supports.size() != words.size())
        throw std::invalid_argument("instance needs one word per support");
    for (std::size_t i = 0; i < supports.size(); ++i)
        if (words[i].support() != supports[i])
            throw std::invalid_argument("support mismatch");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
}

std::string to_string(Verdict v) {
    return v == Verdict::condition_met ? "condition-met" : "violated-at-resolution";
}

WitnessReport theorem21_statistic(const Theorem21Instance& instance, const MeasureOracle& oracle,
                                  double confidence) {
    instance.validate();
    std::vector<BallEstimate> balls;
    balls.reserve(instance.words.size());
    for (const FunnyWord& w : instance.words)
        balls.push_back(oracle.ball_measure(w, instance.eps, confidence));
    return assemble_report(instance, std::move(balls));
}

FunnyWord greedy_funny_word(const MeasureOracle& oracle, const Support& support) {
    std::vector<int> symbols;
    symbols.reserve(support.size());
    for (const std::int64_t index : support) {
        const std::vector<double> marginal = oracle.coordinate_marginal(index);
        int best = 0;
        for (int s = 1; s < static_cast<int>(marginal.size()); ++s)
            if (marginal[static_cast<std::size_t>(s)] > marginal[static_cast<std::size_t>(best)])
                best = s; // strict improvement keeps the smallest symbol on ties
        symbols.push_back(best);
    }
    return {support, std::move(symbols)};
}

WitnessReport non_atn_evidence(const MeasureOracle& oracle, const EvidenceParams& params,
                               std::uint64_t seed) {
    if (params.budget < 1) throw std::invalid_argument("search budget must be positive");
    if (params.n < 1) throw std::invalid_argument("n must be positive");
    if (!(params.eps > 0.0 && params.eps < 1.0))
        throw std::invalid_argument("eps must lie in (0,1)");
    if (!(params.delta > 0.0 && params.delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    if (params.support_sizes.empty())
        throw std::invalid_argument("at least one support size required");

    std::vector<std::size_t> sizes(static_cast<std::size_t>(params.n));
    for (std::size_t i = 0; i < sizes.size(); ++i)
        sizes[i] = params.support_sizes[i % params.support_sizes.size()];

    const int alphabet = oracle.alphabet_size();
    bool have_best = false;
    WitnessReport best;
    double best_score = 0.0;

    for (std::size_t round = 0; round < params.budget; ++round) {
        Theorem21Instance instance;
        instance.eps = params.eps;
        instance.delta = params.delta;
        std::vector<BallEstimate> balls;
        double score = 0.0;
        for (int i = 0; i < params.n; ++i) {
            Rng rng(child_seed(seed, round * 65536 + static_cast<std::uint64_t>(i)));
            const std::size_t size = sizes[static_cast<std::size_t>(i)];
            IndexInterval window{0, 2 * static_cast<std::int64_t>(size) - 1};
            if (const auto domain = oracle.domain()) window = *domain;
            if (static_cast<std::int64_t>(size) > window.length())
                throw std::invalid_argument("support size exceeds oracle window");
            const Support support =
                random_support(window, size, /*contiguous=*/round % 2 == 0, rng);
            const auto query = oracle.make_ball_query(support, params.confidence);

            Candidate winner = hill_climb(*query, greedy_funny_word(oracle, support), params.eps,
                                          alphabet, params.hill_climb_sweeps);
            for (int r = 0; r < params.random_words_per_round; ++r) {
                Candidate c = hill_climb(*query, random_word(support, alphabet, rng), params.eps,
                                         alphabet, params.hill_climb_sweeps);
                if (ball_score(c.ball) > ball_score(winner.ball)) winner = std::move(c);
            }
            score += static_cast<double>(size) * ball_score(winner.ball);
            instance.supports.push_back(support);
            instance.words.push_back(std::move(winner.word));
            balls.push_back(winner.ball);
        }
        if (!have_best || score > best_score) {
            best_score = score;
            best = assemble_report(std::move(instance), std::move(balls));
            have_best = true;
        }
    }
    best.seed = seed;
    best.budget = params.budget;
    return best;
}

} // namespace atnlab
