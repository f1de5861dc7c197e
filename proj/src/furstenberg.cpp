#include "atnlab/furstenberg.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "atnlab/rng.hpp"

namespace atnlab {

namespace {

constexpr std::int64_t kOrbitIndexBudget = 1'000'000;
constexpr std::uint64_t kSampleChunk = 8192;

// Compensated (double-double) arithmetic; n^2 alpha at n = 10^6 sits near
// 10^12, where a plain double keeps fewer than 13 fractional bits.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD dd_add(const DD& a, const DD& b) {
    const DD s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

double dd_frac(const DD& x) {
    double f = x.hi - std::floor(x.hi) + x.lo;
    f -= std::floor(f);
    if (f >= 1.0) f -= 1.0;
    if (f < 0.0) f += 1.0;
    return f;
}

// n^2 alpha as a double-double, built from exact products.
DD square_index_alpha(std::int64_t n, double alpha) {
    const auto dn = static_cast<double>(n);
    const DD na = two_prod(dn, alpha);
    const DD head = two_prod(dn, na.hi);
    return quick_two_sum(head.hi, head.lo + dn * na.lo);
}

void check_orbit_index(std::int64_t n) {
    if (n > kOrbitIndexBudget || n < -kOrbitIndexBudget)
        throw std::invalid_argument("orbit index exceeds precision budget");
}

double reduce_mod1(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f -= 1.0;
    if (f < 0.0) f += 1.0;
    return f;
}

// Shared inner loop: codes the orbit of (s,t) at precomputed support offsets.
class CodedSampler {
public:
    CodedSampler(const SkewParams& params, const Support& support) : k_(params.k) {
        indices_.assign(support.begin(), support.end());
        check_orbit_index(indices_.front());
        check_orbit_index(indices_.back());
        quad_.reserve(indices_.size());
        for (const std::int64_t n : indices_)
            quad_.push_back(square_index_alpha(n, params.alpha));
    }

    std::size_t size() const { return indices_.size(); }

    template <typename Out>
    void code(double s, double t, Out* out) const {
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            DD v = dd_add(quad_[i], two_prod(2.0 * static_cast<double>(indices_[i]), s));
            v = dd_add(v, DD{t, 0.0});
            out[i] = static_cast<Out>(code_symbol(dd_frac(v), k_));
        }
    }

private:
    int k_;
    std::vector<std::int64_t> indices_;
    std::vector<DD> quad_;
};

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::complex<double>> roots_of_unity(int cycle) {
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(cycle));
    for (int d = 0; d < cycle; ++d)
        roots[static_cast<std::size_t>(d)] = {std::cos(kTwoPi * d / cycle),
                                              std::sin(kTwoPi * d / cycle)};
    return roots;
}

// Streams coded words y over i.i.d. Haar points into `visit(row, symbols)`.
template <typename Visit>
void stream_coded_words(const SkewParams& params, const Support& support,
                        std::uint64_t n_samples, std::uint64_t seed, int workers, Visit visit) {
    if (n_samples == 0) throw std::invalid_argument("sample count must be positive");
    const CodedSampler sampler(params, support);
    const std::uint64_t chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
    std::atomic<std::uint64_t> next{0};
    auto run = [&]() {
        std::vector<int> symbols(sampler.size());
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= chunks) return;
            Rng rng(child_seed(seed, chunk));
            const std::uint64_t begin = chunk * kSampleChunk;
            const std::uint64_t end = std::min(n_samples, begin + kSampleChunk);
            for (std::uint64_t row = begin; row < end; ++row) {
                const double s = rng.uniform01();
                const double t = rng.uniform01();
                sampler.code(s, t, symbols.data());
                visit(row, symbols);
            }
        }
    };
    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (std::thread& th : pool) th.join();
}

} // namespace

FunnyWord sampled_base_word(const SkewParams& params, const Support& support,
                            std::uint64_t seed) {
    Rng rng(child_seed(seed, 0x0BA5E));
    return code_point(TorusPoint{rng.uniform01(), rng.uniform01()}, params, support);
}

TorusPoint::TorusPoint(double s_, double t_) : s(reduce_mod1(s_)), t(reduce_mod1(t_)) {}

bool near_rational(double x, std::int64_t max_denominator, double tolerance) {
    x = reduce_mod1(x);
    std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1; // a0 = 0 for x in [0,1)
    double frac = x;
    while (q <= max_denominator) {
        if (std::abs(x - static_cast<double>(p) / static_cast<double>(q)) < tolerance)
            return true;
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        frac = inv - std::floor(inv);
        const std::int64_t p_next = a * p + p_prev;
        const std::int64_t q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return false;
}

SkewParams::SkewParams(double alpha_, int k_, bool allow_rational) : alpha(alpha_), k(k_) {
    if (k < 2) throw std::invalid_argument("skew coding needs k >= 2");
    if (k + 1 > 255) throw std::invalid_argument("alphabet size exceeds byte storage (255)");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in [0,1)");
    if (!allow_rational) {
        if (alpha == 0.0 || near_rational(alpha, 10'000, 1e-12))
            throw std::invalid_argument(
                "alpha is rational within representation limits (pass allow_rational to force)");
    }
}

TorusPoint skew_step(const TorusPoint& z, double alpha) {
    TorusPoint next;
    next.s = reduce_mod1(z.s + alpha);
    next.t = reduce_mod1(2.0 * z.s + z.t + alpha);
    return next;
}

TorusPoint skew_power(const TorusPoint& z, double alpha, std::int64_t n) {
    check_orbit_index(n);
    const auto dn = static_cast<double>(n);
    TorusPoint out;
    out.s = dd_frac(dd_add(two_prod(dn, alpha), DD{z.s, 0.0}));
    DD t = dd_add(square_index_alpha(n, alpha), two_prod(2.0 * dn, z.s));
    t = dd_add(t, DD{z.t, 0.0});
    out.t = dd_frac(t);
    return out;
}

std::vector<TorusPoint> skew_orbit(const TorusPoint& z, double alpha, std::int64_t n_from,
                                   std::int64_t n_to) {
    if (n_from > n_to) throw std::invalid_argument("orbit range: n_from > n_to");
    std::vector<TorusPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(n_to - n_from + 1));
    for (std::int64_t n = n_from; n <= n_to; ++n) orbit.push_back(skew_power(z, alpha, n));
    return orbit;
}

int code_symbol(double t, int k) {
    auto cell = static_cast<int>(std::floor(t * (k + 1)));
    if (cell < 0) cell = 0;
    if (cell > k) cell = k;
    return cell;
}

Word code_point(const TorusPoint& z, const SkewParams& params, const IndexInterval& window) {
    const FunnyWord coded = code_point(z, params, Support::interval(window));
    return {window.first, coded.symbols()};
}

FunnyWord code_point(const TorusPoint& z, const SkewParams& params, const Support& support) {
    const CodedSampler sampler(params, support);
    std::vector<int> symbols(support.size());
    sampler.code(z.s, z.t, symbols.data());
    return {support, std::move(symbols)};
}

TorusPoint cell_rotation(const TorusPoint& z, int k) {
    TorusPoint out;
    out.s = z.s;
    out.t = reduce_mod1(z.t + 1.0 / (k + 1));
    return out;
}

EmpiricalMeasure sample_coded_measure(const SkewParams& params, const IndexInterval& window,
                                      std::uint64_t n_samples, std::uint64_t seed, int workers) {
    EmpiricalMeasure::Builder builder(window, params.alphabet(), n_samples, seed);
    stream_coded_words(params, Support::interval(window), n_samples, seed, workers,
                       [&](std::uint64_t row, const std::vector<int>& symbols) {
                           builder.set_row(row, symbols);
                       });
    return builder.finish();
}

CharacterSum character_sum(const FunnyWord& y, const FunnyWord& x) {
    if (y.support() != x.support()) throw std::invalid_argument("support mismatch");
    const int cycle = std::max(y.max_symbol(), x.max_symbol()) + 1;
    CharacterSum cs;
    cs.support_size = static_cast<std::int64_t>(y.size());
    cs.counts.assign(static_cast<std::size_t>(cycle), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        int d = (y.symbols()[i] - x.symbols()[i]) % cycle;
        if (d < 0) d += cycle;
        ++cs.counts[static_cast<std::size_t>(d)];
    }
    const std::vector<std::complex<double>> roots = roots_of_unity(cycle);
    std::complex<double> s{0.0, 0.0};
    for (int d = 0; d < cycle; ++d)
        s += static_cast<double>(cs.counts[static_cast<std::size_t>(d)]) *
             roots[static_cast<std::size_t>(d)];
    cs.value = s;
    return cs;
}

PairCorrelationReport pair_correlations(const SkewParams& params, int max_lag,
                                        std::uint64_t n_samples, std::uint64_t seed) {
    if (max_lag < 1) throw std::invalid_argument("max lag must be positive");
    const int a = params.alphabet();
    const auto lag_count = static_cast<std::size_t>(max_lag);
    std::vector<std::uint64_t> counts(lag_count * static_cast<std::size_t>(a) *
                                          static_cast<std::size_t>(a),
                                      0);
    stream_coded_words(params, Support::interval(0, max_lag), n_samples, seed, 1,
                       [&](std::uint64_t, const std::vector<int>& y) {
                           for (int lag = 1; lag <= max_lag; ++lag)
                               ++counts[(static_cast<std::size_t>(lag - 1) * a + y[0]) * a +
                                        y[static_cast<std::size_t>(lag)]];
                       });
    PairCorrelationReport report;
    report.k = params.k;
    report.expected = 1.0 / (static_cast<double>(a) * a);
    report.samples = n_samples;
    report.seed = seed;
    report.pass = true;
    for (int lag = 1; lag <= max_lag; ++lag)
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) {
                PairCorrelationCell cell;
                cell.i = i;
                cell.j = j;
                cell.lag = lag;
                const std::uint64_t c =
                    counts[(static_cast<std::size_t>(lag - 1) * a + i) * a + j];
                cell.frequency = static_cast<double>(c) / static_cast<double>(n_samples);
                cell.sigma = std::sqrt(cell.frequency * (1.0 - cell.frequency) /
                                       static_cast<double>(n_samples));
                cell.pass = std::abs(cell.frequency - report.expected) <= 3.0 * cell.sigma;
                report.pass = report.pass && cell.pass;
                report.cells.push_back(cell);
            }
    return report;
}

CharSumMomentReport charsum_moment(const SkewParams& params, const Support& support,
                                   std::uint64_t n_samples, std::uint64_t seed) {
    const FunnyWord x = sampled_base_word(params, support, seed);
    const int cycle = params.alphabet();
    const std::vector<std::complex<double>> roots = roots_of_unity(cycle);
    double sum = 0.0, sum_sq = 0.0;
    stream_coded_words(params, support, n_samples, seed, 1,
                       [&](std::uint64_t, const std::vector<int>& y) {
                           std::complex<double> s{0.0, 0.0};
                           for (std::size_t i = 0; i < y.size(); ++i) {
                               int d = (y[i] - x.symbols()[i]) % cycle;
                               if (d < 0) d += cycle;
                               s += roots[static_cast<std::size_t>(d)];
                           }
                           const double v = std::norm(s);
                           sum += v;
                           sum_sq += v * v;
                       });
    CharSumMomentReport report;
    report.support_size = static_cast<std::int64_t>(support.size());
    report.samples = n_samples;
    report.seed = seed;
    report.base_word = to_text(x);
    const auto nn = static_cast<double>(n_samples);
    report.mean_square = sum / nn;
    const double variance = std::max(0.0, sum_sq / nn - report.mean_square * report.mean_square);
    report.sigma = std::sqrt(variance / nn);
    report.pass = std::abs(report.mean_square - static_cast<double>(report.support_size)) <=
                  3.0 * report.sigma;
    return report;
}

MarkovTailReport markov_tail_check(const SkewParams& params, const Support& support,
                                   const FunnyWord& x, std::uint64_t n_samples,
                                   std::uint64_t seed) {
    if (x.support() != support) throw std::invalid_argument("support mismatch");
    const int cycle = params.alphabet();
    const std::vector<std::complex<double>> roots = roots_of_unity(cycle);
    const auto n = static_cast<double>(support.size());
    const double threshold = (2.0 * params.k + 1.0) / (2.0 * params.k + 2.0) * n;
    std::uint64_t tail = 0;
    stream_coded_words(params, support, n_samples, seed, 1,
                       [&](std::uint64_t, const std::vector<int>& y) {
                           std::complex<double> s{0.0, 0.0};
                           for (std::size_t i = 0; i < y.size(); ++i) {
                               int d = (y[i] - x.symbols()[i]) % cycle;
                               if (d < 0) d += cycle;
                               s += roots[static_cast<std::size_t>(d)];
                           }
                           tail += std::abs(s) > threshold;
                       });
    MarkovTailReport report;
    report.support_size = static_cast<std::int64_t>(support.size());
    report.threshold = threshold;
    const double ratio = (2.0 * params.k + 2.0) / (2.0 * params.k + 1.0);
    report.bound = ratio * ratio / n;
    report.estimate = static_cast<double>(tail) / static_cast<double>(n_samples);
    report.sigma = std::sqrt(report.estimate * (1.0 - report.estimate) /
                             static_cast<double>(n_samples));
    report.pass = report.estimate <= report.bound + 3.0 * report.sigma;
    report.samples = n_samples;
    report.seed = seed;
    report.base_word = to_text(x);
    return report;
}

Ineq3Report ineq3_check(const SkewParams& params, const Support& support, const FunnyWord& x,
                        std::uint64_t n_samples, std::uint64_t seed) {
    if (x.support() != support) throw std::invalid_argument("support mismatch");
    const double radius = 1.0 / (4.0 * params.k + 4.0);
    const int budget = mismatch_budget(static_cast<std::int64_t>(support.size()), radius);
    std::uint64_t inside = 0;
    stream_coded_words(params, support, n_samples, seed, 1,
                       [&](std::uint64_t, const std::vector<int>& y) {
                           int mismatches = 0;
                           for (std::size_t i = 0; i < y.size() && mismatches <= budget; ++i)
                               mismatches += y[i] != x.symbols()[i];
                           inside += mismatches <= budget;
                       });
    Ineq3Report report;
    report.support_size = static_cast<std::int64_t>(support.size());
    report.radius = radius;
    report.ball_estimate = static_cast<double>(inside) / static_cast<double>(n_samples);
    report.sigma = std::sqrt(report.ball_estimate * (1.0 - report.ball_estimate) /
                             static_cast<double>(n_samples));
    const double scale = static_cast<double>(params.k) * static_cast<double>(support.size());
    report.statistic = scale * report.ball_estimate;
    report.threshold = 1.0 - 1.0 / (4.0 * params.k * params.k + 4.0 * params.k + 1.0);
    report.margin = 3.0 * scale * report.sigma;
    report.pass = report.statistic <= report.threshold + report.margin;
    report.samples = n_samples;
    report.seed = seed;
    report.base_word = to_text(x);
    return report;
}

} // namespace atnlab
