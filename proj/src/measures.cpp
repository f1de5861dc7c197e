#include "atnlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <boost/math/distributions/normal.hpp>

#include "atnlab/rng.hpp"

namespace atnlab {

namespace {

constexpr std::size_t kSampleBytesBudget = 250'000'000;
// Below this many samples a ball query scans rows directly; at or above it
// the rows are grouped by their restriction to the query support first.
constexpr std::uint64_t kGroupQueryThreshold = 4096;

void check_symbols(const FunnyWord& w, int k) {
    if (w.max_symbol() >= k) throw std::invalid_argument("symbol out of alphabet");
}

} // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> entries) : p_(std::move(entries)) {
    if (p_.size() < 2) throw std::invalid_argument("probability vector needs at least 2 entries");
    if (p_.size() > 255) throw std::invalid_argument("alphabet size exceeds byte storage (255)");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v > 0.0)) throw std::invalid_argument("probability vector entries must be positive");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("probability vector must sum to 1 within 1e-12");
    for (double& v : p_) v /= sum;
}

double ProbabilityVector::max_entry() const {
    return *std::max_element(p_.begin(), p_.end());
}

std::size_t checked_block_count(int k, std::size_t length, std::size_t budget) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < length; ++i) {
        if (count > budget / static_cast<std::size_t>(k))
            throw std::runtime_error("block length exceeds enumeration budget");
        count *= static_cast<std::size_t>(k);
    }
    return count;
}

// ---- Bernoulli -------------------------------------------------------------

double cylinder_measure_bernoulli(const ProbabilityVector& p, const FunnyWord& w) {
    check_symbols(w, p.size());
    double product = 1.0;
    for (int s : w.symbols()) product *= p[s];
    return product;
}

double poisson_binomial_tail(const std::vector<double>& mismatch_probs, int k_max) {
    if (k_max < 0) return 0.0;
    const std::size_t m = mismatch_probs.size();
    const auto cap = std::min<std::size_t>(static_cast<std::size_t>(k_max), m);
    // dist[j] = P(exactly j mismatches among the first i positions)
    std::vector<double> dist(cap + 2, 0.0);
    dist[0] = 1.0;
    std::size_t upto = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double q = mismatch_probs[i];
        upto = std::min(upto + 1, cap + 1);
        for (std::size_t j = upto; j > 0; --j) dist[j] = dist[j] * (1.0 - q) + dist[j - 1] * q;
        dist[0] *= 1.0 - q;
    }
    double tail = 0.0;
    for (std::size_t j = 0; j <= cap; ++j) tail += dist[j];
    return std::min(tail, 1.0);
}

double ball_measure_bernoulli_exact(const ProbabilityVector& p, const FunnyWord& w, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    check_symbols(w, p.size());
    const auto m = static_cast<std::int64_t>(w.size());
    const int budget = mismatch_budget(m, eps);
    std::vector<double> q;
    q.reserve(w.size());
    for (int s : w.symbols()) q.push_back(1.0 - p[s]);
    return poisson_binomial_tail(q, budget);
}

double ball_measure_binomial_bound(std::int64_t m, double eps, double r) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
    const auto j = static_cast<std::int64_t>(std::floor(static_cast<double>(m) * eps));
    if (m <= 30) {
        std::uint64_t c = 1;
        for (std::int64_t i = 0; i < j; ++i)
            c = c * static_cast<std::uint64_t>(m - i) / static_cast<std::uint64_t>(i + 1);
        return static_cast<double>(c) * std::pow(r, static_cast<double>(m - j));
    }
    const double lchoose = std::lgamma(static_cast<double>(m + 1)) -
                           std::lgamma(static_cast<double>(j + 1)) -
                           std::lgamma(static_cast<double>(m - j + 1));
    return std::exp(lchoose + static_cast<double>(m - j) * std::log(r));
}

double stirling_ratio(double eps, double r) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
    return r * std::pow(1.0 - eps, eps) /
           ((1.0 - eps) * std::pow(eps, eps) * std::pow(r, eps));
}

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0,1)");
    const boost::math::normal_distribution<double> unit;
    return boost::math::quantile(unit, 0.5 + confidence / 2.0);
}

double proportion_half_width(double estimate, std::uint64_t n, double confidence) {
    const double z = normal_quantile_two_sided(confidence);
    const auto nn = static_cast<double>(n);
    if (estimate < 10.0 / nn) {
        // Wilson interval half width; stays informative when p_hat is 0,
        // which is exactly the regime the ball statistics live in.
        const double z2 = z * z;
        return z * std::sqrt(estimate * (1.0 - estimate) / nn + z2 / (4.0 * nn * nn)) /
               (1.0 + z2 / nn);
    }
    return z * std::sqrt(estimate * (1.0 - estimate) / nn);
}

double BernoulliMeasure::cylinder_measure(const FunnyWord& w) const {
    return cylinder_measure_bernoulli(p_, w);
}

std::vector<double> BernoulliMeasure::support_distribution(const Support& support) const {
    const int k = p_.size();
    const std::size_t total = checked_block_count(k, support.size());
    std::vector<double> dist{1.0};
    dist.reserve(total);
    for (std::size_t pos = 0; pos < support.size(); ++pos) {
        std::vector<double> next(dist.size() * static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < dist.size(); ++i)
            for (int s = 0; s < k; ++s)
                next[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(s)] =
                    dist[i] * p_[s];
        dist = std::move(next);
    }
    return dist;
}

std::vector<double> BernoulliMeasure::coordinate_marginal(std::int64_t) const {
    return p_.entries();
}

BlockDistribution BernoulliMeasure::block_distribution(int m) const {
    if (m < 1) throw std::invalid_argument("block length must be positive");
    BlockDistribution d;
    d.probs = support_distribution(Support::interval(0, m - 1));
    d.distinct = d.probs.size();
    return d;
}

std::vector<Word> BernoulliMeasure::sample_words(const IndexInterval& window, std::size_t count,
                                                 std::uint64_t seed) const {
    std::vector<double> cumulative(p_.entries());
    for (std::size_t i = 1; i < cumulative.size(); ++i) cumulative[i] += cumulative[i - 1];
    Rng rng(seed);
    std::vector<Word> words;
    words.reserve(count);
    const auto len = static_cast<std::size_t>(window.length());
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<int> symbols(len);
        for (auto& s : symbols) {
            const double u = rng.uniform01();
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            s = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                          p_.size() - 1));
        }
        words.emplace_back(window.first, std::move(symbols));
    }
    return words;
}

BallEstimate BernoulliMeasure::ball_measure(const FunnyWord& w, double eps, double) const {
    return {ball_measure_bernoulli_exact(p_, w, eps), 0.0};
}

namespace {

class BernoulliBallQuery final : public BallQuery {
public:
    explicit BernoulliBallQuery(ProbabilityVector p) : p_(std::move(p)) {}
    BallEstimate measure(const FunnyWord& w, double eps) const override {
        return {ball_measure_bernoulli_exact(p_, w, eps), 0.0};
    }

private:
    ProbabilityVector p_;
};

class EmpiricalBallQuery final : public BallQuery {
public:
    EmpiricalBallQuery(Support support, std::vector<std::uint8_t> rows,
                       std::vector<std::uint64_t> counts, std::uint64_t total, double confidence)
        : support_(std::move(support)),
          rows_(std::move(rows)),
          counts_(std::move(counts)),
          total_(total),
          confidence_(confidence) {}

    BallEstimate measure(const FunnyWord& w, double eps) const override {
        if (w.support() != support_) throw std::invalid_argument("support mismatch");
        if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
        const std::size_t len = support_.size();
        const int budget = mismatch_budget(static_cast<std::int64_t>(len), eps);
        std::uint64_t inside = 0;
        for (std::size_t r = 0; r < counts_.size(); ++r) {
            const std::uint8_t* row = rows_.data() + r * len;
            int mismatches = 0;
            for (std::size_t i = 0; i < len && mismatches <= budget; ++i)
                mismatches += row[i] != w.symbols()[i];
            if (mismatches <= budget) inside += counts_[r];
        }
        const double estimate = static_cast<double>(inside) / static_cast<double>(total_);
        return {estimate, proportion_half_width(estimate, total_, confidence_)};
    }

private:
    Support support_;
    std::vector<std::uint8_t> rows_; // distinct restricted words, flattened
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_;
    double confidence_;
};

} // namespace

std::unique_ptr<BallQuery> BernoulliMeasure::make_ball_query(const Support&, double) const {
    return std::make_unique<BernoulliBallQuery>(p_);
}

// ---- EmpiricalMeasure ------------------------------------------------------

EmpiricalMeasure::Builder::Builder(IndexInterval window, int alphabet, std::uint64_t count,
                                   std::uint64_t seed)
    : window_(window), k_(alphabet), count_(count), seed_(seed) {
    if (alphabet < 2 || alphabet > 255)
        throw std::invalid_argument("alphabet size must lie in [2,255]");
    if (count == 0) throw std::invalid_argument("empirical measure needs at least one sample");
    const auto bytes = count * static_cast<std::uint64_t>(window.length());
    if (bytes > kSampleBytesBudget)
        throw std::runtime_error("sample table exceeds memory budget");
    data_.resize(static_cast<std::size_t>(bytes));
}

void EmpiricalMeasure::Builder::set_row(std::uint64_t row, const std::vector<int>& symbols) {
    const auto len = static_cast<std::size_t>(window_.length());
    if (symbols.size() != len) throw std::invalid_argument("sample length mismatch");
    std::uint8_t* out = data_.data() + row * len;
    for (std::size_t i = 0; i < len; ++i) {
        if (symbols[i] < 0 || symbols[i] >= k_)
            throw std::invalid_argument("symbol out of alphabet");
        out[i] = static_cast<std::uint8_t>(symbols[i]);
    }
}

EmpiricalMeasure EmpiricalMeasure::Builder::finish() { return EmpiricalMeasure(std::move(*this)); }

EmpiricalMeasure::EmpiricalMeasure(Builder&& b)
    : window_(b.window_), k_(b.k_), count_(b.count_), seed_(b.seed_), data_(std::move(b.data_)) {}

EmpiricalMeasure::EmpiricalMeasure(IndexInterval window, int alphabet,
                                   const std::vector<Word>& samples, std::uint64_t seed) {
    Builder b(window, alphabet, samples.size(), seed);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].window() != window)
            throw std::invalid_argument("all samples must share the window");
        b.set_row(i, samples[i].symbols());
    }
    *this = EmpiricalMeasure(std::move(b));
}

Word EmpiricalMeasure::sample(std::uint64_t row) const {
    if (row >= count_) throw std::invalid_argument("sample row out of range");
    const auto len = static_cast<std::size_t>(window_.length());
    std::vector<int> symbols(len);
    const std::uint8_t* in = data_.data() + row * len;
    for (std::size_t i = 0; i < len; ++i) symbols[i] = in[i];
    return {window_.first, std::move(symbols)};
}

std::vector<std::size_t> EmpiricalMeasure::support_columns(const Support& support) const {
    std::vector<std::size_t> cols;
    cols.reserve(support.size());
    for (std::int64_t i : support) {
        if (!window_.contains(i)) throw std::invalid_argument("support outside window");
        cols.push_back(static_cast<std::size_t>(i - window_.first));
    }
    return cols;
}

double EmpiricalMeasure::cylinder_measure(const FunnyWord& w) const {
    check_symbols(w, k_);
    const std::vector<std::size_t> cols = support_columns(w.support());
    const auto len = static_cast<std::size_t>(window_.length());
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < count_; ++r) {
        const std::uint8_t* row = data_.data() + r * len;
        bool match = true;
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (row[cols[i]] != w.symbols()[i]) {
                match = false;
                break;
            }
        hits += match;
    }
    return static_cast<double>(hits) / static_cast<double>(count_);
}

std::vector<double> EmpiricalMeasure::support_distribution(const Support& support) const {
    const std::vector<std::size_t> cols = support_columns(support);
    const std::size_t total = checked_block_count(k_, support.size());
    std::vector<double> dist(total, 0.0);
    const auto len = static_cast<std::size_t>(window_.length());
    const double weight = 1.0 / static_cast<double>(count_);
    for (std::uint64_t r = 0; r < count_; ++r) {
        const std::uint8_t* row = data_.data() + r * len;
        std::size_t idx = 0;
        for (const std::size_t c : cols) idx = idx * static_cast<std::size_t>(k_) + row[c];
        dist[idx] += weight;
    }
    return dist;
}

std::vector<double> EmpiricalMeasure::coordinate_marginal(std::int64_t index) const {
    if (!window_.contains(index)) throw std::invalid_argument("support outside window");
    const auto col = static_cast<std::size_t>(index - window_.first);
    const auto len = static_cast<std::size_t>(window_.length());
    std::vector<double> marginal(static_cast<std::size_t>(k_), 0.0);
    for (std::uint64_t r = 0; r < count_; ++r) marginal[data_[r * len + col]] += 1.0;
    for (double& v : marginal) v /= static_cast<double>(count_);
    return marginal;
}

BlockDistribution EmpiricalMeasure::block_distribution(int m) const {
    if (m < 1) throw std::invalid_argument("block length must be positive");
    if (m > window_.length())
        throw std::invalid_argument("block length exceeds the sample window");
    // Packed block key must fit 64 bits.
    std::uint64_t capacity = 1;
    for (int i = 0; i < m; ++i) {
        if (capacity > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(k_))
            throw std::runtime_error("block length exceeds enumeration budget");
        capacity *= static_cast<std::uint64_t>(k_);
    }
    const auto len = static_cast<std::size_t>(window_.length());
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t r = 0; r < count_; ++r) {
        const std::uint8_t* row = data_.data() + r * len;
        std::uint64_t key = 0;
        for (int i = 0; i < m; ++i) key = key * static_cast<std::uint64_t>(k_) + row[i];
        ++counts[key];
    }
    BlockDistribution d;
    d.probs.reserve(counts.size());
    for (const auto& [key, c] : counts)
        d.probs.push_back(static_cast<double>(c) / static_cast<double>(count_));
    d.distinct = counts.size();
    d.samples = count_;
    return d;
}

std::vector<Word> EmpiricalMeasure::sample_words(const IndexInterval& window, std::size_t count,
                                                 std::uint64_t seed) const {
    if (!window_.contains(window)) throw std::invalid_argument("support outside window");
    Rng rng(seed);
    std::vector<Word> words;
    words.reserve(count);
    const auto offset = static_cast<std::size_t>(window.first - window_.first);
    const auto len = static_cast<std::size_t>(window.length());
    const auto row_len = static_cast<std::size_t>(window_.length());
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t r = rng.below(count_);
        const std::uint8_t* row = data_.data() + r * row_len + offset;
        std::vector<int> symbols(len);
        for (std::size_t j = 0; j < len; ++j) symbols[j] = row[j];
        words.emplace_back(window.first, std::move(symbols));
    }
    return words;
}

std::unique_ptr<BallQuery> EmpiricalMeasure::make_ball_query(const Support& support,
                                                             double confidence) const {
    const std::vector<std::size_t> cols = support_columns(support);
    const std::size_t slen = cols.size();
    const auto len = static_cast<std::size_t>(window_.length());
    std::vector<std::uint8_t> rows;
    std::vector<std::uint64_t> counts;
    if (count_ < kGroupQueryThreshold) {
        rows.resize(static_cast<std::size_t>(count_) * slen);
        counts.assign(static_cast<std::size_t>(count_), 1);
        for (std::uint64_t r = 0; r < count_; ++r) {
            const std::uint8_t* row = data_.data() + r * len;
            for (std::size_t i = 0; i < slen; ++i) rows[r * slen + i] = row[cols[i]];
        }
    } else {
        std::unordered_map<std::string, std::uint64_t> grouped;
        std::string key(slen, '\0');
        for (std::uint64_t r = 0; r < count_; ++r) {
            const std::uint8_t* row = data_.data() + r * len;
            for (std::size_t i = 0; i < slen; ++i) key[i] = static_cast<char>(row[cols[i]]);
            ++grouped[key];
        }
        rows.reserve(grouped.size() * slen);
        counts.reserve(grouped.size());
        for (const auto& [word, c] : grouped) {
            for (const char ch : word) rows.push_back(static_cast<std::uint8_t>(ch));
            counts.push_back(c);
        }
    }
    return std::make_unique<EmpiricalBallQuery>(support, std::move(rows), std::move(counts),
                                                count_, confidence);
}

BallEstimate EmpiricalMeasure::ball_measure(const FunnyWord& w, double eps,
                                            double confidence) const {
    check_symbols(w, k_);
    return make_ball_query(w.support(), confidence)->measure(w, eps);
}

BallEstimate ball_measure_empirical(const EmpiricalMeasure& em, const FunnyWord& w, double eps,
                                    double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0,1)");
    return em.ball_measure(w, eps, confidence);
}

// ---- persistence -----------------------------------------------------------

void EmpiricalMeasure::save(std::ostream& out) const {
    out << "atnlab-empirical v1\n";
    out << "window " << window_.first << " " << window_.last << "\n";
    out << "alphabet " << k_ << "\n";
    out << "samples " << count_ << "\n";
    out << "seed " << seed_ << "\n";
    const auto len = static_cast<std::size_t>(window_.length());
    for (std::uint64_t r = 0; r < count_; ++r) {
        const std::uint8_t* row = data_.data() + r * len;
        for (std::size_t i = 0; i < len; ++i) {
            if (i) out << ' ';
            out << static_cast<int>(row[i]) + 1; // 1-based on disk
        }
        out << '\n';
    }
}

void EmpiricalMeasure::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save(out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void load_error(std::size_t line, const std::string& message) {
    throw std::runtime_error("empirical measure file, line " + std::to_string(line) + ": " +
                             message);
}

} // namespace

EmpiricalMeasure EmpiricalMeasure::load(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) load_error(lineno + 1, "unexpected end of file");
        ++lineno;
    };
    next_line();
    if (line != "atnlab-empirical v1") load_error(lineno, "bad magic header");
    std::int64_t a = 0, b = 0;
    int k = 0;
    std::uint64_t count = 0, seed = 0;
    auto parse_kv = [&](const char* keyword, auto&... values) {
        next_line();
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key != keyword) load_error(lineno, std::string("expected '") + keyword + "'");
        ((ss >> values), ...);
        if (!ss) load_error(lineno, std::string("malformed '") + keyword + "' line");
    };
    parse_kv("window", a, b);
    parse_kv("alphabet", k);
    parse_kv("samples", count);
    parse_kv("seed", seed);
    if (b < a) load_error(2, "window last < first");
    Builder builder(IndexInterval(a, b), k, count, seed);
    const auto len = static_cast<std::size_t>(b - a + 1);
    std::vector<int> symbols(len);
    for (std::uint64_t r = 0; r < count; ++r) {
        next_line();
        std::istringstream ss(line);
        for (std::size_t i = 0; i < len; ++i) {
            int s = 0;
            if (!(ss >> s)) load_error(lineno, "short sample row");
            if (s < 1 || s > k) load_error(lineno, "symbol out of alphabet");
            symbols[i] = s - 1;
        }
        builder.set_row(r, symbols);
    }
    return builder.finish();
}

EmpiricalMeasure EmpiricalMeasure::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return load(in);
}

} // namespace atnlab
