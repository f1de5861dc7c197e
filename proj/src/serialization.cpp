#include "atnlab/serialization.hpp"

namespace atnlab {

namespace {

nlohmann::json interval_json(const IndexInterval& w) {
    return nlohmann::json{w.first, w.last};
}

} // namespace

void to_json(nlohmann::json& j, const BallEstimate& b) {
    j = {{"value", b.value}, {"half_width", b.half_width}};
}

void to_json(nlohmann::json& j, const EntropyRow& row) {
    j = {{"m", row.m},
         {"H", row.block_entropy},
         {"rate", row.rate},
         {"increment", row.increment},
         {"distinct_blocks", row.distinct_blocks},
         {"corrected", row.corrected}};
    if (row.samples) j["samples"] = *row.samples;
}

void to_json(nlohmann::json& j, const EntropyProfile& profile) {
    j = {{"empirical", profile.empirical}, {"rows", profile.rows}};
}

void to_json(nlohmann::json& j, const TorusPoint& z) {
    j = {{"s", z.s}, {"t", z.t}};
}

void to_json(nlohmann::json& j, const CharacterSum& s) {
    j = {{"re", s.value.real()},
         {"im", s.value.imag()},
         {"abs", std::abs(s.value)},
         {"counts", s.counts},
         {"support_size", s.support_size}};
}

void to_json(nlohmann::json& j, const PairCorrelationCell& cell) {
    j = {{"i", cell.i + 1}, // 1-based symbols on the wire
         {"j", cell.j + 1},
         {"lag", cell.lag},
         {"frequency", cell.frequency},
         {"sigma", cell.sigma},
         {"pass", cell.pass}};
}

void to_json(nlohmann::json& j, const PairCorrelationReport& report) {
    j = {{"k", report.k},
         {"expected", report.expected},
         {"cells", report.cells},
         {"pass", report.pass},
         {"samples", report.samples},
         {"seed", report.seed}};
}

void to_json(nlohmann::json& j, const CharSumMomentReport& report) {
    j = {{"support_size", report.support_size},
         {"mean_square", report.mean_square},
         {"sigma", report.sigma},
         {"pass", report.pass},
         {"samples", report.samples},
         {"seed", report.seed},
         {"base_word", report.base_word}};
}

void to_json(nlohmann::json& j, const MarkovTailReport& report) {
    j = {{"support_size", report.support_size},
         {"threshold", report.threshold},
         {"bound", report.bound},
         {"estimate", report.estimate},
         {"sigma", report.sigma},
         {"pass", report.pass},
         {"samples", report.samples},
         {"seed", report.seed},
         {"base_word", report.base_word}};
}

void to_json(nlohmann::json& j, const Ineq3Report& report) {
    j = {{"support_size", report.support_size},
         {"radius", report.radius},
         {"ball_estimate", report.ball_estimate},
         {"sigma", report.sigma},
         {"statistic", report.statistic},
         {"threshold", report.threshold},
         {"margin", report.margin},
         {"pass", report.pass},
         {"samples", report.samples},
         {"seed", report.seed},
         {"base_word", report.base_word}};
}

void to_json(nlohmann::json& j, const Theorem21Instance& instance) {
    nlohmann::json supports = nlohmann::json::array();
    for (const Support& s : instance.supports) supports.push_back(s.indices());
    nlohmann::json words = nlohmann::json::array();
    for (const FunnyWord& w : instance.words) words.push_back(to_text(w));
    j = {{"n", instance.n()},
         {"eps", instance.eps},
         {"delta", instance.delta},
         {"supports", supports},
         {"words", words},
         {"min_support_size", instance.min_support_size()}};
}

void to_json(nlohmann::json& j, const WitnessReport& report) {
    j = {{"instance", report.instance},
         {"balls", report.balls},
         {"statistic", report.statistic},
         {"optimistic_statistic", report.optimistic_statistic},
         {"threshold", report.threshold},
         {"verdict", to_string(report.verdict)},
         {"seed", report.seed},
         {"budget", report.budget}};
}

void to_json(nlohmann::json& j, const StepFunction& f) {
    j = {{"window", interval_json(f.window())}, {"values", f.values()}};
}

void to_json(nlohmann::json& j, const AtnWitness& witness) {
    j = {{"generators", witness.generators},
         {"coefficients", witness.coefficients},
         {"target_errors", witness.target_errors},
         {"max_error", witness.max_error},
         {"mean_error", witness.mean_error},
         {"iterations", witness.iterations},
         {"trace", witness.trace}};
}

} // namespace atnlab
