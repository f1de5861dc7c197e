#include "atnlab/atn_solver.hpp"

#include <algorithm>
#include <cmath>

#include "atnlab/rng.hpp"
#include "atnlab/simplex.hpp"

namespace atnlab {

namespace {

// Blocks with zero weight cannot move the L1 objective; the LPs skip them.
std::vector<std::size_t> positive_weight_blocks(const std::vector<double>& weights) {
    std::vector<std::size_t> rows;
    for (std::size_t b = 0; b < weights.size(); ++b)
        if (weights[b] > 0.0) rows.push_back(b);
    return rows;
}

CoefficientSolution solve_coefficients_raw(const std::vector<double>& target,
                                           const std::vector<double>& weights,
                                           const std::vector<const std::vector<double>*>& columns,
                                           double target_norm, bool mass_normalization) {
    const std::vector<std::size_t> rows = positive_weight_blocks(weights);
    const std::size_t n_rows = rows.size() + (mass_normalization ? 1 : 0);
    const std::size_t n_cols = columns.size() + 2 * rows.size();
    LinearProgram lp(n_rows, n_cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t b = rows[r];
        for (std::size_t c = 0; c < columns.size(); ++c) lp.at(r, c) = (*columns[c])[b];
        lp.at(r, columns.size() + r) = 1.0;               // positive residual
        lp.at(r, columns.size() + rows.size() + r) = -1.0; // negative residual
        lp.b[r] = target[b];
        lp.c[columns.size() + r] = weights[b];
        lp.c[columns.size() + rows.size() + r] = weights[b];
    }
    if (mass_normalization) {
        const std::size_t r = rows.size();
        for (std::size_t c = 0; c < columns.size(); ++c) lp.at(r, c) = 1.0;
        lp.b[r] = target_norm;
    }
    const SimplexSolution sol = solve_lp(lp);
    if (!sol.feasible || !sol.bounded)
        throw std::runtime_error("coefficient subproblem did not solve");
    CoefficientSolution out;
    out.alpha.assign(columns.size(), 0.0);
    for (std::size_t c = 0; c < columns.size(); ++c) out.alpha[c] = std::max(0.0, sol.x[c]);
    out.error = sol.objective;
    return out;
}

double l1_error_raw(const std::vector<double>& target, const std::vector<double>& approx,
                    const std::vector<double>& weights) {
    double sum = 0.0;
    for (std::size_t b = 0; b < target.size(); ++b)
        sum += std::abs(target[b] - approx[b]) * weights[b];
    return sum;
}

struct Workspace {
    const AtnProblem* problem = nullptr;
    std::shared_ptr<const MeasureOracle> oracle;
    std::size_t target_blocks = 0;
    std::size_t generator_blocks = 0;
    std::vector<double> target_weights;
    std::vector<double> generator_weights;
    std::vector<double> target_norms;
    // projections[j]: target_blocks x generator_blocks matrix for shift j
    std::vector<std::vector<double>> projections;

    explicit Workspace(const AtnProblem& p) : problem(&p) {
        oracle = p.targets.front().oracle();
        target_weights = p.targets.front().weights();
        target_blocks = target_weights.size();
        generator_weights = oracle->support_distribution(Support::interval(p.generator_window));
        generator_blocks = generator_weights.size();
        for (const StepFunction& f : p.targets) target_norms.push_back(f.l1_norm());
        projections.reserve(p.shifts.size());
        for (const std::int64_t t : p.shifts)
            projections.push_back(shift_projection_matrix(*oracle, p.generator_window, t,
                                                          p.targets.front().window()));
    }

    // Column values of generator m under shift index j.
    std::vector<double> column(const std::vector<double>& generator, std::size_t j) const {
        std::vector<double> out(target_blocks, 0.0);
        const std::vector<double>& mat = projections[j];
        for (std::size_t b = 0; b < target_blocks; ++b) {
            double acc = 0.0;
            const double* row = mat.data() + b * generator_blocks;
            for (std::size_t v = 0; v < generator_blocks; ++v) acc += row[v] * generator[v];
            out[b] = acc;
        }
        return out;
    }
};

struct AlternationState {
    std::vector<std::vector<double>> generators; // n x generator_blocks
    std::vector<std::vector<std::vector<double>>> alpha; // K x n x shifts
    std::vector<double> errors;
    double max_error = 0.0;
};

double evaluate_errors(const Workspace& ws, AlternationState& state) {
    const AtnProblem& p = *ws.problem;
    const std::size_t shifts = p.shifts.size();
    std::vector<std::vector<double>> cols;
    cols.reserve(state.generators.size() * shifts);
    for (const auto& g : state.generators)
        for (std::size_t j = 0; j < shifts; ++j) cols.push_back(ws.column(g, j));
    state.errors.assign(p.targets.size(), 0.0);
    for (std::size_t i = 0; i < p.targets.size(); ++i) {
        std::vector<double> approx(ws.target_blocks, 0.0);
        for (std::size_t m = 0; m < state.generators.size(); ++m)
            for (std::size_t j = 0; j < shifts; ++j) {
                const double a = state.alpha[i][m][j];
                if (a == 0.0) continue;
                const std::vector<double>& col = cols[m * shifts + j];
                for (std::size_t b = 0; b < ws.target_blocks; ++b) approx[b] += a * col[b];
            }
        state.errors[i] = l1_error_raw(p.targets[i].values(), approx, ws.target_weights);
    }
    state.max_error = *std::max_element(state.errors.begin(), state.errors.end());
    return state.max_error;
}

void coefficient_step(const Workspace& ws, AlternationState& state) {
    const AtnProblem& p = *ws.problem;
    const std::size_t shifts = p.shifts.size();
    std::vector<std::vector<double>> cols;
    cols.reserve(state.generators.size() * shifts);
    for (const auto& g : state.generators)
        for (std::size_t j = 0; j < shifts; ++j) cols.push_back(ws.column(g, j));
    std::vector<const std::vector<double>*> col_ptrs;
    for (const auto& c : cols) col_ptrs.push_back(&c);
    for (std::size_t i = 0; i < p.targets.size(); ++i) {
        const CoefficientSolution sol =
            solve_coefficients_raw(p.targets[i].values(), ws.target_weights, col_ptrs,
                                   ws.target_norms[i], p.mass_normalization);
        for (std::size_t m = 0; m < state.generators.size(); ++m)
            for (std::size_t j = 0; j < shifts; ++j)
                state.alpha[i][m][j] = sol.alpha[m * shifts + j];
        state.errors[i] = sol.error;
    }
    state.max_error = *std::max_element(state.errors.begin(), state.errors.end());
}

// With coefficients fixed the approximation is linear in the generator block
// values, so minimizing the worst-case L1 error is again an LP:
//   min z  s.t.  approx_i + r+ - r- = f_i,  sum_b w_b (r+ + r-) + s_i = z.
void generator_step(const Workspace& ws, AlternationState& state) {
    const AtnProblem& p = *ws.problem;
    const std::size_t n = state.generators.size();
    const std::size_t shifts = p.shifts.size();
    const std::size_t K = p.targets.size();
    const std::vector<std::size_t> blocks = positive_weight_blocks(ws.target_weights);
    const std::size_t B = blocks.size();
    const std::size_t gvars = n * ws.generator_blocks;
    // variables: [g | r+ | r- | s | z]
    const std::size_t off_rp = gvars;
    const std::size_t off_rm = off_rp + K * B;
    const std::size_t off_s = off_rm + K * B;
    const std::size_t off_z = off_s + K;
    LinearProgram lp(K * B + K, off_z + 1);
    for (std::size_t i = 0; i < K; ++i) {
        // sum over shifts of alpha[i][m][j] P_j, folded per generator m
        std::vector<double> folded(n * ws.generator_blocks * B, 0.0);
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t j = 0; j < shifts; ++j) {
                const double a = state.alpha[i][m][j];
                if (a == 0.0) continue;
                const std::vector<double>& mat = ws.projections[j];
                for (std::size_t r = 0; r < B; ++r) {
                    const double* row = mat.data() + blocks[r] * ws.generator_blocks;
                    double* out = folded.data() + (m * B + r) * ws.generator_blocks;
                    for (std::size_t v = 0; v < ws.generator_blocks; ++v) out[v] += a * row[v];
                }
            }
        for (std::size_t r = 0; r < B; ++r) {
            const std::size_t row = i * B + r;
            for (std::size_t m = 0; m < n; ++m) {
                const double* coef = folded.data() + (m * B + r) * ws.generator_blocks;
                for (std::size_t v = 0; v < ws.generator_blocks; ++v)
                    lp.at(row, m * ws.generator_blocks + v) = coef[v];
            }
            lp.at(row, off_rp + i * B + r) = 1.0;
            lp.at(row, off_rm + i * B + r) = -1.0;
            lp.b[row] = p.targets[i].values()[blocks[r]];
        }
        const std::size_t couple = K * B + i;
        for (std::size_t r = 0; r < B; ++r) {
            lp.at(couple, off_rp + i * B + r) = ws.target_weights[blocks[r]];
            lp.at(couple, off_rm + i * B + r) = ws.target_weights[blocks[r]];
        }
        lp.at(couple, off_s + i) = 1.0;
        lp.at(couple, off_z) = -1.0;
    }
    lp.c[off_z] = 1.0;
    const SimplexSolution sol = solve_lp(lp);
    if (!sol.feasible || !sol.bounded)
        throw std::runtime_error("generator subproblem did not solve");
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t v = 0; v < ws.generator_blocks; ++v)
            state.generators[m][v] = std::max(0.0, sol.x[m * ws.generator_blocks + v]);
    // Renormalize generators to unit L1 norm; coefficients absorb the scale,
    // leaving every approximation unchanged.
    for (std::size_t m = 0; m < n; ++m) {
        double norm = 0.0;
        for (std::size_t v = 0; v < ws.generator_blocks; ++v)
            norm += state.generators[m][v] * ws.generator_weights[v];
        if (norm <= 1e-12) continue;
        for (std::size_t v = 0; v < ws.generator_blocks; ++v) state.generators[m][v] /= norm;
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < shifts; ++j) state.alpha[i][m][j] *= norm;
    }
    evaluate_errors(ws, state);
}

AlternationState initial_state(const Workspace& ws, std::vector<std::vector<double>> generators) {
    AlternationState state;
    state.generators = std::move(generators);
    state.alpha.assign(ws.problem->targets.size(),
                       std::vector<std::vector<double>>(
                           state.generators.size(),
                           std::vector<double>(ws.problem->shifts.size(), 0.0)));
    evaluate_errors(ws, state);
    return state;
}

AtnWitness finish_witness(const Workspace& ws, const AlternationState& state,
                          std::vector<double> trace, int iterations) {
    AtnWitness w;
    for (const auto& g : state.generators)
        w.generators.emplace_back(ws.oracle, ws.problem->generator_window, g);
    w.coefficients = state.alpha;
    w.target_errors = state.errors;
    w.max_error = state.max_error;
    w.mean_error = 0.0;
    for (double e : state.errors) w.mean_error += e;
    w.mean_error /= static_cast<double>(state.errors.size());
    w.trace = std::move(trace);
    w.iterations = iterations;
    return w;
}

AtnWitness run_alternation(const Workspace& ws, std::vector<std::vector<double>> init) {
    const AtnProblem& p = *ws.problem;
    AlternationState state = initial_state(ws, std::move(init));
    std::vector<double> trace{state.max_error};
    int iterations = 0;
    double previous = state.max_error;
    for (int it = 0; it < p.max_iterations; ++it) {
        coefficient_step(ws, state);
        trace.push_back(state.max_error);
        generator_step(ws, state);
        trace.push_back(state.max_error);
        ++iterations;
        if (state.max_error <= p.stop_tolerance) break;
        if (previous - state.max_error < p.stop_tolerance) break;
        previous = state.max_error;
    }
    if (p.max_iterations > 0) {
        // Final coefficient polish so the reported witness is LP-optimal for
        // its own generators.
        coefficient_step(ws, state);
        trace.push_back(state.max_error);
    }
    return finish_witness(ws, state, std::move(trace), iterations);
}

std::vector<double> random_generator(const Workspace& ws, Rng& rng) {
    std::vector<double> g(ws.generator_blocks);
    for (double& v : g) v = rng.uniform01() + 1e-3;
    double norm = 0.0;
    for (std::size_t v = 0; v < g.size(); ++v) norm += g[v] * ws.generator_weights[v];
    if (norm > 0.0)
        for (double& v : g) v /= norm;
    return g;
}

std::vector<double> projected_target(const Workspace& ws, const StepFunction& target) {
    StepFunction projected = shift_column(target, 0, ws.problem->generator_window);
    std::vector<double> g = projected.values();
    double norm = 0.0;
    for (std::size_t v = 0; v < g.size(); ++v) norm += g[v] * ws.generator_weights[v];
    if (norm > 1e-12)
        for (double& v : g) v /= norm;
    return g;
}

const AtnWitness& better(const AtnWitness& a, const AtnWitness& b) {
    return b.max_error < a.max_error ? b : a;
}

} // namespace

void AtnProblem::validate() const {
    if (targets.empty()) throw std::invalid_argument("at least one target required");
    const auto& oracle = targets.front().oracle();
    const IndexInterval window = targets.front().window();
    for (const StepFunction& f : targets)
        if (f.oracle() != oracle || f.window() != window)
            throw std::invalid_argument("targets must share a window and oracle");
    if (generator_count < 1) throw std::invalid_argument("generator count must be positive");
    if (shifts.empty()) throw std::invalid_argument("shift set must be nonempty");
    for (const std::int64_t t : shifts)
        if (std::find(shifts.begin(), shifts.end(), -t) == shifts.end())
            throw std::invalid_argument("shift set must be symmetric around 0");
    if (max_iterations < 0) throw std::invalid_argument("iteration budget must be >= 0");
    if (restarts < 0) throw std::invalid_argument("restart count must be >= 0");
    if (stop_tolerance < 0.0) throw std::invalid_argument("stop tolerance must be >= 0");
}

CoefficientSolution solve_coefficients(const StepFunction& target,
                                       const std::vector<StepFunction>& columns,
                                       bool mass_normalization) {
    std::vector<const std::vector<double>*> col_ptrs;
    col_ptrs.reserve(columns.size());
    for (const StepFunction& c : columns) {
        if (c.window() != target.window() || c.oracle() != target.oracle())
            throw std::invalid_argument("window mismatch");
        col_ptrs.push_back(&c.values());
    }
    return solve_coefficients_raw(target.values(), target.weights(), col_ptrs, target.l1_norm(),
                                  mass_normalization);
}

AtnWitness alternate_optimize(const AtnProblem& problem, std::uint64_t seed) {
    problem.validate();
    const Workspace ws(problem);
    const auto n = static_cast<std::size_t>(problem.generator_count);

    std::vector<std::vector<std::vector<double>>> inits;
    std::vector<std::vector<double>> seeded;
    for (std::size_t m = 0; m < n; ++m)
        seeded.push_back(projected_target(ws, problem.targets[m % problem.targets.size()]));
    inits.push_back(std::move(seeded));
    for (int r = 0; r < problem.restarts; ++r) {
        Rng rng(child_seed(seed, static_cast<std::uint64_t>(r) + 1));
        std::vector<std::vector<double>> gens;
        for (std::size_t m = 0; m < n; ++m) gens.push_back(random_generator(ws, rng));
        inits.push_back(std::move(gens));
    }

    AtnWitness best = run_alternation(ws, inits.front());
    for (std::size_t i = 1; i < inits.size(); ++i)
        best = better(best, run_alternation(ws, inits[i]));
    return best;
}

std::vector<AtnWitness> defect_profile(const AtnProblem& base, int n_max, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    std::vector<AtnWitness> profile;
    profile.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        AtnProblem problem = base;
        problem.generator_count = n;
        problem.validate();
        const Workspace ws(problem);
        AtnWitness best = alternate_optimize(problem, child_seed(seed, static_cast<std::uint64_t>(n)));
        if (n > 1) {
            // Warm start: previous generators plus one fresh one. The first
            // coefficient step can only improve on e*(n-1).
            std::vector<std::vector<double>> warm;
            for (const StepFunction& g : profile.back().generators) warm.push_back(g.values());
            Rng rng(child_seed(seed, 1000 + static_cast<std::uint64_t>(n)));
            warm.push_back(random_generator(ws, rng));
            best = better(best, run_alternation(ws, std::move(warm)));
            if (best.max_error > profile.back().max_error) {
                // Hard nesting guarantee: extend the previous witness with an
                // unused fresh generator.
                AtnWitness extended = profile.back();
                Rng rng2(child_seed(seed, 2000 + static_cast<std::uint64_t>(n)));
                extended.generators.emplace_back(ws.oracle, problem.generator_window,
                                                 random_generator(ws, rng2));
                for (auto& per_target : extended.coefficients)
                    per_target.emplace_back(problem.shifts.size(), 0.0);
                best = std::move(extended);
            }
        }
        profile.push_back(std::move(best));
    }
    return profile;
}

std::vector<double> witness_errors(const AtnProblem& problem, const AtnWitness& witness) {
    problem.validate();
    Workspace ws(problem);
    AlternationState state;
    for (const StepFunction& g : witness.generators) state.generators.push_back(g.values());
    state.alpha = witness.coefficients;
    evaluate_errors(ws, state);
    return state.errors;
}

} // namespace atnlab
