#include "atnlab/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace atnlab {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasibilityTol = 1e-8;

class Tableau {
public:
    explicit Tableau(const LinearProgram& lp)
        : m_(lp.rows), n_(lp.cols), total_(lp.cols + lp.rows) {
        rows_.assign(m_, std::vector<double>(total_ + 1, 0.0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign * lp.at(i, j);
            rows_[i][n_ + i] = 1.0; // artificial
            rows_[i][total_] = sign * lp.b[i];
            basis_[i] = n_ + i;
        }
        z_.assign(total_ + 1, 0.0);
    }

    // Phase 1: minimize the sum of artificials from the all-artificial basis.
    bool phase1() {
        for (std::size_t j = 0; j <= total_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += rows_[i][j];
            z_[j] = (j < n_ ? 0.0 : (j < total_ ? 1.0 : 0.0)) - s;
        }
        z_[total_] = 0.0;
        for (std::size_t i = 0; i < m_; ++i) z_[total_] -= rows_[i][total_];
        iterate(total_);
        return -z_[total_] <= kFeasibilityTol; // objective = -z[rhs]
    }

    // Pivot still-basic artificials out, dropping redundant rows.
    void remove_artificials() {
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < n_) {
                ++i;
                continue;
            }
            std::size_t enter = total_;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(rows_[i][j]) > kPivotTol) {
                    enter = j;
                    break;
                }
            if (enter == total_) {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
                --m_;
            } else {
                pivot(i, enter);
                ++i;
            }
        }
    }

    bool phase2(const LinearProgram& lp) {
        for (std::size_t j = 0; j <= total_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double cb = basis_[i] < n_ ? lp.c[basis_[i]] : 0.0;
                s += cb * rows_[i][j];
            }
            z_[j] = (j < n_ ? lp.c[j] : 0.0) - s;
        }
        return iterate(n_); // artificials are barred from re-entering
    }

    SimplexSolution extract(const LinearProgram& lp) const {
        SimplexSolution sol;
        sol.feasible = true;
        sol.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = rows_[i][total_];
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) sol.objective += lp.c[j] * sol.x[j];
        return sol;
    }

private:
    // Bland's rule loop over columns [0, allowed). Returns false on an
    // unbounded ray.
    bool iterate(std::size_t allowed) {
        const std::size_t cap = 50000 + 200 * (m_ + total_);
        for (std::size_t step = 0; step < cap; ++step) {
            std::size_t enter = allowed;
            for (std::size_t j = 0; j < allowed; ++j)
                if (z_[j] < -kPivotTol) {
                    enter = j;
                    break;
                }
            if (enter == allowed) return true; // optimal
            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= kPivotTol) continue;
                const double ratio = rows_[i][total_] / rows_[i][enter];
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol &&
                     (leave == m_ || basis_[i] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex iteration limit exceeded");
    }

    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / rows_[r][s];
        for (double& v : rows_[r]) v *= inv;
        rows_[r][s] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][s] == 0.0) continue;
            const double f = rows_[i][s];
            for (std::size_t j = 0; j <= total_; ++j) rows_[i][j] -= f * rows_[r][j];
            rows_[i][s] = 0.0;
        }
        if (z_[s] != 0.0) {
            const double f = z_[s];
            for (std::size_t j = 0; j <= total_; ++j) z_[j] -= f * rows_[r][j];
            z_[s] = 0.0;
        }
        basis_[r] = s;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t total_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> z_;
    std::vector<std::size_t> basis_;
};

} // namespace

SimplexSolution solve_lp(const LinearProgram& lp) {
    if (lp.rows == 0) {
        SimplexSolution sol;
        sol.feasible = true;
        sol.x.assign(lp.cols, 0.0);
        for (double cj : lp.c)
            if (cj < 0.0) {
                sol.bounded = false;
                break;
            }
        return sol;
    }
    Tableau tableau(lp);
    if (!tableau.phase1()) return {};
    tableau.remove_artificials();
    if (!tableau.phase2(lp)) {
        SimplexSolution sol;
        sol.feasible = true;
        sol.bounded = false;
        return sol;
    }
    return tableau.extract(lp);
}

} // namespace atnlab
