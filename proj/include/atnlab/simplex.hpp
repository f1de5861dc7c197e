#pragma once

#include <cstddef>
#include <vector>

namespace atnlab {

// Dense equality-form linear program:  minimize c.x  s.t.  A x = b, x >= 0.
struct LinearProgram {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a; // row-major, rows x cols
    std::vector<double> b; // rows
    std::vector<double> c; // cols

    LinearProgram(std::size_t m, std::size_t n)
        : rows(m), cols(n), a(m * n, 0.0), b(m, 0.0), c(n, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct SimplexSolution {
    bool feasible = false;
    bool bounded = true;
    std::vector<double> x;
    double objective = 0.0;
};

// Two-phase dense tableau simplex. Pivoting follows Bland's rule (lowest
// eligible index, ratio ties broken by the smallest basic variable), so the
// iteration terminates on degenerate instances.
SimplexSolution solve_lp(const LinearProgram& lp);

} // namespace atnlab
