#pragma once

// Small dense linear programs in standard form:
//   minimize c^T x  subject to  A x = b,  x >= 0.
// Two-phase tableau simplex with Bland's rule; ties broken by lowest index.

#include <cstddef>
#include <vector>

namespace fitzop::lp {

struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major, rows x cols
    std::vector<double> b;
    std::vector<double> c;

    double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
    double at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

struct Result {
    Status status = Status::NumericalFailure;
    std::vector<double> x;
    double objective = 0.0;
    double residual = 0.0;  // max |A x - b|
};

Result solve(const Problem& problem);

const char* to_string(Status s);

}  // namespace fitzop::lp
