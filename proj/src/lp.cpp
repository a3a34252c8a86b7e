#include "fitzop/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fitzop::lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr std::size_t kMaxIterations = 100000;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c)
            at(pr, c) /= p;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c)
                at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> t_;
};

enum class RunOutcome { Optimal, Unbounded, IterationLimit };

// Minimizes cost over the canonical tableau; columns >= allowed_cols never enter.
RunOutcome run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<double>& cost,
               std::size_t allowed_cols, const std::vector<bool>& active_rows) {
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
        // Bland: lowest-index column with negative reduced cost.
        std::size_t enter = allowed_cols;
        for (std::size_t j = 0; j < allowed_cols; ++j) {
            double d = cost[j];
            for (std::size_t i = 0; i < t.rows(); ++i)
                if (active_rows[i]) d -= cost[basis[i]] * t.at(i, j);
            if (d < -kCostEps) {
                enter = j;
                break;
            }
        }
        if (enter == allowed_cols) return RunOutcome::Optimal;

        std::size_t leave = t.rows();
        double best = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (!active_rows[i] || t.at(i, enter) <= kPivotEps) continue;
            const double ratio = std::max(t.rhs(i), 0.0) / t.at(i, enter);
            if (leave == t.rows() || ratio < best - 1e-15 ||
                (ratio <= best + 1e-15 && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == t.rows()) return RunOutcome::Unbounded;
        t.pivot(leave, enter);
        basis[leave] = enter;
    }
    return RunOutcome::IterationLimit;
}

}  // namespace

Result solve(const Problem& problem) {
    const std::size_t m = problem.rows;
    const std::size_t n = problem.cols;
    if (problem.a.size() != m * n || problem.b.size() != m || problem.c.size() != n)
        throw std::invalid_argument("lp::solve: inconsistent problem dimensions");

    Result result;
    double scale = 1.0;
    for (double v : problem.b)
        scale = std::max(scale, std::abs(v));

    // Columns: n originals followed by m artificials.
    Tableau t(m, n + m);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = problem.b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j)
            t.at(i, j) = sign * problem.at(i, j);
        t.at(i, n + i) = 1.0;
        t.rhs(i) = sign * problem.b[i];
        basis[i] = n + i;
    }
    std::vector<bool> active(m, true);

    std::vector<double> phase1_cost(n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        phase1_cost[n + i] = 1.0;
    if (run(t, basis, phase1_cost, n + m, active) == RunOutcome::IterationLimit) {
        result.status = Status::NumericalFailure;
        return result;
    }
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) infeasibility += std::abs(t.rhs(i));
    if (infeasibility > 1e-10 * scale) {
        result.status = Status::Infeasible;
        return result;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t col = n;
        double best = 1e-9;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(t.at(i, j)) > best) {
                best = std::abs(t.at(i, j));
                col = j;
                break;
            }
        }
        if (col == n) {
            active[i] = false;
            continue;
        }
        t.pivot(i, col);
        basis[i] = col;
        for (std::size_t r = 0; r < m; ++r)
            if (t.rhs(r) < 0.0 && t.rhs(r) > -1e-9) t.rhs(r) = 0.0;
    }

    std::vector<double> phase2_cost(n + m, 0.0);
    std::copy(problem.c.begin(), problem.c.end(), phase2_cost.begin());
    const RunOutcome outcome = run(t, basis, phase2_cost, n, active);
    if (outcome == RunOutcome::Unbounded) {
        result.status = Status::Unbounded;
        return result;
    }
    if (outcome == RunOutcome::IterationLimit) {
        result.status = Status::NumericalFailure;
        return result;
    }

    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (active[i] && basis[i] < n) result.x[basis[i]] = std::max(t.rhs(i), 0.0);

    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = -problem.b[i];
        for (std::size_t j = 0; j < n; ++j)
            s += problem.at(i, j) * result.x[j];
        residual = std::max(residual, std::abs(s));
    }
    result.residual = residual;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        obj += problem.c[j] * result.x[j];
    result.objective = obj;
    result.status = residual <= 1e-9 * scale ? Status::Optimal : Status::NumericalFailure;
    return result;
}

const char* to_string(Status s) {
    switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::NumericalFailure: return "numerical-failure";
    }
    return "?";
}

}  // namespace fitzop::lp
