#pragma once

// Sums A + N_C and A + B, and the function
//   rho^sq(x, x*) = min_{u*} psi_{A|V}(x, u*) + psi_{B|V}(x, x* - u*)
// used as their representative.

#include "fitzop/classify.hpp"
#include "fitzop/fitzpatrick.hpp"
#include "fitzop/operators.hpp"

#include <map>
#include <optional>

namespace fitzop {

// Throws UnsatisfiedHypothesis("D(A) meets int C") unless some domain sample
// of A lies in the interior of C.
OperatorHandle add_normal_cone(const OperatorHandle& a, const Region& c, const GridSpec& g = {},
                               const Tolerance& tol = {});

struct SumResult {
    OperatorHandle op;
    bool empty = false;  // no primal of A is matched by B
};

SumResult operator_sum(const OperatorHandle& a, const OperatorHandle& b, const GridSpec& g = {},
                       const Tolerance& tol = {});

// psi_{N_C|V} for a box C and a box (or whole) V, per axis:
//   iota_{cl(C_i cap V_i)}(x_i) + hi_i y_i (y_i > 0, needs hi_i in V_i)
//                               + lo_i y_i (y_i < 0, needs lo_i in V_i).
ExtReal psi_normal_cone_box(const Region& c, const Region& v, const PrimalDualPoint& z);

struct RhoValue {
    ExtReal value;
    Vector split;  // minimizing u*; empty when the value is +inf
    bool approximate = false;
};

// Minimizes over the dual lattice plus the dual parts of the enumerated
// graphs of A|_V and B|_V; ties go to the lowest u*. The second term is exact
// when B is a normal cone of a box and V is a box.
// Caches psi_{A|V} values; not safe to share across threads.
class RhoSquareEvaluator {
public:
    RhoSquareEvaluator(OperatorHandle a, OperatorHandle b, const Region& v, const GridSpec& dual_grid,
                       const Tolerance& tol);

    RhoValue operator()(const PrimalDualPoint& z) const;
    // Value at a fixed split.
    ExtReal split_value(const PrimalDualPoint& z, std::span<const double> ustar) const;
    const std::vector<Vector>& candidates() const noexcept { return candidates_; }
    bool approximate() const noexcept { return approximate_; }
    bool exact_second_term() const noexcept { return exact_b_; }

private:
    ExtReal psi_a(const Vector& x, const Vector& ustar) const;
    ExtReal psi_b(const Vector& x, const Vector& vstar) const;

    OperatorHandle a_;
    OperatorHandle b_;
    Region v_;
    PsiEvaluator psi_a_;
    std::optional<PsiEvaluator> psi_b_;
    bool exact_b_ = false;
    bool approximate_ = false;
    std::vector<Vector> candidates_;
    mutable std::map<std::pair<Vector, Vector>, ExtReal> cache_;
};

RhoValue rho_square_eval(const OperatorHandle& a, const OperatorHandle& b, const Region& v,
                         const PrimalDualPoint& z, const GridSpec& dual_grid, const Tolerance& tol);

// On the grid of V x clipped X*:
//  (a) rho^sq >= c - eps_eq,
//  (b) |rho^sq - c| <= eps_eq implies membership in Graph (A + B)|_V,
//  (c) every enumerated graph point of (A + B)|_V has |rho^sq - c| <= 10 eps_eq.
// Gates: A and B monotone; for a normal cone B built through add_normal_cone,
// D(A) meets int C. `pair_sum` builds the sum with operator_sum instead.
Verdict verify_sum_representative(const OperatorHandle& a, const OperatorHandle& b, const Region& v,
                                  const GridSpec& g, const Tolerance& tol, bool pair_sum = false);

struct MrSetComparison {
    bool equal = true;
    std::size_t points = 0;
    std::size_t mr_sum = 0;         // m.r. to A + N_C
    std::size_t mr_restricted = 0;  // m.r. to A|_C
    std::vector<PrimalDualPoint> differences;
};

// Compares the m.r. sets of A + N_C and of A|_C on the grid of C x clipped X*.
MrSetComparison compare_sum_and_restriction(const OperatorHandle& a, const Region& c, const GridSpec& g,
                                            const Tolerance& tol);

}  // namespace fitzop
