#include "fitzop/sumcalc.hpp"

#include <algorithm>
#include <cmath>

namespace fitzop {
namespace {

bool bound_admits(const Bound& lo, const Bound& hi, double u) {
    const bool lo_ok = lo.kind == BoundKind::Infinite || (lo.kind == BoundKind::Closed ? u >= lo.value : u > lo.value);
    const bool hi_ok = hi.kind == BoundKind::Infinite || (hi.kind == BoundKind::Closed ? u <= hi.value : u < hi.value);
    return lo_ok && hi_ok;
}

void require_monotone(const OperatorHandle& t, const char* which, const GridSpec& g, const Tolerance& tol) {
    if (!t->exact_enumeration()) return;
    const Verdict mono = is_monotone(t, tol, g);
    if (!mono.value) throw UnsatisfiedHypothesis("monotone", std::string(which) + ": " + mono.note);
}

const NormalConeBoxOperator* as_normal_cone(const OperatorHandle& t) {
    return dynamic_cast<const NormalConeBoxOperator*>(t.get());
}

}  // namespace

OperatorHandle add_normal_cone(const OperatorHandle& a, const Region& c, const GridSpec& g, const Tolerance& tol) {
    if (c.dim() != a->dim()) throw DimensionError("add_normal_cone: dimension mismatch");
    auto nc = make_normal_cone_box(c);
    bool meets = false;
    for (const auto& x : a->primal_samples(g)) {
        if (c.interior_contains(x) && a->domain_contains(x, tol)) {
            meets = true;
            break;
        }
    }
    if (!meets) throw UnsatisfiedHypothesis("D(A) meets int C", "no domain sample of A in int " + c.to_string());
    return std::make_shared<const SumOperator>(OperatorKind::SumNormalCone, a, std::move(nc));
}

SumResult operator_sum(const OperatorHandle& a, const OperatorHandle& b, const GridSpec& g, const Tolerance& tol) {
    if (a->dim() != b->dim()) throw DimensionError("operator_sum: dimension mismatch");
    SumResult out;
    out.op = std::make_shared<const SumOperator>(OperatorKind::PairSum, a, b);
    out.empty = out.op->enumerate_graph(g, tol).empty();
    return out;
}

ExtReal psi_normal_cone_box(const Region& c, const Region& v, const PrimalDualPoint& z) {
    const Box* cb = c.as_box();
    if (!cb) throw Error("psi_normal_cone_box: C must be a box");
    if (v.is_empty()) return ExtReal::pos_inf();
    const Box* vb = v.as_box();
    if (!vb) throw Error("psi_normal_cone_box: V must be a box");
    const auto cut = c.intersect(v);
    if (!cut || cut->is_empty() || !cut->closure().contains(z.x())) return ExtReal::pos_inf();
    double total = 0.0;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const double y = z.xstar()[i];
        if (y > 0.0) {
            const Bound& hi = cb->hi[i];
            if (hi.kind == BoundKind::Infinite || !bound_admits(vb->lo[i], vb->hi[i], hi.value))
                return ExtReal::pos_inf();
            total += hi.value * y;
        } else if (y < 0.0) {
            const Bound& lo = cb->lo[i];
            if (lo.kind == BoundKind::Infinite || !bound_admits(vb->lo[i], vb->hi[i], lo.value))
                return ExtReal::pos_inf();
            total += lo.value * y;
        }
    }
    return ExtReal(total);
}

RhoSquareEvaluator::RhoSquareEvaluator(OperatorHandle a, OperatorHandle b, const Region& v,
                                       const GridSpec& dual_grid, const Tolerance& tol)
    : a_(std::move(a)), b_(std::move(b)), v_(v), psi_a_(a_, v, dual_grid, tol) {
    if (b_->dim() != a_->dim() || v_.dim() != a_->dim()) throw DimensionError("rho: dimension mismatch");
    exact_b_ = as_normal_cone(b_) != nullptr && (v_.as_box() != nullptr || v_.is_empty());
    if (!exact_b_) psi_b_.emplace(b_, v_, dual_grid, tol);
    approximate_ = psi_a_.approximate() || (psi_b_ && psi_b_->approximate());

    candidates_ = dual_lattice(a_->dim(), dual_grid);
    for (const auto& w : psi_a_.graph())
        candidates_.push_back(w.xstar());
    if (psi_b_) {
        for (const auto& w : psi_b_->graph())
            candidates_.push_back(w.xstar());
    }
    std::sort(candidates_.begin(), candidates_.end());
    candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
}

ExtReal RhoSquareEvaluator::psi_a(const Vector& x, const Vector& ustar) const {
    auto key = std::make_pair(x, ustar);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const ExtReal v = psi_a_(PrimalDualPoint(x, ustar));
    cache_.emplace(std::move(key), v);
    return v;
}

ExtReal RhoSquareEvaluator::psi_b(const Vector& x, const Vector& vstar) const {
    const PrimalDualPoint w(x, vstar);
    if (exact_b_) return psi_normal_cone_box(as_normal_cone(b_)->box(), v_, w);
    return (*psi_b_)(w);
}

ExtReal RhoSquareEvaluator::split_value(const PrimalDualPoint& z, std::span<const double> ustar) const {
    const Vector u(ustar.begin(), ustar.end());
    const ExtReal first = psi_a(z.x(), u);
    if (first.is_pos_inf()) return first;
    Vector rest = z.xstar();
    for (std::size_t i = 0; i < rest.size(); ++i)
        rest[i] -= u[i];
    return first + psi_b(z.x(), rest);
}

RhoValue RhoSquareEvaluator::operator()(const PrimalDualPoint& z) const {
    if (z.dim() != a_->dim()) throw DimensionError("rho: point dimension mismatch");
    RhoValue out{ExtReal::pos_inf(), {}, approximate_};
    for (const auto& u : candidates_) {
        const ExtReal v = split_value(z, u);
        if (v.is_pos_inf()) continue;
        if (out.split.empty() || v < out.value - ExtReal(1e-12)) {
            out.value = v;
            out.split = u;
        }
    }
    return out;
}

RhoValue rho_square_eval(const OperatorHandle& a, const OperatorHandle& b, const Region& v,
                         const PrimalDualPoint& z, const GridSpec& dual_grid, const Tolerance& tol) {
    return RhoSquareEvaluator(a, b, v, dual_grid, tol)(z);
}

Verdict verify_sum_representative(const OperatorHandle& a, const OperatorHandle& b, const Region& v,
                                  const GridSpec& g, const Tolerance& tol, bool pair_sum) {
    g.validate();
    tol.validate();
    require_monotone(a, "A", g, tol);
    require_monotone(b, "B", g, tol);

    OperatorHandle sum;
    const auto* nc = as_normal_cone(b);
    if (nc && !pair_sum)
        sum = add_normal_cone(a, nc->box(), g, tol);
    else
        sum = operator_sum(a, b, g, tol).op;
    const Restricted r = restrict(sum, v, g, tol);

    Verdict out;
    out.property = Property::VRepresentable;
    out.grid = g;
    out.tol = tol;
    out.region_ids.push_back(v.to_string());
    out.vacuous = r.empty;

    const RhoSquareEvaluator rho(a, b, v, g, tol);
    out.approximate = rho.approximate();
    out.certified = !rho.approximate();
    std::size_t fail_a = 0, fail_b = 0, fail_c = 0;

    for (const auto& z : scan_grid(v, g)) {
        ++out.points_scanned;
        const ExtReal val = rho(z).value;
        const double c = coupling(z);
        if (val < ExtReal(c - tol.eps_eq)) {
            ++fail_a;
            out.add_witness({z, val, c});
        } else if (val.is_finite() && std::abs(val.value() - c) <= tol.eps_eq && !r.op->graph_contains(z, tol)) {
            ++fail_b;
            out.add_witness({z, val, c});
        }
    }
    for (const auto& w : r.op->enumerate_graph(g, tol)) {
        if (max_abs(w.xstar()) > g.dual_bound) continue;
        ++out.points_scanned;
        const ExtReal val = rho(w).value;
        const double c = coupling(w);
        if (!val.is_finite() || std::abs(val.value() - c) > 10.0 * tol.eps_eq) {
            ++fail_c;
            out.add_witness({w, val, c});
        }
    }

    out.note = "violations: below c " + std::to_string(fail_a) + ", band outside graph " + std::to_string(fail_b) +
               ", graph outside band " + std::to_string(fail_c);
    if (!as_normal_cone(b)) {
        double bmax = 0.0;
        for (const auto& x : grid_sample(v, g))
            for (const auto& box : b->values_near(x, 0.0).boxes())
                bmax = std::max({bmax, max_abs(box.lo), max_abs(box.hi)});
        out.note += bmax <= g.dual_bound ? "; B bounded by dual_bound on V" : "; B exceeds dual_bound on V";
    }
    out.finalize();
    return out;
}

MrSetComparison compare_sum_and_restriction(const OperatorHandle& a, const Region& c, const GridSpec& g,
                                            const Tolerance& tol) {
    const OperatorHandle sum = add_normal_cone(a, c, g, tol);
    const MrTester mr_sum(sum, Region::whole(a->dim()), g, tol);
    const MrTester mr_restricted(a, c, g, tol);
    MrSetComparison out;
    for (const auto& z : scan_grid(c, g)) {
        ++out.points;
        const bool s = mr_sum(z);
        const bool r = mr_restricted(z);
        out.mr_sum += s ? 1 : 0;
        out.mr_restricted += r ? 1 : 0;
        if (s != r) out.differences.push_back(z);
    }
    out.equal = out.differences.empty();
    return out;
}

}  // namespace fitzop
