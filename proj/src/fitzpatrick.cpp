#include "fitzop/fitzpatrick.hpp"

#include <algorithm>
#include <cmath>

namespace fitzop {

std::vector<PrimalDualPoint> scan_grid(const Region& v, const GridSpec& g) {
    const auto primal = grid_sample(v, g);
    const auto dual = dual_lattice(v.dim(), g);
    std::vector<PrimalDualPoint> out;
    out.reserve(primal.size() * dual.size());
    for (const auto& x : primal)
        for (const auto& y : dual)
            out.emplace_back(x, y);
    return out;
}

PhiEvaluator::PhiEvaluator(OperatorHandle t, const Region& v, const GridSpec& g, const Tolerance& tol)
    : t_(std::move(t)), v_(v) {
    if (v_.dim() != t_->dim()) throw DimensionError("phi: region dimension mismatch");
    if (t_->has_closed_form(v_)) {
        closed_form_ = true;
        return;
    }
    const Restricted r = restrict(t_, v_, g, tol);
    graph_ = r.op->enumerate_graph(g, tol);
    approximate_ = !r.op->exact_enumeration();
    fn_ = ConvexFn::fitzpatrick_of(t_->dim(), graph_);
}

ExtReal PhiEvaluator::operator()(const PrimalDualPoint& z) const {
    if (z.dim() != t_->dim()) throw DimensionError("phi: point dimension mismatch");
    if (closed_form_) return *t_->phi_closed_form(v_, z);
    return (*fn_)(z);
}

PsiEvaluator::PsiEvaluator(OperatorHandle t, const Region& v, const GridSpec& g, const Tolerance& tol)
    : fn_(Envelope{t->dim(), {}}) {
    if (v.dim() != t->dim()) throw DimensionError("psi: region dimension mismatch");
    const Restricted r = restrict(t, v, g, tol);
    graph_ = r.op->enumerate_graph(g, tol);
    approximate_ = !r.op->exact_enumeration();
    fn_ = ConvexFn::penot_of(t->dim(), graph_);
}

ExtReal PsiEvaluator::operator()(const PrimalDualPoint& z) const { return fn_(z); }

FnValue phi_eval(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const GridSpec& g,
                 const Tolerance& tol) {
    const PhiEvaluator phi(t, v, g, tol);
    return {phi(z), phi.approximate()};
}

FnValue psi_eval(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const GridSpec& g,
                 const Tolerance& tol) {
    const PsiEvaluator psi(t, v, g, tol);
    return {psi(z), psi.approximate()};
}

RepresentativeReport is_representative(const ConvexFn& h, const OperatorHandle& t, const Region& v,
                                       const GridSpec& g, const Tolerance& tol) {
    tol.validate();
    if (h.dim() != t->dim() || v.dim() != t->dim()) throw DimensionError("is_representative: dimension mismatch");
    RepresentativeReport rep;
    rep.tol = tol;
    rep.grid = g;

    const Restricted r = restrict(t, v, g, tol);
    for (const auto& z : scan_grid(v, g)) {
        ++rep.points_scanned;
        const ExtReal hv = h(z);
        const double c = coupling(z);
        if (hv < ExtReal(c - tol.eps_strict))
            throw NotRepresentativeClass("h < c at " + format_point(z) + ": h = " + hv.to_string() +
                                         ", c = " + format_number(c));
        if (hv.is_finite() && std::abs(hv.value() - c) <= tol.eps_eq && !r.op->graph_contains(z, tol))
            rep.mismatch_witnesses.push_back(z);
    }
    for (const auto& w : r.op->enumerate_graph(g, tol)) {
        if (max_abs(w.xstar()) > g.dual_bound) continue;
        ++rep.points_scanned;
        const ExtReal hv = h(w);
        if (!hv.is_finite() || std::abs(hv.value() - coupling(w)) > tol.eps_eq) rep.mismatch_witnesses.push_back(w);
    }
    std::sort(rep.mismatch_witnesses.begin(), rep.mismatch_witnesses.end());
    rep.mismatch_witnesses.erase(std::unique(rep.mismatch_witnesses.begin(), rep.mismatch_witnesses.end()),
                                 rep.mismatch_witnesses.end());
    rep.is_representative = rep.mismatch_witnesses.empty();
    return rep;
}

}  // namespace fitzop
