#include "fitzop/convex.hpp"

#include "fitzop/lp.hpp"

#include <algorithm>
#include <cmath>

namespace fitzop {

ConvexFn::ConvexFn(Representation r) : n_(1), rep_(std::move(r)) {
    n_ = std::visit(
        [](const auto& s) -> std::size_t {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, PlusIndicator>) {
                if (!s.base) throw Error("plus-indicator without a base function");
                if (s.primal.dim() != s.base->dim() || s.dual.dim() != s.base->dim())
                    throw DimensionError("plus-indicator: region dimension mismatch");
                return s.base->dim();
            } else {
                return s.n;
            }
        },
        rep_);
}

ConvexFn ConvexFn::fitzpatrick_of(std::size_t n, const std::vector<PrimalDualPoint>& graph) {
    MaxAffine f{n, {}};
    f.pieces.reserve(graph.size());
    for (const auto& w : graph) {
        if (w.dim() != n) throw DimensionError("fitzpatrick_of: graph point dimension mismatch");
        f.pieces.push_back({w, -coupling(w)});
    }
    return ConvexFn(std::move(f));
}

ConvexFn ConvexFn::penot_of(std::size_t n, const std::vector<PrimalDualPoint>& graph) {
    Envelope f{n, {}};
    f.points.reserve(graph.size());
    for (const auto& w : graph) {
        if (w.dim() != n) throw DimensionError("penot_of: graph point dimension mismatch");
        f.points.push_back({w, coupling(w)});
    }
    return ConvexFn(std::move(f));
}

ConvexFn ConvexFn::constant(std::size_t n, double value) {
    return ConvexFn(MaxAffine{n, {AffinePiece{PrimalDualPoint::zero(n), value}}});
}

ConvexFn ConvexFn::plus_indicator(ConvexFn base, Region primal, Region dual) {
    return ConvexFn(PlusIndicator{std::make_shared<const ConvexFn>(std::move(base)), std::move(primal), std::move(dual)});
}

ExtReal ConvexFn::operator()(const PrimalDualPoint& z) const {
    if (z.dim() != n_) throw DimensionError("convex function: point dimension mismatch");
    return std::visit(
        [&](const auto& s) -> ExtReal {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, MaxAffine>) {
                return max_affine_eval(s, z);
            } else if constexpr (std::is_same_v<S, Envelope>) {
                return envelope_eval(s, z);
            } else if constexpr (std::is_same_v<S, GridTable>) {
                auto it = s.values.find(z);
                return it == s.values.end() ? ExtReal::pos_inf() : it->second;
            } else {
                if (!s.primal.contains(z.x()) || !s.dual.contains(z.xstar())) return ExtReal::pos_inf();
                return (*s.base)(z);
            }
        },
        rep_);
}

ExtReal max_affine_eval(const MaxAffine& f, const PrimalDualPoint& z) {
    ExtReal best = ExtReal::neg_inf();
    for (const auto& p : f.pieces)
        best = max(best, ExtReal(natural_pairing(z, p.slope) + p.intercept));
    return best;
}

ExtReal envelope_eval(const Envelope& f, const PrimalDualPoint& z) {
    const std::size_t n = z.dim();
    if (n != f.n) throw DimensionError("envelope: point dimension mismatch");
    const std::size_t k = f.points.size();
    if (k == 0) return ExtReal::pos_inf();

    // min sum l_i v_i  s.t.  sum l_i p_i = z, sum l_i = 1, l >= 0
    lp::Problem prob;
    prob.rows = 2 * n + 1;
    prob.cols = k;
    prob.a.assign(prob.rows * k, 0.0);
    prob.b.assign(prob.rows, 0.0);
    prob.c.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto& p = f.points[j].point;
        for (std::size_t i = 0; i < n; ++i) {
            prob.at(i, j) = p.x()[i];
            prob.at(n + i, j) = p.xstar()[i];
        }
        prob.at(2 * n, j) = 1.0;
        prob.c[j] = f.points[j].value;
    }
    for (std::size_t i = 0; i < n; ++i) {
        prob.b[i] = z.x()[i];
        prob.b[n + i] = z.xstar()[i];
    }
    prob.b[2 * n] = 1.0;

    const lp::Result r = lp::solve(prob);
    switch (r.status) {
    case lp::Status::Optimal: return ExtReal(r.objective);
    case lp::Status::Infeasible: return ExtReal::pos_inf();
    case lp::Status::Unbounded:
    case lp::Status::NumericalFailure: break;
    }
    throw LpFailure(std::string("envelope LP at ") + format_point(z) + ": " + lp::to_string(r.status));
}

std::optional<ConvexFn> square_conjugate(const ConvexFn& f) {
    if (const auto* m = std::get_if<MaxAffine>(&f.representation())) {
        // (max_i z.s_i + b_i)^sq is the envelope of (s_i, -b_i).
        Envelope e{m->n, {}};
        for (const auto& p : m->pieces)
            e.points.push_back({p.slope, -p.intercept});
        return ConvexFn(std::move(e));
    }
    if (const auto* e = std::get_if<Envelope>(&f.representation())) {
        // The sup of z.z' - f(z') over the hull is attained at a generating point.
        MaxAffine m{e->n, {}};
        for (const auto& p : e->points)
            m.pieces.push_back({p.point, -p.value});
        return ConvexFn(std::move(m));
    }
    return std::nullopt;
}

ConjugateValue square_conjugate_eval(const ConvexFn& f, const PrimalDualPoint& z, const GridSpec& search) {
    if (auto exact = square_conjugate(f)) return {(*exact)(z), false};

    if (const auto* t = std::get_if<GridTable>(&f.representation())) {
        ExtReal best = ExtReal::neg_inf();
        for (const auto& [w, v] : t->values) {
            if (v.is_pos_inf()) continue;
            best = max(best, ExtReal(natural_pairing(z, w)) - v);
        }
        return {best, true};
    }

    // Brute force over the search lattice of the clipped primal and dual boxes.
    const std::size_t n = f.dim();
    const auto primal = grid_sample(Region::whole(n), search);
    const auto dual = dual_lattice(n, search);
    ExtReal best = ExtReal::neg_inf();
    for (const auto& x : primal) {
        for (const auto& y : dual) {
            const PrimalDualPoint w(x, y);
            const ExtReal v = f(w);
            if (v.is_pos_inf()) continue;
            best = max(best, ExtReal(natural_pairing(z, w)) - v);
        }
    }
    return {best, true};
}

ExtReal support_eval(const Region& c, std::span<const double> xstar) {
    if (xstar.size() != c.dim()) throw DimensionError("support: dimension mismatch");
    if (c.is_empty()) return ExtReal::neg_inf();
    if (const Box* b = c.as_box()) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const double y = xstar[i];
            if (y > 0.0) {
                if (b->hi[i].kind == BoundKind::Infinite) return ExtReal::pos_inf();
                s += b->hi[i].value * y;
            } else if (y < 0.0) {
                if (b->lo[i].kind == BoundKind::Infinite) return ExtReal::pos_inf();
                s += b->lo[i].value * y;
            }
        }
        return ExtReal(s);
    }
    if (const auto* h = std::get_if<HalfSpace>(&c.shape())) {
        // Finite only along the outer normal ray.
        const double t = dot(h->normal, xstar) / dot(h->normal, h->normal);
        const double scale = 1.0 + max_abs(xstar);
        if (t < 0.0) {
            if (max_abs(xstar) == 0.0) return ExtReal(0.0);
            return ExtReal::pos_inf();
        }
        for (std::size_t i = 0; i < c.dim(); ++i)
            if (std::abs(xstar[i] - t * h->normal[i]) > 1e-12 * scale) return ExtReal::pos_inf();
        return ExtReal(t * h->offset);
    }
    const auto& p = std::get<Polytope>(c.shape());
    double best = -kInf;
    for (const auto& v : p.vertices)
        best = std::max(best, dot(v, xstar));
    return ExtReal(best);
}

bool fenchel_subdiff_test(ExtReal fx, ExtReal fstar_xstar, std::span<const double> x, std::span<const double> xstar,
                          const Tolerance& tol) {
    if (!fx.is_finite() || !fstar_xstar.is_finite()) return false;
    return std::abs(fx.value() + fstar_xstar.value() - dot(x, xstar)) <= tol.eps_eq;
}

}  // namespace fitzop
