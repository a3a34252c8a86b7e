#include "fitzop/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fitzop {
namespace {

Verdict make_verdict(Property p, const Region& v, const GridSpec& g, const Tolerance& tol) {
    g.validate();
    tol.validate();
    Verdict out;
    out.property = p;
    out.grid = g;
    out.tol = tol;
    out.region_ids.push_back(v.to_string());
    return out;
}

Witness witness_at(const PrimalDualPoint& z, ExtReal value) { return {z, value, coupling(z)}; }

// Shared scan for the m.r.-based deciders: every grid z that is m.r. to T|_V
// must pass `keep`.
template <class Keep>
Verdict scan_mr(Property p, const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol,
                Keep keep) {
    Verdict out = make_verdict(p, v, g, tol);
    const MrTester mr(t, v, g, tol);
    out.approximate = mr.approximate();
    out.certified = mr.route() != MrTester::Route::PairwiseGaps;
    const PhiEvaluator phi(t, v, g, tol);
    for (const auto& z : scan_grid(v, g)) {
        ++out.points_scanned;
        if (mr(z) && !keep(z)) out.add_witness(witness_at(z, phi(z)));
    }
    out.finalize();
    return out;
}

std::vector<std::pair<double, double>> dyadic_cells(double lo, double hi, std::size_t k) {
    std::vector<std::pair<double, double>> out;
    const double cells = std::ldexp(1.0, static_cast<int>(k));
    const double w = (hi - lo) / cells;
    const auto count = static_cast<std::size_t>(cells);
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(lo + w * static_cast<double>(i), lo + w * static_cast<double>(i + 1));
    for (std::size_t i = 0; i + 1 < count; ++i)
        out.emplace_back(lo + w * (static_cast<double>(i) + 0.5), lo + w * (static_cast<double>(i) + 1.5));
    return out;
}

}  // namespace

Verdict check_vni(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    Verdict out = make_verdict(Property::VNI, v, g, tol);
    if (!t->domain_meets(v, g, tol)) {
        out.vacuous = true;
        out.note = "V misses D(T)";
        out.finalize();
        return out;
    }
    const PhiEvaluator phi(t, v, g, tol);
    out.approximate = phi.approximate();
    out.certified = phi.closed_form();
    for (const auto& z : scan_grid(v, g)) {
        ++out.points_scanned;
        const ExtReal f = phi(z);
        if (f < ExtReal(coupling(z) - tol.eps_strict)) out.add_witness(witness_at(z, f));
    }
    out.finalize();
    return out;
}

Verdict check_ni(const OperatorHandle& t, const Region& ambient, const GridSpec& g, const Tolerance& tol) {
    Verdict out = make_verdict(Property::NI, ambient, g, tol);
    const PhiEvaluator phi(t, Region::whole(t->dim()), g, tol);
    out.approximate = phi.approximate();
    out.certified = phi.closed_form();
    for (const auto& z : scan_grid(ambient, g)) {
        ++out.points_scanned;
        const ExtReal f = phi(z);
        if (f < ExtReal(coupling(z) - tol.eps_strict)) out.add_witness(witness_at(z, f));
    }
    out.finalize();
    return out;
}

Verdict check_locates(const OperatorHandle& t, const Region& v, const std::optional<Region>& s, const GridSpec& g,
                      const Tolerance& tol) {
    Verdict out = scan_mr(Property::Locates, t, v, g, tol, [&](const PrimalDualPoint& z) {
        return s ? s->contains(z.x()) : t->domain_contains(z.x(), tol);
    });
    if (s) out.region_ids.push_back(s->to_string());
    return out;
}

Verdict check_identifies(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    return scan_mr(Property::Identifies, t, v, g, tol,
                   [&](const PrimalDualPoint& z) { return t->graph_contains(z, tol); });
}

Verdict check_v_representable(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    Verdict out = make_verdict(Property::VRepresentable, v, g, tol);
    const Restricted r = restrict(t, v, g, tol);
    out.approximate = !r.op->exact_enumeration();
    if (r.empty) out.vacuous = true;

    const Verdict mono = is_monotone(r.op, tol, g);
    out.points_scanned = mono.points_scanned;
    if (!mono.value) {
        for (const auto& w : mono.witnesses)
            out.add_witness(w);
        out.note = "T|_V is not monotone: " + mono.note;
        out.finalize();
        return out;
    }
    const PsiEvaluator psi(t, v, g, tol);
    const RepresentativeReport rep = is_representative(psi.function(), t, v, g, tol);
    out.points_scanned += rep.points_scanned;
    for (const auto& z : rep.mismatch_witnesses)
        out.add_witness(witness_at(z, psi(z)));
    out.finalize();
    return out;
}

Verdict check_maximal_on_grid(const OperatorHandle& t, const Region& ambient, const GridSpec& g,
                              const Tolerance& tol) {
    if (t->exact_enumeration()) {
        const Verdict mono = is_monotone(t, tol, g);
        if (!mono.value) throw UnsatisfiedHypothesis("monotone", mono.note);
    }
    Verdict out = make_verdict(Property::MaximalOnGrid, ambient, g, tol);
    const Region whole = Region::whole(t->dim());
    const MrTester mr(t, whole, g, tol);
    const PhiEvaluator phi(t, whole, g, tol);
    out.approximate = mr.approximate();
    out.certified = mr.route() != MrTester::Route::PairwiseGaps;
    for (const auto& z : scan_grid(ambient, g)) {
        ++out.points_scanned;
        if (mr(z) && !t->graph_contains(z, tol)) out.add_witness(witness_at(z, phi(z)));
    }
    out.finalize();
    return out;
}

UniqueExtension unique_extension(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    const Verdict vni = check_vni(t, v, g, tol);
    if (vni.vacuous) throw UnsatisfiedHypothesis("V meets D(T)", "V misses D(T)");
    if (!vni.value) {
        throw UnsatisfiedHypothesis("V-NI", "phi_{T|V} < c at " + format_point(vni.witnesses.front().z));
    }
    const Restricted r = restrict(t, v, g, tol);
    const Verdict mono = is_monotone(r.op, tol, g);
    if (!mono.value) throw UnsatisfiedHypothesis("monotone", "T|_V: " + mono.note);

    UniqueExtension out;
    const PhiEvaluator phi(t, v, g, tol);
    out.approximate = phi.approximate();
    for (const auto& z : scan_grid(v, g)) {
        const ExtReal f = phi(z);
        const double c = coupling(z);
        const bool below = f <= ExtReal(c + tol.eps_eq);
        const bool equal = f.is_finite() && std::abs(f.value() - c) <= tol.eps_eq;
        if (equal) out.points.push_back(z);
        if (below != equal) out.traces_agree = false;
    }
    return out;
}

Verdict check_condition_c(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    Verdict out = make_verdict(Property::ConditionC, v, g, tol);
    const PhiEvaluator phi(t, v, g, tol);
    out.approximate = phi.approximate();
    out.certified = phi.closed_form();
    for (const auto& z : scan_grid(v, g)) {
        ++out.points_scanned;
        const ExtReal f = phi(z);
        if (f < ExtReal(coupling(z) - tol.eps_strict) && !t->domain_closure_contains(z.x(), tol))
            out.add_witness(witness_at(z, f));
    }
    out.finalize();
    return out;
}

RegionFamily dyadic_family(const OperatorHandle& t, const Region& ambient, std::size_t scales, const GridSpec& g,
                           const Tolerance& tol) {
    const Box* b = ambient.as_box();
    if (!b) throw Error("dyadic family: ambient region must be a box");
    if (scales == 0) throw Error("dyadic family: scales must be >= 1");
    const std::size_t n = ambient.dim();
    RegionFamily f;
    f.rule = "dyadic open sub-boxes, scales 1.." + std::to_string(scales) + ", aligned and half-shifted";
    for (std::size_t k = 1; k <= scales; ++k) {
        std::vector<std::vector<std::pair<double, double>>> axes(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = b->lo[i].kind == BoundKind::Infinite ? -g.ambient_bound : b->lo[i].value;
            const double hi = b->hi[i].kind == BoundKind::Infinite ? g.ambient_bound : b->hi[i].value;
            axes[i] = dyadic_cells(lo, hi, k);
        }
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            Vector lo(n), hi(n);
            for (std::size_t i = 0; i < n; ++i) {
                lo[i] = axes[i][idx[i]].first;
                hi[i] = axes[i][idx[i]].second;
            }
            Region r = Region::open_box(lo, hi);
            if (t->domain_meets(r, g, tol)) {
                f.ids.push_back("k" + std::to_string(k) + " " + r.to_string());
                f.regions.push_back(std::move(r));
            }
            std::size_t i = 0;
            while (i < n && ++idx[i] == axes[i].size()) idx[i++] = 0;
            if (i == n) break;
        }
    }
    return f;
}

RegionFamily explicit_family(const OperatorHandle& t, std::vector<Region> regions, const GridSpec& g,
                             const Tolerance& tol) {
    RegionFamily f;
    f.rule = "explicit";
    for (auto& r : regions) {
        if (r.dim() != t->dim()) throw DimensionError("family: region dimension mismatch");
        if (!t->domain_meets(r, g, tol)) continue;
        f.ids.push_back(r.to_string());
        f.regions.push_back(std::move(r));
    }
    return f;
}

Verdict family_scan(const OperatorHandle& t, const RegionFamily& f, Property property, const Region& ambient,
                    const GridSpec& g, const Tolerance& tol) {
    Verdict out = make_verdict(property, ambient, g, tol);
    out.region_ids = f.ids;
    if (f.regions.empty()) {
        out.vacuous = true;
        out.note = "empty family";
        out.finalize();
        return out;
    }

    auto per_region = [&](const Region& v, Property p) {
        switch (p) {
        case Property::VNI: return check_vni(t, v, g, tol);
        case Property::Locates: return check_locates(t, v, std::nullopt, g, tol);
        case Property::Identifies: return check_identifies(t, v, g, tol);
        case Property::VRepresentable: return check_v_representable(t, v, g, tol);
        case Property::ConditionC: return check_condition_c(t, v, g, tol);
        default: break;
        }
        throw Error(std::string("family scan does not support property ") + to_string(p));
    };

    if (property != Property::LowRepresentable) {
        for (std::size_t i = 0; i < f.regions.size(); ++i) {
            const Verdict v = per_region(f.regions[i], property);
            out.points_scanned += v.points_scanned;
            out.approximate = out.approximate || v.approximate;
            out.certified = out.certified && v.certified;
            if (v.value) continue;
            if (out.note.empty()) out.note = "first failing region " + f.ids[i];
            for (const auto& w : v.witnesses)
                out.add_witness(w);
        }
        out.finalize();
        return out;
    }

    const PsiEvaluator psi(t, Region::whole(t->dim()), g, tol);
    out.approximate = psi.approximate();
    std::map<std::size_t, bool> representable;
    auto holds_on = [&](std::size_t i) {
        auto it = representable.find(i);
        if (it != representable.end()) return it->second;
        const Verdict v = check_v_representable(t, f.regions[i], g, tol);
        out.approximate = out.approximate || v.approximate;
        return representable[i] = v.value;
    };
    // Family members are open, so only interior primals can have a neighborhood.
    for (const auto& z : scan_grid(ambient.interior(), g)) {
        ++out.points_scanned;
        const ExtReal h = psi(z);
        if (!h.is_finite() || std::abs(h.value() - coupling(z)) > tol.eps_eq) continue;
        bool found = false;
        for (std::size_t i = 0; i < f.regions.size() && !found; ++i)
            found = f.regions[i].contains(z.x()) && holds_on(i);
        if (!found) out.add_witness(witness_at(z, h));
    }
    out.finalize();
    return out;
}

}  // namespace fitzop
