#pragma once

// phi_{T|V} and psi_{T|V}, and the representative-of test.

#include "fitzop/convex.hpp"
#include "fitzop/operators.hpp"

#include <optional>
#include <vector>

namespace fitzop {

struct FnValue {
    ExtReal value;
    bool approximate = false;
};

// phi_{T|V}: the operator's closed form when it has one for V, otherwise the
// max-affine function of the enumerated graph of T|_V (-inf when empty).
class PhiEvaluator {
public:
    PhiEvaluator(OperatorHandle t, const Region& v, const GridSpec& g = {}, const Tolerance& tol = {});

    ExtReal operator()(const PrimalDualPoint& z) const;
    bool closed_form() const noexcept { return closed_form_; }
    bool approximate() const noexcept { return approximate_; }
    // Graph of T|_V used by the max-affine route; empty for closed forms.
    const std::vector<PrimalDualPoint>& graph() const noexcept { return graph_; }

private:
    OperatorHandle t_;
    Region v_;
    bool closed_form_ = false;
    bool approximate_ = false;
    std::vector<PrimalDualPoint> graph_;
    std::optional<ConvexFn> fn_;
};

// psi_{T|V} as the lower envelope of (w, c(w)) over the enumerated graph of
// T|_V; exact only when the enumeration is.
class PsiEvaluator {
public:
    PsiEvaluator(OperatorHandle t, const Region& v, const GridSpec& g = {}, const Tolerance& tol = {});

    ExtReal operator()(const PrimalDualPoint& z) const;
    bool approximate() const noexcept { return approximate_; }
    const ConvexFn& function() const noexcept { return fn_; }
    const std::vector<PrimalDualPoint>& graph() const noexcept { return graph_; }

private:
    std::vector<PrimalDualPoint> graph_;
    ConvexFn fn_;
    bool approximate_ = false;
};

FnValue phi_eval(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const GridSpec& g = {},
                 const Tolerance& tol = {});
FnValue psi_eval(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const GridSpec& g = {},
                 const Tolerance& tol = {});

struct RepresentativeReport {
    bool is_representative = true;
    std::vector<PrimalDualPoint> mismatch_witnesses;
    Tolerance tol;
    GridSpec grid;
    std::size_t points_scanned = 0;
};

// Checks [h = c] cap (V x X*) = Graph T|_V on the grid of V x clipped X*,
// plus |h - c| <= eps_eq at every enumerated graph point of T|_V.
// Throws NotRepresentativeClass when h < c - eps_strict at a grid point.
RepresentativeReport is_representative(const ConvexFn& h, const OperatorHandle& t, const Region& v,
                                       const GridSpec& g, const Tolerance& tol);

// Cartesian product of grid_sample(V) and the dual lattice, in that order.
std::vector<PrimalDualPoint> scan_grid(const Region& v, const GridSpec& g);

}  // namespace fitzop
