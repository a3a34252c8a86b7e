#pragma once

// Grid deciders for V-NI, locating, identifying, V-representability,
// maximality and condition (C). Every verdict quantifies over the grid of
// V x [-dual_bound, dual_bound]^n recorded in it.

#include "fitzop/fitzpatrick.hpp"
#include "fitzop/operators.hpp"
#include "fitzop/verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fitzop {

// phi_{T|V} >= c - eps_strict on V x X*. Vacuously true, and flagged, when V
// misses D(T).
Verdict check_vni(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol);

// Every m.r. grid point of T|_V has its primal in S (default D(T)).
Verdict check_locates(const OperatorHandle& t, const Region& v, const std::optional<Region>& s, const GridSpec& g,
                      const Tolerance& tol);

// Every m.r. grid point of T|_V is in Graph T.
Verdict check_identifies(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol);

// T|_V is monotone and psi_{T|V} is a V-representative of it.
Verdict check_v_representable(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol);

// V-NI with V the whole space, scanned over the ambient box.
Verdict check_ni(const OperatorHandle& t, const Region& ambient, const GridSpec& g, const Tolerance& tol);

// Points of the ambient grid that are m.r. to T (unrestricted) are in the
// graph. Throws UnsatisfiedHypothesis when T is not monotone.
Verdict check_maximal_on_grid(const OperatorHandle& t, const Region& ambient, const GridSpec& g,
                              const Tolerance& tol);

struct UniqueExtension {
    std::vector<PrimalDualPoint> points;  // grid trace of [phi_{T|V} = c]
    bool traces_agree = true;             // equals the trace of [phi_{T|V} <= c]
    bool approximate = false;
};

// Throws UnsatisfiedHypothesis("V-NI") or ("monotone") when a precondition fails.
UniqueExtension unique_extension(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol);

// Grid points with phi_{T|V} < c - eps_strict have primal within delta_dom of cl D(T).
Verdict check_condition_c(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol);

struct RegionFamily {
    std::vector<Region> regions;
    std::vector<std::string> ids;
    std::string rule;
};

// Open dyadic sub-boxes of the ambient box at scales 1..scales, aligned and
// half-shifted, keeping those that meet D(T).
RegionFamily dyadic_family(const OperatorHandle& t, const Region& ambient, std::size_t scales, const GridSpec& g,
                           const Tolerance& tol);

// Wraps a hand-picked list; members missing D(T) are dropped.
RegionFamily explicit_family(const OperatorHandle& t, std::vector<Region> regions, const GridSpec& g,
                             const Tolerance& tol);

// Conjunction of per-region verdicts for VNI, Locates, Identifies,
// VRepresentable or ConditionC. For LowRepresentable: every grid point of the
// ambient interior in the [psi_T = c] band needs a family member around its
// primal on which T is V-representable.
Verdict family_scan(const OperatorHandle& t, const RegionFamily& f, Property property, const Region& ambient,
                    const GridSpec& g, const Tolerance& tol);

}  // namespace fitzop
