#pragma once

// Extended-real convex functions on Z = X x X* and their calculus under the
// natural pairing z . z' = <x, u*> + <u, x*>.

#include "fitzop/core.hpp"
#include "fitzop/regions.hpp"

#include <map>
#include <memory>
#include <variant>
#include <vector>

namespace fitzop {

// z |-> z . slope + intercept
struct AffinePiece {
    PrimalDualPoint slope;
    double intercept = 0.0;
};

// Pointwise max of affine pieces; -inf when there are none.
struct MaxAffine {
    std::size_t n = 1;
    std::vector<AffinePiece> pieces;
};

// Lower convex envelope of finitely many (point, value) pairs; +inf off the hull.
struct EnvelopePoint {
    PrimalDualPoint point;
    double value = 0.0;
};

struct Envelope {
    std::size_t n = 1;
    std::vector<EnvelopePoint> points;
};

// Values on finitely many points, +inf elsewhere.
struct GridTable {
    std::size_t n = 1;
    std::map<PrimalDualPoint, ExtReal> values;
};

class ConvexFn;

// base + indicator of primal x dual.
struct PlusIndicator {
    std::shared_ptr<const ConvexFn> base;
    Region primal;
    Region dual;
};

class ConvexFn {
public:
    using Representation = std::variant<MaxAffine, Envelope, GridTable, PlusIndicator>;

    ConvexFn(Representation r);

    // phi_G(z) = sup_{w in G} z . w - c(w)
    static ConvexFn fitzpatrick_of(std::size_t n, const std::vector<PrimalDualPoint>& graph);
    // psi_G = lower envelope of (w, c(w)) over w in G
    static ConvexFn penot_of(std::size_t n, const std::vector<PrimalDualPoint>& graph);
    static ConvexFn constant(std::size_t n, double value);
    static ConvexFn plus_indicator(ConvexFn base, Region primal, Region dual);

    std::size_t dim() const noexcept { return n_; }
    const Representation& representation() const noexcept { return rep_; }

    ExtReal operator()(const PrimalDualPoint& z) const;

private:
    std::size_t n_;
    Representation rep_;
};

ExtReal max_affine_eval(const MaxAffine& f, const PrimalDualPoint& z);
// Throws LpFailure when the LP core fails numerically (distinct from +inf).
ExtReal envelope_eval(const Envelope& f, const PrimalDualPoint& z);

struct ConjugateValue {
    ExtReal value;
    bool approximate = false;  // brute-force lower bound over a search grid
};

// f^sq(z) = sup_{z'} z . z' - f(z'). Exact for MaxAffine and Envelope; GridTable
// and PlusIndicator fall back to a search over the grid (lower bound).
ConjugateValue square_conjugate_eval(const ConvexFn& f, const PrimalDualPoint& z, const GridSpec& search);

// The conjugate as a function, when it is exact: MaxAffine <-> Envelope.
std::optional<ConvexFn> square_conjugate(const ConvexFn& f);

// sigma_C(x*) = sup_{x in C} <x, x*>
ExtReal support_eval(const Region& c, std::span<const double> xstar);

// |f(x) + f*(x*) - <x, x*>| <= eps_eq, false if either value is infinite.
bool fenchel_subdiff_test(ExtReal fx, ExtReal fstar_xstar, std::span<const double> x, std::span<const double> xstar,
                          const Tolerance& tol);

}  // namespace fitzop
