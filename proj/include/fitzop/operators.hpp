#pragma once

// Set-valued operators T : X => X*, given either as finite graphs or as one of
// a few analytic kinds whose values at a point are finite unions of boxes.

#include "fitzop/convex.hpp"
#include "fitzop/core.hpp"
#include "fitzop/regions.hpp"
#include "fitzop/verdict.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fitzop {

// Closed box in X*; bounds may be infinite.
struct DualBox {
    Vector lo;
    Vector hi;

    bool is_point() const;
    bool contains(std::span<const double> y, double radius) const;
};

// A finite union of dual boxes, optionally minus a single excluded point.
class ValueSet {
public:
    ValueSet() = default;
    explicit ValueSet(std::vector<DualBox> boxes, std::optional<Vector> excluded = std::nullopt);

    static ValueSet point(Vector y) { return ValueSet({DualBox{y, y}}); }

    bool empty() const { return boxes_.empty(); }
    const std::vector<DualBox>& boxes() const noexcept { return boxes_; }
    const std::optional<Vector>& excluded() const noexcept { return excluded_; }

    // Some box is within radius of y, and y is farther than radius from the
    // excluded point.
    bool contains(std::span<const double> y, double radius) const;
    ValueSet minkowski_sum(const ValueSet& other) const;
    // Points of the dual lattice inside each box, plus the clipped box corners;
    // singletons are returned as is. Sorted, deduplicated.
    std::vector<Vector> sample(std::size_t n, const GridSpec& g) const;

private:
    std::vector<DualBox> boxes_;
    std::optional<Vector> excluded_;
};

enum class OperatorKind {
    FiniteGraph,
    Flat,
    NormalConeBox,
    AbsSubdiff,
    PointComplement,
    Linear,
    Restriction,
    SumNormalCone,
    PairSum,
};

const char* to_string(OperatorKind k);

class Operator;
using OperatorHandle = std::shared_ptr<const Operator>;

// Immutable once built.
class Operator {
public:
    virtual ~Operator() = default;

    virtual OperatorKind kind() const = 0;
    std::size_t dim() const noexcept { return n_; }

    // Union of T(u) over u within sup-distance radius of x; radius 0 gives T(x).
    virtual ValueSet values_near(std::span<const double> x, double radius) const = 0;
    // Primal points at which the graph is sampled.
    virtual std::vector<Vector> primal_samples(const GridSpec& g) const = 0;
    // Exact for finite graphs, sampled at the grid's density otherwise.
    virtual std::vector<PrimalDualPoint> enumerate_graph(const GridSpec& g, const Tolerance& tol) const;
    virtual bool exact_enumeration() const { return false; }

    // Closed form of phi_{T|V}; nullopt when V is not supported.
    virtual bool has_closed_form(const Region& v) const;
    virtual std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const;

    // Exact for analytic kinds; finite graphs match within tol.delta_dom.
    virtual bool domain_contains(std::span<const double> x, const Tolerance& tol) const;
    // Within tol.delta_dom of cl D(T).
    bool domain_closure_contains(std::span<const double> x, const Tolerance& tol) const;
    // Within tol.delta_dom of some graph point (sup-norm in Z).
    bool graph_contains(const PrimalDualPoint& z, const Tolerance& tol) const;
    // D(T) meets V (sampled for kinds without an exact test).
    virtual bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const;

    // Dual parts of the enumerated graph, i.e. R(T) on the grid.
    std::vector<Vector> range_samples(const GridSpec& g, const Tolerance& tol) const;

    virtual std::string describe() const = 0;

protected:
    explicit Operator(std::size_t n);
    void check_dim(std::span<const double> x) const;

private:
    std::size_t n_;
};

// Concrete kinds. Constructors validate; use the make_* helpers.
class FiniteGraphOperator final : public Operator {
public:
    FiniteGraphOperator(std::size_t n, std::vector<PrimalDualPoint> points);
    OperatorKind kind() const override { return OperatorKind::FiniteGraph; }
    const std::vector<PrimalDualPoint>& points() const noexcept { return points_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    std::vector<PrimalDualPoint> enumerate_graph(const GridSpec& g, const Tolerance& tol) const override;
    bool exact_enumeration() const override { return true; }
    bool domain_contains(std::span<const double> x, const Tolerance& tol) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    std::vector<PrimalDualPoint> points_;
};

// R x {w*}
class FlatOperator final : public Operator {
public:
    FlatOperator(Region region, Vector wstar);
    OperatorKind kind() const override { return OperatorKind::Flat; }
    const Region& region() const noexcept { return region_; }
    const Vector& wstar() const noexcept { return wstar_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    bool has_closed_form(const Region& v) const override;
    std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    Region region_;
    Vector wstar_;
};

// N_C for a closed box C.
class NormalConeBoxOperator final : public Operator {
public:
    explicit NormalConeBoxOperator(Region box);
    OperatorKind kind() const override { return OperatorKind::NormalConeBox; }
    const Region& box() const noexcept { return box_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    bool has_closed_form(const Region& v) const override;
    std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    Region box_;
};

// The subdifferential of a|.| on R.
class AbsSubdiffOperator final : public Operator {
public:
    explicit AbsSubdiffOperator(double scale);
    OperatorKind kind() const override { return OperatorKind::AbsSubdiff; }
    double scale() const noexcept { return scale_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    bool has_closed_form(const Region& v) const override;
    std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    double scale_;
};

// {x0} x (X* \ {0})
class PointComplementOperator final : public Operator {
public:
    explicit PointComplementOperator(Vector x0);
    OperatorKind kind() const override { return OperatorKind::PointComplement; }
    const Vector& base_point() const noexcept { return x0_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    bool has_closed_form(const Region& v) const override;
    std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    Vector x0_;
};

// x |-> M x with M + M^T positive semidefinite.
class LinearOperator final : public Operator {
public:
    // Row-major n x n matrix.
    LinearOperator(std::size_t n, std::vector<double> matrix);
    OperatorKind kind() const override { return OperatorKind::Linear; }
    const std::vector<double>& matrix() const noexcept { return m_; }
    Vector apply(std::span<const double> x) const;
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

    // inf_u <x - u, x* - M u> >= -eps_eq, solved through (M + M^T) u = M^T x + x*.
    bool monotonically_related(const PrimalDualPoint& z, const Tolerance& tol) const;

private:
    std::vector<double> m_;
};

// Graph T|_V = Graph T intersected with V x X*.
class RestrictionOperator final : public Operator {
public:
    RestrictionOperator(OperatorHandle base, Region v);
    OperatorKind kind() const override { return OperatorKind::Restriction; }
    const OperatorHandle& base() const noexcept { return base_; }
    const Region& region() const noexcept { return v_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    std::vector<PrimalDualPoint> enumerate_graph(const GridSpec& g, const Tolerance& tol) const override;
    bool exact_enumeration() const override { return base_->exact_enumeration(); }
    bool has_closed_form(const Region& v) const override;
    std::optional<ExtReal> phi_closed_form(const Region& v, const PrimalDualPoint& z) const override;
    bool domain_contains(std::span<const double> x, const Tolerance& tol) const override;
    bool domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    OperatorHandle base_;
    Region v_;
};

// A + B, taken pointwise in x. SumNormalCone is the special case B = N_C.
class SumOperator final : public Operator {
public:
    SumOperator(OperatorKind kind, OperatorHandle a, OperatorHandle b);
    OperatorKind kind() const override { return kind_; }
    const OperatorHandle& left() const noexcept { return a_; }
    const OperatorHandle& right() const noexcept { return b_; }
    ValueSet values_near(std::span<const double> x, double radius) const override;
    std::vector<Vector> primal_samples(const GridSpec& g) const override;
    std::vector<PrimalDualPoint> enumerate_graph(const GridSpec& g, const Tolerance& tol) const override;
    bool exact_enumeration() const override { return a_->exact_enumeration() && b_->exact_enumeration(); }
    bool domain_contains(std::span<const double> x, const Tolerance& tol) const override;
    std::string describe() const override;

private:
    OperatorKind kind_;
    OperatorHandle a_;
    OperatorHandle b_;
};

// Parsed operator description; the spec file's `operator:` block.
struct OperatorSpec {
    std::string kind;  // finite_graph, flat, normal_cone_box, abs_subdiff, point_complement, linear,
                       // restriction, sum_normal_cone, pair_sum
    std::size_t dim = 1;
    std::vector<PrimalDualPoint> points;
    std::optional<Region> region;  // flat, restriction
    std::optional<Region> box;     // normal_cone_box, sum_normal_cone
    Vector wstar;
    double scale = 1.0;
    Vector point;
    std::vector<double> matrix;
    std::vector<OperatorSpec> children;  // restriction/sum_normal_cone: base; pair_sum: left, right
};

OperatorHandle build_operator(const OperatorSpec& spec);

OperatorHandle make_finite_graph(std::size_t n, std::vector<PrimalDualPoint> points);
OperatorHandle make_flat(Region region, Vector wstar);
OperatorHandle make_normal_cone_box(Region box);
OperatorHandle make_abs_subdiff(double scale);
OperatorHandle make_point_complement(Vector x0);
OperatorHandle make_linear(std::size_t n, std::vector<double> matrix);

struct Restricted {
    OperatorHandle op;
    bool empty = false;  // V misses D(T) on the grid
};

// Finite graphs are filtered eagerly; other kinds are wrapped.
Restricted restrict(const OperatorHandle& t, const Region& v, const GridSpec& g = {}, const Tolerance& tol = {});

struct MonotonicityResult {
    bool monotone = true;
    double worst_gap = kInf;
    std::optional<std::pair<PrimalDualPoint, PrimalDualPoint>> witness;
    std::size_t points = 0;
};

// Pairwise gaps over the enumerated graph; the witness is the pair with the
// most negative gap.
MonotonicityResult pairwise_monotonicity(const std::vector<PrimalDualPoint>& graph, const Tolerance& tol);

}  // namespace fitzop

namespace fitzop {

// Monotonicity of the enumerated graph; witnesses are the worst pair.
Verdict is_monotone(const OperatorHandle& t, const Tolerance& tol, const GridSpec& g = {});

// Decides whether z is monotonically related to T|_V, i.e. phi_{T|V}(z) <= c(z)
// within eps_eq. Built once per (T, V) so scans reuse the enumerated graph.
class MrTester {
public:
    enum class Route { ClosedForm, Quadratic, PairwiseGaps };

    MrTester(OperatorHandle t, const Region& v, const GridSpec& g, const Tolerance& tol);

    bool operator()(const PrimalDualPoint& z) const;
    Route route() const noexcept { return route_; }
    // Sampled graph was used; the answer can be a false positive.
    bool approximate() const noexcept { return route_ == Route::PairwiseGaps && !exact_; }

private:
    OperatorHandle t_;
    Region v_;
    Tolerance tol_;
    Route route_;
    bool exact_ = true;
    std::vector<PrimalDualPoint> graph_;
};

bool mr_test(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const Tolerance& tol,
             const GridSpec& g = {});

}  // namespace fitzop
