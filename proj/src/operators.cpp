#include "fitzop/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace fitzop {
namespace {

void sort_unique(std::vector<Vector>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sort_unique(std::vector<PrimalDualPoint>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// T(x) for the operator's own matching rule: finite graphs match primal
// points within delta_dom, analytic kinds are evaluated exactly.
ValueSet own_values(const Operator& op, std::span<const double> x, const Tolerance& tol) {
    return op.values_near(x, op.exact_enumeration() ? tol.delta_dom : 0.0);
}

Region positive_half_line() { return Region::interval(0.0, kInf, true, true); }
Region negative_half_line() { return Region::interval(-kInf, 0.0, true, true); }

// sup and inf of a nonempty 1-d box region.
double upper_end(const Region& r) {
    const Bound& b = r.as_box()->hi[0];
    return b.kind == BoundKind::Infinite ? kInf : b.value;
}
double lower_end(const Region& r) {
    const Bound& b = r.as_box()->lo[0];
    return b.kind == BoundKind::Infinite ? -kInf : b.value;
}

// sup over u in an interval with the given ends of u * slope.
ExtReal linear_sup(double lo, double hi, double slope) {
    if (slope > 0.0) return hi == kInf ? ExtReal::pos_inf() : ExtReal(hi * slope);
    if (slope < 0.0) return lo == -kInf ? ExtReal::pos_inf() : ExtReal(lo * slope);
    return ExtReal(0.0);
}

bool region_contains_value(const Region& r, double v) {
    const double x[1] = {v};
    return r.contains(x);
}

}  // namespace

// ---------------------------------------------------------------- ValueSet

bool DualBox::is_point() const { return lo == hi; }

bool DualBox::contains(std::span<const double> y, double radius) const {
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] < lo[i] - radius || y[i] > hi[i] + radius) return false;
    return true;
}

ValueSet::ValueSet(std::vector<DualBox> boxes, std::optional<Vector> excluded)
    : boxes_(std::move(boxes)), excluded_(std::move(excluded)) {}

bool ValueSet::contains(std::span<const double> y, double radius) const {
    if (excluded_ && distance_inf(y, *excluded_) <= radius) return false;
    return std::any_of(boxes_.begin(), boxes_.end(), [&](const DualBox& b) { return b.contains(y, radius); });
}

ValueSet ValueSet::minkowski_sum(const ValueSet& other) const {
    std::vector<DualBox> out;
    for (const auto& a : boxes_) {
        for (const auto& b : other.boxes_) {
            DualBox s{a.lo, a.hi};
            for (std::size_t i = 0; i < s.lo.size(); ++i) {
                s.lo[i] = a.lo[i] + b.lo[i];
                s.hi[i] = a.hi[i] + b.hi[i];
            }
            out.push_back(std::move(s));
        }
    }
    // (Y \ {e}) + {b} = (Y + b) \ {e + b}; any larger summand fills the hole.
    std::optional<Vector> excluded;
    auto shift = [](const Vector& e, const ValueSet& v) -> std::optional<Vector> {
        if (v.excluded_ || v.boxes_.size() != 1 || !v.boxes_.front().is_point()) return std::nullopt;
        Vector s = e;
        for (std::size_t i = 0; i < s.size(); ++i)
            s[i] += v.boxes_.front().lo[i];
        return s;
    };
    if (excluded_ && !other.excluded_) excluded = shift(*excluded_, other);
    if (other.excluded_ && !excluded_) excluded = shift(*other.excluded_, *this);
    return ValueSet(std::move(out), std::move(excluded));
}

std::vector<Vector> ValueSet::sample(std::size_t n, const GridSpec& g) const {
    std::vector<Vector> out;
    std::vector<Vector> lattice;
    const double bound = g.dual_bound;
    for (const auto& b : boxes_) {
        if (b.is_point()) {
            out.push_back(b.lo);
            continue;
        }
        if (lattice.empty()) lattice = dual_lattice(n, g);
        for (const auto& y : lattice)
            if (b.contains(y, 0.0)) out.push_back(y);
        Vector clo(n), chi(n);
        bool meets = true;
        for (std::size_t i = 0; i < n; ++i) {
            clo[i] = std::max(b.lo[i], -bound);
            chi[i] = std::min(b.hi[i], bound);
            if (clo[i] > chi[i]) meets = false;
        }
        if (!meets) continue;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vector c(n);
            for (std::size_t i = 0; i < n; ++i)
                c[i] = (mask >> i) & 1 ? chi[i] : clo[i];
            out.push_back(std::move(c));
        }
    }
    if (excluded_) {
        std::erase_if(out, [&](const Vector& y) { return distance_inf(y, *excluded_) <= 1e-12; });
    }
    sort_unique(out);
    return out;
}

// ---------------------------------------------------------------- Operator

const char* to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::FiniteGraph: return "finite_graph";
    case OperatorKind::Flat: return "flat";
    case OperatorKind::NormalConeBox: return "normal_cone_box";
    case OperatorKind::AbsSubdiff: return "abs_subdiff";
    case OperatorKind::PointComplement: return "point_complement";
    case OperatorKind::Linear: return "linear";
    case OperatorKind::Restriction: return "restriction";
    case OperatorKind::SumNormalCone: return "sum_normal_cone";
    case OperatorKind::PairSum: return "pair_sum";
    }
    return "?";
}

Operator::Operator(std::size_t n) : n_(n) {
    if (n == 0) throw DimensionError("operator dimension must be >= 1");
}

void Operator::check_dim(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionError("operator: point dimension mismatch");
}

std::vector<PrimalDualPoint> Operator::enumerate_graph(const GridSpec& g, const Tolerance&) const {
    std::vector<PrimalDualPoint> out;
    for (const auto& x : primal_samples(g)) {
        const ValueSet vs = values_near(x, 0.0);
        for (auto& y : vs.sample(n_, g))
            out.emplace_back(x, std::move(y));
    }
    sort_unique(out);
    return out;
}

bool Operator::has_closed_form(const Region&) const { return false; }

std::optional<ExtReal> Operator::phi_closed_form(const Region&, const PrimalDualPoint&) const { return std::nullopt; }

bool Operator::domain_contains(std::span<const double> x, const Tolerance&) const {
    check_dim(x);
    return !values_near(x, 0.0).empty();
}

bool Operator::domain_closure_contains(std::span<const double> x, const Tolerance& tol) const {
    check_dim(x);
    return !values_near(x, tol.delta_dom).empty();
}

bool Operator::graph_contains(const PrimalDualPoint& z, const Tolerance& tol) const {
    check_dim(z.x());
    return values_near(z.x(), tol.delta_dom).contains(z.xstar(), tol.delta_dom);
}

bool Operator::domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const {
    if (v.is_empty()) return false;
    for (const auto& x : primal_samples(g))
        if (v.contains(x) && domain_contains(x, tol)) return true;
    for (const auto& x : grid_sample(v, g))
        if (domain_contains(x, tol)) return true;
    return false;
}

std::vector<Vector> Operator::range_samples(const GridSpec& g, const Tolerance& tol) const {
    std::vector<Vector> out;
    for (const auto& w : enumerate_graph(g, tol))
        out.push_back(w.xstar());
    sort_unique(out);
    return out;
}

// ------------------------------------------------------------- FiniteGraph

FiniteGraphOperator::FiniteGraphOperator(std::size_t n, std::vector<PrimalDualPoint> points)
    : Operator(n), points_(std::move(points)) {
    for (const auto& p : points_)
        if (p.dim() != n) throw DimensionError("finite graph: point dimension mismatch");
    std::vector<PrimalDualPoint> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("finite graph: points must be pairwise distinct");
}

ValueSet FiniteGraphOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    std::vector<DualBox> boxes;
    for (const auto& p : points_)
        if (distance_inf(p.x(), x) <= radius) boxes.push_back({p.xstar(), p.xstar()});
    return ValueSet(std::move(boxes));
}

std::vector<Vector> FiniteGraphOperator::primal_samples(const GridSpec&) const {
    std::vector<Vector> out;
    for (const auto& p : points_)
        out.push_back(p.x());
    sort_unique(out);
    return out;
}

std::vector<PrimalDualPoint> FiniteGraphOperator::enumerate_graph(const GridSpec&, const Tolerance&) const {
    return points_;
}

bool FiniteGraphOperator::domain_contains(std::span<const double> x, const Tolerance& tol) const {
    check_dim(x);
    return std::any_of(points_.begin(), points_.end(),
                       [&](const PrimalDualPoint& p) { return distance_inf(p.x(), x) <= tol.delta_dom; });
}

bool FiniteGraphOperator::domain_meets(const Region& v, const GridSpec&, const Tolerance&) const {
    return std::any_of(points_.begin(), points_.end(), [&](const PrimalDualPoint& p) { return v.contains(p.x()); });
}

std::string FiniteGraphOperator::describe() const {
    std::string s = "finite_graph [";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) s += ", ";
        s += format_point(points_[i]);
    }
    return s + "]";
}

// -------------------------------------------------------------------- Flat

FlatOperator::FlatOperator(Region region, Vector wstar)
    : Operator(region.dim()), region_(std::move(region)), wstar_(std::move(wstar)) {
    if (wstar_.size() != dim()) throw DimensionError("flat: w* dimension mismatch");
}

ValueSet FlatOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    const bool in = radius == 0.0 ? region_.contains(x) : region_.distance(x) <= radius;
    return in ? ValueSet::point(wstar_) : ValueSet();
}

std::vector<Vector> FlatOperator::primal_samples(const GridSpec& g) const { return grid_sample(region_, g); }

bool FlatOperator::has_closed_form(const Region& v) const { return region_.intersect(v).has_value(); }

std::optional<ExtReal> FlatOperator::phi_closed_form(const Region& v, const PrimalDualPoint& z) const {
    // sup_{u in R cap V} <x, w*> + <u, x*> - <u, w*>
    const auto cut = region_.intersect(v);
    if (!cut) return std::nullopt;
    if (cut->is_empty()) return ExtReal::neg_inf();
    Vector shifted = z.xstar();
    for (std::size_t i = 0; i < shifted.size(); ++i)
        shifted[i] -= wstar_[i];
    return ExtReal(dot(z.x(), wstar_)) + support_eval(*cut, shifted);
}

bool FlatOperator::domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const {
    if (auto cut = region_.intersect(v)) return !cut->is_empty();
    return Operator::domain_meets(v, g, tol);
}

std::string FlatOperator::describe() const {
    return "flat region=" + region_.to_string() + " wstar=" + format_vector(wstar_);
}

// ----------------------------------------------------------- NormalConeBox

NormalConeBoxOperator::NormalConeBoxOperator(Region box) : Operator(box.dim()), box_(std::move(box)) {
    if (!box_.as_box()) throw Error("normal_cone_box: region must be a box");
    if (!box_.is_closed()) throw Error("normal_cone_box: box must be closed");
    if (box_.is_empty()) throw Error("normal_cone_box: box must be nonempty");
}

ValueSet NormalConeBoxOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    const Box& b = *box_.as_box();
    DualBox out{Vector(dim(), 0.0), Vector(dim(), 0.0)};
    for (std::size_t i = 0; i < dim(); ++i) {
        const bool lo_finite = b.lo[i].kind != BoundKind::Infinite;
        const bool hi_finite = b.hi[i].kind != BoundKind::Infinite;
        if (lo_finite && x[i] < b.lo[i].value - radius) return {};
        if (hi_finite && x[i] > b.hi[i].value + radius) return {};
        if (lo_finite && x[i] <= b.lo[i].value + radius) out.lo[i] = -kInf;
        if (hi_finite && x[i] >= b.hi[i].value - radius) out.hi[i] = kInf;
    }
    return ValueSet({std::move(out)});
}

std::vector<Vector> NormalConeBoxOperator::primal_samples(const GridSpec& g) const { return grid_sample(box_, g); }

bool NormalConeBoxOperator::has_closed_form(const Region& v) const {
    return v.dim() == dim() && (v.as_box() != nullptr || v.is_empty());
}

std::optional<ExtReal> NormalConeBoxOperator::phi_closed_form(const Region& v, const PrimalDualPoint& z) const {
    // sup over u in C cap V of <u, x*> + sup_{u* in N_C(u)} <x - u, u*>.
    // The inner sup is 0 or +inf and splits per axis: it is +inf exactly when
    // u sits on a bound of C that x lies strictly beyond.
    const auto cut = box_.intersect(v);
    if (!cut) return std::nullopt;
    if (cut->is_empty()) return ExtReal::neg_inf();
    const Box& c = *box_.as_box();
    const Box& k = *cut->as_box();
    const Box* vb = v.as_box();
    ExtReal total(0.0);
    for (std::size_t i = 0; i < dim(); ++i) {
        const double x = z.x()[i];
        auto in_v = [&](double u) {
            if (!vb) return true;
            const Bound& lo = vb->lo[i];
            const Bound& hi = vb->hi[i];
            const bool lo_ok = lo.kind == BoundKind::Infinite || (lo.kind == BoundKind::Closed ? u >= lo.value : u > lo.value);
            const bool hi_ok = hi.kind == BoundKind::Infinite || (hi.kind == BoundKind::Closed ? u <= hi.value : u < hi.value);
            return lo_ok && hi_ok;
        };
        if (c.hi[i].kind != BoundKind::Infinite && in_v(c.hi[i].value) && x > c.hi[i].value) return ExtReal::pos_inf();
        if (c.lo[i].kind != BoundKind::Infinite && in_v(c.lo[i].value) && x < c.lo[i].value) return ExtReal::pos_inf();
        const double lo = k.lo[i].kind == BoundKind::Infinite ? -kInf : k.lo[i].value;
        const double hi = k.hi[i].kind == BoundKind::Infinite ? kInf : k.hi[i].value;
        total += linear_sup(lo, hi, z.xstar()[i]);
    }
    return total;
}

bool NormalConeBoxOperator::domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const {
    if (auto cut = box_.intersect(v)) return !cut->is_empty();
    return Operator::domain_meets(v, g, tol);
}

std::string NormalConeBoxOperator::describe() const { return "normal_cone_box box=" + box_.to_string(); }

// -------------------------------------------------------------- AbsSubdiff

AbsSubdiffOperator::AbsSubdiffOperator(double scale) : Operator(1), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error("abs_subdiff: scale must be positive and finite");
}

ValueSet AbsSubdiffOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    const double a = scale_;
    if (std::abs(x[0]) <= radius) return ValueSet({DualBox{{-a}, {a}}});
    return ValueSet::point({x[0] > 0.0 ? a : -a});
}

std::vector<Vector> AbsSubdiffOperator::primal_samples(const GridSpec& g) const {
    auto out = grid_sample(Region::whole(1), g);
    out.push_back({0.0});
    sort_unique(out);
    return out;
}

bool AbsSubdiffOperator::has_closed_form(const Region& v) const {
    return v.dim() == 1 && (v.as_box() != nullptr || v.is_empty());
}

std::optional<ExtReal> AbsSubdiffOperator::phi_closed_form(const Region& v, const PrimalDualPoint& z) const {
    if (!has_closed_form(v)) return std::nullopt;
    const double a = scale_;
    const double x = z.x()[0];
    const double xs = z.xstar()[0];
    ExtReal best = ExtReal::neg_inf();
    // u > 0, u* = a:  a x + u (x* - a)
    if (auto pos = v.intersect(positive_half_line()); pos && !pos->is_empty())
        best = max(best, ExtReal(a * x) + linear_sup(lower_end(*pos), upper_end(*pos), xs - a));
    // u < 0, u* = -a: -a x + u (x* + a)
    if (auto neg = v.intersect(negative_half_line()); neg && !neg->is_empty())
        best = max(best, ExtReal(-a * x) + linear_sup(lower_end(*neg), upper_end(*neg), xs + a));
    // u = 0, |u*| <= a: sup x u* = a |x|
    if (region_contains_value(v, 0.0)) best = max(best, ExtReal(a * std::abs(x)));
    return best;
}

bool AbsSubdiffOperator::domain_meets(const Region& v, const GridSpec&, const Tolerance&) const {
    return !v.is_empty();
}

std::string AbsSubdiffOperator::describe() const { return "abs_subdiff scale=" + format_number(scale_); }

// --------------------------------------------------------- PointComplement

PointComplementOperator::PointComplementOperator(Vector x0) : Operator(x0.size()), x0_(std::move(x0)) {}

ValueSet PointComplementOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    if (distance_inf(x, x0_) > radius) return {};
    return ValueSet({DualBox{Vector(dim(), -kInf), Vector(dim(), kInf)}}, Vector(dim(), 0.0));
}

std::vector<Vector> PointComplementOperator::primal_samples(const GridSpec&) const { return {x0_}; }

bool PointComplementOperator::has_closed_form(const Region& v) const { return v.dim() == dim(); }

std::optional<ExtReal> PointComplementOperator::phi_closed_form(const Region& v, const PrimalDualPoint& z) const {
    // sup_{u* != 0} <x, u*> + <x0, x*> - <x0, u*>
    if (!v.contains(x0_)) return ExtReal::neg_inf();
    if (z.x() != x0_) return ExtReal::pos_inf();
    return ExtReal(dot(x0_, z.xstar()));
}

bool PointComplementOperator::domain_meets(const Region& v, const GridSpec&, const Tolerance&) const {
    return v.contains(x0_);
}

std::string PointComplementOperator::describe() const { return "point_complement point=" + format_vector(x0_); }

// ------------------------------------------------------------------ Linear

LinearOperator::LinearOperator(std::size_t n, std::vector<double> matrix) : Operator(n), m_(std::move(matrix)) {
    if (m_.size() != n * n) throw DimensionError("linear: matrix must be n x n");
    Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        m_.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw Error("linear: M + M^T has a negative eigenvalue; the operator is not monotone");
}

Vector LinearOperator::apply(std::span<const double> x) const {
    check_dim(x);
    Vector y(dim(), 0.0);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            y[i] += m_[i * dim() + j] * x[j];
    return y;
}

ValueSet LinearOperator::values_near(std::span<const double> x, double radius) const {
    const Vector y = apply(x);
    if (radius == 0.0) return ValueSet::point(y);
    DualBox b{y, y};
    for (std::size_t i = 0; i < dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim(); ++j)
            row += std::abs(m_[i * dim() + j]);
        b.lo[i] -= radius * row;
        b.hi[i] += radius * row;
    }
    return ValueSet({std::move(b)});
}

std::vector<Vector> LinearOperator::primal_samples(const GridSpec& g) const {
    return grid_sample(Region::whole(dim()), g);
}

bool LinearOperator::domain_meets(const Region& v, const GridSpec&, const Tolerance&) const { return !v.is_empty(); }

bool LinearOperator::monotonically_related(const PrimalDualPoint& z, const Tolerance& tol) const {
    const auto n = static_cast<Eigen::Index>(dim());
    const Eigen::MatrixXd m =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m_.data(), n, n);
    const Eigen::Map<const Eigen::VectorXd> x(z.x().data(), n);
    const Eigen::Map<const Eigen::VectorXd> xs(z.xstar().data(), n);
    const Eigen::MatrixXd s = m + m.transpose();
    const Eigen::VectorXd rhs = m.transpose() * x + xs;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    const double cutoff = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lambda = es.eigenvalues()(k);
        if (lambda > cutoff) u += (es.eigenvectors().col(k).dot(rhs) / lambda) * es.eigenvectors().col(k);
    }
    // rhs outside the range of S: the quadratic is unbounded below.
    if ((s * u - rhs).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) return false;
    const double q = (x - u).dot(xs - m * u);
    return q >= -tol.eps_eq;
}

std::string LinearOperator::describe() const {
    std::string s = "linear matrix=[";
    for (std::size_t i = 0; i < dim(); ++i) {
        if (i) s += ", ";
        s += format_vector(std::span<const double>(m_.data() + i * dim(), dim()));
    }
    return s + "]";
}

// ------------------------------------------------------------- Restriction

RestrictionOperator::RestrictionOperator(OperatorHandle base, Region v)
    : Operator(base ? base->dim() : 0), base_(std::move(base)), v_(std::move(v)) {
    if (v_.dim() != dim()) throw DimensionError("restriction: region dimension mismatch");
}

// For a box V the query ball is cut down to the part inside V; open faces are
// pulled in slightly so that values on the excluded face do not leak in.
ValueSet RestrictionOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    const Box* b = v_.as_box();
    if (radius == 0.0 || !b) {
        if (!v_.contains(x)) return {};
        return base_->values_near(x, radius);
    }
    const double nudge = radius * 1e-3;
    Vector center(dim());
    double half = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        double lo = x[i] - radius, hi = x[i] + radius;
        if (b->lo[i].kind != BoundKind::Infinite)
            lo = std::max(lo, b->lo[i].value + (b->lo[i].kind == BoundKind::Open ? nudge : 0.0));
        if (b->hi[i].kind != BoundKind::Infinite)
            hi = std::min(hi, b->hi[i].value - (b->hi[i].kind == BoundKind::Open ? nudge : 0.0));
        if (lo > hi) return {};
        center[i] = 0.5 * (lo + hi);
        half = std::max(half, 0.5 * (hi - lo));
    }
    return base_->values_near(center, half);
}

std::vector<Vector> RestrictionOperator::primal_samples(const GridSpec& g) const {
    std::vector<Vector> out;
    for (auto& x : base_->primal_samples(g))
        if (v_.contains(x)) out.push_back(std::move(x));
    if (!base_->exact_enumeration()) {
        for (auto& x : grid_sample(v_, g))
            out.push_back(std::move(x));
    }
    sort_unique(out);
    return out;
}

std::vector<PrimalDualPoint> RestrictionOperator::enumerate_graph(const GridSpec& g, const Tolerance& tol) const {
    std::vector<PrimalDualPoint> out;
    for (auto& w : base_->enumerate_graph(g, tol))
        if (v_.contains(w.x())) out.push_back(std::move(w));
    if (!base_->exact_enumeration()) {
        for (const auto& x : grid_sample(v_, g)) {
            for (auto& y : own_values(*base_, x, tol).sample(dim(), g))
                out.emplace_back(x, std::move(y));
        }
    }
    sort_unique(out);
    return out;
}

bool RestrictionOperator::has_closed_form(const Region& v) const {
    const auto cut = v_.intersect(v);
    return cut && base_->has_closed_form(*cut);
}

std::optional<ExtReal> RestrictionOperator::phi_closed_form(const Region& v, const PrimalDualPoint& z) const {
    const auto cut = v_.intersect(v);
    if (!cut) return std::nullopt;
    return base_->phi_closed_form(*cut, z);
}

bool RestrictionOperator::domain_contains(std::span<const double> x, const Tolerance& tol) const {
    check_dim(x);
    return v_.contains(x) && base_->domain_contains(x, tol);
}

bool RestrictionOperator::domain_meets(const Region& v, const GridSpec& g, const Tolerance& tol) const {
    if (auto cut = v_.intersect(v)) return base_->domain_meets(*cut, g, tol);
    return Operator::domain_meets(v, g, tol);
}

std::string RestrictionOperator::describe() const {
    return "restriction region=" + v_.to_string() + " base=(" + base_->describe() + ")";
}

// --------------------------------------------------------------------- Sum

SumOperator::SumOperator(OperatorKind kind, OperatorHandle a, OperatorHandle b)
    : Operator(a ? a->dim() : 0), kind_(kind), a_(std::move(a)), b_(std::move(b)) {
    if (!b_ || b_->dim() != dim()) throw DimensionError("sum: operand dimension mismatch");
    if (kind_ != OperatorKind::SumNormalCone && kind_ != OperatorKind::PairSum)
        throw Error("sum: kind must be sum_normal_cone or pair_sum");
    if (kind_ == OperatorKind::SumNormalCone && b_->kind() != OperatorKind::NormalConeBox)
        throw Error("sum_normal_cone: right operand must be a normal cone");
}

ValueSet SumOperator::values_near(std::span<const double> x, double radius) const {
    check_dim(x);
    const ValueSet va = a_->values_near(x, radius);
    if (va.empty()) return {};
    return va.minkowski_sum(b_->values_near(x, radius));
}

std::vector<Vector> SumOperator::primal_samples(const GridSpec& g) const {
    auto out = a_->primal_samples(g);
    for (auto& x : b_->primal_samples(g))
        out.push_back(std::move(x));
    sort_unique(out);
    return out;
}

std::vector<PrimalDualPoint> SumOperator::enumerate_graph(const GridSpec& g, const Tolerance& tol) const {
    // (x, a* + b*) whenever A and B have graph points over primals within
    // delta_dom of x.
    std::vector<PrimalDualPoint> out;
    for (const auto& x : primal_samples(g)) {
        const ValueSet va = own_values(*a_, x, tol);
        if (va.empty()) continue;
        const ValueSet vb = own_values(*b_, x, tol);
        if (vb.empty()) continue;
        for (auto& y : va.minkowski_sum(vb).sample(dim(), g))
            out.emplace_back(x, std::move(y));
    }
    sort_unique(out);
    return out;
}

bool SumOperator::domain_contains(std::span<const double> x, const Tolerance& tol) const {
    check_dim(x);
    return !own_values(*a_, x, tol).empty() && !own_values(*b_, x, tol).empty();
}

std::string SumOperator::describe() const {
    return std::string(to_string(kind_)) + " left=(" + a_->describe() + ") right=(" + b_->describe() + ")";
}

// ---------------------------------------------------------------- builders

OperatorHandle make_finite_graph(std::size_t n, std::vector<PrimalDualPoint> points) {
    return std::make_shared<const FiniteGraphOperator>(n, std::move(points));
}
OperatorHandle make_flat(Region region, Vector wstar) {
    return std::make_shared<const FlatOperator>(std::move(region), std::move(wstar));
}
OperatorHandle make_normal_cone_box(Region box) {
    return std::make_shared<const NormalConeBoxOperator>(std::move(box));
}
OperatorHandle make_abs_subdiff(double scale) { return std::make_shared<const AbsSubdiffOperator>(scale); }
OperatorHandle make_point_complement(Vector x0) {
    return std::make_shared<const PointComplementOperator>(std::move(x0));
}
OperatorHandle make_linear(std::size_t n, std::vector<double> matrix) {
    return std::make_shared<const LinearOperator>(n, std::move(matrix));
}

OperatorHandle build_operator(const OperatorSpec& spec) {
    auto need_region = [&](const std::optional<Region>& r, const char* what) -> const Region& {
        if (!r) throw Error(spec.kind + ": missing " + what);
        if (r->dim() != spec.dim) throw DimensionError(spec.kind + ": " + what + " dimension mismatch");
        return *r;
    };
    auto need_children = [&](std::size_t k) {
        if (spec.children.size() != k)
            throw Error(spec.kind + ": expected " + std::to_string(k) + " nested operator(s)");
    };
    if (spec.kind == "finite_graph") return make_finite_graph(spec.dim, spec.points);
    if (spec.kind == "flat") {
        Vector w = spec.wstar.empty() ? Vector(spec.dim, 0.0) : spec.wstar;
        return make_flat(need_region(spec.region, "region"), std::move(w));
    }
    if (spec.kind == "normal_cone_box") return make_normal_cone_box(need_region(spec.box, "box"));
    if (spec.kind == "abs_subdiff") {
        if (spec.dim != 1) throw DimensionError("abs_subdiff is defined on R only");
        return make_abs_subdiff(spec.scale);
    }
    if (spec.kind == "point_complement") {
        Vector p = spec.point.empty() ? Vector(spec.dim, 0.0) : spec.point;
        if (p.size() != spec.dim) throw DimensionError("point_complement: point dimension mismatch");
        return make_point_complement(std::move(p));
    }
    if (spec.kind == "linear") return make_linear(spec.dim, spec.matrix);
    if (spec.kind == "restriction") {
        need_children(1);
        return std::make_shared<const RestrictionOperator>(build_operator(spec.children[0]),
                                                           need_region(spec.region, "region"));
    }
    if (spec.kind == "sum_normal_cone") {
        need_children(1);
        return std::make_shared<const SumOperator>(OperatorKind::SumNormalCone, build_operator(spec.children[0]),
                                                   make_normal_cone_box(need_region(spec.box, "box")));
    }
    if (spec.kind == "pair_sum") {
        need_children(2);
        return std::make_shared<const SumOperator>(OperatorKind::PairSum, build_operator(spec.children[0]),
                                                   build_operator(spec.children[1]));
    }
    throw Error("unknown operator kind '" + spec.kind + "'");
}

Restricted restrict(const OperatorHandle& t, const Region& v, const GridSpec& g, const Tolerance& tol) {
    if (v.dim() != t->dim()) throw DimensionError("restrict: region dimension mismatch");
    if (const auto* fg = dynamic_cast<const FiniteGraphOperator*>(t.get())) {
        std::vector<PrimalDualPoint> kept;
        for (const auto& p : fg->points())
            if (v.contains(p.x())) kept.push_back(p);
        const bool empty = kept.empty();
        return {make_finite_graph(t->dim(), std::move(kept)), empty};
    }
    if (const auto* r = dynamic_cast<const RestrictionOperator*>(t.get())) {
        if (auto cut = r->region().intersect(v)) return restrict(r->base(), *cut, g, tol);
    }
    const bool empty = !t->domain_meets(v, g, tol);
    return {std::make_shared<const RestrictionOperator>(t, v), empty};
}

// ------------------------------------------------------------ monotonicity

MonotonicityResult pairwise_monotonicity(const std::vector<PrimalDualPoint>& graph, const Tolerance& tol) {
    MonotonicityResult r;
    r.points = graph.size();
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.size(); ++j) {
            const double gap = monotone_gap(graph[i], graph[j]);
            if (gap < r.worst_gap) {
                r.worst_gap = gap;
                if (gap < -tol.eps_eq) r.witness = std::make_pair(graph[i], graph[j]);
            }
        }
    }
    r.monotone = !(r.worst_gap < -tol.eps_eq);
    return r;
}

Verdict is_monotone(const OperatorHandle& t, const Tolerance& tol, const GridSpec& g) {
    Verdict v;
    v.property = Property::Monotone;
    v.grid = g;
    v.tol = tol;
    const auto graph = t->enumerate_graph(g, tol);
    const auto r = pairwise_monotonicity(graph, tol);
    v.points_scanned = graph.size();
    v.approximate = !t->exact_enumeration();
    if (!r.monotone && r.witness) {
        v.add_witness({r.witness->first, ExtReal(r.worst_gap), 0.0});
        v.add_witness({r.witness->second, ExtReal(r.worst_gap), 0.0});
        v.note = "worst pairwise gap " + format_number(r.worst_gap);
    }
    v.finalize();
    return v;
}

MrTester::MrTester(OperatorHandle t, const Region& v, const GridSpec& g, const Tolerance& tol)
    : t_(std::move(t)), v_(v), tol_(tol), route_(Route::PairwiseGaps) {
    if (t_->kind() == OperatorKind::Linear && v_.is_whole()) {
        route_ = Route::Quadratic;
    } else if (t_->has_closed_form(v_)) {
        route_ = Route::ClosedForm;
    } else {
        const Restricted r = restrict(t_, v_, g, tol_);
        graph_ = r.op->enumerate_graph(g, tol_);
        exact_ = r.op->exact_enumeration();
    }
}

bool MrTester::operator()(const PrimalDualPoint& z) const {
    switch (route_) {
    case Route::Quadratic: return static_cast<const LinearOperator&>(*t_).monotonically_related(z, tol_);
    case Route::ClosedForm: return *t_->phi_closed_form(v_, z) <= ExtReal(coupling(z) + tol_.eps_eq);
    case Route::PairwiseGaps: break;
    }
    return std::all_of(graph_.begin(), graph_.end(),
                       [&](const PrimalDualPoint& w) { return monotone_gap(z, w) >= -tol_.eps_eq; });
}

bool mr_test(const OperatorHandle& t, const Region& v, const PrimalDualPoint& z, const Tolerance& tol,
             const GridSpec& g) {
    return MrTester(t, v, g, tol)(z);
}

}  // namespace fitzop
