#include "fitzop/regions.hpp"

#include "fitzop/lp.hpp"

#include <algorithm>
#include <cmath>

namespace fitzop {
namespace {

bool lower_ok(const Bound& b, double v) {
    switch (b.kind) {
    case BoundKind::Infinite: return true;
    case BoundKind::Closed: return v >= b.value;
    case BoundKind::Open: return v > b.value;
    }
    return false;
}

bool upper_ok(const Bound& b, double v) {
    switch (b.kind) {
    case BoundKind::Infinite: return true;
    case BoundKind::Closed: return v <= b.value;
    case BoundKind::Open: return v < b.value;
    }
    return false;
}

bool box_axis_empty(const Bound& lo, const Bound& hi) {
    if (lo.kind == BoundKind::Infinite || hi.kind == BoundKind::Infinite) return false;
    if (lo.value > hi.value) return true;
    return lo.value == hi.value && (lo.kind == BoundKind::Open || hi.kind == BoundKind::Open);
}

// The tighter of two lower bounds.
Bound tighter_lower(const Bound& a, const Bound& b) {
    if (a.kind == BoundKind::Infinite) return b;
    if (b.kind == BoundKind::Infinite) return a;
    if (a.value != b.value) return a.value > b.value ? a : b;
    return a.kind == BoundKind::Open ? a : b;
}

Bound tighter_upper(const Bound& a, const Bound& b) {
    if (a.kind == BoundKind::Infinite) return b;
    if (b.kind == BoundKind::Infinite) return a;
    if (a.value != b.value) return a.value < b.value ? a : b;
    return a.kind == BoundKind::Open ? a : b;
}

bool polytope_contains(const Polytope& p, std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t k = p.vertices.size();
    lp::Problem prob;
    prob.rows = n + 1;
    prob.cols = k;
    prob.a.assign(prob.rows * k, 0.0);
    prob.b.assign(prob.rows, 0.0);
    prob.c.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            prob.at(i, j) = p.vertices[j][i];
        prob.at(n, j) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        prob.b[i] = x[i];
    prob.b[n] = 1.0;
    return lp::solve(prob).status == lp::Status::Optimal;
}

std::string bound_text(const Bound& b, bool lower) {
    if (b.kind == BoundKind::Infinite) return lower ? "(-inf" : "inf)";
    const char* open = lower ? "(" : ")";
    const char* closed = lower ? "[" : "]";
    const std::string v = format_number(b.value);
    return lower ? (b.kind == BoundKind::Open ? open : closed) + v
                 : v + (b.kind == BoundKind::Open ? open : closed);
}

}  // namespace

Region Region::box(Box b) {
    if (b.lo.size() != b.hi.size() || b.lo.empty())
        throw DimensionError("box: bound lists must be nonempty and of equal length");
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        const Bound& lo = b.lo[i];
        const Bound& hi = b.hi[i];
        if (lo.kind != BoundKind::Infinite && hi.kind != BoundKind::Infinite && lo.value > hi.value)
            throw Error("box: lower bound exceeds upper bound on axis " + std::to_string(i));
        if ((lo.kind != BoundKind::Infinite && !std::isfinite(lo.value)) ||
            (hi.kind != BoundKind::Infinite && !std::isfinite(hi.value)))
            throw Error("box: finite bound expected");
    }
    const std::size_t n = b.lo.size();
    return Region(n, std::move(b));
}

Region Region::interval(double lo, double hi, bool lo_open, bool hi_open) {
    auto make = [](double v, bool open) {
        if (std::isinf(v)) return Bound::infinite();
        return open ? Bound::open(v) : Bound::closed(v);
    };
    return box(Box{{make(lo, lo_open)}, {make(hi, hi_open)}});
}

Region Region::closed_box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size()) throw DimensionError("closed_box: dimension mismatch");
    Box b;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        b.lo.push_back(std::isinf(lo[i]) ? Bound::infinite() : Bound::closed(lo[i]));
        b.hi.push_back(std::isinf(hi[i]) ? Bound::infinite() : Bound::closed(hi[i]));
    }
    return box(std::move(b));
}

Region Region::open_box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size()) throw DimensionError("open_box: dimension mismatch");
    Box b;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        b.lo.push_back(std::isinf(lo[i]) ? Bound::infinite() : Bound::open(lo[i]));
        b.hi.push_back(std::isinf(hi[i]) ? Bound::infinite() : Bound::open(hi[i]));
    }
    return box(std::move(b));
}

Region Region::whole(std::size_t n) {
    if (n == 0) throw DimensionError("whole: dimension must be >= 1");
    return box(Box{std::vector<Bound>(n, Bound::infinite()), std::vector<Bound>(n, Bound::infinite())});
}

Region Region::half_space(Vector normal, double offset, bool open) {
    if (normal.empty()) throw DimensionError("half-space: empty normal");
    if (max_abs(normal) == 0.0) throw Error("half-space: zero normal");
    const std::size_t n = normal.size();
    return Region(n, HalfSpace{std::move(normal), offset, open});
}

Region Region::polytope(std::vector<Vector> vertices) {
    if (vertices.empty()) throw Error("polytope: vertex list must be nonempty");
    const std::size_t n = vertices.front().size();
    if (n == 0) throw DimensionError("polytope: zero-dimensional vertices");
    for (const auto& v : vertices)
        if (v.size() != n) throw DimensionError("polytope: vertices differ in dimension");
    return Region(n, Polytope{std::move(vertices)});
}

Region Region::empty(std::size_t n) {
    if (n == 0) throw DimensionError("empty: dimension must be >= 1");
    return Region(n, EmptySet{});
}

void Region::check_dim(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionError("region: point dimension mismatch");
}

bool Region::is_empty() const {
    if (std::holds_alternative<EmptySet>(shape_)) return true;
    if (const Box* b = as_box()) {
        for (std::size_t i = 0; i < n_; ++i)
            if (box_axis_empty(b->lo[i], b->hi[i])) return true;
    }
    return false;
}

bool Region::is_whole() const {
    const Box* b = as_box();
    if (!b) return false;
    for (std::size_t i = 0; i < n_; ++i)
        if (b->lo[i].kind != BoundKind::Infinite || b->hi[i].kind != BoundKind::Infinite) return false;
    return true;
}

bool Region::is_bounded() const {
    if (is_empty()) return true;
    if (std::holds_alternative<Polytope>(shape_)) return true;
    if (const Box* b = as_box()) {
        for (std::size_t i = 0; i < n_; ++i)
            if (b->lo[i].kind == BoundKind::Infinite || b->hi[i].kind == BoundKind::Infinite) return false;
        return true;
    }
    return false;
}

bool Region::is_open() const {
    if (is_empty()) return true;
    if (const Box* b = as_box()) {
        for (std::size_t i = 0; i < n_; ++i)
            if (b->lo[i].kind == BoundKind::Closed || b->hi[i].kind == BoundKind::Closed) return false;
        return true;
    }
    if (const auto* h = std::get_if<HalfSpace>(&shape_)) return h->open;
    return false;
}

bool Region::is_closed() const {
    if (is_empty()) return true;
    if (const Box* b = as_box()) {
        for (std::size_t i = 0; i < n_; ++i)
            if (b->lo[i].kind == BoundKind::Open || b->hi[i].kind == BoundKind::Open) return false;
        return true;
    }
    if (const auto* h = std::get_if<HalfSpace>(&shape_)) return !h->open;
    return true;
}

bool Region::contains(std::span<const double> x) const {
    check_dim(x);
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Box>) {
                for (std::size_t i = 0; i < n_; ++i)
                    if (!lower_ok(s.lo[i], x[i]) || !upper_ok(s.hi[i], x[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                const double v = dot(s.normal, x);
                return s.open ? v < s.offset : v <= s.offset;
            } else if constexpr (std::is_same_v<S, Polytope>) {
                return polytope_contains(s, x);
            } else {
                return false;
            }
        },
        shape_);
}

bool Region::interior_contains(std::span<const double> x) const {
    check_dim(x);
    if (const auto* p = std::get_if<Polytope>(&shape_)) {
        if (!polytope_contains(*p, x)) return false;
        // x is interior iff x +- t e_i stay inside for some t > 0; the
        // cross-polytope they span then contains a ball around x.
        double diam = 0.0;
        for (const auto& v : p->vertices)
            diam = std::max(diam, distance_inf(v, x));
        const double t = 1e-7 * (1.0 + diam);
        Vector y(x.begin(), x.end());
        for (std::size_t i = 0; i < n_; ++i) {
            for (double s : {t, -t}) {
                y[i] = x[i] + s;
                if (!polytope_contains(*p, y)) return false;
            }
            y[i] = x[i];
        }
        return true;
    }
    return interior().contains(x);
}

double Region::distance(std::span<const double> x) const {
    check_dim(x);
    if (is_empty()) return kInf;
    if (const Box* b = as_box()) {
        double d = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (b->lo[i].kind != BoundKind::Infinite) d = std::max(d, b->lo[i].value - x[i]);
            if (b->hi[i].kind != BoundKind::Infinite) d = std::max(d, x[i] - b->hi[i].value);
        }
        return d;
    }
    if (const auto* h = std::get_if<HalfSpace>(&shape_)) {
        double l1 = 0.0;
        for (double a : h->normal)
            l1 += std::abs(a);
        return std::max(0.0, (dot(h->normal, x) - h->offset) / l1);
    }
    return contains(x) ? 0.0 : kInf;
}

Region Region::closure() const {
    if (const Box* b = as_box()) {
        if (is_empty()) return empty(n_);
        Box c = *b;
        for (auto& bd : c.lo)
            if (bd.kind == BoundKind::Open) bd.kind = BoundKind::Closed;
        for (auto& bd : c.hi)
            if (bd.kind == BoundKind::Open) bd.kind = BoundKind::Closed;
        return Region(n_, std::move(c));
    }
    if (const auto* h = std::get_if<HalfSpace>(&shape_)) return Region(n_, HalfSpace{h->normal, h->offset, false});
    return *this;
}

Region Region::interior() const {
    if (const Box* b = as_box()) {
        Box c = *b;
        for (auto& bd : c.lo)
            if (bd.kind == BoundKind::Closed) bd.kind = BoundKind::Open;
        for (auto& bd : c.hi)
            if (bd.kind == BoundKind::Closed) bd.kind = BoundKind::Open;
        Region r(n_, std::move(c));
        return r.is_empty() ? empty(n_) : r;
    }
    if (const auto* h = std::get_if<HalfSpace>(&shape_)) return Region(n_, HalfSpace{h->normal, h->offset, true});
    // Polytope interiors are only available pointwise through interior_contains.
    throw Error("interior: not representable for this shape");
}

std::optional<Region> Region::intersect(const Region& other) const {
    if (other.n_ != n_) throw DimensionError("intersect: dimension mismatch");
    if (is_empty() || other.is_empty()) return empty(n_);
    if (is_whole()) return other;
    if (other.is_whole()) return *this;
    const Box* a = as_box();
    const Box* b = other.as_box();
    if (!a || !b) return std::nullopt;
    Box c;
    for (std::size_t i = 0; i < n_; ++i) {
        c.lo.push_back(tighter_lower(a->lo[i], b->lo[i]));
        c.hi.push_back(tighter_upper(a->hi[i], b->hi[i]));
        if (box_axis_empty(c.lo[i], c.hi[i])) return empty(n_);
    }
    return Region(n_, std::move(c));
}

std::string Region::to_string() const {
    return std::visit(
        [&](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Box>) {
                std::string out;
                for (std::size_t i = 0; i < n_; ++i) {
                    if (i) out += "x";
                    out += bound_text(s.lo[i], true) + "," + bound_text(s.hi[i], false);
                }
                return out;
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                return "halfspace " + format_vector(s.normal) + (s.open ? " < " : " <= ") + format_number(s.offset);
            } else if constexpr (std::is_same_v<S, Polytope>) {
                std::string out = "polytope [";
                for (std::size_t j = 0; j < s.vertices.size(); ++j) {
                    if (j) out += ", ";
                    out += format_vector(s.vertices[j]);
                }
                return out + "]";
            } else {
                return "empty";
            }
        },
        shape_);
}

void GridSpec::validate() const {
    if (resolution < 2 || dual_resolution < 2) throw Error("grid resolutions must be >= 2");
    if (!(dual_bound > 0.0) || !std::isfinite(dual_bound)) throw Error("dual_bound must be positive and finite");
    if (!(ambient_bound > 0.0) || !std::isfinite(ambient_bound))
        throw Error("ambient_bound must be positive and finite");
}

std::vector<double> axis_lattice(double lo, double hi, std::size_t k, bool lo_open, bool hi_open) {
    std::vector<double> out;
    if (lo > hi || k == 0) return out;
    if (lo == hi) {
        if (!lo_open && !hi_open) out.push_back(lo);
        return out;
    }
    const std::size_t opens = (lo_open ? 1 : 0) + (hi_open ? 1 : 0);
    const std::size_t den = k - 1 + opens;
    if (den == 0) {
        out.push_back(lo);
        return out;
    }
    const double span = hi - lo;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double step_index = static_cast<double>(i + (lo_open ? 1 : 0));
        out.push_back(i + 1 == k && !hi_open ? hi : lo + span * step_index / static_cast<double>(den));
    }
    return out;
}

namespace {

std::vector<Vector> cartesian(const std::vector<std::vector<double>>& axes) {
    std::vector<Vector> out;
    for (const auto& a : axes)
        if (a.empty()) return out;
    Vector cur(axes.size());
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < axes.size(); ++i)
            cur[i] = axes[i][idx[i]];
        out.push_back(cur);
        std::size_t d = axes.size();
        while (d > 0) {
            --d;
            if (++idx[d] < axes[d].size()) break;
            idx[d] = 0;
            if (d == 0) return out;
        }
        if (axes.empty()) return out;
    }
}

}  // namespace

std::vector<Vector> grid_sample(const Region& r, const GridSpec& g) {
    g.validate();
    const std::size_t n = r.dim();
    if (r.is_empty()) return {};
    const double amb = g.ambient_bound;
    if (const Box* b = r.as_box()) {
        std::vector<std::vector<double>> axes(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Bound& lo = b->lo[i];
            const Bound& hi = b->hi[i];
            const double l = lo.kind == BoundKind::Infinite ? -amb : lo.value;
            const double h = hi.kind == BoundKind::Infinite ? amb : hi.value;
            axes[i] = axis_lattice(l, h, g.resolution, lo.kind == BoundKind::Open, hi.kind == BoundKind::Open);
        }
        return cartesian(axes);
    }
    std::vector<std::vector<double>> axes(n);
    if (const auto* p = std::get_if<Polytope>(&r.shape())) {
        for (std::size_t i = 0; i < n; ++i) {
            double l = kInf, h = -kInf;
            for (const auto& v : p->vertices) {
                l = std::min(l, v[i]);
                h = std::max(h, v[i]);
            }
            axes[i] = axis_lattice(l, h, g.resolution, false, false);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            axes[i] = axis_lattice(-amb, amb, g.resolution, false, false);
    }
    std::vector<Vector> out;
    for (auto& x : cartesian(axes))
        if (r.contains(x)) out.push_back(std::move(x));
    return out;
}

std::vector<Vector> dual_lattice(std::size_t n, const GridSpec& g) {
    g.validate();
    const auto axis = axis_lattice(-g.dual_bound, g.dual_bound, g.dual_resolution, false, false);
    return cartesian(std::vector<std::vector<double>>(n, axis));
}

bool normal_cone_contains(const Region& c, std::span<const double> x, std::span<const double> xstar,
                          const Tolerance& tol) {
    if (x.size() != c.dim() || xstar.size() != c.dim()) throw DimensionError("normal cone: dimension mismatch");
    if (!c.is_closed()) throw Error("normal cone is only defined here for closed regions");
    if (!c.contains(x)) return false;
    // sup_{x' in C} <x' - x, x*>
    double excess = 0.0;
    if (const Box* b = c.as_box()) {
        for (std::size_t i = 0; i < c.dim(); ++i) {
            const double y = xstar[i];
            if (y > 0.0) {
                if (b->hi[i].kind == BoundKind::Infinite) return false;
                excess += (b->hi[i].value - x[i]) * y;
            } else if (y < 0.0) {
                if (b->lo[i].kind == BoundKind::Infinite) return false;
                excess += (b->lo[i].value - x[i]) * y;
            }
        }
    } else if (const auto* h = std::get_if<HalfSpace>(&c.shape())) {
        const double nn = dot(h->normal, h->normal);
        const double t = dot(h->normal, xstar) / nn;
        if (t < -tol.eps_eq) return false;
        for (std::size_t i = 0; i < c.dim(); ++i)
            if (std::abs(xstar[i] - t * h->normal[i]) > tol.eps_eq) return false;
        excess = t * (h->offset - dot(h->normal, x));
    } else if (const auto* p = std::get_if<Polytope>(&c.shape())) {
        excess = -kInf;
        for (const auto& v : p->vertices) {
            double s = 0.0;
            for (std::size_t i = 0; i < c.dim(); ++i)
                s += (v[i] - x[i]) * xstar[i];
            excess = std::max(excess, s);
        }
    }
    return excess <= tol.eps_eq;
}

}  // namespace fitzop
