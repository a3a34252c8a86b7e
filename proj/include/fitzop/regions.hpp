#pragma once

// Convex subsets of X: boxes with open/closed/infinite bounds, half-spaces,
// and vertex-listed polytopes. Grid sampling and normal-cone membership.

#include "fitzop/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fitzop {

enum class BoundKind { Closed, Open, Infinite };

struct Bound {
    double value = 0.0;
    BoundKind kind = BoundKind::Closed;

    static Bound closed(double v) { return {v, BoundKind::Closed}; }
    static Bound open(double v) { return {v, BoundKind::Open}; }
    static Bound infinite() { return {0.0, BoundKind::Infinite}; }
};

struct Box {
    std::vector<Bound> lo;
    std::vector<Bound> hi;
};

// {x : <normal, x> <= offset}, or < when open.
struct HalfSpace {
    Vector normal;
    double offset = 0.0;
    bool open = false;
};

// Closed convex hull of the vertices.
struct Polytope {
    std::vector<Vector> vertices;
};

struct EmptySet {};

class Region {
public:
    using Shape = std::variant<Box, HalfSpace, Polytope, EmptySet>;

    static Region box(Box b);
    static Region interval(double lo, double hi, bool lo_open, bool hi_open);
    static Region closed_interval(double lo, double hi) { return interval(lo, hi, false, false); }
    static Region open_interval(double lo, double hi) { return interval(lo, hi, true, true); }
    static Region closed_box(const Vector& lo, const Vector& hi);
    static Region open_box(const Vector& lo, const Vector& hi);
    static Region whole(std::size_t n);
    static Region half_space(Vector normal, double offset, bool open);
    static Region polytope(std::vector<Vector> vertices);
    static Region empty(std::size_t n);

    std::size_t dim() const noexcept { return n_; }
    const Shape& shape() const noexcept { return shape_; }
    const Box* as_box() const noexcept { return std::get_if<Box>(&shape_); }
    bool is_empty() const;
    bool is_whole() const;
    bool is_bounded() const;
    // True when the region equals its interior. In R^n for these shapes the
    // algebraic and topological notions coincide.
    bool is_open() const;
    bool is_closed() const;
    bool algebraically_open() const { return is_open(); }

    bool contains(std::span<const double> x) const;
    bool interior_contains(std::span<const double> x) const;
    // Sup-norm distance to the closure; boxes and half-spaces only (polytopes
    // report 0 inside, +inf outside).
    double distance(std::span<const double> x) const;

    Region closure() const;
    Region interior() const;
    // Exact for box/box and anything with the whole space or the empty set.
    std::optional<Region> intersect(const Region& other) const;

    // Literal syntax understood by the spec parser.
    std::string to_string() const;

private:
    Region(std::size_t n, Shape s) : n_(n), shape_(std::move(s)) {}
    void check_dim(std::span<const double> x) const;

    std::size_t n_;
    Shape shape_;
};

struct GridSpec {
    std::size_t resolution = 41;       // primal points per axis
    double dual_bound = 10.0;          // X* is clipped to [-dual_bound, dual_bound]^n
    std::size_t dual_resolution = 41;  // dual points per axis
    double ambient_bound = 10.0;       // unbounded primal axes are clipped to [-ambient_bound, ambient_bound]

    void validate() const;
};

// k points from lo to hi; an open end is offset by one step, the step being
// span / (k - 1 + number of open ends).
std::vector<double> axis_lattice(double lo, double hi, std::size_t k, bool lo_open, bool hi_open);

// Deterministic lattice of points of R. Boxes use the per-axis rule above;
// half-spaces and polytopes filter the lattice of their clipped bounding box.
std::vector<Vector> grid_sample(const Region& r, const GridSpec& g);

// Lattice of [-dual_bound, dual_bound]^n.
std::vector<Vector> dual_lattice(std::size_t n, const GridSpec& g);

// x* in N_C(x) within tol.eps_eq, i.e. <x' - x, x*> <= eps_eq for all x' in C.
// False outside C. Throws Error for regions that are not closed.
bool normal_cone_contains(const Region& c, std::span<const double> x, std::span<const double> xstar,
                          const Tolerance& tol);

}  // namespace fitzop
