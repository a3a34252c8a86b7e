#include <doctest.h>

#include "fitzop/core.hpp"
#include "fitzop/regions.hpp"

#include <random>

using namespace fitzop;

namespace {

PrimalDualPoint pd(Vector x, Vector xs) { return {std::move(x), std::move(xs)}; }

}  // namespace

TEST_CASE("coupling") {
    CHECK(coupling(pd({1, 2}, {3, 4})) == 11.0);
    CHECK(coupling(pd({0, 0}, {5, -7})) == 0.0);
    CHECK(coupling(PrimalDualPoint::scalar(2, 1)) == 2.0);
}

TEST_CASE("natural pairing") {
    CHECK(natural_pairing(pd({1, 0}, {0, 1}), pd({0, 1}, {1, 0})) == 2.0);
    const auto z = pd({1, 2}, {3, 4});
    CHECK(natural_pairing(z, z) == 22.0);
    CHECK(natural_pairing(z, PrimalDualPoint::zero(2)) == 0.0);
}

TEST_CASE("monotone gap") {
    CHECK(monotone_gap(PrimalDualPoint::scalar(2, 1), PrimalDualPoint::scalar(1, 1)) == 0.0);
    CHECK(monotone_gap(PrimalDualPoint::scalar(0, 0), PrimalDualPoint::scalar(1, -1)) == -1.0);
    // skew map J(a, b) = (-b, a)
    CHECK(monotone_gap(pd({1, 0}, {0, 1}), pd({0, 1}, {-1, 0})) == 0.0);
}

TEST_CASE("gap identity, symmetry and self pairing on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 3;
        Vector a(n), b(n), c(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            c[i] = u(rng);
            d[i] = u(rng);
        }
        const PrimalDualPoint z(a, b), w(c, d);
        CHECK(std::abs(monotone_gap(z, w) - (coupling(z) + coupling(w) - natural_pairing(z, w))) <= 1e-12);
        CHECK(std::abs(natural_pairing(z, z) - 2 * coupling(z)) <= 1e-12);
        CHECK(monotone_gap(z, w) == doctest::Approx(monotone_gap(w, z)).epsilon(1e-14));
    }
}

TEST_CASE("extended reals") {
    const ExtReal inf = ExtReal::pos_inf();
    CHECK((inf + ExtReal(3.0)).is_pos_inf());
    CHECK((ExtReal::neg_inf() + ExtReal(-1.0)).is_neg_inf());
    CHECK_THROWS_AS(inf + ExtReal::neg_inf(), std::domain_error);
    CHECK(ExtReal(1.0) < inf);
    CHECK(sup_of({}).is_neg_inf());
    CHECK(inf_of({}).is_pos_inf());
    CHECK(inf.to_string() == "inf");
    CHECK(ExtReal::neg_inf().to_string() == "-inf");
}

TEST_CASE("tolerance validation") {
    CHECK_NOTHROW(Tolerance{}.validate());
    CHECK_THROWS_AS((Tolerance{0.0, 1e-6, 1e-6}.validate()), Error);
    CHECK_THROWS_AS((Tolerance{1e-3, 1e-6, 1e-6}.validate()), Error);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(-kInf) == "-inf");
    CHECK(format_number(1e-6) == "1e-06");
}

TEST_CASE("region membership") {
    const Region open = Region::open_interval(0, 1);
    CHECK(open.contains(Vector{0.5}));
    CHECK_FALSE(open.contains(Vector{0.0}));
    CHECK(Region::closed_box({-1, -1}, {1, 1}).contains(Vector{1, 1}));
    CHECK(Region::polytope({{0, 0}, {1, 0}, {0, 1}}).contains(Vector{0.2, 0.2}));
    CHECK_FALSE(Region::polytope({{0, 0}, {1, 0}, {0, 1}}).contains(Vector{0.6, 0.6}));
    CHECK_THROWS_AS(open.contains(Vector{0.5, 0.5}), DimensionError);
}

TEST_CASE("region interior") {
    const Region c = Region::closed_interval(-1, 1);
    CHECK_FALSE(c.interior_contains(Vector{1.0}));
    CHECK(c.interior_contains(Vector{0.99}));
    CHECK_FALSE(Region::half_space({1, 0}, 1, false).interior_contains(Vector{1, 0}));
}

TEST_CASE("region flags and closure") {
    CHECK(Region::open_box({0, 0}, {1, 1}).algebraically_open());
    CHECK_FALSE(Region::closed_interval(0, 1).is_open());
    CHECK(Region::open_interval(0, 1).closure().contains(Vector{0.0}));
    CHECK(Region::empty(2).is_empty());
    CHECK(Region::whole(2).is_whole());
    CHECK_THROWS_AS(Region::closed_interval(1, 0), Error);
}

TEST_CASE("grid sample lattices") {
    GridSpec g;
    g.resolution = 5;
    CHECK(grid_sample(Region::closed_interval(0, 1), g) == std::vector<Vector>{{0}, {0.25}, {0.5}, {0.75}, {1}});
    g.resolution = 4;
    const auto open = grid_sample(Region::open_interval(0, 1), g);
    REQUIRE(open.size() == 4);
    const double expect[] = {0.2, 0.4, 0.6, 0.8};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(open[i][0] == doctest::Approx(expect[i]).epsilon(1e-15));
    g.resolution = 3;
    const auto sq = grid_sample(Region::closed_box({0, 0}, {1, 1}), g);
    CHECK(sq.size() == 9);
    CHECK(std::find(sq.begin(), sq.end(), Vector{1, 1}) != sq.end());
    CHECK(grid_sample(Region::empty(1), g).empty());
}

TEST_CASE("grid samples lie in the region") {
    const GridSpec g;
    const std::vector<Region> regions = {
        Region::open_interval(-1, 2),
        Region::interval(0, 1, true, false),
        Region::whole(1),
        Region::open_box({0, -1}, {1, 1}),
        Region::half_space({1, 1}, 0.5, true),
        Region::polytope({{0, 0}, {1, 0}, {0, 1}}),
    };
    for (const auto& r : regions) {
        const auto pts = grid_sample(r, g);
        CHECK_FALSE(pts.empty());
        for (const auto& x : pts)
            CHECK(r.contains(x));
    }
}

TEST_CASE("box inclusions") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const Region r = Region::box({{Bound::open(-1), Bound::closed(0)}, {Bound::closed(1), Bound::open(1)}});
    for (int i = 0; i < 1000; ++i) {
        const Vector x{u(rng), u(rng)};
        if (r.interior_contains(x)) CHECK(r.contains(x));
        if (r.contains(x)) CHECK(r.closure().contains(x));
    }
}

TEST_CASE("normal cone membership") {
    const Region c = Region::closed_interval(-1, 1);
    const Tolerance tol;
    CHECK(normal_cone_contains(c, Vector{1}, Vector{5}, tol));
    CHECK_FALSE(normal_cone_contains(c, Vector{0.5}, Vector{1}, tol));
    CHECK(normal_cone_contains(c, Vector{-1}, Vector{-3}, tol));
    CHECK_FALSE(normal_cone_contains(c, Vector{2}, Vector{0}, tol));
    for (const auto& x : grid_sample(Region::closed_box({-1, 0}, {1, 2}), GridSpec{}))
        CHECK(normal_cone_contains(Region::closed_box({-1, 0}, {1, 2}), x, Vector{0, 0}, tol));
    CHECK_THROWS_AS(normal_cone_contains(Region::open_interval(0, 1), Vector{0.5}, Vector{0}, tol), Error);
}

TEST_CASE("region literal round trip") {
    CHECK(Region::interval(0, 1, true, false).to_string() == "(0,1]");
    CHECK(Region::whole(1).to_string() == "(-inf,inf)");
}
