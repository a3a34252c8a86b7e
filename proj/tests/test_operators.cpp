#include <doctest.h>

#include "fitzop/fitzpatrick.hpp"
#include "fitzop/operators.hpp"

#include <random>

using namespace fitzop;

namespace {

PrimalDualPoint pt(double x, double xs) { return PrimalDualPoint::scalar(x, xs); }

OperatorHandle sign_graph() { return make_finite_graph(1, {pt(-1, -1), pt(0, 0), pt(1, 1)}); }

// Pairing sorted primals with sorted duals gives a monotone graph on R.
std::vector<PrimalDualPoint> random_monotone_1d(std::mt19937_64& rng, std::size_t m) {
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<double> xs(m), ys(m);
    for (auto& v : xs)
        v = u(rng);
    for (auto& v : ys)
        v = u(rng);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<PrimalDualPoint> out;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(pt(xs[i], ys[i]));
    return out;
}

}  // namespace

TEST_CASE("building operators from specs") {
    OperatorSpec fg;
    fg.kind = "finite_graph";
    fg.points = {pt(0, 0)};
    const auto t = build_operator(fg);
    CHECK(t->enumerate_graph(GridSpec{}, Tolerance{}).size() == 1);

    OperatorSpec nc;
    nc.kind = "normal_cone_box";
    nc.box = Region::closed_interval(-1, 1);
    CHECK(build_operator(nc)->has_closed_form(Region::whole(1)));

    OperatorSpec flat;
    flat.kind = "flat";
    flat.region = Region::open_interval(0, 1);
    flat.wstar = {0.0};
    const auto f = build_operator(flat);
    CHECK(f->kind() == OperatorKind::Flat);
    CHECK(f->graph_contains(pt(0.5, 0), Tolerance{}));
    CHECK_FALSE(f->domain_contains(Vector{0.0}, Tolerance{}));

    OperatorSpec bad;
    bad.kind = "normal_cone_box";
    bad.box = Region::open_interval(-1, 1);
    CHECK_THROWS_AS(build_operator(bad), Error);
    bad.kind = "no_such_kind";
    CHECK_THROWS_AS(build_operator(bad), Error);
}

TEST_CASE("restriction") {
    const GridSpec g;
    const Tolerance tol;
    const Restricted r = restrict(sign_graph(), Region::open_interval(0, 2), g, tol);
    CHECK_FALSE(r.empty);
    CHECK(r.op->enumerate_graph(g, tol) == std::vector<PrimalDualPoint>{pt(1, 1)});

    const auto nc = make_normal_cone_box(Region::closed_interval(-1, 1));
    const Restricted inner = restrict(nc, Region::open_interval(-1, 1), g, tol);
    const auto flat = make_flat(Region::open_interval(-1, 1), {0.0});
    for (const auto& z : scan_grid(Region::closed_interval(-2, 2), g))
        CHECK(inner.op->graph_contains(z, tol) == flat->graph_contains(z, tol));

    CHECK(restrict(sign_graph(), Region::open_interval(3, 4), g, tol).empty);
    CHECK(restrict(nc, Region::open_interval(3, 4), g, tol).empty);
}

TEST_CASE("nested restriction equals restriction to the intersection") {
    const GridSpec g;
    const Tolerance tol;
    const Region v = Region::open_interval(-1.5, 1);
    const Region w = Region::closed_interval(-0.5, 2);
    const Region vw = *v.intersect(w);
    for (const auto& t : {sign_graph(), make_abs_subdiff(1.0), make_flat(Region::whole(1), {0.0})}) {
        const auto twice = restrict(restrict(t, v, g, tol).op, w, g, tol).op->enumerate_graph(g, tol);
        const auto once = restrict(t, vw, g, tol).op->enumerate_graph(g, tol);
        CHECK(twice == once);
    }
}

TEST_CASE("monotonicity") {
    CHECK(is_monotone(sign_graph(), Tolerance{}).value);
    const auto bad = make_finite_graph(1, {pt(0, 1), pt(1, 0)});
    const Verdict v = is_monotone(bad, Tolerance{});
    CHECK_FALSE(v.value);
    const MonotonicityResult m = pairwise_monotonicity({pt(0, 1), pt(1, 0)}, Tolerance{});
    CHECK(m.worst_gap == -1.0);
    REQUIRE(m.witness.has_value());
    CHECK(is_monotone(make_linear(2, {0, -1, 1, 0}), Tolerance{}).value);
    CHECK_THROWS_AS(make_linear(2, {-1, 0, 0, 1}), Error);
}

TEST_CASE("domain membership") {
    const Tolerance tol;
    const auto flat = make_flat(Region::open_interval(0, 1), {0.0});
    CHECK_FALSE(flat->domain_contains(Vector{0.0}, tol));
    CHECK(flat->domain_contains(Vector{0.5}, tol));
    CHECK(make_normal_cone_box(Region::closed_interval(-1, 1))->domain_contains(Vector{1.0}, tol));
    CHECK(sign_graph()->domain_contains(Vector{1e-7}, tol));
    CHECK_FALSE(sign_graph()->domain_contains(Vector{1e-5}, tol));
}

TEST_CASE("monotone relation examples") {
    const Tolerance tol;
    const auto flat = make_flat(Region::open_interval(0, 1), {0.0});
    CHECK(mr_test(flat, Region::whole(1), pt(0, 0), tol));
    CHECK(mr_test(sign_graph(), Region::whole(1), pt(2, 1), tol));
    CHECK_FALSE(mr_test(sign_graph(), Region::whole(1), pt(-1, 1), tol));
}

TEST_CASE("m.r. routes agree on finite graphs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    const Tolerance tol;
    const GridSpec g;
    for (int trial = 0; trial < 30; ++trial) {
        const auto t = make_finite_graph(1, random_monotone_1d(rng, 3 + trial % 6));
        const MrTester tester(t, Region::whole(1), g, tol);
        CHECK(tester.route() == MrTester::Route::PairwiseGaps);
        const PhiEvaluator phi(t, Region::whole(1), g, tol);
        for (int q = 0; q < 50; ++q) {
            const auto z = pt(u(rng), u(rng));
            CHECK(tester(z) == (phi(z) <= ExtReal(coupling(z) + tol.eps_eq)));
        }
    }
}

TEST_CASE("graph points are m.r. to a monotone operator") {
    std::mt19937_64 rng(4);
    const Tolerance tol;
    const GridSpec g;
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = make_finite_graph(1, random_monotone_1d(rng, 5));
        for (const auto& w : t->enumerate_graph(g, tol))
            CHECK(mr_test(t, Region::whole(1), w, tol));
    }
    const auto abs = make_abs_subdiff(1.0);
    for (const auto& w : abs->enumerate_graph(g, tol))
        CHECK(mr_test(abs, Region::whole(1), w, tol));
    const auto lin = make_linear(2, {1, -1, 1, 2});
    GridSpec coarse;
    coarse.resolution = 5;
    for (const auto& w : lin->enumerate_graph(coarse, tol))
        CHECK(mr_test(lin, Region::whole(2), w, tol));
}

TEST_CASE("normal cone closed form against ray sampling") {
    const Region c = Region::closed_interval(-1, 1);
    const auto nc = make_normal_cone_box(c);
    // Graph of N_C: (-1,1) x {0}, {-1} x (-inf,0], {1} x [0,inf).
    std::vector<PrimalDualPoint> rays;
    for (int i = 0; i <= 2000; ++i)
        rays.push_back(pt(-1 + i * 0.001, 0));
    for (int i = 0; i <= 4000; ++i) {
        const double t = i * 0.25;
        rays.push_back(pt(1, t));
        rays.push_back(pt(-1, -t));
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(-10, 10);
    const PhiEvaluator phi(nc, Region::whole(1));
    REQUIRE(phi.closed_form());
    for (int q = 0; q < 100; ++q) {
        const auto z = pt(ux(rng), uy(rng));
        double sampled = -kInf;
        for (const auto& w : rays)
            sampled = std::max(sampled, natural_pairing(z, w) - coupling(w));
        const ExtReal closed = phi(z);
        // Outside C the rays grow like x* + t (|x| - 1) up to t = 1000.
        if (closed.is_pos_inf())
            CHECK(sampled >= 1000.0 * (std::abs(z.x()[0]) - 1.0) - 10.0);
        else
            CHECK(std::abs(closed.value() - sampled) <= 1e-6);
    }
}

TEST_CASE("value sets") {
    const ValueSet a({DualBox{{-1}, {1}}});
    const ValueSet b = ValueSet::point({2});
    const ValueSet s = a.minkowski_sum(b);
    CHECK(s.contains(Vector{3}, 0));
    CHECK_FALSE(s.contains(Vector{3.5}, 0));
    const ValueSet punctured({DualBox{{-kInf}, {kInf}}}, Vector{0});
    CHECK_FALSE(punctured.contains(Vector{0}, 1e-6));
    CHECK(punctured.contains(Vector{0.5}, 1e-6));
    CHECK(punctured.minkowski_sum(b).excluded() == Vector{2});
}

TEST_CASE("linear operator quadratic route") {
    const Tolerance tol;
    const LinearOperator rot(2, {0, -1, 1, 0});
    // Skew: only graph points are m.r.
    CHECK(rot.monotonically_related(PrimalDualPoint({1, 2}, {-2, 1}), tol));
    CHECK_FALSE(rot.monotonically_related(PrimalDualPoint({1, 2}, {0, 0}), tol));
    const LinearOperator id(1, {1});
    CHECK(id.monotonically_related(pt(1, 1), tol));
    CHECK_FALSE(id.monotonically_related(pt(1, 0.5), tol));
}
