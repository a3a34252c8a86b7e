#include <doctest.h>

#include "fitzop/fitzpatrick.hpp"

#include <random>

using namespace fitzop;

namespace {

PrimalDualPoint pt(double x, double xs) { return PrimalDualPoint::scalar(x, xs); }

OperatorHandle sign_graph() { return make_finite_graph(1, {pt(-1, -1), pt(0, 0), pt(1, 1)}); }

// Pairing sorted primals with sorted duals gives a monotone graph on R.
OperatorHandle random_monotone(std::mt19937_64& rng, std::size_t m) {
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = u(rng);
        ys[i] = u(rng);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<PrimalDualPoint> pts;
    for (std::size_t i = 0; i < m; ++i)
        pts.push_back(pt(xs[i], ys[i]));
    return make_finite_graph(1, std::move(pts));
}

GridSpec small_grid() {
    GridSpec g;
    g.resolution = 21;
    g.dual_resolution = 21;
    g.dual_bound = 3;
    return g;
}

}  // namespace

TEST_CASE("phi examples") {
    const auto flat = make_flat(Region::open_interval(-1, 1), {0.0});
    CHECK(phi_eval(flat, Region::whole(1), pt(0.5, 2)).value == ExtReal(2.0));
    const auto single = make_finite_graph(1, {pt(1.5, -2)});
    CHECK(phi_eval(single, Region::whole(1), pt(1.5, -2)).value == ExtReal(coupling(pt(1.5, -2))));
    CHECK(phi_eval(sign_graph(), Region::whole(1), pt(0, 0)).value == ExtReal(0.0));
    CHECK(phi_eval(sign_graph(), Region::open_interval(5, 6), pt(0, 0)).value.is_neg_inf());
}

TEST_CASE("psi examples") {
    CHECK(psi_eval(sign_graph(), Region::whole(1), pt(0.5, 0.5)).value.value() == doctest::Approx(0.5));
    CHECK(psi_eval(sign_graph(), Region::whole(1), pt(3, 0)).value.is_pos_inf());
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = random_monotone(rng, 6);
        for (const auto& w : t->enumerate_graph(GridSpec{}, Tolerance{}))
            CHECK(std::abs(psi_eval(t, Region::whole(1), w).value.value() - coupling(w)) <= 1e-9);
    }
}

TEST_CASE("closed forms agree with max-affine on sampled graphs") {
    // The max over a sampled subgraph can only be smaller.
    const GridSpec g;
    const Tolerance tol;
    const Region v = Region::open_interval(-0.75, 1.5);
    for (const auto& t : {make_abs_subdiff(1.0), make_flat(Region::open_interval(-1, 1), {0.5}),
                          make_normal_cone_box(Region::closed_interval(-1, 1))}) {
        const PhiEvaluator closed(t, v, g, tol);
        REQUIRE(closed.closed_form());
        const ConvexFn sampled = ConvexFn::fitzpatrick_of(1, restrict(t, v, g, tol).op->enumerate_graph(g, tol));
        for (const auto& z : scan_grid(Region::closed_interval(-2, 2), small_grid()))
            CHECK(sampled(z) <= closed(z) + ExtReal(1e-9));
    }
}

TEST_CASE("phi below psi and psi above the coupling for monotone graphs") {
    std::mt19937_64 rng(2);
    const GridSpec g = small_grid();
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = random_monotone(rng, 3 + trial % 5);
        const PhiEvaluator phi(t, Region::whole(1), g, tol);
        const PsiEvaluator psi(t, Region::whole(1), g, tol);
        for (const auto& z : scan_grid(Region::closed_interval(-2, 2), g)) {
            const ExtReal p = psi(z);
            CHECK(phi(z) <= p + ExtReal(tol.eps_eq));
            CHECK(p >= ExtReal(coupling(z) - tol.eps_eq));
        }
    }
}

TEST_CASE("phi grows with the region") {
    const GridSpec g = small_grid();
    const Tolerance tol;
    const auto t = make_abs_subdiff(1.0);
    const PhiEvaluator small(t, Region::open_interval(0, 1), g, tol);
    const PhiEvaluator large(t, Region::open_interval(-1, 2), g, tol);
    const auto fg = sign_graph();
    const PhiEvaluator fsmall(fg, Region::closed_interval(0, 1), g, tol);
    const PhiEvaluator flarge(fg, Region::whole(1), g, tol);
    for (const auto& z : scan_grid(Region::closed_interval(-2, 2), g)) {
        CHECK(small(z) <= large(z));
        CHECK(fsmall(z) <= flarge(z));
    }
}

TEST_CASE("phi is at least the coupling on D(T) x X*") {
    std::mt19937_64 rng(6);
    const GridSpec g = small_grid();
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = random_monotone(rng, 5);
        const PhiEvaluator phi(t, Region::whole(1), g, tol);
        for (const auto& w : t->enumerate_graph(g, tol))
            for (const auto& y : dual_lattice(1, g)) {
                const PrimalDualPoint z(w.x(), y);
                CHECK(phi(z) >= ExtReal(coupling(z) - tol.eps_eq));
            }
    }
}

TEST_CASE("band of psi lies in the band of its conjugate") {
    std::mt19937_64 rng(8);
    const GridSpec g = small_grid();
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = random_monotone(rng, 3 + trial % 6);
        const PsiEvaluator psi(t, Region::whole(1), g, tol);
        for (const auto& z : scan_grid(Region::closed_interval(-2, 2), g)) {
            const ExtReal h = psi(z);
            if (!h.is_finite() || std::abs(h.value() - coupling(z)) > tol.eps_eq) continue;
            const ConjugateValue hc = square_conjugate_eval(psi.function(), z, g);
            CHECK_FALSE(hc.approximate);
            CHECK(std::abs(hc.value.value() - coupling(z)) <= 10 * tol.eps_eq);
        }
    }
}

TEST_CASE("representative examples") {
    const Tolerance tol;
    const GridSpec g = small_grid();
    const Region v = Region::closed_interval(-1, 1);
    const RepresentativeReport rep =
        is_representative(ConvexFn::penot_of(1, {pt(-1, -1), pt(0, 0), pt(1, 1)}), sign_graph(), v, g, tol);
    CHECK(rep.is_representative);
    CHECK(rep.points_scanned > 0);

    const auto origin = make_finite_graph(1, {pt(0, 0)});
    CHECK(is_representative(ConvexFn::penot_of(1, {pt(0, 0)}), origin, Region::whole(1), g, tol).is_representative);

    CHECK_THROWS_AS(is_representative(ConvexFn::constant(1, -100), origin, v, g, tol), NotRepresentativeClass);
}

TEST_CASE("non-monotone graphs put phi above the coupling at a graph point") {
    const auto t = make_finite_graph(1, {pt(0, 1), pt(1, 0)});
    const PhiEvaluator phi(t, Region::whole(1));
    bool above = false;
    for (const auto& w : t->enumerate_graph(GridSpec{}, Tolerance{}))
        above = above || phi(w) > ExtReal(coupling(w) + 1e-6);
    CHECK(above);
}

TEST_CASE("scan grid order") {
    GridSpec g;
    g.resolution = 2;
    g.dual_resolution = 3;
    g.dual_bound = 1;
    const auto pts = scan_grid(Region::closed_interval(0, 1), g);
    REQUIRE(pts.size() == 6);
    CHECK(pts.front() == pt(0, -1));
    CHECK(pts[1] == pt(0, 0));
    CHECK(pts.back() == pt(1, 1));
}
