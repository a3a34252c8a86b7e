#include <doctest.h>

#include "fitzop/sumcalc.hpp"

using namespace fitzop;

namespace {

PrimalDualPoint pt(double x, double xs) { return PrimalDualPoint::scalar(x, xs); }

const GridSpec kGrid;
const Tolerance kTol;

// psi of N_[0,2] when V contains [0,2]: iota_[0,2](x) + sigma_[0,2](y).
ExtReal psi_nc02(double x, double y) {
    if (x < 0 || x > 2) return ExtReal::pos_inf();
    return ExtReal(y > 0 ? 2 * y : 0.0);
}

}  // namespace

TEST_CASE("adding a normal cone") {
    const auto s = add_normal_cone(make_abs_subdiff(1.0), Region::closed_interval(0, 2), kGrid, kTol);
    CHECK(s->graph_contains(pt(0, -3), kTol));
    CHECK(s->graph_contains(pt(1, 1), kTol));
    CHECK(s->graph_contains(pt(2, 7), kTol));
    CHECK_FALSE(s->graph_contains(pt(1, 2), kTol));
    CHECK_FALSE(s->graph_contains(pt(-0.5, -1), kTol));
    try {
        add_normal_cone(make_finite_graph(1, {pt(5, 0)}), Region::closed_interval(0, 2), kGrid, kTol);
        FAIL("expected a gate error");
    } catch (const UnsatisfiedHypothesis& e) {
        CHECK(e.hypothesis() == "D(A) meets int C");
    }
}

TEST_CASE("pair sums") {
    const auto a = make_abs_subdiff(1.0);
    const auto nc = make_normal_cone_box(Region::closed_interval(0, 2));
    const auto via_nc = add_normal_cone(a, Region::closed_interval(0, 2), kGrid, kTol);
    const SumResult pair = operator_sum(a, nc, kGrid, kTol);
    CHECK_FALSE(pair.empty);
    CHECK(pair.op->enumerate_graph(kGrid, kTol) == via_nc->enumerate_graph(kGrid, kTol));
    for (const auto& z : scan_grid(Region::closed_interval(-1, 3), kGrid))
        CHECK(pair.op->graph_contains(z, kTol) == via_nc->graph_contains(z, kTol));

    const auto origin = make_finite_graph(1, {pt(0, 0)});
    const SumResult oo = operator_sum(origin, origin, kGrid, kTol);
    CHECK(oo.op->enumerate_graph(kGrid, kTol) == std::vector<PrimalDualPoint>{pt(0, 0)});

    const SumResult disjoint = operator_sum(origin, make_finite_graph(1, {pt(1, 1)}), kGrid, kTol);
    CHECK(disjoint.empty);
}

TEST_CASE("psi of a restricted normal cone") {
    const Region c = Region::closed_interval(0, 2);
    CHECK(psi_normal_cone_box(c, Region::whole(1), pt(1, 3)) == ExtReal(6.0));
    CHECK(psi_normal_cone_box(c, Region::whole(1), pt(1, -3)) == ExtReal(0.0));
    CHECK(psi_normal_cone_box(c, Region::whole(1), pt(3, 0)).is_pos_inf());
    // On (0,2) neither end of C is in V, so only x* = 0 is allowed.
    CHECK(psi_normal_cone_box(c, Region::open_interval(0, 2), pt(1, 0)) == ExtReal(0.0));
    CHECK(psi_normal_cone_box(c, Region::open_interval(0, 2), pt(1, 1)).is_pos_inf());
    CHECK(psi_normal_cone_box(c, Region::open_interval(0, 2), pt(0, 0)) == ExtReal(0.0));
}

TEST_CASE("rho square values") {
    const RhoSquareEvaluator rho(make_abs_subdiff(1.0), make_normal_cone_box(Region::closed_interval(0, 2)),
                                 Region::closed_interval(-1, 3), kGrid, kTol);
    CHECK(rho.exact_second_term());
    const RhoValue a = rho(pt(0, -3));
    CHECK(std::abs(a.value.value()) <= kTol.eps_eq);
    CHECK(a.split == Vector{-1});
    const RhoValue b = rho(pt(1, 1));
    CHECK(std::abs(b.value.value() - 1) <= kTol.eps_eq);
    CHECK(b.split == Vector{1});
    CHECK(rho(pt(0, 3)).value >= ExtReal(4.0 - kTol.eps_eq));
    CHECK(rho(pt(-0.5, 0)).value.is_pos_inf());
}

TEST_CASE("split optimality against a finer dual lattice") {
    const auto a = make_abs_subdiff(1.0);
    const Region v = Region::closed_interval(-1, 3);
    const RhoSquareEvaluator rho(a, make_normal_cone_box(Region::closed_interval(0, 2)), v, kGrid, kTol);
    Envelope env;
    for (const auto& w : restrict(a, v, kGrid, kTol).op->enumerate_graph(kGrid, kTol))
        env.points.push_back({w, coupling(w)});
    GridSpec fine = kGrid;
    fine.dual_resolution = 401;
    std::vector<Vector> us = dual_lattice(1, fine);
    for (const auto& p : env.points)
        us.push_back(p.point.xstar());
    GridSpec probe = kGrid;
    probe.resolution = 9;
    probe.dual_resolution = 9;
    for (const auto& z : scan_grid(v, probe)) {
        const double x = z.x()[0], y = z.xstar()[0];
        ExtReal best = ExtReal::pos_inf();
        for (const auto& u : us) {
            const ExtReal first = envelope_eval(env, pt(x, u[0]));
            if (first.is_pos_inf()) continue;
            best = min(best, first + psi_nc02(x, y - u[0]));
        }
        const RhoValue r = rho(z);
        if (best.is_pos_inf()) {
            CHECK(r.value.is_pos_inf());
            continue;
        }
        CHECK(std::abs(r.value.value() - best.value()) <= kTol.eps_eq);
        CHECK(std::abs(rho.split_value(z, r.split).value() - r.value.value()) <= 1e-12);
    }
}

TEST_CASE("verifying the sum representative") {
    const auto a = make_abs_subdiff(1.0);
    const auto nc = make_normal_cone_box(Region::closed_interval(0, 2));
    const Verdict v = verify_sum_representative(a, nc, Region::closed_interval(-1, 3), kGrid, kTol);
    CHECK(v.value);
    CHECK(v.points_scanned > 0);
    CHECK(verify_sum_representative(a, nc, Region::open_interval(0, 2), kGrid, kTol, true).value);
    CHECK_THROWS_AS(verify_sum_representative(make_finite_graph(1, {pt(0, 1), pt(1, 0)}), nc,
                                              Region::closed_interval(-1, 3), kGrid, kTol),
                    UnsatisfiedHypothesis);
}

TEST_CASE("rho square stays above the coupling") {
    const auto a = make_abs_subdiff(1.0);
    const Region v = Region::closed_interval(-1, 3);
    const RhoSquareEvaluator rho(a, make_normal_cone_box(Region::closed_interval(0, 2)), v, kGrid, kTol);
    for (const auto& z : scan_grid(v, kGrid))
        CHECK(rho(z).value >= ExtReal(coupling(z) - kTol.eps_eq));
}

TEST_CASE("m.r. sets of A + N_C and of A restricted to C") {
    const MrSetComparison abs =
        compare_sum_and_restriction(make_abs_subdiff(1.0), Region::closed_interval(0, 2), kGrid, kTol);
    CHECK(abs.equal);
    CHECK(abs.mr_sum == abs.mr_restricted);
    CHECK(abs.points == grid_sample(Region::closed_interval(0, 2), kGrid).size() * 41);

    const MrSetComparison lin =
        compare_sum_and_restriction(make_flat(Region::whole(1), {0.5}), Region::closed_interval(-1, 1), kGrid, kTol);
    CHECK(lin.equal);
}
