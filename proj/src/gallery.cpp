#include "fitzop/gallery.hpp"

#include "fitzop/classify.hpp"
#include "fitzop/report.hpp"
#include "fitzop/sumcalc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fitzop {
namespace {

using nlohmann::json;

struct Context {
    GridSpec g;    // resolution 41, dual_bound 10
    Tolerance tol;  // 1e-9, 1e-6, 1e-6
    std::string scenario;
    std::vector<Claim> claims;

    Claim& add(std::string name, bool expected, bool observed, std::string detail = {}) {
        Claim c;
        c.scenario = scenario;
        c.name = std::move(name);
        c.expected = expected;
        c.observed = observed;
        c.detail = std::move(detail);
        claims.push_back(std::move(c));
        return claims.back();
    }

    Claim& add(std::string name, bool expected, const Verdict& v) {
        std::string detail = "witnesses " + std::to_string(v.witness_count);
        if (!v.witnesses.empty()) detail += ", first " + format_point(v.witnesses.front().z);
        return add(std::move(name), expected, v.value, std::move(detail));
    }

    Claim& add(std::string name, bool expected, const Verdict& v, const PrimalDualPoint& witness) {
        Claim& c = add(std::move(name), expected, v);
        c.witness = witness;
        c.witness_found = v.has_witness(witness);
        return c;
    }
};

PrimalDualPoint pt(double x, double xs) { return PrimalDualPoint::scalar(x, xs); }

void vbar(Context& cx) {
    const auto t = make_flat(Region::open_interval(0, 1), {0.0});
    cx.add("V = (0,1) identifies T = (0,1) x {0}", true, check_identifies(t, Region::open_interval(0, 1), cx.g, cx.tol));
    cx.add("closure [0,1] locates T", false,
           check_locates(t, Region::closed_interval(0, 1), std::nullopt, cx.g, cx.tol), pt(0, 0));
    cx.add("(0,0) is m.r. to T", true, mr_test(t, Region::whole(1), pt(0, 0), cx.tol, cx.g));
    cx.add("0 is in D(T)", false, t->domain_contains(Vector{0.0}, cx.tol));
}

void point_complement(Context& cx) {
    const auto t = make_point_complement({0.0});
    const Region v = Region::open_interval(-1, 1);
    cx.add("(-1,1) locates {0} x (X* \\ {0})", true, check_locates(t, v, std::nullopt, cx.g, cx.tol));
    cx.add("(-1,1) identifies {0} x (X* \\ {0})", false, check_identifies(t, v, cx.g, cx.tol), pt(0, 0));
    const RegionFamily f = explicit_family(
        t, {Region::open_interval(-1, 1), Region::open_interval(-0.5, 0.5), Region::open_interval(-0.25, 0.25)}, cx.g,
        cx.tol);
    const Region amb = Region::closed_interval(-1, 1);
    cx.add("locatable over open intervals around 0", true, family_scan(t, f, Property::Locates, amb, cx.g, cx.tol));
    cx.add("identifiable over open intervals around 0", false,
           family_scan(t, f, Property::Identifies, amb, cx.g, cx.tol), pt(0, 0));
}

void normal_cone(Context& cx) {
    const Region c = Region::closed_interval(-1, 1);
    const Region int_c = Region::open_interval(-1, 1);
    const auto nc = make_normal_cone_box(c);
    const auto flat = make_flat(int_c, {0.0});
    cx.add("N_C is int C-NI", true, check_vni(nc, int_c, cx.g, cx.tol));

    const PhiEvaluator phi_restricted(nc, int_c, cx.g, cx.tol);
    const PhiEvaluator phi_flat(flat, Region::whole(1), cx.g, cx.tol);
    std::size_t mismatches = 0;
    for (const auto& z : scan_grid(Region::whole(1), cx.g))
        if (phi_restricted(z) != phi_flat(z)) ++mismatches;
    cx.add("phi of N_C|int C equals phi of int C x {0}", true, mismatches == 0,
           "mismatches " + std::to_string(mismatches));

    const Verdict ni = check_ni(flat, Region::whole(1), cx.g, cx.tol);
    Claim& claim = cx.add("int C x {0} is NI", false, ni, pt(2, 3));
    const auto it = std::find_if(ni.witnesses.begin(), ni.witnesses.end(),
                                 [](const Witness& w) { return w.z == pt(2, 3); });
    if (it != ni.witnesses.end()) {
        claim.witness_found = it->value == ExtReal(3.0) && it->coupling == 6.0;
        claim.detail += ", phi(2,3) = " + it->value.to_string() + ", c(2,3) = " + format_number(it->coupling);
    }
    cx.add("N_C is maximal on [-2,2]", true, check_maximal_on_grid(nc, Region::closed_interval(-2, 2), cx.g, cx.tol));
}

void reprez(Context& cx) {
    // (X \ {0}) x {0}, sampled on the lattices used below.
    std::vector<Vector> xs = grid_sample(Region::closed_interval(-2, 2), cx.g);
    for (auto& x : grid_sample(Region::open_interval(1, 2), cx.g))
        xs.push_back(std::move(x));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<PrimalDualPoint> pts;
    for (const auto& x : xs)
        if (x[0] != 0.0) pts.emplace_back(x, Vector{0.0});
    const auto t = make_finite_graph(1, std::move(pts));

    const ConvexFn h = ConvexFn::plus_indicator(ConvexFn::constant(1, 0.0), Region::whole(1),
                                                Region::closed_interval(0, 0));
    const RepresentativeReport rep = is_representative(h, t, Region::closed_interval(-2, 2), cx.g, cx.tol);
    Claim& c = cx.add("iota of X x {0} represents (X \\ {0}) x {0}", false, rep.is_representative,
                      "mismatches " + std::to_string(rep.mismatch_witnesses.size()));
    c.witness = pt(0, 0);
    c.witness_found = std::find(rep.mismatch_witnesses.begin(), rep.mismatch_witnesses.end(), pt(0, 0)) !=
                      rep.mismatch_witnesses.end();
    cx.add("(X \\ {0}) x {0} is (1,2)-representable", true,
           check_v_representable(t, Region::open_interval(1, 2), cx.g, cx.tol));
}

void maximal(Context& cx) {
    const Region amb = Region::closed_interval(-2, 2);
    cx.add("d|.| is maximal on [-2,2]", true, check_maximal_on_grid(make_abs_subdiff(1.0), amb, cx.g, cx.tol));
    const auto sign = make_finite_graph(1, {pt(-1, -1), pt(0, 0), pt(1, 1)});
    cx.add("three-point sign graph is maximal on [-2,2]", false, check_maximal_on_grid(sign, amb, cx.g, cx.tol),
           pt(0.5, 0));
    cx.add("X x {0} is maximal on [-2,2]", true,
           check_maximal_on_grid(make_flat(Region::whole(1), {0.0}), amb, cx.g, cx.tol));
    cx.add("d|.| is locally NI over dyadic boxes of [-2,2]", true,
           family_scan(make_abs_subdiff(1.0), dyadic_family(make_abs_subdiff(1.0), amb, 3, cx.g, cx.tol),
                       Property::VNI, amb, cx.g, cx.tol));
}

void sum(Context& cx) {
    const auto a = make_abs_subdiff(1.0);
    const Region c = Region::closed_interval(0, 2);
    const auto nc = make_normal_cone_box(c);
    cx.add("rho^sq represents d|.| + N_[0,2] on [-1,3]", true,
           verify_sum_representative(a, nc, Region::closed_interval(-1, 3), cx.g, cx.tol));
    cx.add("rho^sq represents d|.| + N_[0,2] on (0,2), pair-sum construction", true,
           verify_sum_representative(a, nc, Region::open_interval(0, 2), cx.g, cx.tol, true));

    const auto via_nc = add_normal_cone(a, c, cx.g, cx.tol);
    const auto via_pair = operator_sum(a, nc, cx.g, cx.tol).op;
    cx.add("A + N_C and the pair sum have the same sampled graph", true,
           via_nc->enumerate_graph(cx.g, cx.tol) == via_pair->enumerate_graph(cx.g, cx.tol));
    cx.add("(0,-3) is in d|.| + N_[0,2]", true, via_nc->graph_contains(pt(0, -3), cx.tol));
    cx.add("(1,1) is in d|.| + N_[0,2]", true, via_nc->graph_contains(pt(1, 1), cx.tol));

    const RhoSquareEvaluator rho(a, nc, Region::closed_interval(-1, 3), cx.g, cx.tol);
    const RhoValue r1 = rho(pt(0, -3));
    cx.add("rho^sq(0,-3) = c(0,-3) = 0", true, r1.value.is_finite() && std::abs(r1.value.value()) <= cx.tol.eps_eq,
           "value " + r1.value.to_string() + ", split " + format_vector(r1.split));
    const RhoValue r2 = rho(pt(1, 1));
    cx.add("rho^sq(1,1) = c(1,1) = 1", true,
           r2.value.is_finite() && std::abs(r2.value.value() - 1.0) <= cx.tol.eps_eq,
           "value " + r2.value.to_string() + ", split " + format_vector(r2.split));
    const RhoValue r3 = rho(pt(0, 3));
    cx.add("rho^sq(0,3) >= 4 > c(0,3)", true, r3.value >= ExtReal(4.0 - cx.tol.eps_eq),
           "value " + r3.value.to_string());
}

void tnc(Context& cx) {
    const MrSetComparison cmp =
        compare_sum_and_restriction(make_abs_subdiff(1.0), Region::closed_interval(0, 2), cx.g, cx.tol);
    Claim& c = cx.add("m.r. sets of d|.| + N_C and d|.| restricted to C agree on C x [-10,10]", true, cmp.equal,
                      "points " + std::to_string(cmp.points) + ", m.r. " + std::to_string(cmp.mr_sum) + " vs " +
                          std::to_string(cmp.mr_restricted));
    if (!cmp.equal) c.detail += ", first difference " + format_point(cmp.differences.front());
}

using Scenario = std::pair<std::string, std::function<void(Context&)>>;

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> all = {
        {"vbar", vbar},       {"point-complement", point_complement}, {"normal-cone", normal_cone},
        {"reprez", reprez},   {"maximal", maximal},                   {"sum", sum},
        {"tnc", tnc},
    };
    return all;
}

}  // namespace

bool GalleryResult::all_passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.passed(); });
}

const std::vector<std::string>& gallery_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : scenarios())
            out.push_back(s.first);
        return out;
    }();
    return names;
}

GalleryResult run_gallery(std::string_view name) {
    Context cx;
    bool matched = false;
    for (const auto& [id, fn] : scenarios()) {
        if (name != "all" && name != id) continue;
        matched = true;
        cx.scenario = id;
        fn(cx);
    }
    if (!matched) throw Error("unknown gallery '" + std::string(name) + "'");

    GalleryResult out;
    out.claims = std::move(cx.claims);
    json claims = json::array();
    std::size_t passed = 0;
    for (const auto& c : out.claims) {
        json j;
        j["scenario"] = c.scenario;
        j["claim"] = c.name;
        j["expected"] = c.expected;
        j["observed"] = c.observed;
        j["result"] = c.passed() ? "PASS" : "FAIL";
        if (c.witness) {
            j["witness"] = format_point(*c.witness);
            j["witness_found"] = c.witness_found;
        }
        if (!c.detail.empty()) j["detail"] = c.detail;
        claims.push_back(std::move(j));
        passed += c.passed() ? 1 : 0;
    }
    json report;
    report["gallery"] = std::string(name);
    report["grid"] = grid_json(cx.g);
    report["tolerance"] = tolerance_json(cx.tol);
    report["claims"] = claims;
    report["passed"] = passed;
    report["failed"] = out.claims.size() - passed;
    report["status"] = passed == out.claims.size() ? "pass" : "fail";
    out.report = emit_report(report);
    return out;
}

}  // namespace fitzop
