// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "fitzop/classify.hpp"
#include "fitzop/gallery.hpp"
#include "fitzop/sumcalc.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

using namespace fitzop;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

PrimalDualPoint pt(double x, double xs) { return PrimalDualPoint::scalar(x, xs); }

// Coordinates on the 41-point lattice of [-2,2], so graph points sit on the scan grid.
double lattice_coord(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> k(0, 40);
    return -2.0 + 0.1 * k(rng);
}

std::vector<PrimalDualPoint> random_monotone_graph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    if (n == 1) {
        std::vector<double> xs(m), ys(m);
        for (std::size_t i = 0; i < m; ++i) {
            xs[i] = lattice_coord(rng);
            ys[i] = lattice_coord(rng);
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        std::vector<PrimalDualPoint> out;
        for (std::size_t i = 0; i < m; ++i)
            out.push_back(pt(xs[i], ys[i]));
        out.erase(std::unique(out.begin(), out.end()), out.end());
        if (out.size() < 3) return random_monotone_graph(rng, n, m);
        return out;
    }
    // Rejection: keep a candidate only if it is monotonically related to all kept points.
    std::vector<PrimalDualPoint> out;
    for (int misses = 0; out.size() < m; ++misses) {
        if (misses == 1000) {
            out.clear();
            misses = 0;
        }
        Vector x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = lattice_coord(rng);
            y[i] = lattice_coord(rng);
        }
        const PrimalDualPoint z(x, y);
        bool ok = true;
        for (const auto& w : out)
            ok = ok && monotone_gap(z, w) >= 0.0 && z != w;
        if (ok) {
            out.push_back(z);
            misses = 0;
        }
    }
    return out;
}

GridSpec acceptance_grid() {
    GridSpec g;
    g.resolution = 41;
    g.dual_resolution = 41;
    g.dual_bound = 2;
    g.ambient_bound = 2;
    return g;
}

// n = 1: the full 41 x 41 grid of [-2,2]^2. n = 2: for every graph point and
// every axis, the 41 x 41 plane through it in (x_i, x*_i).
std::vector<PrimalDualPoint> scan_points(const std::vector<PrimalDualPoint>& graph, std::size_t n,
                                         const GridSpec& g) {
    if (n == 1) return scan_grid(Region::closed_interval(-2, 2), g);
    const auto axis = axis_lattice(-2, 2, 41, false, false);
    std::vector<PrimalDualPoint> out;
    for (const auto& w : graph)
        for (std::size_t i = 0; i < n; ++i)
            for (double a : axis)
                for (double b : axis) {
                    Vector x = w.x(), y = w.xstar();
                    x[i] = a;
                    y[i] = b;
                    out.emplace_back(std::move(x), std::move(y));
                }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct GraphCase {
    std::size_t n;
    std::vector<PrimalDualPoint> graph;
};

std::vector<GraphCase> monotone_cases() {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> size(3, 8);
    std::vector<GraphCase> out;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = i < 50 ? 1 : 2;
        out.push_back({n, random_monotone_graph(rng, n, size(rng))});
    }
    return out;
}

Outcome criterion_1(const std::vector<GraphCase>& cases) {
    const Tolerance tol;
    const GridSpec g = acceptance_grid();
    std::size_t band = 0, bad = 0;
    double worst = 0.0;
    for (const auto& c : cases) {
        const PsiEvaluator psi(make_finite_graph(c.n, c.graph), Region::whole(c.n), g, tol);
        for (const auto& z : scan_points(c.graph, c.n, g)) {
            const ExtReal h = psi(z);
            if (!h.is_finite() || std::abs(h.value() - coupling(z)) > 1e-9) continue;
            ++band;
            const ConjugateValue hc = square_conjugate_eval(psi.function(), z, g);
            const double dev = hc.value.is_finite() ? std::abs(hc.value.value() - coupling(z)) : kInf;
            worst = std::max(worst, dev);
            if (hc.approximate || dev > 1e-8) ++bad;
        }
    }
    return {bad == 0 && band > 0, "graphs 100, band points " + std::to_string(band) + ", violations " +
                                      std::to_string(bad) + ", max |h^sq - c| " + format_number(worst)};
}

bool distinct(std::vector<PrimalDualPoint> pts) {
    std::sort(pts.begin(), pts.end());
    return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

Outcome criterion_2(const std::vector<GraphCase>& cases) {
    const Tolerance tol;
    const GridSpec g = acceptance_grid();
    std::size_t phi_bad = 0, psi_bad = 0, shuffled = 0, undetected = 0;
    std::mt19937_64 rng(77);
    for (const auto& c : cases) {
        const auto t = make_finite_graph(c.n, c.graph);
        const PhiEvaluator phi(t, Region::whole(c.n), g, tol);
        for (const auto& w : c.graph)
            if (!phi(w).is_finite() || std::abs(phi(w).value() - coupling(w)) > 1e-12) ++phi_bad;
        const PsiEvaluator psi(t, Region::whole(c.n), g, tol);
        for (const auto& z : scan_points(c.graph, c.n, g))
            if (psi(z) < ExtReal(coupling(z) - 1e-9)) ++psi_bad;

        // Permute the duals until some pair has a clearly negative gap.
        std::vector<PrimalDualPoint> mixed = c.graph;
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<Vector> duals;
            for (const auto& w : c.graph)
                duals.push_back(w.xstar());
            std::shuffle(duals.begin(), duals.end(), rng);
            for (std::size_t i = 0; i < mixed.size(); ++i)
                mixed[i] = PrimalDualPoint(c.graph[i].x(), duals[i]);
            if (distinct(mixed) && pairwise_monotonicity(mixed, tol).worst_gap < -1e-6) break;
        }
        if (!distinct(mixed) || pairwise_monotonicity(mixed, tol).worst_gap >= -1e-6) continue;
        ++shuffled;
        const PhiEvaluator mphi(make_finite_graph(c.n, mixed), Region::whole(c.n), g, tol);
        bool found = false;
        for (const auto& w : mixed)
            found = found || mphi(w) > ExtReal(coupling(w) + 1e-6);
        if (!found) ++undetected;
    }
    const bool pass = phi_bad == 0 && psi_bad == 0 && undetected == 0 && shuffled > 0;
    return {pass, "phi != c at graph points " + std::to_string(phi_bad) + ", psi < c - 1e-9 " +
                      std::to_string(psi_bad) + ", shuffled graphs " + std::to_string(shuffled) +
                      ", undetected " + std::to_string(undetected)};
}

const Claim* find_claim(const GalleryResult& r, const std::string& name) {
    for (const auto& c : r.claims)
        if (c.name == name) return &c;
    return nullptr;
}

Outcome criterion_3() {
    const auto start = Clock::now();
    const GalleryResult all = run_gallery("all");
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const std::vector<std::string> named = {
        "V = (0,1) identifies T = (0,1) x {0}",
        "closure [0,1] locates T",
        "(-1,1) locates {0} x (X* \\ {0})",
        "(-1,1) identifies {0} x (X* \\ {0})",
        "locatable over open intervals around 0",
        "identifiable over open intervals around 0",
        "N_C is int C-NI",
        "int C x {0} is NI",
    };
    std::size_t missing = 0, failed = 0;
    for (const auto& n : named) {
        const Claim* c = find_claim(all, n);
        if (!c) ++missing;
        else if (!c->passed()) ++failed;
    }
    const Claim* ni = find_claim(all, "int C x {0} is NI");
    const bool values = ni && ni->detail.find("phi(2,3) = 3, c(2,3) = 6") != std::string::npos;
    std::size_t total_failed = 0;
    for (const auto& c : all.claims)
        total_failed += c.passed() ? 0 : 1;
    const bool pass = missing == 0 && failed == 0 && values && total_failed == 0 && secs < 10.0;
    return {pass, "claims " + std::to_string(all.claims.size()) + ", failed " + std::to_string(total_failed) +
                      ", named missing " + std::to_string(missing) +
                      (values ? ", phi(2,3) = 3 and c(2,3) = 6" : ", witness values wrong") + ", runtime " + format_number(secs) + " s"};
}

struct Instance {
    OperatorHandle t;
    Region v;
    std::string label;
};

GridSpec instance_grid(std::size_t n) {
    GridSpec g;
    if (n > 1) {
        g.resolution = 9;
        g.dual_resolution = 9;
    }
    return g;
}

// Closed-form kinds against random open intervals and boxes.
std::vector<Instance> closed_form_instances() {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> end(-8, 8);
    auto interval = [&] {
        int a = end(rng), b = end(rng);
        while (a == b)
            b = end(rng);
        if (a > b) std::swap(a, b);
        return std::pair{a * 0.25, b * 0.25};
    };
    std::vector<Instance> out;
    for (int i = 0; i < 50; ++i) {
        OperatorHandle t;
        switch (i % 5) {
        case 0: t = make_abs_subdiff(1.0 + (i % 3)); break;
        case 1: {
            const auto [a, b] = interval();
            t = make_normal_cone_box(Region::closed_interval(a, b));
            break;
        }
        case 2: {
            const auto [a, b] = interval();
            t = make_flat(Region::open_interval(a, b), {0.25 * end(rng)});
            break;
        }
        case 3: t = make_point_complement({0.25 * std::clamp(end(rng), -7, 7)}); break;
        default: {
            const auto [a, b] = interval();
            const auto [c, d] = interval();
            t = make_normal_cone_box(Region::closed_box({a, c}, {b, d}));
            break;
        }
        }
        // The equivalences only speak about V meeting D(T).
        Region v = Region::whole(t->dim());
        do {
            if (t->dim() == 1) {
                const auto [a, b] = interval();
                v = Region::open_interval(a, b);
            } else {
                const auto [a, b] = interval();
                const auto [c, d] = interval();
                v = Region::open_box({a, c}, {b, d});
            }
        } while (!t->domain_meets(v, instance_grid(t->dim()), Tolerance{}));
        out.push_back({t, v, t->describe() + " on " + v.to_string()});
    }
    return out;
}

Outcome criterion_4(const std::vector<Instance>& instances) {
    const Tolerance tol;
    std::size_t discrepancies = 0, identified = 0;
    std::string first;
    for (const auto& in : instances) {
        const GridSpec g = instance_grid(in.t->dim());
        const bool rep = check_v_representable(in.t, in.v, g, tol).value;
        const bool vni = check_vni(in.t, in.v, g, tol).value;
        const bool id = check_identifies(in.t, in.v, g, tol).value;
        identified += id ? 1 : 0;
        if ((rep && vni) != id) {
            ++discrepancies;
            if (first.empty()) first = in.label;
        }
    }
    std::string detail = "instances " + std::to_string(instances.size()) + ", identifying " +
                         std::to_string(identified) + ", discrepancies " + std::to_string(discrepancies);
    if (!first.empty()) detail += ", first " + first;
    return {discrepancies == 0, detail};
}

Outcome criterion_5() {
    const MrSetComparison cmp =
        compare_sum_and_restriction(make_abs_subdiff(1.0), Region::closed_interval(0, 2), GridSpec{}, Tolerance{});
    return {cmp.equal && cmp.points == 41 * 41,
            "grid points " + std::to_string(cmp.points) + ", m.r. " + std::to_string(cmp.mr_sum) + " vs " +
                std::to_string(cmp.mr_restricted) + ", differences " + std::to_string(cmp.differences.size())};
}

// Brute-force minimum of psi_{A|V}(x, u*) + psi_B(x, x* - u*) over a dual
// lattice ten times finer than the evaluator's, plus the graph duals of A|_V.
struct BruteRho {
    Envelope env;
    std::vector<double> us;
    std::function<ExtReal(double, double)> psi_b;
    mutable std::map<std::pair<double, double>, ExtReal> cache;

    ExtReal operator()(double x, double y) const {
        ExtReal best = ExtReal::pos_inf();
        for (double u : us) {
            const auto key = std::make_pair(x, u);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, envelope_eval(env, pt(x, u))).first;
            if (it->second.is_pos_inf()) continue;
            best = min(best, it->second + psi_b(x, y - u));
        }
        return best;
    }
};

Outcome sum_case(const OperatorHandle& a, const OperatorHandle& b, const Region& v,
                 std::function<ExtReal(double, double)> psi_b, bool pair_sum, double& worst, std::size_t& mismatch,
                 std::size_t& checked) {
    const GridSpec g;
    const Tolerance tol;
    const Verdict ver = verify_sum_representative(a, b, v, g, tol, pair_sum);
    BruteRho brute;
    for (const auto& w : restrict(a, v, g, tol).op->enumerate_graph(g, tol)) {
        brute.env.points.push_back({w, coupling(w)});
        brute.us.push_back(w.xstar()[0]);
    }
    GridSpec fine = g;
    fine.dual_resolution = 10 * (g.dual_resolution - 1) + 1;
    for (const auto& u : dual_lattice(1, fine))
        brute.us.push_back(u[0]);
    std::sort(brute.us.begin(), brute.us.end());
    brute.us.erase(std::unique(brute.us.begin(), brute.us.end()), brute.us.end());
    brute.psi_b = std::move(psi_b);

    const RhoSquareEvaluator rho(a, b, v, g, tol);
    for (const auto& z : scan_grid(v, g)) {
        ++checked;
        const ExtReal got = rho(z).value;
        const ExtReal want = brute(z.x()[0], z.xstar()[0]);
        if (got.is_pos_inf() || want.is_pos_inf()) {
            if (got != want) ++mismatch;
            continue;
        }
        const double dev = std::abs(got.value() - want.value());
        worst = std::max(worst, dev);
        if (dev > 1e-8) ++mismatch;
    }
    return {ver.value, ver.note};
}

Outcome criterion_6() {
    const auto a = make_abs_subdiff(1.0);
    const auto nc = make_normal_cone_box(Region::closed_interval(0, 2));
    double worst = 0.0;
    std::size_t mismatch = 0, checked = 0;
    // psi of N_[0,2] when V contains [0,2], and of (0,2) x {0} otherwise.
    auto psi_nc = [](double x, double y) {
        if (x < 0 || x > 2) return ExtReal::pos_inf();
        return ExtReal(y > 0 ? 2 * y : 0.0);
    };
    auto psi_flat = [](double x, double y) {
        if (x < 0 || x > 2 || y != 0.0) return ExtReal::pos_inf();
        return ExtReal(0.0);
    };
    const Outcome add = sum_case(a, nc, Region::closed_interval(-1, 3), psi_nc, false, worst, mismatch, checked);
    const Outcome pair = sum_case(a, nc, Region::open_interval(0, 2), psi_flat, true, worst, mismatch, checked);
    const bool pass = add.pass && pair.pass && mismatch == 0;
    return {pass, std::string("A + N_C ") + (add.pass ? "verified" : "failed") + ", pair sum " +
                      (pair.pass ? "verified" : "failed") + ", brute-force points " + std::to_string(checked) +
                      ", mismatches " + std::to_string(mismatch) + ", max deviation " + format_number(worst)};
}

Outcome criterion_7(const std::vector<Instance>& instances) {
    const Tolerance tol;
    std::size_t used = 0, disagree = 0, nonmonotone = 0;
    for (const auto& in : instances) {
        const GridSpec g = instance_grid(in.t->dim());
        if (!check_vni(in.t, in.v, g, tol).value) continue;
        if (!is_monotone(restrict(in.t, in.v, g, tol).op, tol, g).value) continue;
        const UniqueExtension ext = unique_extension(in.t, in.v, g, tol);
        ++used;
        if (!ext.traces_agree) ++disagree;
        if (pairwise_monotonicity(ext.points, tol).worst_gap < -1e-9) ++nonmonotone;
    }
    return {used > 0 && disagree == 0 && nonmonotone == 0,
            "V-NI instances " + std::to_string(used) + ", trace disagreements " + std::to_string(disagree) +
                ", non-monotone outputs " + std::to_string(nonmonotone)};
}

Outcome criterion_8() {
    const std::string first = run_gallery("all").report;
    const std::string second = run_gallery("all").report;
    return {first == second, "report bytes " + std::to_string(first.size()) + " and " +
                                 std::to_string(second.size()) + (first == second ? ", identical" : ", differ")};
}

}  // namespace

int main() {
    const auto graphs = monotone_cases();
    const auto instances = closed_form_instances();
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 band of psi inside band of its conjugate", [&] { return criterion_1(graphs); }},
        {"2 phi and psi against the coupling", [&] { return criterion_2(graphs); }},
        {"3 gallery verdicts", criterion_3},
        {"4 representable and V-NI iff identifying", [&] { return criterion_4(instances); }},
        {"5 m.r. sets of A + N_C and A restricted to C", criterion_5},
        {"6 sum representative and split optimality", criterion_6},
        {"7 unique monotone extension", [&] { return criterion_7(instances); }},
        {"8 deterministic gallery report", criterion_8},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("%s criterion %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
