#include "fitzop/report.hpp"

#include "fitzop/classify.hpp"
#include "fitzop/fitzpatrick.hpp"
#include "fitzop/spec.hpp"

namespace fitzop {
namespace {

using nlohmann::json;

std::string scalar_text(const json& j) {
    switch (j.type()) {
    case json::value_t::boolean: return j.get<bool>() ? "true" : "false";
    case json::value_t::number_float: return format_number(j.get<double>());
    case json::value_t::number_integer: return std::to_string(j.get<long long>());
    case json::value_t::number_unsigned: return std::to_string(j.get<unsigned long long>());
    case json::value_t::string: return j.get<std::string>();
    case json::value_t::null: return "null";
    default: break;
    }
    return "";
}

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

void emit(const json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (is_scalar(v)) {
                out += pad + k + ": " + scalar_text(v) + "\n";
            } else if (v.empty()) {
                out += pad + k + (v.is_array() ? ": []\n" : ": {}\n");
            } else {
                out += pad + k + ":\n";
                emit(v, indent + 2, out);
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& v : j) {
            if (is_scalar(v)) {
                out += pad + "- " + scalar_text(v) + "\n";
            } else if (v.empty()) {
                out += pad + (v.is_array() ? "- []\n" : "- {}\n");
            } else {
                std::string sub;
                emit(v, indent + 2, sub);
                sub.replace(static_cast<std::size_t>(indent), 2, "- ");
                out += sub;
            }
        }
        return;
    }
    out += pad + scalar_text(j) + "\n";
}

std::string witness_text(const Witness& w) {
    return format_point(w.z) + " value=" + w.value.to_string() + " coupling=" + format_number(w.coupling);
}

json error_json(const std::string& property, const std::exception& e) {
    json j;
    j["property"] = property;
    j["error"] = e.what();
    if (const auto* u = dynamic_cast<const UnsatisfiedHypothesis*>(&e)) j["hypothesis"] = u->hypothesis();
    if (dynamic_cast<const NotRepresentativeClass*>(&e)) j["hypothesis"] = "h >= c";
    return j;
}

RegionFamily family_of(const ParsedSpec& s) {
    const RunConfig& c = s.config;
    if (c.family.rule == "explicit") return explicit_family(s.op, c.family.regions, c.grid, c.tol);
    return dyadic_family(s.op, c.ambient, c.family.scales, c.grid, c.tol);
}

json run_property(const ParsedSpec& s, const std::string& p, bool& ok) {
    const RunConfig& c = s.config;
    const auto& t = s.op;
    auto finish = [&](const Verdict& v) {
        ok = v.value;
        json j = verdict_json(v);
        j["property"] = p;
        return j;
    };
    if (p == "monotone") return finish(is_monotone(t, c.tol, c.grid));
    if (p == "vni") return finish(check_vni(t, c.region, c.grid, c.tol));
    if (p == "ni") return finish(check_ni(t, c.ambient, c.grid, c.tol));
    if (p == "locates") return finish(check_locates(t, c.region, c.locate_target, c.grid, c.tol));
    if (p == "identifies") return finish(check_identifies(t, c.region, c.grid, c.tol));
    if (p == "v_representable") return finish(check_v_representable(t, c.region, c.grid, c.tol));
    if (p == "maximal") return finish(check_maximal_on_grid(t, c.ambient, c.grid, c.tol));
    if (p == "condition_c") return finish(check_condition_c(t, c.region, c.grid, c.tol));
    if (p == "unique_extension") {
        const UniqueExtension u = unique_extension(t, c.region, c.grid, c.tol);
        ok = u.traces_agree;
        json j;
        j["property"] = p;
        j["value"] = u.traces_agree;
        j["approximate"] = u.approximate;
        j["point_count"] = u.points.size();
        json pts = json::array();
        for (std::size_t i = 0; i < u.points.size() && i < kReportWitnesses; ++i)
            pts.push_back(format_point(u.points[i]));
        j["points"] = pts;
        j["region_ids"] = json::array({c.region.to_string()});
        return j;
    }
    const RegionFamily f = family_of(s);
    if (p == "family_vni") return finish(family_scan(t, f, Property::VNI, c.ambient, c.grid, c.tol));
    if (p == "family_locates") return finish(family_scan(t, f, Property::Locates, c.ambient, c.grid, c.tol));
    if (p == "family_identifies") return finish(family_scan(t, f, Property::Identifies, c.ambient, c.grid, c.tol));
    if (p == "family_v_representable")
        return finish(family_scan(t, f, Property::VRepresentable, c.ambient, c.grid, c.tol));
    if (p == "family_condition_c") return finish(family_scan(t, f, Property::ConditionC, c.ambient, c.grid, c.tol));
    if (p == "low_representable")
        return finish(family_scan(t, f, Property::LowRepresentable, c.ambient, c.grid, c.tol));
    throw Error("unknown property '" + p + "'");
}

}  // namespace

std::string emit_report(const json& j) {
    std::string out;
    emit(j, 0, out);
    return out;
}

json grid_json(const GridSpec& g) {
    return json{{"ambient_bound", g.ambient_bound},
                {"dual_bound", g.dual_bound},
                {"dual_resolution", g.dual_resolution},
                {"resolution", g.resolution}};
}

json tolerance_json(const Tolerance& t) {
    return json{{"delta_dom", t.delta_dom}, {"eps_eq", t.eps_eq}, {"eps_strict", t.eps_strict}};
}

json verdict_json(const Verdict& v, std::size_t max_witnesses) {
    json j;
    j["property"] = to_string(v.property);
    j["value"] = v.value;
    j["vacuous"] = v.vacuous;
    j["approximate"] = v.approximate;
    j["certified"] = v.certified;
    j["points_scanned"] = v.points_scanned;
    j["witness_count"] = v.witness_count;
    j["grid"] = grid_json(v.grid);
    j["tolerance"] = tolerance_json(v.tol);
    j["region_ids"] = v.region_ids;
    if (!v.note.empty()) j["note"] = v.note;
    json w = json::array();
    for (std::size_t i = 0; i < v.witnesses.size() && i < max_witnesses; ++i)
        w.push_back(witness_text(v.witnesses[i]));
    j["witnesses"] = w;
    return j;
}

ClassifyOutcome run_classify(std::string_view spec_text) {
    json report;
    ParsedSpec s;
    try {
        s = parse_spec(spec_text);
    } catch (const std::exception& e) {
        report["status"] = "error";
        report["error"] = e.what();
        report["exit_code"] = 2;
        return {emit_report(report), 2};
    }
    const RunConfig& c = s.config;
    report["dimension"] = c.dim;
    report["operator"] = s.op->describe();
    report["region"] = c.region.to_string();
    report["ambient"] = c.ambient.to_string();
    if (c.locate_target) report["locate_target"] = c.locate_target->to_string();
    report["grid"] = grid_json(c.grid);
    report["tolerance"] = tolerance_json(c.tol);

    std::vector<std::string> props = c.properties;
    if (props.empty()) props.push_back("monotone");
    bool any_false = false, any_error = false;
    json results = json::array();
    for (const auto& p : props) {
        try {
            bool ok = true;
            results.push_back(run_property(s, p, ok));
            any_false = any_false || !ok;
        } catch (const std::exception& e) {
            any_error = true;
            results.push_back(error_json(p, e));
        }
    }
    report["results"] = results;
    const int code = any_error ? 2 : any_false ? 1 : 0;
    report["status"] = code == 0 ? "pass" : code == 1 ? "fail" : "error";
    report["exit_code"] = code;
    return {emit_report(report), code};
}

std::string export_csv(std::string_view spec_text, std::string_view fn, std::size_t resolution) {
    if (fn != "phi" && fn != "psi") throw Error("export: fn must be phi or psi");
    ParsedSpec s = parse_spec(spec_text);
    GridSpec g = s.config.grid;
    g.resolution = resolution;
    g.dual_resolution = resolution;
    g.validate();
    const std::size_t n = s.config.dim;
    const Region& v = s.config.region;

    std::string out;
    for (std::size_t i = 0; i < n; ++i)
        out += n == 1 ? "x," : "x" + std::to_string(i + 1) + ",";
    for (std::size_t i = 0; i < n; ++i)
        out += n == 1 ? "xstar," : "xstar" + std::to_string(i + 1) + ",";
    out += "value\n";

    const auto grid = scan_grid(v, g);
    if (grid.empty()) return out;
    std::optional<PhiEvaluator> phi;
    std::optional<PsiEvaluator> psi;
    if (fn == "phi")
        phi.emplace(s.op, v, g, s.config.tol);
    else
        psi.emplace(s.op, v, g, s.config.tol);
    for (const auto& z : grid) {
        for (double x : z.x())
            out += format_number(x) + ",";
        for (double y : z.xstar())
            out += format_number(y) + ",";
        out += (phi ? (*phi)(z) : (*psi)(z)).to_string() + "\n";
    }
    return out;
}

}  // namespace fitzop
