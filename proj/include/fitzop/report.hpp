#pragma once

// Report text, classification runs, and CSV export.

#include "fitzop/verdict.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace fitzop {

// Indented `key: value` text with keys sorted, list items as `- `, and numbers
// printed with 12 significant digits (inf/-inf literal).
std::string emit_report(const nlohmann::json& j);

inline constexpr std::size_t kReportWitnesses = 64;

nlohmann::json verdict_json(const Verdict& v, std::size_t max_witnesses = kReportWitnesses);
nlohmann::json grid_json(const GridSpec& g);
nlohmann::json tolerance_json(const Tolerance& t);

struct ClassifyOutcome {
    std::string report;
    int exit_code = 0;  // 0 all pass, 1 some verdict false, 2 parse/usage/gate error
};

ClassifyOutcome run_classify(std::string_view spec_text);

// Header `x...,xstar...,value`, one row per point of grid(region) x dual
// lattice in grid order. fn is "phi" or "psi"; resolution overrides both
// primal and dual resolutions.
std::string export_csv(std::string_view spec_text, std::string_view fn, std::size_t resolution);

}  // namespace fitzop
