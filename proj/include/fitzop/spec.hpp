#pragma once

// Operator-spec file format. Line oriented, `key: value`, nested blocks by
// indentation (spaces only), `#` starts a comment. Unknown keys are errors.
//
//   dimension: 1
//   operator:
//     kind: flat
//     region: (0,1)
//     wstar: [0]
//   region: [0,1]
//   properties: [locates]
//
// Top-level keys: dimension, operator, region, locate_target, ambient, grid,
// tolerance, properties, family. See README.md for the full schema.

#include "fitzop/operators.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fitzop {

struct FamilySpec {
    std::string rule = "dyadic";  // dyadic | explicit
    std::size_t scales = 3;
    std::vector<Region> regions;  // explicit only
};

struct RunConfig {
    std::size_t dim = 1;
    OperatorSpec op;
    Region region = Region::whole(1);
    std::optional<Region> locate_target;
    Region ambient = Region::whole(1);
    GridSpec grid;
    Tolerance tol;
    std::vector<std::string> properties;
    FamilySpec family;
};

struct ParsedSpec {
    RunConfig config;
    OperatorHandle op;
};

// Throws ParseError (line:column) for syntax and schema errors, and Error or
// DimensionError when the operator itself is invalid.
ParsedSpec parse_spec(std::string_view text);

// Region literals: intervals joined by `x` such as "(0,1]x[-1,inf)", `whole`,
// `empty`, "halfspace [1, 0] <= 1" (or `<` for open), "polytope [[0,0],[1,0],[0,1]]".
Region parse_region(std::string_view text, std::size_t dim);

const std::vector<std::string>& known_properties();

}  // namespace fitzop
