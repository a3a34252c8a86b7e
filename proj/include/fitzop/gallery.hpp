#pragma once

// Pinned example scenarios with their expected verdicts.

#include "fitzop/core.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fitzop {

struct Claim {
    std::string scenario;
    std::string name;
    bool expected = true;
    bool observed = false;
    std::optional<PrimalDualPoint> witness;  // must appear among the verdict's witnesses
    bool witness_found = true;
    std::string detail;

    bool passed() const { return observed == expected && witness_found; }
};

struct GalleryResult {
    std::vector<Claim> claims;
    std::string report;
    bool all_passed() const;
};

// vbar, point-complement, normal-cone, reprez, maximal, sum, tnc.
const std::vector<std::string>& gallery_names();

// name is one of gallery_names() or "all". Throws Error for unknown names.
GalleryResult run_gallery(std::string_view name);

}  // namespace fitzop
