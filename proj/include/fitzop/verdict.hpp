#pragma once

#include "fitzop/core.hpp"
#include "fitzop/regions.hpp"

#include <string>
#include <vector>

namespace fitzop {

enum class Property {
    Monotone,
    VNI,
    Locates,
    Identifies,
    VRepresentable,
    NI,
    LocallyNI,
    MaximalOnGrid,
    ConditionC,
    LowRepresentable,
};

const char* to_string(Property p);

// A grid point that decided the verdict, with the function value that was
// compared against the coupling there.
struct Witness {
    PrimalDualPoint z;
    ExtReal value;
    double coupling = 0.0;
};

// The outcome of a grid scan. Every statement is about the recorded grid,
// with X* clipped to [-dual_bound, dual_bound]^n.
struct Verdict {
    static constexpr std::size_t kMaxWitnesses = 4096;

    Property property = Property::Monotone;
    bool value = true;
    bool vacuous = false;      // hypothesis V meets D(T) failed; true by convention
    bool approximate = false;  // some consumed function value was sampled
    bool certified = true;     // positive verdicts on finite samples are not certified
    std::vector<Witness> witnesses;  // lexicographic order, capped at kMaxWitnesses
    std::size_t witness_count = 0;   // uncapped
    std::size_t points_scanned = 0;
    GridSpec grid;
    Tolerance tol;
    std::vector<std::string> region_ids;
    std::string note;

    void add_witness(Witness w);
    // Sorts witnesses and fixes value = false when any were recorded.
    void finalize();
    bool has_witness(const PrimalDualPoint& z, double radius = 1e-12) const;
};

}  // namespace fitzop
