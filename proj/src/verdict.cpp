#include "fitzop/verdict.hpp"

#include <algorithm>

namespace fitzop {

const char* to_string(Property p) {
    switch (p) {
    case Property::Monotone: return "Monotone";
    case Property::VNI: return "VNI";
    case Property::Locates: return "Locates";
    case Property::Identifies: return "Identifies";
    case Property::VRepresentable: return "VRepresentable";
    case Property::NI: return "NI";
    case Property::LocallyNI: return "LocallyNI";
    case Property::MaximalOnGrid: return "MaximalOnGrid";
    case Property::ConditionC: return "ConditionC";
    case Property::LowRepresentable: return "LowRepresentable";
    }
    return "?";
}

void Verdict::add_witness(Witness w) {
    ++witness_count;
    witnesses.push_back(std::move(w));
    if (witnesses.size() > 2 * kMaxWitnesses) {
        std::sort(witnesses.begin(), witnesses.end(), [](const Witness& a, const Witness& b) { return a.z < b.z; });
        witnesses.erase(witnesses.begin() + kMaxWitnesses, witnesses.end());
    }
}

void Verdict::finalize() {
    std::sort(witnesses.begin(), witnesses.end(), [](const Witness& a, const Witness& b) { return a.z < b.z; });
    if (witnesses.size() > kMaxWitnesses) witnesses.erase(witnesses.begin() + kMaxWitnesses, witnesses.end());
    if (witness_count > 0) value = false;
}

bool Verdict::has_witness(const PrimalDualPoint& z, double radius) const {
    return std::any_of(witnesses.begin(), witnesses.end(), [&](const Witness& w) {
        return w.z.dim() == z.dim() && distance_inf(w.z, z) <= radius;
    });
}

}  // namespace fitzop
