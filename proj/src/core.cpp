#include "fitzop/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fitzop {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a)
        m = std::max(m, std::abs(v));
    return m;
}

double distance_inf(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DimensionError("distance: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

PrimalDualPoint::PrimalDualPoint(Vector x, Vector xstar) : x_(std::move(x)), xstar_(std::move(xstar)) {
    if (x_.empty())
        throw DimensionError("primal-dual point needs dimension >= 1");
    if (x_.size() != xstar_.size())
        throw DimensionError("primal and dual parts differ in dimension");
}

PrimalDualPoint PrimalDualPoint::zero(std::size_t n) {
    return {Vector(n, 0.0), Vector(n, 0.0)};
}

std::strong_ordering operator<=>(const PrimalDualPoint& a, const PrimalDualPoint& b) {
    auto cmp = [](const Vector& u, const Vector& v) {
        for (std::size_t i = 0; i < std::min(u.size(), v.size()); ++i) {
            if (u[i] < v[i]) return std::strong_ordering::less;
            if (u[i] > v[i]) return std::strong_ordering::greater;
        }
        return u.size() <=> v.size();
    };
    if (auto c = cmp(a.x(), b.x()); c != 0) return c;
    return cmp(a.xstar(), b.xstar());
}

double coupling(const PrimalDualPoint& z) { return dot(z.x(), z.xstar()); }

double natural_pairing(const PrimalDualPoint& z, const PrimalDualPoint& w) {
    if (z.dim() != w.dim())
        throw DimensionError("natural pairing: dimension mismatch");
    return dot(z.x(), w.xstar()) + dot(w.x(), z.xstar());
}

double monotone_gap(const PrimalDualPoint& z, const PrimalDualPoint& w) {
    if (z.dim() != w.dim())
        throw DimensionError("monotone gap: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < z.dim(); ++i)
        s += (z.x()[i] - w.x()[i]) * (z.xstar()[i] - w.xstar()[i]);
    return s;
}

double distance_inf(const PrimalDualPoint& a, const PrimalDualPoint& b) {
    return std::max(distance_inf(a.x(), b.x()), distance_inf(a.xstar(), b.xstar()));
}

ExtReal::ExtReal(double v) : v_(v) {
    if (std::isnan(v))
        throw std::domain_error("ExtReal: NaN");
}

ExtReal operator+(ExtReal a, ExtReal b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
        throw std::domain_error("ExtReal: +inf + -inf is undefined");
    return ExtReal(ExtReal::Raw{a.v_ + b.v_});
}

ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

std::string ExtReal::to_string() const { return format_number(v_); }

ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }
ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }

ExtReal sup_of(std::span<const ExtReal> values) {
    ExtReal s = ExtReal::neg_inf();
    for (ExtReal v : values)
        s = max(s, v);
    return s;
}

ExtReal inf_of(std::span<const ExtReal> values) {
    ExtReal s = ExtReal::pos_inf();
    for (ExtReal v : values)
        s = min(s, v);
    return s;
}

void Tolerance::validate() const {
    if (!(eps_eq > 0.0) || !(eps_strict > 0.0) || !(delta_dom > 0.0))
        throw Error("tolerances must be positive");
    if (eps_eq > eps_strict)
        throw Error("eps_eq must not exceed eps_strict");
}

std::string format_number(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_vector(std::span<const double> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_number(v[i]);
    }
    return s + "]";
}

std::string format_point(const PrimalDualPoint& z) {
    return "(" + format_vector(z.x()) + ", " + format_vector(z.xstar()) + ")";
}

}  // namespace fitzop
