#pragma once

// Primal-dual points, the coupling and natural pairing on Z = X x X*,
// extended reals and comparison tolerances.

#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fitzop {

using Vector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A theorem hypothesis or operation precondition does not hold.
class UnsatisfiedHypothesis : public Error {
public:
    UnsatisfiedHypothesis(std::string hypothesis, const std::string& detail)
        : Error("unsatisfied hypothesis '" + hypothesis + "': " + detail),
          hypothesis_(std::move(hypothesis)) {}
    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

// A candidate representative h violates h >= c somewhere.
class NotRepresentativeClass : public Error {
public:
    using Error::Error;
};

class LpFailure : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double distance_inf(std::span<const double> a, std::span<const double> b);

// z = (x, x*) in X x X*, both of dimension n >= 1.
class PrimalDualPoint {
public:
    PrimalDualPoint(Vector x, Vector xstar);

    static PrimalDualPoint zero(std::size_t n);
    // Scalar convenience for n = 1.
    static PrimalDualPoint scalar(double x, double xstar) { return {Vector{x}, Vector{xstar}}; }

    const Vector& x() const noexcept { return x_; }
    const Vector& xstar() const noexcept { return xstar_; }
    std::size_t dim() const noexcept { return x_.size(); }

    friend bool operator==(const PrimalDualPoint&, const PrimalDualPoint&) = default;
    // Lexicographic on (x, x*).
    friend std::strong_ordering operator<=>(const PrimalDualPoint& a, const PrimalDualPoint& b);

private:
    Vector x_;
    Vector xstar_;
};

// c(z) = <x, x*>
double coupling(const PrimalDualPoint& z);
// z . w = <x, u*> + <u, x*>
double natural_pairing(const PrimalDualPoint& z, const PrimalDualPoint& w);
// <x - u, x* - u*>
double monotone_gap(const PrimalDualPoint& z, const PrimalDualPoint& w);

double distance_inf(const PrimalDualPoint& a, const PrimalDualPoint& b);

// Real number or +-infinity. Adding opposite infinities throws std::domain_error.
class ExtReal {
public:
    constexpr ExtReal() = default;
    ExtReal(double v);  // NaN rejected

    static constexpr ExtReal pos_inf() { return ExtReal(Raw{kInf}); }
    static constexpr ExtReal neg_inf() { return ExtReal(Raw{-kInf}); }

    constexpr double value() const noexcept { return v_; }
    constexpr bool is_finite() const noexcept { return v_ != kInf && v_ != -kInf; }
    constexpr bool is_pos_inf() const noexcept { return v_ == kInf; }
    constexpr bool is_neg_inf() const noexcept { return v_ == -kInf; }

    friend ExtReal operator+(ExtReal a, ExtReal b);
    friend ExtReal operator-(ExtReal a, ExtReal b);
    friend constexpr ExtReal operator-(ExtReal a) { return ExtReal(Raw{-a.v_}); }
    ExtReal& operator+=(ExtReal b) { return *this = *this + b; }

    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

    std::string to_string() const;

private:
    struct Raw { double v; };
    constexpr explicit ExtReal(Raw r) : v_(r.v) {}
    double v_ = 0.0;
};

ExtReal max(ExtReal a, ExtReal b);
ExtReal min(ExtReal a, ExtReal b);
// sup of an empty collection is -inf, inf of an empty collection is +inf.
ExtReal sup_of(std::span<const ExtReal> values);
ExtReal inf_of(std::span<const ExtReal> values);

struct Tolerance {
    double eps_eq = 1e-9;      // band for f = c
    double eps_strict = 1e-6;  // margin for f < c
    double delta_dom = 1e-6;   // primal/dual membership radius

    // Throws Error unless all positive and eps_eq <= eps_strict.
    void validate() const;
};

// Formats with 12 significant digits; infinities as inf / -inf.
std::string format_number(double v);
std::string format_vector(std::span<const double> v);
std::string format_point(const PrimalDualPoint& z);

}  // namespace fitzop
