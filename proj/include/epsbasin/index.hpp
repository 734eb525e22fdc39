#pragma once

// Scalar domain types: extended non-negative costs, budget modes and the
// signed filtration index (-inf, -0] + [0, inf].

#include <cmath>
#include <compare>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>
#include <stdexcept>

namespace epsbasin {

/// Extended non-negative real in [0, inf]. Infinity is a regular value.
using CostValue = double;

inline constexpr CostValue kInf = std::numeric_limits<double>::infinity();

inline bool is_valid_cost(CostValue c) { return !std::isnan(c) && c >= 0.0; }

/// How a perturbation budget is charged along a controlled path.
enum class BudgetMode {
    MaxPerStep,  ///< every jump costs at most eps
    TotalSum,    ///< all jumps together cost at most eps
};

inline std::string_view to_string(BudgetMode m) {
    return m == BudgetMode::MaxPerStep ? "max" : "sum";
}

inline BudgetMode parse_budget_mode(std::string_view s) {
    if (s == "max") return BudgetMode::MaxPerStep;
    if (s == "sum") return BudgetMode::TotalSum;
    throw std::invalid_argument("unknown budget mode '" + std::string(s) + "'");
}

enum class IndexSign { Neg, Pos };

/// Element of the totally ordered set (-inf, -0] + [0, inf].
///
/// (Neg, m) stands for -m. Negative zero is the structural value (Neg, 0),
/// never an IEEE -0.0, so (Neg, 0) < (Pos, 0).
struct EpsIndex {
    IndexSign sign = IndexSign::Pos;
    CostValue magnitude = 0.0;

    static constexpr EpsIndex pos(CostValue m) { return {IndexSign::Pos, m}; }
    static constexpr EpsIndex neg(CostValue m) { return {IndexSign::Neg, m}; }

    bool is_negative() const { return sign == IndexSign::Neg; }

    friend bool operator==(const EpsIndex&, const EpsIndex&) = default;
};

inline std::strong_ordering compare_index(const EpsIndex& a, const EpsIndex& b) {
    if (a.sign != b.sign)
        return a.sign == IndexSign::Neg ? std::strong_ordering::less
                                        : std::strong_ordering::greater;
    auto by_magnitude = [](CostValue x, CostValue y) {
        if (x < y) return std::strong_ordering::less;
        if (y < x) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    };
    // deeper robustness (larger magnitude) sits lower on the negative side
    return a.sign == IndexSign::Pos ? by_magnitude(a.magnitude, b.magnitude)
                                    : by_magnitude(b.magnitude, a.magnitude);
}

inline std::strong_ordering operator<=>(const EpsIndex& a, const EpsIndex& b) {
    return compare_index(a, b);
}

/// Formats a cost the way every export does: shortest round-trip decimal,
/// or "inf".
inline std::string format_cost(CostValue c) {
    if (std::isinf(c)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    // prefer the shortest representation that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char trial[32];
        std::snprintf(trial, sizeof trial, "%.*g", prec, c);
        if (std::strtod(trial, nullptr) == c) return trial;
    }
    return buf;
}

inline CostValue parse_cost(std::string_view s) {
    if (s == "inf" || s == "Inf" || s == "INF") return kInf;
    std::string tmp(s);
    char* end = nullptr;
    double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size())
        throw std::invalid_argument("not a number: '" + tmp + "'");
    return v;
}

inline std::string to_string(const EpsIndex& e) {
    return (e.is_negative() ? "-" : "+") + format_cost(e.magnitude);
}

/// Reads "+0.5", "-0", "-inf"; a bare number is positive.
inline EpsIndex parse_index(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty index");
    const bool neg = s.front() == '-';
    if (s.front() == '-' || s.front() == '+') s.remove_prefix(1);
    const CostValue m = parse_cost(s);
    if (m < 0) throw std::invalid_argument("index magnitude must be >= 0");
    return neg ? EpsIndex::neg(m) : EpsIndex::pos(m);
}

}  // namespace epsbasin
