#pragma once

// Positive and negative attracting basins, debut functions, filtrations and
// the inclusion / debut inequalities that relate them.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "epsbasin/reachability.hpp"

namespace epsbasin {

/// Which definition produced a negative basin.
enum class NegativeSemantics {
    DeadEnd,  ///< every eps-reachable dead end lies in A (robust basin)
    Horizon,  ///< every nonempty exact-horizon terminal set lies in A
};

inline std::string_view to_string(NegativeSemantics s) {
    return s == NegativeSemantics::DeadEnd ? "deadend" : "horizon";
}

inline NegativeSemantics parse_semantics(std::string_view s) {
    if (s == "deadend") return NegativeSemantics::DeadEnd;
    if (s == "horizon") return NegativeSemantics::Horizon;
    throw std::invalid_argument("unknown semantics '" + std::string(s) + "'");
}

struct BasinResult {
    EpsIndex index;
    BudgetMode mode = BudgetMode::MaxPerStep;
    StateSet members;
    NegativeSemantics semantics = NegativeSemantics::DeadEnd;
};

/// A_{F,eps}: states with an eps-controlled path into A.
inline BasinResult basin_pos(const SystemSpec& spec, const StateSet& A, CostValue eps, BudgetMode mode) {
    return {EpsIndex::pos(eps), mode, reach_basin(spec, A, eps, mode), NegativeSemantics::DeadEnd};
}

/// A_{F,-0}: states reaching a dead end of A by a zero-cost path.
inline BasinResult basin_zero_robust(const SystemSpec& spec, const StateSet& A) {
    return {EpsIndex::neg(0.0), BudgetMode::MaxPerStep,
            reach_basin(spec, A - spec.domain_set(), 0.0, BudgetMode::MaxPerStep), NegativeSemantics::DeadEnd};
}

/// A_{F,-eps}. DeadEnd: members of A_{F,-0} none of whose eps-reachable dead
/// ends leave A (eps = 0 gives A_{F,-0} itself). Horizon: states whose every
/// nonempty exact-horizon terminal set stays in A.
inline BasinResult basin_neg(const SystemSpec& spec, const StateSet& A, CostValue eps, BudgetMode mode,
                             NegativeSemantics semantics = NegativeSemantics::DeadEnd) {
    BasinResult out{EpsIndex::neg(eps), mode, StateSet(spec.size()), semantics};
    if (semantics == NegativeSemantics::Horizon) {
        for (StateId y = 0; y < spec.size(); ++y)
            if (forall_reach_all_horizons(spec, y, A, eps, mode)) out.members.insert(y);
        return out;
    }
    out.members = basin_zero_robust(spec, A).members;
    if (eps > 0.0) out.members -= reach_basin(spec, spec.dead_ends() - A, eps, mode);
    return out;
}

/// Basin at a signed index; negative indices use `semantics`.
inline BasinResult basin_at(const SystemSpec& spec, const StateSet& A, const EpsIndex& index, BudgetMode mode,
                            NegativeSemantics semantics = NegativeSemantics::DeadEnd) {
    if (index.is_negative()) return basin_neg(spec, A, index.magnitude, mode, semantics);
    return basin_pos(spec, A, index.magnitude, mode);
}

/// Value of a debut function: a signed index, or one of the two markers.
///
/// Negative(m): y is in A_{F,-0} and the cheapest escape to a dead end
/// outside A costs m. Positive(m): y is outside A_{F,-0} and entering A costs
/// m. NoEscape: no dead end outside A is reachable at all.
/// Unreachable: A is not reachable at all.
///
/// m may be infinite when the only paths use infinite-cost jumps. Such values
/// print and compare numerically like the markers, but unlike them they
/// still belong to (leave) the basin at index +inf (-inf).
class DebutValue {
public:
    enum class Kind { NoEscape, Negative, Positive, Unreachable };

    static DebutValue negative(CostValue m) { return DebutValue(Kind::Negative, m); }
    static DebutValue positive(CostValue m) { return DebutValue(Kind::Positive, m); }
    static DebutValue no_escape() { return DebutValue(Kind::NoEscape, kInf); }
    static DebutValue unreachable() { return DebutValue(Kind::Unreachable, kInf); }

    Kind kind() const { return kind_; }
    CostValue magnitude() const { return magnitude_; }
    bool is_negative_side() const { return kind_ == Kind::NoEscape || kind_ == Kind::Negative; }
    /// +inf or -inf: no finite budget changes membership.
    bool is_marker() const { return !std::isfinite(magnitude_); }

    /// The debut as an extended real; -0 and +0 both map to 0.
    double signed_value() const { return is_negative_side() ? -magnitude_ : magnitude_; }

    /// Membership of the basin at `index` read off the debut value:
    /// closed on the positive side (debut <= eps), open on the negative side
    /// (escape cost > eps), with the -0 basin being the whole negative side.
    bool in_sublevel(const EpsIndex& index) const {
        if (!index.is_negative()) {
            if (is_negative_side()) return true;
            return kind_ == Kind::Positive && magnitude_ <= index.magnitude;
        }
        if (!is_negative_side()) return false;
        if (index.magnitude == 0.0 || kind_ == Kind::NoEscape) return true;
        return magnitude_ > index.magnitude;
    }

    friend bool operator==(const DebutValue&, const DebutValue&) = default;

private:
    DebutValue(Kind k, CostValue m) : kind_(k), magnitude_(m) {}
    Kind kind_ = Kind::Unreachable;
    CostValue magnitude_ = kInf;
};

inline std::string to_string(const DebutValue& d) {
    switch (d.kind()) {
        case DebutValue::Kind::NoEscape: return "-inf";
        case DebutValue::Kind::Unreachable: return "+inf";
        case DebutValue::Kind::Negative: return "-" + format_cost(d.magnitude());
        case DebutValue::Kind::Positive: return "+" + format_cost(d.magnitude());
    }
    return "?";
}

namespace detail {

inline std::optional<CostValue> best_over(const Weights& w, const StateSet& targets) {
    std::optional<CostValue> best;
    for (StateId s : targets.members())
        if (w[s] && (!best || *w[s] < *best)) best = w[s];
    return best;
}

}  // namespace detail

/// Debut of a single state, by forward searches from y.
inline DebutValue debut(const SystemSpec& spec, StateId y, const StateSet& A, BudgetMode mode) {
    const Weights from_y = with_rule(mode, [&](auto rule) { return forward_weights<decltype(rule)>(spec, y); });
    const StateSet dead = spec.dead_ends();
    if (exists_reach(spec, y, A & dead, 0.0, BudgetMode::MaxPerStep)) {
        auto escape = detail::best_over(from_y, dead - A);
        return escape ? DebutValue::negative(*escape) : DebutValue::no_escape();
    }
    auto enter = detail::best_over(from_y, A);
    return enter ? DebutValue::positive(*enter) : DebutValue::unreachable();
}

using DebutField = std::vector<DebutValue>;

/// Debut of every state: three backward sweeps (zero-cost robustness, escape
/// cost, entry cost) instead of one forward search per state.
inline DebutField debut_field(const SystemSpec& spec, const StateSet& A, BudgetMode mode) {
    const StateSet dead = spec.dead_ends();
    const StateSet robust = reach_basin(spec, A & dead, 0.0, BudgetMode::MaxPerStep);
    const auto [escape, enter] = with_rule(mode, [&](auto rule) {
        using Rule = decltype(rule);
        return std::pair{backward_weights<Rule>(spec, dead - A), backward_weights<Rule>(spec, A)};
    });
    DebutField field;
    field.reserve(spec.size());
    for (StateId y = 0; y < spec.size(); ++y) {
        if (robust.contains(y))
            field.push_back(escape[y] ? DebutValue::negative(*escape[y]) : DebutValue::no_escape());
        else
            field.push_back(enter[y] ? DebutValue::positive(*enter[y]) : DebutValue::unreachable());
    }
    return field;
}

/// {y : debut(y) lies in the basin at `index`} under the attainment convention.
inline StateSet sublevel_set(const DebutField& field, const EpsIndex& index) {
    StateSet s(field.size());
    for (StateId y = 0; y < field.size(); ++y)
        if (field[y].in_sublevel(index)) s.insert(y);
    return s;
}

/// Sorted distinct finite pairwise costs, 0 included. Per-step basins only
/// change at these values.
inline std::vector<CostValue> auto_grid(const SystemSpec& spec) { return spec.finite_pair_costs(); }

/// The auto grid mirrored onto both sides, from (neg, inf) up to (pos, inf).
inline std::vector<EpsIndex> filtration_grid(const SystemSpec& spec) {
    const auto costs = auto_grid(spec);
    std::vector<EpsIndex> grid{EpsIndex::neg(kInf)};
    for (auto it = costs.rbegin(); it != costs.rend(); ++it) grid.push_back(EpsIndex::neg(*it));
    for (CostValue c : costs) grid.push_back(EpsIndex::pos(c));
    grid.push_back(EpsIndex::pos(kInf));
    return grid;
}

/// Basins at every grid index (dead-end semantics on the negative side).
inline std::vector<BasinResult> assemble_filtration(const SystemSpec& spec, const StateSet& A,
                                                    const std::vector<EpsIndex>& grid, BudgetMode mode) {
    if (!std::is_sorted(grid.begin(), grid.end(), [](const auto& a, const auto& b) { return a < b; }))
        throw std::invalid_argument("filtration grid must be sorted ascending");
    std::vector<BasinResult> out;
    out.reserve(grid.size());
    for (const auto& idx : grid) out.push_back(basin_at(spec, A, idx, mode));
    return out;
}

struct FiltrationCheck {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> offending;  // positions i < j with F_i not in F_j
    StateSet uncovered;
};

/// Nested (each set inside the next) and covering the universe.
inline FiltrationCheck check_filtration(const std::vector<BasinResult>& results, const StateSet& universe) {
    FiltrationCheck out{true, std::nullopt, StateSet(universe.universe())};
    for (std::size_t i = 0; i + 1 < results.size(); ++i) {
        if (!results[i].members.subset_of(results[i + 1].members)) {
            out.ok = false;
            out.offending = std::pair{i, i + 1};
            break;
        }
    }
    StateSet covered(universe.universe());
    for (const auto& r : results) covered |= r.members;
    out.uncovered = universe - covered;
    if (!out.uncovered.empty()) out.ok = false;
    return out;
}

struct LemmaFinding {
    std::string lemma;
    std::string detail;
    std::vector<StateId> witnesses;
};

struct LemmaReport {
    std::size_t instances = 0;
    std::vector<LemmaFinding> violations;
    std::vector<std::string> skipped;

    bool ok() const { return violations.empty(); }
    void merge(LemmaReport other) {
        instances += other.instances;
        for (auto& v : other.violations) violations.push_back(std::move(v));
        for (auto& s : other.skipped) skipped.push_back(std::move(s));
    }
};

namespace detail {

inline void expect_subset(LemmaReport& r, const std::string& lemma, const std::string& what, const StateSet& sub,
                          const StateSet& super) {
    ++r.instances;
    if (!sub.subset_of(super)) r.violations.push_back({lemma, what, (sub - super).members()});
}

inline void expect_equal(LemmaReport& r, const std::string& lemma, const std::string& what, const StateSet& a,
                         const StateSet& b) {
    ++r.instances;
    if (a != b) r.violations.push_back({lemma, what, ((a - b) | (b - a)).members()});
}

}  // namespace detail

/// Inclusions between basins of the two budget modes and across eps:
///   A_{eps,sum} in A_{eps}
///   A_{-eps} in A_{-eps,sum} in A_{-0,sum} = A_{-0} in A_{0} = A_{0,sum}
///   A in dead ends  =>  A_{0,sum} = A_{-0} = A_{0} = A_{-0,sum}
///   eps1 >= eps2  =>  A_{eps1} contains A_{eps2}, A_{-eps1} in A_{-eps2}   (both modes)
inline LemmaReport check_inclusion_lemmas(const SystemSpec& spec, const StateSet& A,
                                          const std::vector<CostValue>& eps_samples) {
    using detail::expect_equal;
    using detail::expect_subset;
    constexpr auto Max = BudgetMode::MaxPerStep;
    constexpr auto Sum = BudgetMode::TotalSum;
    LemmaReport r;

    const StateSet zero_robust = basin_zero_robust(spec, A).members;
    const StateSet zero_robust_sum = reach_basin(spec, A - spec.domain_set(), 0.0, Sum);
    const StateSet zero_max = basin_pos(spec, A, 0.0, Max).members;
    const StateSet zero_sum = basin_pos(spec, A, 0.0, Sum).members;
    expect_equal(r, "023", "A_{-0,sum} = A_{-0}", zero_robust_sum, zero_robust);
    expect_subset(r, "023", "A_{-0} in A_{0}", zero_robust, zero_max);
    expect_equal(r, "023", "A_{0} = A_{0,sum}", zero_max, zero_sum);
    if (A.subset_of(spec.dead_ends())) {
        expect_equal(r, "023", "dead-end A: A_{0,sum} = A_{-0}", zero_sum, zero_robust);
        expect_equal(r, "023", "dead-end A: A_{0} = A_{-0,sum}", zero_max, zero_robust_sum);
    }

    struct Row {
        CostValue eps;
        StateSet pos_max, pos_sum, neg_max, neg_sum;
    };
    std::vector<Row> rows;
    for (CostValue eps : eps_samples) {
        Row row{eps, basin_pos(spec, A, eps, Max).members, basin_pos(spec, A, eps, Sum).members,
                basin_neg(spec, A, eps, Max).members, basin_neg(spec, A, eps, Sum).members};
        const std::string at = " at eps=" + format_cost(eps);
        expect_subset(r, "two_inclusions", "A_{eps,sum} in A_{eps}" + at, row.pos_sum, row.pos_max);
        expect_subset(r, "023", "A_{-eps} in A_{-eps,sum}" + at, row.neg_max, row.neg_sum);
        expect_subset(r, "023", "A_{-eps,sum} in A_{-0,sum}" + at, row.neg_sum, zero_robust_sum);
        rows.push_back(std::move(row));
    }
    for (const auto& hi : rows)
        for (const auto& lo : rows) {
            if (hi.eps < lo.eps) continue;
            const std::string at = " for eps " + format_cost(hi.eps) + " >= " + format_cost(lo.eps);
            expect_subset(r, "inclusions", "A_{eps2} in A_{eps1}" + at, lo.pos_max, hi.pos_max);
            expect_subset(r, "inclusions", "A_{eps2,sum} in A_{eps1,sum}" + at, lo.pos_sum, hi.pos_sum);
            expect_subset(r, "inclusions", "A_{-eps1} in A_{-eps2}" + at, hi.neg_max, lo.neg_max);
            expect_subset(r, "inclusions", "A_{-eps1,sum} in A_{-eps2,sum}" + at, hi.neg_sum, lo.neg_sum);
        }
    return r;
}

/// Sign and ordering inequalities of the debut functions:
///   y outside A_0:   0 <= debut(y) <= debut_sum(y)
///   y inside A_0:    0 >= debut(y) >= debut_sum(y)
///   F(y) outside A_0: debut(y) <= debut(F(y)), same for sums
///   F(y) inside A_0:  0 >= debut(y) >= debut(F(y)), same for sums
///
/// The last family needs c(u, w) = 0 to force u = w: a zero-cost jump to a
/// distinct state can put y in A_{-0} while F(y) is not. On systems with such
/// pairs it is reported as skipped.
inline LemmaReport check_debut_lemmas(const SystemSpec& spec, const StateSet& A) {
    LemmaReport r;
    const DebutField by_max = debut_field(spec, A, BudgetMode::MaxPerStep);
    const DebutField by_sum = debut_field(spec, A, BudgetMode::TotalSum);
    const StateSet zero_basin = basin_pos(spec, A, 0.0, BudgetMode::MaxPerStep).members;
    const bool separating = spec.separates_points();
    if (!separating)
        r.skipped.push_back("debut_ineq2(2): cost has distinct zero-cost pairs, orbit monotonicity on A_0 not implied");

    auto fail = [&](const char* lemma, const std::string& what, StateId y) {
        r.violations.push_back({lemma, what + " at state " + std::to_string(y), {y}});
    };

    for (StateId y = 0; y < spec.size(); ++y) {
        const double e = by_max[y].signed_value();
        const double es = by_sum[y].signed_value();
        ++r.instances;
        if (!zero_basin.contains(y)) {
            if (!(0.0 <= e && e <= es)) fail("debut_ineq1", "0 <= debut <= debut_sum", y);
        } else if (!(0.0 >= e && e >= es)) {
            fail("debut_ineq1", "0 >= debut >= debut_sum", y);
        }

        const auto fy = spec.successor(y);
        if (!fy) continue;
        const double ef = by_max[*fy].signed_value();
        const double efs = by_sum[*fy].signed_value();
        if (!zero_basin.contains(*fy)) {
            ++r.instances;
            if (!(e <= ef)) fail("debut_ineq2", "debut(y) <= debut(F(y))", y);
            if (!(es <= efs)) fail("debut_ineq2", "debut_sum(y) <= debut_sum(F(y))", y);
        } else if (separating) {
            ++r.instances;
            if (!(0.0 >= e && e >= ef)) fail("debut_ineq2", "0 >= debut(y) >= debut(F(y))", y);
            if (!(0.0 >= es && es >= efs)) fail("debut_ineq2", "0 >= debut_sum(y) >= debut_sum(F(y))", y);
        }
    }
    return r;
}

}  // namespace epsbasin
