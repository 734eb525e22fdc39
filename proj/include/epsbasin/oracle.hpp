#pragma once

// Exhaustive reference computations for small systems. These enumerate
// controlled paths length by length and share no code with the
// priority-queue searches, so the two can check each other.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "epsbasin/basins.hpp"
#include "epsbasin/system.hpp"

namespace epsbasin::oracle {

inline constexpr std::size_t kDefaultSizeBound = 12;

namespace detail {

inline void require_small(const SystemSpec& spec, std::size_t size_bound) {
    if (spec.size() > size_bound)
        throw std::invalid_argument("brute-force oracle limited to " + std::to_string(size_bound) +
                                    " states, got " + std::to_string(spec.size()));
}

/// cheapest[k][v]: least weight of a length-k path from y to v, over all
/// k <= horizon. Plain enumeration over every (state, jump target) pair at
/// every depth.
inline std::vector<std::vector<std::optional<CostValue>>> depth_table(const SystemSpec& spec, StateId y,
                                                                      BudgetMode mode, std::size_t horizon) {
    const std::size_t n = spec.size();
    std::vector<std::vector<std::optional<CostValue>>> table(horizon + 1,
                                                             std::vector<std::optional<CostValue>>(n));
    table[0][y] = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) {
        for (StateId u = 0; u < n; ++u) {
            if (!table[k][u]) continue;
            for (StateId w = 0; w < n; ++w) {
                const auto next = spec.successor(w);
                if (!next) continue;
                const CostValue c = spec.cost(u, w);
                const CostValue acc = mode == BudgetMode::MaxPerStep ? std::max(*table[k][u], c)
                                                                     : *table[k][u] + c;
                auto& slot = table[k + 1][*next];
                if (!slot || acc < *slot) slot = acc;
            }
        }
    }
    return table;
}

}  // namespace detail

/// y reaches A within eps, by enumerating every path of length <= horizon_cap
/// (defaults to |Y|). Per-step budgets filter edges by eps before the
/// enumeration; total budgets compare accumulated sums afterwards.
inline bool brute_force_reach(const SystemSpec& spec, StateId y, const StateSet& A, CostValue eps, BudgetMode mode,
                              std::optional<std::size_t> horizon_cap = std::nullopt,
                              std::size_t size_bound = kDefaultSizeBound) {
    detail::require_small(spec, size_bound);
    const std::size_t horizon = horizon_cap.value_or(spec.size());
    if (horizon < spec.size()) throw std::invalid_argument("horizon_cap must be at least the number of states");
    if (A.contains(y)) return true;

    if (mode == BudgetMode::MaxPerStep) {
        // frontier of states reachable by paths of exactly k steps
        std::vector<bool> frontier(spec.size(), false);
        frontier[y] = true;
        for (std::size_t k = 0; k < horizon; ++k) {
            std::vector<bool> next(spec.size(), false);
            for (StateId u = 0; u < spec.size(); ++u) {
                if (!frontier[u]) continue;
                for (StateId w = 0; w < spec.size(); ++w)
                    if (auto v = spec.successor(w); v && spec.cost(u, w) <= eps) next[*v] = true;
            }
            for (StateId v = 0; v < spec.size(); ++v)
                if (next[v] && A.contains(v)) return true;
            frontier = std::move(next);
        }
        return false;
    }
    const auto table = detail::depth_table(spec, y, mode, horizon);
    for (const auto& row : table)
        for (StateId v = 0; v < spec.size(); ++v)
            if (row[v] && *row[v] <= eps && A.contains(v)) return true;
    return false;
}

/// Least weight of a controlled path from y into `targets`, or nullopt.
///
/// Per-step budgets: the smallest threshold among all pairwise costs (and
/// infinity) at which brute_force_reach succeeds. Total budgets: minimum
/// over the depth table up to |Y| steps.
inline std::optional<CostValue> brute_force_min_weight(const SystemSpec& spec, StateId y, const StateSet& targets,
                                                       BudgetMode mode,
                                                       std::size_t size_bound = kDefaultSizeBound) {
    detail::require_small(spec, size_bound);
    if (targets.contains(y)) return 0.0;
    if (mode == BudgetMode::MaxPerStep) {
        std::vector<CostValue> thresholds{0.0, kInf};
        for (StateId u = 0; u < spec.size(); ++u)
            for (StateId v = 0; v < spec.size(); ++v) thresholds.push_back(spec.cost(u, v));
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        for (CostValue t : thresholds)
            if (brute_force_reach(spec, y, targets, t, mode, std::nullopt, size_bound)) return t;
        return std::nullopt;
    }
    const auto table = detail::depth_table(spec, y, mode, spec.size());
    std::optional<CostValue> best;
    for (const auto& row : table)
        for (StateId v = 0; v < spec.size(); ++v)
            if (row[v] && targets.contains(v) && (!best || *row[v] < *best)) best = row[v];
    return best;
}

/// Debut of y from the definitions, using only the enumerations above.
inline DebutValue brute_force_debut(const SystemSpec& spec, StateId y, const StateSet& A, BudgetMode mode,
                                    std::size_t size_bound = kDefaultSizeBound) {
    StateSet dead(spec.size());
    for (StateId v = 0; v < spec.size(); ++v)
        if (!spec.successor(v)) dead.insert(v);
    if (brute_force_reach(spec, y, A & dead, 0.0, BudgetMode::MaxPerStep, std::nullopt, size_bound)) {
        const auto escape = brute_force_min_weight(spec, y, dead - A, mode, size_bound);
        return escape ? DebutValue::negative(*escape) : DebutValue::no_escape();
    }
    const auto enter = brute_force_min_weight(spec, y, A, mode, size_bound);
    return enter ? DebutValue::positive(*enter) : DebutValue::unreachable();
}

}  // namespace epsbasin::oracle
