#pragma once

// Controlled-path relations: existence of an eps-controlled path into a
// target set, reachable and dead-end terminal sets, exact-horizon relations
// and minimal witness paths.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "epsbasin/search.hpp"

namespace epsbasin {

/// y reaches A by an eps-controlled path of some length n >= 0.
inline bool exists_reach(const SystemSpec& spec, StateId y, const StateSet& A, CostValue eps, BudgetMode mode) {
    if (A.contains(y)) return true;
    const Weights w = with_rule(mode, [&](auto rule) {
        return forward_weights<decltype(rule)>(spec, y, eps);
    });
    for (StateId s = 0; s < w.size(); ++s)
        if (w[s] && A.contains(s)) return true;
    return false;
}

/// {y' : y reaches {y'}}; always contains y.
inline StateSet reach_set(const SystemSpec& spec, StateId y, CostValue eps, BudgetMode mode) {
    return reached(with_rule(mode, [&](auto rule) { return forward_weights<decltype(rule)>(spec, y, eps); }));
}

/// Terminal states of reach_set outside dom F.
inline StateSet deadend_reach_set(const SystemSpec& spec, StateId y, CostValue eps, BudgetMode mode) {
    return reach_set(spec, y, eps, mode) & spec.dead_ends();
}

/// {y : y reaches A}, computed by one backward sweep from A. Agrees with
/// exists_reach state by state.
inline StateSet reach_basin(const SystemSpec& spec, const StateSet& A, CostValue eps, BudgetMode mode) {
    return reached(with_rule(mode, [&](auto rule) { return backward_weights<decltype(rule)>(spec, A, eps); }));
}

/// R_n(y, eps): terminal states of controlled paths of length exactly n.
inline StateSet horizon_terminal_set(const SystemSpec& spec, StateId y, CostValue eps, std::size_t n,
                                     BudgetMode mode) {
    return with_rule(mode, [&](auto rule) {
        Weights cur(spec.size());
        cur[y] = 0.0;
        for (std::size_t k = 0; k < n; ++k) cur = horizon_step<decltype(rule)>(spec, cur, eps);
        return reached(cur);
    });
}

/// R_n(y, eps) is nonempty and contained in A.
inline bool forall_reach_at_horizon(const SystemSpec& spec, StateId y, const StateSet& A, CostValue eps,
                                    std::size_t n, BudgetMode mode) {
    const StateSet r = horizon_terminal_set(spec, y, eps, n, mode);
    return !r.empty() && r.subset_of(A);
}

/// Every nonempty R_n(y, eps), n >= 0, lies in A.
///
/// The sequence R_0, R_1, ... is generated by a deterministic update on a
/// finite state (the reached set for per-step budgets, the vector of best
/// weights <= eps for total budgets), so it is eventually periodic; the scan
/// stops at the first repeated state.
inline bool forall_reach_all_horizons(const SystemSpec& spec, StateId y, const StateSet& A, CostValue eps,
                                      BudgetMode mode) {
    // with an unlimited budget every path qualifies and sums never matter
    if (mode == BudgetMode::TotalSum && std::isinf(eps)) mode = BudgetMode::MaxPerStep;

    return with_rule(mode, [&](auto rule) {
        using Rule = decltype(rule);
        Weights cur(spec.size());
        cur[y] = 0.0;
        std::set<std::vector<std::optional<CostValue>>> seen;
        while (true) {
            const StateSet r = reached(cur);
            if (r.empty()) return true;
            if (!r.subset_of(A)) return false;
            std::vector<std::optional<CostValue>> key;
            if constexpr (Rule::mode == BudgetMode::MaxPerStep) {
                key.resize(cur.size());
                for (StateId s = 0; s < cur.size(); ++s)
                    if (cur[s]) key[s] = 0.0;
            } else {
                key = cur;
            }
            if (!seen.insert(std::move(key)).second) return true;
            cur = horizon_step<Rule>(spec, cur, eps);
        }
    });
}

struct Jump {
    StateId target;   // y_i, a state of dom F
    CostValue cost;   // c(current, y_i)
};

/// (y; y_0, ..., y_{n-1}; F(y_{n-1})). A path with no jumps is the
/// zero-length marker for y already in the target.
struct ControlledPath {
    StateId initial = 0;
    std::vector<Jump> controls;
    StateId terminal = 0;
    CostValue weight = 0.0;

    std::size_t length() const { return controls.size(); }
};

/// A minimum-weight controlled path from y into A whose weight is <= eps.
///
/// Among minimum-weight paths the shortest wins, then the lexicographically
/// smallest sequence of jump targets. Returns the zero-length marker when
/// y is in A and nullopt when no path fits the budget.
inline std::optional<ControlledPath> witness_path(const SystemSpec& spec, StateId y, const StateSet& A,
                                                  CostValue eps, BudgetMode mode) {
    if (A.contains(y)) return ControlledPath{y, {}, y, 0.0};

    return with_rule(mode, [&](auto rule) -> std::optional<ControlledPath> {
        using Rule = decltype(rule);
        const Weights to_target = backward_weights<Rule>(spec, A);
        if (!to_target[y] || *to_target[y] > eps) return std::nullopt;
        const CostValue best = *to_target[y];

        // an edge u -> F(w) is usable when it continues some optimal path
        auto usable = [&](StateId u, StateId w) {
            const auto& rest = to_target[*spec.successor(w)];
            if (!rest) return false;
            const CostValue c = spec.cost(u, w);
            if constexpr (Rule::mode == BudgetMode::MaxPerStep)
                return c <= best && *rest <= best;
            else
                return to_target[u] && Rule::combine(*rest, c) == *to_target[u];
        };

        // hop distance to A over usable edges
        std::vector<std::optional<std::size_t>> hops(spec.size());
        std::deque<StateId> queue;
        for (StateId t : A.members()) {
            hops[t] = 0;
            queue.push_back(t);
        }
        while (!queue.empty()) {
            const StateId v = queue.front();
            queue.pop_front();
            for (StateId w : spec.preimage(v))
                for (StateId u : spec.jump_sources(w, best))
                    if (!hops[u] && usable(u, w)) {
                        hops[u] = *hops[v] + 1;
                        queue.push_back(u);
                    }
        }
        if (!hops[y]) return std::nullopt;

        ControlledPath path{y, {}, y, 0.0};
        StateId cur = y;
        do {
            std::optional<StateId> pick;
            for (StateId w : spec.jump_candidates(cur, best)) {
                const StateId v = *spec.successor(w);
                if (usable(cur, w) && hops[v] && *hops[v] + 1 == *hops[cur]) {
                    pick = w;  // candidates are in increasing id order
                    break;
                }
            }
            path.controls.push_back({*pick, spec.cost(cur, *pick)});
            cur = *spec.successor(*pick);
        } while (*hops[cur] != 0);
        path.terminal = cur;
        // report the weight as folded by the backward sweep (right to left)
        CostValue acc = 0.0;
        for (auto it = path.controls.rbegin(); it != path.controls.rend(); ++it) acc = Rule::combine(acc, it->cost);
        path.weight = acc;
        return path;
    });
}

}  // namespace epsbasin
