#pragma once

// Label-setting searches on the step graph of a system.
//
// One step from u picks a jump target w in dom F, pays c(u, w) and lands on
// F(w). The step graph therefore has an edge u -> F(w) of weight c(u, w) for
// every u and every w in dom F. Path weights combine edge weights with a
// budget rule: max for per-step budgets, + for total budgets. Both rules are
// monotone and never decrease a label, so Dijkstra-style search is exact.

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "epsbasin/system.hpp"

namespace epsbasin {

struct MaxRule {
    static constexpr BudgetMode mode = BudgetMode::MaxPerStep;
    static CostValue combine(CostValue acc, CostValue edge) { return std::max(acc, edge); }
};

struct SumRule {
    static constexpr BudgetMode mode = BudgetMode::TotalSum;
    static CostValue combine(CostValue acc, CostValue edge) { return acc + edge; }
};

/// Calls f(MaxRule{}) or f(SumRule{}) according to the runtime mode.
template <class F>
decltype(auto) with_rule(BudgetMode mode, F&& f) {
    if (mode == BudgetMode::MaxPerStep) return std::forward<F>(f)(MaxRule{});
    return std::forward<F>(f)(SumRule{});
}

/// Best path weight per state; nullopt when no path fits the limit.
using Weights = std::vector<std::optional<CostValue>>;

namespace detail {

using Entry = std::pair<CostValue, StateId>;
using MinQueue = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

inline bool improves(const std::optional<CostValue>& old, CostValue cand) { return !old || cand < *old; }

}  // namespace detail

/// Minimum weight of a controlled path (length >= 0) from `source` to every
/// state, counting only paths of weight <= limit. Weights fold left to right.
template <class Rule>
Weights forward_weights(const SystemSpec& spec, StateId source, CostValue limit = kInf) {
    Weights dist(spec.size());
    std::vector<bool> done(spec.size(), false);
    detail::MinQueue queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = true;
        for (StateId w : spec.jump_candidates(u, limit)) {
            const CostValue cand = Rule::combine(d, spec.cost(u, w));
            if (cand > limit) continue;
            const StateId v = *spec.successor(w);
            if (!done[v] && detail::improves(dist[v], cand)) {
                dist[v] = cand;
                queue.emplace(cand, v);
            }
        }
    }
    return dist;
}

/// Minimum weight of a controlled path from every state into `targets`,
/// counting only paths of weight <= limit. One multi-target sweep over the
/// reversed step graph; weights fold right to left.
template <class Rule>
Weights backward_weights(const SystemSpec& spec, const StateSet& targets, CostValue limit = kInf) {
    Weights dist(spec.size());
    std::vector<bool> done(spec.size(), false);
    detail::MinQueue queue;
    for (StateId t : targets.members()) {
        dist[t] = 0.0;
        queue.emplace(0.0, t);
    }
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[v]) continue;
        done[v] = true;
        for (StateId w : spec.preimage(v)) {
            for (StateId u : spec.jump_sources(w, limit)) {
                if (done[u]) continue;
                const CostValue cand = Rule::combine(d, spec.cost(u, w));
                if (cand > limit) continue;
                if (detail::improves(dist[u], cand)) {
                    dist[u] = cand;
                    queue.emplace(cand, u);
                }
            }
        }
    }
    return dist;
}

/// One exact-length step: best weight of length-(k+1) paths from the
/// length-k weights `current`.
template <class Rule>
Weights horizon_step(const SystemSpec& spec, const Weights& current, CostValue limit) {
    Weights next(spec.size());
    for (StateId u = 0; u < spec.size(); ++u) {
        if (!current[u]) continue;
        for (StateId w : spec.jump_candidates(u, limit)) {
            const CostValue cand = Rule::combine(*current[u], spec.cost(u, w));
            if (cand > limit) continue;
            const StateId v = *spec.successor(w);
            if (detail::improves(next[v], cand)) next[v] = cand;
        }
    }
    return next;
}

inline StateSet reached(const Weights& w) {
    StateSet s(w.size());
    for (StateId i = 0; i < w.size(); ++i)
        if (w[i]) s.insert(i);
    return s;
}

inline StateSet within(const Weights& w, CostValue eps) {
    StateSet s(w.size());
    for (StateId i = 0; i < w.size(); ++i)
        if (w[i] && *w[i] <= eps) s.insert(i);
    return s;
}

}  // namespace epsbasin
