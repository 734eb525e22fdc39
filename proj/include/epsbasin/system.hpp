#pragma once

// Finite dynamical systems (Y, F, c): a state table, a partial successor map
// and a cost function on state pairs.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "epsbasin/index.hpp"
#include "epsbasin/state_set.hpp"

namespace epsbasin {

struct State {
    std::string label;
    std::vector<double> coords;
    std::optional<int> layer;        // time layer, used by layered costs
    std::optional<std::size_t> base; // base-state id when built by a time extension
};

enum class PlaneMetric {
    Euclidean,    // straight distance on raw coordinates
    HaversineKm,  // great-circle km, coords read as (lon, lat) degrees
};

inline double plane_distance(std::span<const double> a, std::span<const double> b, PlaneMetric m) {
    if (a.size() != b.size()) throw std::invalid_argument("coordinate dimensions differ");
    if (m == PlaneMetric::HaversineKm) {
        if (a.size() != 2) throw std::invalid_argument("haversine needs (lon, lat) pairs");
        constexpr double kRad = 3.14159265358979323846 / 180.0;
        constexpr double kEarthKm = 6371.0088;
        const double dlat = (b[1] - a[1]) * kRad;
        const double dlon = (b[0] - a[0]) * kRad;
        const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                         std::cos(a[1] * kRad) * std::cos(b[1] * kRad) *
                             std::sin(dlon / 2) * std::sin(dlon / 2);
        return 2.0 * kEarthKm * std::asin(std::min(1.0, std::sqrt(h)));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Explicit |Y| x |Y| table; entries may be infinite.
struct MatrixCost {
    std::vector<std::vector<CostValue>> values;
};

/// Distance between state coordinates.
struct EuclideanCost {
    PlaneMetric metric = PlaneMetric::Euclidean;
};

/// Distance within a time layer, infinite across layers.
struct LayeredEuclideanCost {
    PlaneMetric metric = PlaneMetric::Euclidean;
};

using CostModel = std::variant<MatrixCost, EuclideanCost, LayeredEuclideanCost>;

/// The triple (Y, F, c). Immutable after construction.
///
/// Construction never rejects data: structural problems are reported by
/// validate_system(). Search routines assume a spec that validates clean.
class SystemSpec {
public:
    SystemSpec() = default;
    SystemSpec(std::vector<State> states, std::vector<std::optional<StateId>> successor, CostModel cost)
        : states_(std::move(states)), successor_(std::move(successor)), cost_(std::move(cost)) {
        successor_.resize(states_.size());
        build_indexes();
    }

    std::size_t size() const { return states_.size(); }
    const std::vector<State>& states() const { return states_; }
    const State& state(StateId s) const { return states_.at(s); }
    const CostModel& cost_model() const { return cost_; }
    const std::vector<std::optional<StateId>>& successors() const { return successor_; }

    /// F(x) when x is in dom F and the target is a valid id.
    std::optional<StateId> successor(StateId x) const {
        const auto& s = successor_.at(x);
        if (s && *s < states_.size()) return s;
        return std::nullopt;
    }
    bool in_domain(StateId x) const { return successor(x).has_value(); }
    bool is_dead_end(StateId x) const { return !in_domain(x); }

    CostValue cost(StateId a, StateId b) const {
        return std::visit([&](const auto& m) { return cost_of(m, a, b); }, cost_);
    }

    bool is_layered() const { return std::holds_alternative<LayeredEuclideanCost>(cost_); }

    /// Jump targets w in dom F whose cost from u may be finite.
    std::span<const StateId> jump_candidates(StateId u) const { return group_domain_[group_[u]]; }

    /// States u whose jump cost to w may be finite.
    std::span<const StateId> jump_sources(StateId w) const { return group_members_[group_[w]]; }

    /// Jump targets usable within `limit`. Costs between layers are infinite,
    /// so an infinite limit opens every w in dom F.
    std::span<const StateId> jump_candidates(StateId u, CostValue limit) const {
        return std::isinf(limit) ? domain() : jump_candidates(u);
    }

    /// Jump sources usable within `limit`; every state when it is infinite.
    std::span<const StateId> jump_sources(StateId w, CostValue limit) const {
        return std::isinf(limit) ? std::span<const StateId>(all_) : jump_sources(w);
    }

    /// Preimage F^{-1}(v).
    std::span<const StateId> preimage(StateId v) const { return preimage_[v]; }

    std::span<const StateId> domain() const { return domain_; }

    StateSet domain_set() const { return StateSet::of(size(), domain_); }
    StateSet dead_ends() const { return domain_set().complement(); }
    StateSet image_set() const {
        StateSet im(size());
        for (StateId w : domain_) im.insert(*successor(w));
        return im;
    }

    /// Sorted distinct finite values of c(u, v) over all pairs that can be finite.
    std::vector<CostValue> finite_pair_costs() const {
        std::vector<CostValue> out{0.0};
        for (const auto& group : group_members_)
            for (StateId u : group)
                for (StateId v : group) {
                    CostValue c = cost(u, v);
                    if (std::isfinite(c)) out.push_back(c);
                }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// True when c(u, w) = 0 forces u = w for every jump the system can make.
    bool separates_points() const {
        for (StateId u = 0; u < size(); ++u)
            for (StateId w : jump_candidates(u))
                if (w != u && cost(u, w) == 0.0) return false;
        return true;
    }

private:
    CostValue cost_of(const MatrixCost& m, StateId a, StateId b) const { return m.values.at(a).at(b); }
    CostValue cost_of(const EuclideanCost& m, StateId a, StateId b) const {
        if (a == b) return 0.0;
        return plane_distance(states_[a].coords, states_[b].coords, m.metric);
    }
    CostValue cost_of(const LayeredEuclideanCost& m, StateId a, StateId b) const {
        if (states_[a].layer != states_[b].layer) return kInf;
        if (a == b) return 0.0;
        return plane_distance(states_[a].coords, states_[b].coords, m.metric);
    }

    void build_indexes() {
        const std::size_t n = states_.size();
        preimage_.assign(n, {});
        group_.assign(n, 0);
        all_.resize(n);
        std::iota(all_.begin(), all_.end(), StateId(0));
        for (StateId x = 0; x < n; ++x) {
            if (auto s = successor(x)) {
                domain_.push_back(x);
                preimage_[*s].push_back(x);
            }
        }
        if (is_layered()) {
            std::map<int, std::size_t> layer_group;
            for (const auto& st : states_) layer_group.emplace(st.layer.value_or(0), 0);
            std::size_t g = 0;
            for (auto& [layer, idx] : layer_group) idx = g++;
            group_members_.assign(layer_group.size(), {});
            for (StateId x = 0; x < n; ++x) group_[x] = layer_group.at(states_[x].layer.value_or(0));
        } else {
            group_members_.assign(1, {});
        }
        group_domain_.assign(group_members_.size(), {});
        for (StateId x = 0; x < n; ++x) {
            group_members_[group_[x]].push_back(x);
            if (in_domain(x)) group_domain_[group_[x]].push_back(x);
        }
    }

    std::vector<State> states_;
    std::vector<std::optional<StateId>> successor_;
    CostModel cost_;

    std::vector<StateId> all_;
    std::vector<StateId> domain_;
    std::vector<std::vector<StateId>> preimage_;
    std::vector<std::size_t> group_;
    std::vector<std::vector<StateId>> group_members_;
    std::vector<std::vector<StateId>> group_domain_;
};

struct Violation {
    std::string kind;
    std::vector<StateId> states;
    std::string message;
};

/// Checks the structural invariants of (Y, F, c). Violations are data.
inline std::vector<Violation> validate_system(const SystemSpec& spec) {
    std::vector<Violation> out;
    const std::size_t n = spec.size();
    const auto& succ = spec.successors();
    for (StateId x = 0; x < n; ++x) {
        if (succ[x] && *succ[x] >= n)
            out.push_back({"successor", {x},
                           "successor of state " + std::to_string(x) + " is " +
                               std::to_string(*succ[x]) + ", outside [0, " + std::to_string(n) + ")"});
    }

    auto check_coords = [&](bool need_layer) {
        std::optional<std::size_t> dim;
        for (StateId x = 0; x < n; ++x) {
            const auto& st = spec.state(x);
            if (st.coords.empty()) {
                out.push_back({"coords", {x}, "state " + std::to_string(x) + " has no coordinates"});
                continue;
            }
            if (!dim) dim = st.coords.size();
            if (st.coords.size() != *dim)
                out.push_back({"coords", {x}, "state " + std::to_string(x) + " has coordinate dimension " +
                                                  std::to_string(st.coords.size()) + ", expected " +
                                                  std::to_string(*dim)});
            for (double v : st.coords)
                if (!std::isfinite(v)) {
                    out.push_back({"coords", {x}, "state " + std::to_string(x) + " has a non-finite coordinate"});
                    break;
                }
            if (need_layer && !st.layer)
                out.push_back({"layer", {x}, "state " + std::to_string(x) + " has no time layer"});
        }
    };

    if (const auto* m = std::get_if<MatrixCost>(&spec.cost_model())) {
        if (m->values.size() != n) {
            out.push_back({"cost_shape", {}, "cost matrix has " + std::to_string(m->values.size()) +
                                                 " rows for " + std::to_string(n) + " states"});
            return out;
        }
        for (StateId x = 0; x < n; ++x) {
            if (m->values[x].size() != n) {
                out.push_back({"cost_shape", {x}, "cost row " + std::to_string(x) + " has " +
                                                      std::to_string(m->values[x].size()) + " entries"});
                continue;
            }
            for (StateId y = 0; y < n; ++y) {
                const CostValue c = m->values[x][y];
                if (!is_valid_cost(c))
                    out.push_back({"cost_value", {x, y}, "cost(" + std::to_string(x) + "," + std::to_string(y) +
                                                             ") is negative or NaN"});
                else if (x == y && c != 0.0)
                    out.push_back({"cost_diagonal", {x}, "cost(" + std::to_string(x) + "," + std::to_string(x) +
                                                             ") = " + format_cost(c) + ", must be 0"});
            }
        }
    } else {
        check_coords(spec.is_layered());
    }
    return out;
}

/// (y, F(y), F^2(y), ...) cut at `horizon` steps or at the first dead end.
inline std::vector<StateId> orbit(const SystemSpec& spec, StateId y, std::size_t horizon) {
    std::vector<StateId> out{y};
    while (out.size() <= horizon) {
        auto next = spec.successor(out.back());
        if (!next) break;
        out.push_back(*next);
    }
    return out;
}

}  // namespace epsbasin
