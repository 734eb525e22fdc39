#pragma once

// Small hand-built systems and random generators shared by the test suites.

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "epsbasin/system.hpp"
#include "epsbasin/time_extension.hpp"

namespace fixtures {

using namespace epsbasin;

inline MatrixCost abs_diff_cost(std::size_t n) {
    MatrixCost m;
    m.values.assign(n, std::vector<CostValue>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.values[i][j] = std::fabs(double(i) - double(j));
    return m;
}

inline std::vector<State> plain_states(std::size_t n) {
    std::vector<State> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i].label = std::to_string(i);
    return s;
}

/// f(0)=0, f(1)=f(2)=1 with c(n,m) = |n-m|: a total map.
inline SystemSpec three_point_total() {
    return SystemSpec(plain_states(3), {0, 1, 1}, abs_diff_cost(3));
}

/// F(0)=F(1)=0, F(2)=1; 2 is outside the image of F.
inline SystemSpec three_point_nonfiltration(MatrixCost cost = abs_diff_cost(3)) {
    return SystemSpec(plain_states(3), {0, 0, 1}, std::move(cost));
}

/// Two tracks P: 0,0,0 and Q: 1,1,2 on three layers, one state per
/// (step, track). Ids: (t, P) = 2t, (t, Q) = 2t + 1.
inline SystemSpec two_track_layered() {
    const double pos[2][3] = {{0, 0, 0}, {1, 1, 2}};
    std::vector<State> states;
    std::vector<std::optional<StateId>> succ;
    for (int t = 0; t < 3; ++t)
        for (int k = 0; k < 2; ++k) {
            State s;
            s.label = std::string(k == 0 ? "P" : "Q") + std::to_string(t);
            s.coords = {pos[k][t], 0.0};
            s.layer = t;
            states.push_back(s);
            succ.push_back(t < 2 ? std::optional<StateId>(StateId(2 * (t + 1) + k)) : std::nullopt);
        }
    return SystemSpec(std::move(states), std::move(succ), LayeredEuclideanCost{});
}

inline constexpr StateId kStartP = 0, kStartQ = 1, kEndP = 4, kEndQ = 5;

/// Random system with n states; costs are multiples of 1/4 (exact in
/// binary so sums never round) with some infinite entries. Off-diagonal
/// costs are strictly positive unless `allow_zero_pairs`.
inline SystemSpec random_system(std::mt19937_64& rng, std::size_t n, bool allow_zero_pairs = false) {
    std::uniform_int_distribution<int> quarter(allow_zero_pairs ? 0 : 1, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool total = u(rng) < 0.3;
    const double inf_rate = u(rng) * 0.3;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    std::vector<std::optional<StateId>> succ(n);
    for (std::size_t i = 0; i < n; ++i)
        if (total || u(rng) < 0.7) succ[i] = pick(rng);
    MatrixCost m;
    m.values.assign(n, std::vector<CostValue>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) m.values[i][j] = u(rng) < inf_rate ? kInf : quarter(rng) / 4.0;
    return SystemSpec(plain_states(n), std::move(succ), std::move(m));
}

/// Random nonempty proper-ish target set.
inline StateSet random_target(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StateSet a(n);
    for (std::size_t i = 0; i < n; ++i)
        if (u(rng) < 0.35) a.insert(i);
    if (a.empty()) a.insert(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    return a;
}

/// The two tracks above as a base map: P0 -> P1 -> P2, Q0 -> Q1 -> Q2,
/// base ids in the same order as two_track_layered, steps in `layer`.
inline BaseSystem two_track_base() {
    const double pos[2][3] = {{0, 0, 0}, {1, 1, 2}};
    BaseSystem base;
    for (int t = 0; t < 3; ++t)
        for (int k = 0; k < 2; ++k) {
            State s;
            s.label = std::string(k == 0 ? "P" : "Q") + std::to_string(t);
            s.coords = {pos[k][t], 0.0};
            s.layer = t;
            base.states.push_back(s);
            base.map.push_back(t < 2 ? std::optional<StateId>(StateId(2 * (t + 1) + k)) : std::nullopt);
        }
    return base;
}

/// Random base map on n points with distinct integer coordinates in the
/// plane (so the layered cost separates points); partial with probability
/// about 1/3 per point.
inline BaseSystem random_base(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coord(0, 9);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> die(0, 2);
    BaseSystem base;
    while (base.states.size() < n) {
        State s;
        s.coords = {double(coord(rng)), double(coord(rng))};
        bool fresh = true;
        for (const auto& o : base.states) fresh = fresh && o.coords != s.coords;
        if (!fresh) continue;
        s.label = "x" + std::to_string(base.states.size());
        base.states.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < n; ++i)
        base.map.push_back(die(rng) == 0 ? std::nullopt : std::optional<StateId>(pick(rng)));
    return base;
}

/// Random split of the final-layer bases of `ext` into (G2, B2).
inline std::pair<std::vector<StateId>, std::vector<StateId>> random_final_split(std::mt19937_64& rng,
                                                                                const TimeExtension& ext) {
    std::pair<std::vector<StateId>, std::vector<StateId>> out;
    for (StateId x : ext.final_bases()) (rng() & 1 ? out.first : out.second).push_back(x);
    return out;
}

}  // namespace fixtures
