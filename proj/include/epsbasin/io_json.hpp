#pragma once

// System interchange as JSON:
//   {"states": [{"label": "a", "coords": [x, y], "layer": 0, "base": 3}, ...],
//    "successor": [1, null, ...],
//    "cost": {"kind": "matrix", "values": [[0, "inf"], ...]}
//          | {"kind": "euclidean" | "layered_euclidean", "metric": "haversine_km"}}
// label, coords, layer, base and metric are optional.

#include <string>
#include <string_view>

#include "json.hpp"  // vendored nlohmann/json

#include "epsbasin/system.hpp"
#include "epsbasin/tracks.hpp"

namespace epsbasin {

namespace detail {

inline CostValue json_cost(const nlohmann::json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return kInf;
        throw ParseError(0, "cost entry '" + v.get<std::string>() + "' is not a number or \"inf\"");
    }
    if (!v.is_number()) throw ParseError(0, "cost entry must be a number or \"inf\"");
    return v.get<double>();
}

inline nlohmann::json cost_json(CostValue c) {
    if (std::isinf(c)) return "inf";
    return c;
}

inline PlaneMetric parse_metric(std::string_view s) {
    if (s == "euclidean") return PlaneMetric::Euclidean;
    if (s == "haversine_km") return PlaneMetric::HaversineKm;
    throw ParseError(0, "unknown metric '" + std::string(s) + "'");
}

inline std::string_view metric_name(PlaneMetric m) {
    return m == PlaneMetric::HaversineKm ? "haversine_km" : "euclidean";
}

}  // namespace detail

/// Structural problems (bad diagonal, out-of-range successor) are left to
/// validate_system; only malformed JSON or wrong types throw.
inline SystemSpec system_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw ParseError(0, "system must be a JSON object");
        const auto& js = j.at("states");
        const auto& jf = j.at("successor");
        const auto& jc = j.at("cost");
        if (!js.is_array() || !jf.is_array()) throw ParseError(0, "states and successor must be arrays");
        if (js.size() != jf.size()) throw ParseError(0, "states and successor differ in length");

        std::vector<State> states(js.size());
        for (std::size_t i = 0; i < js.size(); ++i) {
            const auto& s = js[i];
            states[i].label = s.contains("label") ? s.at("label").get<std::string>() : std::to_string(i);
            if (s.contains("coords")) states[i].coords = s.at("coords").get<std::vector<double>>();
            if (s.contains("layer")) states[i].layer = s.at("layer").get<int>();
            if (s.contains("base")) states[i].base = s.at("base").get<std::size_t>();
        }
        std::vector<std::optional<StateId>> succ(jf.size());
        for (std::size_t i = 0; i < jf.size(); ++i) {
            if (jf[i].is_null()) continue;
            const long v = jf[i].get<long>();
            // negative ids cannot be held by StateId; keep them as out of range
            succ[i] = v < 0 ? StateId(-1) : StateId(v);
        }

        const std::string kind = jc.at("kind").get<std::string>();
        const PlaneMetric metric =
            jc.contains("metric") ? detail::parse_metric(jc.at("metric").get<std::string>()) : PlaneMetric::Euclidean;
        CostModel cost;
        if (kind == "matrix") {
            MatrixCost m;
            for (const auto& row : jc.at("values")) {
                if (!row.is_array()) throw ParseError(0, "matrix rows must be arrays");
                std::vector<CostValue> r;
                for (const auto& v : row) r.push_back(detail::json_cost(v));
                m.values.push_back(std::move(r));
            }
            cost = std::move(m);
        } else if (kind == "euclidean") {
            cost = EuclideanCost{metric};
        } else if (kind == "layered_euclidean") {
            cost = LayeredEuclideanCost{metric};
        } else {
            throw ParseError(0, "unknown cost kind '" + kind + "'");
        }
        return SystemSpec(std::move(states), std::move(succ), std::move(cost));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("system JSON: ") + e.what());
    }
}

inline SystemSpec read_system_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("invalid JSON: ") + e.what());
    }
    return system_from_json(j);
}

inline nlohmann::json system_to_json(const SystemSpec& spec) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : spec.states()) {
        nlohmann::json o;
        o["label"] = s.label;
        if (!s.coords.empty()) o["coords"] = s.coords;
        if (s.layer) o["layer"] = *s.layer;
        if (s.base) o["base"] = *s.base;
        states.push_back(std::move(o));
    }
    nlohmann::json succ = nlohmann::json::array();
    for (const auto& f : spec.successors()) succ.push_back(f ? nlohmann::json(*f) : nlohmann::json(nullptr));

    nlohmann::json cost;
    std::visit(
        [&](const auto& c) {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, MatrixCost>) {
                cost["kind"] = "matrix";
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& row : c.values) {
                    nlohmann::json r = nlohmann::json::array();
                    for (CostValue v : row) r.push_back(detail::cost_json(v));
                    rows.push_back(std::move(r));
                }
                cost["values"] = std::move(rows);
            } else {
                cost["kind"] = std::is_same_v<C, EuclideanCost> ? "euclidean" : "layered_euclidean";
                if (c.metric != PlaneMetric::Euclidean) cost["metric"] = detail::metric_name(c.metric);
            }
        },
        spec.cost_model());
    return {{"states", std::move(states)}, {"successor", std::move(succ)}, {"cost", std::move(cost)}};
}

inline std::string write_system_json(const SystemSpec& spec) { return system_to_json(spec).dump(1) + "\n"; }

}  // namespace epsbasin
