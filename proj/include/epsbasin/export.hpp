#pragma once

// Text exports: debut fields (CSV and a JSON mirror), basin membership
// tables, separation verdicts, cluster labels and best-track series. All
// numbers use the shortest round-trip form and "inf".

#include <string>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "epsbasin/kmeans.hpp"
#include "epsbasin/time_extension.hpp"
#include "epsbasin/tracks.hpp"

namespace epsbasin {

namespace detail {

inline std::string coord_text(const State& s, std::size_t i) {
    return i < s.coords.size() ? format_cost(s.coords[i]) : "";
}

/// Labels can come from user files; quote anything that would break a row.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

}  // namespace detail

inline std::string debut_sign(const DebutValue& d) { return d.is_negative_side() ? "-" : "+"; }

/// state_id,label,x,y,debut_sign,debut_magnitude,mode,semantics
inline std::string debut_csv(const SystemSpec& spec, const DebutField& field, BudgetMode mode,
                             NegativeSemantics semantics = NegativeSemantics::DeadEnd) {
    std::string out = "state_id,label,x,y,debut_sign,debut_magnitude,mode,semantics\n";
    for (StateId s = 0; s < spec.size(); ++s) {
        const State& st = spec.state(s);
        out += std::to_string(s) + "," + detail::csv_field(st.label) + "," + detail::coord_text(st, 0) + "," +
               detail::coord_text(st, 1) + "," + debut_sign(field[s]) + "," + format_cost(field[s].magnitude()) + "," +
               std::string(to_string(mode)) + "," + std::string(to_string(semantics)) + "\n";
    }
    return out;
}

inline std::string debut_json(const SystemSpec& spec, const DebutField& field, BudgetMode mode,
                              NegativeSemantics semantics = NegativeSemantics::DeadEnd) {
    nlohmann::json rows = nlohmann::json::array();
    for (StateId s = 0; s < spec.size(); ++s) {
        const State& st = spec.state(s);
        nlohmann::json r;
        r["state_id"] = s;
        r["label"] = st.label;
        r["x"] = st.coords.size() > 0 ? nlohmann::json(st.coords[0]) : nlohmann::json(nullptr);
        r["y"] = st.coords.size() > 1 ? nlohmann::json(st.coords[1]) : nlohmann::json(nullptr);
        r["debut_sign"] = debut_sign(field[s]);
        r["debut_magnitude"] = field[s].is_marker() ? nlohmann::json("inf") : nlohmann::json(field[s].magnitude());
        r["mode"] = to_string(mode);
        r["semantics"] = to_string(semantics);
        rows.push_back(std::move(r));
    }
    return rows.dump(1) + "\n";
}

/// Reads the debut columns back. A sign with magnitude "inf" is read as the
/// corresponding marker.
inline DebutField parse_debut_csv(std::string_view text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(0, "empty debut file");
    const auto col = csv::header_columns<3>(rows[0].second, {"state_id", "debut_sign", "debut_magnitude"}, rows[0].first);
    DebutField out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto [line, body] = rows[r];
        const auto f = csv::split(body);
        if (f.size() <= std::max({col[0], col[1], col[2]})) throw ParseError(line, "short row");
        if (csv::to_int(f[col[0]], line, "state_id") != int(out.size())) throw ParseError(line, "state ids out of order");
        const double m = csv::to_double(f[col[2]], line, "debut_magnitude");
        if (f[col[1]] == "-")
            out.push_back(std::isinf(m) ? DebutValue::no_escape() : DebutValue::negative(m));
        else if (f[col[1]] == "+")
            out.push_back(std::isinf(m) ? DebutValue::unreachable() : DebutValue::positive(m));
        else
            throw ParseError(line, "debut_sign must be + or -");
    }
    return out;
}

struct BasinTable {
    std::string target;  // "good" or "bad"
    BudgetMode mode = BudgetMode::MaxPerStep;
    NegativeSemantics semantics = NegativeSemantics::DeadEnd;
    std::vector<EpsIndex> indices;  // ascending
    std::vector<StateSet> members;  // one per index
};

/// Wide membership table: state_id,label, then one 0/1 column per index.
inline std::string basin_csv(const SystemSpec& spec, const BasinTable& t) {
    std::string out = "state_id,label";
    for (const auto& i : t.indices) out += "," + to_string(i);
    out += "\n";
    for (StateId s = 0; s < spec.size(); ++s) {
        out += std::to_string(s) + "," + detail::csv_field(spec.state(s).label);
        for (const auto& m : t.members) out += m.contains(s) ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

inline std::string basin_json(const BasinTable& t) {
    nlohmann::json j;
    j["target"] = t.target;
    j["mode"] = to_string(t.mode);
    j["semantics"] = to_string(t.semantics);
    nlohmann::json basins = nlohmann::json::array();
    for (std::size_t i = 0; i < t.indices.size(); ++i)
        basins.push_back({{"index", to_string(t.indices[i])}, {"members", t.members[i].members()}});
    j["basins"] = std::move(basins);
    return j.dump(1) + "\n";
}

/// Reads a wide membership table back into (indices, member sets).
inline std::pair<std::vector<EpsIndex>, std::vector<StateSet>> parse_basin_csv(std::string_view text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(0, "empty basin table");
    const auto head = csv::split(rows[0].second);
    if (head.size() < 2 || head[0] != "state_id" || head[1] != "label")
        throw ParseError(rows[0].first, "basin table must start with state_id,label");
    std::vector<EpsIndex> idx;
    for (std::size_t c = 2; c < head.size(); ++c) {
        try {
            idx.push_back(parse_index(head[c]));
        } catch (const std::invalid_argument& e) {
            throw ParseError(rows[0].first, e.what());
        }
    }
    const std::size_t n = rows.size() - 1;
    std::vector<StateSet> sets(idx.size(), StateSet(n));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto [line, body] = rows[r];
        const auto f = csv::split(body);
        if (f.size() != head.size()) throw ParseError(line, "row width differs from header");
        for (std::size_t c = 0; c < idx.size(); ++c)
            if (f[c + 2] == "1") sets[c].insert(r - 1);
    }
    return {idx, sets};
}

struct SeparationRow {
    CostValue eps = 0;
    BudgetMode mode = BudgetMode::MaxPerStep;
    SeparationReport report;
};

inline std::string separation_csv(const std::vector<SeparationRow>& rows) {
    std::string out = "eps,mode,verdict,good_basin,bad_basin,overlap,uncovered\n";
    for (const auto& r : rows)
        out += format_cost(r.eps) + "," + std::string(to_string(r.mode)) + "," + std::string(to_string(r.report.verdict)) +
               "," + std::to_string(r.report.good.count()) + "," + std::to_string(r.report.bad.count()) + "," +
               std::to_string(r.report.overlap.count()) + "," + std::to_string(r.report.uncovered.count()) + "\n";
    return out;
}

/// One row per dataset point.
inline std::string cluster_csv(const TrackDataset& ds, const ClusterAssignment& ca) {
    std::string out = "point_id,track_id,member,step,lon,lat,cluster\n";
    std::size_t i = 0;
    for (const auto& t : ds.tracks)
        for (const auto& p : t.points) {
            out += std::to_string(i) + "," + detail::csv_field(t.id) + "," + std::to_string(t.member) + "," +
                   std::to_string(p.step) + "," + format_cost(p.pos[0]) + "," + format_cost(p.pos[1]) + "," +
                   std::to_string(ca.labels[i]) + "\n";
            ++i;
        }
    return out;
}

inline std::string centroid_csv(const ClusterAssignment& ca) {
    std::string out = "cluster,lon,lat,size\n";
    std::vector<std::size_t> size(ca.k, 0);
    for (int l : ca.labels) ++size[l];
    for (int c = 0; c < ca.k; ++c)
        out += std::to_string(c) + "," + format_cost(ca.centroids[c][0]) + "," + format_cost(ca.centroids[c][1]) + "," +
               std::to_string(size[c]) + "\n";
    return out;
}

/// timestamp,sign,magnitude
inline std::string series_csv(const std::vector<SeriesPoint>& series) {
    std::string out = "timestamp,sign,magnitude\n";
    for (const auto& p : series)
        out += detail::csv_field(p.timestamp) + "," + debut_sign(p.value) + "," + format_cost(p.value.magnitude()) + "\n";
    return out;
}

}  // namespace epsbasin
