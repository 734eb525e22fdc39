#pragma once

// Good and bad target sets picked by cluster, ensemble member or state id.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "epsbasin/kmeans.hpp"

namespace epsbasin {

/// "cluster:0,3", "member:1,2,3,4", "state:5,7" or "rest" (the complement
/// of the other side).
struct TargetSpec {
    enum class Kind { Clusters, Members, States, Rest };
    Kind kind = Kind::Rest;
    std::vector<long> ids;
};

inline TargetSpec parse_target(std::string_view text) {
    if (text == "rest") return {TargetSpec::Kind::Rest, {}};
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("target '" + std::string(text) + "' needs kind:ids");
    const std::string_view kind = text.substr(0, colon);
    TargetSpec t;
    if (kind == "cluster")
        t.kind = TargetSpec::Kind::Clusters;
    else if (kind == "member")
        t.kind = TargetSpec::Kind::Members;
    else if (kind == "state")
        t.kind = TargetSpec::Kind::States;
    else
        throw std::invalid_argument("unknown target kind '" + std::string(kind) + "'");
    for (auto f : csv::split(text.substr(colon + 1))) {
        long v = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || p != f.data() + f.size() || v < 0)
            throw std::invalid_argument("bad id '" + std::string(f) + "' in target '" + std::string(text) + "'");
        t.ids.push_back(v);
    }
    return t;
}

inline std::string to_string(const TargetSpec& t) {
    if (t.kind == TargetSpec::Kind::Rest) return "rest";
    std::string s = t.kind == TargetSpec::Kind::Clusters ? "cluster:" : t.kind == TargetSpec::Kind::Members ? "member:" : "state:";
    for (std::size_t i = 0; i < t.ids.size(); ++i) s += (i ? "," : "") + std::to_string(t.ids[i]);
    return s;
}

struct TargetPair {
    StateSet good;
    StateSet bad;
    bool partitions_dead_ends = false;
    std::vector<std::string> warnings;
};

/// Resolves both sides against a system built from `ds`.
///
/// Point-cloud systems (no time extension): clusters select their points,
/// members select the final point of each of their tracks, states are taken
/// as given. Time extensions: selections are restricted to the final layer,
/// by the cluster or member of each state's base point. "rest" is the
/// final layer (point cloud: the dead ends when the other side names
/// members, every state otherwise) minus the other side.
inline TargetPair assign_good_bad(const SystemSpec& spec, const TrackDataset& ds, const TimeExtension* ext,
                                  const ClusterAssignment* clusters, const TargetSpec& good, const TargetSpec& bad) {
    using Kind = TargetSpec::Kind;
    if (good.kind == Kind::Rest && bad.kind == Kind::Rest) throw std::invalid_argument("good and bad cannot both be 'rest'");

    std::vector<int> member_of;  // per dataset point
    std::vector<bool> last_point;
    for (const auto& t : ds.tracks)
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            member_of.push_back(t.member);
            last_point.push_back(i + 1 == t.points.size());
        }
    const StateSet dead = spec.dead_ends();
    auto point_of = [&](StateId s) -> StateId { return ext ? ext->base_of(s) : s; };
    auto selectable = [&](StateId s) { return !ext || dead.contains(s); };

    auto resolve = [&](const TargetSpec& t, const char* side) {
        StateSet out(spec.size());
        if (t.ids.empty()) throw std::invalid_argument(std::string(side) + " target lists no ids");
        for (long id : t.ids) {
            bool hit = false;
            if (t.kind == Kind::Clusters) {
                if (!clusters) throw std::invalid_argument("cluster targets need a clustering (set --k)");
                if (id >= clusters->k)
                    throw std::invalid_argument("cluster " + std::to_string(id) + " out of range for k = " +
                                                std::to_string(clusters->k));
                for (StateId s = 0; s < spec.size(); ++s)
                    if (selectable(s) && clusters->labels[point_of(s)] == id) out.insert(s), hit = true;
            } else if (t.kind == Kind::Members) {
                for (StateId s = 0; s < spec.size(); ++s) {
                    const StateId p = point_of(s);
                    if (member_of[p] != id || !selectable(s)) continue;
                    if (!ext && !last_point[p]) continue;
                    out.insert(s), hit = true;
                }
            } else {
                if (std::size_t(id) >= spec.size()) throw std::invalid_argument("state " + std::to_string(id) + " out of range");
                out.insert(StateId(id));
                hit = true;
            }
            if (!hit) throw std::invalid_argument(std::string(side) + " target " + to_string(t) + " selects nothing for id " +
                                                  std::to_string(id));
        }
        return out;
    };

    if (good.kind == Kind::Clusters && bad.kind == Kind::Clusters)
        for (long g : good.ids)
            if (std::find(bad.ids.begin(), bad.ids.end(), g) != bad.ids.end())
                throw std::invalid_argument("cluster " + std::to_string(g) + " is both good and bad");

    TargetPair r{StateSet(spec.size()), StateSet(spec.size()), false, {}};
    auto universe_for_rest = [&](const TargetSpec& other) {
        if (ext || other.kind == Kind::Members) return dead;
        return StateSet::full(spec.size());
    };
    if (good.kind != Kind::Rest) r.good = resolve(good, "good");
    if (bad.kind != Kind::Rest) r.bad = resolve(bad, "bad");
    if (good.kind == Kind::Rest) r.good = universe_for_rest(bad) - r.bad;
    if (bad.kind == Kind::Rest) r.bad = universe_for_rest(good) - r.good;
    if (r.good.intersects(r.bad)) throw std::invalid_argument("good and bad targets overlap");

    r.partitions_dead_ends = (r.good | r.bad) == dead;
    if (ext && !r.partitions_dead_ends)
        r.warnings.push_back("good and bad do not partition the final layer; separation checks are skipped");
    return r;
}

}  // namespace epsbasin
