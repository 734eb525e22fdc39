#pragma once

// Ensemble track files and the two systems built from them: a flat point
// cloud (one state per observed point, Euclidean cost) and the time
// extension over the common forecast window.

#include <array>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epsbasin/time_extension.hpp"

namespace epsbasin {

using Position = std::array<double, 2>;  // (lon, lat) degrees

struct TrackPoint {
    int step = 0;
    Position pos{};
};

struct Track {
    std::string id;
    int member = 0;
    std::vector<TrackPoint> points;  // steps 0, 1, ... in order
};

struct BestTrackPoint {
    std::string timestamp;
    Position pos{};
};

struct TrackDataset {
    std::vector<Track> tracks;  // in order of first appearance
    std::vector<BestTrackPoint> best_track;

    std::size_t point_count() const {
        std::size_t n = 0;
        for (const auto& t : tracks) n += t.points.size();
        return n;
    }
};

/// Input that could not be read; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Non-blank lines with their 1-based numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t no = 0, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++no;
        std::string_view l = trim(text.substr(start, end - start));
        if (!l.empty()) out.emplace_back(no, l);
        start = end + 1;
    }
    return out;
}

inline double to_double(std::string_view s, std::size_t line, const char* column) {
    double v = 0.0;
    if (s == "inf") return kInf;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(line, std::string("bad number '") + std::string(s) + "' in column " + column);
    return v;
}

inline int to_int(std::string_view s, std::size_t line, const char* column) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(line, std::string("bad integer '") + std::string(s) + "' in column " + column);
    return v;
}

/// Shortest text that reads back to the same double.
inline std::string number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

/// Column positions for the named header fields; throws naming the first missing one.
template <std::size_t N>
std::array<std::size_t, N> header_columns(std::string_view header, const std::array<const char*, N>& names,
                                          std::size_t line) {
    const auto cols = split(header);
    std::array<std::size_t, N> pos{};
    for (std::size_t i = 0; i < N; ++i) {
        auto it = std::find(cols.begin(), cols.end(), std::string_view(names[i]));
        if (it == cols.end()) throw ParseError(line, std::string("header lacks column '") + names[i] + "'");
        pos[i] = std::size_t(it - cols.begin());
    }
    return pos;
}

}  // namespace csv

/// Columns track_id,member,step,lon,lat in any order; rows of one track may
/// be interleaved with others but its steps must cover 0..n-1 exactly once.
inline TrackDataset parse_tracks(std::string_view text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(0, "empty track file");
    const auto col = csv::header_columns<5>(rows[0].second, {"track_id", "member", "step", "lon", "lat"},
                                            rows[0].first);
    const std::size_t width = csv::split(rows[0].second).size();

    TrackDataset ds;
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto [line, body] = rows[r];
        const auto f = csv::split(body);
        if (f.size() != width)
            throw ParseError(line, "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        const std::string id(f[col[0]]);
        if (id.empty()) throw ParseError(line, "empty track_id");
        const int member = csv::to_int(f[col[1]], line, "member");
        TrackPoint p{csv::to_int(f[col[2]], line, "step"),
                     {csv::to_double(f[col[3]], line, "lon"), csv::to_double(f[col[4]], line, "lat")}};
        if (!std::isfinite(p.pos[0]) || !std::isfinite(p.pos[1])) throw ParseError(line, "position must be finite");
        auto [it, fresh] = index.try_emplace(id, ds.tracks.size());
        if (fresh) ds.tracks.push_back(Track{id, member, {}});
        Track& t = ds.tracks[it->second];
        if (t.member != member) throw ParseError(line, "track " + id + " changes member");
        t.points.push_back(p);
    }
    for (auto& t : ds.tracks) {
        std::stable_sort(t.points.begin(), t.points.end(), [](const auto& a, const auto& b) { return a.step < b.step; });
        for (std::size_t i = 0; i < t.points.size(); ++i)
            if (t.points[i].step != int(i)) throw ParseError(0, "non-contiguous steps in track " + t.id);
    }
    return ds;
}

/// Columns timestamp,lon,lat; row order is kept.
inline std::vector<BestTrackPoint> parse_best_track(std::string_view text) {
    const auto rows = csv::lines(text);
    if (rows.empty()) throw ParseError(0, "empty best-track file");
    const auto col = csv::header_columns<3>(rows[0].second, {"timestamp", "lon", "lat"}, rows[0].first);
    const std::size_t width = csv::split(rows[0].second).size();
    std::vector<BestTrackPoint> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto [line, body] = rows[r];
        const auto f = csv::split(body);
        if (f.size() != width)
            throw ParseError(line, "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        out.push_back({std::string(f[col[0]]),
                       {csv::to_double(f[col[1]], line, "lon"), csv::to_double(f[col[2]], line, "lat")}});
    }
    return out;
}

inline std::string serialize_tracks(const TrackDataset& ds) {
    std::string out = "track_id,member,step,lon,lat\n";
    for (const auto& t : ds.tracks)
        for (const auto& p : t.points)
            out += t.id + "," + std::to_string(t.member) + "," + std::to_string(p.step) + "," +
                   csv::number(p.pos[0]) + "," + csv::number(p.pos[1]) + "\n";
    return out;
}

inline std::string serialize_best_track(const std::vector<BestTrackPoint>& bt) {
    std::string out = "timestamp,lon,lat\n";
    for (const auto& p : bt) out += p.timestamp + "," + csv::number(p.pos[0]) + "," + csv::number(p.pos[1]) + "\n";
    return out;
}

/// Where each point of the dataset lands in the state table: tracks in
/// order, steps ascending within a track.
struct PointIndex {
    std::vector<std::size_t> offset;  // first state of each track

    explicit PointIndex(const TrackDataset& ds) {
        std::size_t n = 0;
        for (const auto& t : ds.tracks) {
            offset.push_back(n);
            n += t.points.size();
        }
    }
    StateId id(std::size_t track, int step) const { return offset[track] + StateId(step); }
};

/// The flat map: one base state per observed point, label "track:step",
/// layer = step, map = next point of the same track.
inline BaseSystem track_base(const TrackDataset& ds, PlaneMetric metric = PlaneMetric::Euclidean) {
    BaseSystem base;
    base.metric = metric;
    const PointIndex idx(ds);
    for (std::size_t k = 0; k < ds.tracks.size(); ++k) {
        const Track& t = ds.tracks[k];
        for (const auto& p : t.points) {
            State s;
            s.label = t.id + ":" + std::to_string(p.step);
            s.coords = {p.pos[0], p.pos[1]};
            s.layer = p.step;
            base.states.push_back(std::move(s));
            const bool last = p.step + 1 == int(t.points.size());
            base.map.push_back(last ? std::nullopt : std::optional<StateId>(idx.id(k, p.step + 1)));
        }
    }
    return base;
}

inline SystemSpec build_pointcloud_system(const TrackDataset& ds, PlaneMetric metric = PlaneMetric::Euclidean) {
    if (ds.point_count() == 0) throw std::invalid_argument("dataset has no points");
    BaseSystem base = track_base(ds, metric);
    for (auto& s : base.states) s.layer.reset();
    return SystemSpec(std::move(base.states), std::move(base.map), EuclideanCost{metric});
}

/// Time extension of the flat map over [0, steps - 1]. All tracks must have
/// the same length.
inline TimeExtension build_timeextended_system(const TrackDataset& ds,
                                               ExtensionLayout layout = ExtensionLayout::Full,
                                               PlaneMetric metric = PlaneMetric::Euclidean) {
    if (ds.tracks.empty()) throw std::invalid_argument("dataset has no tracks");
    std::map<std::size_t, std::size_t> lengths;
    for (const auto& t : ds.tracks) ++lengths[t.points.size()];
    if (lengths.size() > 1) {
        // name the tracks that disagree with the most common length
        std::size_t common = 0, best = 0;
        for (auto [len, count] : lengths)
            if (count > best) best = count, common = len;
        std::string bad;
        for (const auto& t : ds.tracks)
            if (t.points.size() != common)
                bad += (bad.empty() ? "" : ", ") + t.id + " (" + std::to_string(t.points.size()) + " steps)";
        throw std::invalid_argument("tracks differ in length from " + std::to_string(common) + " steps: " + bad);
    }
    const int steps = int(ds.tracks.front().points.size());
    if (steps < 2) throw std::invalid_argument("time extension needs tracks of at least two steps");
    return build_time_extension(track_base(ds, metric), {0, steps - 1}, layout);
}

/// For each best-track point, the state nearest to it (smallest id on ties).
/// On a layered system, row i looks only at layer i when that layer exists.
inline std::vector<StateId> nearest_states(const SystemSpec& spec, const std::vector<BestTrackPoint>& best,
                                           PlaneMetric metric = PlaneMetric::Euclidean) {
    if (best.empty()) throw std::invalid_argument("best track is empty");
    std::vector<StateId> out;
    for (std::size_t i = 0; i < best.size(); ++i) {
        bool layer_exists = false;
        if (spec.is_layered())
            for (const auto& s : spec.states()) layer_exists = layer_exists || s.layer == int(i);
        std::optional<StateId> pick;
        double best_d = kInf;
        for (StateId s = 0; s < spec.size(); ++s) {
            if (layer_exists && spec.state(s).layer != int(i)) continue;
            const auto& c = spec.state(s).coords;
            if (c.size() != 2) throw std::invalid_argument("nearest-point lookup needs 2-D coordinates");
            const double d = plane_distance(c, best[i].pos, metric);
            if (!pick || d < best_d) pick = s, best_d = d;
        }
        out.push_back(*pick);
    }
    return out;
}

struct SeriesPoint {
    std::string timestamp;
    StateId state = 0;
    DebutValue value = DebutValue::unreachable();
};

/// Debut values along the best track, read off a precomputed field.
inline std::vector<SeriesPoint> best_track_debut(const SystemSpec& spec, const std::vector<BestTrackPoint>& best,
                                                 const DebutField& field,
                                                 PlaneMetric metric = PlaneMetric::Euclidean) {
    if (field.size() != spec.size()) throw std::invalid_argument("debut field does not match the system");
    const auto near = nearest_states(spec, best, metric);
    std::vector<SeriesPoint> out;
    for (std::size_t i = 0; i < best.size(); ++i) out.push_back({best[i].timestamp, near[i], field[near[i]]});
    return out;
}

}  // namespace epsbasin
