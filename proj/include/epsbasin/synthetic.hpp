#pragma once

// A synthetic ensemble shaped like a typhoon forecast: members leave a
// common genesis area, a few recurve eastward and the rest head north.
// Seeded and portable, so the same seed gives the same file everywhere.

#include <cstdint>
#include <cstdio>
#include <string>

#include "epsbasin/rng.hpp"
#include "epsbasin/tracks.hpp"

namespace epsbasin {

struct SyntheticOptions {
    std::uint64_t seed = 2020;
    int members = 21;
    int steps = 14;
    int eastward = 4;  // members 1..eastward recurve east
};

inline std::string member_track_id(int member) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "m%02d", member);
    return buf;
}

/// Positions are rounded to 1/1024 degree so they print short and exact.
inline TrackDataset synthetic_ensemble(const SyntheticOptions& opt = {}) {
    std::mt19937_64 rng(opt.seed);
    auto round = [](double v) { return std::round(v * 1024.0) / 1024.0; };
    TrackDataset ds;
    for (int m = 1; m <= opt.members; ++m) {
        const bool east = m <= opt.eastward;
        Track t{member_track_id(m), m, {}};
        double lon = 135.0 + uniform_in(rng, -0.4, 0.4);
        double lat = 22.0 + uniform_in(rng, -0.4, 0.4);
        for (int s = 0; s < opt.steps; ++s) {
            t.points.push_back({s, {round(lon), round(lat)}});
            // both groups drift north-west at first, then split
            const double turn = s < opt.steps / 3 ? 0.0 : 1.0;
            const double dlon = east ? -0.1 + turn * 0.9 : -0.1 + turn * 0.15;
            const double dlat = east ? 0.6 + turn * 0.1 : 0.6 + turn * 0.35;
            lon += dlon + uniform_in(rng, -0.12, 0.12);
            lat += dlat + uniform_in(rng, -0.12, 0.12);
        }
        ds.tracks.push_back(std::move(t));
    }
    // the observed track follows the northern group with a small offset
    double lon = 135.1, lat = 22.05;
    for (int s = 0; s < opt.steps; ++s) {
        char stamp[32];
        std::snprintf(stamp, sizeof stamp, "T+%02dh", 3 * s);
        ds.best_track.push_back({stamp, {round(lon), round(lat)}});
        const double turn = s < opt.steps / 3 ? 0.0 : 1.0;
        lon += -0.1 + turn * 0.15 + uniform_in(rng, -0.05, 0.05);
        lat += 0.6 + turn * 0.35 + uniform_in(rng, -0.05, 0.05);
    }
    return ds;
}

}  // namespace epsbasin
