#pragma once

// Lloyd's k-means on plane points with k-means++ seeding.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "epsbasin/rng.hpp"
#include "epsbasin/tracks.hpp"

namespace epsbasin {

struct ClusterAssignment {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> labels;           // per point, in [0, k)
    std::vector<Position> centroids;
    std::vector<double> objective;     // after each assignment step, then for the final centroids
    int iterations = 0;
};

namespace detail {

inline double sq_dist(const Position& a, const Position& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

/// Nearest centroid, smallest id on ties.
inline int nearest(const Position& p, const std::vector<Position>& centroids) {
    int best = 0;
    double best_d = sq_dist(p, centroids[0]);
    for (int c = 1; c < int(centroids.size()); ++c) {
        const double d = sq_dist(p, centroids[c]);
        if (d < best_d) best = c, best_d = d;
    }
    return best;
}

inline std::size_t distinct_count(std::vector<Position> pts) {
    std::sort(pts.begin(), pts.end());
    return std::size_t(std::unique(pts.begin(), pts.end()) - pts.begin());
}

}  // namespace detail

/// Deterministic for fixed (points, k, seed). Stops when labels repeat or
/// after max_iters assignment steps; an emptied cluster keeps its centroid.
inline ClusterAssignment kmeans(const std::vector<Position>& points, int k, std::uint64_t seed, int max_iters = 100) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (std::size_t(k) > detail::distinct_count(points))
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the number of distinct points");

    ClusterAssignment out;
    out.k = k;
    out.seed = seed;
    std::mt19937_64 rng(seed);

    // k-means++: first centre uniform, then proportional to squared distance
    out.centroids.push_back(points[uniform_index(rng, points.size())]);
    std::vector<double> d2(points.size());
    while (int(out.centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            d2[i] = detail::sq_dist(points[i], out.centroids[detail::nearest(points[i], out.centroids)]);
            total += d2[i];
        }
        const double target = unit_uniform(rng) * total;
        double acc = 0.0;
        std::size_t pick = points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (d2[i] == 0.0) continue;
            acc += d2[i];
            pick = i;
            if (acc > target) break;
        }
        out.centroids.push_back(points[pick]);
    }

    auto objective = [&] {
        double j = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) j += detail::sq_dist(points[i], out.centroids[out.labels[i]]);
        return j;
    };

    out.labels.assign(points.size(), -1);
    for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
        std::vector<int> next(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) next[i] = detail::nearest(points[i], out.centroids);
        if (next == out.labels) break;
        out.labels = std::move(next);
        out.objective.push_back(objective());

        std::vector<Position> sum(k, Position{0.0, 0.0});
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            sum[out.labels[i]][0] += points[i][0];
            sum[out.labels[i]][1] += points[i][1];
            ++count[out.labels[i]];
        }
        for (int c = 0; c < k; ++c)
            if (count[c]) out.centroids[c] = {sum[c][0] / double(count[c]), sum[c][1] / double(count[c])};
    }
    out.objective.push_back(objective());
    return out;
}

/// All point positions of a dataset in state order.
inline std::vector<Position> dataset_points(const TrackDataset& ds) {
    std::vector<Position> out;
    for (const auto& t : ds.tracks)
        for (const auto& p : t.points) out.push_back(p.pos);
    return out;
}

}  // namespace epsbasin
