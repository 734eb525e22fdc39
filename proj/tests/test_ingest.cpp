#include <gtest/gtest.h>

#include <random>

#include "epsbasin/export.hpp"
#include "epsbasin/io_json.hpp"
#include "epsbasin/svg.hpp"
#include "epsbasin/synthetic.hpp"
#include "epsbasin/targets.hpp"
#include "fixtures.hpp"

using namespace epsbasin;

namespace {

// The two-track fixture as a track file: P sits at 0, Q moves 1, 1, 2.
constexpr const char* kTwoTracks =
    "track_id,member,step,lon,lat\n"
    "P,1,0,0,0\n"
    "P,1,1,0,0\n"
    "P,1,2,0,0\n"
    "Q,2,0,1,0\n"
    "Q,2,1,1,0\n"
    "Q,2,2,2,0\n";

constexpr const char* kBestAlongP =
    "timestamp,lon,lat\n"
    "t0,0.1,0\n"
    "t1,0,0.1\n"
    "t2,0,0\n";

TrackDataset two_tracks() {
    TrackDataset ds = parse_tracks(kTwoTracks);
    ds.best_track = parse_best_track(kBestAlongP);
    return ds;
}

std::size_t parse_error_line(const std::string& text) {
    try {
        parse_tracks(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return std::size_t(-1);
}

}  // namespace

TEST(ParseTracks, ReadsColumnsInAnyOrderAndSortsSteps) {
    const auto ds = parse_tracks("lat,lon,step,member,track_id\n0,1,1,7,a\n\n0.5,2,0,7,a\n3,4,0,8,b\n");
    ASSERT_EQ(ds.tracks.size(), 2u);
    EXPECT_EQ(ds.tracks[0].id, "a");
    EXPECT_EQ(ds.tracks[0].member, 7);
    EXPECT_EQ(ds.tracks[0].points[0].step, 0);
    EXPECT_EQ(ds.tracks[0].points[0].pos, (Position{2, 0.5}));
    EXPECT_EQ(ds.tracks[0].points[1].pos, (Position{1, 0}));
    EXPECT_EQ(ds.point_count(), 3u);
}

TEST(ParseTracks, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("track_id,member,step,lon,lat\nP,1,0,0,0\nP,1,1,zero,0\n"), 3u);
    EXPECT_EQ(parse_error_line("track_id,member,step,lon,lat\nP,1,0,0\n"), 2u);
    EXPECT_EQ(parse_error_line("track_id,member,step,lon,lat\nP,1,0,0,0\nP,2,1,0,0\n"), 3u);
    EXPECT_EQ(parse_error_line("track_id,member,step,lon\nP,1,0,0\n"), 1u);
    EXPECT_EQ(parse_error_line("track_id,member,step,lon,lat\nP,1,0,inf,0\n"), 2u);
    try {
        parse_tracks("track_id,member,step,lon,lat\nP,1,0,0,0\nP,1,2,0,0\n");
        FAIL() << "gap accepted";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("non-contiguous steps in track P"), std::string::npos);
    }
    EXPECT_THROW(parse_tracks(""), ParseError);
}

TEST(ParseTracks, SerializeRoundTrips) {
    const auto ds = synthetic_ensemble();
    const std::string text = serialize_tracks(ds);
    EXPECT_EQ(serialize_tracks(parse_tracks(text)), text);
    const std::string best = serialize_best_track(ds.best_track);
    EXPECT_EQ(serialize_best_track(parse_best_track(best)), best);
}

TEST(BuildSystems, PointCloudHasOneStatePerPoint) {
    const auto spec = build_pointcloud_system(two_tracks());
    EXPECT_EQ(spec.size(), 6u);
    EXPECT_EQ(spec.dead_ends().members(), (std::vector<StateId>{2, 5}));
    EXPECT_EQ(spec.state(4).label, "Q:1");
    EXPECT_DOUBLE_EQ(spec.cost(0, 5), 2.0);  // no layer restriction
    EXPECT_TRUE(validate_system(spec).empty());
}

TEST(BuildSystems, SyncExtensionMatchesFixture) {
    const auto ext = build_timeextended_system(two_tracks(), ExtensionLayout::Synchronized);
    const auto want = fixtures::two_track_layered();
    ASSERT_EQ(ext.spec().size(), want.size());
    EXPECT_EQ(ext.spec().successors(), want.successors());
    for (StateId a = 0; a < want.size(); ++a)
        for (StateId b = 0; b < want.size(); ++b) EXPECT_EQ(ext.spec().cost(a, b), want.cost(a, b)) << a << "," << b;
    EXPECT_EQ(ext.spec().state(5).label, "Q:2@2");
}

TEST(BuildSystems, ExtensionCommutesWithTrackBase) {
    // building from the file equals extending the flat map directly
    const auto ds = two_tracks();
    const auto a = build_timeextended_system(ds, ExtensionLayout::Full);
    const auto b = build_time_extension(track_base(ds), {0, 2}, ExtensionLayout::Full);
    EXPECT_EQ(a.spec().size(), 12u);
    EXPECT_EQ(a.spec().successors(), b.spec().successors());
    for (StateId s = 0; s < a.spec().size(); ++s) EXPECT_EQ(a.spec().state(s).label, b.spec().state(s).label);
}

TEST(BuildSystems, MixedLengthsNameTheOddTrack) {
    const auto ds = parse_tracks("track_id,member,step,lon,lat\na,1,0,0,0\na,1,1,0,0\nb,2,0,1,1\nb,2,1,1,1\nc,3,0,2,2\n");
    try {
        build_timeextended_system(ds);
        FAIL() << "mixed lengths accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("c (1 steps)"), std::string::npos) << e.what();
        EXPECT_EQ(std::string(e.what()).find("a ("), std::string::npos);
    }
    EXPECT_THROW(build_timeextended_system(parse_tracks("track_id,member,step,lon,lat\na,1,0,0,0\n")),
                 std::invalid_argument);
}

TEST(KMeans, SeparatesTwoGroups) {
    const std::vector<Position> pts{{0, 0}, {0, 1}, {10, 10}, {10, 11}, {1, 0}, {11, 10}};
    const auto ca = kmeans(pts, 2, 7);
    EXPECT_EQ(ca.labels[0], ca.labels[1]);
    EXPECT_EQ(ca.labels[0], ca.labels[4]);
    EXPECT_EQ(ca.labels[2], ca.labels[3]);
    EXPECT_EQ(ca.labels[2], ca.labels[5]);
    EXPECT_NE(ca.labels[0], ca.labels[2]);
    EXPECT_NEAR(ca.objective.back(), 4.0 * 2.0 / 3.0, 1e-12);
}

TEST(KMeans, SingleClusterIsTheMean) {
    const std::vector<Position> pts{{0, 0}, {2, 0}, {4, 6}};
    const auto ca = kmeans(pts, 1, 1);
    EXPECT_DOUBLE_EQ(ca.centroids[0][0], 2.0);
    EXPECT_DOUBLE_EQ(ca.centroids[0][1], 2.0);
    EXPECT_EQ(ca.labels, (std::vector<int>{0, 0, 0}));
}

TEST(KMeans, DeterministicAndMonotone) {
    const auto pts = dataset_points(synthetic_ensemble());
    for (int k = 2; k <= 6; ++k) {
        const auto a = kmeans(pts, k, 99), b = kmeans(pts, k, 99);
        EXPECT_EQ(a.labels, b.labels);
        EXPECT_EQ(a.centroids, b.centroids);
        for (std::size_t i = 1; i < a.objective.size(); ++i) EXPECT_LE(a.objective[i], a.objective[i - 1] + 1e-9);
    }
}

TEST(KMeans, RejectsTooManyClusters) {
    const std::vector<Position> pts{{0, 0}, {0, 0}, {1, 1}};
    EXPECT_NO_THROW(kmeans(pts, 2, 3));
    EXPECT_THROW(kmeans(pts, 3, 3), std::invalid_argument);
    EXPECT_THROW(kmeans(pts, 0, 3), std::invalid_argument);
}

TEST(Targets, ParseAndPrint) {
    EXPECT_EQ(to_string(parse_target("cluster:0,3")), "cluster:0,3");
    EXPECT_EQ(to_string(parse_target("member:1")), "member:1");
    EXPECT_EQ(parse_target("rest").kind, TargetSpec::Kind::Rest);
    EXPECT_THROW(parse_target("cluster"), std::invalid_argument);
    EXPECT_THROW(parse_target("track:1"), std::invalid_argument);
    EXPECT_THROW(parse_target("state:-1"), std::invalid_argument);
}

TEST(Targets, MembersOnExtensionPickFinalLayer) {
    const auto ds = two_tracks();
    const auto ext = build_timeextended_system(ds, ExtensionLayout::Synchronized);
    const auto r = assign_good_bad(ext.spec(), ds, &ext, nullptr, parse_target("member:1"), parse_target("rest"));
    EXPECT_EQ(r.good.members(), (std::vector<StateId>{4}));
    EXPECT_EQ(r.bad.members(), (std::vector<StateId>{5}));
    EXPECT_TRUE(r.partitions_dead_ends);
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Targets, MembersOnPointCloudPickFinalPoints) {
    const auto ds = two_tracks();
    const auto spec = build_pointcloud_system(ds);
    const auto r = assign_good_bad(spec, ds, nullptr, nullptr, parse_target("member:2"), parse_target("rest"));
    EXPECT_EQ(r.good.members(), (std::vector<StateId>{5}));
    EXPECT_EQ(r.bad.members(), (std::vector<StateId>{2}));
    const auto s = assign_good_bad(spec, ds, nullptr, nullptr, parse_target("state:0,1"), parse_target("rest"));
    EXPECT_EQ(s.bad.members(), (std::vector<StateId>{2, 3, 4, 5}));
    EXPECT_FALSE(s.partitions_dead_ends);
}

TEST(Targets, ClustersAndErrors) {
    const auto ds = two_tracks();
    const auto ext = build_timeextended_system(ds, ExtensionLayout::Full);
    const auto ca = kmeans(dataset_points(ds), 2, 5);
    const int q_end = ca.labels[5];
    const auto r = assign_good_bad(ext.spec(), ds, &ext, &ca, parse_target("cluster:" + std::to_string(q_end)),
                                   parse_target("rest"));
    for (StateId s : r.good.members()) EXPECT_EQ(ca.labels[ext.base_of(s)], q_end);
    EXPECT_TRUE(r.good.subset_of(ext.final_layer()));
    EXPECT_TRUE(r.partitions_dead_ends);

    auto bad = [&](const char* g, const char* b, const ClusterAssignment* c) {
        return [=, &ext, &ds] { assign_good_bad(ext.spec(), ds, &ext, c, parse_target(g), parse_target(b)); };
    };
    EXPECT_THROW(bad("rest", "rest", &ca)(), std::invalid_argument);
    EXPECT_THROW(bad("cluster:0", "cluster:0", &ca)(), std::invalid_argument);
    EXPECT_THROW(bad("cluster:2", "rest", &ca)(), std::invalid_argument);
    EXPECT_THROW(bad("cluster:0", "rest", nullptr)(), std::invalid_argument);
    EXPECT_THROW(bad("member:9", "rest", nullptr)(), std::invalid_argument);
    EXPECT_THROW(bad("member:1", "member:1", nullptr)(), std::invalid_argument);

    const auto partial = assign_good_bad(ext.spec(), ds, &ext, nullptr, parse_target("member:1"), parse_target("state:0"));
    EXPECT_FALSE(partial.partitions_dead_ends);
    EXPECT_EQ(partial.warnings.size(), 1u);
}

TEST(BestTrack, NearestStatePerLayer) {
    const auto ds = two_tracks();
    const auto ext = build_timeextended_system(ds, ExtensionLayout::Synchronized);
    EXPECT_EQ(nearest_states(ext.spec(), ds.best_track), (std::vector<StateId>{0, 2, 4}));
    // flat system: no layers, ties go to the smallest id
    const auto spec = build_pointcloud_system(ds);
    EXPECT_EQ(nearest_states(spec, ds.best_track), (std::vector<StateId>{0, 0, 0}));
}

TEST(BestTrack, SeriesAlongPStaysNegative) {
    const auto ds = two_tracks();
    const auto ext = build_timeextended_system(ds, ExtensionLayout::Synchronized);
    const StateSet G(6, {fixtures::kEndP});
    const auto field = debut_field(ext.spec(), G, BudgetMode::MaxPerStep);
    const auto series = best_track_debut(ext.spec(), ds.best_track, field);
    ASSERT_EQ(series.size(), 3u);
    EXPECT_EQ(series[0].value, DebutValue::negative(1));
    EXPECT_EQ(series[1].value, DebutValue::negative(1));
    EXPECT_EQ(series[2].value, DebutValue::negative(kInf));  // leaving needs a jump across layers
    EXPECT_EQ(series_csv(series), "timestamp,sign,magnitude\nt0,-,1\nt1,-,1\nt2,-,inf\n");
}

TEST(SystemJson, RoundTrips) {
    std::mt19937_64 rng(11);
    std::vector<SystemSpec> systems{fixtures::two_track_layered(), fixtures::three_point_nonfiltration(),
                                    build_pointcloud_system(two_tracks())};
    for (int i = 0; i < 10; ++i) systems.push_back(fixtures::random_system(rng, 6));
    for (const auto& spec : systems) {
        const std::string text = write_system_json(spec);
        const auto back = read_system_json(text);
        EXPECT_EQ(back.successors(), spec.successors());
        for (StateId a = 0; a < spec.size(); ++a) {
            EXPECT_EQ(back.state(a).label, spec.state(a).label);
            EXPECT_EQ(back.state(a).layer, spec.state(a).layer);
            for (StateId b = 0; b < spec.size(); ++b) EXPECT_EQ(back.cost(a, b), spec.cost(a, b));
        }
        EXPECT_EQ(write_system_json(back), text);
    }
}

TEST(SystemJson, MalformedInputIsAParseError) {
    EXPECT_THROW(read_system_json("{"), ParseError);
    EXPECT_THROW(read_system_json(R"({"states": [], "successor": [1]})"), ParseError);
    EXPECT_THROW(read_system_json(R"({"states": [{}], "successor": [null], "cost": {"kind": "fancy"}})"), ParseError);
    EXPECT_THROW(read_system_json(R"({"states": [{}], "successor": [null], "cost": {"kind": "matrix", "values": [["x"]]}})"),
                 ParseError);
    const auto spec = read_system_json(R"({"states": [{}, {}], "successor": [5, null], "cost": {"kind": "matrix", "values": [[0, 1], [1, 0]]}})");
    EXPECT_FALSE(validate_system(spec).empty());
}

TEST(Synthetic, ShapeAndDeterminism) {
    const auto ds = synthetic_ensemble();
    EXPECT_EQ(ds.tracks.size(), 21u);
    EXPECT_EQ(ds.point_count(), 294u);
    EXPECT_EQ(ds.best_track.size(), 14u);
    EXPECT_EQ(serialize_tracks(ds), serialize_tracks(synthetic_ensemble()));
    EXPECT_NE(serialize_tracks(ds), serialize_tracks(synthetic_ensemble({.seed = 1})));
    const auto ext = build_timeextended_system(ds);
    EXPECT_EQ(ext.spec().size(), 2205u);
    EXPECT_EQ(ext.final_layer().count(), 294u);
    EXPECT_TRUE(validate_system(ext.spec()).empty());
}

TEST(Exports, DebutCsvRoundTripsMarkers) {
    const auto spec = fixtures::two_track_layered();
    const StateSet G(6, {fixtures::kEndP});
    const auto field = debut_field(spec, G, BudgetMode::MaxPerStep);
    const std::string text = debut_csv(spec, field, BudgetMode::MaxPerStep);
    EXPECT_EQ(text.substr(0, text.find('\n')), "state_id,label,x,y,debut_sign,debut_magnitude,mode,semantics");
    const auto back = parse_debut_csv(text);
    ASSERT_EQ(back.size(), field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        EXPECT_EQ(back[i].is_negative_side(), field[i].is_negative_side());
        EXPECT_EQ(back[i].magnitude(), field[i].magnitude());
        // finite indices cannot tell an infinite magnitude from a marker
        for (double e : {0.0, 0.5, 1.0, 2.0})
            for (auto i2 : {EpsIndex::neg(e), EpsIndex::pos(e)}) EXPECT_EQ(back[i].in_sublevel(i2), field[i].in_sublevel(i2));
    }
    EXPECT_NE(debut_json(spec, field, BudgetMode::MaxPerStep).find("\"debut_magnitude\": \"inf\""), std::string::npos);

    // genuine markers: 2 is outside the image of F, so nothing reaches it
    const auto tri = fixtures::three_point_nonfiltration();
    const auto markers = debut_field(tri, StateSet(3, {2}), BudgetMode::MaxPerStep);
    EXPECT_EQ(markers[0], DebutValue::unreachable());
    EXPECT_EQ(parse_debut_csv(debut_csv(tri, markers, BudgetMode::MaxPerStep)), markers);
}

TEST(Exports, BasinCsvRoundTrips) {
    const auto spec = fixtures::two_track_layered();
    const StateSet G(6, {fixtures::kEndP});
    BasinTable t{"good", BudgetMode::MaxPerStep, NegativeSemantics::DeadEnd, filtration_grid(spec), {}};
    for (const auto& i : t.indices) t.members.push_back(basin_at(spec, G, i, t.mode).members);
    const auto [idx, sets] = parse_basin_csv(basin_csv(spec, t));
    EXPECT_EQ(idx, t.indices);
    EXPECT_EQ(sets, t.members);
}

TEST(Exports, SvgIsDeterministicAndEscaped) {
    auto spec = fixtures::two_track_layered();
    const StateSet G(6, {fixtures::kEndP});
    const auto field = debut_field(spec, G, BudgetMode::MaxPerStep);
    const std::string a = debut_svg(spec, field, "a<b");
    EXPECT_EQ(a, debut_svg(spec, field, "a<b"));
    EXPECT_NE(a.find("a&lt;b"), std::string::npos);
    EXPECT_EQ(a.find("a<b"), std::string::npos);
    EXPECT_THROW(debut_svg(fixtures::three_point_total(), debut_field(fixtures::three_point_total(), StateSet(3, {0}),
                                                                       BudgetMode::MaxPerStep),
                           "x"),
                 std::invalid_argument);
}

// With G and B splitting the final layer, every orbit ends in exactly one
// of them, and the cost to leave one side is the cost to enter the other.
TEST(ComplementDuality, NegativeDebutToBEqualsPositiveDebutToG) {
    std::mt19937_64 rng(404);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto base = fixtures::random_base(rng, 2 + trial % 5);
        const int len = 1 + trial % 4;
        // a long window can leave the final layer empty; fall back to one step
        TimeExtension ext = [&] {
            try {
                return build_time_extension(base, {0, len}, ExtensionLayout::Full);
            } catch (const std::invalid_argument&) {
                return build_time_extension(base, {0, 1}, ExtensionLayout::Full);
            }
        }();
        const auto [g2, b2] = fixtures::random_final_split(rng, ext);
        const StateSet G = ext.lift_final(g2), B = ext.lift_final(b2);
        ASSERT_EQ(G | B, ext.spec().dead_ends());
        for (auto mode : {BudgetMode::MaxPerStep, BudgetMode::TotalSum}) {
            const auto toG = debut_field(ext.spec(), G, mode), toB = debut_field(ext.spec(), B, mode);
            for (StateId y = 0; y < ext.spec().size(); ++y) {
                ASSERT_NE(toG[y].is_negative_side(), toB[y].is_negative_side()) << y;
                const auto& neg = toB[y].is_negative_side() ? toB[y] : toG[y];
                const auto& pos = toB[y].is_negative_side() ? toG[y] : toB[y];
                EXPECT_EQ(neg.magnitude(), pos.magnitude()) << y;
                EXPECT_EQ(neg.kind() == DebutValue::Kind::NoEscape, pos.kind() == DebutValue::Kind::Unreachable) << y;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 200);
}
