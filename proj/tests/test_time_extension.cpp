#include <gtest/gtest.h>

#include <random>

#include "epsbasin/time_extension.hpp"
#include "fixtures.hpp"

using namespace epsbasin;
constexpr auto Max = BudgetMode::MaxPerStep;
constexpr auto Sum = BudgetMode::TotalSum;

namespace {

std::vector<CostValue> grid_with_midpoints(const SystemSpec& spec) {
    const auto g = auto_grid(spec);
    std::vector<CostValue> out = g;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) out.push_back((g[i] + g[i + 1]) / 2);
    out.push_back(g.back() + 1);
    return out;
}

}  // namespace

TEST(BuildExtension, FixedPointOverOneStep) {
    BaseSystem base;
    base.states.resize(1);
    base.states[0].label = "x";
    base.states[0].coords = {0.0, 0.0};
    base.map = {0};
    const auto ext = build_time_extension(base, {0, 1});
    ASSERT_EQ(ext.spec().size(), 2u);
    EXPECT_EQ(ext.spec().successor(*ext.id_of(0, 0)), ext.id_of(1, 0));
    EXPECT_TRUE(ext.spec().is_dead_end(*ext.id_of(1, 0)));
    EXPECT_EQ(ext.spec().state(0).label, "x@0");
}

TEST(BuildExtension, RejectsBadWindowsAndMaps) {
    BaseSystem base = fixtures::two_track_base();
    EXPECT_THROW(build_time_extension(base, {2, 2}), std::invalid_argument);
    EXPECT_THROW(build_time_extension(base, {3, 1}), std::invalid_argument);
    // synchronized layout with nothing observed at the last step
    EXPECT_THROW(build_time_extension(base, {0, 5}, ExtensionLayout::Synchronized), std::invalid_argument);
    EXPECT_THROW(build_time_extension(BaseSystem{}, {0, 1}), std::invalid_argument);
    base.map[0] = 17;
    EXPECT_THROW(build_time_extension(base, {0, 2}), std::invalid_argument);
}

TEST(BuildExtension, SynchronizedTwoTracksMatchFixture) {
    const auto ext = build_time_extension(fixtures::two_track_base(), {0, 2}, ExtensionLayout::Synchronized);
    const SystemSpec ref = fixtures::two_track_layered();
    ASSERT_EQ(ext.spec().size(), ref.size());
    for (StateId s = 0; s < ref.size(); ++s) {
        EXPECT_EQ(ext.spec().successor(s), ref.successor(s));
        EXPECT_EQ(ext.spec().state(s).coords, ref.state(s).coords);
        EXPECT_EQ(ext.spec().state(s).layer, ref.state(s).layer);
    }
    EXPECT_EQ(ext.final_layer(), ext.spec().dead_ends());
}

TEST(BuildExtension, FullLayoutKeepsEverySurvivingLayer) {
    const auto ext = build_time_extension(fixtures::two_track_base(), {0, 2});
    // layer 0: P0 Q0; layer 1: P0 Q0 P1 Q1; layer 2: all six
    EXPECT_EQ(ext.spec().size(), 12u);
    EXPECT_EQ(ext.layer_set(0).count(), 2u);
    EXPECT_EQ(ext.layer_set(1).count(), 4u);
    EXPECT_EQ(ext.final_layer().count(), 6u);
    EXPECT_EQ(ext.final_layer(), ext.spec().dead_ends());
    // P0 seen on layer 1 moves to P1 on layer 2
    EXPECT_EQ(ext.spec().successor(*ext.id_of(1, 0)), ext.id_of(2, 2));
    EXPECT_TRUE(validate_system(ext.spec()).empty());
}

TEST(BuildExtension, MembershipPredicateOnRandomBases) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const BaseSystem base = fixtures::random_base(rng, 1 + trial % 6);
        const TimeWindow w{0, 1 + trial % 4};
        const auto ext = build_time_extension(base, w);
        for (StateId s = 0; s < ext.spec().size(); ++s) {
            const auto o = orbit(ext.spec(), s, 10);
            // the orbit runs exactly to the final layer
            EXPECT_EQ(int(o.size()) - 1, w.b - ext.layer_of(s));
            EXPECT_EQ(ext.spec().is_dead_end(s), ext.layer_of(s) == w.b);
        }
    }
}

TEST(LayerLemma, TwoTrackFixture) {
    for (auto layout : {ExtensionLayout::Synchronized, ExtensionLayout::Full})
        for (auto mode : {Max, Sum})
            for (double eps : {0.0, 0.5, 1.0, 2.0}) {
                const auto ext = build_time_extension(fixtures::two_track_base(), {0, 2}, layout);
                const auto r = check_layer_lemma(ext, {5}, eps, mode);
                // P0 and P1 share a position, so the full layout skips eps = 0 negatives
                const bool skip = layout == ExtensionLayout::Full && eps == 0.0;
                EXPECT_EQ(r.identities, skip ? 2u : 4u);
                EXPECT_EQ(r.skipped.size(), skip ? 1u : 0u);
                for (const auto& m : r.mismatches) ADD_FAILURE() << m;
            }
}

TEST(LayerLemma, ZeroBudgetFollowsOrbits) {
    const auto ext = build_time_extension(fixtures::two_track_base(), {0, 2}, ExtensionLayout::Synchronized);
    const StateSet A = ext.lift_final({5});
    EXPECT_EQ(basin_pos(ext.spec(), A, 0.0, Max).members, StateSet(6, {1, 3, 5}));
}

TEST(LayerLemma, RandomBases) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ext = build_time_extension(fixtures::random_base(rng, 2 + trial % 5), {0, 1 + trial % 4});
        const auto [A2, rest] = fixtures::random_final_split(rng, ext);
        auto eps = grid_with_midpoints(ext.spec());
        std::shuffle(eps.begin(), eps.end(), rng);
        eps.resize(std::min<std::size_t>(eps.size(), 5));
        for (auto mode : {Max, Sum})
            for (double e : eps) {
                const auto r = check_layer_lemma(ext, A2, e, mode);
                for (const auto& m : r.mismatches) ADD_FAILURE() << "trial " << trial << ": " << m;
            }
    }
}

// h is a fixed point far from g; a sits next to h but dies after one step at
// c, which sits next to g. Jumping h -> a -> c -> g costs 1 per jump in the
// base map, but (0, a) is not a state of the extension.
TEST(LayerLemma, UnrestrictedBaseJumpsOvercount) {
    BaseSystem base;
    const double xs[4] = {0, 1, 10, 11};
    const char* names[4] = {"h", "a", "c", "g"};
    for (int i = 0; i < 4; ++i) {
        State s;
        s.label = names[i];
        s.coords = {xs[i], 0.0};
        base.states.push_back(s);
    }
    base.map = {0, 2, std::nullopt, 3};
    const auto ext = build_time_extension(base, {0, 2});
    EXPECT_FALSE(ext.id_of(0, 1).has_value());

    EXPECT_TRUE(check_layer_lemma(ext, {3}, 1.0, Max).ok());
    const auto loose = check_layer_lemma(ext, {3}, 1.0, Max, JumpRestriction::AnyDomain);
    ASSERT_FALSE(loose.ok());
    EXPECT_NE(loose.mismatches[0].find("h@0"), std::string::npos);
}

TEST(Separation, TwoTrackFixture) {
    const SystemSpec spec = fixtures::two_track_layered();
    const StateSet G(6, {fixtures::kEndQ}), B(6, {fixtures::kEndP});
    for (auto mode : {Max, Sum})
        for (double eps : {0.0, 0.5, 1.0, 1.5}) {
            const auto r = check_separation(spec, G, B, eps, mode);
            EXPECT_EQ(r.verdict, Verdict::Holds) << eps;
        }
    const auto at1 = check_separation(spec, G, B, 1.0, Max);
    EXPECT_EQ(at1.good, StateSet(6, {0, 1, 2, 3, 5}));
    EXPECT_EQ(at1.bad, StateSet(6, {4}));
}

TEST(Separation, RejectsNonPartitions) {
    const SystemSpec paper = fixtures::three_point_total();
    EXPECT_THROW(check_separation(paper, StateSet(3, {2}), StateSet(3, {0}), 0.5, Max), std::invalid_argument);
    const SystemSpec spec = fixtures::two_track_layered();
    EXPECT_THROW(check_separation(spec, StateSet(6, {5}), StateSet(6, {4, 5}), 0.5, Max), std::invalid_argument);
    EXPECT_THROW(check_separation(spec, StateSet(6, {5}), StateSet(6), 0.5, Max), std::invalid_argument);
}

TEST(Separation, CoincidentPositionsAtZero) {
    BaseSystem base;
    for (const char* n : {"x", "y"}) {
        State s;
        s.label = n;
        s.coords = {0.0, 0.0};
        base.states.push_back(s);
    }
    base.map = {0, 1};
    const auto ext = build_time_extension(base, {0, 1});
    const StateSet G = ext.lift_final({0}), B = ext.lift_final({1});
    const auto r0 = check_separation(ext.spec(), G, B, 0.0, Max);
    EXPECT_EQ(r0.verdict, Verdict::HypothesisNotMet);
    EXPECT_FALSE(r0.overlap.empty());
    EXPECT_EQ(check_separation(ext.spec(), G, B, 0.5, Max).verdict, Verdict::Holds);
}

TEST(Separation, RandomExtensions) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ext = build_time_extension(fixtures::random_base(rng, 1 + trial % 6), {0, 1 + trial % 4});
        const auto [G2, B2] = fixtures::random_final_split(rng, ext);
        const StateSet G = ext.lift_final(G2), B = ext.lift_final(B2);
        for (auto mode : {Max, Sum})
            for (double eps : grid_with_midpoints(ext.spec()))
                EXPECT_EQ(check_separation(ext.spec(), G, B, eps, mode).verdict, Verdict::Holds)
                    << "trial " << trial << " eps " << eps;
    }
}

TEST(Covering, TwoTrackFixture) {
    const SystemSpec spec = fixtures::two_track_layered();
    const StateSet G(6, {fixtures::kEndQ}), B(6, {fixtures::kEndP});
    for (auto mode : {Max, Sum}) {
        const auto r = check_covering(spec, G, B, mode);
        EXPECT_EQ(r.good.verdict, Verdict::Holds);
        EXPECT_EQ(r.bad.verdict, Verdict::Holds);
    }
}

TEST(Covering, GuardedWhenNothingLandsInG) {
    // P0 is nobody's image, so no step ends in {(2, P0)}
    const auto ext = build_time_extension(fixtures::two_track_base(), {0, 2});
    const StateSet G = ext.lift_final({0});
    const StateSet B = ext.final_layer() - G;
    const auto r = check_covering(ext.spec(), G, B, Max);
    EXPECT_EQ(r.good.verdict, Verdict::HypothesisNotMet);
    EXPECT_EQ(r.bad.verdict, Verdict::Holds);
}

TEST(Covering, RandomExtensions) {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 30; ++trial) {
        const auto ext = build_time_extension(fixtures::random_base(rng, 1 + trial % 6), {0, 1 + trial % 4});
        const auto [G2, B2] = fixtures::random_final_split(rng, ext);
        const StateSet G = ext.lift_final(G2), B = ext.lift_final(B2);
        for (auto mode : {Max, Sum}) {
            const auto r = check_covering(ext.spec(), G, B, mode);
            EXPECT_NE(r.good.verdict, Verdict::Fails) << trial;
            EXPECT_NE(r.bad.verdict, Verdict::Fails) << trial;
        }
    }
}

TEST(LayeredCost, BelowSmallestDistanceNothingActivates) {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ext = build_time_extension(fixtures::random_base(rng, 2 + trial % 5), {0, 1 + trial % 3});
        const auto grid = auto_grid(ext.spec());
        if (grid.size() < 2) continue;
        const auto [A2, rest] = fixtures::random_final_split(rng, ext);
        const StateSet A = ext.lift_final(A2);
        for (auto mode : {Max, Sum})
            EXPECT_EQ(basin_pos(ext.spec(), A, grid[1] / 2, mode).members, basin_pos(ext.spec(), A, 0.0, mode).members);
    }
}
