#include <gtest/gtest.h>

#include <random>

#include "unfold/topolink.hpp"

#include "linking_oracle.hpp"

namespace unfold::test {
namespace {

TEST(LoopValidation, RejectsBadLoops) {
    EXPECT_THROW(validate_loop({{{0, 0, 0}, {1, 0, 0}}}), std::invalid_argument);
    EXPECT_THROW(validate_loop({{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}}}), std::invalid_argument);
    // Figure-eight style self-crossing.
    EXPECT_THROW(validate_loop({{{0, 0, 0}, {2, 2, 0}, {2, 0, 0}, {0, 2, 0}}}),
                 std::invalid_argument);
    validate_loop({{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}});
}

TEST(LinkingNumber, SplitLinkZero) {
    PolyLoop a = circle_loop({0, 0, 0}, {0, 0, 1}, 1, 16);
    PolyLoop b = circle_loop({3, 0, 1}, {0, 0, 1}, 1, 16);
    EXPECT_EQ(linking_number(a, b), 0);
}

TEST(LinkingNumber, HopfRectanglesPlusMinusOne) {
    PolyLoop h1{{{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}};
    PolyLoop h2{{{0, 0, -1}, {2, 0, -1}, {2, 0, 1}, {0, 0, 1}}};
    int lk = linking_number(h1, h2);
    EXPECT_EQ(std::abs(lk), 1);
    EXPECT_EQ(linking_number(h2, h1), lk);
    EXPECT_EQ(gauss_linking(h1, h2), lk);
}

TEST(LinkingNumber, BorromeanPairwiseZero) {
    PolyLoop b1{{{-2, -1, 0}, {2, -1, 0}, {2, 1, 0}, {-2, 1, 0}}};
    PolyLoop b2{{{0, -2, -1}, {0, 2, -1}, {0, 2, 1}, {0, -2, 1}}};
    PolyLoop b3{{{-1, 0, -2}, {1, 0, -2}, {1, 0, 2}, {-1, 0, 2}}};
    // [DERIVED: mutually perpendicular rectangles are pairwise unlinked]
    EXPECT_EQ(linking_number(b1, b2), 0);
    EXPECT_EQ(linking_number(b1, b3), 0);
    EXPECT_EQ(linking_number(b2, b3), 0);
}

TEST(LinkingNumber, TouchingLoopsThrow) {
    PolyLoop a = circle_loop({0, 0, 0}, {0, 0, 1}, 1, 16);
    PolyLoop b = circle_loop({2, 0, 0}, {0, 0, 1}, 1, 16);  // tangent at (1,0,0)
    EXPECT_THROW(linking_number(a, b), LoopsTouchError);
}

TEST(LinkingNumber, RandomPairsMatchOracleAndSeeds) {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> ud(-1, 1);
    auto rdir = [&]() {
        Point3 d{ud(rng), ud(rng), ud(rng)};
        while (d.norm() < 1e-2) d = {ud(rng), ud(rng), ud(rng)};
        return d.normalized();
    };
    int nonzero = 0;
    for (int it = 0; it < 100; ++it) {
        Point3 c1{ud(rng), ud(rng), ud(rng)};
        Point3 ax1 = rdir();
        PolyLoop a = circle_loop(c1, ax1, 1.0 + 0.3 * ud(rng), 10);
        PolyLoop b;
        if (it % 2 == 0) {
            // Hopf-style partner: centered on the first circle's rim.
            Point3 rim = a.vertices[it % 10];
            b = hopf_partner(rim, (rim - c1).cross(ax1).normalized(), 1.0, 12);
        } else {
            b = circle_loop({c1.x + 3 + ud(rng), c1.y + ud(rng), c1.z + ud(rng)}, rdir(),
                            0.8 + 0.3 * ud(rng), 12);
        }
        if (loop_loop_dist(a, b) <= 1e-6) continue;
        int lk1 = linking_number(a, b, 0xabcd + it);
        int lk2 = linking_number(a, b, 0x1234 + 7 * it);
        EXPECT_EQ(lk1, lk2) << "iteration " << it;
        EXPECT_EQ(lk1, gauss_linking(a, b)) << "iteration " << it;
        nonzero += lk1 != 0;
    }
    EXPECT_GT(nonzero, 20);
}

TEST(LinkingNumber, RigidMotionAndRefinementInvariance) {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> ud(-1, 1);
    PolyLoop h1{{{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}};
    PolyLoop h2{{{0, 0, -1}, {2, 0, -1}, {2, 0, 1}, {0, 0, 1}}};
    int lk = linking_number(h1, h2);
    for (int it = 0; it < 10; ++it) {
        Point3 axis = Point3{ud(rng), ud(rng), ud(rng)}.normalized();
        Isometry3 m = rotation_about_line({ud(rng), ud(rng), ud(rng)}, axis, ud(rng) * 3);
        PolyLoop r1, r2;
        for (auto& v : h1.vertices) r1.vertices.push_back(m(v));
        for (auto& v : h2.vertices) r2.vertices.push_back(m(v));
        EXPECT_EQ(linking_number(r1, r2, 99 + it), lk);
        // Refine by splitting every edge.
        PolyLoop f1;
        int n = (int)r1.vertices.size();
        for (int i = 0; i < n; ++i) {
            f1.vertices.push_back(r1.vertices[i]);
            f1.vertices.push_back((r1.vertices[i] + r1.vertices[(i + 1) % n]) * 0.5);
        }
        EXPECT_EQ(linking_number(f1, r2, 1000 + it), lk);
    }
}

void expect_square_isometric(const BuiltEmbedding& E, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ud(0, 1);
    int checked = 0;
    while (checked < 60) {
        Point2 u{ud(rng), ud(rng)}, v{ud(rng), ud(rng)};
        int fu = E.faces.face_of(u), fv = E.faces.face_of(v);
        if (fu < 0 || fu != fv) continue;
        Point3 iu = E.isos[fu]({u.x, u.y, 0}), iv = E.isos[fv]({v.x, v.y, 0});
        ASSERT_NEAR(dist(iu, iv), dist(u, v), 1e-9);
        ++checked;
    }
}

TEST(LockedExample, StandardBuildProperties) {
    LockedConfig cfg = build_locked_example(2, 16, 0.05);
    PropertyReport rep = measure_properties(cfg);
    EXPECT_LT(rep.loopSeparation, 0.1);
    EXPECT_GT(rep.loopSeparation, 0);
    EXPECT_LT(rep.loopSeparation, 2 * cfg.loopLength + 0.05);
    EXPECT_EQ(rep.pairwiseLinking[0], 0);
    EXPECT_EQ(rep.pairwiseLinking[1], 0);
    EXPECT_EQ(rep.pairwiseLinking[2], 0);
    expect_square_isometric(cfg.surface, 5);
}

TEST(LockedExample, CoarseBuildStillIsometric) {
    LockedConfig cfg = build_locked_example(1, 8, 0.05);
    expect_square_isometric(cfg.surface, 6);
    EXPECT_FALSE(check_self_intersection(cfg.surface, 0).intersecting);
}

TEST(LockedExample, ParameterGuards) {
    EXPECT_THROW(build_locked_example(2, 16, 0.5), std::invalid_argument);
    EXPECT_THROW(build_locked_example(0, 16, 0.05), std::invalid_argument);
    EXPECT_THROW(build_locked_example(2, 4, 0.05), std::invalid_argument);
}

TEST(LockedExample, FlatConfigurationSentinels) {
    Polygon sq = validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    LockedConfig flat;
    flat.surface = build_embedding(sq, {}, {});
    flat.loopLength = 0.05;
    flat.loopA = {{{-0.02, 0.45, 0}, {-0.05, 0.45, 0}, {-0.05, 0.55, 0}, {-0.02, 0.55, 0}}};
    flat.loopB = {{{1.02, 0.45, 0}, {1.05, 0.45, 0}, {1.05, 0.55, 0}, {1.02, 0.55, 0}}};
    PropertyReport rep = measure_properties(flat);
    EXPECT_NEAR(rep.loopSeparation, 1.04, 0.02);
    EXPECT_TRUE(std::isinf(rep.nearestBendDistToCenter));
    EXPECT_EQ(rep.pairwiseLinking[0], 0);
}

TEST(LockedExample, DeformedBendCrossings) {
    LockedConfig cfg = build_deformed_example(0.05);
    PropertyReport rep = measure_properties(cfg);
    EXPECT_NEAR(rep.nearestBendDistToCenter, 0.0, 1e-9);
    // [PAPER: the deformed roll's center bend line crosses the top and
    // bottom sides at distance 1/4 from the sides]
    EXPECT_NEAR(rep.bendCrossingOffsets.first, 0.25, 0.02);
    EXPECT_NEAR(rep.bendCrossingOffsets.second, 0.25, 0.02);
    EXPECT_EQ(rep.pairwiseLinking[0], 0);
    EXPECT_EQ(rep.pairwiseLinking[1], 0);
    EXPECT_EQ(rep.pairwiseLinking[2], 0);
}

TEST(CenterlineLoop, ClosedOnDiameterSphere) {
    LockedConfig cfg = build_locked_example(2, 16, 0.05);
    PolyLoop C = centerline_loop(cfg);
    validate_loop(C);
    ASSERT_EQ(C.vertices.size(), 33u);
    // All closure vertices lie on the sphere with the bend segment as
    // diameter.
    Point3 A = C.vertices[0], B = C.vertices[1];
    Point3 mid = (A + B) * 0.5;
    double R = dist(A, B) / 2;
    for (size_t i = 2; i < C.vertices.size(); ++i)
        EXPECT_NEAR(dist(C.vertices[i], mid), R, 1e-12);
}

}  // namespace
}  // namespace unfold::test
