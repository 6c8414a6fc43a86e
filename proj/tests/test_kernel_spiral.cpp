#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "unfold/kernel_spiral.hpp"

using namespace unfold;
using namespace unfold::test;

TEST(StarKernel, ConvexPolygonIsOwnKernel) {
    Polygon P = unit_square();
    ConvexRegion k = star_kernel(P);
    EXPECT_EQ(k.status, RegionStatus::Bounded);
    ASSERT_EQ(k.vertices.size(), 4u);
    for (auto& v : P.vertices()) {
        bool found = false;
        for (auto& kv : k.vertices) found = found || dist(kv, v) == 0.0;
        EXPECT_TRUE(found);
    }
}

TEST(StarKernel, LPolygonKernelIsUnitSquare) {
    ConvexRegion k = star_kernel(l_polygon());
    EXPECT_EQ(k.status, RegionStatus::Bounded);
    ASSERT_EQ(k.vertices.size(), 4u);
    for (auto& v : k.vertices) {
        EXPECT_TRUE((v.x == 0 || v.x == 1) && (v.y == 0 || v.y == 1)) << v.x << "," << v.y;
    }
    // Independent confirmation by the visibility oracle.
    auto c = grid_visibility_star_center(l_polygon());
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(k.contains(*c, grid_cell_diag(l_polygon())));
}

TEST(StarKernel, SpiralPolygonKernelEmpty) {
    EXPECT_EQ(star_kernel(spiral_polygon()).status, RegionStatus::Empty);
    EXPECT_FALSE(grid_visibility_star_center(spiral_polygon()).has_value());
}

TEST(StarKernel, RandomPolygonsAgreeWithVisibilityOracle) {
    std::mt19937 rng(2026);
    int done = 0, nonempty = 0;
    while (done < 20) {
        Polygon P = random_simple_polygon(rng);
        double margin = kernel_margin(P);
        // Skip kernels thinner than the oracle grid.
        if (margin >= 0 && margin < 2 * grid_cell_diag(P)) continue;
        bool kernelNonempty = star_kernel(P).status != RegionStatus::Empty;
        bool oracleNonempty = grid_visibility_star_center(P).has_value();
        EXPECT_EQ(kernelNonempty, oracleNonempty);
        nonempty += kernelNonempty;
        ++done;
    }
    EXPECT_GT(nonempty, 0);
    EXPECT_LT(nonempty, 20);
}

TEST(SpiralRegion, ThetaZeroEqualsKernelExactly) {
    for (const Polygon& P : {unit_square(), l_polygon(), spiral_polygon(), fig1_polygon()}) {
        ConvexRegion a = star_kernel(P);
        ConvexRegion b = spiral_feasible_region(P, 0.0);
        EXPECT_EQ(a.status, b.status);
        ASSERT_EQ(a.vertices.size(), b.vertices.size());
        for (size_t i = 0; i < a.vertices.size(); ++i) {
            EXPECT_TRUE(a.vertices[i] == b.vertices[i]);
        }
    }
}

TEST(SpiralRegion, ThetaOutOfRange) {
    EXPECT_THROW(spiral_feasible_region(unit_square(), M_PI / 2), ThetaOutOfRangeError);
    EXPECT_THROW(spiral_feasible_region(unit_square(), -2.0), ThetaOutOfRangeError);
}

TEST(SpiralRegion, SquareAtQuarterPiContainsCenter) {
    ConvexRegion r = spiral_feasible_region(unit_square(), M_PI / 4);
    EXPECT_NE(r.status, RegionStatus::Empty);
    EXPECT_TRUE(r.contains({0.5, 0.5}, 1e-12));
    // And the motion from the center actually stays inside.
    SpiralParams sp{{0.5, 0.5}, M_PI / 4, 1.0};
    EXPECT_TRUE(verify_shrinking_motion(unit_square(), sp, 64, 5.0).verdict);
}

TEST(SpiralMap, IdentityAtZero) {
    SpiralParams sp{{0.3, 0.7}, 0.3, 2.0};
    Similarity s = spiral_map(sp, 0.0);
    Point2 z{1.5, -2.0};
    EXPECT_EQ(s(z).x, z.x);
    EXPECT_EQ(s(z).y, z.y);
}

TEST(SpiralMap, PureScalingAtThetaZero) {
    SpiralParams sp{{1, 1}, 0.0, 1.0};
    Similarity s = spiral_map(sp, std::log(2.0));
    Point2 z{3, 1};
    EXPECT_NEAR(s(z).x, 2.0, 1e-12);
    EXPECT_NEAR(s(z).y, 1.0, 1e-12);
}

TEST(SpiralMap, QuarterPiMatchesComplexExponential) {
    // theta = pi/4, rate = sqrt(2): sigma = omega = -1.
    SpiralParams sp{{0, 0}, M_PI / 4, std::sqrt(2.0)};
    double t = std::log(2.0);
    Similarity s = spiral_map(sp, t);
    EXPECT_NEAR(s.scale, 0.5, 1e-12);
    EXPECT_NEAR(s.angle, -t, 1e-12);
    // Complex check: z=1 -> e^{(-1-i) t} = (1/2) e^{-i ln 2}
    Point2 img = s({1, 0});
    EXPECT_NEAR(img.x, 0.5 * std::cos(t), 1e-12);
    EXPECT_NEAR(img.y, -0.5 * std::sin(t), 1e-12);
}

TEST(SpiralMap, NegativeTimeRejected) {
    EXPECT_THROW(spiral_map(SpiralParams{{0, 0}, 0, 1}, -0.1), NegativeTimeError);
}

TEST(SpiralMap, SemigroupProperty) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ud(0, 1);
    for (int it = 0; it < 200; ++it) {
        SpiralParams sp{{ud(rng), ud(rng)}, (ud(rng) - 0.5) * 3, 0.2 + 2 * ud(rng)};
        double s = 2 * ud(rng), t = 2 * ud(rng);
        Point2 z{4 * ud(rng) - 2, 4 * ud(rng) - 2};
        Point2 a = spiral_map(sp, s + t)(z);
        Point2 b = spiral_map(sp, s)(spiral_map(sp, t)(z));
        EXPECT_NEAR(a.x, b.x, 1e-12);
        EXPECT_NEAR(a.y, b.y, 1e-12);
    }
}

TEST(SpiralMap, OrbitMeetsRaysAtConstantAngle) {
    // Angle between (z_t - c) and the numerical velocity is pi - theta.
    SpiralParams sp{{0.2, -0.1}, 0.6, 1.3};
    Point2 z{2, 1};
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        double h = 1e-7;
        Point2 a = spiral_map(sp, t - h)(z);
        Point2 b = spiral_map(sp, t + h)(z);
        Vec2 vel = (b - a) * (1 / (2 * h));
        Vec2 radial = spiral_map(sp, t)(z) - sp.center;
        double ang = std::acos(radial.dot(vel) / (radial.norm() * vel.norm()));
        EXPECT_NEAR(ang, M_PI - sp.theta, 1e-6);
    }
}

TEST(VerifyShrink, SquareCenterAndOutside) {
    Polygon P = unit_square();
    ShrinkReport ok = verify_shrinking_motion(P, {{0.5, 0.5}, 0, 1}, 16, 3.0);
    EXPECT_TRUE(ok.verdict);
    for (auto& s : ok.samples) EXPECT_EQ(s.worstViolation, 0.0);
    ShrinkReport bad = verify_shrinking_motion(P, {{2, 2}, 0, 1}, 16, 3.0);
    EXPECT_FALSE(bad.verdict);
    bool someViolation = false;
    for (auto& s : bad.samples) someViolation = someViolation || s.worstViolation > 0;
    EXPECT_TRUE(someViolation);
}

TEST(VerifyShrink, LPolygonKernelCenter) {
    EXPECT_TRUE(verify_shrinking_motion(l_polygon(), {{0.5, 0.5}, 0, 1}, 32, 4.0).verdict);
}

TEST(FindSpiral, SquareFindsFeasibleParams) {
    auto res = find_spiral_params(unit_square(), 64, 20);
    ASSERT_TRUE(res.has_value());
    EXPECT_GE(res->margin, 0.0);
    EXPECT_TRUE(verify_shrinking_motion(unit_square(), res->params, 64, 5.0).verdict);
}

TEST(FindSpiral, Fig1PolygonNeedsNonzeroTheta) {
    Polygon P = fig1_polygon();
    EXPECT_EQ(star_kernel(P).status, RegionStatus::Empty);
    auto res = find_spiral_params(P, 720, 60);
    ASSERT_TRUE(res.has_value());
    EXPECT_GT(std::fabs(res->params.theta), 0.05);
    auto rep = verify_shrinking_motion(P, res->params, 64, 5.0 / res->params.rate);
    EXPECT_TRUE(rep.verdict);
}

TEST(FindSpiral, ZigzagCombInfeasibleAtResolution) {
    // A long comb with deep alternating teeth has no shrink center at any
    // sampled angle.
    std::vector<Point2> pts;
    int teeth = 5;
    for (int i = 0; i < teeth; ++i) {
        double x = 2.0 * i;
        pts.push_back({x, 0});
        pts.push_back({x + 1, 0});
        pts.push_back({x + 1, 4});
        pts.push_back({x + 1.2, 4});
        pts.push_back({x + 1.2, -0.0});
    }
    pts.push_back({2.0 * teeth, 0});
    pts.push_back({2.0 * teeth, 5});
    pts.push_back({0, 5});
    Polygon P = validate_polygon(pts);
    std::vector<MarginSample> curve;
    auto res = find_spiral_params(P, 180, 20, &curve);
    EXPECT_FALSE(res.has_value());
    for (auto& s : curve) EXPECT_LT(s.margin, 0.0);
}
