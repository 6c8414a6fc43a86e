#include <gtest/gtest.h>

#include <random>

#include "unfold/flatfold2d.hpp"
#include "unfold/fold1d.hpp"

namespace unfold::test {
namespace {

Polygon unit_square() { return validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Vertical chords x = xs[j] on the unit square.
FlatFold2D accordion(const std::vector<double>& xs) {
    FlatFold2D F{unit_square(), {}, {}};
    for (double x : xs) F.chords.push_back({{0, x}, {2, 1 - x}});
    return F;
}

// Overlap orders realizing a total bottom-to-top order of the faces.
void set_order(FlatFold2D& F, const std::vector<int>& bottomToTop) {
    F.overlaps.clear();
    for (size_t x = 0; x < bottomToTop.size(); ++x)
        for (size_t y = x + 1; y < bottomToTop.size(); ++y)
            F.overlaps.push_back({bottomToTop[y], bottomToTop[x], true});
}

// Two chords fanning out of the corner (0,0) of the unit square.
FlatFold2D corner_fan() {
    FlatFold2D K{unit_square(), {{{0, 0.0}, {1, 0.4}}, {{0, 0.0}, {2, 0.6}}}, {}};
    K.overlaps = {{1, 0, true}, {2, 1, true}, {2, 0, true}};
    return K;
}

// The accordion's 1D counterpart: folds at the chord positions, stacking by
// restricting the global face order to each cell.
Folding1D accordion_1d(const std::vector<double>& xs, const std::vector<int>& bottomToTop) {
    Folding1D f;
    f.length = 1;
    f.folds = xs;
    f.startImage = 0;
    f.startDirection = 1;
    Fold1DCells cells = fold1d_cells(f);
    for (int m = 0; m < cells.cell_count(); ++m) {
        std::vector<int> order;
        for (int piece : bottomToTop)
            if (std::find(cells.cover[m].begin(), cells.cover[m].end(), piece) !=
                cells.cover[m].end())
                order.push_back(piece);
        f.stacking.push_back(order);
    }
    return f;
}

double max_chord_x(const FlatFold2D& F) {
    double worst = -1;
    for (const FoldChord& ch : F.chords) {
        worst = std::max(worst, boundary_point(F.domain, ch.a).x);
        worst = std::max(worst, boundary_point(F.domain, ch.b).x);
    }
    return worst;
}

double sup_step(const FlatFold2D& a, const FlatFold2D& b, const std::vector<Point2>& pts) {
    auto ia = detail::frame_images(a, pts);
    auto ib = detail::frame_images(b, pts);
    double worst = 0;
    for (size_t s = 0; s < pts.size(); ++s) worst = std::max(worst, dist(ia[s], ib[s]));
    return worst;
}

TEST(FaceDecomp, NoChordsSingleFace) {
    FlatFold2D F{unit_square(), {}, {}};
    FaceDecomposition D = face_decomposition(F);
    EXPECT_EQ(D.face_count(), 1);
    EXPECT_EQ(D.parentFace[0], -1);
    EXPECT_NEAR(detail::loop_area(D.faces[0]), 1.0, 1e-12);
}

TEST(FaceDecomp, SingleChordTwoFaces) {
    FlatFold2D F = accordion({0.5});
    FaceDecomposition D = face_decomposition(F);
    ASSERT_EQ(D.face_count(), 2);
    EXPECT_EQ(D.parentFace[1], 0);
    EXPECT_EQ(D.parentChord[1], 0);
    EXPECT_NEAR(detail::loop_area(D.faces[0]), 0.5, 1e-12);
    EXPECT_NEAR(detail::loop_area(D.faces[1]), 0.5, 1e-12);
    EXPECT_EQ(D.face_of({0.25, 0.5}), 0);
    EXPECT_EQ(D.face_of({0.75, 0.5}), 1);
}

TEST(FaceDecomp, AccordionIsPath) {
    FlatFold2D F = accordion({0.25, 0.5, 0.75});
    FaceDecomposition D = face_decomposition(F);
    ASSERT_EQ(D.face_count(), 4);
    // [DERIVED: parallel chords nest left to right, so the dual is a path]
    EXPECT_EQ(D.parentFace[1], 0);
    EXPECT_EQ(D.parentFace[2], 1);
    EXPECT_EQ(D.parentFace[3], 2);
    for (int f = 0; f < 4; ++f) EXPECT_NEAR(detail::loop_area(D.faces[f]), 0.25, 1e-12);
}

TEST(FaceDecomp, CrossingChordsThrow) {
    FlatFold2D F{unit_square(), {{{0, 0.5}, {2, 0.5}}, {{1, 0.5}, {3, 0.5}}}, {}};
    EXPECT_THROW(face_decomposition(F), CrossingChordsError);
}

TEST(FaceIsometry, RootIdentity) {
    FlatFold2D F = accordion({0.5});
    FaceDecomposition D = face_decomposition(F);
    Isometry2 iso = face_isometry(F, D, 0);
    Point2 p = iso({0.3, 0.7});
    EXPECT_EQ(p.x, 0.3);
    EXPECT_EQ(p.y, 0.7);
    EXPECT_EQ(iso.sign, 1);
}

TEST(FaceIsometry, HalfFoldReflection) {
    FlatFold2D F = accordion({0.5});
    FaceDecomposition D = face_decomposition(F);
    Isometry2 iso = face_isometry(F, D, 1);
    Point2 p = iso({0.75, 0.2});
    EXPECT_NEAR(p.x, 0.25, 1e-12);
    EXPECT_NEAR(p.y, 0.2, 1e-12);
    EXPECT_EQ(iso.sign, -1);
}

TEST(FaceIsometry, AccordionCornerMatchesFold1D) {
    FlatFold2D F = accordion({0.25, 0.5, 0.75});
    FaceDecomposition D = face_decomposition(F);
    Isometry2 iso = face_isometry(F, D, 3);
    Point2 p = iso({1, 0});
    // [DERIVED: composing the three reflections sends (1,0) to (0,0)]
    EXPECT_NEAR(p.x, 0.0, 1e-12);
    EXPECT_NEAR(p.y, 0.0, 1e-12);
    EXPECT_EQ(iso.sign, -1);
    // Cross-check against the 1D image of the transversal y = 0.
    Folding1D f = accordion_1d({0.25, 0.5, 0.75}, {0, 1, 2, 3});
    EXPECT_NEAR(fold1d_position(f, 1.0), p.x, 1e-12);
    Isometry2 iso2 = face_isometry(F, D, 2);
    EXPECT_NEAR(fold1d_position(f, 0.6), iso2({0.6, 0}).x, 1e-12);
}

TEST(ValidateFlatFold, SingleChordEitherBit) {
    for (bool up : {false, true}) {
        FlatFold2D F = accordion({0.5});
        F.overlaps = {{0, 1, up}};
        FlatFoldReport r = validate_flatfold(F);
        EXPECT_TRUE(r.valid) << r.detail;
    }
}

TEST(ValidateFlatFold, AccordionSpiralValid) {
    FlatFold2D F = accordion({0.25, 0.5, 0.75});
    set_order(F, {0, 1, 2, 3});
    FlatFoldReport r = validate_flatfold(F);
    EXPECT_TRUE(r.valid) << r.detail;
}

TEST(ValidateFlatFold, AccordionZPenetration) {
    // Face 0 slotted between faces 1 and 2: its free edge pokes through
    // their shared crease. [DERIVED: 1D restriction of the transversal]
    FlatFold2D F = accordion({0.25, 0.5, 0.75});
    set_order(F, {1, 0, 2, 3});
    FlatFoldReport r = validate_flatfold(F);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.violation, Fold1DViolation::CreasePenetration);
    EXPECT_TRUE(r.transversal.has_value());
}

TEST(ValidateFlatFold, MissingOverlapOrder) {
    FlatFold2D F = accordion({0.25, 0.5, 0.75});
    set_order(F, {0, 1, 2, 3});
    F.overlaps.pop_back();
    FlatFoldReport r = validate_flatfold(F);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.violation, Fold1DViolation::BadStructure);
    EXPECT_NE(r.detail.find("missing overlap order"), std::string::npos);
}

TEST(ValidateFlatFold, ConflictingOrders) {
    FlatFold2D F = accordion({0.5});
    F.overlaps = {{0, 1, true}, {1, 0, true}};
    FlatFoldReport r = validate_flatfold(F);
    EXPECT_FALSE(r.valid);
    EXPECT_EQ(r.violation, Fold1DViolation::BadStructure);
}

TEST(ValidateFlatFold, CornerFanValid) {
    // Non-parallel chords: the straight material segment is not a faithful
    // transversal here, the pulled-back image line is. [DERIVED: wedge
    // images about the corner do not interleave]
    FlatFoldReport r = validate_flatfold(corner_fan());
    EXPECT_TRUE(r.valid) << r.detail;
}

TEST(ValidateFlatFold, MatchesFold1DOnRandomAccordions) {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> ud(0, 1);
    int invalidSeen = 0;
    for (int it = 0; it < 60; ++it) {
        int k = std::uniform_int_distribution<int>(1, 6)(rng);
        std::vector<double> xs;
        for (;;) {
            xs.assign(k, 0);
            for (auto& x : xs) x = 0.05 + 0.9 * ud(rng);
            std::sort(xs.begin(), xs.end());
            bool ok = true;
            for (int j = 0; j + 1 < k; ++j) ok = ok && xs[j + 1] - xs[j] > 0.05;
            if (ok) break;
        }
        std::vector<int> order(k + 1);
        for (int f = 0; f <= k; ++f) order[f] = f;
        std::shuffle(order.begin(), order.end(), rng);

        Fold1DReport want = validate_folding1d(accordion_1d(xs, order));
        FlatFold2D F = accordion(xs);
        set_order(F, order);
        FlatFoldReport got = validate_flatfold(F, 2, 77 + it);
        EXPECT_EQ(got.valid, want.valid) << "iteration " << it << ": " << got.detail << " vs "
                                         << want.detail;
        invalidSeen += !want.valid;
    }
    EXPECT_GT(invalidSeen, 10);
}

TEST(TransversalCoherence, HorizontalRestrictionOfAccordion) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ud(0.1, 0.9);
    for (int it = 0; it < 20; ++it) {
        std::vector<double> xs{0.2, 0.45, 0.8};
        std::vector<int> order{0, 1, 2, 3};
        FlatFold2D F = accordion(xs);
        set_order(F, order);
        FaceDecomposition D = face_decomposition(F);
        std::string conflict;
        detail::AboveMap above = detail::above_map(F, 4, &conflict);
        double y = ud(rng);
        auto R = detail::restrict_to_segment(F, D, {0, y}, {1, y}, above);
        ASSERT_TRUE(R.ok) << R.reason;
        ASSERT_EQ(R.folding.folds.size(), xs.size());
        for (size_t j = 0; j < xs.size(); ++j) EXPECT_NEAR(R.folding.folds[j], xs[j], 1e-9);
        for (int p = 0; p <= 3; ++p) EXPECT_EQ(R.pieceFace[p], p);
        Folding1D direct = accordion_1d(xs, order);
        ASSERT_EQ(R.folding.stacking.size(), direct.stacking.size());
        for (size_t m = 0; m < direct.stacking.size(); ++m)
            EXPECT_EQ(R.folding.stacking[m], direct.stacking[m]);
    }
}

TEST(RollFold, SquareHalfRollsRight) {
    FlatFold2D F = accordion({0.5});
    F.overlaps = {{1, 0, true}};
    int steps = 16;
    Motion2D M = roll_fold_to_boundary(F, 0, steps);
    ASSERT_EQ(M.frames.size(), steps);
    EXPECT_EQ(M.frames[0].chords.size(), 1u);
    EXPECT_TRUE(M.frames.back().chords.empty());
    for (int k = 1; k + 1 < steps; ++k) {
        double t = double(k) / (steps - 1);
        ASSERT_EQ(M.frames[k].chords.size(), 1u);
        // [DERIVED: rolling right moves the chord to x = 0.5 + 0.5 t]
        EXPECT_NEAR(max_chord_x(M.frames[k]), 0.5 + 0.5 * t, 1e-9);
        FlatFoldReport r = validate_flatfold(M.frames[k]);
        EXPECT_TRUE(r.valid) << r.detail;
    }
}

TEST(RollFold, BoundarySliver) {
    FlatFold2D F = accordion({1 - 1e-6});
    F.overlaps = {{1, 0, true}};
    Motion2D M = roll_fold_to_boundary(F, 0, 8);
    EXPECT_EQ(M.frames.size(), 8u);
    EXPECT_TRUE(M.frames.back().chords.empty());
}

TEST(RollFold, SlantChord) {
    FlatFold2D F{unit_square(), {{{0, 0.8}, {2, 0.2}}}, {{1, 0, true}}};
    F.chords[0] = {{0, 0.2}, {2, 0.2}};  // from (0.2,0) to (0.8,1)
    Motion2D M = roll_fold_to_boundary(F, 0, 12);
    EXPECT_TRUE(M.frames.back().chords.empty());
    for (size_t k = 0; k + 1 < M.frames.size(); ++k) {
        if (M.frames[k].chords.empty()) continue;
        FlatFoldReport r = validate_flatfold(M.frames[k]);
        EXPECT_TRUE(r.valid) << "frame " << k << ": " << r.detail;
    }
}

TEST(RollFold, MultipleChordsThrow) {
    FlatFold2D F = accordion({0.25, 0.75});
    set_order(F, {0, 1, 2});
    EXPECT_THROW(roll_fold_to_boundary(F, 0, 8), MultipleChordsError);
}

TEST(UnfoldFlatFold, NoChordsIdentityMotion) {
    FlatFold2D F{unit_square(), {}, {}};
    SpiralParams sp{{0.5, 0.5}, 0, 1};
    Motion2D M = unfold_motion_flatfold(F, sp, 8);
    ASSERT_EQ(M.frames.size(), 8u);
    for (auto& fr : M.frames) EXPECT_TRUE(fr.chords.empty());
    for (auto& p : M.params) EXPECT_EQ(p.stage, 1);
}

TEST(UnfoldFlatFold, OffCenterChordSurvivalTwoThirds) {
    Polygon sq = unit_square();
    SpiralParams sp{{0.25, 0.5}, 0, 1};
    // [DERIVED: the shrunk copy reaches x = 0.75 while 0.25 + 0.75 i >= 0.75]
    double thr = chord_survival_threshold(sq, sp, {0.75, 0}, {0.75, 1});
    EXPECT_NEAR(thr, 2.0 / 3.0, 1e-9);

    FlatFold2D F{sq, {{{0, 0.75}, {2, 0.25}}}, {{1, 0, true}}};
    int steps = 48;
    Motion2D M = unfold_motion_flatfold(F, sp, steps);
    ASSERT_EQ(M.frames.size(), steps);
    EXPECT_EQ(M.frames[0].chords.size(), 1u);
    EXPECT_EQ(boundary_param(M.frames[0].chords[0].a), boundary_param(F.chords[0].a));
    EXPECT_TRUE(M.frames.back().chords.empty());
    for (size_t k = 0; k < M.frames.size(); ++k) {
        bool expectChord = M.params[k].value > thr + 1e-9;
        if (M.params[k].value < thr - 1e-9)
            EXPECT_TRUE(M.frames[k].chords.empty()) << "i=" << M.params[k].value;
        if (expectChord) EXPECT_EQ(M.frames[k].chords.size(), 1u) << "i=" << M.params[k].value;
    }
}

TEST(UnfoldFlatFold, ThroughCenterRollsInStageTwo) {
    FlatFold2D F = accordion({0.5});
    F.overlaps = {{1, 0, true}};
    SpiralParams sp{{0.5, 0.5}, 0, 1};
    Motion2D M = unfold_motion_flatfold(F, sp, 24);
    EXPECT_EQ(M.frames[0].chords.size(), 1u);
    EXPECT_TRUE(M.frames.back().chords.empty());
    bool sawStage2 = false;
    for (auto& p : M.params) sawStage2 = sawStage2 || p.stage == 2;
    EXPECT_TRUE(sawStage2);
}

TEST(UnfoldFlatFold, CornerFanUnfoldsThroughLink) {
    FlatFold2D K = corner_fan();
    SpiralParams sp{{0, 0}, 0, 1};
    Motion2D M = unfold_motion_flatfold(K, sp, 24);
    EXPECT_EQ(M.frames[0].chords.size(), 2u);
    EXPECT_TRUE(M.frames.back().chords.empty());
    // Chords only ever pass through the center and never multiply.
    for (auto& fr : M.frames) {
        EXPECT_LE(fr.chords.size(), 2u);
        for (auto& ch : fr.chords) {
            Point2 a = boundary_point(fr.domain, ch.a), b = boundary_point(fr.domain, ch.b);
            EXPECT_LT(detail::point_segment_dist({0, 0}, a, b), 1e-7);
        }
    }
}

TEST(UnfoldFlatFold, SupNormContinuity) {
    SpiralParams sp{{0.25, 0.5}, 0, 1};
    FlatFold2D F{unit_square(), {{{0, 0.75}, {2, 0.25}}}, {{1, 0, true}}};
    int steps = 64;
    Motion2D M = unfold_motion_flatfold(F, sp, steps);
    std::vector<Point2> pts = detail::motion_sample_points(F.domain);
    double bound = 4 * F.domain.diameter() / steps;
    for (size_t k = 0; k + 1 < M.frames.size(); ++k)
        EXPECT_LT(sup_step(M.frames[k], M.frames[k + 1], pts), bound) << "step " << k;
}

TEST(UnfoldFlatFold, CenterMismatchThrows) {
    FlatFold2D K = corner_fan();
    FaceDecomposition D = face_decomposition(K);
    // Interior center: no boundary location to reduce the link at.
    EXPECT_THROW(detail::build_angular_link(K, D, {0.5, 0.5}), CenterOnChordInteriorError);
    // Boundary center that is not an endpoint of the chords.
    EXPECT_THROW(detail::build_angular_link(K, D, {1, 0}), CenterOnChordInteriorError);
}

}  // namespace
}  // namespace unfold::test
