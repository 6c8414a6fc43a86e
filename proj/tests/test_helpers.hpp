// Shared fixtures and independent oracles for the test suites.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "unfold/geometry.hpp"
#include "unfold/kernel_spiral.hpp"
#include "unfold/region.hpp"

namespace unfold::test {

inline Polygon unit_square() {
    return validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline Polygon l_polygon() {
    return validate_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}

// Rectangular spiral arm; its kernel is empty.
inline Polygon spiral_polygon() {
    return validate_polygon(
        {{0, 0}, {5, 0}, {5, 5}, {1, 5}, {1, 2}, {2, 2}, {2, 4}, {4, 4}, {4, 1}, {0, 1}});
}

// Polygonalized spiral domain built from three logarithmic-spiral walls
// about the origin: outer wall of pitch angle thetaOuter over [0, phiEnd],
// a steeper inner wall (thetaInner, scaled by wallScale) back down to
// 1.5*pi, and a shallow spiral closure from the inner-wall end into the
// start vertex (1, 0). Orbits whose own pitch lies strictly between the
// closure pitch and the inner-wall pitch enter every wall, so the shape
// shrinks spirally into itself about the origin yet is not star-shaped.
// samplesPerTurn must keep the chord normal error (pi/samplesPerTurn) below
// the pitch gaps or the polygonalization eats the margin.
inline Polygon fig1_polygon(double thetaOuter = 0.25, double thetaInner = 0.5,
                            double phiEnd = 3 * M_PI, double wallScale = 0.0453,
                            int samplesPerTurn = 48) {
    auto spiral = [&](double phi, double mu, double scale) {
        double r = scale * std::exp(mu * phi);
        return Point2{r * std::cos(phi), r * std::sin(phi)};
    };
    double muOuter = std::tan(thetaOuter), muInner = std::tan(thetaInner);
    std::vector<Point2> pts;
    double phiInnerStart = 1.5 * M_PI;
    int nOuter = static_cast<int>(phiEnd / (2 * M_PI) * samplesPerTurn) + 1;
    for (int i = 0; i <= nOuter; ++i) pts.push_back(spiral(phiEnd * i / nOuter, muOuter, 1.0));
    int nInner = static_cast<int>((phiEnd - phiInnerStart) / (2 * M_PI) * samplesPerTurn) + 1;
    for (int i = nInner; i >= 0; --i)
        pts.push_back(
            spiral(phiInnerStart + (phiEnd - phiInnerStart) * i / nInner, muInner, wallScale));
    // Spiral closure from the inner-wall end (at angle -pi/2) to (1, 0),
    // chosen continuous in radius: r = e^{muClose * phi}, phi in (-pi/2, 0).
    double rJoin = wallScale * std::exp(muInner * phiInnerStart);
    double muClose = -2 * std::log(rJoin) / M_PI;
    int nClose = samplesPerTurn / 4;
    for (int i = 1; i < nClose; ++i)
        pts.push_back(spiral(-M_PI / 2 + 0.5 * M_PI * i / nClose, muClose, 1.0));
    return validate_polygon(pts);
}

// Random simple polygon: vertices at sorted random angles with random radii
// about a random center. Rejection keeps only valid polygons.
inline Polygon random_simple_polygon(std::mt19937& rng, int maxVerts = 12) {
    std::uniform_int_distribution<int> nd(4, maxVerts);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (;;) {
        int n = nd(rng);
        std::vector<double> angles(n);
        for (auto& a : angles) a = ud(rng) * 2 * M_PI;
        std::sort(angles.begin(), angles.end());
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i) ok = ok && (angles[i + 1] - angles[i] > 0.05);
        if (!ok) continue;
        std::vector<Point2> pts;
        for (double a : angles) {
            double r = 0.2 + 1.3 * ud(rng);
            pts.push_back({r * std::cos(a), r * std::sin(a)});
        }
        // A radial polygon is always star-shaped from the origin. With a
        // straight slit the visibility cone still passes through the origin,
        // so carve a hooked slit about half the time: its end face anchors
        // the cone off-origin and the kernel often vanishes.
        if (ud(rng) < 0.55) {
            int m0 = (int)pts.size();
            int e = std::uniform_int_distribution<int>(0, m0 - 1)(rng);
            Point2 a = pts[e], b = pts[(e + 1) % m0];
            Point2 m = lerp(a, b, 0.5);
            double depth = 0.1 + 0.1 * ud(rng);
            double rot = 0.6 + 0.5 * ud(rng);
            Point2 d{m.x * depth, m.y * depth};
            Point2 h{d.x * std::cos(rot) - d.y * std::sin(rot),
                     d.x * std::sin(rot) + d.y * std::cos(rot)};
            std::vector<Point2> notch{lerp(a, b, 0.32), d, h, lerp(a, b, 0.68)};
            pts.insert(pts.begin() + e + 1, notch.begin(), notch.end());
        }
        try {
            return validate_polygon(pts);
        } catch (const std::exception&) {
        }
    }
}

// Plain double crossing-number test, fast path for the grid oracle.
inline bool inside_fast(const Polygon& P, Point2 q) {
    bool in = false;
    int n = P.size();
    for (int i = 0; i < n; ++i) {
        auto [a, b] = P.edge(i);
        if ((a.y > q.y) != (b.y > q.y)) {
            double xi = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > q.x) in = !in;
        }
    }
    return in;
}

// Double-precision proper-crossing test. The oracle only queries segments
// pulled 1e-7 off the boundary, far from the degeneracies that would need
// exact signs, and kernels thinner than the grid are skipped anyway.
inline bool cross_fast(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto side = [](Point2 p, Point2 q, Point2 r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    return side(a, b, c) * side(a, b, d) < 0 && side(c, d, a) * side(c, d, b) < 0;
}

// Segment [a,b] stays in closed P: no proper edge crossing and sampled
// interior points not clearly outside.
inline bool segment_inside(const Polygon& P, Point2 a, Point2 b) {
    for (int i = 0; i < P.size(); ++i) {
        auto [p, q] = P.edge(i);
        if (cross_fast(a, b, p, q)) return false;
    }
    for (int k = 1; k < 8; ++k) {
        Point2 m = lerp(a, b, k / 8.0);
        if (!inside_fast(P, m) && distance_to_boundary(P, m) > 1e-12) return false;
    }
    return true;
}

// c sees the entire boundary (vertices plus edge samples). Targets are
// pulled back a hair from the boundary so an exact crossing test does not
// trip on the target's own edge (lerp'd samples are not exactly collinear).
inline bool sees_whole_boundary(const Polygon& P, Point2 c) {
    // Reflex vertices are the usual blockers; testing them first makes the
    // all-points-fail case (empty kernel) cheap. Pure reordering of the
    // conjunction below.
    int n = P.size();
    for (int i = 0; i < n; ++i) {
        Point2 prev = P.vertex((i + n - 1) % n), v = P.vertex(i), next = P.vertex((i + 1) % n);
        if (orientation_sign(prev, v, next) < 0 &&
            !segment_inside(P, c, lerp(c, v, 1 - 1e-7)))
            return false;
    }
    for (int i = 0; i < P.size(); ++i) {
        auto [a, b] = P.edge(i);
        for (int s = 0; s <= 4; ++s) {
            Point2 t = lerp(a, b, s / 4.0);
            if (!segment_inside(P, c, lerp(c, t, 1 - 1e-7))) return false;
        }
    }
    return true;
}

// Brute-force grid visibility oracle: some grid point over the bounding box
// is a star center. Resolution-bounded by the grid.
inline std::optional<Point2> grid_visibility_star_center(const Polygon& P, int grid = 200) {
    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (auto& v : P.vertices()) {
        xmin = std::min(xmin, v.x), xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y), ymax = std::max(ymax, v.y);
    }
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            Point2 c{xmin + (xmax - xmin) * i / grid, ymin + (ymax - ymin) * j / grid};
            if (!inside_fast(P, c)) continue;
            if (sees_whole_boundary(P, c)) return c;
        }
    }
    return std::nullopt;
}

// Chebyshev margin of the kernel, used to skip polygons whose kernel is too
// thin for the oracle's grid.
inline double kernel_margin(const Polygon& P) {
    auto fp = feasible_point(star_kernel_constraints(P));
    return fp ? fp->second : -1.0;
}

inline double grid_cell_diag(const Polygon& P, int grid = 200) {
    double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    for (auto& v : P.vertices()) {
        xmin = std::min(xmin, v.x), xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y), ymax = std::max(ymax, v.y);
    }
    return std::hypot((xmax - xmin) / grid, (ymax - ymin) / grid);
}

}  // namespace unfold::test
