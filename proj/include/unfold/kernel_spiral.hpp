// Star-shaped and spiral-shaped recognition: polygon kernel, fixed-angle
// spiral feasible region, angle sweep, and shrinking-motion verification.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unfold/geometry.hpp"
#include "unfold/region.hpp"

namespace unfold {

struct ThetaOutOfRangeError : std::invalid_argument {
    ThetaOutOfRangeError() : std::invalid_argument("spiral angle must satisfy |theta| < pi/2") {}
};

struct NegativeTimeError : std::invalid_argument {
    NegativeTimeError() : std::invalid_argument("spiral_map requires t >= 0") {}
};

// Inward-spiraling shrinking motion about `center`: a boundary point's
// velocity makes angle `theta` with the inward radial direction, and theta=0
// is linear shrinking. `rate` is the per-unit-time shrink intensity.
struct SpiralParams {
    Point2 center;
    double theta = 0;
    double rate = 1;
};

struct ShrinkSample {
    double t;
    bool contained;
    double worstViolation;
};

struct ShrinkReport {
    std::vector<ShrinkSample> samples;
    bool verdict = false;
};

// Planar similarity z -> center + scale * R_angle (z - center).
struct Similarity {
    Point2 center;
    double scale = 1;
    double angle = 0;

    Point2 operator()(Point2 z) const { return center + (z - center).rotated(angle) * scale; }

    std::vector<Point2> map(const std::vector<Point2>& pts) const {
        std::vector<Point2> out;
        out.reserve(pts.size());
        for (auto& p : pts) out.push_back((*this)(p));
        return out;
    }
};

inline std::vector<HalfPlane> star_kernel_constraints(const Polygon& P) {
    std::vector<HalfPlane> hs;
    for (int i = 0; i < P.size(); ++i) {
        auto [a, b] = P.edge(i);
        hs.push_back(HalfPlane::through_point(a, (b - a).perp()));
    }
    return hs;
}

// Kernel = centers whose linear scalings keep every scaled copy inside P.
inline ConvexRegion star_kernel(const Polygon& P) {
    return intersect_halfplanes(star_kernel_constraints(P));
}

// Constraints on the spiral center for a fixed angle. For each CCW edge
// (a, b) with inward normal n, the inward-velocity condition R_theta(c-z).n
// >= 0 is linear in z along the edge, so the two endpoint constraints
// (c-a).m >= 0 and (c-b).m >= 0 with m = R_{-theta} n suffice. At theta = 0
// both coincide with the edge half-plane.
inline std::vector<HalfPlane> spiral_constraints(const Polygon& P, double theta) {
    if (!(std::fabs(theta) < M_PI / 2)) throw ThetaOutOfRangeError();
    if (theta == 0) return star_kernel_constraints(P);
    std::vector<HalfPlane> hs;
    for (int i = 0; i < P.size(); ++i) {
        auto [a, b] = P.edge(i);
        Vec2 m = (b - a).perp().rotated(-theta);
        hs.push_back(HalfPlane::through_point(a, m));
        hs.push_back(HalfPlane::through_point(b, m));
    }
    return hs;
}

inline ConvexRegion spiral_feasible_region(const Polygon& P, double theta) {
    return intersect_halfplanes(spiral_constraints(P, theta));
}

// The motion family at time t: scale e^{sigma t}, rotation omega t, with
// sigma = -rate cos(theta), omega = -rate sin(theta).
inline Similarity spiral_map(const SpiralParams& sp, double t) {
    if (t < 0) throw NegativeTimeError();
    double sigma = -sp.rate * std::cos(sp.theta);
    double omega = -sp.rate * std::sin(sp.theta);
    return Similarity{sp.center, std::exp(sigma * t), omega * t};
}

// Independent simulation oracle: sample the motion on a schedule whose scale
// factors are geometrically spaced down to e^{sigma*horizon}, and test exact
// containment of every scaled copy.
inline ShrinkReport verify_shrinking_motion(const Polygon& P, const SpiralParams& sp, int steps,
                                            double horizon) {
    if (steps < 2) throw std::invalid_argument("verify_shrinking_motion requires steps >= 2");
    ShrinkReport report;
    report.verdict = true;
    // Roundoff allowance: applying the similarity perturbs coordinates by a
    // few ulps, which an exact containment test would report as escapes.
    double tol = kGeomEps * (1 + P.diameter());
    for (int k = 0; k < steps; ++k) {
        double t = horizon * k / (steps - 1);
        Similarity s = spiral_map(sp, t);
        auto mapped = s.map(P.vertices());
        double worst = 0;
        int n = static_cast<int>(mapped.size());
        for (int i = 0; i < n; ++i) {
            worst = std::max(worst, distance_outside(P, mapped[i]));
            for (int q = 1; q <= 3; ++q)
                worst = std::max(
                    worst, distance_outside(P, lerp(mapped[i], mapped[(i + 1) % n], q / 4.0)));
        }
        bool contained;
        if (worst > tol) {
            contained = false;
        } else if (worst > 0) {
            contained = true;  // within roundoff of the boundary
        } else {
            try {
                Polygon Q = validate_polygon(mapped);
                contained = polygon_contains_polygon(P, Q);
            } catch (const DegenerateError&) {
                // Copy shrunk below representable size; treat as the limit
                // point.
                contained = point_in_polygon(P, sp.center) != PointLocation::OUTSIDE;
            }
        }
        report.samples.push_back({t, contained, worst});
        report.verdict = report.verdict && contained;
    }
    return report;
}

struct SpiralSearchResult {
    SpiralParams params;
    double margin = 0;
    bool marginal = false;
};

struct MarginSample {
    double theta;
    double margin;
    bool feasible;
};

namespace detail {

struct ThetaEval {
    double margin = -std::numeric_limits<double>::infinity();
    Point2 center{0, 0};
    bool feasible = false;
};

// Margin of the deepest admissible center at a fixed angle; the center is
// additionally required to lie in closed P (the feasible region is not known
// to be a subset of P for theta != 0).
inline ThetaEval eval_theta(const Polygon& P, double theta) {
    ThetaEval ev;
    auto hs = spiral_constraints(P, theta);
    auto fp = approx_max_margin(hs);
    if (!fp) return ev;
    if (point_in_polygon(P, fp->first) != PointLocation::OUTSIDE) {
        ev.margin = fp->second;
        ev.center = fp->first;
        ev.feasible = true;
        return ev;
    }
    // Best constraint-point lies outside P; scan toward the polygon for
    // admissible centers (resolution-bounded fallback).
    auto min_slack = [&](Point2 c) {
        double m = std::numeric_limits<double>::infinity();
        for (auto& h : hs) m = std::min(m, h.slack(c));
        return m;
    };
    const int grid = 32;
    for (auto& v : P.vertices()) {
        for (int i = 0; i <= grid; ++i) {
            Point2 c = lerp(fp->first, v, double(i) / grid);
            if (!contains_point_fast(P, c, kGeomEps)) continue;
            double m = min_slack(c);
            if (m > ev.margin) {
                ev.margin = m;
                ev.center = c;
                ev.feasible = m >= 0;
            }
        }
    }
    return ev;
}

}  // namespace detail

// Resolution-bounded search over theta in (-pi/2, pi/2): uniform sampling
// followed by ternary refinement around the best sample. Absence of a result
// means no feasible angle was found at this resolution, not a certificate of
// non-spirality. Deterministic for fixed (angleSamples, refineIters).
inline std::optional<SpiralSearchResult> find_spiral_params(
    const Polygon& P, int angleSamples = 720, int refineIters = 60,
    std::vector<MarginSample>* curve = nullptr) {
    if (angleSamples < 8) throw std::invalid_argument("find_spiral_params needs angleSamples >= 8");
    const double lim = M_PI / 2 - 1e-3;
    double bestTheta = 0;
    detail::ThetaEval best;
    for (int i = 0; i < angleSamples; ++i) {
        double theta = -lim + 2 * lim * i / (angleSamples - 1);
        auto ev = detail::eval_theta(P, theta);
        if (curve) curve->push_back({theta, ev.margin, ev.feasible});
        if (ev.margin > best.margin) {
            best = ev;
            bestTheta = theta;
        }
    }
    double halfSpan = 2 * lim / (angleSamples - 1);
    double lo = std::max(-lim, bestTheta - halfSpan);
    double hi = std::min(lim, bestTheta + halfSpan);
    for (int it = 0; it < refineIters; ++it) {
        double t1 = lo + (hi - lo) / 3, t2 = hi - (hi - lo) / 3;
        auto e1 = detail::eval_theta(P, t1);
        auto e2 = detail::eval_theta(P, t2);
        if (e1.margin >= e2.margin) {
            hi = t2;
            if (e1.margin > best.margin) best = e1, bestTheta = t1;
        } else {
            lo = t1;
            if (e2.margin > best.margin) best = e2, bestTheta = t2;
        }
    }
    if (!best.feasible || best.margin < 0) return std::nullopt;
    SpiralSearchResult res;
    res.params = SpiralParams{best.center, bestTheta, 1.0};
    res.margin = best.margin;
    res.marginal = best.margin < kGeomEps;
    return res;
}

}  // namespace unfold
