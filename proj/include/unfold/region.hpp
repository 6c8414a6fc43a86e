// Half-planes, convex region intersection, and 2D feasibility with
// maximized margin (Chebyshev-style center).
//
// Clipping runs in exact rational arithmetic against a large reference box;
// a region is reported Unbounded when it reaches that box.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "unfold/geometry.hpp"

namespace unfold {

// {c : c . normal >= offset}
struct HalfPlane {
    Vec2 normal;
    double offset = 0;

    static HalfPlane through_point(Point2 a, Vec2 n) { return {n, n.x * a.x + n.y * a.y}; }

    double slack(Point2 c) const {
        double nn = normal.norm();
        return (c.x * normal.x + c.y * normal.y - offset) / nn;
    }
    bool operator==(const HalfPlane& o) const {
        return normal.x == o.normal.x && normal.y == o.normal.y && offset == o.offset;
    }
};

enum class RegionStatus { Empty, Bounded, Unbounded };

// Convex intersection result. For Unbounded regions the vertex list is the
// intersection with the reference box [-kRegionBox, kRegionBox]^2.
struct ConvexRegion {
    RegionStatus status = RegionStatus::Empty;
    std::vector<Point2> vertices;  // CCW; may be degenerate (zero area)

    bool empty() const { return status == RegionStatus::Empty; }

    bool is_degenerate() const {
        if (vertices.size() < 3) return true;
        for (size_t i = 2; i < vertices.size(); ++i) {
            if (orientation(vertices[0], vertices[1], vertices[i]) != Orientation::COLLINEAR)
                return false;
        }
        return true;
    }

    bool contains(Point2 p, double tol = kGeomEps) const;
};

constexpr double kRegionBox = 1 << 24;

namespace detail {

inline Rational rat_side(const RatPoint& p, const Rational& nx, const Rational& ny,
                         const Rational& off) {
    return p.x * nx + p.y * ny - off;
}

// Sutherland-Hodgman clip of a convex rational polygon against one half-plane.
inline std::vector<RatPoint> clip_convex(const std::vector<RatPoint>& poly, const Rational& nx,
                                         const Rational& ny, const Rational& off) {
    std::vector<RatPoint> out;
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const RatPoint& a = poly[i];
        const RatPoint& b = poly[(i + 1) % n];
        Rational sa = rat_side(a, nx, ny, off);
        Rational sb = rat_side(b, nx, ny, off);
        if (sa >= 0) out.push_back(a);
        if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
            Rational t = sa / (sa - sb);
            out.emplace_back(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        }
    }
    // Collapse duplicates.
    std::vector<RatPoint> ded;
    for (auto& p : out) {
        if (ded.empty() || !(ded.back() == p)) ded.push_back(p);
    }
    while (ded.size() > 1 && ded.front() == ded.back()) ded.pop_back();
    return ded;
}

inline std::vector<HalfPlane> dedup_halfplanes(const std::vector<HalfPlane>& hs) {
    std::vector<HalfPlane> out;
    for (auto& h : hs) {
        bool dup = false;
        for (auto& g : out) dup = dup || g == h;
        if (!dup) out.push_back(h);
    }
    return out;
}

}  // namespace detail

// Exact intersection of half-planes. An empty input yields the whole plane
// (reported Unbounded, vertex list = reference box).
inline ConvexRegion intersect_halfplanes(const std::vector<HalfPlane>& hsIn) {
    auto hs = detail::dedup_halfplanes(hsIn);
    const Rational B(kRegionBox);
    std::vector<RatPoint> poly{RatPoint(-B, -B), RatPoint(B, -B), RatPoint(B, B),
                               RatPoint(-B, B)};
    for (auto& h : hs) {
        if (h.normal.x == 0 && h.normal.y == 0)
            throw std::invalid_argument("half-plane with zero normal");
        poly = detail::clip_convex(poly, Rational(h.normal.x), Rational(h.normal.y),
                                   Rational(h.offset));
        if (poly.empty()) break;
    }

    ConvexRegion region;
    if (poly.empty()) {
        region.status = RegionStatus::Empty;
        return region;
    }
    // Strip exactly-collinear middle vertices.
    for (bool changed = true; changed && poly.size() > 2;) {
        changed = false;
        int n = static_cast<int>(poly.size());
        for (int i = 0; i < n; ++i) {
            const RatPoint& a = poly[(i + n - 1) % n];
            const RatPoint& b = poly[i];
            const RatPoint& c = poly[(i + 1) % n];
            if (orientation_sign(a, b, c) == 0) {
                poly.erase(poly.begin() + i);
                changed = true;
                break;
            }
        }
    }
    bool touchesBox = false;
    for (auto& p : poly) {
        if (p.x == B || p.x == -B || p.y == B || p.y == -B) touchesBox = true;
        region.vertices.push_back(p.to_double());
    }
    region.status = touchesBox ? RegionStatus::Unbounded : RegionStatus::Bounded;
    return region;
}

inline bool ConvexRegion::contains(Point2 p, double tol) const {
    if (status == RegionStatus::Empty) return false;
    if (vertices.size() == 1) return dist(vertices[0], p) <= tol;
    if (vertices.size() == 2) {
        Vec2 ab = vertices[1] - vertices[0];
        double len2 = ab.dot(ab);
        double t = len2 > 0 ? std::clamp((p - vertices[0]).dot(ab) / len2, 0.0, 1.0) : 0.0;
        return dist(p, vertices[0] + ab * t) <= tol;
    }
    int n = static_cast<int>(vertices.size());
    for (int i = 0; i < n; ++i) {
        Point2 a = vertices[i], b = vertices[(i + 1) % n];
        Vec2 inward = (b - a).perp();
        double s = inward.normalized().dot(p - a);
        if (s < -tol) return false;
    }
    return true;
}

// Feasible point with maximized minimum slack over the (unit-normalized)
// constraints. Margin is +infinity when arbitrarily deep points exist.
inline std::optional<std::pair<Point2, double>> feasible_point(
    const std::vector<HalfPlane>& hsIn) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto hs = detail::dedup_halfplanes(hsIn);
    if (hs.empty()) return std::make_pair(Point2{0, 0}, kInf);

    ConvexRegion region = intersect_halfplanes(hs);
    if (region.empty()) return std::nullopt;

    // Unit-normalized constraints.
    struct Unit {
        Vec2 n;
        double d;
    };
    std::vector<Unit> cs;
    for (auto& h : hs) {
        double nn = h.normal.norm();
        cs.push_back({h.normal * (1.0 / nn), h.offset / nn});
    }
    auto min_slack = [&](Point2 p) {
        double m = kInf;
        for (auto& c : cs) m = std::min(m, c.n.dot(p - Point2{0, 0}) - c.d);
        return m;
    };
    Point2 centroid{0, 0};
    for (auto& v : region.vertices) centroid.x += v.x, centroid.y += v.y;
    centroid.x /= region.vertices.size();
    centroid.y /= region.vertices.size();

    // Margin is unbounded iff all unit normals fit in an open half-plane,
    // detected through the largest angular gap.
    {
        std::vector<double> angles;
        for (auto& c : cs) angles.push_back(std::atan2(c.n.y, c.n.x));
        std::sort(angles.begin(), angles.end());
        double maxGap = angles.front() + 2 * M_PI - angles.back();
        for (size_t i = 0; i + 1 < angles.size(); ++i)
            maxGap = std::max(maxGap, angles[i + 1] - angles[i]);
        if (maxGap > M_PI + 1e-12) {
            // The centroid of the box-clipped region is feasible.
            return std::make_pair(centroid, kInf);
        }
    }

    if (region.is_degenerate()) {
        // Zero-width intersection: every point of it has margin 0; return the
        // midpoint of the vertex set.
        Point2 lo = region.vertices.front(), hi = region.vertices.front();
        for (auto& v : region.vertices) {
            if (v.x < lo.x || (v.x == lo.x && v.y < lo.y)) lo = v;
            if (v.x > hi.x || (v.x == hi.x && v.y > hi.y)) hi = v;
        }
        Point2 mid{(lo.x + hi.x) / 2, (lo.y + hi.y) / 2};
        return std::make_pair(mid, std::max(0.0, min_slack(mid)));
    }

    double scale = 0;
    for (auto& c : cs) scale = std::max(scale, std::fabs(c.d));
    for (auto& v : region.vertices) scale = std::max({scale, std::fabs(v.x), std::fabs(v.y)});
    double tol = 1e-9 * std::max(1.0, scale);

    Point2 best = centroid;
    double bestMargin = min_slack(centroid);
    auto consider = [&](Point2 p) {
        double m = min_slack(p);
        if (m > bestMargin) {
            bestMargin = m;
            best = p;
        }
    };

    int m = static_cast<int>(cs.size());
    // Triples of active constraints: solve n_i.c - r = d_i.
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                double a[3][3] = {{cs[i].n.x, cs[i].n.y, -1},
                                  {cs[j].n.x, cs[j].n.y, -1},
                                  {cs[k].n.x, cs[k].n.y, -1}};
                double b[3] = {cs[i].d, cs[j].d, cs[k].d};
                double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
                if (std::fabs(det) < 1e-14) continue;
                auto solve = [&](int col) {
                    double t[3][3];
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) t[r][c] = (c == col) ? b[r] : a[r][c];
                    return (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
                            t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                            t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
                           det;
                };
                consider({solve(0), solve(1)});
            }
    // Opposite pairs (slab optimum has no three active constraints).
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            if (cs[i].n.dot(cs[j].n) > -1.0 + 1e-12) continue;
            Vec2 n = cs[i].n;
            double mid = (cs[i].d - cs[j].d) / 2;  // n.c = mid on the midline
            Point2 p = centroid + n * (mid - n.dot(centroid - Point2{0, 0}));
            consider(p);
        }

    if (bestMargin < -tol) return std::nullopt;  // numerical safety; region nonempty
    return std::make_pair(best, std::max(0.0, bestMargin));
}

// Fast double-precision variant for inner-loop use (the theta sweep).
// Same contract as feasible_point but clipping and candidate search run in
// plain doubles; callers arbitrate near-zero margins with the simulation
// oracle.
inline std::optional<std::pair<Point2, double>> approx_max_margin(
    const std::vector<HalfPlane>& hsIn) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto hs = detail::dedup_halfplanes(hsIn);
    if (hs.empty()) return std::make_pair(Point2{0, 0}, kInf);

    struct Unit {
        Vec2 n;
        double d;
    };
    std::vector<Unit> cs;
    for (auto& h : hs) {
        double nn = h.normal.norm();
        cs.push_back({h.normal * (1.0 / nn), h.offset / nn});
    }
    auto min_slack = [&](Point2 p) {
        double m = kInf;
        for (auto& c : cs) m = std::min(m, c.n.dot(p - Point2{0, 0}) - c.d);
        return m;
    };

    // Double Sutherland-Hodgman against the reference box, tracking which
    // constraint supports each output edge (-1 = box).
    struct V {
        Point2 p;
        int edgeFrom;  // constraint cutting the edge leaving this vertex
    };
    std::vector<V> poly = {{{-kRegionBox, -kRegionBox}, -1},
                           {{kRegionBox, -kRegionBox}, -1},
                           {{kRegionBox, kRegionBox}, -1},
                           {{-kRegionBox, kRegionBox}, -1}};
    for (int ci = 0; ci < static_cast<int>(cs.size()); ++ci) {
        auto& c = cs[ci];
        std::vector<V> out;
        int n = static_cast<int>(poly.size());
        for (int i = 0; i < n; ++i) {
            const V& a = poly[i];
            const V& b = poly[(i + 1) % n];
            double sa = c.n.dot(a.p - Point2{0, 0}) - c.d;
            double sb = c.n.dot(b.p - Point2{0, 0}) - c.d;
            if (sa >= 0) out.push_back(a);
            if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
                double t = sa / (sa - sb);
                // Leaving the half-plane: the cut edge is supported by ci;
                // entering: the edge continues the one from a.
                out.push_back({lerp(a.p, b.p, t), sa > 0 ? ci : a.edgeFrom});
            }
        }
        poly = std::move(out);
        if (poly.empty()) return std::nullopt;
    }

    Point2 centroid{0, 0};
    for (auto& v : poly) centroid.x += v.p.x, centroid.y += v.p.y;
    centroid.x /= poly.size();
    centroid.y /= poly.size();

    {
        std::vector<double> angles;
        for (auto& c : cs) angles.push_back(std::atan2(c.n.y, c.n.x));
        std::sort(angles.begin(), angles.end());
        double maxGap = angles.front() + 2 * M_PI - angles.back();
        for (size_t i = 0; i + 1 < angles.size(); ++i)
            maxGap = std::max(maxGap, angles[i + 1] - angles[i]);
        if (maxGap > M_PI + 1e-12) return std::make_pair(centroid, kInf);
    }

    // Active constraints: those supporting region edges (box edges excluded).
    std::vector<int> active;
    for (auto& v : poly) {
        if (v.edgeFrom >= 0 &&
            std::find(active.begin(), active.end(), v.edgeFrom) == active.end())
            active.push_back(v.edgeFrom);
    }
    Point2 best = centroid;
    double bestMargin = min_slack(centroid);
    auto consider = [&](Point2 p) {
        double m = min_slack(p);
        if (m > bestMargin) bestMargin = m, best = p;
    };
    int k = static_cast<int>(active.size());
    for (int ii = 0; ii < k; ++ii)
        for (int jj = ii + 1; jj < k; ++jj)
            for (int kk = jj + 1; kk < k; ++kk) {
                const Unit& A = cs[active[ii]];
                const Unit& B = cs[active[jj]];
                const Unit& C = cs[active[kk]];
                double a[3][3] = {{A.n.x, A.n.y, -1}, {B.n.x, B.n.y, -1}, {C.n.x, C.n.y, -1}};
                double b[3] = {A.d, B.d, C.d};
                double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
                if (std::fabs(det) < 1e-14) continue;
                auto solve = [&](int col) {
                    double t[3][3];
                    for (int r = 0; r < 3; ++r)
                        for (int c2 = 0; c2 < 3; ++c2) t[r][c2] = (c2 == col) ? b[r] : a[r][c2];
                    return (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
                            t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
                            t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
                           det;
                };
                consider({solve(0), solve(1)});
            }
    for (int ii = 0; ii < k; ++ii)
        for (int jj = ii + 1; jj < k; ++jj) {
            const Unit& A = cs[active[ii]];
            const Unit& B = cs[active[jj]];
            if (A.n.dot(B.n) > -1.0 + 1e-9) continue;
            double mid = (A.d - B.d) / 2;
            consider(centroid + A.n * (mid - A.n.dot(centroid - Point2{0, 0})));
        }
    return std::make_pair(best, bestMargin);
}

}  // namespace unfold
