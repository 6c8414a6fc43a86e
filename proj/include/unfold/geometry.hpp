// Planar primitives: points, exact orientation predicates, simple polygons,
// point location and polygon-in-polygon containment.
//
// Predicates are evaluated with a floating-point filter and fall back to
// exact rational arithmetic, so all combinatorial decisions are exact for
// double inputs. Derived coordinates (intersections, distances) are doubles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace unfold {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kGeomEps = 1e-9;

struct Vec2 {
    double x = 0, y = 0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        double n = norm();
        return {x / n, y / n};
    }
    // 90 degree counterclockwise turn.
    Vec2 perp() const { return {-y, x}; }
    Vec2 rotated(double theta) const {
        double c = std::cos(theta), s = std::sin(theta);
        return {c * x - s * y, s * x + c * y};
    }
};

struct Point2 {
    double x = 0, y = 0;

    Point2 operator+(Vec2 v) const { return {x + v.x, y + v.y}; }
    Point2 operator-(Vec2 v) const { return {x - v.x, y - v.y}; }
    Vec2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    bool operator==(Point2 o) const { return x == o.x && y == o.y; }
    bool operator!=(Point2 o) const { return !(*this == o); }
};

inline double dist(Point2 a, Point2 b) { return (a - b).norm(); }

inline Point2 lerp(Point2 a, Point2 b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

struct RatPoint {
    Rational x, y;
    RatPoint() = default;
    RatPoint(Rational px, Rational py) : x(std::move(px)), y(std::move(py)) {}
    explicit RatPoint(Point2 p) : x(p.x), y(p.y) {}
    Point2 to_double() const { return {x.convert_to<double>(), y.convert_to<double>()}; }
    bool operator==(const RatPoint& o) const { return x == o.x && y == o.y; }
};

enum class Orientation { CW = -1, COLLINEAR = 0, CCW = 1 };

// Sign of twice the signed area of triangle pqr; exact for double inputs.
inline Orientation orientation(Point2 p, Point2 q, Point2 r) {
    double l = (q.x - p.x) * (r.y - p.y);
    double rr = (q.y - p.y) * (r.x - p.x);
    double det = l - rr;
    double mag = std::fabs(l) + std::fabs(rr);
    // Filter bound: a few ulps of the magnitude covers the rounding of the
    // four subtractions, two products and one final subtraction.
    if (std::fabs(det) > 8.0 * std::numeric_limits<double>::epsilon() * mag) {
        return det > 0 ? Orientation::CCW : Orientation::CW;
    }
    Rational ex = (Rational(q.x) - p.x) * (Rational(r.y) - p.y) -
                  (Rational(q.y) - p.y) * (Rational(r.x) - p.x);
    int s = ex.sign();
    return s > 0 ? Orientation::CCW : (s < 0 ? Orientation::CW : Orientation::COLLINEAR);
}

inline int orientation_sign(Point2 p, Point2 q, Point2 r) {
    return static_cast<int>(orientation(p, q, r));
}

inline int orientation_sign(const RatPoint& p, const RatPoint& q, const RatPoint& r) {
    Rational ex = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return ex.sign();
}

// p on closed segment [a,b], exact.
inline bool on_segment(Point2 a, Point2 b, Point2 p) {
    if (orientation(a, b, p) != Orientation::COLLINEAR) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool on_segment(const RatPoint& a, const RatPoint& b, const RatPoint& p) {
    if (orientation_sign(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed segments [a,b] and [c,d] share at least one point, exact.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    int o1 = orientation_sign(a, b, c);
    int o2 = orientation_sign(a, b, d);
    int o3 = orientation_sign(c, d, a);
    int o4 = orientation_sign(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

// Open-interior crossing: the segments cross at a single point interior to both.
inline bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
    int o1 = orientation_sign(a, b, c);
    int o2 = orientation_sign(a, b, d);
    int o3 = orientation_sign(c, d, a);
    int o4 = orientation_sign(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

// Intersection parameter pairs (t on [a,b], u on [c,d]) for non-parallel
// segments; exact rational result.
inline std::optional<std::pair<Rational, Rational>> segment_intersection_params(
    const RatPoint& a, const RatPoint& b, const RatPoint& c, const RatPoint& d) {
    Rational rx = b.x - a.x, ry = b.y - a.y;
    Rational sx = d.x - c.x, sy = d.y - c.y;
    Rational denom = rx * sy - ry * sx;
    if (denom == 0) return std::nullopt;
    Rational qpx = c.x - a.x, qpy = c.y - a.y;
    Rational t = (qpx * sy - qpy * sx) / denom;
    Rational u = (qpx * ry - qpy * rx) / denom;
    if (t < 0 || t > 1 || u < 0 || u > 1) return std::nullopt;
    return std::make_pair(t, u);
}

struct NotSimpleError : std::runtime_error {
    int edgeA, edgeB;
    NotSimpleError(int a, int b)
        : std::runtime_error("polygon is not simple: edges " + std::to_string(a) + " and " +
                             std::to_string(b) + " intersect"),
          edgeA(a), edgeB(b) {}
};

struct DegenerateError : std::runtime_error {
    DegenerateError() : std::runtime_error("polygon is degenerate (zero area)") {}
};

enum class PointLocation { INSIDE, BOUNDARY, OUTSIDE };

class Polygon;

Polygon validate_polygon(std::vector<Point2> verts);

// Simple polygon, counterclockwise, no three consecutive collinear vertices.
// Construct through validate_polygon.
class Polygon {
  public:
    const std::vector<Point2>& vertices() const { return verts_; }
    int size() const { return static_cast<int>(verts_.size()); }
    Point2 vertex(int i) const { return verts_[mod(i)]; }
    // Edge i runs from vertex i to vertex i+1.
    std::pair<Point2, Point2> edge(int i) const { return {verts_[mod(i)], verts_[mod(i + 1)]}; }

    double signed_area() const {
        double a = 0;
        for (int i = 0; i < size(); ++i) {
            auto [p, q] = edge(i);
            a += p.x * q.y - p.y * q.x;
        }
        return 0.5 * a;
    }

    double diameter() const {
        double d = 0;
        for (auto& p : verts_)
            for (auto& q : verts_) d = std::max(d, dist(p, q));
        return d;
    }

    double perimeter() const {
        double s = 0;
        for (int i = 0; i < size(); ++i) {
            auto [p, q] = edge(i);
            s += dist(p, q);
        }
        return s;
    }

    Point2 centroid_of_vertices() const {
        double sx = 0, sy = 0;
        for (auto& p : verts_) sx += p.x, sy += p.y;
        return {sx / size(), sy / size()};
    }

  private:
    friend Polygon validate_polygon(std::vector<Point2>);
    int mod(int i) const {
        int n = size();
        return ((i % n) + n) % n;
    }
    std::vector<Point2> verts_;
};

// Normalizes to CCW, merges collinear runs, rejects non-simple or degenerate
// input. Witnessed failures throw NotSimpleError / DegenerateError.
inline Polygon validate_polygon(std::vector<Point2> verts) {
    if (verts.size() < 3) throw DegenerateError();
    for (auto& p : verts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("non-finite polygon coordinate");
    }
    // Drop exact duplicates of consecutive vertices.
    std::vector<Point2> v;
    for (auto& p : verts) {
        if (v.empty() || !(v.back() == p)) v.push_back(p);
    }
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    if (v.size() < 3) throw DegenerateError();

    // Simplicity first, so a crossing input (e.g. a bowtie) is reported as
    // NotSimple rather than as a zero-area degeneracy.
    int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        Point2 a = v[i], b = v[(i + 1) % n];
        for (int j = i + 1; j < n; ++j) {
            Point2 c = v[j], d = v[(j + 1) % n];
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent && segments_intersect(a, b, c, d)) throw NotSimpleError(i, j);
        }
    }

    // Exact orientation from the rational signed area.
    Rational area2 = 0;
    for (int i = 0; i < n; ++i) {
        Point2 p = v[i], q = v[(i + 1) % n];
        area2 += Rational(p.x) * q.y - Rational(p.y) * q.x;
    }
    if (area2 == 0) throw DegenerateError();
    if (area2 < 0) std::reverse(v.begin(), v.end());

    // Merge consecutive collinear vertices (exact test).
    for (bool changed = true; changed && v.size() > 3;) {
        changed = false;
        n = static_cast<int>(v.size());
        for (int i = 0; i < n; ++i) {
            Point2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
            if (orientation(a, b, c) == Orientation::COLLINEAR) {
                v.erase(v.begin() + i);
                changed = true;
                break;
            }
        }
    }
    if (v.size() < 3) throw DegenerateError();

    // Simplicity: non-adjacent edges must be disjoint; adjacent edges may
    // meet only at the shared endpoint.
    n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        Point2 a = v[i], b = v[(i + 1) % n];
        for (int j = i + 1; j < n; ++j) {
            Point2 c = v[j], d = v[(j + 1) % n];
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Shared endpoint only; an overlap shows up as the far
                // endpoint of one edge lying on the other.
                Point2 shared = (j == i + 1) ? b : a;
                Point2 farC = (j == i + 1) ? d : c;
                Point2 farB = (j == i + 1) ? a : b;
                if (on_segment(a, b, farC) && !(farC == shared)) throw NotSimpleError(i, j);
                if (on_segment(c, d, farB) && !(farB == shared)) throw NotSimpleError(i, j);
            } else if (segments_intersect(a, b, c, d)) {
                throw NotSimpleError(i, j);
            }
        }
    }

    Polygon poly;
    poly.verts_ = std::move(v);
    return poly;
}

// Exact crossing-number point location for a rational query point.
inline PointLocation point_in_polygon(const Polygon& P, const RatPoint& q) {
    int n = P.size();
    for (int i = 0; i < n; ++i) {
        auto [a, b] = P.edge(i);
        if (on_segment(RatPoint(a), RatPoint(b), q)) return PointLocation::BOUNDARY;
    }
    // Horizontal ray to +x, counting crossings with the half-open rule.
    int crossings = 0;
    for (int i = 0; i < n; ++i) {
        auto [a, b] = P.edge(i);
        Rational ay(a.y), by(b.y);
        bool aAbove = ay > q.y, bAbove = by > q.y;
        if (aAbove == bAbove) continue;
        // x coordinate of the edge at height q.y
        Rational t = (q.y - ay) / (by - ay);
        Rational xi = Rational(a.x) + t * (Rational(b.x) - a.x);
        if (xi > q.x) ++crossings;
    }
    return (crossings % 2) ? PointLocation::INSIDE : PointLocation::OUTSIDE;
}

inline PointLocation point_in_polygon(const Polygon& P, Point2 q) {
    return point_in_polygon(P, RatPoint(q));
}

// Double-precision crossing-number membership, closed with tolerance `tol`
// around the boundary. Inner-loop helper; the exact overloads above are the
// reference.
inline bool contains_point_fast(const Polygon& P, Point2 q, double tol);

// Distance from p to the polygon boundary.
inline double distance_to_boundary(const Polygon& P, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < P.size(); ++i) {
        auto [a, b] = P.edge(i);
        Vec2 ab = b - a;
        double len2 = ab.dot(ab);
        double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, dist(p, a + ab * t));
    }
    return best;
}

inline bool contains_point_fast(const Polygon& P, Point2 q, double tol) {
    bool in = false;
    int n = P.size();
    for (int i = 0; i < n; ++i) {
        auto [a, b] = P.edge(i);
        if ((a.y > q.y) != (b.y > q.y)) {
            double xi = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > q.x) in = !in;
        }
    }
    return in || distance_to_boundary(P, q) <= tol;
}

// Point location with a distance filter: away from the boundary the double
// crossing parity is exact (the only rounding is in the ray-crossing
// abscissa, which lies on the boundary and hence at least `d` from q), so
// the rational fallback runs only near the boundary.
inline PointLocation locate_point(const Polygon& P, Point2 q) {
    double d = distance_to_boundary(P, q);
    if (d > kGeomEps * (1 + std::fabs(q.x) + std::fabs(q.y))) {
        bool in = false;
        for (int i = 0; i < P.size(); ++i) {
            auto [a, b] = P.edge(i);
            if ((a.y > q.y) != (b.y > q.y)) {
                double xi = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (xi > q.x) in = !in;
            }
        }
        return in ? PointLocation::INSIDE : PointLocation::OUTSIDE;
    }
    return point_in_polygon(P, q);
}

// Signed distance outside P: 0 inside or on the boundary, else distance to it.
inline double distance_outside(const Polygon& P, Point2 p) {
    if (locate_point(P, p) != PointLocation::OUTSIDE) return 0.0;
    return distance_to_boundary(P, p);
}

// True iff every point of B lies in closed A. Exact: vertex membership plus
// midpoint tests of every boundary-arrangement subsegment of B's edges.
inline bool polygon_contains_polygon(const Polygon& A, const Polygon& B) {
    for (auto& p : B.vertices()) {
        if (locate_point(A, p) == PointLocation::OUTSIDE) return false;
    }
    for (int i = 0; i < B.size(); ++i) {
        auto [p, q] = B.edge(i);
        RatPoint rp(p), rq(q);
        std::vector<Rational> params{Rational(0), Rational(1)};
        double xlo = std::min(p.x, q.x), xhi = std::max(p.x, q.x);
        double ylo = std::min(p.y, q.y), yhi = std::max(p.y, q.y);
        for (int j = 0; j < A.size(); ++j) {
            auto [a, b] = A.edge(j);
            // Bounding-box rejection is exact in doubles and skips the
            // rational solve for the vast majority of edge pairs.
            if (std::max(a.x, b.x) < xlo || std::min(a.x, b.x) > xhi ||
                std::max(a.y, b.y) < ylo || std::min(a.y, b.y) > yhi)
                continue;
            auto hit = segment_intersection_params(rp, rq, RatPoint(a), RatPoint(b));
            if (hit) params.push_back(hit->first);
        }
        std::sort(params.begin(), params.end());
        for (size_t k = 0; k + 1 < params.size(); ++k) {
            if (params[k] == params[k + 1]) continue;
            Rational t = (params[k] + params[k + 1]) / 2;
            RatPoint mid(rp.x + t * (rq.x - rp.x), rp.y + t * (rq.y - rp.y));
            Point2 midD{static_cast<double>(mid.x), static_cast<double>(mid.y)};
            double d = distance_to_boundary(A, midD);
            if (d > kGeomEps * (1 + std::fabs(midD.x) + std::fabs(midD.y))) {
                // Far from the boundary the double location is exact.
                if (locate_point(A, midD) == PointLocation::OUTSIDE) return false;
                continue;
            }
            if (point_in_polygon(A, mid) == PointLocation::OUTSIDE) return false;
        }
    }
    return true;
}

}  // namespace unfold
