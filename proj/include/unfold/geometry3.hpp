// Spatial primitives: 3D points, rigid motions, line rotations, segment and
// triangle distance/intersection tests. All 3D arithmetic is double with a
// fixed tolerance; exactness is kept in the planar layer.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "unfold/geometry.hpp"

namespace unfold {

struct Point3 {
    double x = 0, y = 0, z = 0;

    Point3 operator+(Point3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(Point3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Point3 operator-() const { return {-x, -y, -z}; }
    double dot(Point3 o) const { return x * o.x + y * o.y + z * o.z; }
    Point3 cross(Point3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Point3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline double dist(Point3 a, Point3 b) { return (a - b).norm(); }

// Rotation (det +1 orthonormal) followed by a translation.
struct Isometry3 {
    double r[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Point3 t{};

    Point3 linear(Point3 v) const {
        return {r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
                r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
                r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z};
    }
    Point3 operator()(Point3 p) const { return linear(p) + t; }
    Isometry3 inverse() const {
        Isometry3 inv;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) inv.r[i][j] = r[j][i];
        inv.t = -inv.linear(t);
        return inv;
    }
};

// f then g reads right to left: (f o g)(x) = f(g(x)).
inline Isometry3 compose(const Isometry3& f, const Isometry3& g) {
    Isometry3 h;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            h.r[i][j] = 0;
            for (int k = 0; k < 3; ++k) h.r[i][j] += f.r[i][k] * g.r[k][j];
        }
    }
    h.t = f.linear(g.t) + f.t;
    return h;
}

// Right-hand rotation by angle about the line through origin with unit
// direction axis (Rodrigues).
inline Isometry3 rotation_about_line(Point3 origin, Point3 axis, double angle) {
    double c = std::cos(angle), s = std::sin(angle), v = 1 - c;
    double ux = axis.x, uy = axis.y, uz = axis.z;
    Isometry3 R;
    R.r[0][0] = c + ux * ux * v;
    R.r[0][1] = ux * uy * v - uz * s;
    R.r[0][2] = ux * uz * v + uy * s;
    R.r[1][0] = uy * ux * v + uz * s;
    R.r[1][1] = c + uy * uy * v;
    R.r[1][2] = uy * uz * v - ux * s;
    R.r[2][0] = uz * ux * v - uy * s;
    R.r[2][1] = uz * uy * v + ux * s;
    R.r[2][2] = c + uz * uz * v;
    R.t = origin - R.linear(origin);
    return R;
}

// Max deviation of R^T R from the identity.
inline double orthonormality_defect(const Isometry3& m) {
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += m.r[k][i] * m.r[k][j];
            worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

inline double segment_segment_dist(Point3 p1, Point3 q1, Point3 p2, Point3 q2) {
    Point3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
    double s = 0, t = 0;
    if (a <= 1e-30 && e <= 1e-30) return dist(p1, p2);
    if (a <= 1e-30) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = d1.dot(r);
        if (e <= 1e-30) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = d1.dot(d2), den = a * e - b * b;
            s = den > 1e-30 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0;
            t = (b * s + f) / e;
            if (t < 0) {
                t = 0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1) {
                t = 1;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return dist(p1 + d1 * s, p2 + d2 * t);
}

inline Point3 closest_point_in_triangle(Point3 p, const std::array<Point3, 3>& t) {
    Point3 ab = t[1] - t[0], ac = t[2] - t[0], ap = p - t[0];
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return t[0];
    Point3 bp = p - t[1];
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return t[1];
    Point3 cp = p - t[2];
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return t[2];
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return t[0] + ab * (d1 / (d1 - d3));
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return t[0] + ac * (d2 / (d2 - d6));
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
        return t[1] + (t[2] - t[1]) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    double denom = 1.0 / (va + vb + vc);
    return t[0] + ab * (vb * denom) + ac * (vc * denom);
}

inline double segment_triangle_dist(Point3 p, Point3 q, const std::array<Point3, 3>& t) {
    // Proper plane crossing inside the triangle is distance zero.
    Point3 n = (t[1] - t[0]).cross(t[2] - t[0]);
    double dp = n.dot(p - t[0]), dq = n.dot(q - t[0]);
    if ((dp > 0) != (dq > 0) && dp != dq) {
        Point3 x = p + (q - p) * (dp / (dp - dq));
        Point3 c = closest_point_in_triangle(x, t);
        if (dist(c, x) < 1e-12) return 0;
    }
    double best = std::min(dist(closest_point_in_triangle(p, t), p),
                           dist(closest_point_in_triangle(q, t), q));
    for (int e = 0; e < 3; ++e)
        best = std::min(best, segment_segment_dist(p, q, t[e], t[(e + 1) % 3]));
    // Sample the segment against the face interior for the crossing-adjacent
    // minimum; the candidates above already cover all boundary cases.
    for (int s = 1; s < 8; ++s) {
        Point3 x = p + (q - p) * (s / 8.0);
        best = std::min(best, dist(closest_point_in_triangle(x, t), x));
    }
    return best;
}

namespace detail3 {

// Interval of the intersection line covered by a triangle whose vertices
// project to p* and have signed plane distances d* (not all one sign).
inline bool tri_line_interval(double p0, double p1, double p2, double d0, double d1, double d2,
                              double& lo, double& hi) {
    auto seg = [](double pa, double pb, double da, double db) {
        return pa + (pb - pa) * (da / (da - db));
    };
    double a, b;
    if (d0 * d1 > 0) {
        a = seg(p0, p2, d0, d2), b = seg(p1, p2, d1, d2);
    } else if (d0 * d2 > 0) {
        a = seg(p0, p1, d0, d1), b = seg(p2, p1, d2, d1);
    } else if (d1 * d2 > 0 || d0 != 0) {
        a = seg(p1, p0, d1, d0), b = seg(p2, p0, d2, d0);
    } else if (d1 != 0) {
        a = seg(p1, p2, d1, d2), b = p0;
    } else if (d2 != 0) {
        a = seg(p2, p1, d2, d1), b = p0;
    } else {
        return false;  // coplanar, handled separately
    }
    lo = std::min(a, b), hi = std::max(a, b);
    return true;
}

inline bool point_in_tri_2d(Point2 p, Point2 a, Point2 b, Point2 c) {
    int s1 = orientation_sign(a, b, p), s2 = orientation_sign(b, c, p),
        s3 = orientation_sign(c, a, p);
    return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
}

inline bool coplanar_tri_tri_2d(const std::array<Point2, 3>& A, const std::array<Point2, 3>& B) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_intersect(A[i], A[(i + 1) % 3], B[j], B[(j + 1) % 3])) return true;
    return point_in_tri_2d(B[0], A[0], A[1], A[2]) || point_in_tri_2d(A[0], B[0], B[1], B[2]);
}

}  // namespace detail3

// Triangle-triangle intersection (Moller interval test; coplanar pairs via
// the dominant-axis projection). Closed triangles: touching counts.
inline bool tri_tri_intersect(const std::array<Point3, 3>& A, const std::array<Point3, 3>& B) {
    Point3 nB = (B[1] - B[0]).cross(B[2] - B[0]);
    double dA0 = nB.dot(A[0] - B[0]), dA1 = nB.dot(A[1] - B[0]), dA2 = nB.dot(A[2] - B[0]);
    if ((dA0 > 0 && dA1 > 0 && dA2 > 0) || (dA0 < 0 && dA1 < 0 && dA2 < 0)) return false;
    Point3 nA = (A[1] - A[0]).cross(A[2] - A[0]);
    double dB0 = nA.dot(B[0] - A[0]), dB1 = nA.dot(B[1] - A[0]), dB2 = nA.dot(B[2] - A[0]);
    if ((dB0 > 0 && dB1 > 0 && dB2 > 0) || (dB0 < 0 && dB1 < 0 && dB2 < 0)) return false;

    bool coplanar = dA0 == 0 && dA1 == 0 && dA2 == 0;
    if (!coplanar) {
        Point3 dir = nA.cross(nB);
        double ax = std::fabs(dir.x), ay = std::fabs(dir.y), az = std::fabs(dir.z);
        auto proj = [&](Point3 p) {
            if (ax >= ay && ax >= az) return p.x;
            return ay >= az ? p.y : p.z;
        };
        double lo1, hi1, lo2, hi2;
        if (!detail3::tri_line_interval(proj(A[0]), proj(A[1]), proj(A[2]), dA0, dA1, dA2, lo1,
                                        hi1))
            coplanar = true;
        else if (!detail3::tri_line_interval(proj(B[0]), proj(B[1]), proj(B[2]), dB0, dB1, dB2,
                                             lo2, hi2))
            coplanar = true;
        else
            return hi1 >= lo2 && hi2 >= lo1;
    }
    double ax = std::fabs(nB.x), ay = std::fabs(nB.y), az = std::fabs(nB.z);
    auto flat = [&](Point3 p) -> Point2 {
        if (ax >= ay && ax >= az) return {p.y, p.z};
        if (ay >= az) return {p.x, p.z};
        return {p.x, p.y};
    };
    return detail3::coplanar_tri_tri_2d({flat(A[0]), flat(A[1]), flat(A[2])},
                                        {flat(B[0]), flat(B[1]), flat(B[2])});
}

}  // namespace unfold
