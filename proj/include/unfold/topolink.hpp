// Topological diagnostics: Gauss linking numbers of polygonal loops via
// signed crossings in a generic projection, the rolled-square locked example
// with its two attached loops, and the property measurements on it.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "unfold/embed3d.hpp"
#include "unfold/geometry3.hpp"

namespace unfold {

struct LoopsTouchError : std::invalid_argument {
    LoopsTouchError() : std::invalid_argument("loops touch or nearly touch") {}
};

struct SelfIntersectingError : std::runtime_error {
    explicit SelfIntersectingError(const std::string& why) : std::runtime_error(why) {}
};

struct PolyLoop {
    std::vector<Point3> vertices;  // implicitly closed
};

inline void validate_loop(const PolyLoop& L) {
    int n = static_cast<int>(L.vertices.size());
    if (n < 3) throw std::invalid_argument("loop needs at least 3 vertices");
    for (int i = 0; i < n; ++i)
        if (dist(L.vertices[i], L.vertices[(i + 1) % n]) <= kGeomEps)
            throw std::invalid_argument("consecutive loop vertices coincide");
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segment_segment_dist(L.vertices[i], L.vertices[(i + 1) % n], L.vertices[j],
                                     L.vertices[(j + 1) % n]) <= kGeomEps)
                throw std::invalid_argument("loop self-intersects");
        }
    }
}

inline double loop_loop_dist(const PolyLoop& a, const PolyLoop& b) {
    double best = std::numeric_limits<double>::infinity();
    int na = static_cast<int>(a.vertices.size()), nb = static_cast<int>(b.vertices.size());
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            best = std::min(best, segment_segment_dist(a.vertices[i], a.vertices[(i + 1) % na],
                                                       b.vertices[j], b.vertices[(j + 1) % nb]));
    return best;
}

namespace detail {

inline Point3 random_unit_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0, 1);
    for (;;) {
        Point3 d{nd(rng), nd(rng), nd(rng)};
        double n = d.norm();
        if (n > 1e-3) return d * (1.0 / n);
    }
}

}  // namespace detail

// Gauss linking number: signed a-over-b crossings in a generic projection.
// Directions are drawn from a seeded generator and rejected while any
// crossing is within 1e-7 of degeneracy, so the result is deterministic.
inline int linking_number(const PolyLoop& a, const PolyLoop& b,
                          std::uint64_t seed = 0x10c8ed5eedULL) {
    if (loop_loop_dist(a, b) <= kGeomEps) throw LoopsTouchError();
    int na = static_cast<int>(a.vertices.size()), nb = static_cast<int>(b.vertices.size());

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Point3 w = detail::random_unit_direction(rng);
        Point3 any = std::fabs(w.x) < 0.9 ? Point3{1, 0, 0} : Point3{0, 1, 0};
        Point3 u = w.cross(any).normalized(), v = w.cross(u);
        auto flat = [&](Point3 p) { return Point2{p.dot(u), p.dot(v)}; };

        bool degenerate = false;
        int lk = 0;
        for (int i = 0; i < na && !degenerate; ++i) {
            Point3 A0 = a.vertices[i], A1 = a.vertices[(i + 1) % na];
            Point2 p0 = flat(A0), p1 = flat(A1);
            for (int j = 0; j < nb && !degenerate; ++j) {
                Point3 B0 = b.vertices[j], B1 = b.vertices[(j + 1) % nb];
                Point2 q0 = flat(B0), q1 = flat(B1);
                Vec2 da = p1 - p0, db = q1 - q0;
                double den = da.cross(db);
                double scale = da.norm() * db.norm();
                if (scale <= 0) {
                    degenerate = true;
                    break;
                }
                double t = (q0 - p0).cross(db) / den;
                double s = (q0 - p0).cross(da) / den;
                if (std::fabs(den) < 1e-7 * scale) {
                    // Parallel in projection: degenerate only if the strips
                    // actually overlap laterally.
                    if (std::fabs((q0 - p0).cross(da.normalized())) <
                            1e-7 * (1 + da.norm() + db.norm()) &&
                        segment_segment_dist({p0.x, p0.y, 0}, {p1.x, p1.y, 0}, {q0.x, q0.y, 0},
                                             {q1.x, q1.y, 0}) < 1e-7)
                        degenerate = true;
                    continue;
                }
                if (t < -1e-7 || t > 1 + 1e-7 || s < -1e-7 || s > 1 + 1e-7) continue;
                if (t < 1e-7 || t > 1 - 1e-7 || s < 1e-7 || s > 1 - 1e-7) {
                    degenerate = true;
                    continue;
                }
                double za = (A0 + (A1 - A0) * t).dot(w);
                double zb = (B0 + (B1 - B0) * s).dot(w);
                if (std::fabs(za - zb) < 1e-9) {
                    degenerate = true;
                    continue;
                }
                if (za > zb) lk += den > 0 ? 1 : -1;
            }
        }
        if (!degenerate) return lk;
    }
    throw std::runtime_error("no generic projection direction found");
}

struct LockedConfig {
    BuiltEmbedding surface;  // rolled unit square
    PolyLoop loopA, loopB;   // attached near (0,0.5) and (1,0.5)
    double loopLength = 0;
};

struct PropertyReport {
    double loopSeparation = 0;
    double nearestBendDistToCenter = std::numeric_limits<double>::infinity();
    std::pair<double, double> bendCrossingOffsets{
        std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity()};  // top, bottom
    std::array<int, 3> pairwiseLinking{0, 0, 0};   // (A,B), (A,center), (B,center)
};

namespace detail {

// Small rectangular loop hanging just beyond the boundary edge at the image
// of the material point p; u points outward across the edge, yhat along it.
inline PolyLoop attachment_loop(const BuiltEmbedding& E, Point2 p, Vec2 outward, double delta) {
    int f = -1;
    for (double rr = 0.01; rr > 1e-9 && f < 0; rr /= 2)
        f = E.faces.face_of(p - outward * rr);
    if (f < 0) throw std::logic_error("attachment point has no face");
    Point3 P = E.isos[f]({p.x, p.y, 0});
    Point3 u = E.isos[f].linear({outward.x, outward.y, 0});
    Point3 yhat = E.isos[f].linear({-outward.y, outward.x, 0});
    PolyLoop L;
    L.vertices = {P + u * (0.05 * delta) + yhat * (0.25 * delta),
                  P + u * (0.55 * delta) + yhat * (0.25 * delta),
                  P + u * (0.55 * delta) - yhat * (0.25 * delta),
                  P + u * (0.05 * delta) - yhat * (0.25 * delta)};
    return L;
}

inline void check_config(const LockedConfig& cfg) {
    SelfIntersectReport rep = check_self_intersection(cfg.surface, 0);
    if (rep.intersecting)
        throw SelfIntersectingError("rolled surface self-intersects; parameters too coarse");
    // Loops must clear the surface and each other.
    const auto& D = cfg.surface.faces;
    for (const PolyLoop* L : {&cfg.loopA, &cfg.loopB}) {
        validate_loop(*L);
        int n = static_cast<int>(L->vertices.size());
        for (int f = 0; f < D.face_count(); ++f) {
            for (auto& t : ear_clip(D.faces[f])) {
                std::array<Point3, 3> T;
                for (int i = 0; i < 3; ++i)
                    T[i] = cfg.surface.isos[f]({t[i].x, t[i].y, 0});
                for (int i = 0; i < n; ++i)
                    if (segment_triangle_dist(L->vertices[i], L->vertices[(i + 1) % n], T) <=
                        kGeomEps)
                        throw SelfIntersectingError("attached loop touches the surface");
            }
        }
    }
    if (loop_loop_dist(cfg.loopA, cfg.loopB) <= kGeomEps)
        throw SelfIntersectingError("attached loops touch");
}

}  // namespace detail

// The bend line nearest the material center, closed into a loop by a 32
// segment semicircle on the sphere having the bend segment as diameter.
inline PolyLoop centerline_loop(const LockedConfig& cfg) {
    const Embed3D& E = cfg.surface.embed;
    const Polygon& P = E.domain;
    if (E.chords.empty()) throw std::invalid_argument("no bend line in a flat configuration");
    Point2 c{0.5, 0.5};
    int best = -1;
    double bestD = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < E.chords.size(); ++j) {
        Point2 A = boundary_point(P, E.chords[j].a), B = boundary_point(P, E.chords[j].b);
        double d = detail::point_segment_dist(c, A, B);
        if (d < bestD) bestD = d, best = static_cast<int>(j);
    }
    Point2 A = boundary_point(P, E.chords[best].a), B = boundary_point(P, E.chords[best].b);
    // The chord bounds face best+1; both incident faces embed it identically.
    const Isometry3& iso = cfg.surface.isos[best + 1];
    Point3 A3 = iso({A.x, A.y, 0}), B3 = iso({B.x, B.y, 0});
    Point3 mid = (A3 + B3) * 0.5, axis = (B3 - A3).normalized();
    double R = dist(A3, B3) / 2;
    Point3 any = std::fabs(axis.x) < 0.9 ? Point3{1, 0, 0} : Point3{0, 0, 1};
    Point3 out = axis.cross(any).normalized();
    PolyLoop L;
    L.vertices.push_back(A3);
    L.vertices.push_back(B3);
    for (int s = 1; s < 32; ++s) {
        double psi = M_PI * s / 32;
        L.vertices.push_back(mid + axis * (R * std::cos(psi)) + out * (R * std::sin(psi)));
    }
    return L;
}

// Unit square rolled into a polygonal spiral: k = rollTurns*chordsPerTurn
// vertical bend lines with equal dihedrals summing to 2*pi*rollTurns, face
// widths shrinking toward the inner end so successive turns keep a gap. The
// two loops hang off the side midpoints; the inner one ends up in the roll
// cavity, close to the outer one.
inline LockedConfig build_locked_example(int rollTurns, int chordsPerTurn, double loopLength) {
    if (rollTurns < 1) throw std::invalid_argument("rollTurns must be >= 1");
    if (chordsPerTurn < 8) throw std::invalid_argument("chordsPerTurn must be >= 8");
    if (!(loopLength > 0 && loopLength < 0.1))
        throw std::invalid_argument("loopLength must be in (0, 0.1)");

    int k = rollTurns * chordsPerTurn;
    double phi = 2 * M_PI * rollTurns / k;
    // Widths w_m = w0 (1 - m / (2k)), normalized to sum 1 over k+1 faces.
    double w0 = 0;
    for (int m = 0; m <= k; ++m) w0 += 1 - 0.5 * m / k;
    w0 = 1 / w0;
    Polygon sq = validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    std::vector<FoldChord> chords;
    std::vector<double> dihedrals;
    double x = 0;
    for (int m = 0; m < k; ++m) {
        x += w0 * (1 - 0.5 * m / k);
        chords.push_back({{0, x}, {2, 1 - x}});
        dihedrals.push_back(M_PI - phi);
    }
    LockedConfig cfg;
    cfg.surface = build_embedding(sq, chords, dihedrals);
    cfg.loopLength = loopLength;
    cfg.loopA = detail::attachment_loop(cfg.surface, {0, 0.5}, {-1, 0}, loopLength);
    cfg.loopB = detail::attachment_loop(cfg.surface, {1, 0.5}, {1, 0}, loopLength);
    detail::check_config(cfg);
    return cfg;
}

// Deformed variant: the bend lines are slanted in parallel so the one
// through the material center crosses the bottom side a quarter of the way
// from the left and the top side a quarter from the right.
inline LockedConfig build_deformed_example(double loopLength) {
    if (!(loopLength > 0 && loopLength < 0.1))
        throw std::invalid_argument("loopLength must be in (0, 0.1)");
    Polygon sq = validate_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    std::vector<FoldChord> chords{
        {{0, 0.10}, {2, 0.40}},  // (0.10,0)-(0.60,1)
        {{0, 0.25}, {2, 0.25}},  // (0.25,0)-(0.75,1), through the center
        {{0, 0.40}, {2, 0.10}},  // (0.40,0)-(0.90,1)
    };
    std::vector<double> dihedrals(3, M_PI - 0.35);
    LockedConfig cfg;
    cfg.surface = build_embedding(sq, chords, dihedrals);
    cfg.loopLength = loopLength;
    cfg.loopA = detail::attachment_loop(cfg.surface, {0, 0.5}, {-1, 0}, loopLength);
    cfg.loopB = detail::attachment_loop(cfg.surface, {1, 0.5}, {1, 0}, loopLength);
    detail::check_config(cfg);
    return cfg;
}

inline PropertyReport measure_properties(const LockedConfig& cfg) {
    PropertyReport rep;
    rep.loopSeparation = loop_loop_dist(cfg.loopA, cfg.loopB);
    const Embed3D& E = cfg.surface.embed;
    const Polygon& P = E.domain;
    if (!E.chords.empty()) {
        Point2 c{0.5, 0.5};
        int best = -1;
        double bestD = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < E.chords.size(); ++j) {
            Point2 A = boundary_point(P, E.chords[j].a), B = boundary_point(P, E.chords[j].b);
            double d = detail::point_segment_dist(c, A, B);
            if (d < bestD) bestD = d, best = static_cast<int>(j);
        }
        rep.nearestBendDistToCenter = bestD;
        Point2 A = boundary_point(P, E.chords[best].a), B = boundary_point(P, E.chords[best].b);
        // Material crossings of the bend line with the top and bottom sides.
        if (std::fabs(B.y - A.y) > 1e-12) {
            double xBottom = A.x + (B.x - A.x) * (0 - A.y) / (B.y - A.y);
            double xTop = A.x + (B.x - A.x) * (1 - A.y) / (B.y - A.y);
            rep.bendCrossingOffsets = {std::min(xTop, 1 - xTop), std::min(xBottom, 1 - xBottom)};
        }
        PolyLoop C = centerline_loop(cfg);
        rep.pairwiseLinking = {linking_number(cfg.loopA, cfg.loopB),
                               linking_number(cfg.loopA, C), linking_number(cfg.loopB, C)};
    } else {
        rep.pairwiseLinking = {linking_number(cfg.loopA, cfg.loopB), 0, 0};
    }
    return rep;
}

}  // namespace unfold
