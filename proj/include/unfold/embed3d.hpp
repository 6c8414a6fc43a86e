// Polygonal 3D embeddings without interior vertices: construction from fold
// chords plus dihedral angles, triangulated self-intersection checking, and
// the spiral unfolding motion (shrink-conjugate, then open the last fold or
// stop at the vertex link).
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "unfold/flatfold2d.hpp"
#include "unfold/geometry3.hpp"

namespace unfold {

struct FlatAngleError : std::invalid_argument {
    FlatAngleError() : std::invalid_argument("dihedral angle pi is not a fold") {}
};

struct NotBoundaryPointError : std::invalid_argument {
    NotBoundaryPointError() : std::invalid_argument("point is not on the domain boundary") {}
};

struct Embed3D {
    Polygon domain;
    std::vector<FoldChord> chords;
    std::vector<double> dihedrals;  // per chord, in (0,2pi) \ {pi}
};

struct BuiltEmbedding {
    Embed3D embed;
    FaceDecomposition faces;
    std::vector<Isometry3> isos;  // per face, root face in the z=0 plane
};

struct VertexLink {
    std::vector<double> arcLengths;  // face angles at the point, radians
    std::vector<double> foldAngles;  // dihedrals between consecutive arcs
};

namespace detail {

inline Point3 embed2(Point2 p) { return {p.x, p.y, 0}; }

}  // namespace detail

inline BuiltEmbedding build_embedding(const Polygon& domain,
                                      const std::vector<FoldChord>& chords,
                                      const std::vector<double>& dihedrals) {
    if (chords.size() != dihedrals.size())
        throw std::invalid_argument("one dihedral per chord required");
    for (double a : dihedrals)
        if (!(a > 0 && a < 2 * M_PI) || std::fabs(a - M_PI) <= 1e-12) throw FlatAngleError();

    BuiltEmbedding E;
    E.embed = {domain, chords, dihedrals};
    E.faces = face_decomposition({domain, chords, {}});
    int m = E.faces.face_count();
    E.isos.assign(m, Isometry3{});

    // Children in tree order: parent of face j+1 always has smaller index.
    for (int f = 1; f < m; ++f) {
        int chord = E.faces.parentChord[f];
        int pf = E.faces.parentFace[f];
        Point2 A = boundary_point(domain, chords[chord].a);
        Point2 B = boundary_point(domain, chords[chord].b);
        Point2 ip = detail::loop_interior_point(E.faces.faces[pf]);
        if ((B - A).cross(ip - A) > 0) std::swap(A, B);  // parent on the right
        double beta = M_PI - dihedrals[chord];
        Point3 axis = (detail::embed2(B) - detail::embed2(A)).normalized();
        Isometry3 R = rotation_about_line(detail::embed2(A), axis, beta);
        E.isos[f] = compose(E.isos[pf], R);
    }
    return E;
}

struct SelfIntersectReport {
    bool intersecting = false;
    int faceI = -1, faceJ = -1;
    Point3 witness{};
};

namespace detail {

// Fan-free triangulation of a simple CCW loop by ear clipping.
inline std::vector<std::array<Point2, 3>> ear_clip(std::vector<Point2> loop) {
    std::vector<std::array<Point2, 3>> tris;
    while (loop.size() > 3) {
        int n = static_cast<int>(loop.size());
        int ear = -1;
        for (int i = 0; i < n && ear < 0; ++i) {
            Point2 a = loop[(i + n - 1) % n], b = loop[i], c = loop[(i + 1) % n];
            if (orientation_sign(a, b, c) <= 0) continue;
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
                ok = !detail3::point_in_tri_2d(loop[j], a, b, c);
            }
            if (ok) ear = i;
        }
        if (ear < 0) break;  // numerically degenerate remainder: fan it
        tris.push_back({loop[(ear + loop.size() - 1) % loop.size()], loop[ear],
                        loop[(ear + 1) % loop.size()]});
        loop.erase(loop.begin() + ear);
    }
    if (loop.size() == 3) {
        tris.push_back({loop[0], loop[1], loop[2]});
    } else {
        for (size_t i = 1; i + 1 < loop.size(); ++i)
            tris.push_back({loop[0], loop[i], loop[i + 1]});
    }
    return tris;
}

}  // namespace detail

// Triangulates each face, maps the triangles through the face isometries and
// tests all pairs from distinct faces. Triangles are shrunk toward their
// centroids by a relative 1e-7 so legitimate contact along shared chords is
// exempt while genuine crossings (penetration far beyond roundoff) remain.
inline SelfIntersectReport check_self_intersection(const BuiltEmbedding& E, int subdivisions) {
    struct Tri {
        std::array<Point3, 3> v;
        int face;
    };
    std::vector<Tri> tris;
    for (int f = 0; f < E.faces.face_count(); ++f) {
        std::vector<std::array<Point2, 3>> flat = detail::ear_clip(E.faces.faces[f]);
        for (int s = 0; s < subdivisions; ++s) {
            std::vector<std::array<Point2, 3>> next;
            for (auto& t : flat) {
                Point2 ab = lerp(t[0], t[1], 0.5), bc = lerp(t[1], t[2], 0.5),
                       ca = lerp(t[2], t[0], 0.5);
                next.push_back({t[0], ab, ca});
                next.push_back({ab, t[1], bc});
                next.push_back({ca, bc, t[2]});
                next.push_back({ab, bc, ca});
            }
            flat.swap(next);
        }
        for (auto& t : flat) {
            Tri T;
            T.face = f;
            for (int i = 0; i < 3; ++i) T.v[i] = E.isos[f](detail::embed2(t[i]));
            Point3 c = (T.v[0] + T.v[1] + T.v[2]) * (1.0 / 3.0);
            for (int i = 0; i < 3; ++i) T.v[i] = c + (T.v[i] - c) * (1 - 1e-7);
            if ((T.v[1] - T.v[0]).cross(T.v[2] - T.v[0]).norm() > 1e-24) tris.push_back(T);
        }
    }
    SelfIntersectReport rep;
    for (size_t a = 0; a < tris.size(); ++a) {
        for (size_t b = a + 1; b < tris.size(); ++b) {
            if (tris[a].face == tris[b].face) continue;
            if (tri_tri_intersect(tris[a].v, tris[b].v)) {
                rep.intersecting = true;
                rep.faceI = std::min(tris[a].face, tris[b].face);
                rep.faceJ = std::max(tris[a].face, tris[b].face);
                Point3 ca = (tris[a].v[0] + tris[a].v[1] + tris[a].v[2]) * (1.0 / 3.0);
                Point3 cb = (tris[b].v[0] + tris[b].v[1] + tris[b].v[2]) * (1.0 / 3.0);
                rep.witness = (ca + cb) * 0.5;
                return rep;
            }
        }
    }
    return rep;
}

namespace detail {

// Interior angular range at a boundary point: start direction and opening.
inline std::pair<double, double> boundary_angle_range(const Polygon& P, BoundaryPoint bp) {
    if (bp.t > 0) {
        auto [a, b] = P.edge(bp.edge);
        return {std::atan2(b.y - a.y, b.x - a.x), M_PI};
    }
    int v = bp.edge;
    Point2 prev = P.vertex(v - 1), here = P.vertex(v), next = P.vertex(v + 1);
    double angStart = std::atan2(next.y - here.y, next.x - here.x);
    double angIn = std::atan2(prev.y - here.y, prev.x - here.x);
    return {angStart, normalize_angle(angIn - angStart)};
}

}  // namespace detail

// Face angles and dihedrals around a boundary point, in ccw order from the
// outgoing boundary direction.
inline VertexLink vertex_link(const BuiltEmbedding& E, Point2 p) {
    const Polygon& P = E.embed.domain;
    double tol = 1e-6 * (1 + P.diameter());
    auto bp = locate_on_boundary(P, p, tol);
    if (!bp) throw NotBoundaryPointError();
    auto [angStart, theta] = detail::boundary_angle_range(P, *bp);

    std::vector<std::pair<double, double>> incident;  // angle, dihedral
    for (size_t j = 0; j < E.embed.chords.size(); ++j) {
        Point2 A = boundary_point(P, E.embed.chords[j].a);
        Point2 B = boundary_point(P, E.embed.chords[j].b);
        Point2 far;
        if (dist(A, p) <= tol)
            far = B;
        else if (dist(B, p) <= tol)
            far = A;
        else
            continue;
        double a = detail::normalize_angle(std::atan2(far.y - p.y, far.x - p.x) - angStart);
        incident.push_back({a, E.embed.dihedrals[j]});
    }
    std::sort(incident.begin(), incident.end());

    VertexLink L;
    double prev = 0;
    for (auto& [a, alpha] : incident) {
        L.arcLengths.push_back(a - prev);
        L.foldAngles.push_back(alpha);
        prev = a;
    }
    L.arcLengths.push_back(theta - prev);
    return L;
}

// Unit directions sampling the link chain at p on the sphere around f(p);
// exact per-face great arcs from the face rotations.
inline std::vector<Point3> vertex_link_chain(const BuiltEmbedding& E, Point2 p,
                                             int samplesPerArc = 16) {
    const Polygon& P = E.embed.domain;
    double tol = 1e-6 * (1 + P.diameter());
    auto bp = locate_on_boundary(P, p, tol);
    if (!bp) throw NotBoundaryPointError();
    auto [angStart, theta] = detail::boundary_angle_range(P, *bp);

    std::vector<double> bounds{0};
    for (size_t j = 0; j < E.embed.chords.size(); ++j) {
        Point2 A = boundary_point(P, E.embed.chords[j].a);
        Point2 B = boundary_point(P, E.embed.chords[j].b);
        if (dist(A, p) > tol && dist(B, p) > tol) continue;
        Point2 far = dist(A, p) <= tol ? B : A;
        bounds.push_back(
            detail::normalize_angle(std::atan2(far.y - p.y, far.x - p.x) - angStart));
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.push_back(theta);

    std::vector<Point3> chain;
    for (size_t s = 0; s + 1 < bounds.size(); ++s) {
        double amid = angStart + (bounds[s] + bounds[s + 1]) / 2;
        int face = -1;
        for (double rr = 0.05 * (1 + P.diameter()); rr > 1e-9 && face < 0; rr /= 2) {
            Point2 q = p + Vec2{std::cos(amid), std::sin(amid)} * rr;
            if (locate_point(P, q) == PointLocation::INSIDE) face = E.faces.face_of(q);
        }
        if (face < 0) throw std::logic_error("no face sample in a link sector");
        for (int k = 0; k <= samplesPerArc; ++k) {
            if (s > 0 && k == 0) continue;  // shared with previous arc
            double a = angStart + bounds[s] + (bounds[s + 1] - bounds[s]) * k / samplesPerArc;
            chain.push_back(E.isos[face].linear({std::cos(a), std::sin(a), 0}));
        }
    }
    return chain;
}

// Open spherical polyline is simple: non-adjacent chain segments keep a
// positive distance.
inline bool chain_simple(const std::vector<Point3>& chain, double eps = 1e-9) {
    int n = static_cast<int>(chain.size());
    for (int a = 0; a + 1 < n; ++a)
        for (int b = a + 2; b + 1 < n; ++b)
            if (segment_segment_dist(chain[a], chain[a + 1], chain[b], chain[b + 1]) < eps)
                return false;
    return true;
}

enum class EmbedUnfoldStatus { Flat, NeedsSphericalCarpenter };

struct EmbedFrame {
    Embed3D shape;
    FaceDecomposition faces;
    std::vector<Isometry3> isos;
};

struct Motion3D {
    std::vector<MotionParam> params;
    std::vector<EmbedFrame> frames;
    EmbedUnfoldStatus status = EmbedUnfoldStatus::Flat;
    std::optional<VertexLink> link;  // case (c) only
    std::string thetaNote;           // case (c) diagnostic when theta != 0
};

namespace detail {

// Stage-1 shape at scale i: chord preimages with inherited dihedrals.
inline Embed3D embed_stage1_shape(const Embed3D& E, const SpiralParams& sp, double i) {
    if (i == 1) return E;
    const Polygon& P = E.domain;
    Similarity s = similarity_at_scale(sp, i);
    auto Q = s.map(P.vertices());
    Embed3D g;
    g.domain = P;
    for (size_t j = 0; j < E.chords.size(); ++j) {
        Point2 A = boundary_point(P, E.chords[j].a), B = boundary_point(P, E.chords[j].b);
        for (const FoldChord& piece : pullback_chord(P, Q, s, sp, i, A, B)) {
            g.chords.push_back(piece);
            g.dihedrals.push_back(E.dihedrals[j]);
        }
    }
    return g;
}

// Face isometries of the stage-1 frame: shrink the material, embed with the
// original isometries, then expand about f(p) with the compensating rotation
// about the reference-face normal. The scale factors cancel, so each face map
// is rigid; at i = 1 everything is the identity normalization.
inline EmbedFrame embed_stage1_frame(const BuiltEmbedding& E, const SpiralParams& sp, double i,
                                     Point3 fp3, Point3 axis) {
    EmbedFrame fr;
    fr.shape = embed_stage1_shape(E.embed, sp, i);
    fr.faces = face_decomposition({fr.shape.domain, fr.shape.chords, {}});
    Similarity s = similarity_at_scale(sp, i);
    Isometry3 spin = rotation_about_line(fp3, axis, -std::tan(sp.theta) * std::log(i));
    fr.isos.reserve(fr.faces.face_count());
    for (int f = 0; f < fr.faces.face_count(); ++f) {
        Point2 ip = loop_interior_point(fr.faces.faces[f]);
        int orig = E.faces.face_of(s(ip));
        if (orig < 0) throw std::logic_error("stage-1 face has no originating face");
        double c = std::cos(s.angle), sn = std::sin(s.angle);
        Isometry3 shrink;  // 2D similarity at scale i, embedded; z scaled too
        shrink.r[0][0] = i * c, shrink.r[0][1] = -i * sn, shrink.r[1][0] = i * sn,
        shrink.r[1][1] = i * c, shrink.r[2][2] = i;
        Point3 cen = embed2(sp.center);
        shrink.t = cen - shrink.linear(cen);
        Isometry3 expand;
        expand.r[0][0] = expand.r[1][1] = expand.r[2][2] = 1.0 / i;
        expand.t = fp3 - expand.linear(fp3);
        Isometry3 m = compose(spin, compose(expand, compose(E.isos[orig], shrink)));
        // Renormalize the rotation rows: the i and 1/i factors cancel exactly
        // in theory, to roundoff in practice.
        for (int r = 0; r < 3; ++r) {
            double n = std::sqrt(m.r[r][0] * m.r[r][0] + m.r[r][1] * m.r[r][1] +
                                 m.r[r][2] * m.r[r][2]);
            for (int cidx = 0; cidx < 3; ++cidx) m.r[r][cidx] /= n;
        }
        fr.isos.push_back(m);
    }
    return fr;
}

inline std::vector<Point3> embed_frame_images(const EmbedFrame& fr,
                                              const std::vector<Point2>& pts) {
    std::vector<Point3> out;
    out.reserve(pts.size());
    for (Point2 q : pts) {
        int f = fr.faces.face_of(q);
        if (f < 0) f = 0;
        out.push_back(fr.isos[f](embed2(q)));
    }
    return out;
}

// Reference face: the face of D whose closure contains p, largest area on a
// chord, smallest index on ties.
inline int reference_face(const FaceDecomposition& D, Point2 p, double tol) {
    int best = -1;
    double bestArea = -1;
    for (int f = 0; f < D.face_count(); ++f) {
        const auto& loop = D.faces[f];
        bool touches = loop_contains(loop, p);
        for (size_t e = 0; e < loop.size() && !touches; ++e)
            touches = point_segment_dist(p, loop[e], loop[(e + 1) % loop.size()]) <= tol;
        if (!touches) continue;
        double area = std::fabs(loop_area(loop));
        if (area > bestArea + 1e-15) bestArea = area, best = f;
    }
    if (best < 0) throw std::invalid_argument("spiral center outside the domain");
    return best;
}

}  // namespace detail

// Theorem-2 style unfolding: conjugate the embedding with the spiral shrink
// until every chord missing the center has vanished; then case (a) is flat,
// case (b) opens the one remaining fold to pi, and case (c) stops with the
// vertex link at the center.
inline Motion3D unfold_motion_embed(const BuiltEmbedding& E, const SpiralParams& sp,
                                    int steps) {
    if (steps < 2) throw std::invalid_argument("unfold_motion_embed requires steps >= 2");
    const Polygon& P = E.embed.domain;
    double tol = kGeomEps * (1 + P.diameter());
    Point2 p = sp.center;

    std::vector<int> through;
    double thrMin = 1;
    bool anyAway = false;
    for (size_t j = 0; j < E.embed.chords.size(); ++j) {
        Point2 A = boundary_point(P, E.embed.chords[j].a);
        Point2 B = boundary_point(P, E.embed.chords[j].b);
        if (detail::point_segment_dist(p, A, B) <= tol) {
            through.push_back(static_cast<int>(j));
        } else {
            anyAway = true;
            thrMin = std::min(thrMin, chord_survival_threshold(P, sp, A, B));
        }
    }

    int ref = detail::reference_face(E.faces, p, tol);
    Point3 fp3 = E.isos[ref](detail::embed2(p));
    Point3 axis = {E.isos[ref].r[0][2], E.isos[ref].r[1][2], E.isos[ref].r[2][2]};

    Motion3D M;
    std::vector<Point2> pts = detail::motion_sample_points(P);

    if (!anyAway && through.empty() && !E.embed.chords.empty())
        throw std::logic_error("unclassified chords");

    if (anyAway) {
        double iEnd = thrMin / 2, lnEnd = std::log(iEnd);
        int fine = std::max(4 * steps, 128);
        std::vector<double> cum(fine, 0.0);
        std::vector<Point3> prev = detail::embed_frame_images(
            detail::embed_stage1_frame(E, sp, 1.0, fp3, axis), pts);
        for (int k = 1; k < fine; ++k) {
            double i = std::exp(lnEnd * k / (fine - 1));
            auto curr = detail::embed_frame_images(
                detail::embed_stage1_frame(E, sp, i, fp3, axis), pts);
            double step = 0;
            for (size_t s = 0; s < pts.size(); ++s)
                step = std::max(step, dist(curr[s], prev[s]));
            cum[k] = cum[k - 1] + step;
            prev.swap(curr);
        }
        std::vector<int> idx(steps);
        idx[0] = 0;
        idx[steps - 1] = fine - 1;
        double total = cum[fine - 1];
        for (int m = 1; m < steps - 1; ++m) {
            int k;
            if (total > 0)
                k = static_cast<int>(
                    std::lower_bound(cum.begin(), cum.end(), total * m / (steps - 1)) -
                    cum.begin());
            else
                k = static_cast<int>(std::llround(double(m) * (fine - 1) / (steps - 1)));
            idx[m] = std::min(std::max(k, idx[m - 1] + 1), fine - 1 - (steps - 1 - m));
        }
        for (int m = 0; m < steps; ++m) {
            double i = idx[m] == 0 ? 1.0 : std::exp(lnEnd * idx[m] / (fine - 1));
            M.params.push_back({1, i});
            M.frames.push_back(detail::embed_stage1_frame(E, sp, i, fp3, axis));
        }
    } else {
        M.params.push_back({1, 1.0});
        M.frames.push_back(detail::embed_stage1_frame(E, sp, 1.0, fp3, axis));
    }

    const EmbedFrame& last = M.frames.back();
    if (through.empty()) {
        M.status = EmbedUnfoldStatus::Flat;
    } else if (last.shape.chords.size() == 1) {
        // Case (b): open the surviving fold linearly to pi. The reference
        // side of the chord stays fixed; the other side rotates about the
        // chord's embedded line.
        EmbedFrame base = last;
        int refSide = detail::reference_face(base.faces, p, tol);
        int other = refSide == 0 ? 1 : 0;
        Point2 A = boundary_point(P, base.shape.chords[0].a);
        Point2 B = boundary_point(P, base.shape.chords[0].b);
        Point2 ip = detail::loop_interior_point(base.faces.faces[refSide]);
        if ((B - A).cross(ip - A) > 0) std::swap(A, B);
        double alpha0 = base.shape.dihedrals[0];
        Point3 A3 = base.isos[refSide](detail::embed2(A));
        Point3 B3 = base.isos[refSide](detail::embed2(B));
        Point3 axis3 = (B3 - A3).normalized();
        for (int k = 1; k < steps; ++k) {
            double t = double(k) / (steps - 1);
            double alpha = alpha0 + t * (M_PI - alpha0);
            EmbedFrame fr;
            fr.shape.domain = P;
            if (k + 1 < steps) {
                fr.shape.chords = base.shape.chords;
                fr.shape.dihedrals = {alpha};
                fr.faces = base.faces;
                fr.isos = base.isos;
                double beta = M_PI - alpha, beta0 = M_PI - alpha0;
                Isometry3 delta = rotation_about_line(A3, axis3, beta - beta0);
                fr.isos[other] = compose(delta, base.isos[other]);
            } else {
                fr.faces = face_decomposition({P, {}, {}});
                fr.isos = {base.isos[refSide]};
            }
            M.params.push_back({2, t});
            M.frames.push_back(std::move(fr));
        }
        M.status = EmbedUnfoldStatus::Flat;
    } else {
        M.status = EmbedUnfoldStatus::NeedsSphericalCarpenter;
        BuiltEmbedding endE =
            build_embedding(last.shape.domain, last.shape.chords, last.shape.dihedrals);
        M.link = vertex_link(endE, p);
        if (std::fabs(sp.theta) > 1e-12)
            M.thetaNote = "case (c) expects the linear shrinking motion; theta != 0";
    }

    if (M.status == EmbedUnfoldStatus::Flat) {
        for (size_t k = 0; k < M.frames.size(); ++k) {
            BuiltEmbedding fk;
            fk.embed = M.frames[k].shape;
            fk.faces = M.frames[k].faces;
            fk.isos = M.frames[k].isos;
            SelfIntersectReport rep = check_self_intersection(fk, 0);
            if (rep.intersecting)
                throw InvalidFrameError(static_cast<int>(k), "self-intersecting frame");
        }
    }
    return M;
}

}  // namespace unfold
