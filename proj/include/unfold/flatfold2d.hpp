// Flat foldings of a polygon without interior vertices: boundary-to-boundary
// fold chords, face decomposition along the chords, layer validity via
// reduction to 1D foldings on transversal segments, and the two-stage
// unfolding motion (spiral shrink conjugation, then rolling or angular-link
// unfolding of the chords left through the center).
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unfold/fold1d.hpp"
#include "unfold/geometry.hpp"
#include "unfold/kernel_spiral.hpp"

namespace unfold {

struct CrossingChordsError : std::invalid_argument {
    int chordI, chordJ;
    CrossingChordsError(int i, int j)
        : std::invalid_argument("fold chords cross in the interior"), chordI(i), chordJ(j) {}
};

struct MultipleChordsError : std::invalid_argument {
    MultipleChordsError() : std::invalid_argument("roll_fold_to_boundary requires one chord") {}
};

struct CenterOnChordInteriorError : std::runtime_error {
    CenterOnChordInteriorError()
        : std::runtime_error(
              "multiple chords through the center require the center on the boundary with every "
              "such chord ending there") {}
};

struct InvalidFrameError : std::runtime_error {
    int frame;
    explicit InvalidFrameError(int k, const std::string& why)
        : std::runtime_error("motion frame " + std::to_string(k) + " invalid: " + why), frame(k) {}
};

// Point on the domain boundary as (edge index, parameter in [0,1)); t = 1 is
// normalized to the start of the next edge so shared endpoints compare
// exactly. A vertex is (vertexIndex, 0).
struct BoundaryPoint {
    int edge = 0;
    double t = 0;
};

inline BoundaryPoint normalize_boundary_point(const Polygon& P, BoundaryPoint bp) {
    int n = P.size();
    bp.edge = ((bp.edge % n) + n) % n;
    if (bp.t == 1) {
        bp.edge = (bp.edge + 1) % n;
        bp.t = 0;
    }
    if (bp.t < 0 || bp.t >= 1)
        throw std::invalid_argument("boundary parameter outside [0, 1]");
    return bp;
}

inline Point2 boundary_point(const Polygon& P, BoundaryPoint bp) {
    auto [a, b] = P.edge(bp.edge);
    return lerp(a, b, bp.t);
}

inline double boundary_param(BoundaryPoint bp) { return bp.edge + bp.t; }

struct FoldChord {
    BoundaryPoint a, b;
};

// Face faceI lies above faceJ wherever their images overlap iff iAbove.
struct OverlapBit {
    int faceI = 0, faceJ = 0;
    bool iAbove = true;
};

struct FlatFold2D {
    Polygon domain;
    std::vector<FoldChord> chords;
    std::vector<OverlapBit> overlaps;
};

struct MotionParam {
    int stage = 1;
    double value = 0;
};

struct Motion2D {
    std::vector<MotionParam> params;
    std::vector<FlatFold2D> frames;
};

namespace detail {

inline bool loop_contains(const std::vector<Point2>& loop, Point2 q) {
    bool in = false;
    int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
        Point2 a = loop[i], b = loop[(i + 1) % n];
        if ((a.y > q.y) != (b.y > q.y)) {
            double xi = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > q.x) in = !in;
        }
    }
    return in;
}

inline double loop_area(const std::vector<Point2>& loop) {
    double s = 0;
    int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
        Point2 a = loop[i], b = loop[(i + 1) % n];
        s += a.x * b.y - a.y * b.x;
    }
    return s / 2;
}

inline Point2 loop_interior_point(const std::vector<Point2>& loop) {
    int n = static_cast<int>(loop.size());
    double sx = 0, sy = 0;
    for (auto& p : loop) sx += p.x, sy += p.y;
    Point2 c{sx / n, sy / n};
    if (loop_contains(loop, c)) return c;
    for (int i = 1; i + 1 < n; ++i) {
        Point2 t{(loop[0].x + loop[i].x + loop[i + 1].x) / 3,
                 (loop[0].y + loop[i].y + loop[i + 1].y) / 3};
        if (loop_contains(loop, t)) return t;
    }
    throw std::logic_error("no interior sample point for face loop");
}

inline double point_segment_dist(Point2 p, Point2 a, Point2 b) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    double u = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return dist(p, a + ab * u);
}

}  // namespace detail

inline std::optional<BoundaryPoint> locate_on_boundary(const Polygon& P, Point2 q, double tol) {
    double best = tol;
    std::optional<BoundaryPoint> out;
    for (int i = 0; i < P.size(); ++i) {
        auto [a, b] = P.edge(i);
        Vec2 ab = b - a;
        double u = std::clamp((q - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
        double d = dist(q, lerp(a, b, u));
        if (d <= best) {
            best = d;
            out = normalize_boundary_point(P, {i, u});
        }
    }
    return out;
}

// Faces cut by the chords. Face 0 is the region outside every chord's
// boundary-parameter interval; face j+1 belongs to chord j (the region inside
// its interval minus its children). The adjacency dual is a tree because
// non-crossing chords give a laminar family of intervals.
struct FaceDecomposition {
    std::vector<std::vector<Point2>> faces;  // counterclockwise loops
    std::vector<int> parentFace;             // -1 for the root face 0
    std::vector<int> parentChord;            // chord crossed toward the root
    std::vector<std::vector<int>> children;

    int face_count() const { return static_cast<int>(faces.size()); }

    // Containing face for a generic interior point; -1 if the parity test is
    // inconclusive (point on a chord or the boundary).
    int face_of(Point2 q) const {
        for (int f = 1; f < face_count(); ++f)
            if (detail::loop_contains(faces[f], q)) return f;
        return detail::loop_contains(faces[0], q) ? 0 : -1;
    }
};

namespace detail {

inline void validate_chords(const FlatFold2D& F) {
    const Polygon& P = F.domain;
    int m = static_cast<int>(F.chords.size());
    std::vector<Point2> A(m), B(m);
    std::vector<double> lo(m), hi(m);
    for (int j = 0; j < m; ++j) {
        BoundaryPoint pa = normalize_boundary_point(P, F.chords[j].a);
        BoundaryPoint pb = normalize_boundary_point(P, F.chords[j].b);
        double sa = boundary_param(pa), sb = boundary_param(pb);
        if (sa == sb) throw std::invalid_argument("chord endpoints coincide");
        A[j] = boundary_point(P, pa);
        B[j] = boundary_point(P, pb);
        lo[j] = std::min(sa, sb);
        hi[j] = std::max(sa, sb);
        for (int q = 1; q < 8; ++q) {
            Point2 s = lerp(A[j], B[j], q / 8.0);
            if (locate_point(P, s) != PointLocation::INSIDE)
                throw std::invalid_argument("chord leaves the polygon interior");
        }
        for (int e = 0; e < P.size(); ++e) {
            auto [p, q] = P.edge(e);
            if (segments_cross_properly(A[j], B[j], p, q))
                throw std::invalid_argument("chord crosses the boundary");
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            bool interleaved = (lo[i] < lo[j] && lo[j] < hi[i] && hi[i] < hi[j]) ||
                               (lo[j] < lo[i] && lo[i] < hi[j] && hi[j] < hi[i]);
            if (interleaved || segments_cross_properly(A[i], B[i], A[j], B[j]))
                throw CrossingChordsError(i, j);
        }
    }
}

}  // namespace detail

inline FaceDecomposition face_decomposition(const FlatFold2D& F) {
    detail::validate_chords(F);
    const Polygon& P = F.domain;
    int n = P.size(), m = static_cast<int>(F.chords.size());

    struct Iv {
        double lo, hi;
        int chord;
    };
    std::vector<Iv> ivs(m);
    for (int j = 0; j < m; ++j) {
        double sa = boundary_param(normalize_boundary_point(P, F.chords[j].a));
        double sb = boundary_param(normalize_boundary_point(P, F.chords[j].b));
        ivs[j] = {std::min(sa, sb), std::max(sa, sb), j};
    }
    std::vector<int> order(m);
    for (int j = 0; j < m; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return ivs[a].lo != ivs[b].lo ? ivs[a].lo < ivs[b].lo : ivs[a].hi > ivs[b].hi;
    });

    std::vector<int> parentChord(m, -1);
    std::vector<std::vector<Iv>> kids(m);
    std::vector<Iv> topLevel;
    std::vector<int> stack;
    for (int j : order) {
        while (!stack.empty() && ivs[stack.back()].hi <= ivs[j].lo) stack.pop_back();
        parentChord[j] = stack.empty() ? -1 : stack.back();
        if (stack.empty())
            topLevel.push_back(ivs[j]);
        else
            kids[stack.back()].push_back(ivs[j]);
        stack.push_back(j);
    }

    auto addParam = [&](std::vector<Point2>& pts, double s) {
        int e = static_cast<int>(std::floor(s));
        Point2 p = boundary_point(P, normalize_boundary_point(P, {e, s - e}));
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    };
    auto dedupLoop = [&](std::vector<Point2>& pts) {
        if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
        if (pts.size() < 3) throw std::invalid_argument("degenerate face in chord decomposition");
        return pts;
    };

    FaceDecomposition D;
    D.faces.resize(m + 1);
    D.parentFace.assign(m + 1, -1);
    D.parentChord.assign(m + 1, -1);
    D.children.resize(m + 1);

    {
        std::vector<Point2> pts;
        double cur = 0;
        for (const Iv& iv : topLevel) {
            for (int v = static_cast<int>(std::ceil(cur)); v < iv.lo; ++v)
                if (v >= cur) addParam(pts, v);
            addParam(pts, iv.lo);
            addParam(pts, iv.hi);
            cur = iv.hi;
        }
        for (int v = static_cast<int>(std::ceil(cur)); v < n; ++v)
            if (v >= cur) addParam(pts, v);
        D.faces[0] = dedupLoop(pts);
    }
    for (int j = 0; j < m; ++j) {
        std::vector<Point2> pts;
        addParam(pts, ivs[j].lo);
        double cur = ivs[j].lo;
        for (const Iv& kid : kids[j]) {
            for (int v = static_cast<int>(std::floor(cur)) + 1; v < kid.lo; ++v)
                if (v > cur) addParam(pts, v);
            addParam(pts, kid.lo);
            addParam(pts, kid.hi);
            cur = kid.hi;
        }
        for (int v = static_cast<int>(std::floor(cur)) + 1; v < ivs[j].hi; ++v)
            if (v > cur) addParam(pts, v);
        addParam(pts, ivs[j].hi);
        D.faces[j + 1] = dedupLoop(pts);
        D.parentChord[j + 1] = j;
        D.parentFace[j + 1] = parentChord[j] == -1 ? 0 : parentChord[j] + 1;
    }
    for (int f = 1; f <= m; ++f) D.children[D.parentFace[f]].push_back(f);
    return D;
}

// Planar isometry x -> M x + t with M orthogonal, sign = det M.
struct Isometry2 {
    double a = 1, b = 0, c = 0, d = 1;
    Vec2 t{0, 0};
    int sign = 1;

    Point2 operator()(Point2 p) const {
        return {a * p.x + b * p.y + t.x, c * p.x + d * p.y + t.y};
    }
};

inline Isometry2 compose(const Isometry2& f, const Isometry2& g) {
    Isometry2 h;
    h.a = f.a * g.a + f.b * g.c;
    h.b = f.a * g.b + f.b * g.d;
    h.c = f.c * g.a + f.d * g.c;
    h.d = f.c * g.b + f.d * g.d;
    h.t = {f.a * g.t.x + f.b * g.t.y + f.t.x, f.c * g.t.x + f.d * g.t.y + f.t.y};
    h.sign = f.sign * g.sign;
    return h;
}

inline Isometry2 reflect_across(Point2 p, Point2 q) {
    Vec2 d = (q - p).normalized();
    Isometry2 r;
    r.a = d.x * d.x - d.y * d.y;
    r.b = 2 * d.x * d.y;
    r.c = r.b;
    r.d = d.y * d.y - d.x * d.x;
    r.t = {p.x - (r.a * p.x + r.b * p.y), p.y - (r.c * p.x + r.d * p.y)};
    r.sign = -1;
    return r;
}

// Folding map on one face: identity on the root, and crossing a tree edge
// composes the reflection across that chord (equivalently, across the chord's
// current image line, by conjugation).
inline Isometry2 face_isometry(const FlatFold2D& F, const FaceDecomposition& D, int faceId) {
    std::vector<int> chain;
    for (int f = faceId; D.parentChord[f] != -1; f = D.parentFace[f])
        chain.push_back(D.parentChord[f]);
    Isometry2 iso;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const FoldChord& ch = F.chords[*it];
        iso = compose(iso, reflect_across(boundary_point(F.domain, ch.a),
                                          boundary_point(F.domain, ch.b)));
    }
    return iso;
}

inline std::vector<Isometry2> all_face_isometries(const FlatFold2D& F,
                                                  const FaceDecomposition& D) {
    std::vector<Isometry2> isos(D.face_count());
    for (int f = 1; f < D.face_count(); ++f) isos[f] = face_isometry(F, D, f);
    return isos;
}

// Image of a material point under the folding, normalized so the root face
// maps by the identity.
inline Point2 folded_image(const FlatFold2D& F, const FaceDecomposition& D,
                           const std::vector<Isometry2>& isos, Point2 x) {
    int f = D.face_of(x);
    return isos[f < 0 ? 0 : f](x);
}

struct FlatFoldReport {
    bool valid = true;
    Fold1DViolation violation = Fold1DViolation::None;
    std::string detail;
    std::optional<std::array<Point2, 2>> transversal;
};

namespace detail {

inline bool loops_overlap(const std::vector<Point2>& A, const std::vector<Point2>& B) {
    int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            if (segments_cross_properly(A[i], A[(i + 1) % na], B[j], B[(j + 1) % nb]))
                return true;
    for (int i = 1; i + 1 < na; ++i) {
        Point2 t{(A[0].x + A[i].x + A[i + 1].x) / 3, (A[0].y + A[i].y + A[i + 1].y) / 3};
        if (loop_contains(A, t) && loop_contains(B, t)) return true;
    }
    for (int j = 1; j + 1 < nb; ++j) {
        Point2 t{(B[0].x + B[j].x + B[j + 1].x) / 3, (B[0].y + B[j].y + B[j + 1].y) / 3};
        if (loop_contains(B, t) && loop_contains(A, t)) return true;
    }
    return false;
}

// Overlap relation keyed by (min, max) face pair; value = the face on top.
using AboveMap = std::map<std::pair<int, int>, int>;

inline AboveMap above_map(const FlatFold2D& F, int faceCount, std::string* conflict) {
    AboveMap above;
    for (const OverlapBit& bit : F.overlaps) {
        if (bit.faceI < 0 || bit.faceI >= faceCount || bit.faceJ < 0 ||
            bit.faceJ >= faceCount || bit.faceI == bit.faceJ) {
            if (conflict) *conflict = "overlap order references an invalid face pair";
            return above;
        }
        auto key = std::minmax(bit.faceI, bit.faceJ);
        int top = bit.iAbove ? bit.faceI : bit.faceJ;
        auto [it, inserted] = above.insert({key, top});
        if (!inserted && it->second != top) {
            if (conflict)
                *conflict = "conflicting overlap orders for faces " +
                            std::to_string(key.first) + "," + std::to_string(key.second);
            return above;
        }
    }
    return above;
}

struct Restriction {
    bool ok = false;           // false: non-generic placement, retry elsewhere
    std::string reason;
    Folding1D folding;
    std::vector<int> pieceFace;
    bool orderCycle = false;   // overlap orders cyclic on a shared cell
    std::string missingPair;   // cell-sharing faces with no overlap order
    Point2 start{}, end{};     // material endpoints of the transversal polyline
};

// Faithful 1D restriction: follow the material polyline whose folded image
// lies on a straight line (the image of the seed direction at U). Along that
// line the folding restricts to a genuine Folding1D — crease positions and
// piece overlaps are actual image-plane facts, and for parallel chords the
// polyline is the straight material segment.
inline Restriction restrict_to_segment(const FlatFold2D& F, const FaceDecomposition& D,
                                       Point2 U, Point2 V, const AboveMap& above) {
    Restriction R;
    const Polygon& P = F.domain;
    double diam = P.diameter();
    double sEps = 1e-9 * (1 + diam), uEps = 1e-7, minPiece = 1e-6 * (1 + diam);

    Vec2 d = (V - U).normalized();
    Point2 probe = U + d * (1e-6 * (1 + diam));
    if (locate_point(P, probe) != PointLocation::INSIDE) {
        R.reason = "seed direction leaves the domain";
        return R;
    }
    int face = D.face_of(probe);
    if (face < 0) {
        R.reason = "seed starts on a chord";
        return R;
    }
    std::vector<Isometry2> isos = all_face_isometries(F, D);

    R.start = U;
    R.folding.startImage = 0;
    R.folding.startDirection = 1;
    R.pieceFace.push_back(face);
    Point2 x = U;
    double arc = 0;
    for (int piece = 0; piece < 200; ++piece) {
        double bestS = 1e300;
        int hitChord = -1, hitEdge = -1;
        bool grazing = false;
        auto consider = [&](Point2 A, Point2 B, int chord, int edge) {
            Vec2 ab = B - A;
            double den = d.cross(ab);
            if (std::fabs(den) < 1e-12 * ab.norm()) return;
            double s = (A - x).cross(ab) / den;
            double u = (A - x).cross(d) / den;
            if (s <= sEps || u < -uEps || u > 1 + uEps) return;
            if (s < bestS - sEps) {
                bestS = s;
                hitChord = chord;
                hitEdge = edge;
                grazing = u < uEps || u > 1 - uEps;
            } else if (s < bestS + sEps) {
                grazing = true;  // two hits at the same distance: vertex/endpoint
            }
        };
        for (int j = 0; j < static_cast<int>(F.chords.size()); ++j)
            consider(boundary_point(P, F.chords[j].a), boundary_point(P, F.chords[j].b), j, -1);
        for (int e = 0; e < P.size(); ++e) {
            auto [p, q] = P.edge(e);
            consider(p, q, -1, e);
        }
        if (bestS >= 1e300 || grazing || bestS < minPiece) {
            R.reason = "non-generic transversal walk";
            return R;
        }
        x = x + d * bestS;
        arc += bestS;
        if (hitChord < 0) break;  // reached the domain boundary
        int neighbor = face == hitChord + 1 ? D.parentFace[hitChord + 1] : hitChord + 1;
        if (face != hitChord + 1 && neighbor != face && D.parentFace[hitChord + 1] != face) {
            R.reason = "walk crossed a chord not bounding its face";
            return R;
        }
        face = neighbor;
        R.folding.folds.push_back(arc);
        R.pieceFace.push_back(face);
        // The image continues straight along the line while the travel
        // direction flips, so the material direction is the new face's
        // pullback of the reversed image direction.
        int sign = (static_cast<int>(R.pieceFace.size()) % 2 == 0) ? -1 : 1;
        const Isometry2& M0 = isos[R.pieceFace.front()];
        Vec2 imgDir{M0.a * (V.x - U.x) + M0.b * (V.y - U.y),
                    M0.c * (V.x - U.x) + M0.d * (V.y - U.y)};
        imgDir = imgDir.normalized() * static_cast<double>(sign);
        const Isometry2& M = isos[face];
        // Inverse of the orthogonal linear part is its transpose.
        d = Vec2{M.a * imgDir.x + M.c * imgDir.y, M.b * imgDir.x + M.d * imgDir.y};
    }
    if (R.pieceFace.size() >= 200) {
        R.reason = "transversal walk did not terminate";
        return R;
    }
    R.end = x;
    R.folding.length = arc;
    if (arc < minPiece || (!R.folding.folds.empty() && arc - R.folding.folds.back() < minPiece)) {
        R.reason = "degenerate final piece";
        return R;
    }

    Fold1DCells cells = fold1d_cells(R.folding);
    int k = R.folding.piece_count();
    std::vector<std::set<int>> below(k);  // edges: value -> key means key above value
    for (int m = 0; m < cells.cell_count(); ++m) {
        const auto& cov = cells.cover[m];
        for (size_t x = 0; x < cov.size(); ++x) {
            for (size_t y = x + 1; y < cov.size(); ++y) {
                int p = cov[x], q = cov[y];
                int fp = R.pieceFace[p], fq = R.pieceFace[q];
                if (fp == fq) continue;
                auto it = above.find(std::minmax(fp, fq));
                if (it == above.end()) {
                    if (R.missingPair.empty())
                        R.missingPair = "faces " + std::to_string(std::min(fp, fq)) + "," +
                                        std::to_string(std::max(fp, fq)) +
                                        " overlap on a transversal without an overlap order";
                    continue;
                }
                if (it->second == fp)
                    below[p].insert(q);
                else
                    below[q].insert(p);
            }
        }
    }
    // Global order for this transversal by Kahn's algorithm, smallest piece
    // first; a cycle means the overlap orders conflict on a shared cell.
    std::vector<int> indeg(k, 0), pos(k, -1);
    for (int p = 0; p < k; ++p)
        for (int q : below[p]) (void)q, ++indeg[p];
    std::vector<char> done(k, 0);
    for (int placed = 0; placed < k; ++placed) {
        int pick = -1;
        for (int p = 0; p < k; ++p)
            if (!done[p] && indeg[p] == 0) {
                pick = p;
                break;
            }
        if (pick < 0) {
            R.orderCycle = true;
            R.ok = true;
            return R;
        }
        pos[pick] = placed;
        done[pick] = 1;
        for (int p = 0; p < k; ++p)
            if (!done[p] && below[p].count(pick)) --indeg[p];
    }
    for (int m = 0; m < cells.cell_count(); ++m) {
        std::vector<int> order = cells.cover[m];
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pos[a] < pos[b]; });
        R.folding.stacking.push_back(std::move(order));
    }
    R.ok = true;
    return R;
}

}  // namespace detail

// Layer validity: faces with overlapping images must carry consistent overlap
// orders, and the induced 1D folding on one representative transversal per
// combinatorial class (pair of boundary arcs between chord endpoints), plus
// random extras, must be a valid Folding1D.
inline FlatFoldReport validate_flatfold(const FlatFold2D& F, int transversalsPerClass = 2,
                                        std::uint64_t seed = 0x5eedULL) {
    FlatFoldReport rep;
    FaceDecomposition D = face_decomposition(F);
    std::string conflict;
    detail::AboveMap above = detail::above_map(F, D.face_count(), &conflict);
    if (!conflict.empty()) {
        rep.valid = false;
        rep.violation = Fold1DViolation::BadStructure;
        rep.detail = conflict;
        return rep;
    }
    std::vector<Isometry2> isos = all_face_isometries(F, D);
    std::vector<std::vector<Point2>> images(D.face_count());
    for (int f = 0; f < D.face_count(); ++f)
        for (Point2 p : D.faces[f]) images[f].push_back(isos[f](p));
    auto requireBit = [&](int f, int g) -> bool {
        if (above.count(std::minmax(f, g))) return true;
        if (!detail::loops_overlap(images[f], images[g])) return true;
        rep.valid = false;
        rep.violation = Fold1DViolation::BadStructure;
        rep.detail = "missing overlap order for faces " + std::to_string(f) + "," +
                     std::to_string(g);
        return false;
    };
    for (int f = 0; f < D.face_count(); ++f)
        for (int g = f + 1; g < D.face_count(); ++g)
            if (!requireBit(f, g)) return rep;
    if (F.chords.empty()) return rep;

    std::vector<double> cuts;
    for (const FoldChord& ch : F.chords) {
        cuts.push_back(boundary_param(normalize_boundary_point(F.domain, ch.a)));
        cuts.push_back(boundary_param(normalize_boundary_point(F.domain, ch.b)));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    int n = F.domain.size(), narc = static_cast<int>(cuts.size());
    auto arcSample = [&](int a, double frac) {
        double lo = cuts[a];
        double hi = a + 1 < narc ? cuts[a + 1] : cuts[0] + n;
        double s = lo + (hi - lo) * frac;
        if (s >= n) s -= n;
        int e = static_cast<int>(std::floor(s));
        return boundary_point(F.domain, normalize_boundary_point(F.domain, {e, s - e}));
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.1, 0.9);
    for (int ai = 0; ai < narc; ++ai) {
        for (int aj = ai + 1; aj < narc; ++aj) {
            for (int repIdx = 0; repIdx <= transversalsPerClass; ++repIdx) {
                Point2 U, V;
                detail::Restriction R;
                bool placed = false;
                for (int attempt = 0; attempt < 8 && !placed; ++attempt) {
                    double fu = (repIdx == 0 && attempt == 0) ? 0.5 : ud(rng);
                    double fv = (repIdx == 0 && attempt == 0) ? 0.5 : ud(rng);
                    U = arcSample(ai, fu);
                    V = arcSample(aj, fv);
                    R = detail::restrict_to_segment(F, D, U, V, above);
                    placed = R.ok;
                }
                if (!placed) break;  // class has no generic transversal here
                if (R.orderCycle) {
                    rep.valid = false;
                    rep.violation = Fold1DViolation::InconsistentStacking;
                    rep.detail = "overlap orders cyclic on a shared cell";
                    rep.transversal = {R.start, R.end};
                    return rep;
                }
                if (!R.missingPair.empty()) {
                    rep.valid = false;
                    rep.violation = Fold1DViolation::BadStructure;
                    rep.detail = R.missingPair;
                    rep.transversal = {R.start, R.end};
                    return rep;
                }
                Fold1DReport r1 = validate_folding1d(R.folding);
                if (!r1.valid) {
                    rep.valid = false;
                    rep.violation = r1.violation;
                    rep.detail = "transversal restriction: " + r1.detail;
                    rep.transversal = {R.start, R.end};
                    return rep;
                }
            }
        }
    }
    return rep;
}

// Similarity of the spiral motion at scale i (in (0, 1]): rotation angle
// tan(theta) * ln i about the center.
inline Similarity similarity_at_scale(const SpiralParams& sp, double i) {
    return Similarity{sp.center, i, std::tan(sp.theta) * std::log(i)};
}

// Largest i at which the chord still meets the shrunk copy; chords through
// the center never vanish (threshold 0).
inline double chord_survival_threshold(const Polygon& P, const SpiralParams& sp, Point2 A,
                                       Point2 B) {
    double tol = kGeomEps * (1 + P.diameter());
    if (detail::point_segment_dist(sp.center, A, B) <= tol) return 0;
    auto meets = [&](double i) {
        auto Q = similarity_at_scale(sp, i).map(P.vertices());
        if (detail::loop_contains(Q, A) || detail::loop_contains(Q, B)) return true;
        int nq = static_cast<int>(Q.size());
        for (int e = 0; e < nq; ++e)
            if (segments_intersect(A, B, Q[e], Q[(e + 1) % nq])) return true;
        return false;
    };
    double lo = 1e-12, hi = 1;
    if (meets(lo)) return lo;
    for (int it = 0; it < 80; ++it) {
        double mid = (lo + hi) / 2;
        (meets(mid) ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

namespace detail {

// Preimages under the shrink at scale i of one chord clipped to the shrunk
// copy Q = s(P); one FoldChord per surviving connected component.
inline std::vector<FoldChord> pullback_chord(const Polygon& P, const std::vector<Point2>& Q,
                                             const Similarity& s, const SpiralParams& sp,
                                             double i, Point2 A, Point2 B) {
    double diam = P.diameter();
    int nq = static_cast<int>(Q.size());
    Vec2 abv = B - A;
    std::vector<double> cuts{0, 1};
    for (int e = 0; e < nq; ++e) {
        Point2 p = Q[e], q = Q[(e + 1) % nq];
        Vec2 pq = q - p;
        double den = abv.cross(pq);
        if (std::fabs(den) < 1e-14 * abv.norm() * pq.norm()) continue;
        double t = (p - A).cross(pq) / den;
        double u = (p - A).cross(abv) / den;
        if (t > 0 && t < 1 && u >= 0 && u <= 1) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<FoldChord> out;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
        if (cuts[c + 1] - cuts[c] < 1e-12) continue;
        Point2 mid = lerp(A, B, (cuts[c] + cuts[c + 1]) / 2);
        if (!loop_contains(Q, mid)) continue;
        auto pre = [&](Point2 z) {
            return sp.center + (z - sp.center).rotated(-s.angle) * (1.0 / i);
        };
        Point2 P0 = pre(lerp(A, B, cuts[c])), P1 = pre(lerp(A, B, cuts[c + 1]));
        if (dist(P0, P1) <= 1e-7 * (1 + diam)) continue;
        auto b0 = locate_on_boundary(P, P0, 1e-6 * (1 + diam));
        auto b1 = locate_on_boundary(P, P1, 1e-6 * (1 + diam));
        if (!b0 || !b1) throw std::logic_error("pulled-back chord endpoint off boundary");
        if (boundary_param(*b0) == boundary_param(*b1)) continue;
        out.push_back({*b0, *b1});
    }
    return out;
}

// Frame of the stage-1 conjugation at scale i: chords are the preimages under
// the shrink of the original chords clipped to the shrunk copy; overlap
// orders are inherited from the originating faces.
inline FlatFold2D stage1_frame(const FlatFold2D& F, const FaceDecomposition& D,
                               const SpiralParams& sp, double i) {
    if (i == 1) return F;
    const Polygon& P = F.domain;
    Similarity s = similarity_at_scale(sp, i);
    auto Q = s.map(P.vertices());

    FlatFold2D g;
    g.domain = P;
    for (const FoldChord& ch : F.chords) {
        Point2 A = boundary_point(P, ch.a), B = boundary_point(P, ch.b);
        for (const FoldChord& piece : pullback_chord(P, Q, s, sp, i, A, B))
            g.chords.push_back(piece);
    }
    if (g.chords.empty()) return g;

    FaceDecomposition Dg = face_decomposition(g);
    AboveMap above = above_map(F, D.face_count(), nullptr);
    std::vector<int> orig(Dg.face_count());
    for (int f = 0; f < Dg.face_count(); ++f)
        orig[f] = D.face_of(s(loop_interior_point(Dg.faces[f])));
    for (int f = 0; f < Dg.face_count(); ++f) {
        for (int h = f + 1; h < Dg.face_count(); ++h) {
            if (orig[f] < 0 || orig[h] < 0 || orig[f] == orig[h]) continue;
            auto it = above.find(std::minmax(orig[f], orig[h]));
            if (it == above.end()) continue;
            g.overlaps.push_back({f, h, it->second == orig[f]});
        }
    }
    return g;
}

inline std::vector<Point2> motion_sample_points(const Polygon& P) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& v : P.vertices()) {
        xmin = std::min(xmin, v.x), xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y), ymax = std::max(ymax, v.y);
    }
    std::vector<Point2> pts;
    double margin = 1e-5 * (1 + P.diameter());
    for (int a = 0; a <= 8; ++a) {
        for (int b = 0; b <= 8; ++b) {
            Point2 q{xmin + (xmax - xmin) * a / 8.0, ymin + (ymax - ymin) * b / 8.0};
            if (locate_point(P, q) == PointLocation::INSIDE &&
                distance_to_boundary(P, q) > margin)
                pts.push_back(q);
        }
    }
    if (pts.empty()) pts.push_back(P.centroid_of_vertices());
    return pts;
}

inline std::vector<Point2> frame_images(const FlatFold2D& frame,
                                        const std::vector<Point2>& pts) {
    FaceDecomposition D = face_decomposition(frame);
    std::vector<Isometry2> isos = all_face_isometries(frame, D);
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (Point2 q : pts) out.push_back(folded_image(frame, D, isos, q));
    return out;
}

}  // namespace detail

// Translate the single fold chord parallel to itself toward the side with
// less material until it leaves through the boundary; the folded flap
// shortens and the final frame is chordless.
inline Motion2D roll_fold_to_boundary(const FlatFold2D& F, int chordId, int steps) {
    if (F.chords.size() != 1) throw MultipleChordsError();
    if (chordId != 0) throw std::invalid_argument("chordId out of range");
    if (steps < 2) throw std::invalid_argument("roll_fold_to_boundary requires steps >= 2");
    const Polygon& P = F.domain;
    FaceDecomposition D = face_decomposition(F);
    Point2 A = boundary_point(P, F.chords[0].a), B = boundary_point(P, F.chords[0].b);
    Vec2 dir = (B - A).normalized();
    Vec2 nToChild = dir.perp();
    if (nToChild.dot(detail::loop_interior_point(D.faces[1]) - A) < 0) nToChild = -nToChild;

    double a0 = std::fabs(detail::loop_area(D.faces[0]));
    double a1 = std::fabs(detail::loop_area(D.faces[1]));
    int flapFace = a1 <= a0 ? 1 : 0;  // tie rolls into the chord's own face
    Vec2 n = flapFace == 1 ? nToChild : -nToChild;

    std::string conflict;
    detail::AboveMap above = detail::above_map(F, 2, &conflict);
    auto bit = above.find({0, 1});
    if (!conflict.empty() || bit == above.end())
        throw std::invalid_argument("roll_fold_to_boundary needs the overlap order of the two "
                                    "faces");
    bool flapAbove = bit->second == flapFace;

    double maxOff = 0;
    for (auto& v : P.vertices()) maxOff = std::max(maxOff, n.dot(v - A));

    Motion2D M;
    for (int k = 0; k < steps; ++k) {
        double t = static_cast<double>(k) / (steps - 1);
        M.params.push_back({2, t});
        if (k == 0) {
            M.frames.push_back(F);
            continue;
        }
        double off = t * maxOff;
        FlatFold2D g;
        g.domain = P;
        if (k == steps - 1) {
            M.frames.push_back(g);
            continue;
        }
        Point2 O = A + n * off;
        std::vector<std::tuple<double, int, double>> hits;  // (s along dir, edge, u)
        for (int e = 0; e < P.size(); ++e) {
            auto [p, q] = P.edge(e);
            Vec2 pq = q - p;
            double den = dir.cross(pq);
            if (std::fabs(den) < 1e-14 * pq.norm()) continue;
            double sPar = (p - O).cross(pq) / den;
            double u = (p - O).cross(dir) / den;
            if (u >= 0 && u < 1) hits.push_back({sPar, e, u});
        }
        std::sort(hits.begin(), hits.end());
        for (size_t h = 0; h + 1 < hits.size(); ++h) {
            auto [s0, e0, u0] = hits[h];
            auto [s1, e1, u1] = hits[h + 1];
            if (s1 - s0 < 1e-9 * (1 + P.diameter())) continue;
            Point2 mid = O + dir * ((s0 + s1) / 2);
            if (locate_point(P, mid) != PointLocation::INSIDE) continue;
            g.chords.push_back({normalize_boundary_point(P, {e0, u0}),
                                normalize_boundary_point(P, {e1, u1})});
        }
        if (g.chords.empty()) {
            M.frames.push_back(g);
            continue;
        }
        FaceDecomposition Dg = face_decomposition(g);
        std::vector<char> onFlap(Dg.face_count(), 0);
        for (int f = 0; f < Dg.face_count(); ++f)
            onFlap[f] = n.dot(detail::loop_interior_point(Dg.faces[f]) - O) > 0;
        for (int f = 0; f < Dg.face_count(); ++f)
            for (int h2 = f + 1; h2 < Dg.face_count(); ++h2)
                if (onFlap[f] != onFlap[h2])
                    g.overlaps.push_back({f, h2, onFlap[f] ? flapAbove : !flapAbove});
        M.frames.push_back(g);
    }
    return M;
}

namespace detail {

// Angular link at a boundary center c: the chords ending at c fold the
// interval of interior directions, a Folding1D over the interior angle.
struct AngularLink {
    Folding1D folding;
    Point2 c;
    double angStart = 0;  // direction of the boundary leaving c, ccw reference
    double theta = 0;     // interior angle at c
};

inline double normalize_angle(double a) {
    while (a <= 0) a += 2 * M_PI;
    while (a > 2 * M_PI) a -= 2 * M_PI;
    return a;
}

inline AngularLink build_angular_link(const FlatFold2D& F, const FaceDecomposition& D,
                                      Point2 c) {
    const Polygon& P = F.domain;
    double tol = 1e-6 * (1 + P.diameter());
    auto bp = locate_on_boundary(P, c, tol);
    if (!bp) throw CenterOnChordInteriorError();
    AngularLink L;
    L.c = c;
    if (bp->t > 0) {
        auto [a, b] = P.edge(bp->edge);
        L.angStart = std::atan2(b.y - a.y, b.x - a.x);
        L.theta = M_PI;
    } else {
        int v = bp->edge;
        Point2 prev = P.vertex(v - 1), here = P.vertex(v), next = P.vertex(v + 1);
        L.angStart = std::atan2(next.y - here.y, next.x - here.x);
        double angIn = std::atan2(prev.y - here.y, prev.x - here.x);
        L.theta = normalize_angle(angIn - L.angStart);
    }

    std::vector<double> folds;
    for (const FoldChord& ch : F.chords) {
        Point2 A = boundary_point(P, ch.a), B = boundary_point(P, ch.b);
        Point2 far;
        if (dist(A, c) <= tol)
            far = B;
        else if (dist(B, c) <= tol)
            far = A;
        else
            throw CenterOnChordInteriorError();
        double alpha = normalize_angle(std::atan2(far.y - c.y, far.x - c.x) - L.angStart);
        if (alpha >= L.theta) throw CenterOnChordInteriorError();
        folds.push_back(alpha);
    }
    std::sort(folds.begin(), folds.end());
    for (size_t j = 0; j + 1 < folds.size(); ++j)
        if (folds[j + 1] - folds[j] < 1e-9)
            throw std::invalid_argument("coincident chords through the center");

    L.folding.length = L.theta;
    L.folding.folds = folds;
    L.folding.startImage = 0;
    L.folding.startDirection = 1;

    // Sector faces and induced stacking from the overlap orders.
    std::vector<double> bounds{0};
    for (double a : folds) bounds.push_back(a);
    bounds.push_back(L.theta);
    double r = 0.05 * (1 + P.diameter());
    std::vector<int> sectorFace(bounds.size() - 1, -1);
    for (size_t p = 0; p + 1 < bounds.size(); ++p) {
        double amid = L.angStart + (bounds[p] + bounds[p + 1]) / 2;
        for (double rr = r; rr > 1e-9; rr /= 2) {
            Point2 q = c + Vec2{std::cos(amid), std::sin(amid)} * rr;
            if (locate_point(P, q) == PointLocation::INSIDE) {
                sectorFace[p] = D.face_of(q);
                if (sectorFace[p] >= 0) break;
            }
        }
        if (sectorFace[p] < 0) throw std::logic_error("no sample point in an angular sector");
    }
    AboveMap above = above_map(F, D.face_count(), nullptr);
    Fold1DCells cells = fold1d_cells(L.folding);
    int k = L.folding.piece_count();
    std::vector<std::set<int>> belowSet(k);
    for (int m = 0; m < cells.cell_count(); ++m) {
        const auto& cov = cells.cover[m];
        for (size_t x = 0; x < cov.size(); ++x) {
            for (size_t y = x + 1; y < cov.size(); ++y) {
                int p = cov[x], q = cov[y];
                auto it = above.find(std::minmax(sectorFace[p], sectorFace[q]));
                if (it == above.end()) continue;
                if (it->second == sectorFace[p])
                    belowSet[p].insert(q);
                else
                    belowSet[q].insert(p);
            }
        }
    }
    std::vector<int> pos(k, -1);
    std::vector<char> done(k, 0);
    for (int placed = 0; placed < k; ++placed) {
        int pick = -1;
        for (int p = 0; p < k && pick < 0; ++p) {
            if (done[p]) continue;
            bool free = true;
            for (int q = 0; q < k; ++q)
                if (!done[q] && belowSet[p].count(q)) free = false;
            if (free) pick = p;
        }
        if (pick < 0) throw std::invalid_argument("cyclic overlap orders around the center");
        pos[pick] = placed;
        done[pick] = 1;
    }
    for (int m = 0; m < cells.cell_count(); ++m) {
        std::vector<int> order = cells.cover[m];
        std::sort(order.begin(), order.end(), [&](int a, int b) { return pos[a] < pos[b]; });
        L.folding.stacking.push_back(std::move(order));
    }
    return L;
}

// Lift a 1D frame of the angular link back to a flat folding: fold angles
// become rays from c, chord endpoints the rays' boundary hits.
inline FlatFold2D lift_link_frame(const Polygon& P, const AngularLink& L, const Folding1D& g) {
    FlatFold2D out;
    out.domain = P;
    double tol = 1e-6 * (1 + P.diameter());
    auto cb = locate_on_boundary(P, L.c, tol);
    if (!cb) throw CenterOnChordInteriorError();
    for (double alpha : g.folds) {
        double a = L.angStart + alpha;
        Vec2 dir{std::cos(a), std::sin(a)};
        double bestS = 1e300;
        BoundaryPoint hit{};
        for (int e = 0; e < P.size(); ++e) {
            auto [p, q] = P.edge(e);
            Vec2 pq = q - p;
            double den = dir.cross(pq);
            if (std::fabs(den) < 1e-14 * pq.norm()) continue;
            double s = (p - L.c).cross(pq) / den;
            double u = (p - L.c).cross(dir) / den;
            if (s > tol && u >= 0 && u < 1 && s < bestS) {
                bestS = s;
                hit = normalize_boundary_point(P, {e, u});
            }
        }
        if (bestS >= 1e300) throw std::logic_error("link ray misses the boundary");
        out.chords.push_back({*cb, hit});
    }
    if (out.chords.empty()) return out;

    FaceDecomposition Dg = face_decomposition(out);
    std::vector<double> bounds{0};
    for (double a : g.folds) bounds.push_back(a);
    bounds.push_back(L.theta);
    std::vector<int> sectorFace(bounds.size() - 1, -1);
    for (size_t p = 0; p + 1 < bounds.size(); ++p) {
        double amid = L.angStart + (bounds[p] + bounds[p + 1]) / 2;
        for (double rr = 0.05 * (1 + P.diameter()); rr > 1e-9; rr /= 2) {
            Point2 q = L.c + Vec2{std::cos(amid), std::sin(amid)} * rr;
            if (locate_point(P, q) == PointLocation::INSIDE) {
                sectorFace[p] = Dg.face_of(q);
                if (sectorFace[p] >= 0) break;
            }
        }
        if (sectorFace[p] < 0) throw std::logic_error("no sample point in an angular sector");
    }
    Fold1DCells cells = fold1d_cells(g);
    std::set<std::pair<int, int>> seen;
    for (int m = 0; m < cells.cell_count(); ++m) {
        const auto& order = g.stacking[m];
        for (size_t x = 0; x < order.size(); ++x) {
            for (size_t y = x + 1; y < order.size(); ++y) {
                int fBelow = sectorFace[order[x]], fAbove = sectorFace[order[y]];
                if (fBelow == fAbove) continue;
                auto key = std::minmax(fBelow, fAbove);
                if (!seen.insert(key).second) continue;
                out.overlaps.push_back({fAbove, fBelow, true});
            }
        }
    }
    return out;
}

}  // namespace detail

// Theorem-3 unfolding. Stage 1 conjugates by the verified spiral shrinking:
// every chord not through the center sweeps outward and leaves through the
// boundary. Stage 2 removes the chords left through the center: none (done),
// one (roll it to the boundary), or several ending at a boundary center
// (unfold the angular link as a Folding1D and lift each frame). Stage-1
// i-values are arc-equalized in sup norm like unfold_motion_1d.
inline Motion2D unfold_motion_flatfold(const FlatFold2D& F, const SpiralParams& sp, int steps) {
    if (steps < 2) throw std::invalid_argument("unfold_motion_flatfold requires steps >= 2");
    const Polygon& P = F.domain;
    double tol = kGeomEps * (1 + P.diameter());
    FaceDecomposition D = face_decomposition(F);

    Motion2D M;
    if (F.chords.empty()) {
        for (int k = 0; k < steps; ++k) {
            double i = std::exp(std::log(0.5) * k / (steps - 1));
            M.params.push_back({1, i});
            M.frames.push_back(F);
        }
        return M;
    }

    double sMin = 1;
    bool anyAway = false;
    for (const FoldChord& ch : F.chords) {
        Point2 A = boundary_point(P, ch.a), B = boundary_point(P, ch.b);
        if (detail::point_segment_dist(sp.center, A, B) <= tol) continue;
        anyAway = true;
        sMin = std::min(sMin, chord_survival_threshold(P, sp, A, B));
    }

    if (anyAway) {
        double iEnd = sMin / 2, lnEnd = std::log(iEnd);
        std::vector<Point2> pts = detail::motion_sample_points(P);
        int fine = std::max(4 * steps, 128);
        std::vector<double> cum(fine, 0.0);
        std::vector<Point2> prev = detail::frame_images(F, pts);
        for (int k = 1; k < fine; ++k) {
            double i = std::exp(lnEnd * k / (fine - 1));
            auto curr = detail::frame_images(detail::stage1_frame(F, D, sp, i), pts);
            double step = 0;
            for (size_t s = 0; s < pts.size(); ++s)
                step = std::max(step, dist(curr[s], prev[s]));
            cum[k] = cum[k - 1] + step;
            prev.swap(curr);
        }
        double total = cum[fine - 1];
        std::vector<int> idx(steps);
        idx[0] = 0;
        idx[steps - 1] = fine - 1;
        for (int m = 1; m < steps - 1; ++m) {
            int k;
            if (total > 0) {
                k = static_cast<int>(std::lower_bound(cum.begin(), cum.end(),
                                                      total * m / (steps - 1)) -
                                     cum.begin());
            } else {
                k = static_cast<int>(std::llround(double(m) * (fine - 1) / (steps - 1)));
            }
            idx[m] = std::min(std::max(k, idx[m - 1] + 1), fine - 1 - (steps - 1 - m));
        }
        for (int m = 0; m < steps; ++m) {
            double i = idx[m] == 0 ? 1.0 : std::exp(lnEnd * idx[m] / (fine - 1));
            M.params.push_back({1, i});
            M.frames.push_back(detail::stage1_frame(F, D, sp, i));
        }
    } else {
        M.params.push_back({1, 1});
        M.frames.push_back(F);
    }

    FlatFold2D last = M.frames.back();
    if (!last.chords.empty()) {
        if (last.chords.size() == 1) {
            Motion2D roll = roll_fold_to_boundary(last, 0, steps);
            for (size_t k = 1; k < roll.frames.size(); ++k) {
                M.params.push_back(roll.params[k]);
                M.frames.push_back(roll.frames[k]);
            }
        } else {
            FaceDecomposition Dl = face_decomposition(last);
            detail::AngularLink L = detail::build_angular_link(last, Dl, sp.center);
            Fold1DReport linkRep = validate_folding1d(L.folding);
            if (!linkRep.valid)
                throw InvalidFrameError(static_cast<int>(M.frames.size()) - 1,
                                        "angular link invalid: " + linkRep.detail);
            Motion1D m1 = unfold_motion_1d(L.folding, std::nullopt, steps);
            for (int k = static_cast<int>(m1.frames.size()) - 2; k >= 0; --k) {
                M.params.push_back({2, m1.params[k]});
                M.frames.push_back(detail::lift_link_frame(P, L, m1.frames[k]));
            }
        }
    }

    for (size_t k = 0; k < M.frames.size(); ++k) {
        FlatFoldReport r = validate_flatfold(M.frames[k], 1, 0x5eedULL + k);
        if (!r.valid) throw InvalidFrameError(static_cast<int>(k), r.detail);
    }
    return M;
}

}  // namespace unfold
