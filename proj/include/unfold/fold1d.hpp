// Flat foldings of a segment [0, length]: piecewise-isometric images with a
// per-cell layer order, validity checking, and the scale-conjugation
// unfolding motion.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unfold/geometry.hpp"

namespace unfold {

// Pieces are the closed material intervals between consecutive fold points
// (piece j lies between bound j and bound j+1, bounds = {0, folds..., length}).
// `stacking` lists, for every cell of the image subdivision in left-to-right
// order, the covering pieces from bottom to top.
struct Folding1D {
    double length = 1;
    std::vector<double> folds;
    double startImage = 0;
    int startDirection = 1;
    std::vector<std::vector<int>> stacking;

    int piece_count() const { return static_cast<int>(folds.size()) + 1; }
};

struct AtFoldPointError : std::runtime_error {
    double position;
    explicit AtFoldPointError(double pos)
        : std::runtime_error("queried point is a fold point; layer is ambiguous"), position(pos) {}
};

struct BasePointOnFoldError : std::invalid_argument {
    BasePointOnFoldError() : std::invalid_argument("base point must not be a fold point") {}
};

enum class Fold1DViolation {
    None,
    BadStructure,
    InconsistentStacking,
    CreasePenetration,
    NonNested,
};

struct Fold1DReport {
    bool valid = false;
    Fold1DViolation violation = Fold1DViolation::None;
    std::string detail;
    int cellWitness = -1;
    int foldWitness = -1;
};

inline std::vector<double> fold1d_bounds(const Folding1D& f) {
    std::vector<double> b;
    b.reserve(f.folds.size() + 2);
    b.push_back(0);
    b.insert(b.end(), f.folds.begin(), f.folds.end());
    b.push_back(f.length);
    return b;
}

// Image positions of every bound, by accumulation with direction flips.
inline std::vector<double> fold1d_bound_images(const Folding1D& f) {
    auto b = fold1d_bounds(f);
    std::vector<double> pos(b.size());
    pos[0] = f.startImage;
    int dir = f.startDirection;
    for (size_t j = 0; j + 1 < b.size(); ++j) {
        pos[j + 1] = pos[j] + dir * (b[j + 1] - b[j]);
        dir = -dir;
    }
    return pos;
}

inline double fold1d_position(const Folding1D& f, double x) {
    auto b = fold1d_bounds(f);
    auto pos = fold1d_bound_images(f);
    int j = static_cast<int>(std::upper_bound(f.folds.begin(), f.folds.end(), x) -
                             f.folds.begin());
    int dir = (j % 2 == 0) ? f.startDirection : -f.startDirection;
    return pos[j] + dir * (x - b[j]);
}

// Image interval (lo, hi) of piece j.
inline std::pair<double, double> fold1d_piece_image(const Folding1D& f, int j) {
    auto pos = fold1d_bound_images(f);
    return {std::min(pos[j], pos[j + 1]), std::max(pos[j], pos[j + 1])};
}

// Image subdivision: cluster representatives of the bound images (tolerance
// absorbs accumulation roundoff) and, per cell, the covering pieces in
// material order.
struct Fold1DCells {
    std::vector<double> breaks;
    std::vector<std::vector<int>> cover;
    double tol = 0;

    int cell_count() const { return static_cast<int>(cover.size()); }

    // Cell index containing position z (half-open convention at breaks).
    int cell_of(double z) const {
        int c = static_cast<int>(std::upper_bound(breaks.begin(), breaks.end(), z) -
                                 breaks.begin()) - 1;
        return std::clamp(c, 0, cell_count() - 1);
    }

    // Index of the break cluster nearest to z, or -1 if none within tol.
    int break_index(double z) const {
        for (size_t i = 0; i < breaks.size(); ++i) {
            if (std::fabs(breaks[i] - z) <= tol) return static_cast<int>(i);
        }
        return -1;
    }
};

inline Fold1DCells fold1d_cells(const Folding1D& f) {
    Fold1DCells cells;
    cells.tol = kGeomEps * (1 + f.length + std::fabs(f.startImage));
    auto pos = fold1d_bound_images(f);
    std::vector<double> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    for (double v : sorted) {
        if (cells.breaks.empty() || v - cells.breaks.back() > cells.tol) cells.breaks.push_back(v);
    }
    int ncells = static_cast<int>(cells.breaks.size()) - 1;
    cells.cover.assign(std::max(ncells, 0), {});
    for (int j = 0; j < f.piece_count(); ++j) {
        auto [lo, hi] = fold1d_piece_image(f, j);
        for (int m = 0; m < ncells; ++m) {
            if (lo <= cells.breaks[m] + cells.tol && hi >= cells.breaks[m + 1] - cells.tol)
                cells.cover[m].push_back(j);
        }
    }
    return cells;
}

namespace detail {

inline int rank_of(const std::vector<int>& order, int piece) {
    auto it = std::find(order.begin(), order.end(), piece);
    return it == order.end() ? -1 : static_cast<int>(it - order.begin());
}

}  // namespace detail

inline Fold1DReport validate_folding1d(const Folding1D& f) {
    Fold1DReport rep;
    auto fail = [&](Fold1DViolation v, std::string d, int cell = -1, int fold = -1) {
        rep.valid = false;
        rep.violation = v;
        rep.detail = std::move(d);
        rep.cellWitness = cell;
        rep.foldWitness = fold;
        return rep;
    };
    if (!(f.length > 0)) return fail(Fold1DViolation::BadStructure, "length must be positive");
    if (f.startDirection != 1 && f.startDirection != -1)
        return fail(Fold1DViolation::BadStructure, "startDirection must be +1 or -1");
    for (size_t j = 0; j < f.folds.size(); ++j) {
        bool inc = j == 0 || f.folds[j] > f.folds[j - 1];
        if (!inc || f.folds[j] <= 0 || f.folds[j] >= f.length)
            return fail(Fold1DViolation::BadStructure,
                        "folds must be strictly increasing inside (0, length)", -1,
                        static_cast<int>(j));
    }

    Fold1DCells cells = fold1d_cells(f);
    if (static_cast<int>(f.stacking.size()) != cells.cell_count())
        return fail(Fold1DViolation::BadStructure,
                    "stacking must list one order per image cell (" +
                        std::to_string(cells.cell_count()) + " cells)");
    for (int m = 0; m < cells.cell_count(); ++m) {
        std::vector<int> got = f.stacking[m], want = cells.cover[m];
        std::sort(got.begin(), got.end());
        if (got != want)
            return fail(Fold1DViolation::BadStructure,
                        "cell order must be a permutation of the covering pieces", m);
    }

    // Shared pieces keep their relative order in adjacent cells.
    for (int m = 0; m + 1 < cells.cell_count(); ++m) {
        const auto& a = f.stacking[m];
        const auto& b = f.stacking[m + 1];
        for (size_t i = 0; i < a.size(); ++i) {
            for (size_t j = i + 1; j < a.size(); ++j) {
                int ri = detail::rank_of(b, a[i]), rj = detail::rank_of(b, a[j]);
                if (ri >= 0 && rj >= 0 && ri > rj)
                    return fail(Fold1DViolation::InconsistentStacking,
                                "pieces " + std::to_string(a[i]) + " and " + std::to_string(a[j]) +
                                    " swap order between cells " + std::to_string(m) + " and " +
                                    std::to_string(m + 1),
                                m + 1);
            }
        }
    }

    // Crease conditions. Fold j joins pieces j and j+1; both lie on one side
    // of the crease image q (the folded side).
    auto pos = fold1d_bound_images(f);
    struct Crease {
        int fold;
        int cell;
        int rLo, rHi;
    };
    std::vector<Crease> creases;
    for (size_t j = 0; j < f.folds.size(); ++j) {
        double q = pos[j + 1];
        auto [lo, hi] = fold1d_piece_image(f, static_cast<int>(j));
        bool leftSide = lo < q - cells.tol;  // pieces extend left of q
        int qi = cells.break_index(q);
        int cell = leftSide ? qi - 1 : qi;
        if (cell < 0 || cell >= cells.cell_count())
            return fail(Fold1DViolation::BadStructure, "crease image outside subdivision", -1,
                        static_cast<int>(j));
        const auto& order = f.stacking[cell];
        int r1 = detail::rank_of(order, static_cast<int>(j));
        int r2 = detail::rank_of(order, static_cast<int>(j) + 1);
        if (r1 < 0 || r2 < 0)
            return fail(Fold1DViolation::BadStructure, "joined pieces missing from crease cell",
                        cell, static_cast<int>(j));
        int rLo = std::min(r1, r2), rHi = std::max(r1, r2);
        for (int r = rLo + 1; r < rHi; ++r) {
            int piece = order[r];
            auto [plo, phi] = fold1d_piece_image(f, piece);
            // Extending strictly beyond the crease point always penetrates.
            if (leftSide ? phi > q + cells.tol : plo < q - cells.tol)
                return fail(Fold1DViolation::CreasePenetration,
                            "piece " + std::to_string(piece) + " crosses the crease of fold " +
                                std::to_string(j),
                            cell, static_cast<int>(j));
            // A piece between the joined layers reaching exactly q with a
            // free material end penetrates too; reaching q with its own
            // crease defers to the nesting condition.
            double farEnd = leftSide ? phi : plo;
            if (std::fabs(farEnd - q) <= cells.tol) {
                // Which material bound maps to the far image end?
                bool boundLoIsFar = std::fabs(pos[piece] - farEnd) <= cells.tol;
                int boundIdx = boundLoIsFar ? piece : piece + 1;
                bool freeEnd = boundIdx == 0 || boundIdx == f.piece_count();
                if (freeEnd)
                    return fail(Fold1DViolation::CreasePenetration,
                                "free end of piece " + std::to_string(piece) +
                                    " pokes through the crease of fold " + std::to_string(j),
                                cell, static_cast<int>(j));
            }
        }
        creases.push_back({static_cast<int>(j), cell, rLo, rHi});
    }

    // Creases sharing an image point and side must be properly nested.
    for (size_t a = 0; a < creases.size(); ++a) {
        for (size_t b = a + 1; b < creases.size(); ++b) {
            if (creases[a].cell != creases[b].cell) continue;
            double qa = pos[creases[a].fold + 1], qb = pos[creases[b].fold + 1];
            if (std::fabs(qa - qb) > cells.tol) continue;
            int alo = creases[a].rLo, ahi = creases[a].rHi;
            int blo = creases[b].rLo, bhi = creases[b].rHi;
            bool nested = (alo < blo && bhi < ahi) || (blo < alo && ahi < bhi);
            bool disjoint = ahi < blo || bhi < alo;
            if (!nested && !disjoint)
                return fail(Fold1DViolation::NonNested,
                            "creases of folds " + std::to_string(creases[a].fold) + " and " +
                                std::to_string(creases[b].fold) + " interleave",
                            creases[a].cell, creases[b].fold);
        }
    }

    rep.valid = true;
    return rep;
}

// Evaluate the folding at a material point: image position and the layer
// rank inside the containing cell. Throws at fold points (layer ambiguous).
inline std::pair<double, int> image_of(const Folding1D& f, double x) {
    if (x < 0 || x > f.length) throw std::invalid_argument("material point outside [0, length]");
    for (double fp : f.folds) {
        if (x == fp) throw AtFoldPointError(fold1d_position(f, x));
    }
    double z = fold1d_position(f, x);
    int j = static_cast<int>(std::upper_bound(f.folds.begin(), f.folds.end(), x) -
                             f.folds.begin());
    Fold1DCells cells = fold1d_cells(f);
    int m = cells.cell_of(z);
    int layer = detail::rank_of(f.stacking.empty() ? cells.cover[m] : f.stacking[m], j);
    return {z, layer};
}

struct Motion1D {
    std::vector<double> params;      // ascending i-values, last = 1
    std::vector<Folding1D> frames;   // frames[k] realizes params[k]
};

// i below which fold j has left the conjugation window about base point p.
inline double fold_survival_threshold(const Folding1D& f, double p, int j) {
    double x = f.folds[j];
    return x < p ? (p - x) / p : (x - p) / (f.length - p);
}

inline double default_base_point(const Folding1D& f) {
    auto b = fold1d_bounds(f);
    double bestLen = -1, best = f.length / 2;
    for (size_t j = 0; j + 1 < b.size(); ++j) {
        if (b[j + 1] - b[j] > bestLen) {
            bestLen = b[j + 1] - b[j];
            best = (b[j] + b[j + 1]) / 2;
        }
    }
    return best;
}

namespace detail {

// Frame of the conjugated family: shrink the material by i about p, apply f,
// expand the image by 1/i about f(p).
inline Folding1D fold1d_frame(const Folding1D& f, double p, double i) {
    if (i == 1) return f;
    double fp = fold1d_position(f, p);
    double wlo = p * (1 - i);
    Folding1D g;
    g.length = f.length;
    int firstPiece =
        static_cast<int>(std::upper_bound(f.folds.begin(), f.folds.end(), wlo) - f.folds.begin());
    for (size_t j = 0; j < f.folds.size(); ++j) {
        if (fold_survival_threshold(f, p, static_cast<int>(j)) < i)
            g.folds.push_back(p + (f.folds[j] - p) / i);
    }
    g.startImage = (fold1d_position(f, wlo) - fp) / i + fp;
    g.startDirection = (firstPiece % 2 == 0) ? f.startDirection : -f.startDirection;

    // Induced stacking: each frame cell maps affinely into an original cell;
    // restrict that cell's order to the surviving pieces.
    Fold1DCells gc = fold1d_cells(g);
    Fold1DCells oc = fold1d_cells(f);
    for (int m = 0; m < gc.cell_count(); ++m) {
        double zMid = (gc.breaks[m] + gc.breaks[m + 1]) / 2;
        double w = fp + i * (zMid - fp);
        const auto& origOrder = f.stacking[oc.cell_of(w)];
        std::vector<int> order;
        for (int piece : origOrder) {
            int framePiece = piece - firstPiece;
            if (framePiece >= 0 && framePiece < g.piece_count()) {
                auto it = std::find(gc.cover[m].begin(), gc.cover[m].end(), framePiece);
                if (it != gc.cover[m].end()) order.push_back(framePiece);
            }
        }
        if (order.size() != gc.cover[m].size())
            throw std::logic_error("induced stacking does not cover a frame cell");
        g.stacking.push_back(std::move(order));
    }
    return g;
}

}  // namespace detail

// Lemma-4 unfolding: conjugate f by shrinking toward basePoint. Frames are
// reported with ascending i (the motion plays them last-to-first); the frame
// at i = 1 is the input and the frame at the smallest i has no folds.
//
// A plain geometric i-schedule concentrates nearly all of the motion near the
// small-i end whenever a fold lies close to the base point, so consecutive
// frames can jump by much more than their fair share of the total travel.
// Instead the i-values are chosen by equalizing sup-norm arc length along a
// fine geometric grid, which keeps every step near total / (steps - 1).
inline Motion1D unfold_motion_1d(const Folding1D& f, std::optional<double> basePoint, int steps) {
    if (steps < 2) throw std::invalid_argument("unfold_motion_1d requires steps >= 2");
    double p = basePoint.value_or(default_base_point(f));
    for (double fp : f.folds) {
        if (p == fp) throw BasePointOnFoldError();
    }
    if (p < 0 || p > f.length) throw std::invalid_argument("base point outside [0, length]");

    double sMin = 1;
    for (size_t j = 0; j < f.folds.size(); ++j)
        sMin = std::min(sMin, fold_survival_threshold(f, p, static_cast<int>(j)));
    double iEnd = f.folds.empty() ? 0.5 : sMin / 2;
    double lnEnd = std::log(iEnd);

    int fine = std::max(16 * steps, 512);
    const int nSamples = 64;
    std::vector<double> cum(fine, 0.0), prev(nSamples + 1), curr(nSamples + 1);
    for (int s = 0; s <= nSamples; ++s)
        prev[s] = fold1d_position(f, f.length * s / nSamples);
    for (int k = 1; k < fine; ++k) {
        double i = std::exp(lnEnd * k / (fine - 1));
        Folding1D g = detail::fold1d_frame(f, p, i);
        double step = 0;
        for (int s = 0; s <= nSamples; ++s) {
            curr[s] = fold1d_position(g, f.length * s / nSamples);
            step = std::max(step, std::fabs(curr[s] - prev[s]));
        }
        cum[k] = cum[k - 1] + step;
        prev.swap(curr);
    }

    std::vector<int> idx(steps);
    idx[0] = 0;
    idx[steps - 1] = fine - 1;
    double total = cum[fine - 1];
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

    Motion1D motion;
    for (int m = steps - 1; m >= 0; --m) {
        double i = idx[m] == 0 ? 1.0 : std::exp(lnEnd * idx[m] / (fine - 1));
        motion.params.push_back(i);
        motion.frames.push_back(detail::fold1d_frame(f, p, i));
    }
    return motion;
}

}  // namespace unfold
