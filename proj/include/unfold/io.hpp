// JSON (de)serialization for all public types, the theta-margin CSV, and a
// small SVG rendering of flat foldings. Every document carries "format": 1.
#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "unfold/embed3d.hpp"
#include "unfold/flatfold2d.hpp"
#include "unfold/fold1d.hpp"
#include "unfold/kernel_spiral.hpp"
#include "unfold/region.hpp"
#include "unfold/topolink.hpp"

namespace unfold {

using Json = nlohmann::json;

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& why) : std::runtime_error(why) {}
};

namespace detail {

inline void require_format(const Json& j, const char* what) {
    if (!j.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
    if (!j.contains("format") || j["format"] != 1)
        throw FormatError(std::string(what) + ": missing or unsupported \"format\"");
}

inline Point2 point2_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Point3 point3_from(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline BoundaryPoint boundary_point_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("expected [edge, param]");
    return {j[0].get<int>(), j[1].get<double>()};
}

}  // namespace detail

inline Json polygon_to_json(const Polygon& P) {
    Json verts = Json::array();
    for (auto& v : P.vertices()) verts.push_back({v.x, v.y});
    return {{"format", 1}, {"vertices", verts}};
}

inline Polygon polygon_from_json(const Json& j) {
    detail::require_format(j, "polygon");
    std::vector<Point2> verts;
    for (auto& v : j.at("vertices")) verts.push_back(detail::point2_from(v));
    return validate_polygon(std::move(verts));
}

inline Json region_to_json(const ConvexRegion& R) {
    const char* status = R.status == RegionStatus::Empty
                             ? "empty"
                             : (R.status == RegionStatus::Bounded ? "bounded" : "unbounded");
    Json verts = Json::array();
    for (auto& v : R.vertices) verts.push_back({v.x, v.y});
    return {{"format", 1}, {"status", status}, {"vertices", verts}};
}

inline Json spiral_params_to_json(const SpiralParams& sp) {
    return {{"format", 1},
            {"center", {sp.center.x, sp.center.y}},
            {"theta", sp.theta},
            {"rate", sp.rate}};
}

inline SpiralParams spiral_params_from_json(const Json& j) {
    detail::require_format(j, "spiral params");
    return {detail::point2_from(j.at("center")), j.at("theta").get<double>(),
            j.at("rate").get<double>()};
}

inline Json shrink_report_to_json(const ShrinkReport& rep) {
    Json samples = Json::array();
    for (auto& s : rep.samples)
        samples.push_back(
            {{"t", s.t}, {"contained", s.contained}, {"worstViolation", s.worstViolation}});
    return {{"format", 1}, {"verdict", rep.verdict}, {"samples", samples}};
}

inline Json folding1d_to_json(const Folding1D& f) {
    return {{"format", 1},
            {"length", f.length},
            {"folds", f.folds},
            {"startImage", f.startImage},
            {"startDirection", f.startDirection},
            {"stacking", f.stacking}};
}

inline Folding1D folding1d_from_json(const Json& j) {
    detail::require_format(j, "folding1d");
    Folding1D f;
    f.length = j.at("length").get<double>();
    f.folds = j.at("folds").get<std::vector<double>>();
    f.startImage = j.at("startImage").get<double>();
    f.startDirection = j.at("startDirection").get<int>();
    f.stacking = j.at("stacking").get<std::vector<std::vector<int>>>();
    return f;
}

inline Json motion1d_to_json(const Motion1D& m) {
    Json frames = Json::array();
    for (size_t k = 0; k < m.frames.size(); ++k) {
        Json fr = folding1d_to_json(m.frames[k]);
        fr.erase("format");
        fr["param"] = m.params[k];
        frames.push_back(std::move(fr));
    }
    return {{"format", 1}, {"frames", frames}};
}

inline Json flatfold_to_json(const FlatFold2D& F) {
    Json chords = Json::array();
    for (auto& ch : F.chords)
        chords.push_back(
            {{"a", {ch.a.edge, ch.a.t}}, {"b", {ch.b.edge, ch.b.t}}});
    Json overlaps = Json::array();
    for (auto& o : F.overlaps)
        overlaps.push_back({o.faceI, o.faceJ, o.iAbove ? "above" : "below"});
    Json j = polygon_to_json(F.domain);
    return {{"format", 1}, {"domain", j}, {"chords", chords}, {"overlaps", overlaps}};
}

inline FlatFold2D flatfold_from_json(const Json& j) {
    detail::require_format(j, "flatfold");
    FlatFold2D F;
    F.domain = polygon_from_json(j.at("domain"));
    for (auto& c : j.at("chords"))
        F.chords.push_back(
            {detail::boundary_point_from(c.at("a")), detail::boundary_point_from(c.at("b"))});
    for (auto& o : j.at("overlaps")) {
        if (!o.is_array() || o.size() != 3) throw FormatError("overlap: expected [i, j, order]");
        std::string ord = o[2].get<std::string>();
        if (ord != "above" && ord != "below") throw FormatError("overlap order must be above/below");
        F.overlaps.push_back({o[0].get<int>(), o[1].get<int>(), ord == "above"});
    }
    return F;
}

inline Json motion2d_to_json(const Motion2D& m) {
    Json frames = Json::array();
    for (size_t k = 0; k < m.frames.size(); ++k) {
        Json fr = flatfold_to_json(m.frames[k]);
        fr.erase("format");
        fr["param"] = {{"stage", m.params[k].stage}, {"value", m.params[k].value}};
        frames.push_back(std::move(fr));
    }
    return {{"format", 1}, {"frames", frames}};
}

inline Json embed3d_to_json(const Embed3D& E) {
    Json chords = Json::array();
    for (auto& ch : E.chords)
        chords.push_back(
            {{"a", {ch.a.edge, ch.a.t}}, {"b", {ch.b.edge, ch.b.t}}});
    return {{"format", 1},
            {"domain", polygon_to_json(E.domain)},
            {"chords", chords},
            {"dihedrals", E.dihedrals}};
}

inline Embed3D embed3d_from_json(const Json& j) {
    detail::require_format(j, "embed3d");
    Embed3D E;
    E.domain = polygon_from_json(j.at("domain"));
    for (auto& c : j.at("chords"))
        E.chords.push_back(
            {detail::boundary_point_from(c.at("a")), detail::boundary_point_from(c.at("b"))});
    E.dihedrals = j.at("dihedrals").get<std::vector<double>>();
    return E;
}

inline Json polyloop_to_json(const PolyLoop& L) {
    Json verts = Json::array();
    for (auto& v : L.vertices) verts.push_back({v.x, v.y, v.z});
    return {{"format", 1}, {"vertices", verts}};
}

inline PolyLoop polyloop_from_json(const Json& j) {
    detail::require_format(j, "polyloop");
    PolyLoop L;
    for (auto& v : j.at("vertices")) L.vertices.push_back(detail::point3_from(v));
    validate_loop(L);
    return L;
}

// Columns: theta, margin, feasible.
inline std::string margin_curve_csv(const std::vector<MarginSample>& curve) {
    std::ostringstream os;
    os << "theta,margin,feasible\n";
    os.precision(17);
    for (auto& s : curve) os << s.theta << "," << s.margin << "," << (s.feasible ? 1 : 0) << "\n";
    return os.str();
}

// One path per face, opacity graded by face index so layers are visible.
inline std::string flatfold_svg(const FlatFold2D& F) {
    FaceDecomposition D = face_decomposition(F);
    std::vector<Isometry2> isos = all_face_isometries(F, D);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int f = 0; f < D.face_count(); ++f) {
        for (auto& v : D.faces[f]) {
            Point2 p = isos[f](v);
            xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
        }
    }
    double pad = 0.05 * (1 + std::max(xmax - xmin, ymax - ymin));
    std::ostringstream os;
    os.precision(12);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xmin - pad << " "
       << ymin - pad << " " << (xmax - xmin) + 2 * pad << " " << (ymax - ymin) + 2 * pad
       << "\">\n";
    for (int f = 0; f < D.face_count(); ++f) {
        double opacity = 0.25 + 0.5 * (f + 1.0) / D.face_count();
        os << "  <path fill=\"#4488cc\" fill-opacity=\"" << opacity
           << "\" stroke=\"#222\" stroke-width=\"" << pad / 20 << "\" d=\"";
        for (size_t i = 0; i < D.faces[f].size(); ++i) {
            Point2 p = isos[f](D.faces[f][i]);
            os << (i == 0 ? "M" : "L") << p.x << " " << p.y << " ";
        }
        os << "Z\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace unfold
