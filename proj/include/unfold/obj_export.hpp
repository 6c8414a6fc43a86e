// OBJ export of embedded frames (triangulated, shared vertices welded within
// 1e-9) and the numbered frame sequence with its JSON manifest.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "unfold/embed3d.hpp"
#include "unfold/io.hpp"

namespace unfold {

namespace detail {

struct WeldedMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> triangles;

    int add(Point3 p) {
        // Weld by quantizing to the 1e-9 grid.
        long long qx = std::llround(p.x * 1e9), qy = std::llround(p.y * 1e9),
                  qz = std::llround(p.z * 1e9);
        auto key = std::make_tuple(qx, qy, qz);
        auto [it, inserted] = index_.try_emplace(key, (int)vertices.size());
        if (inserted) vertices.push_back(p);
        return it->second;
    }

  private:
    std::map<std::tuple<long long, long long, long long>, int> index_;
};

inline WeldedMesh triangulate_frame(const FaceDecomposition& D,
                                    const std::vector<Isometry3>& isos) {
    WeldedMesh mesh;
    for (int f = 0; f < D.face_count(); ++f) {
        for (auto& t : ear_clip(D.faces[f])) {
            std::array<int, 3> tri;
            for (int i = 0; i < 3; ++i) tri[i] = mesh.add(isos[f]({t[i].x, t[i].y, 0}));
            mesh.triangles.push_back(tri);
        }
    }
    return mesh;
}

}  // namespace detail

inline void write_obj(std::ostream& os, const detail::WeldedMesh& mesh) {
    os.precision(17);
    for (auto& v : mesh.vertices) os << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (auto& t : mesh.triangles)
        os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

inline void write_obj(std::ostream& os, const BuiltEmbedding& E) {
    write_obj(os, detail::triangulate_frame(E.faces, E.isos));
}

// frame_%04d.obj per frame plus manifest.json with parameters and per-frame
// check results.
inline void export_motion_obj(const std::filesystem::path& dir, const Motion3D& M) {
    std::filesystem::create_directories(dir);
    Json manifest = {{"format", 1}, {"frames", Json::array()}};
    for (size_t k = 0; k < M.frames.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.obj", k);
        std::ofstream os(dir / name);
        write_obj(os, detail::triangulate_frame(M.frames[k].faces, M.frames[k].isos));
        BuiltEmbedding fk{M.frames[k].shape, M.frames[k].faces, M.frames[k].isos};
        SelfIntersectReport rep = check_self_intersection(fk, 0);
        manifest["frames"].push_back({{"file", name},
                                      {"stage", M.params[k].stage},
                                      {"value", M.params[k].value},
                                      {"chords", M.frames[k].shape.chords.size()},
                                      {"selfIntersecting", rep.intersecting}});
    }
    manifest["status"] =
        M.status == EmbedUnfoldStatus::Flat ? "flat" : "needs-spherical-carpenter";
    if (M.link) {
        manifest["vertexLink"] = {{"arcLengths", M.link->arcLengths},
                                  {"foldAngles", M.link->foldAngles}};
    }
    if (!M.thetaNote.empty()) manifest["thetaNote"] = M.thetaNote;
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << "\n";
}

// Surface OBJ plus the loops (and centerline) as JSON.
inline void export_locked_config(const std::filesystem::path& dir, const LockedConfig& cfg) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "surface.obj");
        write_obj(os, cfg.surface);
    }
    Json loops = {{"format", 1},
                  {"loopLength", cfg.loopLength},
                  {"loopA", polyloop_to_json(cfg.loopA)},
                  {"loopB", polyloop_to_json(cfg.loopB)}};
    if (!cfg.surface.embed.chords.empty())
        loops["centerline"] = polyloop_to_json(centerline_loop(cfg));
    std::ofstream os(dir / "loops.json");
    os << loops.dump(2) << "\n";
}

}  // namespace unfold
