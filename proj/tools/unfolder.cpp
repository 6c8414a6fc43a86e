// Command-line surface: validation, recognition, motion synthesis, export.
// Exit codes: 0 success/feasible/valid, 1 expected negative, 2 input error,
// 3 internal check failure. Diagnostics go to stderr as JSON lines.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "unfold/io.hpp"
#include "unfold/obj_export.hpp"

namespace {

using unfold::Json;

constexpr int kOk = 0, kNegative = 1, kInputError = 2, kInternalError = 3;

void diag(const std::string& kind, const std::string& message) {
    std::cerr << Json{{"kind", kind}, {"message", message}}.dump() << "\n";
}

Json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw unfold::FormatError("cannot open " + path);
    Json j;
    is >> j;
    return j;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("UNFOLDER_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"developable-surface unfolding toolkit"};
    app.require_subcommand(1);

    std::string polyPath, paramsPath, inPath, aPath, bPath, outDir, csvPath;
    int steps = 64, samples = 720, angleSamples = 64;
    int turns = 2, chordsPerTurn = 16;
    double loopLength = 0.05;
    std::uint64_t seed = default_seed();

    auto* kernel = app.add_subcommand("kernel", "print the star kernel of a polygon");
    kernel->add_option("poly", polyPath)->required();

    auto* spiral = app.add_subcommand("spiral", "search for spiral shrink parameters");
    spiral->add_option("poly", polyPath)->required();
    spiral->add_option("--samples", samples);
    spiral->add_option("--csv", csvPath, "write the theta-margin curve");

    auto* verify = app.add_subcommand("verify-shrink", "verify shrink parameters");
    verify->add_option("poly", polyPath)->required();
    verify->add_option("params", paramsPath)->required();
    verify->add_option("--samples", angleSamples);

    auto* f1v = app.add_subcommand("fold1d-validate", "validate a 1D flat folding");
    f1v->add_option("folding", inPath)->required();

    auto* f1u = app.add_subcommand("fold1d-unfold", "unfold a 1D flat folding");
    f1u->add_option("folding", inPath)->required();
    f1u->add_option("--steps", steps);

    auto* ffv = app.add_subcommand("flatfold-validate", "validate a 2D flat folding");
    ffv->add_option("flatfold", inPath)->required();
    ffv->add_option("--seed", seed);

    auto* ffu = app.add_subcommand("flatfold-unfold", "unfold a 2D flat folding");
    ffu->add_option("flatfold", inPath)->required();
    ffu->add_option("params", paramsPath)->required();
    ffu->add_option("--steps", steps);

    auto* eb = app.add_subcommand("embed-build", "build and echo a 3D embedding");
    eb->add_option("embedding", inPath)->required();

    auto* ec = app.add_subcommand("embed-check", "self-intersection check");
    ec->add_option("embedding", inPath)->required();

    auto* eu = app.add_subcommand("embed-unfold", "unfold a 3D embedding to OBJ frames");
    eu->add_option("embedding", inPath)->required();
    eu->add_option("params", paramsPath)->required();
    eu->add_option("--steps", steps);
    eu->add_option("--out", outDir)->required();

    auto* lk = app.add_subcommand("linking", "Gauss linking number of two loops");
    lk->add_option("a", aPath)->required();
    lk->add_option("b", bPath)->required();
    lk->add_option("--seed", seed);

    auto* le = app.add_subcommand("locked-example", "build the rolled locked example");
    le->add_option("--turns", turns);
    le->add_option("--chords", chordsPerTurn);
    le->add_option("--loop", loopLength);
    le->add_option("--out", outDir)->required();

    CLI11_PARSE(app, argc, argv);

    if (kernel->parsed()) {
        unfold::Polygon P = unfold::polygon_from_json(load_json(polyPath));
        unfold::ConvexRegion R = unfold::star_kernel(P);
        std::cout << unfold::region_to_json(R).dump(2) << "\n";
        return R.empty() ? kNegative : kOk;
    }
    if (spiral->parsed()) {
        unfold::Polygon P = unfold::polygon_from_json(load_json(polyPath));
        std::vector<unfold::MarginSample> curve;
        auto res = unfold::find_spiral_params(P, samples, 60, &curve);
        if (!csvPath.empty()) {
            std::ofstream os(csvPath);
            os << unfold::margin_curve_csv(curve);
        }
        if (!res) {
            std::cout << "none\n";
            return kNegative;
        }
        Json j = unfold::spiral_params_to_json(res->params);
        j["margin"] = res->margin;
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    if (verify->parsed()) {
        unfold::Polygon P = unfold::polygon_from_json(load_json(polyPath));
        unfold::SpiralParams sp = unfold::spiral_params_from_json(load_json(paramsPath));
        unfold::ShrinkReport rep =
            unfold::verify_shrinking_motion(P, sp, angleSamples, 5.0 / sp.rate);
        std::cout << unfold::shrink_report_to_json(rep).dump(2) << "\n";
        return rep.verdict ? kOk : kNegative;
    }
    if (f1v->parsed()) {
        unfold::Folding1D f = unfold::folding1d_from_json(load_json(inPath));
        unfold::Fold1DReport rep = unfold::validate_folding1d(f);
        std::cout << Json{{"format", 1}, {"valid", rep.valid}, {"detail", rep.detail}}.dump(2)
                  << "\n";
        return rep.valid ? kOk : kNegative;
    }
    if (f1u->parsed()) {
        unfold::Folding1D f = unfold::folding1d_from_json(load_json(inPath));
        unfold::Fold1DReport rep = unfold::validate_folding1d(f);
        if (!rep.valid) {
            diag("invalid-input", "folding does not validate: " + rep.detail);
            return kNegative;
        }
        unfold::Motion1D m = unfold::unfold_motion_1d(f, std::nullopt, steps);
        for (auto& fr : m.frames) {
            if (!unfold::validate_folding1d(fr).valid) {
                diag("internal-check", "motion frame fails validation");
                return kInternalError;
            }
        }
        std::cout << unfold::motion1d_to_json(m).dump(2) << "\n";
        return kOk;
    }
    if (ffv->parsed()) {
        unfold::FlatFold2D F = unfold::flatfold_from_json(load_json(inPath));
        unfold::FlatFoldReport rep = unfold::validate_flatfold(F, 2, seed);
        std::cout << Json{{"format", 1}, {"valid", rep.valid}, {"detail", rep.detail}}.dump(2)
                  << "\n";
        return rep.valid ? kOk : kNegative;
    }
    if (ffu->parsed()) {
        unfold::FlatFold2D F = unfold::flatfold_from_json(load_json(inPath));
        unfold::SpiralParams sp = unfold::spiral_params_from_json(load_json(paramsPath));
        unfold::Motion2D m = unfold::unfold_motion_flatfold(F, sp, steps);
        std::cout << unfold::motion2d_to_json(m).dump(2) << "\n";
        return kOk;
    }
    if (eb->parsed()) {
        unfold::Embed3D E = unfold::embed3d_from_json(load_json(inPath));
        unfold::BuiltEmbedding built = unfold::build_embedding(E.domain, E.chords, E.dihedrals);
        Json j = unfold::embed3d_to_json(built.embed);
        j["faces"] = built.faces.face_count();
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    if (ec->parsed()) {
        unfold::Embed3D E = unfold::embed3d_from_json(load_json(inPath));
        unfold::BuiltEmbedding built = unfold::build_embedding(E.domain, E.chords, E.dihedrals);
        unfold::SelfIntersectReport rep = unfold::check_self_intersection(built, 1);
        std::cout << Json{{"format", 1},
                          {"intersecting", rep.intersecting},
                          {"faceI", rep.faceI},
                          {"faceJ", rep.faceJ}}
                         .dump(2)
                  << "\n";
        return rep.intersecting ? kNegative : kOk;
    }
    if (eu->parsed()) {
        unfold::Embed3D E = unfold::embed3d_from_json(load_json(inPath));
        unfold::BuiltEmbedding built = unfold::build_embedding(E.domain, E.chords, E.dihedrals);
        unfold::SpiralParams sp = unfold::spiral_params_from_json(load_json(paramsPath));
        unfold::Motion3D m = unfold::unfold_motion_embed(built, sp, steps);
        unfold::export_motion_obj(outDir, m);
        std::cout << Json{{"format", 1},
                          {"frames", m.frames.size()},
                          {"status", m.status == unfold::EmbedUnfoldStatus::Flat
                                         ? "flat"
                                         : "needs-spherical-carpenter"}}
                         .dump(2)
                  << "\n";
        return kOk;
    }
    if (lk->parsed()) {
        unfold::PolyLoop a = unfold::polyloop_from_json(load_json(aPath));
        unfold::PolyLoop b = unfold::polyloop_from_json(load_json(bPath));
        int n = unfold::linking_number(a, b, seed ? seed : 0x10c8ed5eedULL);
        std::cout << Json{{"format", 1}, {"linking", n}}.dump(2) << "\n";
        return kOk;
    }
    if (le->parsed()) {
        unfold::LockedConfig cfg =
            unfold::build_locked_example(turns, chordsPerTurn, loopLength);
        unfold::export_locked_config(outDir, cfg);
        unfold::PropertyReport rep = unfold::measure_properties(cfg);
        std::cout << Json{{"format", 1},
                          {"loopSeparation", rep.loopSeparation},
                          {"nearestBendDistToCenter", rep.nearestBendDistToCenter},
                          {"bendCrossingOffsets",
                           {rep.bendCrossingOffsets.first, rep.bendCrossingOffsets.second}},
                          {"pairwiseLinking", rep.pairwiseLinking}}
                         .dump(2)
                  << "\n";
        return kOk;
    }
    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const unfold::FormatError& e) {
        diag("input-error", e.what());
        return kInputError;
    } catch (const Json::exception& e) {
        diag("input-error", e.what());
        return kInputError;
    } catch (const std::invalid_argument& e) {
        diag("input-error", e.what());
        return kInputError;
    } catch (const std::exception& e) {
        diag("internal-error", e.what());
        return kInternalError;
    }
}
