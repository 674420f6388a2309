// hrc2d: command-line driver for the 2D fluence solver and its references.
// Exit codes: 0 success, 1 usage error, 2 IO error, 3 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "hrc/image_io.hpp"
#include "hrc/metrics.hpp"
#include "hrc/pathtrace.hpp"
#include "hrc/scene.hpp"
#include "hrc/scene_io.hpp"
#include "hrc/solver.hpp"
#include "support/oracles.hpp"

namespace {

using namespace hrc;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

// Writes through a temp file in the same directory so a crash never leaves a
// truncated artifact behind.
template <typename WriteFn>
void atomic_write(const std::string& path, WriteFn&& fn) {
    const std::string tmp = path + ".tmp";
    fn(tmp);
    std::filesystem::rename(tmp, path);
}

void write_text(const std::string& path, const std::string& text) {
    atomic_write(path, [&](const std::string& tmp) {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + tmp);
    });
}

struct RenderArgs {
    std::string scene_path;
    std::string preset;
    std::string algo = "hrc";
    int spp = 52;
    int bounces = 1;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = "out.pfm";
    std::string preview;
    std::string stats_path;
    bool oracle_trace = false;
    bool no_blur = false;
};

// Named figure-style experiment presets: scene, size, algorithm, budget.
struct Preset {
    const char* scene;
    int size;
    const char* algo;
    int spp;
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table = {
        {"fig1-hrc", {"multilight", 1024, "hrc", 0}},
        {"fig1-pt", {"multilight", 1024, "pt", 52}},
        {"fig8-hrc", {"occluder", 512, "hrc", 0}},
        {"fig8-pt", {"occluder", 512, "pt", 52}},
        {"fig9-hrc", {"pinhole", 512, "hrc", 0}},
        {"fig9-nee", {"pinhole", 512, "pt-nee", 52}},
        {"fig13-hrc", {"julia", 512, "hrc", 0}},
        {"fig14-hrc", {"cornell", 512, "hrc", 0}},
    };
    return table;
}

int run_render(RenderArgs& args) {
    SceneGrid scene;
    if (!args.preset.empty()) {
        const auto it = presets().find(args.preset);
        if (it == presets().end()) {
            std::cerr << "unknown preset: " << args.preset << "\n";
            return kExitUsage;
        }
        scene = gen_scene(it->second.scene, it->second.size);
        args.algo = it->second.algo;
        if (it->second.spp > 0) args.spp = it->second.spp;
        if (it->second.scene == std::string("cornell")) args.bounces = std::max(args.bounces, 2);
    } else if (!args.scene_path.empty()) {
        scene = load_scene_png(args.scene_path);
    } else {
        std::cerr << "render needs --scene or --preset\n";
        return kExitUsage;
    }

    FluenceField field;
    if (args.algo == "hrc") {
        HrcConfig cfg;
        cfg.oracle_trace = args.oracle_trace;
        cfg.blur_enabled = !args.no_blur;
        cfg.bounces = args.bounces;
        cfg.threads = args.threads;
        field = solve_multibounce(scene, cfg);
    } else {
        PtConfig cfg;
        cfg.mode = args.algo == "pt-nee" ? PtConfig::Mode::nee : PtConfig::Mode::naive;
        cfg.spp = args.spp;
        cfg.seed = args.seed;
        cfg.max_bounces = args.bounces;
        cfg.threads = args.threads;
        field = render_reference(scene, cfg);
    }

    atomic_write(args.out, [&](const std::string& tmp) { write_pfm(field, tmp); });
    if (!args.preview.empty())
        atomic_write(args.preview, [&](const std::string& tmp) { tonemap_png(field, tmp); });
    if (!args.stats_path.empty()) write_text(args.stats_path, field.stats.to_json() + "\n");
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path,
                const std::string& region_name, const std::string& csv) {
    const FluenceField a = read_pfm(a_path);
    const FluenceField b = read_pfm(b_path);
    std::optional<Region> region;
    if (!region_name.empty()) region = region_preset(region_name, b.width, b.height);
    const DiffReport d = rmse(a, b, region);
    std::ostringstream line;
    line << "rmse " << d.rmse << " max_abs_error " << d.max_abs_error << " peak_reference "
         << d.peak_reference << " rmse_normalized " << d.rmse_normalized << " region "
         << d.region.x0 << "," << d.region.y0 << "," << d.region.x1 << "," << d.region.y1;
    std::cout << line.str() << "\n";
    if (!csv.empty()) {
        std::ostringstream row;
        row << "rmse,max_abs_error,peak_reference,rmse_normalized\n"
            << d.rmse << "," << d.max_abs_error << "," << d.peak_reference << ","
            << d.rmse_normalized << "\n";
        write_text(csv, row.str());
    }
    return 0;
}

int run_bench(const std::vector<int>& sizes, const std::vector<std::string>& scenes,
              const std::string& csv) {
    std::vector<BenchRow> rows;
    for (const int size : sizes) {
        if (size < 16) {
            std::cerr << "invalid size " << size << "\n";
            return kExitUsage;
        }
        std::uint64_t traces = 0;
        bool first = true;
        for (const std::string& name : scenes) {
            const FluenceField f = gather_fluence(gen_scene(name, size));
            const Stats& s = f.stats;
            rows.push_back({size, s.merge_up_ms, s.merge_down_ms, s.total_ms(), s.dda_traces});
            if (first) {
                traces = s.dda_traces;
                first = false;
            } else if (s.dda_traces != traces) {
                std::cerr << "trace count varies across scenes at size " << size << "\n";
                return kExitVerify;
            }
        }
    }
    if (!csv.empty())
        atomic_write(csv, [&](const std::string& tmp) { bench_record(rows, tmp); });
    for (const BenchRow& r : rows)
        std::cout << r.size << " " << r.merge_up_ms << " " << r.merge_down_ms << " " << r.total_ms
                  << " " << r.dda_traces << "\n";
    return 0;
}

bool check(bool ok, const char* what) {
    std::cout << (ok ? "  pass  " : "  FAIL  ") << what << "\n";
    return ok;
}

bool verify_algebra() {
    const RadianceInterval block{Spectrum::splat(2.0f), Spectrum::splat(0.5f)};
    const RadianceInterval m = merge(block, block);
    bool ok = check(m.radiance == Spectrum::splat(3.0f) && m.transmittance == Spectrum::splat(0.25f),
                    "two-block merge is <3, 0.25>");
    ok &= check(merge(RadianceInterval::identity(), block) == block &&
                    merge(block, RadianceInterval::identity()) == block,
                "vacuum is the merge identity");
    const RadianceInterval opaque{Spectrum::splat(1.0f), Spectrum::zero()};
    ok &= check(merge(opaque, block).radiance == opaque.radiance, "opaque near blocks far");
    return ok;
}

bool verify_cascade() {
    bool ok = true;
    for (int n = 0; n <= 16; ++n) {
        double sum = 0.0;
        for (int ti = 1; ti < (2 << n); ti += 2) sum += angular_size(n, ti);
        ok &= std::abs(sum - std::numbers::pi / 2.0) < 1e-9;
    }
    check(ok, "angular sizes cover the quadrant");

    const SceneGrid scene = oracle::random_soft_scene(16, 4);
    Stats stats;
    HrcConfig cfg;
    cfg.oracle_trace = true;
    const CascadeR r0 = solve_quadrant(scene, cfg, stats);
    bool match = true;
    for (int y = 0; y < 16 && match; ++y)
        for (int xi = 0; xi <= 16 && match; ++xi) {
            const Spectrum want = oracle::expand_cascade(scene, 4, 0, xi, y, 1);
            const Spectrum got = r0.at(xi, y, 0).value;
            match = std::abs(got.r - want.r) <= 1e-5f * std::max(1.0f, std::abs(want.r)) &&
                    std::abs(got.g - want.g) <= 1e-5f * std::max(1.0f, std::abs(want.g)) &&
                    std::abs(got.b - want.b) <= 1e-5f * std::max(1.0f, std::abs(want.b));
        }
    ok &= check(match, "merge-down equals the recursive expansion");

    const FluenceField vac = gather_fluence(gen_scene("empty", 32));
    bool zero = true;
    for (const Spectrum& s : vac.fluence) zero &= s.is_zero();
    ok &= check(zero, "vacuum world gathers zero fluence");
    ok &= check(vac.stats.dda_traces == 19ull * 32 * 32, "ray budget is 19 X^2");
    return ok;
}

bool verify_oracle() {
    bool ok = true;
    for (std::uint32_t seed = 1; seed <= 3; ++seed) {
        const SceneGrid scene = oracle::random_soft_scene(32, seed);
        HrcConfig cfg;
        cfg.oracle_trace = true;
        cfg.blur_enabled = false;
        const FluenceField f = gather_fluence(scene, cfg);
        const FluenceField ref = oracle::quadrature_reference(scene, 1024);
        const DiffReport d = rmse(f, ref);
        ok &= check(d.rmse_normalized <= 0.02, "oracle-mode field within 2% of quadrature");
    }
    return ok;
}

int run_verify(const std::string& suite) {
    bool ok = true;
    if (suite == "algebra" || suite == "all") ok &= verify_algebra();
    if (suite == "cascade" || suite == "all") ok &= verify_cascade();
    if (suite == "oracle" || suite == "all") ok &= verify_oracle();
    std::cout << (ok ? "verify: PASS" : "verify: FAIL") << "\n";
    return ok ? 0 : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D holographic radiance cascades fluence solver"};
    app.require_subcommand(1);

    // genscene
    auto* gs = app.add_subcommand("genscene", "generate a procedural scene PNG + sidecar");
    std::string gs_name, gs_out = "scene.png";
    int gs_size = 512;
    SceneParams gs_params;
    gs->add_option("name", gs_name, "scene name")->required();
    gs->add_option("--size", gs_size, "grid size in pixels");
    gs->add_option("--out", gs_out, "output PNG path");
    gs->add_option("--sigma", gs_params.sigma_t, "uniform_medium extinction");
    gs->add_option("--source", gs_params.source, "uniform_medium source radiance");
    gs->add_option("--intensity", gs_params.intensity, "peak emission intensity");

    // render
    auto* rd = app.add_subcommand("render", "render fluence with hrc or a path tracer");
    RenderArgs ra;
    rd->add_option("--scene", ra.scene_path, "scene PNG path");
    rd->add_option("--preset", ra.preset, "named experiment preset (e.g. fig8-hrc)");
    rd->add_option("--algo", ra.algo, "hrc | pt | pt-nee")
        ->check(CLI::IsMember({"hrc", "pt", "pt-nee"}));
    rd->add_option("--spp", ra.spp, "samples per pixel for pt modes");
    rd->add_option("--bounces", ra.bounces, "light bounces");
    rd->add_option("--seed", ra.seed, "pt sequence seed");
    rd->add_option("--threads", ra.threads, "worker threads, 0 = auto");
    rd->add_option("--out", ra.out, "output PFM path");
    rd->add_option("--preview", ra.preview, "tonemapped PNG preview path");
    rd->add_option("--stats", ra.stats_path, "stats JSON path");
    rd->add_flag("--oracle-trace", ra.oracle_trace, "trace every cascade level directly");
    rd->add_flag("--no-blur", ra.no_blur, "disable the cross blur");

    // compare
    auto* cp = app.add_subcommand("compare", "error metrics between two PFM images");
    std::string cp_a, cp_b, cp_region, cp_csv;
    cp->add_option("a", cp_a, "test image")->required();
    cp->add_option("b", cp_b, "reference image")->required();
    cp->add_option("--region", cp_region, "named crop preset (full, penumbra, behind-wall)");
    cp->add_option("--csv", cp_csv, "CSV report path");

    // bench
    auto* bn = app.add_subcommand("bench", "solver timing across sizes and scenes");
    std::vector<int> bn_sizes{256, 512};
    std::vector<std::string> bn_scenes{"empty", "julia"};
    std::string bn_csv;
    bn->add_option("--sizes", bn_sizes, "grid sizes")->delimiter(',');
    bn->add_option("--scene-set", bn_scenes, "scene names")->delimiter(',');
    bn->add_option("--csv", bn_csv, "CSV output path");

    // verify
    auto* vf = app.add_subcommand("verify", "run the invariant suites");
    std::string vf_suite = "all";
    vf->add_option("--suite", vf_suite, "algebra | cascade | oracle | all")
        ->check(CLI::IsMember({"algebra", "cascade", "oracle", "all"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (gs->parsed()) {
            const SceneGrid scene = gen_scene(gs_name, gs_size, gs_params);
            atomic_write(gs_out, [&](const std::string& tmp) { save_scene_png(scene, tmp); });
            // save_scene_png writes the sidecar next to its argument.
            std::filesystem::rename(gs_out + ".tmp.json", gs_out + ".json");
            return 0;
        }
        if (rd->parsed()) return run_render(ra);
        if (cp->parsed()) return run_compare(cp_a, cp_b, cp_region, cp_csv);
        if (bn->parsed()) return run_bench(bn_sizes, bn_scenes, bn_csv);
        if (vf->parsed()) return run_verify(vf_suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
