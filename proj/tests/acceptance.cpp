// Acceptance suite: one test case and one printed PASS/FAIL line per
// criterion. Tolerances are pinned here, next to each check. Converged
// references are cached across criteria because they dominate the runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "hrc/metrics.hpp"
#include "hrc/pathtrace.hpp"
#include "hrc/raymarch.hpp"
#include "hrc/scene.hpp"
#include "hrc/solver.hpp"
#include "support/oracles.hpp"

using namespace hrc;

namespace {

void report(int id, const char* name, bool ok) {
    std::printf("[criterion %2d] %s  %s\n", id, ok ? "PASS" : "FAIL", name);
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", id, ": ", name);
}

double wall_gather_ms(const SceneGrid& scene) {
    const auto t0 = std::chrono::steady_clock::now();
    gather_fluence(scene);
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Converged references, computed once and shared between criteria. The
// reference seed differs from every competitor seed so estimator noise is
// uncorrelated with the fields under test.
const FluenceField& occluder_reference() {
    static const FluenceField ref = [] {
        PtConfig cfg;
        cfg.mode = PtConfig::Mode::nee;
        cfg.seed = 1;
        return converge_reference(gen_scene("occluder", 512), cfg, 64, 0.002, 1 << 14);
    }();
    return ref;
}

const FluenceField& occluder_hrc() {
    static const FluenceField f = gather_fluence(gen_scene("occluder", 512));
    return f;
}

// 10-90% transition width of the fluence profile down one image column.
int transition_width(const FluenceField& f, int x, int y0, int y1) {
    float lo = 1e30f, hi = -1e30f;
    for (int y = y0; y < y1; ++y) {
        const float v = f.at(x, y).mean();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const float t10 = lo + 0.1f * (hi - lo);
    const float t90 = lo + 0.9f * (hi - lo);
    int count = 0;
    for (int y = y0; y < y1; ++y) {
        const float v = f.at(x, y).mean();
        if (v > t10 && v < t90) ++count;
    }
    return count;
}

double region_mean(const FluenceField& f, int x0, int y0, int x1, int y1) {
    double sum = 0.0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) sum += f.at(x, y).mean();
    return sum / (static_cast<double>(x1 - x0) * (y1 - y0));
}

} // namespace

TEST_CASE("criterion 1: interval algebra worked example") {
    const RadianceInterval block{Spectrum::splat(2.0f), Spectrum::splat(0.5f)};
    const RadianceInterval merged = merge(block, block);
    const bool algebra_exact =
        merged.radiance == Spectrum::splat(3.0f) && merged.transmittance == Spectrum::splat(0.25f);

    // The same two blocks as scene cells, traversed end to end. The traced
    // result goes through the exponential integrator, so it gets a 1e-6
    // relative tolerance instead of exactness.
    SceneGrid scene(8, 1);
    Cell block_cell;
    block_cell.sigma_t = Spectrum::splat(static_cast<float>(std::log(2.0)));
    block_cell.source = Spectrum::splat(4.0f);
    scene.at(2, 0) = block_cell;
    scene.at(5, 0) = block_cell;
    const RadianceInterval traced = trace(scene, {0.0, 0.5}, {8.0, 0.5});
    const bool trace_matches = std::abs(traced.radiance.r - 3.0f) <= 3e-6f &&
                               std::abs(traced.transmittance.r - 0.25f) <= 1e-6f &&
                               traced.radiance.g == traced.radiance.r &&
                               traced.transmittance.b == traced.transmittance.r;
    report(1, "merge(<2,0.5>, <2,0.5>) = <3,0.25> exactly; two-block trace agrees to 1e-6",
           algebra_exact && trace_matches);
}

TEST_CASE("criterion 2: ray budget is exactly 19 X^2") {
    bool ok = true;
    for (const int size : {256, 512}) {
        const FluenceField f = gather_fluence(gen_scene("empty", size));
        const std::uint64_t want = 19ull * size * size;
        std::printf("  size %4d: dda_traces %llu, 19 X^2 = %llu\n", size,
                    static_cast<unsigned long long>(f.stats.dda_traces),
                    static_cast<unsigned long long>(want));
        ok &= f.stats.dda_traces == want; // zero tolerance
    }
    report(2, "total DDA traces across four quadrants = 19 X^2 at 256 and 512", ok);
}

TEST_CASE("criterion 3: cost is scene independent at fixed size") {
    const SceneGrid empty = gen_scene("empty", 512);
    const SceneGrid julia = gen_scene("julia", 512);
    const FluenceField fe = gather_fluence(empty);
    const FluenceField fj = gather_fluence(julia);
    const bool counters_equal = fe.stats.dda_traces == fj.stats.dda_traces &&
                                fe.stats.interval_merges == fj.stats.interval_merges;

    // Back-to-back pairs share the machine's momentary speed, so the
    // per-pair ratio cancels throttling and background noise; the median
    // over five pairs discards outliers.
    std::vector<double> ratios;
    for (int i = 0; i < 5; ++i) {
        const double te = wall_gather_ms(empty);
        const double tj = wall_gather_ms(julia);
        ratios.push_back(tj / te);
    }
    std::sort(ratios.begin(), ratios.end());
    const double rel_gap = std::abs(ratios[ratios.size() / 2] - 1.0);
    std::printf("  traces %llu/%llu merges %llu/%llu median julia/empty wall ratio %.3f\n",
                static_cast<unsigned long long>(fe.stats.dda_traces),
                static_cast<unsigned long long>(fj.stats.dda_traces),
                static_cast<unsigned long long>(fe.stats.interval_merges),
                static_cast<unsigned long long>(fj.stats.interval_merges),
                ratios[ratios.size() / 2]);
    report(3, "identical counters and wall time within 10% between empty and julia at 512^2",
           counters_equal && rel_gap < 0.10);
}

TEST_CASE("criterion 4: cone arcs cover the quadrant") {
    bool ok = true;
    for (int n = 0; n <= 16; ++n) {
        double sum = 0.0;
        for (int ti = 1; ti < (2 << n); ti += 2) sum += angular_size(n, ti);
        ok &= std::abs(sum - std::numbers::pi / 2.0) < 1e-9;
    }
    report(4, "sum of angular sizes = pi/2 within 1e-9 for levels 0..16", ok);
}

TEST_CASE("criterion 5: cascade agrees with dense quadrature") {
    bool within_2pct = true;
    bool accel_tight = true;
    double worst_oracle = 0.0, worst_accel = 0.0;
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const SceneGrid scene = oracle::random_soft_scene(32, seed);
        HrcConfig oracle_cfg;
        oracle_cfg.oracle_trace = true;
        oracle_cfg.blur_enabled = false; // the quadrature reference has no blur
        HrcConfig accel_cfg;
        accel_cfg.blur_enabled = false;
        const FluenceField f_oracle = gather_fluence(scene, oracle_cfg);
        const FluenceField f_accel = gather_fluence(scene, accel_cfg);
        const FluenceField ref = oracle::quadrature_reference(scene, 8192);
        const double e_oracle = rmse(f_oracle, ref).rmse_normalized;
        const double e_accel = rmse(f_accel, f_oracle).rmse / rmse(f_oracle, ref).peak_reference;
        within_2pct &= e_oracle <= 0.02;
        accel_tight &= e_accel <= e_oracle;
        worst_oracle = std::max(worst_oracle, e_oracle);
        worst_accel = std::max(worst_accel, e_accel);
    }
    std::printf("  worst oracle-vs-reference %.4f, worst accel-vs-oracle %.4f (of peak)\n",
                worst_oracle, worst_accel);
    report(5, "20 random scenes: oracle-mode RMSE <= 2% of peak; acceleration adds less error",
           within_2pct && accel_tight);
}

TEST_CASE("criterion 6: representable directions are exact") {
    const SceneGrid scene = gen_scene("occluder", 512);
    Stats stats;
    const auto levels = build_T(scene, {}, stats);
    bool ok = true;
    for (size_t n = 3; n < levels.size(); ++n) {
        const CascadeT& t = levels[n];
        const int step = 1 << n;
        for (const int k : {0, step / 2, step})
            for (int y = 0; y < t.rows(); y += 7)
                for (int xi = 0; xi < t.cols(); ++xi) {
                    const int px = xi * step;
                    if (px >= scene.width()) continue;
                    const Int2 v = v_offset(static_cast<int>(n), 2 * k);
                    const RadianceInterval direct =
                        trace(scene, {static_cast<double>(px), static_cast<double>(y)},
                              {static_cast<double>(px + v.x), static_cast<double>(y + v.y)});
                    const RadianceInterval entry = t.at(xi, y, k);
                    for (int ch = 0; ch < 3; ++ch) {
                        const float* er = &entry.radiance.r;
                        const float* dr = &direct.radiance.r;
                        const float* et = &entry.transmittance.r;
                        const float* dt = &direct.transmittance.r;
                        ok &= std::abs(er[ch] - dr[ch]) <=
                              1e-4f * std::max({1e-6f, std::abs(er[ch]), std::abs(dr[ch])});
                        ok &= std::abs(et[ch] - dt[ch]) <=
                              1e-4f * std::max({1e-6f, std::abs(et[ch]), std::abs(dt[ch])});
                    }
                }
    }
    report(6, "axis-aligned and +-45 degree merged T entries match direct traces within 1e-4", ok);
}

TEST_CASE("criterion 7: uniform medium fluence approaches 2 pi L_s") {
    const double expect = 2.0 * std::numbers::pi; // L_s = 1
    const SceneGrid scene = gen_scene("uniform_medium", 256);
    const FluenceField f = gather_fluence(scene);
    const double hrc_mean = region_mean(f, 124, 124, 132, 132);

    const OccupancyGrid occ(scene);
    PtConfig cfg;
    cfg.spp = 4096;
    double pt_mean = 0.0;
    for (const auto [x, y] : {std::pair{128, 128}, std::pair{120, 136}, std::pair{136, 124}})
        pt_mean += estimate_fluence_naive(scene, occ, x, y, cfg).mean() / 3.0;
    std::printf("  hrc %.4f  pt %.4f  target %.4f\n", hrc_mean, pt_mean, expect);
    report(7, "deep-interior fluence = 2 pi L_s within 2% for HRC and naive PT at 4096 spp",
           std::abs(hrc_mean - expect) <= 0.02 * expect &&
               std::abs(pt_mean - expect) <= 0.02 * expect);
}

TEST_CASE("criterion 8: occluder penumbra matches the converged reference") {
    const FluenceField& ref = occluder_reference();
    const FluenceField& hrc_f = occluder_hrc();
    PtConfig pt52;
    pt52.spp = 52;
    const FluenceField naive52 = render_reference(gen_scene("occluder", 512), pt52);

    // Scanline x = 400 crosses the upper shadow edge near y = 122.
    const int w_hrc = transition_width(hrc_f, 400, 60, 190);
    const int w_ref = transition_width(ref, 400, 60, 190);

    const Region crop = region_preset("penumbra", 512, 512);
    const double e_hrc = rmse(hrc_f, ref, crop).rmse;
    const double e_naive = rmse(naive52, ref, crop).rmse;
    std::printf("  transition width hrc %d px, reference %d px; crop rmse hrc %.5f naive52 %.5f"
                " (reference spp %d)\n",
                w_hrc, w_ref, e_hrc, e_naive, ref.stats.spp);
    report(8, "penumbra transition width within 5 px of reference; crop RMSE below naive at 52 spp",
           std::abs(w_hrc - w_ref) <= 5 && e_hrc < e_naive);
}

TEST_CASE("criterion 9: pinhole is noiseless and beats NEE at equal budget") {
    const SceneGrid scene = gen_scene("pinhole", 512);
    const FluenceField a = gather_fluence(scene);
    const FluenceField b = gather_fluence(scene);
    const bool deterministic = a.fluence == b.fluence;

    PtConfig ref_cfg;
    ref_cfg.mode = PtConfig::Mode::nee;
    ref_cfg.seed = 1;
    const FluenceField ref = converge_reference(scene, ref_cfg, 64, 0.002, 1 << 14);
    PtConfig nee52;
    nee52.mode = PtConfig::Mode::nee;
    nee52.spp = 52;
    const FluenceField nee = render_reference(scene, nee52);
    const double e_hrc = rmse(a, ref).rmse;
    const double e_nee = rmse(nee, ref).rmse;
    std::printf("  rmse hrc %.5f  nee52 %.5f  (reference spp %d)\n", e_hrc, e_nee, ref.stats.spp);
    report(9, "bit-identical across runs; RMSE below NEE at a 52 spp budget", deterministic &&
           e_hrc < e_nee);
}

TEST_CASE("criterion 10: julia scene error bound") {
    const SceneGrid scene = gen_scene("julia", 512); // unit peak intensity
    const FluenceField hrc_f = gather_fluence(scene);
    PtConfig cfg;
    cfg.seed = 1;
    const FluenceField ref = converge_reference(scene, cfg, 128, 0.002, 1 << 14);
    // Fields normalized to unit reference peak before comparison.
    const DiffReport rep = rmse(hrc_f, ref);
    const double e = rep.rmse / rep.peak_reference;
    std::printf("  rmse %.5f raw %.5f (reference spp %d, peak %.3f)\n", e, rep.rmse,
                ref.stats.spp, rep.peak_reference);
    report(10, "unit-peak-normalized RMSE vs converged reference <= 0.01", e <= 0.01);
}

TEST_CASE("criterion 11: equal-sample advantage on the multi-light scene") {
    const SceneGrid scene = gen_scene("multilight", 1024);
    const FluenceField hrc_f = gather_fluence(scene);
    PtConfig ref_cfg;
    ref_cfg.mode = PtConfig::Mode::nee;
    ref_cfg.seed = 1;
    const FluenceField ref = converge_reference(scene, ref_cfg, 32, 0.002, 1 << 12);
    PtConfig pt52;
    pt52.spp = 52; // the solver's per-pixel interval budget
    const FluenceField naive52 = render_reference(scene, pt52);
    const double e_hrc = rmse(hrc_f, ref).rmse;
    const double e_naive = rmse(naive52, ref).rmse;
    std::printf("  rmse hrc %.5f  naive52 %.5f  ratio %.3f  (reference spp %d)\n", e_hrc, e_naive,
                e_hrc / e_naive, ref.stats.spp);
    report(11, "HRC RMSE <= 1/3 of naive PT at the same sample count on multilight 1024^2",
           e_hrc <= e_naive / 3.0);
}

TEST_CASE("criterion 12: the cross blur helps and preserves flat regions") {
    const FluenceField& ref = occluder_reference();
    const FluenceField& blurred = occluder_hrc();
    HrcConfig no_blur;
    no_blur.blur_enabled = false;
    const FluenceField raw = gather_fluence(gen_scene("occluder", 512), no_blur);
    const double e_blur = rmse(blurred, ref).rmse;
    const double e_raw = rmse(raw, ref).rmse;

    // Flat-field invariance of the kernel itself.
    FluenceField constant(64, 64);
    for (auto& s : constant.fluence) s = Spectrum::splat(1.5f);
    const FluenceField after = cross_blur(constant, SceneGrid(64, 64), 0.5);
    bool flat = true;
    for (const auto& s : after.fluence) flat &= std::abs(s.r - 1.5f) <= 1e-6f;
    std::printf("  rmse with blur %.5f  without %.5f\n", e_blur, e_raw);
    report(12, "blur strictly reduces occluder RMSE; constant regions unchanged within 1e-6",
           e_blur < e_raw && flat);
}

TEST_CASE("criterion 13: multibounce fills the cornell umbra") {
    const SceneGrid scene = gen_scene("cornell", 512);
    HrcConfig cfg;
    std::vector<FluenceField> fields;
    for (int b = 1; b <= 3; ++b) {
        cfg.bounces = b;
        fields.push_back(solve_multibounce(scene, cfg));
    }
    // Umbra of the solid circle: fully shadowed from the light bar, well
    // clear of the 1 px blur and the penumbra.
    const int x0 = 246, x1 = 266, y0 = 100, y1 = 140;
    const double image_mean = region_mean(fields[0], 0, 0, 512, 512);
    const double umbra1 = region_mean(fields[0], x0, y0, x1, y1);
    const double umbra2 = region_mean(fields[1], x0, y0, x1, y1);

    float umbra2_min = 1e30f;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) umbra2_min = std::min(umbra2_min, fields[1].at(x, y).mean());

    bool monotone = true;
    const float peak = fields[2].peak();
    for (size_t b = 1; b < fields.size(); ++b)
        for (size_t i = 0; i < fields[b].fluence.size(); ++i) {
            monotone &= fields[b].fluence[i].r >= fields[b - 1].fluence[i].r - 1e-5f * peak;
            monotone &= fields[b].fluence[i].g >= fields[b - 1].fluence[i].g - 1e-5f * peak;
            monotone &= fields[b].fluence[i].b >= fields[b - 1].fluence[i].b - 1e-5f * peak;
        }
    std::printf("  umbra mean bounce1 %.2e bounce2 %.2e (image mean %.3f, bounce2 min %.2e)\n",
                umbra1, umbra2, image_mean, umbra2_min);
    report(13, "umbra leak <= 1e-3 of image mean at 1 bounce; positive at 2; nondecreasing",
           umbra1 <= 1e-3 * image_mean && umbra2_min > 0.0f && umbra2 > umbra1 && monotone);
}

TEST_CASE("criterion 14: gather commutes with rotation") {
    const SceneGrid scene = gen_scene("occluder", 512);
    const FluenceField direct = gather_fluence(rotate90(scene));
    const FluenceField rotated = rotate90(gather_fluence(scene));
    const float peak = direct.peak();
    float worst = 0.0f;
    for (size_t i = 0; i < direct.fluence.size(); ++i) {
        const Spectrum d = direct.fluence[i] - rotated.fluence[i];
        worst = std::max({worst, std::abs(d.r), std::abs(d.g), std::abs(d.b)});
    }
    std::printf("  max abs deviation %.2e of peak %.3f\n", worst, peak);
    report(14, "gather_fluence(rotate90(scene)) = rotate90(gather_fluence(scene)) within 1e-4",
           worst <= 1e-4f * peak);
}
