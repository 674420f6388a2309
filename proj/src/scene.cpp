#include "hrc/scene.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hrc/scene_io.hpp"

namespace hrc {

SceneGrid rotate90(const SceneGrid& scene) {
    const int w = scene.width();
    SceneGrid out(scene.height(), w);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out.at(x, y) = scene.at(w - 1 - y, x);
    // Continuous coordinates map as (u, v) -> (v, w - u).
    for (const LightBox& b : scene.lights())
        out.lights().push_back({b.y0, static_cast<double>(w) - b.x1, b.y1,
                                static_cast<double>(w) - b.x0});
    return out;
}

SceneGrid inject_bounce_source(const SceneGrid& scene, const FluenceField& fluence) {
    if (scene.width() != fluence.width || scene.height() != fluence.height)
        throw std::invalid_argument("inject_bounce_source: dimension mismatch");
    SceneGrid out = scene;
    constexpr float inv_2pi = static_cast<float>(1.0 / (2.0 * std::numbers::pi));
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) {
            Cell& c = out.at(x, y);
            c.source += c.albedo * fluence.at(x, y) * inv_2pi;
        }
    return out;
}

namespace {

struct Painter {
    SceneGrid& scene;
    double intensity;
    double albedo;

    void set(int x, int y, double opacity, double r, double g, double b) {
        if (!scene.in_bounds(x, y)) return;
        scene.at(x, y) = cell_from_quantized(quantize16(opacity), quantize16(r), quantize16(g),
                                             quantize16(b), intensity, albedo);
    }

    void disc(double cx, double cy, double radius, double opacity, double r, double g, double b) {
        const int x0 = static_cast<int>(std::floor(cx - radius));
        const int x1 = static_cast<int>(std::ceil(cx + radius));
        const int y0 = static_cast<int>(std::floor(cy - radius));
        const int y1 = static_cast<int>(std::ceil(cy + radius));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = x + 0.5 - cx;
                const double dy = y + 0.5 - cy;
                if (dx * dx + dy * dy <= radius * radius) set(x, y, opacity, r, g, b);
            }
    }

    void rect(double x0, double y0, double x1, double y1, double opacity, double r, double g,
              double b) {
        for (int y = static_cast<int>(std::floor(y0)); y < static_cast<int>(std::ceil(y1)); ++y)
            for (int x = static_cast<int>(std::floor(x0)); x < static_cast<int>(std::ceil(x1));
                 ++x)
                set(x, y, opacity, r, g, b);
    }
};

void add_disc_light(SceneGrid& scene, double cx, double cy, double radius) {
    scene.lights().push_back({cx - radius, cy - radius, cx + radius, cy + radius});
}

SceneGrid gen_occluder(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    Painter p{scene, params.intensity, 0.0};
    const double s = size / 512.0;
    // 10 px circular light at left-center, 14 px wide bar at mid-field.
    const double lx = 0.15 * size, ly = 0.5 * size, lr = 5.0 * s;
    p.disc(lx, ly, lr, 1.0, 1.0, 1.0, 1.0);
    p.rect(0.5 * size - 7.0 * s, 0.35 * size, 0.5 * size + 7.0 * s, 0.65 * size, 1.0, 0.0, 0.0,
           0.0);
    add_disc_light(scene, lx, ly, lr);
    return scene;
}

SceneGrid gen_pinhole(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    Painter p{scene, params.intensity, 0.0};
    const double s = size / 512.0;
    const double lx = 0.2 * size, ly = 0.5 * size, lr = 0.1 * size;
    // Opacities are given per 512-scale pixel and rescaled so the physical
    // optical depth of each feature is resolution independent.
    auto op = [&](double o512) { return 1.0 - std::pow(1.0 - o512, 512.0 / size); };
    // Translucent glowing disc: thick enough to saturate exterior rays to
    // L_s, but volumetric so probe-corner sampling stays valid inside it.
    p.disc(lx, ly, lr, op(0.025), 1.0, 1.0, 1.0);
    // Full-height dense-fog wall with a 10 px gap at center. Volumetric
    // rather than hard so boundary pixels stay in the method's domain; the
    // total optical depth still blocks all but ~1% of the light.
    const double wall_x0 = 0.5 * size - 10.0 * s, wall_x1 = 0.5 * size + 10.0 * s;
    const double gap_y0 = 0.5 * size - 5.0 * s, gap_y1 = 0.5 * size + 5.0 * s;
    p.rect(wall_x0, 0.0, wall_x1, gap_y0, op(0.2), 0.0, 0.0, 0.0);
    p.rect(wall_x0, gap_y1, wall_x1, size, op(0.2), 0.0, 0.0, 0.0);
    add_disc_light(scene, lx, ly, lr);
    return scene;
}

SceneGrid gen_tiny_light(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    Painter p{scene, params.intensity, 0.0};
    const int c = size / 2;
    p.rect(c - 1, c - 1, c + 1, c + 1, 1.0, 1.0, 1.0, 1.0);
    scene.lights().push_back({static_cast<double>(c - 1), static_cast<double>(c - 1),
                              static_cast<double>(c + 1), static_cast<double>(c + 1)});
    return scene;
}

SceneGrid gen_julia(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    Painter p{scene, params.intensity, 0.0};
    constexpr double cr = -0.835, ci = -0.2321;
    constexpr int max_iter = 64;
    // Fixed two-color emission ramp over the escape-iteration fraction.
    constexpr double col_a[3] = {0.10, 0.30, 0.90};
    constexpr double col_b[3] = {1.00, 0.60, 0.10};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double zr = ((x + 0.5) / size) * 3.2 - 1.6;
            double zi = ((y + 0.5) / size) * 3.2 - 1.6;
            int m = 0;
            while (m < max_iter && zr * zr + zi * zi <= 4.0) {
                const double t = zr * zr - zi * zi + cr;
                zi = 2.0 * zr * zi + ci;
                zr = t;
                ++m;
            }
            if (m == 0) continue;
            const double t = static_cast<double>(m) / max_iter;
            const double r = (col_a[0] + (col_b[0] - col_a[0]) * t) * t;
            const double g = (col_a[1] + (col_b[1] - col_a[1]) * t) * t;
            const double b = (col_a[2] + (col_b[2] - col_a[2]) * t) * t;
            // Semi-transparent glowing medium: cap per-cell opacity so the
            // set interior is a volume, not an opaque emitter.
            p.set(x, y, 0.35 * t, r, g, b);
        }
    return scene;
}

SceneGrid gen_cornell(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    const double s = size / 512.0;
    const double w = 10.0 * s;
    Painter walls{scene, params.intensity, 0.8};
    walls.rect(0, 0, size, w, 1.0, 0.0, 0.0, 0.0);
    walls.rect(0, size - w, size, size, 1.0, 0.0, 0.0, 0.0);
    walls.rect(0, w, w, size - w, 1.0, 0.0, 0.0, 0.0);
    walls.rect(size - w, w, size, size - w, 1.0, 0.0, 0.0, 0.0);
    // Light bar below the top wall.
    const double lx0 = 0.375 * size, lx1 = 0.625 * size;
    const double ly0 = size - w - 10.0 * s, ly1 = size - w;
    walls.rect(lx0, ly0, lx1, ly1, 1.0, 1.0, 1.0, 1.0);
    scene.lights().push_back({lx0, ly0, lx1, ly1});
    // Solid circle below the light; its umbra is the multibounce test region.
    walls.disc(0.5 * size, 0.45 * size, 0.12 * size, 1.0, 0.0, 0.0, 0.0);
    // Thin scattering rectangle, non-emissive.
    walls.rect(0.65 * size, 0.25 * size, 0.86 * size, 0.5 * size, 0.05, 0.0, 0.0, 0.0);
    return scene;
}

SceneGrid gen_multilight(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    // Small bright lights: blind rays rarely hit them, so this scene is the
    // hard case for naive path tracing. Emission is scaled up to keep total
    // power comparable to discs twice the radius.
    Painter p{scene, params.intensity * 4.0, 0.0};
    const double s = size / 1024.0;
    struct Disc {
        double fx, fy, radius, r, g, b;
    };
    // Layout constants in fractions of the grid, radii in 1024-scale pixels.
    const Disc discs[] = {
        {0.14, 0.22, 9.0, 1.0, 0.85, 0.6}, {0.78, 0.16, 6.0, 0.5, 0.7, 1.0},
        {0.86, 0.62, 12.0, 1.0, 0.45, 0.4}, {0.30, 0.78, 5.0, 0.55, 1.0, 0.55},
        {0.55, 0.42, 4.0, 1.0, 1.0, 1.0},   {0.10, 0.58, 7.0, 0.95, 0.75, 1.0},
    };
    for (const Disc& d : discs) {
        p.disc(d.fx * size, d.fy * size, d.radius * s, 0.25, d.r, d.g, d.b);
        add_disc_light(scene, d.fx * size, d.fy * size, d.radius * s);
    }
    // A few occluders so the lights cast shadows.
    p.rect(0.40 * size, 0.12 * size, 0.44 * size, 0.34 * size, 1.0, 0.0, 0.0, 0.0);
    p.rect(0.62 * size, 0.68 * size, 0.82 * size, 0.72 * size, 1.0, 0.0, 0.0, 0.0);
    p.disc(0.25 * size, 0.48 * size, 24.0 * s, 1.0, 0.0, 0.0, 0.0);
    return scene;
}

SceneGrid gen_uniform_medium(int size, const SceneParams& params) {
    SceneGrid scene(size, size);
    const double opacity = 1.0 - std::exp(-params.sigma_t);
    Painter p{scene, params.source, 0.0};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) p.set(x, y, opacity, 1.0, 1.0, 1.0);
    return scene;
}

} // namespace

const std::vector<std::string>& scene_names() {
    static const std::vector<std::string> names = {"empty",  "occluder",   "pinhole",
                                                   "tiny_light", "julia",  "cornell",
                                                   "uniform_medium", "multilight"};
    return names;
}

SceneGrid gen_scene(const std::string& name, int size, const SceneParams& params) {
    if (size < 16) throw std::invalid_argument("gen_scene: size must be >= 16");
    if (name == "empty") return SceneGrid(size, size);
    if (name == "occluder") return gen_occluder(size, params);
    if (name == "pinhole") return gen_pinhole(size, params);
    if (name == "tiny_light") return gen_tiny_light(size, params);
    if (name == "julia") return gen_julia(size, params);
    if (name == "cornell") return gen_cornell(size, params);
    if (name == "uniform_medium") return gen_uniform_medium(size, params);
    if (name == "multilight") return gen_multilight(size, params);
    throw std::invalid_argument("gen_scene: unknown scene '" + name + "'");
}

} // namespace hrc
