#include "hrc/scene_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

namespace hrc {

std::uint16_t quantize16(double v) {
    v = std::min(1.0, std::max(0.0, v));
    return static_cast<std::uint16_t>(std::lround(v * 65535.0));
}

Cell cell_from_quantized(std::uint16_t alpha, std::uint16_t r, std::uint16_t g, std::uint16_t b,
                         double intensity, double albedo) {
    Cell c;
    float sigma = kSigmaMax;
    if (alpha < 65535) {
        const double o = alpha / 65535.0;
        sigma = std::min<float>(kSigmaMax, static_cast<float>(-std::log1p(-o)));
    }
    c.sigma_t = Spectrum::splat(alpha == 0 ? 0.0f : sigma);
    c.source = {static_cast<float>((r / 65535.0) * intensity),
                static_cast<float>((g / 65535.0) * intensity),
                static_cast<float>((b / 65535.0) * intensity)};
    if (alpha > 0) c.albedo = Spectrum::splat(static_cast<float>(albedo));
    return c;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string sidecar_path(const std::string& path) { return path + ".json"; }

// Recovers the per-file scales the sidecar stores: intensity is the peak
// source channel, albedo the largest per-cell albedo.
void scene_scales(const SceneGrid& scene, double& intensity, double& albedo) {
    float peak = 0.0f;
    float amax = 0.0f;
    for (const Cell& c : scene.cells()) {
        peak = std::max(peak, c.source.max_component());
        amax = std::max(amax, c.albedo.max_component());
    }
    intensity = peak > 0.0f ? peak : 1.0;
    albedo = amax;
}

} // namespace

void save_scene_png(const SceneGrid& scene, const std::string& path) {
    const int w = scene.width();
    const int h = scene.height();
    if (w <= 0 || h <= 0) throw std::runtime_error("save_scene_png: empty scene");

    double intensity = 1.0, albedo = 0.0;
    scene_scales(scene, intensity, albedo);

    std::vector<std::uint16_t> row(static_cast<size_t>(w) * 4);
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("save_scene_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("save_scene_png: libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("save_scene_png: write error on " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, w, h, 16, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_set_swap(png); // rows are native little-endian

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Cell& c = scene.at(x, y);
            const double o =
                c.sigma_t.r >= kSigmaMax ? 1.0 : 1.0 - std::exp(-static_cast<double>(c.sigma_t.r));
            row[x * 4 + 0] = quantize16(c.source.r / intensity);
            row[x * 4 + 1] = quantize16(c.source.g / intensity);
            row[x * 4 + 2] = quantize16(c.source.b / intensity);
            row[x * 4 + 3] = quantize16(o);
        }
        png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);

    nlohmann::json j;
    j["intensity"] = intensity;
    j["albedo"] = albedo;
    std::ofstream side(sidecar_path(path));
    if (!side) throw std::runtime_error("save_scene_png: cannot write sidecar");
    side << j.dump(2) << "\n";
}

SceneGrid load_scene_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("load_scene_png: cannot open " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw std::runtime_error("load_scene_png: not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("load_scene_png: libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("load_scene_png: malformed PNG: " + path);
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    if (w <= 0 || h <= 0) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("load_scene_png: zero dimensions");
    }
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);

    // Normalize everything to 16-bit RGBA.
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth < 16) png_set_expand_16(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (!(color & PNG_COLOR_MASK_ALPHA) && !png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_add_alpha(png, 0xFFFF, PNG_FILLER_AFTER);
    png_set_swap(png);
    png_read_update_info(png, info);

    double intensity = 1.0, albedo = 0.0;
    {
        std::ifstream side(sidecar_path(path));
        if (side) {
            nlohmann::json j;
            side >> j;
            intensity = j.value("intensity", 1.0);
            albedo = j.value("albedo", 0.0);
        }
    }

    SceneGrid scene(w, h);
    std::vector<std::uint16_t> row(static_cast<size_t>(w) * 4);
    bool any_light = false;
    double lx0 = 0, ly0 = 0, lx1 = 0, ly1 = 0;
    for (int y = 0; y < h; ++y) {
        png_read_row(png, reinterpret_cast<png_bytep>(row.data()), nullptr);
        for (int x = 0; x < w; ++x) {
            scene.at(x, y) = cell_from_quantized(row[x * 4 + 3], row[x * 4 + 0], row[x * 4 + 1],
                                                 row[x * 4 + 2], intensity, albedo);
            if (!scene.at(x, y).source.is_zero()) {
                if (!any_light) {
                    lx0 = x;
                    ly0 = y;
                    lx1 = x + 1;
                    ly1 = y + 1;
                    any_light = true;
                } else {
                    lx0 = std::min(lx0, static_cast<double>(x));
                    ly0 = std::min(ly0, static_cast<double>(y));
                    lx1 = std::max(lx1, static_cast<double>(x + 1));
                    ly1 = std::max(ly1, static_cast<double>(y + 1));
                }
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (any_light) scene.lights().push_back({lx0, ly0, lx1, ly1});
    return scene;
}

} // namespace hrc
