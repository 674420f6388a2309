#include "hrc/image_io.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hrc {

namespace {

float byteswap_f32(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    u = ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) | ((u & 0x0000ff00u) << 8) |
        ((u & 0x000000ffu) << 24);
    std::memcpy(&v, &u, 4);
    return v;
}

constexpr bool host_little_endian() { return std::endian::native == std::endian::little; }

} // namespace

void write_pfm(const FluenceField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pfm: cannot open " + path);
    out << "PF\n" << field.width << " " << field.height << "\n-1.0\n";
    // Bottom-up row order, little-endian payload.
    std::vector<float> row(static_cast<size_t>(field.width) * 3);
    for (int y = field.height - 1; y >= 0; --y) {
        for (int x = 0; x < field.width; ++x) {
            const Spectrum& s = field.at(x, y);
            float r = s.r, g = s.g, b = s.b;
            if (!host_little_endian()) {
                r = byteswap_f32(r);
                g = byteswap_f32(g);
                b = byteswap_f32(b);
            }
            row[x * 3 + 0] = r;
            row[x * 3 + 1] = g;
            row[x * 3 + 2] = b;
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
    }
    if (!out) throw std::runtime_error("write_pfm: write failed on " + path);
}

FluenceField read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pfm: cannot open " + path);
    std::string magic;
    int w = 0, h = 0;
    double scale = 0.0;
    in >> magic >> w >> h >> scale;
    if (magic != "PF" || w <= 0 || h <= 0 || scale == 0.0 || !in)
        throw std::runtime_error("read_pfm: malformed header in " + path);
    in.get(); // single whitespace after the scale
    const bool file_little = scale < 0.0;

    FluenceField field(w, h);
    std::vector<float> row(static_cast<size_t>(w) * 3);
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()), row.size() * sizeof(float));
        if (!in) throw std::runtime_error("read_pfm: truncated payload in " + path);
        for (int x = 0; x < w; ++x) {
            float r = row[x * 3 + 0], g = row[x * 3 + 1], b = row[x * 3 + 2];
            if (file_little != host_little_endian()) {
                r = byteswap_f32(r);
                g = byteswap_f32(g);
                b = byteswap_f32(b);
            }
            field.at(x, y) = {r, g, b};
        }
    }
    return field;
}

void tonemap_png(const FluenceField& field, const std::string& path, double exposure) {
    if (exposure <= 0.0) throw std::invalid_argument("tonemap_png: exposure must be > 0");
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("tonemap_png: cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("tonemap_png: write error on " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, field.width, field.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    auto encode = [exposure](float v) {
        const double lin = 1.0 - std::exp(-exposure * std::max(0.0, static_cast<double>(v)));
        const double srgb =
            lin <= 0.0031308 ? 12.92 * lin : 1.055 * std::pow(lin, 1.0 / 2.4) - 0.055;
        return static_cast<std::uint8_t>(std::lround(std::min(1.0, srgb) * 255.0));
    };
    std::vector<std::uint8_t> row(static_cast<size_t>(field.width) * 3);
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            const Spectrum& s = field.at(x, y);
            row[x * 3 + 0] = encode(s.r);
            row[x * 3 + 1] = encode(s.g);
            row[x * 3 + 2] = encode(s.b);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace hrc
