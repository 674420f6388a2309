#pragma once

#include <cstdint>
#include <string>

#include "hrc/scene.hpp"

namespace hrc {

// PNG channel mapping: alpha is per-pixel opacity o, sigma_t = -ln(1 - o)
// (gray, clamped to kSigmaMax; o = 1 maps to the clamp exactly); RGB is
// linear emission scaled by the sidecar "intensity". The sidecar "albedo"
// applies to every non-vacuum cell.
//
// Both the loader and the generators build cells through cell_from_quantized
// so that save followed by load reproduces cells bit-exactly.
Cell cell_from_quantized(std::uint16_t alpha, std::uint16_t r, std::uint16_t g, std::uint16_t b,
                         double intensity, double albedo);

// Quantizes [0,1] to a 16-bit level, round to nearest.
std::uint16_t quantize16(double v);

// Reads a 8/16-bit RGBA PNG plus optional sidecar JSON ("<path>.json",
// keys "intensity" and "albedo"). Light boxes are computed from the bounds
// of emissive pixels. Throws std::runtime_error on IO or format errors.
SceneGrid load_scene_png(const std::string& path);

// Writes a 16-bit RGBA PNG and its sidecar. Inverse of load_scene_png for
// scenes built from quantized parameters.
void save_scene_png(const SceneGrid& scene, const std::string& path);

} // namespace hrc
