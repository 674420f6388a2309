#pragma once

#include <string>

#include "hrc/fluence.hpp"

namespace hrc {

// PFM color format ("PF"), bottom-up rows, little-endian (scale -1.0).
// write then read round-trips bit-exactly; big-endian files are byte-swapped
// on read. Throws std::runtime_error on IO or format errors.
void write_pfm(const FluenceField& field, const std::string& path);
FluenceField read_pfm(const std::string& path);

// sRGB preview of clamp(1 - exp(-exposure * fluence)), 8-bit PNG.
void tonemap_png(const FluenceField& field, const std::string& path, double exposure = 1.0);

} // namespace hrc
