#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrc/fluence.hpp"

namespace hrc {

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Region {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
};

struct DiffReport {
    double rmse = 0.0;            // channel-averaged RMS of a - b over the region
    double max_abs_error = 0.0;
    double peak_reference = 0.0;  // peak fluence of b, the normalization
    double rmse_normalized = 0.0; // rmse / peak_reference (0 when peak is 0)
    Region region;
};

// Error between a and b (b is the reference) over the region, full image by
// default. Computed in linear radiometric space. Throws std::invalid_argument
// on dimension mismatch or a region out of bounds.
DiffReport rmse(const FluenceField& a, const FluenceField& b,
                std::optional<Region> region = std::nullopt);

// Named crop presets for figure-style comparisons (e.g. the occluder
// penumbra). Throws std::invalid_argument for an unknown preset.
Region region_preset(const std::string& name, int width, int height);

struct BenchRow {
    int size = 0;
    double merge_up_ms = 0.0;
    double merge_down_ms = 0.0;
    double total_ms = 0.0;  // includes gather and blur, so it can exceed the two stage columns
    std::uint64_t dda_traces = 0;
};

// CSV with header size,merge_up_ms,merge_down_ms,total_ms,dda_traces.
void bench_record(const std::vector<BenchRow>& rows, const std::string& path);

} // namespace hrc
