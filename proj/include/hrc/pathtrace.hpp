#pragma once

#include <cstdint>

#include "hrc/fluence.hpp"
#include "hrc/raymarch.hpp"
#include "hrc/scene.hpp"

namespace hrc {

struct PtConfig {
    int spp = 64;
    enum class Mode { naive, nee } mode = Mode::naive;
    std::uint64_t seed = 0;
    int max_bounces = 1;
    int threads = 0;
};

// j-th angle of the golden-ratio sequence with a per-pixel phase offset:
// 2 pi * frac(offset + j * phi), phi = (sqrt(5) - 1) / 2.
double golden_angle(std::int64_t j, double offset);

// Deterministic per-pixel phase in [0, 1) decorrelating neighboring pixels.
double pixel_offset(int px, int py, std::uint64_t seed);

// Fluence estimate at the pixel center from spp golden-ratio rays over the
// full circle.
Spectrum estimate_fluence_naive(const SceneGrid& scene, const OccupancyGrid& occupancy, int px,
                                int py, const PtConfig& cfg, TraceStats* stats = nullptr);

// Direct-light estimate sampling only the angular intervals subtended by the
// declared light boxes, weighted by interval arc. Emission outside every
// interval is ignored. Throws std::runtime_error when the scene declares no
// lights.
Spectrum estimate_fluence_nee(const SceneGrid& scene, const OccupancyGrid& occupancy, int px,
                              int py, const PtConfig& cfg, TraceStats* stats = nullptr);

// Whole-image reference render. max_bounces > 1 iterates the single-bounce
// estimate through inject_bounce_source, mirroring the cascade solver's
// bounce feedback.
FluenceField render_reference(const SceneGrid& scene, const PtConfig& cfg);

// Doubles spp from start_spp until the whole-image RMSE between successive
// doublings drops below rel_tol * peak; returns the last estimate.
FluenceField converge_reference(const SceneGrid& scene, PtConfig cfg, int start_spp = 64,
                                double rel_tol = 0.002, int max_spp = 1 << 20);

} // namespace hrc
