#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrc/fluence.hpp"
#include "hrc/spectrum.hpp"

namespace hrc {

// Extinction floor/ceiling: opaque cells transmit e^-20 per pixel length.
inline constexpr float kSigmaMax = 20.0f;

// One grid cell of homogeneous participating medium. The source emits with
// radiance density source * sigma_t, so emission needs nonzero extinction.
struct Cell {
    Spectrum sigma_t = Spectrum::zero();  // extinction per pixel length
    Spectrum source = Spectrum::zero();   // source radiance L_s
    Spectrum albedo = Spectrum::zero();   // fraction of fluence re-emitted per bounce

    constexpr bool operator==(const Cell& o) const = default;
};

// Axis-aligned bounds of one light, in pixel coordinates (half-open).
struct LightBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

// Dense row-major grid of cells. Cell (i, j) spans [i, i+1) x [j, j+1) in
// pixel coordinates. Immutable after construction by convention.
class SceneGrid {
public:
    SceneGrid() = default;
    SceneGrid(int w, int h) : width_(w), height_(h), cells_(static_cast<size_t>(w) * h) {}

    int width() const { return width_; }
    int height() const { return height_; }

    Cell& at(int x, int y) { return cells_[static_cast<size_t>(y) * width_ + x]; }
    const Cell& at(int x, int y) const { return cells_[static_cast<size_t>(y) * width_ + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    const std::vector<Cell>& cells() const { return cells_; }
    std::vector<Cell>& cells() { return cells_; }

    const std::vector<LightBox>& lights() const { return lights_; }
    std::vector<LightBox>& lights() { return lights_; }

    bool operator==(const SceneGrid& o) const {
        return width_ == o.width_ && height_ == o.height_ && cells_ == o.cells_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<Cell> cells_;
    std::vector<LightBox> lights_;
};

// Counterclockwise quarter turn, including light boxes.
SceneGrid rotate90(const SceneGrid& scene);

// Adds each cell's share of the previous bounce back into its source:
// source += albedo * fluence / (2 pi). Extinction is untouched.
// Throws std::invalid_argument on dimension mismatch.
SceneGrid inject_bounce_source(const SceneGrid& scene, const FluenceField& fluence);

// Named procedural scenes.
struct SceneParams {
    double sigma_t = 0.1;     // uniform_medium extinction
    double source = 1.0;      // uniform_medium source radiance
    double intensity = 1.0;   // peak emission for emissive generators
};

// Deterministic generator for the experiment scenes. Throws
// std::invalid_argument on an unknown name or size < 16.
SceneGrid gen_scene(const std::string& name, int size, const SceneParams& params = {});

const std::vector<std::string>& scene_names();

} // namespace hrc
