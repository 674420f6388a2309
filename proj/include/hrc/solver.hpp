#pragma once

#include <vector>

#include "hrc/fluence.hpp"
#include "hrc/radiance.hpp"
#include "hrc/scene.hpp"

namespace hrc {

struct HrcConfig {
    int init_levels = 3;                  // cascade levels filled by direct trace
    bool blur_enabled = true;             // 1px cross blur after quadrant summation
    double blur_opacity_threshold = 0.5;  // neighbor opacity gate for the blur
    bool oracle_trace = false;            // direct trace at every level (no T merging)
    int bounces = 1;
    int threads = 0;                      // 0 = hardware concurrency
};

struct Int2 {
    int x = 0;
    int y = 0;
    constexpr bool operator==(const Int2&) const = default;
};

// Direction indices are stored doubled so the half-integer directions of R
// stay integral: T at level n uses even twice-indices 0..2^(n+1), R uses the
// odd ones 1..2^(n+1)-1.

// Offset to the next probe in direction twice_k/2: (2^n, twice_k - 2^n).
// Throws std::out_of_range for an index outside the level's range.
Int2 v_offset(int n, int twice_k);

// Angular size of the cone in direction twice_i/2 (twice_i odd): the angle
// between the two bracketing probe offsets. Always positive; the sizes at
// one level sum to pi/2.
double angular_size(int n, int twice_i);

// Merged ray intervals T_n(p, k) ~ Trace(p, p + v_n(k)) for one level.
// Probes sit at pixel corners (x * 2^n, y); one extra x column is allocated
// so the gather offset lookup stays in range.
class CascadeT {
public:
    CascadeT() = default;
    CascadeT(int level, int grid_x, int grid_y);

    int level() const { return level_; }
    int cols() const { return cols_; }
    int rows() const { return rows_; }
    int dirs() const { return dirs_; }

    RadianceInterval& at(int xi, int y, int k) {
        return values_[(static_cast<size_t>(y) * cols_ + xi) * dirs_ + k];
    }
    const RadianceInterval& at(int xi, int y, int k) const {
        return values_[(static_cast<size_t>(y) * cols_ + xi) * dirs_ + k];
    }
    // Out-of-range probes are vacuum.
    RadianceInterval lookup(int xi, int y, int k) const {
        if (xi < 0 || xi >= cols_ || y < 0 || y >= rows_) return RadianceInterval::identity();
        return at(xi, y, k);
    }

private:
    int level_ = 0;
    int cols_ = 0;
    int rows_ = 0;
    int dirs_ = 0;
    std::vector<RadianceInterval> values_;
};

// Angular fluence R_n(p, i) for one level; direction slot s holds the
// half-integer direction twice_i = 2s + 1.
class CascadeR {
public:
    CascadeR() = default;
    CascadeR(int level, int grid_x, int grid_y);

    int level() const { return level_; }
    int cols() const { return cols_; }
    int rows() const { return rows_; }
    int dirs() const { return dirs_; }

    AngularFluence& at(int xi, int y, int slot) {
        return values_[(static_cast<size_t>(y) * cols_ + xi) * dirs_ + slot];
    }
    const AngularFluence& at(int xi, int y, int slot) const {
        return values_[(static_cast<size_t>(y) * cols_ + xi) * dirs_ + slot];
    }
    // Out-of-range probes carry no light: zero fluence, unit transmittance.
    AngularFluence lookup(int xi, int y, int slot) const {
        if (xi < 0 || xi >= cols_ || y < 0 || y >= rows_) return AngularFluence{};
        return at(xi, y, slot);
    }

private:
    int level_ = 0;
    int cols_ = 0;
    int rows_ = 0;
    int dirs_ = 0;
    std::vector<AngularFluence> values_;
};

// Builds the acceleration structure bottom-up for one quadrant. The scene
// width must be a power of two; levels 0..N are returned. Levels below
// config.init_levels (or all of them in oracle mode) are filled by direct
// trace; the rest by merging half-length children. Probes whose rays start
// at or beyond the right edge are vacuum and cost no trace.
std::vector<CascadeT> build_T(const SceneGrid& scene, const HrcConfig& config, Stats& stats);

// One top-down step: computes R_n from R_{n+1} and the acceleration
// structure, switching between the odd-x merge rule and the even-x
// interpolation rule per probe column.
CascadeR merge_down(const CascadeR& r_next, const CascadeT& t_n, const CascadeT& t_next, int n,
                    const HrcConfig& config, Stats& stats);

// Full single-quadrant solve: build_T, then merge down from N-1 to 0.
// Pads the scene width to a power of two internally.
CascadeR solve_quadrant(const SceneGrid& scene, const HrcConfig& config, Stats& stats);

// Sums the four quadrants, rotating world and accumulator between passes,
// then applies the cross blur if enabled.
FluenceField gather_fluence(const SceneGrid& scene, const HrcConfig& config = {});

// 1px cross blur with kernel (1/8)[center 4, N/S/E/W 1 each]; neighbors
// whose opacity differs from the center's by more than the threshold give
// their weight back to the center, as do out-of-range neighbors.
FluenceField cross_blur(const FluenceField& field, const SceneGrid& scene, double threshold);

// Iterated gather_fluence with bounce feedback through inject_bounce_source.
FluenceField solve_multibounce(const SceneGrid& scene, const HrcConfig& config = {});

} // namespace hrc
