#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hrc/radiance.hpp"
#include "hrc/scene.hpp"

namespace hrc {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Per-context trace counter; callers running in parallel keep one each and
// sum afterwards.
struct TraceStats {
    std::uint64_t traces = 0;
};

// 1 - e^-a for a >= 0, branch-free with constant cost on every input
// (unlike libm exp) so that per-cell work does not depend on scene content.
// Relative error < 1e-12.
double expm1_neg(double a);

// Analytic radiance/transmittance of a segment of given length through one
// homogeneous cell.
RadianceInterval integrate_cell(const Cell& cell, double length);

// Walks the segment p -> q cell by cell (Amanatides-Woo), invoking
// visit(ix, iy, seg_length) for every cell intersection in near-to-far
// order, including out-of-bounds cells. Segment lengths sum to |q - p|.
//
// Endpoints exactly on cell boundaries resolve toward the direction of
// travel; a zero direction component resolves to the cell at
// floor(coordinate).
template <typename Visit>
void walk_cells(Point2 p, Point2 q, Visit&& visit);

// Exact trace of the segment p -> q: near-to-far merge of integrate_cell
// over every cell intersection. Cells outside the grid are vacuum. Never
// terminates early. Increments stats->traces by one when stats is non-null.
RadianceInterval trace(const SceneGrid& scene, Point2 p, Point2 q, TraceStats* stats = nullptr);

// One occupancy bit per 8x8 block: set iff any covered cell has extinction
// or source. Used by the path tracer's two-level DDA.
class OccupancyGrid {
public:
    static constexpr int kBlockSize = 8;

    OccupancyGrid() = default;
    explicit OccupancyGrid(const SceneGrid& scene);

    int blocks_x() const { return bx_; }
    int blocks_y() const { return by_; }
    bool occupied(int bx, int by) const {
        if (bx < 0 || bx >= bx_ || by < 0 || by >= by_) return false;
        return flags_[static_cast<size_t>(by) * bx_ + bx] != 0;
    }

private:
    int bx_ = 0;
    int by_ = 0;
    std::vector<std::uint8_t> flags_;
};

// Radiance of the infinite ray from p in direction dir (normalized), traced
// with the two-level DDA: empty 8x8 blocks are skipped and the march stops
// once accumulated transmittance drops below 1e-4.
Spectrum trace_far(const SceneGrid& scene, const OccupancyGrid& occupancy, Point2 p, Vec2 dir,
                   TraceStats* stats = nullptr);

// --- implementation ---

template <typename Visit>
void walk_cells(Point2 p, Point2 q, Visit&& visit) {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double len = std::sqrt(dx * dx + dy * dy);
    if (len == 0.0) return;
    const double wx = dx / len;
    const double wy = dy / len;

    auto start_index = [](double pos, double w) -> long {
        if (w > 0.0) return static_cast<long>(std::floor(pos));
        if (w < 0.0) return static_cast<long>(std::ceil(pos)) - 1;
        return static_cast<long>(std::floor(pos));
    };

    long ix = start_index(p.x, wx);
    long iy = start_index(p.y, wy);
    const long step_x = wx > 0.0 ? 1 : (wx < 0.0 ? -1 : 0);
    const long step_y = wy > 0.0 ? 1 : (wy < 0.0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    const double tdx = wx != 0.0 ? 1.0 / std::abs(wx) : inf;
    const double tdy = wy != 0.0 ? 1.0 / std::abs(wy) : inf;
    double tmx = wx > 0.0   ? (static_cast<double>(ix + 1) - p.x) / wx
                 : wx < 0.0 ? (static_cast<double>(ix) - p.x) / wx
                            : inf;
    double tmy = wy > 0.0   ? (static_cast<double>(iy + 1) - p.y) / wy
                 : wy < 0.0 ? (static_cast<double>(iy) - p.y) / wy
                            : inf;

    double t = 0.0;
    while (t < len) {
        const double tn = std::min(std::min(tmx, tmy), len);
        visit(ix, iy, tn - t);
        t = tn;
        if (t >= len) break;
        // Exact corner crossings step both axes at once.
        const bool sx = tmx <= tmy;
        const bool sy = tmy <= tmx;
        if (sx) {
            ix += step_x;
            tmx += tdx;
        }
        if (sy) {
            iy += step_y;
            tmy += tdy;
        }
    }
}

} // namespace hrc
