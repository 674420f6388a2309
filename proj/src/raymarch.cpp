#include "hrc/raymarch.hpp"

#include <algorithm>
#include <cmath>

namespace hrc {

// Range reduction rounds a*log2(e) to the nearest integer k, leaving
// |f| <= ln2/2; e^f - 1 comes from an 11-term Taylor polynomial
// (truncation < 3e-13), and for a near 0 the reduction keeps k = 0,
// f = -a, so relative precision survives.
double expm1_neg(double a) {
    const double x = std::max(-a, -708.0) * 1.4426950408889634074;  // -a * log2(e)
    const double k = std::floor(x + 0.5);
    const double f = (x - k) * 0.69314718055994530942;
    double p = 1.0 / 39916800.0;
    p = p * f + 1.0 / 3628800.0;
    p = p * f + 1.0 / 362880.0;
    p = p * f + 1.0 / 40320.0;
    p = p * f + 1.0 / 5040.0;
    p = p * f + 1.0 / 720.0;
    p = p * f + 1.0 / 120.0;
    p = p * f + 1.0 / 24.0;
    p = p * f + 1.0 / 6.0;
    p = p * f + 0.5;
    p = p * f + 1.0;
    const double em1 = p * f;  // e^f - 1
    const int ki = static_cast<int>(k);
    return (1.0 - std::ldexp(1.0, ki)) - std::ldexp(em1, ki);
}

namespace {

struct Accum {
    double r[3] = {0.0, 0.0, 0.0};
    double t[3] = {1.0, 1.0, 1.0};

    void add_cell(const Cell& c, double len) {
        const float* sig = &c.sigma_t.r;
        const float* src = &c.source.r;
        if (sig[0] == sig[1] && sig[1] == sig[2]) {
            // Gray extinction (the common case for image-loaded scenes).
            const double e = expm1_neg(static_cast<double>(sig[0]) * len);
            const double tr = 1.0 - e;
            for (int ch = 0; ch < 3; ++ch) {
                r[ch] += t[ch] * static_cast<double>(src[ch]) * e;
                t[ch] *= tr;
                if (t[ch] < 1e-60) t[ch] = 0.0;  // keep out of the subnormal range
            }
            return;
        }
        for (int ch = 0; ch < 3; ++ch) {
            const double e = expm1_neg(static_cast<double>(sig[ch]) * len);
            r[ch] += t[ch] * static_cast<double>(src[ch]) * e;
            t[ch] *= 1.0 - e;
            if (t[ch] < 1e-60) t[ch] = 0.0;
        }
    }

    RadianceInterval result() const {
        return {{static_cast<float>(r[0]), static_cast<float>(r[1]), static_cast<float>(r[2])},
                flush_tiny({static_cast<float>(t[0]), static_cast<float>(t[1]),
                            static_cast<float>(t[2])})};
    }

    double max_t() const { return std::max(t[0], std::max(t[1], t[2])); }
};

// Clips the parametric range [0, len] of p + t*w to the box [0,w]x[0,h].
// Returns false when the segment misses the box entirely.
bool clip_to_grid(Point2 p, double wx, double wy, double len, double w, double h, double& t0,
                  double& t1) {
    t0 = 0.0;
    t1 = len;
    const double pos[2] = {p.x, p.y};
    const double dir[2] = {wx, wy};
    const double hi[2] = {w, h};
    for (int a = 0; a < 2; ++a) {
        if (dir[a] == 0.0) {
            if (pos[a] < 0.0 || pos[a] > hi[a]) return false;
            continue;
        }
        double ta = (0.0 - pos[a]) / dir[a];
        double tb = (hi[a] - pos[a]) / dir[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    return t0 < t1;
}

} // namespace

RadianceInterval integrate_cell(const Cell& cell, double length) {
    Accum acc;
    acc.add_cell(cell, length);
    return acc.result();
}

RadianceInterval trace(const SceneGrid& scene, Point2 p, Point2 q, TraceStats* stats) {
    if (stats) ++stats->traces;
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double len = std::sqrt(dx * dx + dy * dy);
    if (len == 0.0) return RadianceInterval::identity();

    double t0, t1;
    if (!clip_to_grid(p, dx / len, dy / len, len, scene.width(), scene.height(), t0, t1))
        return RadianceInterval::identity();

    const Point2 a{p.x + t0 * dx / len, p.y + t0 * dy / len};
    const Point2 b{p.x + t1 * dx / len, p.y + t1 * dy / len};
    Accum acc;
    walk_cells(a, b, [&](long ix, long iy, double seg) {
        if (seg <= 0.0) return;
        if (ix < 0 || iy < 0 || ix >= scene.width() || iy >= scene.height()) return;
        acc.add_cell(scene.at(static_cast<int>(ix), static_cast<int>(iy)), seg);
    });
    return acc.result();
}

OccupancyGrid::OccupancyGrid(const SceneGrid& scene) {
    bx_ = (scene.width() + kBlockSize - 1) / kBlockSize;
    by_ = (scene.height() + kBlockSize - 1) / kBlockSize;
    flags_.assign(static_cast<size_t>(bx_) * by_, 0);
    for (int y = 0; y < scene.height(); ++y)
        for (int x = 0; x < scene.width(); ++x) {
            const Cell& c = scene.at(x, y);
            if (!c.sigma_t.is_zero() || !c.source.is_zero())
                flags_[static_cast<size_t>(y / kBlockSize) * bx_ + x / kBlockSize] = 1;
        }
}

Spectrum trace_far(const SceneGrid& scene, const OccupancyGrid& occupancy, Point2 p, Vec2 dir,
                   TraceStats* stats) {
    if (stats) ++stats->traces;
    constexpr double kMinTransmittance = 1e-4;
    const double w = scene.width();
    const double h = scene.height();

    // Parametric span of the grid along the infinite ray.
    double t0, t1;
    const double far = 2.0 * (w + h) + 4.0;
    if (!clip_to_grid(p, dir.x, dir.y, far, w, h, t0, t1)) return Spectrum::zero();

    const int bs = OccupancyGrid::kBlockSize;
    const Point2 a{(p.x + t0 * dir.x) / bs, (p.y + t0 * dir.y) / bs};
    const Point2 b{(p.x + t1 * dir.x) / bs, (p.y + t1 * dir.y) / bs};

    Accum acc;
    bool done = false;
    double tcur = t0;
    walk_cells(a, b, [&](long bxi, long byi, double seg) {
        const double fine_seg = seg * bs;
        const double tstart = tcur;
        tcur += fine_seg;
        if (done || fine_seg <= 0.0) return;
        if (!occupancy.occupied(static_cast<int>(bxi), static_cast<int>(byi))) return;
        const Point2 fa{p.x + tstart * dir.x, p.y + tstart * dir.y};
        const Point2 fb{p.x + tcur * dir.x, p.y + tcur * dir.y};
        walk_cells(fa, fb, [&](long ix, long iy, double fs) {
            if (done || fs <= 0.0) return;
            if (ix < 0 || iy < 0 || ix >= scene.width() || iy >= scene.height()) return;
            acc.add_cell(scene.at(static_cast<int>(ix), static_cast<int>(iy)), fs);
            if (acc.max_t() < kMinTransmittance) done = true;
        });
    });
    return acc.result().radiance;
}

} // namespace hrc
