#include "hrc/pathtrace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hrc/metrics.hpp"
#include "hrc/parallel.hpp"

namespace hrc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGoldenFrac = 0.618033988749894848; // (sqrt(5) - 1) / 2

inline double frac(double x) { return x - std::floor(x); }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d649db133111ebull;
    return x ^ (x >> 31);
}

// Angular intervals [a, b] with b > a, wrapped onto the circle.
struct Arc {
    double a, b;
    double length() const { return b - a; }
};

// Minimal arc subtending an axis-aligned box from p; full circle when p is
// inside the box.
bool subtended_arc(const LightBox& box, double px, double py, Arc& out) {
    if (px >= box.x0 && px <= box.x1 && py >= box.y0 && py <= box.y1) {
        out = {0.0, kTwoPi};
        return true;
    }
    const double cx[4] = {box.x0, box.x1, box.x1, box.x0};
    const double cy[4] = {box.y0, box.y0, box.y1, box.y1};
    const double ref = std::atan2(0.5 * (box.y0 + box.y1) - py, 0.5 * (box.x0 + box.x1) - px);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < 4; ++i) {
        double th = std::atan2(cy[i] - py, cx[i] - px) - ref;
        th = std::remainder(th, kTwoPi);
        lo = std::min(lo, th);
        hi = std::max(hi, th);
    }
    out = {ref + lo, ref + hi};
    return out.length() > 0.0;
}

// Union of arcs as disjoint sorted intervals on [0, 2pi).
std::vector<Arc> arc_union(std::vector<Arc> arcs) {
    std::vector<Arc> parts;
    for (const Arc& a : arcs) {
        if (a.length() >= kTwoPi) return {{0.0, kTwoPi}};
        double lo = frac(a.a / kTwoPi) * kTwoPi;
        double hi = lo + a.length();
        if (hi <= kTwoPi) {
            parts.push_back({lo, hi});
        } else {
            parts.push_back({lo, kTwoPi});
            parts.push_back({0.0, hi - kTwoPi});
        }
    }
    std::sort(parts.begin(), parts.end(), [](const Arc& x, const Arc& y) { return x.a < y.a; });
    std::vector<Arc> merged;
    for (const Arc& p : parts) {
        if (!merged.empty() && p.a <= merged.back().b)
            merged.back().b = std::max(merged.back().b, p.b);
        else
            merged.push_back(p);
    }
    return merged;
}

// Maps u in [0,1) onto the union, proportionally to arc length.
double arc_lookup(const std::vector<Arc>& arcs, double total, double u) {
    double target = u * total;
    for (const Arc& a : arcs) {
        if (target <= a.length()) return a.a + target;
        target -= a.length();
    }
    return arcs.back().b;
}

} // namespace

double golden_angle(std::int64_t j, double offset) {
    return kTwoPi * frac(offset + static_cast<double>(j) * kGoldenFrac);
}

double pixel_offset(int px, int py, std::uint64_t seed) {
    const std::uint64_t h = splitmix64(
        splitmix64(seed ^ (static_cast<std::uint64_t>(px) << 32)) ^ static_cast<std::uint64_t>(py));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Spectrum estimate_fluence_naive(const SceneGrid& scene, const OccupancyGrid& occupancy, int px,
                                int py, const PtConfig& cfg, TraceStats* stats) {
    const double offset = pixel_offset(px, py, cfg.seed);
    const Point2 p{px + 0.5, py + 0.5};
    Spectrum sum = Spectrum::zero();
    for (int j = 0; j < cfg.spp; ++j) {
        const double th = golden_angle(j, offset);
        sum += trace_far(scene, occupancy, p, {std::cos(th), std::sin(th)}, stats);
    }
    return sum * static_cast<float>(kTwoPi / cfg.spp);
}

Spectrum estimate_fluence_nee(const SceneGrid& scene, const OccupancyGrid& occupancy, int px,
                              int py, const PtConfig& cfg, TraceStats* stats) {
    if (scene.lights().empty())
        throw std::runtime_error("estimate_fluence_nee: scene declares no lights");
    const Point2 p{px + 0.5, py + 0.5};
    std::vector<Arc> arcs;
    for (const LightBox& box : scene.lights()) {
        Arc a;
        if (subtended_arc(box, p.x, p.y, a)) arcs.push_back(a);
    }
    if (arcs.empty()) return Spectrum::zero();
    const std::vector<Arc> arc_set = arc_union(std::move(arcs));
    double total = 0.0;
    for (const Arc& a : arc_set) total += a.length();

    const double offset = pixel_offset(px, py, cfg.seed);
    Spectrum sum = Spectrum::zero();
    for (int j = 0; j < cfg.spp; ++j) {
        const double th = arc_lookup(arc_set, total, frac(offset + j * kGoldenFrac));
        sum += trace_far(scene, occupancy, p, {std::cos(th), std::sin(th)}, stats);
    }
    return sum * static_cast<float>(total / cfg.spp);
}

namespace {

FluenceField render_single_bounce(const SceneGrid& scene, const PtConfig& cfg) {
    FluenceField field(scene.width(), scene.height());
    const OccupancyGrid occupancy(scene);
    parallel_for(field.height, cfg.threads, [&](int y) {
        for (int x = 0; x < field.width; ++x)
            field.at(x, y) = cfg.mode == PtConfig::Mode::nee
                                 ? estimate_fluence_nee(scene, occupancy, x, y, cfg)
                                 : estimate_fluence_naive(scene, occupancy, x, y, cfg);
    });
    field.stats.spp = cfg.spp;
    return field;
}

} // namespace

FluenceField render_reference(const SceneGrid& scene, const PtConfig& cfg) {
    if (cfg.spp < 1) throw std::invalid_argument("render_reference: spp must be >= 1");
    FluenceField field = render_single_bounce(scene, cfg);
    for (int b = 1; b < cfg.max_bounces; ++b) {
        const SceneGrid fed = inject_bounce_source(scene, field);
        field = render_single_bounce(fed, cfg);
    }
    field.stats.spp = cfg.spp;
    return field;
}

FluenceField converge_reference(const SceneGrid& scene, PtConfig cfg, int start_spp,
                                double rel_tol, int max_spp) {
    cfg.spp = start_spp;
    FluenceField prev = render_reference(scene, cfg);
    while (cfg.spp * 2 <= max_spp) {
        cfg.spp *= 2;
        FluenceField next = render_reference(scene, cfg);
        const DiffReport d = rmse(prev, next);
        prev = std::move(next);
        if (d.peak_reference > 0.0 && d.rmse < rel_tol * d.peak_reference) break;
    }
    return prev;
}

} // namespace hrc
