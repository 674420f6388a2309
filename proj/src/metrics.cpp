#include "hrc/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hrc {

DiffReport rmse(const FluenceField& a, const FluenceField& b, std::optional<Region> region) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("rmse: dimension mismatch");
    Region reg = region.value_or(Region{0, 0, a.width, a.height});
    if (reg.x0 < 0 || reg.y0 < 0 || reg.x1 > a.width || reg.y1 > a.height || reg.width() <= 0 ||
        reg.height() <= 0)
        throw std::invalid_argument("rmse: region out of bounds");

    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (int y = reg.y0; y < reg.y1; ++y)
        for (int x = reg.x0; x < reg.x1; ++x) {
            const Spectrum d = a.at(x, y) - b.at(x, y);
            const double c[3] = {d.r, d.g, d.b};
            for (double v : c) {
                sum_sq += v * v;
                max_abs = std::max(max_abs, std::abs(v));
            }
        }
    const double count = 3.0 * reg.width() * reg.height();

    DiffReport rep;
    rep.rmse = std::sqrt(sum_sq / count);
    rep.max_abs_error = max_abs;
    rep.peak_reference = b.peak();
    rep.rmse_normalized = rep.peak_reference > 0.0 ? rep.rmse / rep.peak_reference : 0.0;
    rep.region = reg;
    return rep;
}

Region region_preset(const std::string& name, int width, int height) {
    auto fr = [&](double fx0, double fy0, double fx1, double fy1) {
        return Region{static_cast<int>(fx0 * width), static_cast<int>(fy0 * height),
                      static_cast<int>(fx1 * width), static_cast<int>(fy1 * height)};
    };
    if (name == "full") return {0, 0, width, height};
    // Area behind the occluder bar, covering the penumbra edges.
    if (name == "penumbra") return fr(0.55, 0.2, 1.0, 0.8);
    // Area behind the pinhole wall.
    if (name == "behind-wall") return fr(0.52, 0.0, 1.0, 1.0);
    throw std::invalid_argument("region_preset: unknown preset '" + name + "'");
}

void bench_record(const std::vector<BenchRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("bench_record: empty row list");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("bench_record: cannot write " + path);
    out << "size,merge_up_ms,merge_down_ms,total_ms,dda_traces\n";
    for (const BenchRow& r : rows)
        out << r.size << "," << r.merge_up_ms << "," << r.merge_down_ms << "," << r.total_ms << ","
            << r.dda_traces << "\n";
}

} // namespace hrc
