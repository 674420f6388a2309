#include "hrc/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hrc/parallel.hpp"
#include "hrc/raymarch.hpp"

namespace hrc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int ceil_log2(int x) {
    int n = 0;
    while ((1 << n) < x) ++n;
    return n;
}

// Extends the scene with vacuum columns up to a power-of-two width.
SceneGrid pad_width_pow2(const SceneGrid& scene) {
    const int xp = 1 << ceil_log2(scene.width());
    if (xp == scene.width()) return scene;
    SceneGrid out(xp, scene.height());
    for (int y = 0; y < scene.height(); ++y)
        for (int x = 0; x < scene.width(); ++x) out.at(x, y) = scene.at(x, y);
    return out;
}

void check_dir_index(int n, int twice_k) {
    if (n < 0 || twice_k < 0 || twice_k > (2 << n))
        throw std::out_of_range("direction index out of range for level");
}

double dir_angle(int n, int twice_k) {
    return std::atan2(static_cast<double>(twice_k - (1 << n)), static_cast<double>(1 << n));
}

} // namespace

Int2 v_offset(int n, int twice_k) {
    check_dir_index(n, twice_k);
    return {1 << n, twice_k - (1 << n)};
}

double angular_size(int n, int twice_i) {
    check_dir_index(n, twice_i);
    if ((twice_i & 1) == 0) throw std::out_of_range("angular_size expects a half-integer index");
    return dir_angle(n, twice_i + 1) - dir_angle(n, twice_i - 1);
}

CascadeT::CascadeT(int level, int grid_x, int grid_y)
    : level_(level),
      cols_((grid_x + (1 << level) - 1) / (1 << level) + 1),
      rows_(grid_y),
      dirs_((1 << level) + 1),
      values_(static_cast<size_t>(cols_) * rows_ * dirs_) {}

CascadeR::CascadeR(int level, int grid_x, int grid_y)
    : level_(level),
      cols_((grid_x + (1 << level) - 1) / (1 << level) + 1),
      rows_(grid_y),
      dirs_(1 << level),
      values_(static_cast<size_t>(cols_) * rows_ * dirs_) {}

std::vector<CascadeT> build_T(const SceneGrid& scene, const HrcConfig& config, Stats& stats) {
    const int X = scene.width();
    const int Y = scene.height();
    const int N = ceil_log2(X);
    if ((1 << N) != X) throw std::invalid_argument("build_T: width must be a power of two");
    const int init_levels = std::max(1, std::min(config.init_levels, N));

    std::vector<CascadeT> levels;
    levels.reserve(N + 1);
    for (int n = 0; n <= N; ++n) levels.emplace_back(n, X, Y);

    for (int n = 0; n <= N; ++n) {
        CascadeT& t = levels[n];
        const int step = 1 << n;
        const bool direct = config.oracle_trace || n < init_levels;
        std::vector<TraceStats> row_traces(t.rows());
        std::vector<std::uint64_t> row_merges(t.rows(), 0);

        if (direct) {
            parallel_for(t.rows(), config.threads, [&](int y) {
                TraceStats& ts = row_traces[y];
                for (int xi = 0; xi < t.cols(); ++xi) {
                    const int px = xi * step;
                    for (int k = 0; k < t.dirs(); ++k) {
                        if (px >= X) {
                            // Rays starting at or past the right edge stay in vacuum.
                            t.at(xi, y, k) = RadianceInterval::identity();
                            continue;
                        }
                        const Int2 v = v_offset(n, 2 * k);
                        t.at(xi, y, k) =
                            trace(scene, {static_cast<double>(px), static_cast<double>(y)},
                                  {static_cast<double>(px + v.x), static_cast<double>(y + v.y)},
                                  &ts);
                    }
                }
            });
        } else {
            const CascadeT& c = levels[n - 1];
            const int half = 1 << (n - 1);
            parallel_for(t.rows(), config.threads, [&](int y) {
                std::uint64_t merges = 0;
                for (int xi = 0; xi < t.cols(); ++xi) {
                    for (int k = 0; k < t.dirs(); ++k) {
                        if ((k & 1) == 0) {
                            // Exact split into near and far halves.
                            const int kc = k / 2;
                            t.at(xi, y, k) = merge(c.lookup(2 * xi, y, kc),
                                                   c.lookup(2 * xi + 1, y + 2 * kc - half, kc));
                            merges += 1;
                        } else {
                            // Blend the two bent two-segment approximations.
                            const int kp = (k + 1) / 2;
                            const int km = (k - 1) / 2;
                            const RadianceInterval f_p =
                                merge(c.lookup(2 * xi, y, kp),
                                      c.lookup(2 * xi + 1, y + 2 * kp - half, km));
                            const RadianceInterval f_m =
                                merge(c.lookup(2 * xi, y, km),
                                      c.lookup(2 * xi + 1, y + 2 * km - half, kp));
                            t.at(xi, y, k) = {(f_p.radiance + f_m.radiance) * 0.5f,
                                              (f_p.transmittance + f_m.transmittance) * 0.5f};
                            merges += 2;
                        }
                    }
                }
                row_merges[y] = merges;
            });
        }
        for (const auto& ts : row_traces) stats.dda_traces += ts.traces;
        for (auto m : row_merges) stats.interval_merges += m;
    }
    return levels;
}

CascadeR merge_down(const CascadeR& r_next, const CascadeT& t_n, const CascadeT& t_next, int n,
                    const HrcConfig& config, Stats& stats) {
    const int X = (t_n.cols() - 1) * (1 << n);
    CascadeR r(n, X, t_n.rows());
    const int pow_n = 1 << n;
    const int pow_n1 = 2 << n;

    // Cone arcs per half-integer direction at level n+1.
    std::vector<double> arc(1 << (n + 1));
    for (size_t s = 0; s < arc.size(); ++s)
        arc[s] = angular_size(n + 1, 2 * static_cast<int>(s) + 1);

    std::vector<std::uint64_t> row_merges(r.rows(), 0);
    parallel_for(r.rows(), config.threads, [&](int y) {
        std::uint64_t merges = 0;
        for (int xi = 0; xi < r.cols(); ++xi) {
            for (int slot = 0; slot < r.dirs(); ++slot) {
                const int ti = 2 * slot + 1; // twice the half-integer direction
                const int tj_p = 2 * ti + 1;
                const int tj_m = 2 * ti - 1;
                AngularFluence f_p, f_m;
                if (xi & 1) {
                    // Trace along the cone edges to the next column, then
                    // continue in the nearest higher-cascade direction.
                    const int tk_p = ti + 1;
                    const int tk_m = ti - 1;
                    f_p = merge(scale_arc(arc[(tj_p - 1) / 2], t_n.lookup(xi, y, tk_p / 2)),
                                r_next.lookup((xi + 1) / 2, y + tk_p - pow_n, (tj_p - 1) / 2));
                    f_m = merge(scale_arc(arc[(tj_m - 1) / 2], t_n.lookup(xi, y, tk_m / 2)),
                                r_next.lookup((xi + 1) / 2, y + tk_m - pow_n, (tj_m - 1) / 2));
                    merges += 2;
                } else {
                    // Average the in-place value with the value interpolated
                    // along a double-length step.
                    const int kp = ti + 1; // integer directions at level n+1
                    const int km = ti - 1;
                    const AngularFluence f_p0 = r_next.lookup(xi / 2, y, (tj_p - 1) / 2);
                    const AngularFluence f_m0 = r_next.lookup(xi / 2, y, (tj_m - 1) / 2);
                    const AngularFluence f_p1 =
                        merge(scale_arc(arc[(tj_p - 1) / 2], t_next.lookup(xi / 2, y, kp)),
                              r_next.lookup(xi / 2 + 1, y + 2 * kp - pow_n1, (tj_p - 1) / 2));
                    const AngularFluence f_m1 =
                        merge(scale_arc(arc[(tj_m - 1) / 2], t_next.lookup(xi / 2, y, km)),
                              r_next.lookup(xi / 2 + 1, y + 2 * km - pow_n1, (tj_m - 1) / 2));
                    merges += 2;
                    f_p = {(f_p0.value + f_p1.value) * 0.5f,
                           (f_p0.transmittance + f_p1.transmittance) * 0.5f};
                    f_m = {(f_m0.value + f_m1.value) * 0.5f,
                           (f_m0.transmittance + f_m1.transmittance) * 0.5f};
                }
                r.at(xi, y, slot) = {f_p.value + f_m.value,
                                     (f_p.transmittance + f_m.transmittance) * 0.5f};
            }
        }
        row_merges[y] = merges;
    });
    for (auto m : row_merges) stats.interval_merges += m;
    return r;
}

CascadeR solve_quadrant(const SceneGrid& scene, const HrcConfig& config, Stats& stats) {
    const SceneGrid padded = pad_width_pow2(scene);
    const int N = ceil_log2(padded.width());

    auto t0 = Clock::now();
    const std::vector<CascadeT> t_levels = build_T(padded, config, stats);
    stats.merge_up_ms += ms_since(t0);

    t0 = Clock::now();
    CascadeR r(N, padded.width(), padded.height()); // zero: no lights beyond the region
    for (int n = N - 1; n >= 0; --n)
        r = merge_down(r, t_levels[n], t_levels[n + 1], n, config, stats);
    stats.merge_down_ms += ms_since(t0);
    return r;
}

FluenceField cross_blur(const FluenceField& field, const SceneGrid& scene, double threshold) {
    FluenceField out = field;
    std::vector<float> opacity_map(static_cast<size_t>(field.width) * field.height);
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x)
            opacity_map[static_cast<size_t>(y) * field.width + x] = static_cast<float>(
                expm1_neg(static_cast<double>(scene.at(x, y).sigma_t.mean())));
    auto opacity = [&](int x, int y) {
        return static_cast<double>(opacity_map[static_cast<size_t>(y) * field.width + x]);
    };
    static constexpr int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x) {
            const double oc = opacity(x, y);
            Spectrum sum = field.at(x, y) * (4.0f / 8.0f);
            float center_w = 4.0f / 8.0f;
            for (const auto& d : off) {
                const int nx = x + d[0];
                const int ny = y + d[1];
                if (nx < 0 || ny < 0 || nx >= field.width || ny >= field.height ||
                    std::abs(opacity(nx, ny) - oc) > threshold) {
                    center_w += 1.0f / 8.0f;
                    continue;
                }
                sum += field.at(nx, ny) * (1.0f / 8.0f);
            }
            out.at(x, y) = sum + field.at(x, y) * (center_w - 4.0f / 8.0f);
        }
    return out;
}

FluenceField gather_fluence(const SceneGrid& scene, const HrcConfig& config) {
    FluenceField field(scene.width(), scene.height());
    SceneGrid world = scene;
    Stats stats;

    for (int pass = 0; pass < 4; ++pass) {
        CascadeR r0 = solve_quadrant(world, config, stats);
        const auto t0 = Clock::now();
        parallel_for(field.height, config.threads, [&](int y) {
            for (int x = 0; x < field.width; ++x)
                field.at(x, y) += r0.lookup(x + 1, y, 0).value;
        });
        stats.gather_ms += ms_since(t0);
        world = rotate90(world);
        field = rotate90(field);
    }

    if (config.blur_enabled) {
        const auto t0 = Clock::now();
        field = cross_blur(field, scene, config.blur_opacity_threshold);
        stats.blur_ms += ms_since(t0);
    }
    field.stats = stats;
    return field;
}

FluenceField solve_multibounce(const SceneGrid& scene, const HrcConfig& config) {
    if (config.bounces < 1) throw std::invalid_argument("solve_multibounce: bounces must be >= 1");
    FluenceField field = gather_fluence(scene, config);
    Stats total = field.stats;
    for (int b = 1; b < config.bounces; ++b) {
        const SceneGrid fed = inject_bounce_source(scene, field);
        field = gather_fluence(fed, config);
        total += field.stats;
    }
    field.stats = total;
    return field;
}

} // namespace hrc
