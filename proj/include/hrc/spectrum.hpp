#pragma once

#include <algorithm>
#include <cmath>

namespace hrc {

// Three independent channels (RGB). Used both for radiance and for
// dimensionless transmittance.
struct Spectrum {
    float r = 0.0f;
    float g = 0.0f;
    float b = 0.0f;

    static constexpr Spectrum zero() { return {0.0f, 0.0f, 0.0f}; }
    static constexpr Spectrum one() { return {1.0f, 1.0f, 1.0f}; }
    static constexpr Spectrum splat(float v) { return {v, v, v}; }

    constexpr Spectrum operator+(const Spectrum& o) const { return {r + o.r, g + o.g, b + o.b}; }
    constexpr Spectrum operator-(const Spectrum& o) const { return {r - o.r, g - o.g, b - o.b}; }
    constexpr Spectrum operator*(const Spectrum& o) const { return {r * o.r, g * o.g, b * o.b}; }
    constexpr Spectrum operator*(float s) const { return {r * s, g * s, b * s}; }
    constexpr Spectrum operator/(float s) const { return {r / s, g / s, b / s}; }
    Spectrum& operator+=(const Spectrum& o) {
        r += o.r;
        g += o.g;
        b += o.b;
        return *this;
    }
    Spectrum& operator*=(const Spectrum& o) {
        r *= o.r;
        g *= o.g;
        b *= o.b;
        return *this;
    }
    constexpr bool operator==(const Spectrum& o) const = default;

    float max_component() const { return std::max(r, std::max(g, b)); }
    float min_component() const { return std::min(r, std::min(g, b)); }
    float mean() const { return (r + g + b) / 3.0f; }
    bool is_zero() const { return r == 0.0f && g == 0.0f && b == 0.0f; }
    bool all_finite() const { return std::isfinite(r) && std::isfinite(g) && std::isfinite(b); }
};

inline constexpr Spectrum operator*(float s, const Spectrum& x) { return x * s; }

} // namespace hrc
