#pragma once

#include "hrc/spectrum.hpp"

namespace hrc {

// The radiance contributed by a line segment together with the fraction of
// light the segment lets through. The element every solver in this project
// composes.
struct RadianceInterval {
    Spectrum radiance = Spectrum::zero();
    Spectrum transmittance = Spectrum::one();

    // Vacuum segment: contributes nothing, blocks nothing.
    static constexpr RadianceInterval identity() { return {Spectrum::zero(), Spectrum::one()}; }

    constexpr bool operator==(const RadianceInterval& o) const = default;
};

// Radiance integrated over an arc of directions. Same representation as
// RadianceInterval; the value is arc-premultiplied rather than per-ray.
struct AngularFluence {
    Spectrum value = Spectrum::zero();
    Spectrum transmittance = Spectrum::one();

    constexpr bool operator==(const AngularFluence& o) const = default;
};

// Transmittance products decay geometrically and drag the attenuated
// radiance terms down with them; flushing both to zero once they are far
// below visibility keeps merge chains out of the CPU's slow subnormal
// range, so solver cost stays scene independent. The floor sits above
// sqrt(FLT_MIN) so even a product of two barely-surviving values is still
// a normal float.
inline constexpr float kFlushFloor = 1e-19f;

inline constexpr Spectrum flush_tiny(Spectrum t) {
    // Multiply by the comparison result instead of selecting, so the flush
    // compiles branch-free and costs the same on every input.
    return {t.r * static_cast<float>(t.r >= kFlushFloor),
            t.g * static_cast<float>(t.g >= kFlushFloor),
            t.b * static_cast<float>(t.b >= kFlushFloor)};
}

// Near-to-far composition of two segments. Same algebra as premultiplied
// alpha blending with transmittance = 1 - alpha.
inline constexpr RadianceInterval merge(const RadianceInterval& near_iv,
                                        const RadianceInterval& far_iv) {
    return {flush_tiny(near_iv.radiance + near_iv.transmittance * far_iv.radiance),
            flush_tiny(near_iv.transmittance * far_iv.transmittance)};
}

// Radiance-only variant: composes a near segment with the radiance arriving
// from beyond it.
inline constexpr Spectrum merge_radiance(const RadianceInterval& near_iv,
                                         const Spectrum& far_radiance) {
    return near_iv.radiance + near_iv.transmittance * far_radiance;
}

// Fluence-valued variants used by the cascade merge-down. Merge operates on
// fluence pairs of equal angular size exactly like on radiance pairs.
inline constexpr AngularFluence merge(const AngularFluence& near_fl,
                                      const AngularFluence& far_fl) {
    return {flush_tiny(near_fl.value + near_fl.transmittance * far_fl.value),
            flush_tiny(near_fl.transmittance * far_fl.transmittance)};
}

inline constexpr Spectrum merge_value(const AngularFluence& near_fl, const Spectrum& far_value) {
    return flush_tiny(near_fl.value + near_fl.transmittance * far_value);
}

// Converts per-ray radiance into angular fluence with the given arc,
// leaving transmittance untouched.
inline constexpr AngularFluence scale_arc(double arc, const RadianceInterval& x) {
    return {x.radiance * static_cast<float>(arc), x.transmittance};
}

} // namespace hrc
