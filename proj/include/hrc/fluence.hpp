#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrc/spectrum.hpp"

namespace hrc {

// Instrumentation counters for one solver run. Trace and merge counts are
// exact and deterministic; times are wall-clock per stage.
struct Stats {
    std::uint64_t dda_traces = 0;
    std::uint64_t interval_merges = 0;
    double merge_up_ms = 0.0;
    double merge_down_ms = 0.0;
    double gather_ms = 0.0;
    double blur_ms = 0.0;
    int spp = 0;

    Stats& operator+=(const Stats& o) {
        dda_traces += o.dda_traces;
        interval_merges += o.interval_merges;
        merge_up_ms += o.merge_up_ms;
        merge_down_ms += o.merge_down_ms;
        gather_ms += o.gather_ms;
        blur_ms += o.blur_ms;
        return *this;
    }

    double total_ms() const { return merge_up_ms + merge_down_ms + gather_ms + blur_ms; }

    // Fixed field names; the bench harness parses this.
    std::string to_json() const;
};

// Per-pixel spectral fluence plus the stats of the run that produced it.
struct FluenceField {
    int width = 0;
    int height = 0;
    std::vector<Spectrum> fluence;
    Stats stats;

    FluenceField() = default;
    FluenceField(int w, int h) : width(w), height(h), fluence(static_cast<size_t>(w) * h) {}

    Spectrum& at(int x, int y) { return fluence[static_cast<size_t>(y) * width + x]; }
    const Spectrum& at(int x, int y) const { return fluence[static_cast<size_t>(y) * width + x]; }

    float peak() const {
        float m = 0.0f;
        for (const auto& s : fluence) m = std::max(m, s.max_component());
        return m;
    }
};

// Counterclockwise quarter turn: out(x, y) = in(w - 1 - y, x), dims swapped.
FluenceField rotate90(const FluenceField& f);

} // namespace hrc
