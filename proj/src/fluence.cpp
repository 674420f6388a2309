#include "hrc/fluence.hpp"

#include <nlohmann/json.hpp>

namespace hrc {

std::string Stats::to_json() const {
    nlohmann::json j;
    j["dda_traces"] = dda_traces;
    j["interval_merges"] = interval_merges;
    j["stage_times_ms"] = {{"merge_up", merge_up_ms},
                           {"merge_down", merge_down_ms},
                           {"gather", gather_ms},
                           {"blur", blur_ms}};
    return j.dump(2);
}

FluenceField rotate90(const FluenceField& f) {
    FluenceField out(f.height, f.width);
    out.stats = f.stats;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) out.at(x, y) = f.at(f.width - 1 - y, x);
    return out;
}

} // namespace hrc
