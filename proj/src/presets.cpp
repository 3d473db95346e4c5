#include "rigidemt/presets.hpp"

namespace rigidemt {

const std::vector<Preset>& presets() {
    static const std::vector<Preset> kPresets = {
        {"disk", ExteriorMap{1.0, {}}},
        {"ellipse", ExteriorMap{1.0, {{0.0, 0.0}, {0.5, 0.0}}}},
        {"egg", ExteriorMap{1.0, {{0.0, 0.0}, {0.2, 0.0}, {0.15, 0.0}}}},
        {"trilobe", ExteriorMap{1.0, {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.2, 0.0}}}},
    };
    return kPresets;
}

std::optional<ExteriorMap> preset_shape(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p.map;
    }
    return std::nullopt;
}

} // namespace rigidemt
