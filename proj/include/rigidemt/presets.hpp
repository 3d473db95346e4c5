#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rigidemt/conformal.hpp"

namespace rigidemt {

struct Preset {
    std::string name;
    ExteriorMap map;
};

// Bundled shapes: disk, ellipse (a1 = 0.5), egg (a1 = 0.2, a2 = 0.15),
// trilobe (a3 = 0.2). All gamma = 1.
const std::vector<Preset>& presets();

std::optional<ExteriorMap> preset_shape(const std::string& name);

} // namespace rigidemt
