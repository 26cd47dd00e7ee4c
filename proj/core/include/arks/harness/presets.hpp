#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace arks::harness {

struct Preset {
  std::string_view name;
  std::string_view text;  ///< YAML config
};

/// Presets compiled into the library, sorted by name.
const std::vector<Preset>& presets();
std::optional<Preset> find_preset(std::string_view name);

}  // namespace arks::harness
