#pragma once

// Plain-text device profiles: one `key = value` per line in SI units, '#'
// comments. Keys are DeviceParams field names; omitted keys keep the
// built-in calibrated defaults.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nvcap/device_model.hpp"

namespace nvcap {

DeviceParams parse_profile(std::string_view text);

// Every field at 17 significant digits, in declaration order.
std::string render_profile(const DeviceParams& params, std::string_view comment = {});

std::vector<std::string> builtin_profile_names();
std::string_view builtin_profile_text(std::string_view name);

// A built-in profile name ("default_28nm", "fig5_operating_point") or a file path.
DeviceParams load_profile(const std::string& name_or_path);
void save_profile(const DeviceParams& params, const std::filesystem::path& path, std::string_view comment = {});

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t default_profile_hash();

} // namespace nvcap
