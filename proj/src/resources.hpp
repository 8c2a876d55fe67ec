#pragma once

// Shipped profiles and presets, embedded at configure time from profiles/
// and presets/.

#include <optional>
#include <span>
#include <string_view>

namespace nvcap::resources {

struct Resource {
    std::string_view file_name;
    std::string_view text;
};

std::span<const Resource> all();
std::optional<std::string_view> find(std::string_view file_name);

} // namespace nvcap::resources
