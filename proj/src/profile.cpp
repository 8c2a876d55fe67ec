#include "nvcap/profile.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nvcap/errors.hpp"
#include "nvcap/report.hpp"
#include "resources.hpp"

namespace nvcap {

namespace {

struct Field {
    std::string_view key;
    double DeviceParams::*member;
};

constexpr std::array k_fields = {
    Field{"c_max", &DeviceParams::c_max},
    Field{"c_ov", &DeviceParams::c_ov},
    Field{"vth_hcs_ref", &DeviceParams::vth_hcs_ref},
    Field{"vth_lcs_ref", &DeviceParams::vth_lcs_ref},
    Field{"t_ref", &DeviceParams::t_ref},
    Field{"alpha_shift", &DeviceParams::alpha_shift},
    Field{"slope", &DeviceParams::slope},
    Field{"beta_trap", &DeviceParams::beta_trap},
    Field{"k_trap_ref", &DeviceParams::k_trap_ref},
    Field{"gamma_trap", &DeviceParams::gamma_trap},
    Field{"v_trap_onset", &DeviceParams::v_trap_onset},
    Field{"tau0", &DeviceParams::tau0},
    Field{"e_a", &DeviceParams::e_a},
    Field{"beta_stretch", &DeviceParams::beta_stretch},
    Field{"v_switch", &DeviceParams::v_switch},
    Field{"w_switch", &DeviceParams::w_switch},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

constexpr std::string_view k_profile_suffix = ".prof";

} // namespace

DeviceParams parse_profile(std::string_view text) {
    DeviceParams params;
    std::set<std::string_view> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        const Field* field = nullptr;
        for (const Field& f : k_fields) {
            if (f.key == key) field = &f;
        }
        if (field == nullptr) throw ParseError(line_no, "unknown profile key '" + std::string(key) + "'");
        if (!seen.insert(field->key).second) throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");

        double v = 0.0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
        if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
            throw ParseError(line_no, "bad number '" + std::string(value) + "' for " + std::string(key));
        }
        params.*(field->member) = v;
    }
    params.validate();
    return params;
}

std::string render_profile(const DeviceParams& params, std::string_view comment) {
    std::ostringstream out;
    if (!comment.empty()) {
        std::string_view rest = comment;
        while (!rest.empty()) {
            const auto nl = rest.find('\n');
            out << "# " << rest.substr(0, nl) << '\n';
            rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        }
    }
    for (const Field& f : k_fields) {
        out << f.key << " = " << format_real(params.*(f.member)) << '\n';
    }
    return out.str();
}

std::vector<std::string> builtin_profile_names() {
    std::vector<std::string> names;
    for (const auto& r : resources::all()) {
        if (r.file_name.ends_with(k_profile_suffix)) {
            names.emplace_back(r.file_name.substr(0, r.file_name.size() - k_profile_suffix.size()));
        }
    }
    return names;
}

std::string_view builtin_profile_text(std::string_view name) {
    const auto text = resources::find(std::string(name) + std::string(k_profile_suffix));
    if (!text) throw NotFoundError("no built-in profile named '" + std::string(name) + "'");
    return *text;
}

DeviceParams load_profile(const std::string& name_or_path) {
    if (const auto text = resources::find(name_or_path + std::string(k_profile_suffix))) return parse_profile(*text);
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw NotFoundError("profile '" + name_or_path + "' is neither built in nor a readable file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile(buf.str());
}

void save_profile(const DeviceParams& params, const std::filesystem::path& path, std::string_view comment) {
    write_text_file(path, render_profile(params, comment));
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t default_profile_hash() { return fnv1a64(builtin_profile_text("default_28nm")); }

} // namespace nvcap
