#pragma once

// Line-oriented measurement-scheme language and its replay engine.
//
//   TEMP  <kelvin>K
//   PULSE <volts>V <seconds>s
//   SWEEP <v1>V <v2>V STEP <dv>V DWELL <t>s
//   HOLD  <volts>V <seconds>s SAMPLE <t>s
//
// Keywords are case-insensitive; numbers take an optional u, m or k
// multiplier before the unit ("10us", "50mV", "1ks"). '#' starts a comment.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nvcap/device_model.hpp"

namespace nvcap {

struct TempStep {
    double temperature;
    bool operator==(const TempStep&) const = default;
};

struct PulseStep {
    double amplitude;
    double width;
    bool operator==(const PulseStep&) const = default;
};

struct SweepStep {
    double v_start;
    double v_end;
    double step;
    double dwell;
    bool operator==(const SweepStep&) const = default;
};

struct HoldStep {
    double bias;
    double duration;
    double sample_interval;
    bool operator==(const HoldStep&) const = default;
};

using SchemeStep = std::variant<TempStep, PulseStep, SweepStep, HoldStep>;

const char* step_keyword(const SchemeStep& step);

struct PulseScheme {
    std::string name;
    std::vector<SchemeStep> steps;

    bool operator==(const PulseScheme&) const = default;
};

PulseScheme parse_scheme(std::string_view text, std::string name = "scheme");

// Canonical text form: one step per line, base SI units, 17 significant digits.
std::string render_scheme(const PulseScheme& scheme);

struct StepRecord {
    std::size_t step_index = 0;
    SchemeStep step;
    double temperature = 0.0; // temperature in effect while the step ran
    NvCapState state_after;
    std::optional<CVCurve> curve;                        // SWEEP
    std::optional<std::vector<RetentionSample>> retention; // HOLD

    bool operator==(const StepRecord&) const = default;
};

struct ProtocolTrace {
    std::string scheme_name;
    std::vector<double> temperature_history; // initial temperature, then each TEMP step
    std::vector<StepRecord> records;
    NvCapState final_state;
};

inline constexpr double default_temperature = 290.0;

// Errors from the device model are rethrown with the failing step index.
ProtocolTrace run_scheme(const DeviceParams& params, const PulseScheme& scheme, const NvCapState& initial_state = {},
                         double initial_temperature = default_temperature);

std::vector<std::string> list_presets();
PulseScheme load_preset(std::string_view name);

// Accepts a preset name or a path to a .scheme file.
PulseScheme load_scheme(const std::string& name_or_path);

// One CSV per SWEEP or HOLD step, named <scheme>_<step>.csv. Returns the
// written paths in step order.
std::vector<std::filesystem::path> write_trace_csvs(const ProtocolTrace& trace, const std::filesystem::path& dir);

} // namespace nvcap
