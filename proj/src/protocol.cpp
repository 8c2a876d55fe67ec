#include "nvcap/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nvcap/errors.hpp"
#include "nvcap/report.hpp"
#include "resources.hpp"

namespace nvcap {

namespace {

constexpr std::string_view k_scheme_suffix = ".scheme";

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
        const std::size_t start = k;
        while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
        if (k > start) tokens.push_back(line.substr(start, k - start));
    }
    return tokens;
}

// "<number>[u|µ|m|k]<unit>", unit letter case-insensitive.
double parse_quantity(std::string_view token, char unit, std::size_t line) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || !std::isfinite(value)) {
        throw ParseError(line, "bad number '" + std::string(token) + "'");
    }
    std::string_view suffix(res.ptr, static_cast<std::size_t>(last - res.ptr));
    if (suffix.empty() || std::toupper(static_cast<unsigned char>(suffix.back())) != unit) {
        throw ParseError(line, "missing unit '" + std::string(1, unit) + "' in '" + std::string(token) + "'");
    }
    suffix.remove_suffix(1);
    // Divide by exact powers of ten so "10us" is the double nearest 1e-5.
    if (suffix == "u" || suffix == "\xC2\xB5") return value / 1e6;
    if (suffix == "m") return value / 1e3;
    if (suffix == "k") return value * 1e3;
    if (!suffix.empty()) {
        throw ParseError(line, "unknown unit prefix '" + std::string(suffix) + "' in '" + std::string(token) + "'");
    }
    return value;
}

void expect_keyword(const std::vector<std::string_view>& tokens, std::size_t idx, std::string_view keyword,
                    std::size_t line) {
    if (upper(tokens[idx]) != keyword) {
        throw ParseError(line, "expected " + std::string(keyword) + ", got '" + std::string(tokens[idx]) + "'");
    }
}

void expect_arity(const std::vector<std::string_view>& tokens, std::size_t n, std::string_view usage,
                  std::size_t line) {
    if (tokens.size() != n) throw ParseError(line, "usage: " + std::string(usage));
}

void require_positive(double v, const char* what, std::size_t line) {
    if (!(v > 0.0)) throw ParseError(line, std::string(what) + " must be positive");
}

SchemeStep parse_step(const std::vector<std::string_view>& t, std::size_t line) {
    const std::string keyword = upper(t[0]);
    if (keyword == "TEMP") {
        expect_arity(t, 2, "TEMP <kelvin>K", line);
        const double temp = parse_quantity(t[1], 'K', line);
        require_positive(temp, "temperature", line);
        return TempStep{temp};
    }
    if (keyword == "PULSE") {
        expect_arity(t, 3, "PULSE <volts>V <seconds>s", line);
        const PulseStep p{parse_quantity(t[1], 'V', line), parse_quantity(t[2], 'S', line)};
        require_positive(p.width, "pulse width", line);
        return p;
    }
    if (keyword == "SWEEP") {
        expect_arity(t, 7, "SWEEP <v1>V <v2>V STEP <dv>V DWELL <t>s", line);
        expect_keyword(t, 3, "STEP", line);
        expect_keyword(t, 5, "DWELL", line);
        const SweepStep s{parse_quantity(t[1], 'V', line), parse_quantity(t[2], 'V', line),
                          parse_quantity(t[4], 'V', line), parse_quantity(t[6], 'S', line)};
        require_positive(s.step, "sweep step", line);
        require_positive(s.dwell, "dwell", line);
        if (s.v_start == s.v_end) throw ParseError(line, "sweep start and end coincide");
        if (s.step > std::abs(s.v_end - s.v_start)) throw ParseError(line, "sweep step exceeds sweep range");
        return s;
    }
    if (keyword == "HOLD") {
        expect_arity(t, 5, "HOLD <volts>V <seconds>s SAMPLE <t>s", line);
        expect_keyword(t, 3, "SAMPLE", line);
        const HoldStep h{parse_quantity(t[1], 'V', line), parse_quantity(t[2], 'S', line),
                         parse_quantity(t[4], 'S', line)};
        require_positive(h.duration, "hold duration", line);
        require_positive(h.sample_interval, "sample interval", line);
        if (h.sample_interval > h.duration) throw ParseError(line, "sample interval exceeds hold duration");
        return h;
    }
    throw ParseError(line, "unknown keyword '" + std::string(t[0]) + "'");
}

[[noreturn]] void rethrow_with_step(std::size_t index, const SchemeStep& step) {
    const std::string prefix = "step " + std::to_string(index) + " (" + step_keyword(step) + "): ";
    try {
        throw;
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const ExtractionError& e) {
        throw ExtractionError(prefix + e.what());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    }
}

} // namespace

const char* step_keyword(const SchemeStep& step) {
    static constexpr const char* names[] = {"TEMP", "PULSE", "SWEEP", "HOLD"};
    return names[step.index()];
}

PulseScheme parse_scheme(std::string_view text, std::string name) {
    PulseScheme scheme;
    scheme.name = std::move(name);
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        scheme.steps.push_back(parse_step(tokens, line_no));
    }
    if (scheme.steps.empty()) throw ParseError(std::max<std::size_t>(line_no, 1), "scheme has no steps");
    return scheme;
}

std::string render_scheme(const PulseScheme& scheme) {
    std::ostringstream out;
    for (const SchemeStep& step : scheme.steps) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, TempStep>) {
                    out << "TEMP " << format_real(s.temperature) << "K\n";
                } else if constexpr (std::is_same_v<T, PulseStep>) {
                    out << "PULSE " << format_real(s.amplitude) << "V " << format_real(s.width) << "s\n";
                } else if constexpr (std::is_same_v<T, SweepStep>) {
                    out << "SWEEP " << format_real(s.v_start) << "V " << format_real(s.v_end) << "V STEP "
                        << format_real(s.step) << "V DWELL " << format_real(s.dwell) << "s\n";
                } else {
                    out << "HOLD " << format_real(s.bias) << "V " << format_real(s.duration) << "s SAMPLE "
                        << format_real(s.sample_interval) << "s\n";
                }
            },
            step);
    }
    return out.str();
}

ProtocolTrace run_scheme(const DeviceParams& params, const PulseScheme& scheme, const NvCapState& initial_state,
                         double initial_temperature) {
    params.validate();
    if (!(initial_temperature > 0.0)) throw DomainError("initial temperature must be positive");

    ProtocolTrace trace;
    trace.scheme_name = scheme.name;
    trace.temperature_history.push_back(initial_temperature);
    NvCapState state = initial_state;
    double temperature = initial_temperature;

    for (std::size_t idx = 0; idx < scheme.steps.size(); ++idx) {
        const SchemeStep& step = scheme.steps[idx];
        StepRecord record;
        record.step_index = idx;
        record.step = step;
        try {
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, TempStep>) {
                        if (!(s.temperature > 0.0)) throw DomainError("temperature must be positive");
                        temperature = s.temperature;
                        trace.temperature_history.push_back(temperature);
                    } else if constexpr (std::is_same_v<T, PulseStep>) {
                        state = apply_pulse(params, state, {s.amplitude, s.width});
                    } else if constexpr (std::is_same_v<T, SweepStep>) {
                        SweepResult sweep =
                            quasi_static_cv_sweep(params, state, {s.v_start, s.v_end, s.step, s.dwell, false}, temperature);
                        record.curve = std::move(sweep.branches.front());
                        state = sweep.final_state;
                    } else {
                        RetentionResult hold =
                            dc_stress_retention(params, state, s.bias, s.duration, s.sample_interval, temperature);
                        record.retention = std::move(hold.samples);
                        state = hold.final_state;
                    }
                },
                step);
        } catch (const Error&) {
            rethrow_with_step(idx, step);
        }
        record.temperature = temperature;
        record.state_after = state;
        trace.records.push_back(std::move(record));
    }
    trace.final_state = state;
    return trace;
}

std::vector<std::string> list_presets() {
    std::vector<std::string> names;
    for (const auto& r : resources::all()) {
        if (r.file_name.ends_with(k_scheme_suffix)) {
            names.emplace_back(r.file_name.substr(0, r.file_name.size() - k_scheme_suffix.size()));
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

PulseScheme load_preset(std::string_view name) {
    const auto text = resources::find(std::string(name) + std::string(k_scheme_suffix));
    if (!text) throw NotFoundError("no preset named '" + std::string(name) + "'");
    return parse_scheme(*text, std::string(name));
}

PulseScheme load_scheme(const std::string& name_or_path) {
    if (resources::find(name_or_path + std::string(k_scheme_suffix))) return load_preset(name_or_path);
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw NotFoundError("scheme '" + name_or_path + "' is neither a preset nor a readable file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scheme(buf.str(), std::filesystem::path(name_or_path).stem().string());
}

std::vector<std::filesystem::path> write_trace_csvs(const ProtocolTrace& trace, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const StepRecord& r : trace.records) {
        if (!r.curve && !r.retention) continue;
        std::ostringstream text;
        if (r.curve) {
            write_sweep_csv(text, r.step_index, {*r.curve});
        } else {
            write_retention_csv(text, *r.retention);
        }
        const auto path = dir / (trace.scheme_name + "_" + std::to_string(r.step_index) + ".csv");
        write_text_file(path, text.str());
        written.push_back(path);
    }
    return written;
}

} // namespace nvcap
