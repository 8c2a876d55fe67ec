#include "nvcap/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nvcap/errors.hpp"

namespace nvcap {

std::string format_real(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string json_real(double value) { return std::isfinite(value) ? format_real(value) : "null"; }

template <class T>
std::string optional_field(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

} // namespace

void write_sweep_csv(std::ostream& out, std::size_t step_index, const std::vector<CVCurve>& curves) {
    out << "step_index,branch,v_gate_V,capacitance_F,temperature_K\n";
    for (const CVCurve& curve : curves) {
        for (const CVSample& s : curve.samples) {
            out << step_index << ',' << to_string(curve.branch) << ',' << format_real(s.v_gate) << ','
                << format_real(s.capacitance) << ',' << format_real(curve.temperature) << '\n';
        }
    }
}

void write_retention_csv(std::ostream& out, const std::vector<RetentionSample>& samples) {
    out << "time_s,retained_fraction,cap_at_0V_F,percent_decay\n";
    for (const RetentionSample& s : samples) {
        out << format_real(s.time) << ',' << format_real(s.retained_fraction) << ',' << format_real(s.cap_at_0v)
            << ',' << format_real(s.percent_decay) << '\n';
    }
}

void write_mac_csv(std::ostream& out, const MacResult& result) {
    out << "col,charge_C,v_out_V,ideal_count,sigma_v_V,saturated\n";
    for (std::size_t j = 0; j < result.outputs.size(); ++j) {
        out << j << ',' << format_real(result.charges[j]) << ',' << format_real(result.outputs[j]) << ','
            << result.ideal_counts[j] << ',' << format_real(result.noise_sigma_per_column[j]) << ','
            << static_cast<int>(result.saturated[j]) << '\n';
    }
}

void write_enob_csv(std::ostream& out, const std::vector<EnobReport>& reports) {
    out << "temperature_K,method,sigma_charge_C,sigma_vout_V,snr_dB,enob_bits,trials,seed\n";
    for (const EnobReport& r : reports) {
        out << format_real(r.temperature) << ',' << to_string(r.method) << ',' << format_real(r.sigma_charge) << ','
            << format_real(r.sigma_vout) << ',' << format_real(r.snr_db) << ',' << format_real(r.enob) << ','
            << optional_field(r.trials) << ',' << optional_field(r.seed) << '\n';
    }
}

void write_enob_json(std::ostream& out, const std::vector<EnobReport>& reports) {
    out << "{\n  \"reports\": [";
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const EnobReport& r = reports[k];
        out << (k == 0 ? "\n" : ",\n");
        out << "    {\"temperature_K\": " << json_real(r.temperature) << ", \"method\": \"" << to_string(r.method)
            << "\", \"sigma_charge_C\": " << json_real(r.sigma_charge)
            << ", \"sigma_vout_V\": " << json_real(r.sigma_vout) << ", \"snr_dB\": " << json_real(r.snr_db)
            << ", \"enob_bits\": " << json_real(r.enob)
            << ", \"trials\": " << (r.trials ? std::to_string(*r.trials) : "null")
            << ", \"seed\": " << (r.seed ? std::to_string(*r.seed) : "null") << "}";
    }
    out << (reports.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void emit_report(const std::vector<EnobReport>& reports, ReportFormat format, const std::filesystem::path& path) {
    std::ostringstream text;
    if (format == ReportFormat::csv) {
        write_enob_csv(text, reports);
    } else {
        write_enob_json(text, reports);
    }
    write_text_file(path, text.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace nvcap
