#pragma once

// Text emission for every result type. Reals are written with 17
// significant digits so files round-trip exactly and identical data always
// produces identical bytes.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nvcap/crossbar.hpp"
#include "nvcap/device_model.hpp"
#include "nvcap/enob.hpp"

namespace nvcap {

std::string format_real(double value);

// step_index,branch,v_gate_V,capacitance_F,temperature_K
void write_sweep_csv(std::ostream& out, std::size_t step_index, const std::vector<CVCurve>& curves);

// time_s,retained_fraction,cap_at_0V_F,percent_decay
void write_retention_csv(std::ostream& out, const std::vector<RetentionSample>& samples);

// col,charge_C,v_out_V,ideal_count,sigma_v_V,saturated
void write_mac_csv(std::ostream& out, const MacResult& result);

// temperature_K,method,sigma_charge_C,sigma_vout_V,snr_dB,enob_bits,trials,seed
void write_enob_csv(std::ostream& out, const std::vector<EnobReport>& reports);

// {"reports": [ {<same field names>}, ... ]}
void write_enob_json(std::ostream& out, const std::vector<EnobReport>& reports);

enum class ReportFormat { csv, json };

void emit_report(const std::vector<EnobReport>& reports, ReportFormat format, const std::filesystem::path& path);

// Writes bytes verbatim (binary mode), creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace nvcap
