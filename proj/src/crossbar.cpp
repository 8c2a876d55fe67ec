#include "nvcap/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "nvcap/errors.hpp"
#include "nvcap/kernels.hpp"
#include "nvcap/philox.hpp"
#include "nvcap/thermal.hpp"

namespace nvcap {

namespace {

void require_inputs(const CrossbarArray& array, std::size_t n) {
    if (n != array.rows()) {
        throw DimensionError("input length " + std::to_string(n) + " does not match " +
                             std::to_string(array.rows()) + " rows");
    }
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::vector<std::uint8_t>> read_bit_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path.string());
    std::vector<std::vector<std::uint8_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::uint8_t> row;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            field = trim(field);
            if (field == "0") {
                row.push_back(0);
            } else if (field == "1") {
                row.push_back(1);
            } else {
                throw ParseError(line_no, path.filename().string() + ": expected 0 or 1, got '" + field + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void CrossbarConfig::validate() const {
    if (rows < 1 || cols < 1) throw DomainError("crossbar needs at least one row and one column");
    if (!(v_read > 0.0) || !std::isfinite(v_read)) throw DomainError("v_read must be positive");
    if (!(c_ref > 0.0) || !std::isfinite(c_ref)) throw DomainError("c_ref must be positive");
    if (!(temperature > 0.0) || !std::isfinite(temperature)) throw DomainError("temperature must be positive");
    if (!(v_out_max > 0.0)) throw DomainError("v_out_max must be positive");
}

CrossbarConfig CrossbarConfig::for_device(const DeviceParams& params, std::size_t rows, std::size_t cols,
                                          double temperature) {
    CrossbarConfig config;
    config.rows = rows;
    config.cols = cols;
    config.c_ref = static_cast<double>(rows) * params.c_max;
    config.temperature = temperature;
    return config;
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

CrossbarArray::CrossbarArray(DeviceParams params, CrossbarConfig config, std::vector<NvCapState> cells)
    : params_(params), config_(config), cells_(std::move(cells)) {
    params_.validate();
    config_.validate();
    if (cells_.size() != config_.rows * config_.cols) {
        throw DimensionError("cell grid has " + std::to_string(cells_.size()) + " cells, expected " +
                             std::to_string(config_.rows) + "x" + std::to_string(config_.cols));
    }
    capacitance_.resize(cells_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        capacitance_[k] = small_signal_capacitance(params_, cells_[k], 0.0, config_.temperature);
    }
    const std::vector<double> ones(config_.rows, 1.0);
    noise_capacitance_.resize(config_.cols);
    kernels::accumulate_rows(ones, capacitance_, noise_capacitance_);
    if (config_.noise_capacitance == NoiseCapacitance::bitline_plus_reference) {
        for (double& c : noise_capacitance_) c += config_.c_ref;
    }
}

CrossbarArray CrossbarArray::at_temperature(double temperature) const {
    CrossbarConfig config = config_;
    config.temperature = temperature;
    return CrossbarArray(params_, config, cells_);
}

CrossbarArray CrossbarArray::with_cells(std::vector<NvCapState> cells) const {
    return CrossbarArray(params_, config_, std::move(cells));
}

CrossbarArray program_array(const BinaryMatrix& weights, const DeviceParams& params, const CrossbarConfig& config) {
    if (weights.rows() != config.rows || weights.cols() != config.cols) {
        throw DimensionError("weight matrix is " + std::to_string(weights.rows()) + "x" +
                             std::to_string(weights.cols()) + " but the array is " + std::to_string(config.rows) +
                             "x" + std::to_string(config.cols));
    }
    const Pulse program{4.0, 10e-6};
    const Pulse erase{-4.0, 10e-6};
    std::vector<NvCapState> cells;
    cells.reserve(config.rows * config.cols);
    for (std::size_t i = 0; i < config.rows; ++i) {
        for (std::size_t j = 0; j < config.cols; ++j) {
            cells.push_back(apply_pulse(params, NvCapState{}, weights(i, j) ? program : erase));
        }
    }
    return CrossbarArray(params, config, std::move(cells));
}

BinaryMatrix weight_bits(const CrossbarArray& array) {
    BinaryMatrix bits(array.rows(), array.cols());
    for (std::size_t i = 0; i < array.rows(); ++i) {
        for (std::size_t j = 0; j < array.cols(); ++j) {
            bits(i, j) = array.cell(i, j).polarization == Polarization::hcs ? 1 : 0;
        }
    }
    return bits;
}

std::vector<double> charge_phase(const CrossbarArray& array, std::span<const double> input_levels) {
    require_inputs(array, input_levels.size());
    std::vector<double> drive(input_levels.size());
    for (std::size_t i = 0; i < drive.size(); ++i) {
        if (!std::isfinite(input_levels[i])) throw DomainError("input levels must be finite");
        drive[i] = input_levels[i] * array.config().v_read;
    }
    std::vector<double> charges(array.cols());
    kernels::accumulate_rows(drive, array.capacitance(), charges);
    return charges;
}

std::vector<double> charge_phase(const CrossbarArray& array, std::span<const std::uint8_t> inputs) {
    require_inputs(array, inputs.size());
    std::vector<double> levels(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i] > 1) throw DomainError("binary inputs must be 0 or 1");
        levels[i] = inputs[i];
    }
    return charge_phase(array, std::span<const double>(levels));
}

DischargeResult discharge_phase(std::span<const double> charges, const CrossbarConfig& config) {
    if (!(config.c_ref > 0.0)) throw DomainError("c_ref must be positive");
    DischargeResult result;
    result.outputs.resize(charges.size());
    result.saturated.resize(charges.size());
    for (std::size_t j = 0; j < charges.size(); ++j) {
        const double v = charges[j] / config.c_ref;
        result.outputs[j] = std::clamp(v, 0.0, config.v_out_max);
        result.saturated[j] = result.outputs[j] != v ? 1 : 0;
    }
    return result;
}

std::vector<double> sample_noise_charges(const CrossbarArray& array, const NoiseSpec& noise) {
    std::vector<double> out(array.cols(), 0.0);
    if (!noise.enabled) return out;
    const auto c_noise = array.noise_capacitance();
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double sigma = thermal_charge_sigma(array.config().temperature, c_noise[j]);
        const auto normals =
            standard_normal_pair(noise.seed, noise.draw, static_cast<std::uint32_t>(j), StreamTag::mac_noise);
        out[j] = sigma * normals.first;
    }
    return out;
}

MacResult mac(const CrossbarArray& array, std::span<const std::uint8_t> inputs, const NoiseSpec& noise) {
    MacResult result;
    result.charges = charge_phase(array, inputs);
    if (noise.enabled) {
        const std::vector<double> dq = sample_noise_charges(array, noise);
        for (std::size_t j = 0; j < dq.size(); ++j) result.charges[j] += dq[j];
        result.rng_seed = noise.seed;
    }
    DischargeResult out = discharge_phase(result.charges, array.config());
    result.outputs = std::move(out.outputs);
    result.saturated = std::move(out.saturated);
    result.ideal_counts = ideal_dot_oracle(weight_bits(array), inputs);

    const auto c_noise = array.noise_capacitance();
    result.noise_sigma_per_column.resize(array.cols());
    for (std::size_t j = 0; j < array.cols(); ++j) {
        result.noise_sigma_per_column[j] =
            thermal_charge_sigma(array.config().temperature, c_noise[j]) / array.config().c_ref;
    }
    return result;
}

std::vector<std::int64_t> ideal_dot_oracle(const BinaryMatrix& weights, std::span<const std::uint8_t> inputs) {
    if (inputs.size() != weights.rows()) {
        throw DimensionError("input length " + std::to_string(inputs.size()) + " does not match " +
                             std::to_string(weights.rows()) + " weight rows");
    }
    std::vector<std::int64_t> counts(weights.cols(), 0);
    for (std::size_t j = 0; j < weights.cols(); ++j) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < weights.rows(); ++i) {
            sum += static_cast<std::int64_t>(weights(i, j)) * static_cast<std::int64_t>(inputs[i]);
        }
        counts[j] = sum;
    }
    return counts;
}

std::vector<std::int64_t> recover_counts(const CrossbarArray& array, std::span<const double> charges,
                                         std::span<const std::uint8_t> inputs) {
    require_inputs(array, inputs.size());
    const double t = array.config().temperature;
    const double c_hcs = small_signal_capacitance(array.params(), NvCapState::programmed(Polarization::hcs), 0.0, t);
    const double c_lcs = small_signal_capacitance(array.params(), NvCapState::programmed(Polarization::lcs), 0.0, t);
    double active = 0.0;
    for (std::uint8_t x : inputs) active += x;
    std::vector<std::int64_t> counts(charges.size());
    for (std::size_t j = 0; j < charges.size(); ++j) {
        const double excess = charges[j] / array.config().v_read - active * c_lcs;
        counts[j] = std::llround(excess / (c_hcs - c_lcs));
    }
    return counts;
}

BinaryMatrix read_weights_csv(const std::filesystem::path& path) {
    const auto rows = read_bit_rows(path);
    if (rows.empty()) throw ParseError(1, path.filename().string() + ": empty weight matrix");
    BinaryMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) {
            throw ParseError(i + 1, path.filename().string() + ": ragged weight row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::uint8_t> read_inputs_csv(const std::filesystem::path& path) {
    const auto rows = read_bit_rows(path);
    if (rows.size() != 1) throw ParseError(1, path.filename().string() + ": inputs must be a single CSV line");
    return rows.front();
}

} // namespace nvcap
