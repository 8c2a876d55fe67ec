#pragma once

// Two-phase charge-domain multiply-and-accumulate over an nvCap array.
// Charging: wordline i driven to inputs[i] * v_read deposits
// Q_j = sum_i inputs[i] * v_read * C_ij on bitline j. Discharging: Q_j moves
// onto the reference capacitor, V_j = clamp(Q_j / c_ref, 0, v_out_max).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "nvcap/device_model.hpp"

namespace nvcap {

// Which capacitance sets the sampled kT/C charge of a column.
enum class NoiseCapacitance {
    bitline,               // sum of the column's cell capacitances
    bitline_plus_reference // additionally c_ref
};

struct CrossbarConfig {
    std::size_t rows = 128;
    std::size_t cols = 128;
    double v_read = 0.1;      // V
    double c_ref = 128 * DeviceParams{}.c_max; // F, rows * c_max of the default profile
    double temperature = 290.0; // K
    double v_out_max = 1.0;   // V
    NoiseCapacitance noise_capacitance = NoiseCapacitance::bitline;

    void validate() const;

    // Default geometry with c_ref = rows * c_max, mapping a full-scale column to v_read.
    static CrossbarConfig for_device(const DeviceParams& params, std::size_t rows = 128, std::size_t cols = 128,
                                     double temperature = 290.0);

    bool operator==(const CrossbarConfig&) const = default;
};

class BinaryMatrix {
  public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols, std::uint8_t fill = 0)
        : rows_(rows), cols_(cols), bits_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint8_t operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j]; }
    std::uint8_t& operator()(std::size_t i, std::size_t j) { return bits_[i * cols_ + j]; }

    static BinaryMatrix identity(std::size_t n);

    bool operator==(const BinaryMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

class CrossbarArray {
  public:
    // cells in row-major order; throws DimensionError on size mismatch.
    CrossbarArray(DeviceParams params, CrossbarConfig config, std::vector<NvCapState> cells);

    std::size_t rows() const { return config_.rows; }
    std::size_t cols() const { return config_.cols; }
    const DeviceParams& params() const { return params_; }
    const CrossbarConfig& config() const { return config_; }
    const NvCapState& cell(std::size_t i, std::size_t j) const { return cells_[i * config_.cols + j]; }
    std::span<const NvCapState> cells() const { return cells_; }

    // Read capacitance C_ij at 0 V and the configured temperature, row-major.
    std::span<const double> capacitance() const { return capacitance_; }
    // Capacitance that sets each column's sampled noise charge.
    std::span<const double> noise_capacitance() const { return noise_capacitance_; }

    CrossbarArray at_temperature(double temperature) const;
    CrossbarArray with_cells(std::vector<NvCapState> cells) const;

  private:
    DeviceParams params_;
    CrossbarConfig config_;
    std::vector<NvCapState> cells_;
    std::vector<double> capacitance_;
    std::vector<double> noise_capacitance_;
};

CrossbarArray program_array(const BinaryMatrix& weights, const DeviceParams& params, const CrossbarConfig& config);

// HCS cells read as 1.
BinaryMatrix weight_bits(const CrossbarArray& array);

std::vector<double> charge_phase(const CrossbarArray& array, std::span<const std::uint8_t> inputs);
// Multi-level wordline drive; inputs are multiples of v_read.
std::vector<double> charge_phase(const CrossbarArray& array, std::span<const double> input_levels);

struct DischargeResult {
    std::vector<double> outputs;
    std::vector<std::uint8_t> saturated;
};

DischargeResult discharge_phase(std::span<const double> charges, const CrossbarConfig& config);

struct NoiseSpec {
    bool enabled = false;
    std::uint64_t seed = 0;
    std::uint64_t draw = 0; // independent realization index under the same seed
};

struct MacResult {
    std::vector<double> outputs;
    std::vector<double> charges; // noisy when noise is enabled
    std::vector<std::int64_t> ideal_counts;
    std::vector<double> noise_sigma_per_column; // volts at the output
    std::vector<std::uint8_t> saturated;
    std::optional<std::uint64_t> rng_seed;

    bool operator==(const MacResult&) const = default;
};

// Zero-mean Gaussian charge per column with sigma sqrt(k_B T C_noise,j),
// drawn from the Philox stream (seed, draw, column).
std::vector<double> sample_noise_charges(const CrossbarArray& array, const NoiseSpec& noise);

MacResult mac(const CrossbarArray& array, std::span<const std::uint8_t> inputs, const NoiseSpec& noise = {});

// Exact integer dot products per column; no capacitance model involved.
std::vector<std::int64_t> ideal_dot_oracle(const BinaryMatrix& weights, std::span<const std::uint8_t> inputs);

// Inverts noiseless column charges to integer counts using the array's HCS
// and LCS read capacitances: round((Q/v_read - N_active C_lcs) / (C_hcs - C_lcs)).
std::vector<std::int64_t> recover_counts(const CrossbarArray& array, std::span<const double> charges,
                                         std::span<const std::uint8_t> inputs);

BinaryMatrix read_weights_csv(const std::filesystem::path& path);
std::vector<std::uint8_t> read_inputs_csv(const std::filesystem::path& path);

} // namespace nvcap
