#pragma once

// Thermal-noise-limited ENOB of the crossbar MAC output.
//
// Signal: full-scale sinusoid of the output range, rms = V_FS / (2 sqrt 2),
// with V_FS = rows * v_read * c_max / c_ref. Noise: sampled kT/C charge of
// the worst-case (all-HCS) column referred to the output. Amplifier noise is
// not modeled.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nvcap/crossbar.hpp"
#include "nvcap/device_model.hpp"
#include "nvcap/thermal.hpp"

namespace nvcap {

enum class EnobMethod { analytic, monte_carlo };

const char* to_string(EnobMethod m);
EnobMethod parse_enob_method(const std::string& name); // "analytic" | "mc"

struct EnobReport {
    double temperature = 0.0;
    double sigma_charge = 0.0; // C
    double sigma_vout = 0.0;   // V
    double snr_db = 0.0;
    double enob = 0.0;
    EnobMethod method = EnobMethod::analytic;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    bool infinite_snr = false; // measured error was exactly zero
    bool below_floor = false;  // enob < 0

    bool operator==(const EnobReport&) const = default;
};

double full_scale_output(const DeviceParams& params, const CrossbarConfig& config);

// Uses config.temperature.
EnobReport analytic_enob(const DeviceParams& params, const CrossbarConfig& config);
EnobReport analytic_enob(const DeviceParams& params, const CrossbarConfig& config, double temperature);

// Runs `trials` MACs on independent random binary inputs; each trial compares
// the noisy output to the noiseless output of the same inputs. The pooled rms
// error over trials and columns is the noise estimate. Inputs come from the
// Philox stream (seed, trial) and noise from mac()'s stream (seed, trial, column).
EnobReport monte_carlo_enob(const CrossbarArray& array, std::uint64_t trials, std::uint64_t seed,
                            bool noise_enabled = true);

// The random input vector monte_carlo_enob uses for a trial.
std::vector<std::uint8_t> monte_carlo_inputs(std::size_t rows, std::uint64_t seed, std::uint64_t trial);

// Analytic reports use config with each temperature; Monte Carlo reports use
// an all-HCS array, the worst case the analytic noise term assumes.
std::vector<EnobReport> temperature_sweep(const DeviceParams& params, const CrossbarConfig& config,
                                          std::span<const double> temperatures, EnobMethod method,
                                          std::uint64_t trials = 100000, std::uint64_t seed = 0);

// Cell capacitance c_max that puts analytic ENOB at target_enob:
// c_max = 8 S^2 k_B T / (v_read^2 rows), S = 10^((6.02 N + 1.76) / 20).
double calibrate_cell_capacitance(double target_enob, double temperature, std::size_t rows, double v_read);

// Profile for the ENOB operating point: base with c_max from
// calibrate_cell_capacitance, c_ov scaled to keep the on/off ratio, and the
// HCS threshold lowered until the HCS read level is within 1 ppm of c_max
// down to t_min, so a programmed column reads at full scale.
DeviceParams operating_point_profile(const DeviceParams& base, double target_enob = 4.0, double temperature = 290.0,
                                     std::size_t rows = 128, double v_read = 0.1, double t_min = 77.0);

} // namespace nvcap
