#pragma once

// Fits DeviceParams to the four characterization anchors: the fresh on/off
// ratio at 290 K, the pulse-programmed on/off ratio at 77 K, and the
// full-sweep memory windows at 290 K and 77 K.

#include <array>

#include "nvcap/device_model.hpp"

namespace nvcap {

struct CalibrationTargets {
    double ratio_290k = 25.0;
    double ratio_77k_postpulse = 10.0;
    double mw_290k = 2.0;
    double mw_77k = 0.5;
};

// Measured values of the same four quantities, in target order.
struct CalibrationMeasurement {
    double ratio_290k = 0.0;
    double ratio_77k_postpulse = 0.0;
    double mw_290k = 0.0;
    double mw_77k = 0.0;

    std::array<double, 4> as_array() const { return {ratio_290k, ratio_77k_postpulse, mw_290k, mw_77k}; }
};

// Sweep and pulse settings shared by the measurement routines and the
// shipped presets (fig2_full_sweep, fig3_pulse_read).
struct MeasurementProtocol {
    double sweep_step = 0.05;
    double dwell = 0.1;
    double full_sweep_amplitude = 4.0;
    double read_amplitude = 1.0;
    double write_amplitude = 4.0;
    double write_width = 10e-6;
    double t_cold = 77.0;
    double t_warm = 290.0;
};

// HCS/LCS capacitance ratio at 0 V for freshly programmed cells.
double fresh_on_off_ratio(const DeviceParams& params, double temperature);

// Erase, read sweep, program, read sweep; ratio of the two 0 V reads.
double pulse_read_ratio(const DeviceParams& params, double temperature, const MeasurementProtocol& protocol = {});

// Bidirectional full sweep from a fresh device; backward branch is HCS.
double full_sweep_memory_window(const DeviceParams& params, double temperature,
                                const MeasurementProtocol& protocol = {});

CalibrationMeasurement measure_targets(const DeviceParams& params, const MeasurementProtocol& protocol = {});

// Deterministic block-coordinate bisection: c_max against the 290 K ratio,
// alpha_shift against the 77 K post-pulse ratio, vth_lcs_ref against the
// 290 K window and k_trap_ref against the 77 K window, cycled until every
// relative residual is below 1e-4. Throws CalibrationError carrying the best
// residuals when the round budget runs out.
DeviceParams calibrate_device(const CalibrationTargets& targets, const DeviceParams& start = {},
                              const MeasurementProtocol& protocol = {}, int max_rounds = 40);

} // namespace nvcap
