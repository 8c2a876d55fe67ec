#pragma once

// Behavioral model of a single ferroelectric non-volatile capacitor (nvCap).
//
// The small-signal capacitance follows one logistic branch per polarization
// state. The branch threshold moves right on cooling (alpha_shift) and with
// trapped charge (beta_trap). HCS polarization decays under read stress with
// a stretched exponential whose time constant is Arrhenius in temperature.

#include <vector>

namespace nvcap {

inline constexpr double k_boltzmann_ev = 8.617333262e-5; // eV/K

enum class Polarization { hcs, lcs };

const char* to_string(Polarization p);

struct DeviceParams {
    double c_max = 1.000890361643173e-16;      // F, HCS strong-inversion capacitance
    double c_ov = 4.0e-18;                     // F, overlap floor
    double vth_hcs_ref = -0.7;                 // V at t_ref
    double vth_lcs_ref = 1.4267012023925782;   // V at t_ref
    double t_ref = 290.0;                      // K
    double alpha_shift = 0.0035269053734222396; // V/K of cooling
    double slope = 0.1;                        // V, logistic width
    double beta_trap = 1.0;                    // V per unit trapped charge
    double k_trap_ref = 0.006981791923715599;  // 1/(V s)
    double gamma_trap = 2.0;
    double v_trap_onset = 1.0;                 // V
    double tau0 = 1.0;                         // s
    double e_a = 0.2;                          // eV
    double beta_stretch = 1.0;
    double v_switch = 3.0;                     // V, coercive bias magnitude
    double w_switch = 1.0e-6;                  // s, minimum switching width

    // Throws DomainError naming the first violated invariant.
    void validate() const;

    bool operator==(const DeviceParams&) const = default;
};

struct NvCapState {
    Polarization polarization = Polarization::lcs;
    double retained_fraction = 1.0;
    double trapped_charge = 0.0;

    static NvCapState programmed(Polarization p) { return {p, 1.0, 0.0}; }

    bool operator==(const NvCapState&) const = default;
};

struct Pulse {
    double amplitude; // V, signed
    double width;     // s
};

enum class Branch { forward, backward };

const char* to_string(Branch b);

struct CVSample {
    double v_gate;
    double capacitance;

    bool operator==(const CVSample&) const = default;
};

struct CVCurve {
    std::vector<CVSample> samples;
    Branch branch = Branch::forward;
    double temperature = 0.0;

    // Capacitance at the sample nearest to v (must be within half a step).
    double capacitance_at(double v) const;

    bool operator==(const CVCurve&) const = default;
};

struct SweepSpec {
    double v_start;
    double v_end;
    double step;
    double dwell_per_step = 0.1;
    bool bidirectional = false;
};

struct SweepResult {
    std::vector<CVCurve> branches;
    NvCapState final_state;
};

struct RetentionSample {
    double time;
    double retained_fraction;
    double cap_at_0v;
    double percent_decay; // relative to cap_at_0v at time 0

    bool operator==(const RetentionSample&) const = default;
};

struct RetentionResult {
    std::vector<RetentionSample> samples;
    NvCapState final_state;
};

double threshold_voltage(const DeviceParams& params, const NvCapState& state, double temperature);

// Capacitance the branch saturates to: HCS loses (c_max - c_ov) in proportion
// to lost polarization; an LCS cell still inverts fully at high bias.
double saturated_capacitance(const DeviceParams& params, const NvCapState& state);

double small_signal_capacitance(const DeviceParams& params, const NvCapState& state, double v_gate,
                                double temperature);

NvCapState apply_pulse(const DeviceParams& params, const NvCapState& state, const Pulse& pulse);

NvCapState accrue_trapping(const DeviceParams& params, const NvCapState& state, double v_gate,
                           double dwell, double temperature);

// Evenly spaced grid from v_start to v_end (both included) with
// round(|v_end - v_start| / step) intervals.
std::vector<double> sweep_grid(double v_start, double v_end, double step);

SweepResult quasi_static_cv_sweep(const DeviceParams& params, const NvCapState& state,
                                  const SweepSpec& spec, double temperature);

double mid_capacitance(const DeviceParams& params);

// Voltage where the branch first crosses c_mid, linearly interpolated.
double crossing_voltage(const CVCurve& curve, double c_mid);

double memory_window(const CVCurve& hcs_branch, const CVCurve& lcs_branch, double c_mid);
double memory_window(const DeviceParams& params, const CVCurve& hcs_branch, const CVCurve& lcs_branch);

double retention_time_constant(const DeviceParams& params, double temperature);

RetentionResult dc_stress_retention(const DeviceParams& params, const NvCapState& state, double v_stress,
                                    double total_time, double sample_interval, double temperature);

} // namespace nvcap
