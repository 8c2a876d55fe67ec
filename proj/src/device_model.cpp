#include "nvcap/device_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nvcap/errors.hpp"

namespace nvcap {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_temperature(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("temperature must be positive and finite, got " + std::to_string(temperature));
    }
}

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

} // namespace

const char* to_string(Polarization p) { return p == Polarization::hcs ? "HCS" : "LCS"; }

const char* to_string(Branch b) { return b == Branch::forward ? "forward" : "backward"; }

void DeviceParams::validate() const {
    const double fields[] = {c_max,     c_ov,       vth_hcs_ref,  vth_lcs_ref, t_ref,    alpha_shift,
                             slope,     beta_trap,  k_trap_ref,   gamma_trap,  v_trap_onset, tau0,
                             e_a,       beta_stretch, v_switch,   w_switch};
    for (double f : fields) {
        if (!std::isfinite(f)) throw DomainError("device parameters must be finite");
    }
    if (!(c_ov > 0.0)) throw DomainError("c_ov must be positive");
    if (!(c_max > c_ov)) throw DomainError("c_max must exceed c_ov");
    if (!(vth_lcs_ref > vth_hcs_ref)) throw DomainError("vth_lcs_ref must exceed vth_hcs_ref");
    if (!(t_ref > 0.0)) throw DomainError("t_ref must be positive");
    if (alpha_shift < 0.0) throw DomainError("alpha_shift must be non-negative");
    if (!(slope > 0.0)) throw DomainError("slope must be positive");
    if (beta_trap < 0.0 || k_trap_ref < 0.0) throw DomainError("trapping coefficients must be non-negative");
    if (gamma_trap < 0.0) throw DomainError("gamma_trap must be non-negative");
    if (!(tau0 > 0.0)) throw DomainError("tau0 must be positive");
    if (!(e_a > 0.0)) throw DomainError("e_a must be positive");
    if (!(beta_stretch > 0.0 && beta_stretch <= 1.0)) throw DomainError("beta_stretch must lie in (0, 1]");
    if (!(v_switch > 0.0) || !(w_switch > 0.0)) throw DomainError("switching bias and width must be positive");
}

double CVCurve::capacitance_at(double v) const {
    if (samples.empty()) throw DomainError("empty C-V curve");
    std::size_t best = 0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        if (std::abs(samples[k].v_gate - v) < std::abs(samples[best].v_gate - v)) best = k;
    }
    double spacing = 0.0;
    if (best > 0) spacing = std::max(spacing, std::abs(samples[best].v_gate - samples[best - 1].v_gate));
    if (best + 1 < samples.size()) {
        spacing = std::max(spacing, std::abs(samples[best + 1].v_gate - samples[best].v_gate));
    }
    if (std::abs(samples[best].v_gate - v) > 0.5 * spacing + 1e-12) {
        throw DomainError("no C-V sample near " + std::to_string(v) + " V");
    }
    return samples[best].capacitance;
}

double threshold_voltage(const DeviceParams& params, const NvCapState& state, double temperature) {
    const double ref = state.polarization == Polarization::hcs ? params.vth_hcs_ref : params.vth_lcs_ref;
    return ref + params.alpha_shift * (params.t_ref - temperature) + params.beta_trap * state.trapped_charge;
}

double saturated_capacitance(const DeviceParams& params, const NvCapState& state) {
    return params.c_ov + state.retained_fraction * (params.c_max - params.c_ov);
}

double small_signal_capacitance(const DeviceParams& params, const NvCapState& state, double v_gate,
                                double temperature) {
    require_temperature(temperature);
    require_finite(v_gate, "gate voltage");
    const double vth = threshold_voltage(params, state, temperature);
    const double c_top = saturated_capacitance(params, state);
    return params.c_ov + (c_top - params.c_ov) * logistic((v_gate - vth) / params.slope);
}

NvCapState apply_pulse(const DeviceParams& params, const NvCapState& state, const Pulse& pulse) {
    if (!(pulse.width > 0.0)) throw DomainError("pulse width must be positive");
    require_finite(pulse.amplitude, "pulse amplitude");
    if (pulse.width < params.w_switch) return state;
    NvCapState next = state;
    if (pulse.amplitude >= params.v_switch) {
        next.polarization = Polarization::hcs;
        next.retained_fraction = 1.0;
    } else if (pulse.amplitude <= -params.v_switch) {
        next.polarization = Polarization::lcs;
        next.retained_fraction = 1.0;
    }
    return next;
}

NvCapState accrue_trapping(const DeviceParams& params, const NvCapState& state, double v_gate,
                           double dwell, double temperature) {
    require_temperature(temperature);
    require_finite(v_gate, "gate voltage");
    if (!(dwell >= 0.0)) throw DomainError("dwell must be non-negative");
    const double overdrive = v_gate - params.v_trap_onset;
    if (overdrive <= 0.0 || dwell == 0.0) return state;
    const double c_inversion = 0.5 * (saturated_capacitance(params, state) + params.c_ov);
    if (!(small_signal_capacitance(params, state, v_gate, temperature) > c_inversion)) return state;

    NvCapState next = state;
    const double rate = params.k_trap_ref * std::pow(params.t_ref / temperature, params.gamma_trap);
    next.trapped_charge += rate * overdrive * dwell;
    return next;
}

std::vector<double> sweep_grid(double v_start, double v_end, double step) {
    require_finite(v_start, "sweep start");
    require_finite(v_end, "sweep end");
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("sweep step must be positive");
    if (v_start == v_end) throw DomainError("sweep start and end coincide");
    const double span = v_end - v_start;
    if (step > std::abs(span)) throw DomainError("degenerate sweep grid: step exceeds sweep range");
    const auto intervals = static_cast<std::size_t>(std::llround(std::abs(span) / step));
    std::vector<double> grid(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        grid[k] = v_start + span * static_cast<double>(k) / static_cast<double>(intervals);
    }
    grid.back() = v_end;
    return grid;
}

SweepResult quasi_static_cv_sweep(const DeviceParams& params, const NvCapState& state,
                                  const SweepSpec& spec, double temperature) {
    require_temperature(temperature);
    if (!(spec.dwell_per_step >= 0.0)) throw DomainError("dwell per step must be non-negative");
    std::vector<double> grid = sweep_grid(spec.v_start, spec.v_end, spec.step);

    SweepResult result;
    result.final_state = state;
    NvCapState& cell = result.final_state;
    // Dwell accumulated at or beyond the coercive bias, per sign.
    double dwell_pos = 0.0;
    double dwell_neg = 0.0;

    auto run_branch = [&](const std::vector<double>& volts) {
        CVCurve curve;
        curve.branch = volts.back() > volts.front() ? Branch::forward : Branch::backward;
        curve.temperature = temperature;
        curve.samples.reserve(volts.size());
        for (double v : volts) {
            curve.samples.push_back({v, small_signal_capacitance(params, cell, v, temperature)});
            cell = accrue_trapping(params, cell, v, spec.dwell_per_step, temperature);

            dwell_pos = v >= params.v_switch ? dwell_pos + spec.dwell_per_step : 0.0;
            dwell_neg = v <= -params.v_switch ? dwell_neg + spec.dwell_per_step : 0.0;
            if (dwell_pos > 0.0) cell = apply_pulse(params, cell, {v, dwell_pos});
            if (dwell_neg > 0.0) cell = apply_pulse(params, cell, {v, dwell_neg});
        }
        result.branches.push_back(std::move(curve));
    };

    run_branch(grid);
    if (spec.bidirectional) {
        std::reverse(grid.begin(), grid.end());
        run_branch(grid);
    }
    return result;
}

double mid_capacitance(const DeviceParams& params) { return 0.5 * (params.c_max + params.c_ov); }

double crossing_voltage(const CVCurve& curve, double c_mid) {
    const auto& s = curve.samples;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k].capacitance == c_mid) return s[k].v_gate;
        if (k + 1 < s.size() && (s[k].capacitance < c_mid) != (s[k + 1].capacitance < c_mid)) {
            const double frac = (c_mid - s[k].capacitance) / (s[k + 1].capacitance - s[k].capacitance);
            return s[k].v_gate + frac * (s[k + 1].v_gate - s[k].v_gate);
        }
    }
    throw ExtractionError(std::string(to_string(curve.branch)) + " branch never crosses mid-capacitance");
}

double memory_window(const CVCurve& hcs_branch, const CVCurve& lcs_branch, double c_mid) {
    double v_hcs = 0.0;
    double v_lcs = 0.0;
    try {
        v_hcs = crossing_voltage(hcs_branch, c_mid);
    } catch (const ExtractionError& e) {
        throw ExtractionError(std::string("HCS ") + e.what());
    }
    try {
        v_lcs = crossing_voltage(lcs_branch, c_mid);
    } catch (const ExtractionError& e) {
        throw ExtractionError(std::string("LCS ") + e.what());
    }
    return v_lcs - v_hcs;
}

double memory_window(const DeviceParams& params, const CVCurve& hcs_branch, const CVCurve& lcs_branch) {
    return memory_window(hcs_branch, lcs_branch, mid_capacitance(params));
}

double retention_time_constant(const DeviceParams& params, double temperature) {
    require_temperature(temperature);
    return params.tau0 * std::exp(params.e_a / (k_boltzmann_ev * temperature));
}

RetentionResult dc_stress_retention(const DeviceParams& params, const NvCapState& state, double v_stress,
                                    double total_time, double sample_interval, double temperature) {
    require_temperature(temperature);
    require_finite(v_stress, "stress bias");
    if (!(sample_interval > 0.0) || !(total_time >= sample_interval) || !std::isfinite(total_time)) {
        throw DomainError("retention requires total_time >= sample_interval > 0");
    }
    const double tau = retention_time_constant(params, temperature);
    const bool decays = state.polarization == Polarization::hcs;
    // Age already consumed by a partially decayed state, so stress segments compose.
    const double r0 = std::clamp(state.retained_fraction, 0.0, 1.0);
    const double age0 = r0 < 1.0 ? tau * std::pow(-std::log(r0), 1.0 / params.beta_stretch) : 0.0;

    auto retained_at = [&](double t) {
        if (!decays) return r0;
        if (t == 0.0) return r0;
        return std::exp(-std::pow((age0 + t) / tau, params.beta_stretch));
    };

    RetentionResult result;
    const auto count = static_cast<std::size_t>(std::floor(total_time / sample_interval + 1e-9));
    result.samples.reserve(count + 1);
    double cap0 = 0.0;
    for (std::size_t k = 0; k <= count; ++k) {
        const double t = static_cast<double>(k) * sample_interval;
        NvCapState s = state;
        s.retained_fraction = retained_at(t);
        const double cap = small_signal_capacitance(params, s, 0.0, temperature);
        if (k == 0) cap0 = cap;
        result.samples.push_back({t, s.retained_fraction, cap, 100.0 * (cap0 - cap) / cap0});
    }
    result.final_state = state;
    result.final_state.retained_fraction = retained_at(total_time);
    return result;
}

} // namespace nvcap
