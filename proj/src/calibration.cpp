#include "nvcap/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nvcap/errors.hpp"

namespace nvcap {

namespace {

constexpr double k_converged = 1e-4;

std::vector<double> relative_residuals(const CalibrationMeasurement& m, const CalibrationTargets& t) {
    return {m.ratio_290k / t.ratio_290k - 1.0, m.ratio_77k_postpulse / t.ratio_77k_postpulse - 1.0,
            m.mw_290k / t.mw_290k - 1.0, m.mw_77k / t.mw_77k - 1.0};
}

double worst(const std::vector<double>& r) {
    double w = 0.0;
    for (double x : r) w = std::max(w, std::abs(x));
    return w;
}

// f(x) - target, or nullopt when the measurement cannot be extracted at x.
std::optional<double> try_eval(const std::function<double(double)>& f, double x, double target) {
    try {
        return f(x) - target;
    } catch (const ExtractionError&) {
        return std::nullopt;
    }
}

// Solves f(x) = target for monotone f, starting from the bracket [lo, hi]
// around the current value x. Bracket ends where the measurement fails are
// pulled halfway toward x. Returns false when the target is not bracketed.
bool bisect(const std::function<double(double)>& f, double lo, double hi, double target, double& x) {
    const double x0 = std::clamp(x, lo, hi);
    std::optional<double> f_lo = try_eval(f, lo, target);
    for (int k = 0; k < 60 && !f_lo; ++k) f_lo = try_eval(f, lo = 0.5 * (lo + x0), target);
    std::optional<double> f_hi = try_eval(f, hi, target);
    for (int k = 0; k < 60 && !f_hi; ++k) f_hi = try_eval(f, hi = 0.5 * (hi + x0), target);
    if (!f_lo || !f_hi) return false;
    if (*f_lo == 0.0) {
        x = lo;
        return true;
    }
    if ((*f_lo < 0.0) == (*f_hi < 0.0)) return false;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const std::optional<double> f_mid = try_eval(f, mid, target);
        if (!f_mid) return false;
        if (*f_mid == 0.0) {
            x = mid;
            return true;
        }
        if ((*f_mid < 0.0) == (*f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    x = 0.5 * (lo + hi);
    return true;
}

} // namespace

double fresh_on_off_ratio(const DeviceParams& params, double temperature) {
    const double on = small_signal_capacitance(params, NvCapState::programmed(Polarization::hcs), 0.0, temperature);
    const double off = small_signal_capacitance(params, NvCapState::programmed(Polarization::lcs), 0.0, temperature);
    return on / off;
}

double pulse_read_ratio(const DeviceParams& params, double temperature, const MeasurementProtocol& protocol) {
    const SweepSpec read{-protocol.read_amplitude, protocol.read_amplitude, protocol.sweep_step, protocol.dwell,
                         false};
    NvCapState cell = apply_pulse(params, NvCapState{}, {-protocol.write_amplitude, protocol.write_width});
    const SweepResult off = quasi_static_cv_sweep(params, cell, read, temperature);
    cell = apply_pulse(params, off.final_state, {protocol.write_amplitude, protocol.write_width});
    const SweepResult on = quasi_static_cv_sweep(params, cell, read, temperature);
    return on.branches.front().capacitance_at(0.0) / off.branches.front().capacitance_at(0.0);
}

double full_sweep_memory_window(const DeviceParams& params, double temperature,
                                const MeasurementProtocol& protocol) {
    const SweepSpec spec{-protocol.full_sweep_amplitude, protocol.full_sweep_amplitude, protocol.sweep_step,
                         protocol.dwell, true};
    const SweepResult sweep = quasi_static_cv_sweep(params, NvCapState{}, spec, temperature);
    return memory_window(params, sweep.branches[1], sweep.branches[0]);
}

CalibrationMeasurement measure_targets(const DeviceParams& params, const MeasurementProtocol& protocol) {
    return {fresh_on_off_ratio(params, protocol.t_warm), pulse_read_ratio(params, protocol.t_cold, protocol),
            full_sweep_memory_window(params, protocol.t_warm, protocol),
            full_sweep_memory_window(params, protocol.t_cold, protocol)};
}

DeviceParams calibrate_device(const CalibrationTargets& targets, const DeviceParams& start,
                              const MeasurementProtocol& protocol, int max_rounds) {
    const double values[] = {targets.ratio_290k, targets.ratio_77k_postpulse, targets.mw_290k, targets.mw_77k};
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("calibration targets must be positive and finite");
    }
    if (!(targets.ratio_290k > 1.0) || !(targets.ratio_77k_postpulse > 1.0)) {
        throw DomainError("on/off ratio targets must exceed 1 (c_max = c_ov is degenerate)");
    }
    start.validate();

    DeviceParams p = start;
    std::vector<double> residuals = relative_residuals(measure_targets(p, protocol), targets);
    DeviceParams best = p;
    std::vector<double> best_residuals = residuals;
    if (worst(residuals) <= k_converged) return p;

    auto fail = [&](const std::string& why) -> CalibrationError {
        return CalibrationError("calibration failed: " + why, best_residuals);
    };

    for (int round = 0; round < max_rounds; ++round) {
        const double c_ov = p.c_ov;
        double x = p.c_max;
        if (!bisect([&](double c) { DeviceParams q = p; q.c_max = c; return fresh_on_off_ratio(q, protocol.t_warm); },
                    c_ov * (1.0 + 1e-9), c_ov * 1e4, targets.ratio_290k, x)) {
            throw fail("290 K on/off ratio not reachable through c_max");
        }
        p.c_max = x;

        x = p.alpha_shift;
        if (!bisect([&](double a) { DeviceParams q = p; q.alpha_shift = a; return pulse_read_ratio(q, protocol.t_cold, protocol); },
                    0.0, 0.02, targets.ratio_77k_postpulse, x)) {
            throw fail("77 K post-pulse ratio not reachable through alpha_shift");
        }
        p.alpha_shift = x;

        x = p.vth_lcs_ref;
        if (!bisect([&](double v) { DeviceParams q = p; q.vth_lcs_ref = v; return full_sweep_memory_window(q, protocol.t_warm, protocol); },
                    p.vth_hcs_ref + 0.05, p.vth_hcs_ref + 6.0, targets.mw_290k, x)) {
            throw fail("290 K memory window not reachable through vth_lcs_ref");
        }
        p.vth_lcs_ref = x;

        // Trapping rate spans decades; bisect its logarithm.
        x = std::log(p.k_trap_ref);
        if (!bisect([&](double lk) { DeviceParams q = p; q.k_trap_ref = std::exp(lk); return -full_sweep_memory_window(q, protocol.t_cold, protocol); },
                    std::log(1e-7), std::log(1.0), -targets.mw_77k, x)) {
            throw fail("77 K memory window not reachable through k_trap_ref");
        }
        p.k_trap_ref = std::exp(x);

        residuals = relative_residuals(measure_targets(p, protocol), targets);
        if (worst(residuals) < worst(best_residuals)) {
            best = p;
            best_residuals = residuals;
        }
        if (worst(residuals) <= k_converged) return p;
    }
    throw fail("no convergence within " + std::to_string(max_rounds) + " rounds");
}

} // namespace nvcap
