#include "nvcap/enob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nvcap/errors.hpp"
#include "nvcap/philox.hpp"

namespace nvcap {

double thermal_charge_sigma(double temperature, double c_total) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) throw DomainError("temperature must be positive");
    if (!(c_total > 0.0) || !std::isfinite(c_total)) throw DomainError("capacitance must be positive");
    return std::sqrt(k_boltzmann * temperature * c_total);
}

double enob_from_snr_db(double snr_db) { return (snr_db - 1.76) / 6.02; }

const char* to_string(EnobMethod m) { return m == EnobMethod::analytic ? "analytic" : "mc"; }

EnobMethod parse_enob_method(const std::string& name) {
    if (name == "analytic") return EnobMethod::analytic;
    if (name == "mc" || name == "monte_carlo") return EnobMethod::monte_carlo;
    throw DomainError("unknown ENOB method '" + name + "'");
}

double full_scale_output(const DeviceParams& params, const CrossbarConfig& config) {
    return static_cast<double>(config.rows) * config.v_read * params.c_max / config.c_ref;
}

namespace {

EnobReport finish(EnobReport report, double signal_rms) {
    if (report.sigma_vout == 0.0) {
        report.infinite_snr = true;
        report.snr_db = std::numeric_limits<double>::infinity();
        report.enob = std::numeric_limits<double>::infinity();
        return report;
    }
    report.snr_db = 20.0 * std::log10(signal_rms / report.sigma_vout);
    report.enob = enob_from_snr_db(report.snr_db);
    report.below_floor = report.enob < 0.0;
    return report;
}

} // namespace

EnobReport analytic_enob(const DeviceParams& params, const CrossbarConfig& config, double temperature) {
    params.validate();
    CrossbarConfig at_t = config;
    at_t.temperature = temperature;
    at_t.validate();

    double c_noise = static_cast<double>(at_t.rows) * params.c_max;
    if (at_t.noise_capacitance == NoiseCapacitance::bitline_plus_reference) c_noise += at_t.c_ref;

    EnobReport report;
    report.temperature = temperature;
    report.method = EnobMethod::analytic;
    report.sigma_charge = thermal_charge_sigma(temperature, c_noise);
    report.sigma_vout = report.sigma_charge / at_t.c_ref;
    return finish(report, full_scale_output(params, at_t) / (2.0 * std::sqrt(2.0)));
}

EnobReport analytic_enob(const DeviceParams& params, const CrossbarConfig& config) {
    return analytic_enob(params, config, config.temperature);
}

std::vector<std::uint8_t> monte_carlo_inputs(std::size_t rows, std::uint64_t seed, std::uint64_t trial) {
    std::vector<std::uint8_t> bits(rows);
    const auto key = Philox4x32::key_from_seed(seed);
    for (std::size_t block = 0; block * 128 < rows; ++block) {
        const auto words =
            Philox4x32::generate(stream_counter(trial, static_cast<std::uint32_t>(block), StreamTag::mc_inputs), key);
        for (std::size_t b = 0; b < 128 && block * 128 + b < rows; ++b) {
            bits[block * 128 + b] = static_cast<std::uint8_t>((words[b / 32] >> (b % 32)) & 1u);
        }
    }
    return bits;
}

EnobReport monte_carlo_enob(const CrossbarArray& array, std::uint64_t trials, std::uint64_t seed,
                            bool noise_enabled) {
    if (trials < 1000) throw DomainError("Monte Carlo ENOB needs at least 1000 trials");
    const CrossbarConfig& config = array.config();

    double sum_sq = 0.0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const std::vector<std::uint8_t> inputs = monte_carlo_inputs(array.rows(), seed, trial);
        std::vector<double> charges = charge_phase(array, inputs);
        const DischargeResult clean = discharge_phase(charges, config);
        const std::vector<double> dq = sample_noise_charges(array, {noise_enabled, seed, trial});
        for (std::size_t j = 0; j < charges.size(); ++j) charges[j] += dq[j];
        const DischargeResult noisy = discharge_phase(charges, config);
        for (std::size_t j = 0; j < charges.size(); ++j) {
            const double e = noisy.outputs[j] - clean.outputs[j];
            sum_sq += e * e;
        }
    }

    EnobReport report;
    report.temperature = config.temperature;
    report.method = EnobMethod::monte_carlo;
    report.trials = trials;
    report.seed = seed;
    report.sigma_vout = std::sqrt(sum_sq / (static_cast<double>(trials) * static_cast<double>(array.cols())));
    report.sigma_charge = report.sigma_vout * config.c_ref;
    return finish(report, full_scale_output(array.params(), config) / (2.0 * std::sqrt(2.0)));
}

std::vector<EnobReport> temperature_sweep(const DeviceParams& params, const CrossbarConfig& config,
                                          std::span<const double> temperatures, EnobMethod method,
                                          std::uint64_t trials, std::uint64_t seed) {
    if (temperatures.empty()) throw DomainError("temperature list is empty");
    for (double t : temperatures) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("temperatures must be positive");
    }
    std::vector<EnobReport> reports;
    reports.reserve(temperatures.size());
    if (method == EnobMethod::analytic) {
        for (double t : temperatures) reports.push_back(analytic_enob(params, config, t));
        return reports;
    }
    const BinaryMatrix all_on(config.rows, config.cols, 1);
    for (double t : temperatures) {
        CrossbarConfig at_t = config;
        at_t.temperature = t;
        reports.push_back(monte_carlo_enob(program_array(all_on, params, at_t), trials, seed));
    }
    return reports;
}

double calibrate_cell_capacitance(double target_enob, double temperature, std::size_t rows, double v_read) {
    if (!(target_enob > 0.0) || !std::isfinite(target_enob)) throw DomainError("target ENOB must be positive");
    if (!(temperature > 0.0) || rows == 0 || !(v_read > 0.0)) {
        throw DomainError("operating point needs positive temperature, rows and v_read");
    }
    const double snr = std::pow(10.0, (6.02 * target_enob + 1.76) / 20.0);
    const double c = 8.0 * snr * snr * k_boltzmann * temperature / (v_read * v_read * static_cast<double>(rows));
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("non-physical cell capacitance");
    return c;
}

DeviceParams operating_point_profile(const DeviceParams& base, double target_enob, double temperature,
                                     std::size_t rows, double v_read, double t_min) {
    base.validate();
    DeviceParams p = base;
    const double on_off = base.c_max / base.c_ov;
    p.c_max = calibrate_cell_capacitance(target_enob, temperature, rows, v_read);
    p.c_ov = p.c_max / on_off;
    constexpr double deficit = 1e-6;
    const double saturated_vth =
        -base.alpha_shift * (base.t_ref - t_min) - base.slope * std::log((1.0 - deficit) / deficit);
    p.vth_hcs_ref = std::min(base.vth_hcs_ref, saturated_vth);
    p.validate();
    return p;
}

} // namespace nvcap
