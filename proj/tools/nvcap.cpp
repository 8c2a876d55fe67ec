// nvcap: figure-recipe driver for the nvCap device and crossbar simulator.
//
// Exit status: 0 success, 2 usage or input error, 3 model or calibration error.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nvcap/calibration.hpp"
#include "nvcap/crossbar.hpp"
#include "nvcap/device_model.hpp"
#include "nvcap/enob.hpp"
#include "nvcap/errors.hpp"
#include "nvcap/kernels.hpp"
#include "nvcap/profile.hpp"
#include "nvcap/protocol.hpp"
#include "nvcap/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int k_exit_usage = 2;
constexpr int k_exit_model = 3;

constexpr const char* k_version = "0.1.0";

// Array options shared by `mac` and `enob sweep`; unset values follow the profile.
struct RunConfig {
    std::string profile = "default_28nm";
    fs::path out = ".";
    std::size_t rows = 128;
    std::size_t cols = 128;
    double v_read = 0.1;
    double c_ref = 0.0; // 0 = rows * c_max
    double v_out_max = 1.0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 100000;
    std::vector<double> temps;
    bool noise_with_cref = false;
};

// Input problems surface as exit 2; everything the model raises as exit 3.
struct UsageError : nvcap::Error {
    using nvcap::Error::Error;
};

std::string stage = "startup";

std::string temp_label(double t) { return nvcap::format_real(t) + "K"; }

nvcap::CrossbarConfig array_config(const RunConfig& rc, const nvcap::DeviceParams& params, double temperature) {
    nvcap::CrossbarConfig config = nvcap::CrossbarConfig::for_device(params, rc.rows, rc.cols, temperature);
    config.v_read = rc.v_read;
    config.v_out_max = rc.v_out_max;
    if (rc.c_ref > 0.0) config.c_ref = rc.c_ref;
    if (rc.noise_with_cref) config.noise_capacitance = nvcap::NoiseCapacitance::bitline_plus_reference;
    return config;
}

nvcap::DeviceParams load_params(const std::string& profile) {
    stage = "load profile";
    try {
        return nvcap::load_profile(profile);
    } catch (const nvcap::NotFoundError& e) {
        throw UsageError(e.what());
    } catch (const nvcap::ParseError& e) {
        throw UsageError(profile + ": " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& text) {
    stage = "write " + path.string();
    nvcap::write_text_file(path, text);
    std::cout << path.string() << '\n';
}

int run_cv_sweep(const RunConfig& rc, double temp, const std::string& range, double dwell, bool unidirectional) {
    const nvcap::DeviceParams params = load_params(rc.profile);
    stage = "parse range";
    double a = 0.0, b = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream rs(range);
    if (!(rs >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !rs.eof()) {
        throw UsageError("--range must be start:end:step, got '" + range + "'");
    }
    stage = "cv sweep";
    const nvcap::SweepResult sweep =
        nvcap::quasi_static_cv_sweep(params, nvcap::NvCapState{}, {a, b, step, dwell, !unidirectional}, temp);
    std::ostringstream csv;
    nvcap::write_sweep_csv(csv, 0, sweep.branches);
    write_file(rc.out / ("cv_sweep_" + temp_label(temp) + ".csv"), csv.str());
    if (sweep.branches.size() == 2) {
        const auto& up = sweep.branches[0].branch == nvcap::Branch::forward ? sweep.branches[0] : sweep.branches[1];
        const auto& down = sweep.branches[0].branch == nvcap::Branch::forward ? sweep.branches[1] : sweep.branches[0];
        try {
            std::cout << "memory_window_V " << nvcap::format_real(nvcap::memory_window(params, down, up)) << '\n';
        } catch (const nvcap::ExtractionError& e) {
            std::cout << "memory_window_V n/a (" << e.what() << ")\n";
        }
    }
    return 0;
}

int run_scheme_cmd(const RunConfig& rc, const std::string& which, double temp) {
    const nvcap::DeviceParams params = load_params(rc.profile);
    stage = "load scheme";
    nvcap::PulseScheme scheme;
    try {
        scheme = nvcap::load_scheme(which);
    } catch (const nvcap::NotFoundError& e) {
        throw UsageError(e.what());
    } catch (const nvcap::ParseError& e) {
        throw UsageError(which + ": " + e.what());
    }
    stage = "run scheme " + scheme.name;
    const nvcap::ProtocolTrace trace = nvcap::run_scheme(params, scheme, nvcap::NvCapState{}, temp);
    stage = "write trace";
    for (const fs::path& p : nvcap::write_trace_csvs(trace, rc.out)) std::cout << p.string() << '\n';
    return 0;
}

int run_retention(const RunConfig& rc, double stress, double total, double sample) {
    const nvcap::DeviceParams params = load_params(rc.profile);
    for (double t : rc.temps) {
        stage = "retention at " + temp_label(t);
        const auto programmed = nvcap::NvCapState::programmed(nvcap::Polarization::hcs);
        const nvcap::RetentionResult r = nvcap::dc_stress_retention(params, programmed, stress, total, sample, t);
        std::ostringstream csv;
        nvcap::write_retention_csv(csv, r.samples);
        write_file(rc.out / ("retention_" + temp_label(t) + ".csv"), csv.str());
    }
    return 0;
}

int run_mac(RunConfig rc, const fs::path& weights_path, const fs::path& inputs_path, bool noise, double temp,
            const std::string& out_file) {
    const nvcap::DeviceParams params = load_params(rc.profile);
    stage = "read weights/inputs";
    nvcap::BinaryMatrix weights;
    std::vector<std::uint8_t> inputs;
    try {
        weights = nvcap::read_weights_csv(weights_path);
        inputs = nvcap::read_inputs_csv(inputs_path);
    } catch (const nvcap::NotFoundError& e) {
        throw UsageError(e.what());
    } catch (const nvcap::ParseError& e) {
        throw UsageError(e.what());
    }
    if (inputs.size() != weights.rows()) {
        throw UsageError("dimension mismatch: " + std::to_string(inputs.size()) + " inputs for a weight matrix with " +
                         std::to_string(weights.rows()) + " rows");
    }
    rc.rows = weights.rows();
    rc.cols = weights.cols();
    stage = "mac";
    const nvcap::CrossbarArray array = nvcap::program_array(weights, params, array_config(rc, params, temp));
    const nvcap::MacResult result = nvcap::mac(array, inputs, {noise, rc.seed, 0});
    std::ostringstream csv;
    nvcap::write_mac_csv(csv, result);
    if (out_file == "-") {
        std::cout << csv.str();
    } else {
        write_file(out_file, csv.str());
    }
    return 0;
}

int run_enob_sweep(const RunConfig& rc, const std::string& method_name) {
    const nvcap::DeviceParams params = load_params(rc.profile);
    stage = "enob sweep";
    nvcap::EnobMethod method;
    try {
        method = nvcap::parse_enob_method(method_name);
    } catch (const nvcap::DomainError& e) {
        throw UsageError(e.what());
    }
    const auto reports = nvcap::temperature_sweep(params, array_config(rc, params, rc.temps.front()), rc.temps,
                                                  method, rc.trials, rc.seed);
    std::ostringstream csv, json;
    nvcap::write_enob_csv(csv, reports);
    nvcap::write_enob_json(json, reports);
    write_file(rc.out / "enob.csv", csv.str());
    write_file(rc.out / "enob.json", json.str());
    return 0;
}

int run_calibrate_device(const nvcap::CalibrationTargets& targets, const std::string& start_profile,
                         const std::string& out_file) {
    const nvcap::DeviceParams start = load_params(start_profile);
    stage = "calibrate device";
    const nvcap::DeviceParams p = nvcap::calibrate_device(targets, start);
    const nvcap::CalibrationMeasurement m = nvcap::measure_targets(p);
    std::ostringstream comment;
    comment << "nvCap behavioral model, calibrated by `nvcap calibrate device`.\n"
            << "ratio_290K = " << nvcap::format_real(m.ratio_290k)
            << ", ratio_77K_postpulse = " << nvcap::format_real(m.ratio_77k_postpulse)
            << ", mw_290K_V = " << nvcap::format_real(m.mw_290k) << ", mw_77K_V = " << nvcap::format_real(m.mw_77k);
    write_file(out_file, nvcap::render_profile(p, comment.str()));
    return 0;
}

int run_calibrate_operating_point(const std::string& base_profile, double enob, double temp, std::size_t rows,
                                  double v_read, const std::string& out_file) {
    const nvcap::DeviceParams base = load_params(base_profile);
    stage = "calibrate operating point";
    const nvcap::DeviceParams p = nvcap::operating_point_profile(base, enob, temp, rows, v_read);
    std::ostringstream comment;
    comment << "ENOB operating point, generated by `nvcap calibrate operating-point`.\n"
            << "target " << nvcap::format_real(enob) << " bits at " << temp_label(temp) << ", " << rows
            << " rows, v_read " << v_read << " V; HCS read level saturated down to 77 K.";
    write_file(out_file, nvcap::render_profile(p, comment.str()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nvCap device and capacitive-crossbar simulator"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    std::string kernel = "auto";
    app.add_flag("--version", show_version, "Print version and default-profile hash");
    app.add_option("--kernel", kernel, "Accumulation kernel: auto, scalar, avx2, neon")
        ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

    RunConfig rc;
    auto add_profile = [&](CLI::App* cmd) {
        cmd->add_option("--profile", rc.profile, "Built-in profile name or profile file")->capture_default_str();
    };
    auto add_out_dir = [&](CLI::App* cmd) {
        cmd->add_option("--out", rc.out, "Output directory")->capture_default_str();
    };

    // cv-sweep
    double sweep_temp = 0.0, sweep_dwell = 0.1;
    std::string sweep_range = "-4:4:0.05";
    bool sweep_uni = false;
    auto* cv = app.add_subcommand("cv-sweep", "Quasi-static C-V sweep of a fresh device");
    cv->add_option("--temp", sweep_temp, "Temperature in K")->required();
    cv->add_option("--range", sweep_range, "start:end:step in volts")->capture_default_str();
    cv->add_option("--dwell", sweep_dwell, "Dwell per step in seconds")->capture_default_str();
    cv->add_flag("--unidirectional", sweep_uni, "Skip the return branch");
    add_profile(cv);
    add_out_dir(cv);

    // scheme run / scheme list
    auto* scheme = app.add_subcommand("scheme", "Measurement schemes");
    scheme->require_subcommand(1);
    std::string scheme_which;
    double scheme_temp = nvcap::default_temperature;
    auto* scheme_run = scheme->add_subcommand("run", "Replay a preset or .scheme file");
    scheme_run->add_option("scheme", scheme_which, "Preset name or path")->required();
    scheme_run->add_option("--temp", scheme_temp, "Initial temperature in K")->capture_default_str();
    add_profile(scheme_run);
    add_out_dir(scheme_run);
    auto* scheme_list = scheme->add_subcommand("list", "List built-in presets");

    // retention
    double stress = 0.1, stress_time = 1000.0, stress_sample = 10.0;
    auto* ret = app.add_subcommand("retention", "HCS retention under DC read stress");
    ret->add_option("--temps", rc.temps, "Comma-separated temperatures in K")->delimiter(',')->required();
    ret->add_option("--stress", stress, "Stress bias in V")->capture_default_str();
    ret->add_option("--time", stress_time, "Total stress time in s")->capture_default_str();
    ret->add_option("--sample", stress_sample, "Sample interval in s")->capture_default_str();
    add_profile(ret);
    add_out_dir(ret);

    // mac
    std::string weights_path, inputs_path, mac_out = "-";
    bool mac_noise = false;
    double mac_temp = nvcap::default_temperature;
    auto* mac = app.add_subcommand("mac", "One two-phase MAC over a programmed array");
    mac->add_option("--weights", weights_path, "Weight matrix CSV (0/1)")->required();
    mac->add_option("--inputs", inputs_path, "Input vector CSV (0/1)")->required();
    mac->add_flag("--noise", mac_noise, "Add kT/C charge noise");
    mac->add_option("--seed", rc.seed, "Noise seed")->capture_default_str();
    mac->add_option("--temp", mac_temp, "Temperature in K")->capture_default_str();
    mac->add_option("--v-read", rc.v_read, "Wordline read voltage in V")->capture_default_str();
    mac->add_option("--c-ref", rc.c_ref, "Reference capacitance in F (default rows * c_max)");
    mac->add_option("--v-out-max", rc.v_out_max, "Output clamp in V")->capture_default_str();
    mac->add_flag("--noise-includes-cref", rc.noise_with_cref, "Count c_ref in the sampled noise capacitance");
    mac->add_option("--out", mac_out, "Output CSV file, '-' for stdout")->capture_default_str();
    add_profile(mac);

    // enob sweep
    std::string enob_method = "analytic";
    auto* enob = app.add_subcommand("enob", "ENOB analysis");
    enob->require_subcommand(1);
    auto* enob_sweep = enob->add_subcommand("sweep", "ENOB versus temperature");
    enob_sweep->add_option("--temps", rc.temps, "Comma-separated temperatures in K")->delimiter(',')->required();
    enob_sweep->add_option("--method", enob_method, "analytic or mc")
        ->check(CLI::IsMember({"analytic", "mc"}))
        ->capture_default_str();
    enob_sweep->add_option("--trials", rc.trials, "Monte Carlo trials")->capture_default_str();
    enob_sweep->add_option("--seed", rc.seed, "Monte Carlo seed")->capture_default_str();
    enob_sweep->add_option("--rows", rc.rows, "Array rows")->capture_default_str();
    enob_sweep->add_option("--cols", rc.cols, "Array columns")->capture_default_str();
    enob_sweep->add_option("--v-read", rc.v_read, "Wordline read voltage in V")->capture_default_str();
    enob_sweep->add_option("--c-ref", rc.c_ref, "Reference capacitance in F (default rows * c_max)");
    enob_sweep->add_flag("--noise-includes-cref", rc.noise_with_cref, "Count c_ref in the sampled noise capacitance");
    add_profile(enob_sweep);
    add_out_dir(enob_sweep);

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "Write calibrated profiles");
    cal->require_subcommand(1);
    nvcap::CalibrationTargets targets;
    std::string cal_start = "default_28nm";
    std::string cal_device_out = "default_28nm.prof";
    auto* cal_device = cal->add_subcommand("device", "Fit the device model to the characterization anchors");
    cal_device->add_option("--ratio-290", targets.ratio_290k, "Fresh on/off ratio at 290 K")->capture_default_str();
    cal_device->add_option("--ratio-77", targets.ratio_77k_postpulse, "Post-pulse on/off ratio at 77 K")
        ->capture_default_str();
    cal_device->add_option("--mw-290", targets.mw_290k, "Memory window at 290 K in V")->capture_default_str();
    cal_device->add_option("--mw-77", targets.mw_77k, "Memory window at 77 K in V")->capture_default_str();
    cal_device->add_option("--start", cal_start, "Starting profile")->capture_default_str();
    cal_device->add_option("--out", cal_device_out, "Output profile file")->capture_default_str();

    double op_enob = 4.0, op_temp = 290.0, op_vread = 0.1;
    std::size_t op_rows = 128;
    std::string op_base = "default_28nm";
    std::string op_out = "fig5_operating_point.prof";
    auto* cal_op = cal->add_subcommand("operating-point", "Cell capacitance for a target ENOB");
    cal_op->add_option("--enob", op_enob, "Target ENOB in bits")->capture_default_str();
    cal_op->add_option("--temp", op_temp, "Temperature in K")->capture_default_str();
    cal_op->add_option("--rows", op_rows, "Array rows")->capture_default_str();
    cal_op->add_option("--v-read", op_vread, "Wordline read voltage in V")->capture_default_str();
    cal_op->add_option("--base", op_base, "Base device profile")->capture_default_str();
    cal_op->add_option("--out", op_out, "Output profile file")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return k_exit_usage;
    }

    try {
        if (show_version) {
            std::printf("nvcap %s (default_28nm fnv1a64:%016" PRIx64 ")\n", k_version, nvcap::default_profile_hash());
            return 0;
        }
        stage = "select kernel";
        if (kernel != "auto") nvcap::kernels::set_backend(nvcap::kernels::parse_backend(kernel));

        if (cv->parsed()) return run_cv_sweep(rc, sweep_temp, sweep_range, sweep_dwell, sweep_uni);
        if (scheme_run->parsed()) return run_scheme_cmd(rc, scheme_which, scheme_temp);
        if (scheme_list->parsed()) {
            for (const auto& name : nvcap::list_presets()) std::cout << name << '\n';
            return 0;
        }
        if (ret->parsed()) return run_retention(rc, stress, stress_time, stress_sample);
        if (mac->parsed()) return run_mac(rc, weights_path, inputs_path, mac_noise, mac_temp, mac_out);
        if (enob_sweep->parsed()) return run_enob_sweep(rc, enob_method);
        if (cal_device->parsed()) return run_calibrate_device(targets, cal_start, cal_device_out);
        if (cal_op->parsed()) return run_calibrate_operating_point(op_base, op_enob, op_temp, op_rows, op_vread, op_out);

        std::cerr << app.help();
        return k_exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "nvcap: error [" << stage << "]: " << e.what() << '\n';
        return k_exit_usage;
    } catch (const nvcap::DimensionError& e) {
        std::cerr << "nvcap: error [" << stage << "]: " << e.what() << '\n';
        return k_exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "nvcap: error [" << stage << "]: " << e.what() << '\n';
        return k_exit_model;
    }
}
