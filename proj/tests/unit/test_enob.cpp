#include <cmath>

#include "../support/oracles.hpp"
#include "doctest.h"
#include "nvcap/enob.hpp"
#include "nvcap/errors.hpp"
#include "nvcap/profile.hpp"

using namespace nvcap;

TEST_SUITE("enob") {

TEST_CASE("thermal charge sigma matches the oracle") {
    CHECK(thermal_charge_sigma(290.0, 1e-12) == doctest::Approx(oracle::sigma_q_290k_1pf).epsilon(1e-14));
    CHECK(thermal_charge_sigma(77.0, 1e-12) == doctest::Approx(oracle::sigma_q_77k_1pf).epsilon(1e-14));
    CHECK_THROWS_AS(thermal_charge_sigma(0.0, 1e-12), DomainError);
    CHECK_THROWS_AS(thermal_charge_sigma(290.0, -1.0), DomainError);
}

TEST_CASE("ENOB from SNR") {
    CHECK(enob_from_snr_db(31.60) == doctest::Approx(oracle::enob_at_31_60_db).epsilon(1e-14));
    CHECK(enob_from_snr_db(25.84) == doctest::Approx(oracle::enob_at_25_84_db).epsilon(1e-14));
    CHECK(enob_from_snr_db(0.0) < 0.0);
}

TEST_CASE("cell capacitance for a target ENOB") {
    CHECK(calibrate_cell_capacitance(4.0, 290.0, 128, 0.1) ==
          doctest::Approx(oracle::c_max_4bit_290k).epsilon(1e-13));
    CHECK_THROWS_AS(calibrate_cell_capacitance(4.0, 290.0, 0, 0.1), DomainError);
}

TEST_CASE("analytic ENOB on the operating-point profile") {
    const DeviceParams p = load_profile("fig5_operating_point");
    CHECK(p.c_max == doctest::Approx(oracle::c_max_4bit_290k).epsilon(1e-13));
    const auto cfg = CrossbarConfig::for_device(p, 128, 128);
    const EnobReport r290 = analytic_enob(p, cfg, 290.0);
    const EnobReport r77 = analytic_enob(p, cfg, 77.0);
    CHECK(r290.enob == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(r77.enob == doctest::Approx(oracle::enob_77k_at_op).epsilon(1e-6));
    CHECK(r77.enob - r290.enob == doctest::Approx(oracle::enob_gain_77k).epsilon(1e-9));
    CHECK(r290.method == EnobMethod::analytic);
    CHECK_FALSE(r290.trials.has_value());
}

TEST_CASE("analytic ENOB does not depend on c_ref with bitline noise") {
    const DeviceParams p = load_profile("fig5_operating_point");
    auto cfg = CrossbarConfig::for_device(p, 128, 16);
    const double e1 = analytic_enob(p, cfg).enob;
    cfg.c_ref *= 3.0;
    cfg.v_out_max = 10.0;
    CHECK(analytic_enob(p, cfg).enob == doctest::Approx(e1).epsilon(1e-12));
    cfg.noise_capacitance = NoiseCapacitance::bitline_plus_reference;
    CHECK(analytic_enob(p, cfg).enob < e1);
}

TEST_CASE("Monte Carlo ENOB agrees with analytic") {
    const DeviceParams p = load_profile("fig5_operating_point");
    const auto cfg = CrossbarConfig::for_device(p, 128, 32);
    const std::vector<double> temps{77.0, 290.0};
    const auto mc = temperature_sweep(p, cfg, temps, EnobMethod::monte_carlo, 4000, 1);
    const auto an = temperature_sweep(p, cfg, temps, EnobMethod::analytic);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(mc[k].enob == doctest::Approx(an[k].enob).epsilon(0.01));
        CHECK(mc[k].trials == std::optional<std::uint64_t>{4000});
        CHECK(mc[k].seed == std::optional<std::uint64_t>{1});
    }
    CHECK(mc == temperature_sweep(p, cfg, temps, EnobMethod::monte_carlo, 4000, 1));
}

TEST_CASE("noise-free Monte Carlo reports infinite SNR") {
    const DeviceParams p = load_profile("fig5_operating_point");
    const auto cfg = CrossbarConfig::for_device(p, 16, 4);
    const CrossbarArray a = program_array(BinaryMatrix(16, 4, 1), p, cfg);
    const EnobReport r = monte_carlo_enob(a, 1000, 0, false);
    CHECK(r.infinite_snr);
    CHECK(std::isinf(r.enob));
}

TEST_CASE("Monte Carlo needs at least 1000 trials") {
    const DeviceParams p = load_profile("fig5_operating_point");
    const CrossbarArray a = program_array(BinaryMatrix(4, 4, 1), p, CrossbarConfig::for_device(p, 4, 4));
    CHECK_THROWS_AS(monte_carlo_enob(a, 999, 0), DomainError);
}

TEST_CASE("method names") {
    CHECK(std::string(to_string(EnobMethod::monte_carlo)) == "mc");
    CHECK(parse_enob_method("analytic") == EnobMethod::analytic);
    CHECK_THROWS_AS(parse_enob_method("spice"), DomainError);
}

TEST_CASE("operating point keeps the all-HCS read saturated") {
    const DeviceParams p = operating_point_profile(DeviceParams{});
    for (double t : {77.0, 150.0, 290.0}) {
        const double c = small_signal_capacitance(p, NvCapState::programmed(Polarization::hcs), 0.0, t);
        CHECK(c == doctest::Approx(p.c_max).epsilon(1e-6));
    }
    CHECK(p.c_max / p.c_ov == doctest::Approx(DeviceParams{}.c_max / DeviceParams{}.c_ov));
    CHECK(p == load_profile("fig5_operating_point"));
}

}
