#include "doctest.h"
#include "nvcap/calibration.hpp"
#include "nvcap/errors.hpp"
#include "nvcap/protocol.hpp"

using namespace nvcap;

TEST_SUITE("protocol") {

TEST_CASE("parse accepts case, prefixes and comments") {
    const PulseScheme s = parse_scheme("# header\n"
                                       "temp 77k\n"
                                       "Pulse 4V 10us   # program\n"
                                       "\n"
                                       "SWEEP -1V 1V step 50mV dwell 100ms\n"
                                       "HOLD 100mV 1ks SAMPLE 10s\n"
                                       "PULSE -4v 10\xC2\xB5s\n");
    REQUIRE(s.steps.size() == 5);
    CHECK(std::get<TempStep>(s.steps[0]).temperature == 77.0);
    CHECK(std::get<PulseStep>(s.steps[1]) == PulseStep{4.0, 10e-6});
    CHECK(std::get<SweepStep>(s.steps[2]) == SweepStep{-1.0, 1.0, 50e-3, 100e-3});
    CHECK(std::get<HoldStep>(s.steps[3]) == HoldStep{100e-3, 1e3, 10.0});
    CHECK(std::get<PulseStep>(s.steps[4]).width == 10e-6);
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const char* text) {
        try {
            parse_scheme(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("") == 1);
    CHECK(line_of("# nothing\n") == 1);
    CHECK(line_of("PULSE 4V 10us\nJUMP 3V\n") == 2);
    CHECK(line_of("PULSE 4 10us\n") == 1);
    CHECK(line_of("PULSE 4V 10uV\n") == 1);
    CHECK(line_of("PULSE 4V 0s\n") == 1);
    CHECK(line_of("\n\nSWEEP 1V 1V STEP 0.1V DWELL 1s\n") == 3);
    CHECK(line_of("SWEEP 0V 1V STEP 2V DWELL 1s\n") == 1);
    CHECK(line_of("SWEEP 0V 1V STEP 0.1V WAIT 1s\n") == 1);
    CHECK(line_of("HOLD 0.1V 10s SAMPLE 20s\n") == 1);
    CHECK(line_of("TEMP -5K\n") == 1);
    CHECK(line_of("PULSE 4V 10xs\n") == 1);
}

TEST_CASE("render is canonical and round-trips") {
    const PulseScheme s = parse_scheme("temp 77K\nPULSE 4V 10us\nSWEEP -1V 1V STEP 50mV DWELL 100ms\n", "x");
    const std::string text = render_scheme(s);
    CHECK(text == "TEMP 77K\nPULSE 4V 1.0000000000000001e-05s\n"
                  "SWEEP -1V 1V STEP 0.050000000000000003V DWELL 0.10000000000000001s\n");
    CHECK(parse_scheme(text, "x") == s);
}

TEST_CASE("presets are listed and loadable") {
    const auto names = list_presets();
    REQUIRE(names == std::vector<std::string>{"fig2_full_sweep", "fig2_trap_test", "fig3_pulse_read", "fig4_retention"});
    for (const auto& n : names) CHECK(load_preset(n).name == n);
    CHECK_THROWS_AS(load_preset("nope"), NotFoundError);
    CHECK_THROWS_AS(load_scheme("/no/such/file.scheme"), NotFoundError);
}

TEST_CASE("fig3 preset reproduces the calibration measurement") {
    const DeviceParams p;
    const ProtocolTrace t = run_scheme(p, load_preset("fig3_pulse_read"), NvCapState{}, 77.0);
    REQUIRE(t.records.size() == 4);
    const double ratio = t.records[3].curve->capacitance_at(0.0) / t.records[1].curve->capacitance_at(0.0);
    CHECK(ratio == pulse_read_ratio(p, 77.0));
}

TEST_CASE("fig2 full sweep preset matches the calibration window") {
    const DeviceParams p;
    const ProtocolTrace t = run_scheme(p, load_preset("fig2_full_sweep"), NvCapState{}, 290.0);
    REQUIRE(t.records.size() == 2);
    CHECK(memory_window(p, *t.records[1].curve, *t.records[0].curve) == full_sweep_memory_window(p, 290.0));
}

TEST_CASE("TEMP steps change the temperature for later steps") {
    const PulseScheme s = parse_scheme("PULSE 4V 10us\nTEMP 77K\nHOLD 0.1V 100s SAMPLE 10s\n");
    const ProtocolTrace t = run_scheme(DeviceParams{}, s, NvCapState{}, 290.0);
    CHECK(t.temperature_history == std::vector<double>{290.0, 77.0});
    CHECK(t.records[0].temperature == 290.0);
    CHECK(t.records[2].temperature == 77.0);
    CHECK(t.records[2].retention->size() == 11);
    CHECK(t.final_state.polarization == Polarization::hcs);
}

TEST_CASE("runtime errors name the failing step") {
    PulseScheme s;
    s.name = "bad";
    s.steps = {PulseStep{4.0, 1e-5}, TempStep{-1.0}};
    try {
        run_scheme(DeviceParams{}, s);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).rfind("step 1 (TEMP): ", 0) == 0);
    }
}

TEST_CASE("trace CSVs are written for SWEEP and HOLD steps") {
    const auto dir = std::filesystem::temp_directory_path() / "nvcap_test_trace";
    std::filesystem::remove_all(dir);
    const ProtocolTrace t = run_scheme(DeviceParams{}, load_preset("fig4_retention"), NvCapState{}, 290.0);
    const auto files = write_trace_csvs(t, dir);
    REQUIRE(files.size() == 3);
    CHECK(files[0].filename() == "fig4_retention_1.csv");
    CHECK(files[2].filename() == "fig4_retention_3.csv");
    for (const auto& f : files) CHECK(std::filesystem::file_size(f) > 0);
}

}
