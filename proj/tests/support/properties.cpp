#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "nvcap/crossbar.hpp"
#include "nvcap/device_model.hpp"
#include "nvcap/protocol.hpp"
#include "nvcap/report.hpp"

namespace nvcap::testing {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

DeviceParams random_params(Rng& rng) {
    DeviceParams p;
    p.c_ov = uniform(rng, 1e-18, 1e-17);
    p.c_max = p.c_ov * uniform(rng, 2.0, 50.0);
    p.vth_hcs_ref = uniform(rng, -2.0, 0.0);
    p.vth_lcs_ref = p.vth_hcs_ref + uniform(rng, 0.5, 3.0);
    p.alpha_shift = uniform(rng, 0.0, 0.01);
    p.slope = uniform(rng, 0.05, 0.3);
    p.k_trap_ref = uniform(rng, 0.0, 0.02);
    p.e_a = uniform(rng, 0.1, 0.4);
    p.beta_stretch = uniform(rng, 0.3, 1.0);
    return p;
}

NvCapState random_state(Rng& rng) {
    NvCapState s;
    s.polarization = rng() % 2 ? Polarization::hcs : Polarization::lcs;
    s.retained_fraction = uniform(rng, 0.2, 1.0);
    s.trapped_charge = uniform(rng, 0.0, 0.5);
    return s;
}

BinaryMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    BinaryMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<std::uint8_t>(rng() & 1u);
    }
    return m;
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
    return v;
}

CrossbarArray random_array(Rng& rng, const BinaryMatrix& w) {
    const DeviceParams p;
    return program_array(w, p, CrossbarConfig::for_device(p, w.rows(), w.cols(), uniform(rng, 60.0, 320.0)));
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

PropertyResult fail(PropertyResult r, const std::string& detail) {
    r.passed = false;
    r.detail = detail;
    return r;
}

} // namespace

PropertyResult cv_monotone_and_bounded(int cases, std::uint64_t seed) {
    PropertyResult r{"C-V monotone in V and bounded by [c_ov, c_max]", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const DeviceParams p = random_params(rng);
        const NvCapState s = random_state(rng);
        const double t = uniform(rng, 4.0, 400.0);
        double prev = -1.0;
        for (double v = -6.0; v <= 6.0; v += 0.01) {
            const double cap = small_signal_capacitance(p, s, v, t);
            if (cap < p.c_ov || cap > p.c_max) return fail(r, "out of bounds at case " + std::to_string(c));
            if (cap < prev) return fail(r, "decreasing at case " + std::to_string(c) + ", V = " + format_real(v));
            prev = cap;
        }
    }
    return r;
}

PropertyResult trapping_monotone(int cases, std::uint64_t seed) {
    PropertyResult r{"trapped charge never decreases", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const DeviceParams p = random_params(rng);
        NvCapState s = random_state(rng);
        const double t = uniform(rng, 4.0, 400.0);
        for (int k = 0; k < 200; ++k) {
            const NvCapState next = accrue_trapping(p, s, uniform(rng, -5.0, 5.0), uniform(rng, 0.0, 1.0), t);
            if (next.trapped_charge < s.trapped_charge) return fail(r, "case " + std::to_string(c));
            s = next;
        }
        const SweepResult sw = quasi_static_cv_sweep(p, s, {-4.0, 4.0, 0.05, 0.1, true}, t);
        if (sw.final_state.trapped_charge < s.trapped_charge) return fail(r, "sweep, case " + std::to_string(c));
    }
    return r;
}

PropertyResult retention_monotone(int cases, std::uint64_t seed) {
    PropertyResult r{"retained fraction non-increasing, percent decay non-decreasing", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const DeviceParams p = random_params(rng);
        const NvCapState s = random_state(rng);
        const RetentionResult res =
            dc_stress_retention(p, s, uniform(rng, 0.0, 0.5), 1000.0, 10.0, uniform(rng, 20.0, 400.0));
        for (std::size_t k = 1; k < res.samples.size(); ++k) {
            if (res.samples[k].retained_fraction > res.samples[k - 1].retained_fraction ||
                res.samples[k].percent_decay < res.samples[k - 1].percent_decay) {
                return fail(r, "case " + std::to_string(c) + ", sample " + std::to_string(k));
            }
        }
    }
    return r;
}

PropertyResult pulse_idempotent(int cases, std::uint64_t seed) {
    PropertyResult r{"applying a pulse twice equals applying it once", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const DeviceParams p = random_params(rng);
        const NvCapState s = random_state(rng);
        const Pulse pulse{uniform(rng, -5.0, 5.0), std::pow(10.0, uniform(rng, -8.0, -3.0))};
        const NvCapState once = apply_pulse(p, s, pulse);
        if (!(apply_pulse(p, once, pulse) == once)) return fail(r, "case " + std::to_string(c));
    }
    return r;
}

PropertyResult charge_superposition(int cases, std::uint64_t seed) {
    PropertyResult r{"charge phase is additive over disjoint input sets", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const BinaryMatrix w = random_matrix(rng, pick(rng, 1, 48), pick(rng, 1, 48));
        const CrossbarArray a = random_array(rng, w);
        std::vector<std::uint8_t> x1(w.rows()), x2(w.rows()), both(w.rows());
        for (std::size_t i = 0; i < w.rows(); ++i) {
            const auto u = rng() % 3;
            x1[i] = u == 1;
            x2[i] = u == 2;
            both[i] = u != 0;
        }
        const auto q1 = charge_phase(a, x1);
        const auto q2 = charge_phase(a, x2);
        const auto q = charge_phase(a, both);
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (!close(q[j], q1[j] + q2[j], 1e-12)) return fail(r, "case " + std::to_string(c));
        }
    }
    return r;
}

PropertyResult charge_permutation_equivariance(int cases, std::uint64_t seed) {
    PropertyResult r{"charge phase equivariant under row and column permutations", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const std::size_t rows = pick(rng, 1, 40);
        const std::size_t cols = pick(rng, 1, 40);
        const BinaryMatrix w = random_matrix(rng, rows, cols);
        const auto x = random_bits(rng, rows);
        std::vector<std::size_t> rp(rows), cp(cols);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        BinaryMatrix wp(rows, cols);
        std::vector<std::uint8_t> xp(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            xp[i] = x[rp[i]];
            for (std::size_t j = 0; j < cols; ++j) wp(i, j) = w(rp[i], cp[j]);
        }
        const double t = uniform(rng, 60.0, 320.0);
        const DeviceParams p;
        const auto cfg = CrossbarConfig::for_device(p, rows, cols, t);
        const auto q = charge_phase(program_array(w, p, cfg), x);
        const auto qp = charge_phase(program_array(wp, p, cfg), xp);
        for (std::size_t j = 0; j < cols; ++j) {
            if (!close(qp[j], q[cp[j]], 1e-12)) return fail(r, "case " + std::to_string(c));
        }
    }
    return r;
}

PropertyResult scheme_round_trip(int cases, std::uint64_t seed) {
    PropertyResult r{"scheme render/parse round trip is exact", true, {}};
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        PulseScheme s;
        s.name = "rt";
        const std::size_t n = pick(rng, 1, 8);
        for (std::size_t k = 0; k < n; ++k) {
            switch (rng() % 4) {
            case 0:
                s.steps.emplace_back(TempStep{uniform(rng, 1.0, 400.0)});
                break;
            case 1:
                s.steps.emplace_back(PulseStep{uniform(rng, -5.0, 5.0), std::pow(10.0, uniform(rng, -9.0, 0.0))});
                break;
            case 2: {
                const double a = uniform(rng, -5.0, 5.0);
                const double span = uniform(rng, 0.1, 8.0);
                const double b = rng() % 2 ? a + span : a - span;
                s.steps.emplace_back(SweepStep{a, b, uniform(rng, 1e-3, span), uniform(rng, 1e-6, 1.0)});
                break;
            }
            default: {
                const double dur = uniform(rng, 1.0, 1e4);
                s.steps.emplace_back(HoldStep{uniform(rng, -1.0, 1.0), dur, uniform(rng, 1e-3, dur)});
            }
            }
        }
        const std::string text = render_scheme(s);
        const PulseScheme back = parse_scheme(text, "rt");
        if (!(back == s)) return fail(r, "case " + std::to_string(c) + ":\n" + text);
        if (render_scheme(back) != text) return fail(r, "render not canonical, case " + std::to_string(c));
    }
    return r;
}

PropertyResult cli_outputs_reproducible() {
    PropertyResult r{"seeded CLI outputs are byte-identical across runs", true, {}};
    const auto dir = scratch_dir("reproducible");
    {
        std::ofstream w(dir / "w.csv");
        Rng rng(11);
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 12; ++j) w << (j ? "," : "") << (rng() & 1u);
            w << '\n';
        }
        std::ofstream x(dir / "x.csv");
        for (int i = 0; i < 16; ++i) x << (i ? "," : "") << (rng() & 1u);
        x << '\n';
    }
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
        {"mac --weights ../w.csv --inputs ../x.csv --noise --seed 42 --temp 77 --out mac.csv", {"mac.csv"}},
        {"enob sweep --temps 77,290 --method mc --trials 2000 --seed 9 --profile fig5_operating_point --out .",
         {"enob.csv", "enob.json"}},
        {"scheme run fig2_trap_test --temp 77 --out .", {"fig2_trap_test_1.csv", "fig2_trap_test_2.csv"}},
    };
    for (const auto& [args, files] : runs) {
        for (const char* tag : {"a", "b"}) {
            if (run_cli(args, dir / tag) != 0) return fail(r, "`nvcap " + args + "` failed");
        }
        for (const auto& f : files) {
            const std::string a = read_file(dir / "a" / f);
            if (a.empty() || a != read_file(dir / "b" / f)) return fail(r, f + " differs between runs");
        }
    }
    return r;
}

std::vector<PropertyResult> all_properties() {
    return {cv_monotone_and_bounded(200), trapping_monotone(100),       retention_monotone(200),
            pulse_idempotent(2000),       charge_superposition(300),    charge_permutation_equivariance(300),
            scheme_round_trip(500),       cli_outputs_reproducible()};
}

} // namespace nvcap::testing
