#pragma once

// Reference values computed independently of this library (double-precision
// Python, formulas written out by hand) and frozen here.

#include <array>
#include <cstdint>

namespace nvcap::oracle {

// sqrt(k_B T C) for C = 1 pF.
inline constexpr double sigma_q_290k_1pf = 6.327623645571851e-17;
inline constexpr double sigma_q_77k_1pf = 3.2605210166474926e-17;

inline constexpr double enob_at_31_60_db = 4.956810631229236;
inline constexpr double enob_at_25_84_db = 4.0;

// 4-bit full-scale SNR as an amplitude ratio, 10^((6.02 * 4 + 1.76) / 20).
inline constexpr double snr_ratio_4bit = 19.5884467350599;

// Cell capacitance for 4.0 bits at 290 K, 128 rows, 0.1 V read.
inline constexpr double c_max_4bit_290k = 9.601991074167756e-18;

// ENOB(77 K) - ENOB(290 K) = 10 log10(290 / 77) / 6.02.
inline constexpr double enob_gain_77k = 0.9566565992134124;
inline constexpr double enob_77k_at_op = 4.956656599213413;

// Philox4x32-10 known-answer vectors (Random123 kat_vectors).
struct PhiloxKat {
    std::array<std::uint32_t, 4> ctr;
    std::array<std::uint32_t, 2> key;
    std::array<std::uint32_t, 4> out;
};

inline constexpr std::array<PhiloxKat, 3> philox_kats = {{
    {{0u, 0u, 0u, 0u}, {0u, 0u}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
    {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
     {0xffffffffu, 0xffffffffu},
     {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
    {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
     {0xa4093822u, 0x299f31d0u},
     {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}},
}};

} // namespace nvcap::oracle
