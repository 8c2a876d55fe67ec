#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., Random123). Every
// draw is a pure function of (key, counter), so Monte Carlo streams indexed
// by (seed, trial, column) are reproducible under any evaluation order.

#include <array>
#include <cstdint>
#include <utility>

namespace nvcap {

class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key);

    static Key key_from_seed(std::uint64_t seed) {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }
};

// Stream domains occupying counter word 3, keeping draws for different
// purposes disjoint under the same seed.
enum class StreamTag : std::uint32_t { mac_noise = 1, mc_inputs = 2 };

// Counter layout: {index lo, index hi, lane, tag}.
Philox4x32::Counter stream_counter(std::uint64_t index, std::uint32_t lane, StreamTag tag);

// Uniform on the open interval (0, 1) from the top 52 bits; (k + 1/2) 2^-52
// stays exactly representable, so neither endpoint can occur.
double uniform_open01(std::uint32_t hi, std::uint32_t lo);

// Box-Muller pair of independent standard normals from one Philox block.
std::pair<double, double> standard_normal_pair(std::uint64_t seed, std::uint64_t index, std::uint32_t lane,
                                               StreamTag tag);

} // namespace nvcap
