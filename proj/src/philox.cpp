#include "nvcap/philox.hpp"

#include <cmath>
#include <numbers>

namespace nvcap {

namespace {

constexpr std::uint32_t k_mul0 = 0xD2511F53u;
constexpr std::uint32_t k_mul1 = 0xCD9E8D57u;
constexpr std::uint32_t k_weyl0 = 0x9E3779B9u;
constexpr std::uint32_t k_weyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += k_weyl0;
            key[1] += k_weyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(k_mul0, ctr[0], hi0, lo0);
        mulhilo(k_mul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

Philox4x32::Counter stream_counter(std::uint64_t index, std::uint32_t lane, StreamTag tag) {
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), lane,
            static_cast<std::uint32_t>(tag)};
}

double uniform_open01(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

std::pair<double, double> standard_normal_pair(std::uint64_t seed, std::uint64_t index, std::uint32_t lane,
                                               StreamTag tag) {
    const auto r = Philox4x32::generate(stream_counter(index, lane, tag), Philox4x32::key_from_seed(seed));
    const double u1 = uniform_open01(r[0], r[1]);
    const double u2 = uniform_open01(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace nvcap
