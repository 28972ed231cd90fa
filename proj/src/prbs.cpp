#include "dmxci/prbs.hpp"

#include "dmxci/errors.hpp"

#include <array>

namespace dmxci {

namespace {

// Two-tap primitive polynomials x^d + x^t + 1, indexed by degree.
struct TapEntry {
    int degree;
    int tap;
};
constexpr std::array<TapEntry, 10> kTaps{{{7, 6},
                                          {9, 5},
                                          {10, 7},
                                          {11, 9},
                                          {15, 14},
                                          {17, 14},
                                          {18, 11},
                                          {20, 17},
                                          {22, 21},
                                          {23, 18}}};

int tap_for_degree(int degree) {
    for (const auto& e : kTaps)
        if (e.degree == degree) return e.tap;
    return 0;
}

} // namespace

bool Prbs::supported_degree(int degree) { return tap_for_degree(degree) != 0; }

Prbs::Prbs(int degree, std::uint32_t seed) : degree_(degree), state_(seed) {
    const int tap = tap_for_degree(degree);
    if (tap == 0) throw ConfigError("unsupported PRBS degree " + std::to_string(degree));
    out_mask_ = 1u << (degree - 1);
    tap_mask_ = (1u << (degree - 1)) | (1u << (tap - 1));
    state_ &= (1u << degree) - 1;
    if (state_ == 0) throw ConfigError("PRBS seed must be non-zero (LFSR lock-up)");
}

int Prbs::next_bit() {
    const int out = (state_ & out_mask_) ? 1 : 0;
    // parity of the tapped bits becomes the new LSB
    const std::uint32_t tapped = state_ & tap_mask_;
    const int fb = __builtin_popcount(tapped) & 1;
    state_ = ((state_ << 1) | static_cast<std::uint32_t>(fb)) & ((1u << degree_) - 1);
    return out;
}

std::vector<std::uint8_t> Prbs::bits(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    for (auto& b : out) b = static_cast<std::uint8_t>(next_bit());
    return out;
}

std::vector<std::uint8_t> prbs_bits(int degree, std::uint32_t seed, std::size_t count) {
    return Prbs(degree, seed).bits(count);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace dmxci
