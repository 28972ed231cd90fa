#pragma once

#include <cstdint>
#include <vector>

namespace dmxci {

// Maximal-length Fibonacci LFSR. The polynomial table covers the degrees used
// by the channel plans; degree 17 (x^17 + x^14 + 1) is the default.
class Prbs {
  public:
    Prbs(int degree, std::uint32_t seed);

    int next_bit();
    std::vector<std::uint8_t> bits(std::size_t count);

    int degree() const { return degree_; }
    std::uint32_t state() const { return state_; }
    // 2^degree - 1
    std::uint64_t period() const { return (1ull << degree_) - 1; }

    static bool supported_degree(int degree);

  private:
    int degree_;
    std::uint32_t state_;
    std::uint32_t tap_mask_;
    std::uint32_t out_mask_;
};

// Convenience wrapper matching the operation-level contract.
std::vector<std::uint8_t> prbs_bits(int degree, std::uint32_t seed, std::size_t count);

// splitmix64, used to expand one master seed into per-channel PRBS seeds.
std::uint64_t splitmix64(std::uint64_t& state);

} // namespace dmxci
