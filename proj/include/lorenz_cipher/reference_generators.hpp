#pragma once

// Comparison generators for the randomness battery.

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace lorenz_cipher {

// 32-bit Fibonacci LFSR. Tap positions are 1-based as in the usual
// x^32 + x^22 + x^2 + x + 1 notation; the default set is maximal-length.
class Lfsr32 {
public:
    static constexpr std::uint32_t kDefaultTaps = (1u << 31) | (1u << 21) | (1u << 1) | (1u << 0);

    explicit Lfsr32(std::uint32_t seed, std::uint32_t taps = kDefaultTaps) : state_(seed), taps_(taps) {
        if (seed == 0) throw std::invalid_argument("LFSR seed must be nonzero");
        if (taps == 0) throw std::invalid_argument("LFSR needs at least one tap");
    }

    // Bit shifted out of position 32.
    std::uint8_t next_bit() {
        const std::uint32_t out = state_ >> 31;
        const auto feedback = static_cast<std::uint32_t>(std::popcount(state_ & taps_) & 1);
        state_ = (state_ << 1) | feedback;
        return static_cast<std::uint8_t>(out);
    }

    // Eight consecutive output bits, the first in bit 0.
    std::uint8_t next_byte() {
        std::uint8_t b = 0;
        for (int i = 0; i < 8; ++i) b = static_cast<std::uint8_t>(b | (next_bit() << i));
        return b;
    }

    [[nodiscard]] std::uint32_t state() const { return state_; }

private:
    std::uint32_t state_;
    std::uint32_t taps_;
};

// Park-Miller "minimal standard": x <- 16807 x mod (2^31 - 1).
class LehmerMinStd {
public:
    static constexpr std::uint64_t kModulus = 2147483647;
    static constexpr std::uint64_t kMultiplier = 16807;

    explicit LehmerMinStd(std::uint32_t seed) : state_(seed) {
        if (seed < 1 || seed > kModulus - 1) throw std::invalid_argument("Lehmer seed must be in [1, 2^31 - 2]");
    }

    std::uint32_t next() {
        state_ = static_cast<std::uint32_t>(kMultiplier * state_ % kModulus);
        return state_;
    }

    std::uint8_t next_byte() { return static_cast<std::uint8_t>(next() & 0xFFu); }

    [[nodiscard]] std::uint32_t state() const { return state_; }

private:
    std::uint32_t state_;
};

// Marsaglia xorshift32 with shift triple (13, 17, 5).
class MarsagliaXorshift32 {
public:
    explicit MarsagliaXorshift32(std::uint32_t seed) : state_(seed) {
        if (seed == 0) throw std::invalid_argument("xorshift seed must be nonzero");
    }

    std::uint32_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 17;
        state_ ^= state_ << 5;
        return state_;
    }

    std::uint8_t next_byte() { return static_cast<std::uint8_t>(next() & 0xFFu); }

private:
    std::uint32_t state_;
};

}  // namespace lorenz_cipher
