#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lorenz_cipher {

enum class BitOrder { lsb_first, msb_first };

inline std::string_view to_string(BitOrder order) { return order == BitOrder::lsb_first ? "lsb" : "msb"; }

inline BitOrder parse_bit_order(std::string_view text) {
    if (text == "lsb" || text == "lsb-first" || text == "LSB") return BitOrder::lsb_first;
    if (text == "msb" || text == "msb-first" || text == "MSB") return BitOrder::msb_first;
    throw std::invalid_argument("bit order must be 'lsb' or 'msb', got '" + std::string(text) + "'");
}

// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

inline Bits serialize(std::span<const std::uint8_t> bytes, BitOrder order = BitOrder::lsb_first) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 0; i < 8; ++i) {
            const int pos = order == BitOrder::lsb_first ? i : 7 - i;
            bits.push_back(static_cast<std::uint8_t>((b >> pos) & 1u));
        }
    return bits;
}

inline std::vector<std::uint8_t> deserialize(std::span<const std::uint8_t> bits, BitOrder order = BitOrder::lsb_first) {
    if (bits.size() % 8 != 0) throw std::invalid_argument("bit count is not a multiple of 8");
    std::vector<std::uint8_t> bytes(bits.size() / 8);
    for (std::size_t j = 0; j < bytes.size(); ++j) {
        std::uint8_t b = 0;
        for (int i = 0; i < 8; ++i) {
            const int pos = order == BitOrder::lsb_first ? i : 7 - i;
            b = static_cast<std::uint8_t>(b | ((bits[j * 8 + i] & 1u) << pos));
        }
        bytes[j] = b;
    }
    return bytes;
}

}  // namespace lorenz_cipher
