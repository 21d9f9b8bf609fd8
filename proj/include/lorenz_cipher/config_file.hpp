#pragma once

// Line-oriented key=value description of the shared secret.
//
//   # comment
//   x0 = 18503          decimal or 0x-hex
//   y0 = 0x5343
//   z0 = 32032
//   n_perturb = 10000
//   perturbation = on   on|off
//   bit_order = lsb     lsb|msb
//   k_num = 1
//   k_den = 64
//   delta = 8           integer or p/q
//   gamma = 24
//   b = 2
//   bias = 40
//   scale = 512
//   const_z_offset = 0  signed register units added to the Z-row constant
//
// Missing keys keep their defaults; unknown or repeated keys are errors.

#include <charconv>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lorenz_cipher/bits.hpp"
#include "lorenz_cipher/cipher.hpp"

namespace lorenz_cipher {

struct ConfigFile {
    KeystreamConfig keystream{};
    BitOrder bit_order = BitOrder::lsb_first;

    friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

// Decimal or 0x-prefixed hexadecimal, optionally signed.
inline std::int64_t parse_integer(std::string_view text) {
    std::string_view s = detail::trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s.remove_prefix(2);
    }
    std::uint64_t v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() ||
        v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw ConfigError("not an integer: '" + std::string(text) + "'");
    return negative ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

inline std::uint32_t parse_unsigned32(std::string_view text) {
    const std::int64_t v = parse_integer(text);
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max())
        throw ConfigError("value out of range: '" + std::string(text) + "'");
    return static_cast<std::uint32_t>(v);
}

inline ConfigFile parse_config(std::string_view text) {
    ConfigFile cfg;
    auto& ks = cfg.keystream;
    std::int64_t k_num = ks.params.k.num();
    std::int64_t k_den = ks.params.k.den();
    std::set<std::string, std::less<>> seen;

    auto rational = [](std::string_view key, std::string_view v) {
        auto r = Rational::parse(v);
        if (!r) throw ConfigError("bad rational for " + std::string(key) + ": '" + std::string(v) + "'");
        return *r;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (!seen.emplace(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        try {
            if (key == "x0") ks.x0 = parse_unsigned32(value);
            else if (key == "y0") ks.y0 = parse_unsigned32(value);
            else if (key == "z0") ks.z0 = parse_unsigned32(value);
            else if (key == "n_perturb") ks.n_perturb = parse_unsigned32(value);
            else if (key == "perturbation") {
                if (value == "on") ks.perturbation = true;
                else if (value == "off") ks.perturbation = false;
                else throw ConfigError("perturbation must be on or off");
            } else if (key == "bit_order") cfg.bit_order = parse_bit_order(value);
            else if (key == "k_num") k_num = parse_integer(value);
            else if (key == "k_den") k_den = parse_integer(value);
            else if (key == "delta") ks.params.delta = rational(key, value);
            else if (key == "gamma") ks.params.gamma = rational(key, value);
            else if (key == "b") ks.params.b = rational(key, value);
            else if (key == "bias") ks.transform.bias = rational(key, value);
            else if (key == "scale") ks.transform.scale = rational(key, value);
            else if (key == "const_z_offset") ks.const_z_offset = parse_integer(value);
            else throw ConfigError("unknown key '" + std::string(key) + "'");
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (k_den == 0) throw ConfigError("k_den must be nonzero");
    ks.params.k = Rational(k_num, k_den);
    try {
        ks.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

inline std::string serialize_config(const ConfigFile& cfg) {
    const auto& ks = cfg.keystream;
    std::ostringstream os;
    os << "x0 = " << ks.x0 << '\n'
       << "y0 = " << ks.y0 << '\n'
       << "z0 = " << ks.z0 << '\n'
       << "n_perturb = " << ks.n_perturb << '\n'
       << "perturbation = " << (ks.perturbation ? "on" : "off") << '\n'
       << "bit_order = " << to_string(cfg.bit_order) << '\n'
       << "k_num = " << ks.params.k.num() << '\n'
       << "k_den = " << ks.params.k.den() << '\n'
       << "delta = " << ks.params.delta << '\n'
       << "gamma = " << ks.params.gamma << '\n'
       << "b = " << ks.params.b << '\n'
       << "bias = " << ks.transform.bias << '\n'
       << "scale = " << ks.transform.scale << '\n'
       << "const_z_offset = " << ks.const_z_offset << '\n';
    return os.str();
}

}  // namespace lorenz_cipher
