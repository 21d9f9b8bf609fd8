#pragma once

// Functional model of the encrypted serial link: transmitter (keystream XOR
// + parallel-to-serial), a channel, and receiver (serial-to-parallel + XOR).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lorenz_cipher/bits.hpp"
#include "lorenz_cipher/cipher.hpp"

namespace lorenz_cipher {

struct LinkConfig {
    KeystreamConfig tx;
    KeystreamConfig rx;
    BitOrder bit_order = BitOrder::lsb_first;
};

struct LinkReport {
    std::vector<std::uint8_t> plain;
    std::vector<std::uint8_t> cipher;
    std::vector<std::uint8_t> recovered;
    std::uint64_t bit_errors = 0;
    std::uint64_t total_bits = 0;
    double ber = 0.0;
};

// Bit-transparent channel.
struct IdealChannel {
    Bits operator()(Bits bits) const { return bits; }
};

// Fraction of differing bits between two equally long byte sequences.
inline double compute_ber(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("compute_ber: length mismatch");
    if (a.empty()) throw std::invalid_argument("compute_ber: empty sequences");
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) errors += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
    return static_cast<double>(errors) / (8.0 * static_cast<double>(a.size()));
}

// Repeating 0, 1, ..., 255.
inline std::vector<std::uint8_t> ramp_message(std::size_t length) {
    std::vector<std::uint8_t> m(length);
    for (std::size_t i = 0; i < length; ++i) m[i] = static_cast<std::uint8_t>(i & 0xFFu);
    return m;
}

template <typename Channel = IdealChannel>
LinkReport run_link(const LinkConfig& cfg, std::span<const std::uint8_t> plain, Channel&& channel = {}) {
    if (plain.empty()) throw std::invalid_argument("run_link: empty plaintext");
    LinkReport report;
    report.plain.assign(plain.begin(), plain.end());

    KeystreamGenerator tx(cfg.tx);
    report.cipher = tx.encrypt(plain);

    Bits line = channel(serialize(report.cipher, cfg.bit_order));
    std::vector<std::uint8_t> received = deserialize(line, cfg.bit_order);
    if (received.size() != plain.size()) throw std::runtime_error("run_link: channel changed the message length");

    KeystreamGenerator rx(cfg.rx);
    report.recovered = rx.decrypt(received);

    report.total_bits = 8 * static_cast<std::uint64_t>(plain.size());
    for (std::size_t i = 0; i < plain.size(); ++i)
        report.bit_errors += std::popcount(static_cast<unsigned>(report.plain[i] ^ report.recovered[i]));
    report.ber = static_cast<double>(report.bit_errors) / static_cast<double>(report.total_bits);
    return report;
}

// Mismatch sweeps --------------------------------------------------------------

enum class SweepTarget { const_z, x0, y0, z0, n_perturb };
enum class OffsetUnit { absolute, percent };

inline std::string_view to_string(SweepTarget t) {
    switch (t) {
        case SweepTarget::const_z: return "const_z";
        case SweepTarget::x0: return "x0";
        case SweepTarget::y0: return "y0";
        case SweepTarget::z0: return "z0";
        case SweepTarget::n_perturb: return "n_perturb";
    }
    return "?";
}

inline SweepTarget parse_sweep_target(std::string_view s) {
    if (s == "const_z" || s == "p") return SweepTarget::const_z;
    if (s == "x0") return SweepTarget::x0;
    if (s == "y0") return SweepTarget::y0;
    if (s == "z0") return SweepTarget::z0;
    if (s == "n" || s == "n_perturb" || s == "N") return SweepTarget::n_perturb;
    throw std::invalid_argument("unknown sweep target '" + std::string(s) + "' (const_z, x0, y0, z0, n_perturb)");
}

struct SweepPoint {
    double offset = 0.0;
    std::int64_t applied_delta = 0;  // register units actually added
    double ber = std::numeric_limits<double>::quiet_NaN();
    std::optional<std::string> error;
};

struct MismatchSweepResult {
    SweepTarget target = SweepTarget::x0;
    OffsetUnit unit = OffsetUnit::absolute;
    std::vector<SweepPoint> points;
};

inline constexpr std::size_t kMinSweepMessageBytes = 50000;

namespace detail {

inline std::int64_t sweep_base_value(const KeystreamConfig& cfg, SweepTarget target) {
    switch (target) {
        case SweepTarget::const_z: return coefficients_for(cfg).const_z.num();
        case SweepTarget::x0: return cfg.x0;
        case SweepTarget::y0: return cfg.y0;
        case SweepTarget::z0: return cfg.z0;
        case SweepTarget::n_perturb: return cfg.n_perturb;
    }
    return 0;
}

// Percent offsets round to register units; a nonzero percentage never
// collapses to a zero mismatch.
inline std::int64_t sweep_delta(std::int64_t base, double offset, OffsetUnit unit) {
    if (unit == OffsetUnit::absolute) {
        if (offset != std::floor(offset)) throw std::invalid_argument("absolute offsets must be integers");
        return static_cast<std::int64_t>(offset);
    }
    auto delta = static_cast<std::int64_t>(std::llround(static_cast<double>(base) * offset / 100.0));
    if (delta == 0 && offset != 0.0) delta = offset > 0 ? 1 : -1;
    return delta;
}

inline KeystreamConfig apply_mismatch(KeystreamConfig cfg, SweepTarget target, std::int64_t delta) {
    auto shift_register = [delta](std::uint32_t v) {
        const std::int64_t r = static_cast<std::int64_t>(v) + delta;
        if (r < 0 || r >= static_cast<std::int64_t>(kRegisterModulus))
            throw std::out_of_range("offset drives the register outside [0, 2^17)");
        return static_cast<std::uint32_t>(r);
    };
    switch (target) {
        case SweepTarget::const_z: cfg.const_z_offset += delta; break;
        case SweepTarget::x0: cfg.x0 = shift_register(cfg.x0); break;
        case SweepTarget::y0: cfg.y0 = shift_register(cfg.y0); break;
        case SweepTarget::z0: cfg.z0 = shift_register(cfg.z0); break;
        case SweepTarget::n_perturb: {
            const std::int64_t n = static_cast<std::int64_t>(cfg.n_perturb) + delta;
            if (n < 1 || n >= (1 << kPerturbationBits))
                throw std::out_of_range("offset drives the perturbation interval outside [1, 2^14)");
            cfg.n_perturb = static_cast<std::uint32_t>(n);
            break;
        }
    }
    return cfg;
}

}  // namespace detail

// Runs one link per offset with only the receiver's target quantity
// changed. The zero offset is always measured and reported first; the
// remaining points follow in ascending order.
inline MismatchSweepResult mismatch_sweep(const LinkConfig& base, SweepTarget target, std::vector<double> offsets,
                                          OffsetUnit unit, std::size_t message_len,
                                          std::optional<std::span<const std::uint8_t>> plaintext = std::nullopt) {
    if (offsets.empty()) throw std::invalid_argument("mismatch_sweep: no offsets given");
    if (message_len < kMinSweepMessageBytes)
        throw std::invalid_argument("mismatch_sweep: message must be at least 50000 bytes");

    std::vector<std::uint8_t> message;
    if (plaintext) {
        if (plaintext->size() < message_len) throw std::invalid_argument("mismatch_sweep: plaintext shorter than message_len");
        message.assign(plaintext->begin(), plaintext->begin() + static_cast<std::ptrdiff_t>(message_len));
    } else {
        message = ramp_message(message_len);
    }

    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    offsets.erase(std::remove(offsets.begin(), offsets.end(), 0.0), offsets.end());
    offsets.insert(offsets.begin(), 0.0);

    const std::int64_t base_value = detail::sweep_base_value(base.rx, target);
    MismatchSweepResult result{target, unit, {}};
    for (double off : offsets) {
        SweepPoint point;
        point.offset = off;
        try {
            point.applied_delta = detail::sweep_delta(base_value, off, unit);
            LinkConfig cfg = base;
            cfg.rx = detail::apply_mismatch(base.rx, target, point.applied_delta);
            point.ber = run_link(cfg, message).ber;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        result.points.push_back(std::move(point));
    }
    return result;
}

// "offset,ber" with rejected points omitted.
inline void write_sweep_csv(std::ostream& os, const MismatchSweepResult& r) {
    os << "offset,ber\n";
    for (const auto& p : r.points) {
        if (p.error) continue;
        std::ostringstream off;
        off << std::setprecision(12) << p.offset;
        os << off.str() << ',' << std::fixed << std::setprecision(10) << p.ber << std::defaultfloat << '\n';
    }
}

inline void write_link_report_csv(std::ostream& os, const LinkReport& r) {
    os << "bytes,total_bits,bit_errors,ber\n";
    os << r.plain.size() << ',' << r.total_bits << ',' << r.bit_errors << ',' << std::fixed << std::setprecision(10)
       << r.ber << std::defaultfloat << '\n';
}

}  // namespace lorenz_cipher
