#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorenz_cipher/core_map.hpp"

namespace lorenz_cipher {

// Everything transmitter and receiver must agree on.
struct KeystreamConfig {
    std::uint32_t x0 = 18503;
    std::uint32_t y0 = 21315;
    std::uint32_t z0 = 32032;
    std::uint32_t n_perturb = 10000;
    bool perturbation = true;
    ContinuousParams params{};
    TransformParams transform{};
    // Register units added to the derived Z-row constant.
    std::int64_t const_z_offset = 0;

    void validate() const {
        make_state(x0, y0, z0);
        PerturbationConfig{n_perturb}.validate();
        params.validate();
        transform.validate();
    }

    [[nodiscard]] std::optional<PerturbationConfig> perturbation_config() const {
        if (!perturbation) return std::nullopt;
        return PerturbationConfig{n_perturb};
    }

    friend bool operator==(const KeystreamConfig&, const KeystreamConfig&) = default;
};

inline MapCoefficients coefficients_for(const KeystreamConfig& cfg) {
    MapCoefficients c = derive_coefficients(cfg.params, cfg.transform);
    if (cfg.const_z_offset != 0) c = offset_const_z(std::move(c), cfg.const_z_offset);
    return c;
}

// Emits the low byte of X and then advances the map by one step.
class KeystreamGenerator {
public:
    explicit KeystreamGenerator(KeystreamConfig config)
        : config_(std::move(config)), coefficients_(coefficients_for(config_)) {
        config_.validate();
        if (!coefficients_.shift_decomposable()) {
            std::string names;
            for (const auto& n : coefficients_.non_decomposable) names += (names.empty() ? "" : ", ") + n;
            throw std::invalid_argument("keystream parameters do not yield a shift/add register map (not shift-decomposable: " +
                                        names + ")");
        }
        state_ = make_state(config_.x0, config_.y0, config_.z0);
        perturbation_ = config_.perturbation_config();
    }

    std::uint8_t next_key_byte() { return static_cast<std::uint8_t>(full_key_word() & 0xFFu); }

    // Whole 17-bit X register; only used to study what leaks when the high
    // bits are part of the key.
    std::uint32_t full_key_word() {
        const std::uint32_t word = state_.x;
        state_ = advance(state_, coefficients_, perturbation_);
        return word;
    }

    void encrypt(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
        if (out.size() < in.size()) throw std::invalid_argument("output buffer too small");
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] ^ next_key_byte();
    }

    std::vector<std::uint8_t> encrypt(std::span<const std::uint8_t> plain) {
        std::vector<std::uint8_t> out(plain.size());
        encrypt(plain, out);
        return out;
    }

    std::vector<std::uint8_t> decrypt(std::span<const std::uint8_t> cipher) { return encrypt(cipher); }

    [[nodiscard]] const ChaoticState& state() const { return state_; }
    [[nodiscard]] const KeystreamConfig& config() const { return config_; }
    [[nodiscard]] const MapCoefficients& coefficients() const { return coefficients_; }
    [[nodiscard]] std::uint64_t bytes_emitted() const { return state_.n; }

private:
    KeystreamConfig config_;
    MapCoefficients coefficients_;
    ChaoticState state_{};
    std::optional<PerturbationConfig> perturbation_;
};

inline std::vector<std::uint8_t> keystream(const KeystreamConfig& cfg, std::size_t count) {
    KeystreamGenerator gen(cfg);
    std::vector<std::uint8_t> out(count);
    for (auto& b : out) b = gen.next_key_byte();
    return out;
}

}  // namespace lorenz_cipher
