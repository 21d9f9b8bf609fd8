#pragma once

// Integer Lorenz 3D map with periodic low-byte perturbation, plus the
// continuous/Euler floating-point reference it is derived from.
//
// Register dynamics:
//   X' = X + Y/8 - X/8
//   Y' = Y - Y/64 + X + Z/2 + Z/8 - (X/256)(Z/128) - 20160
//   Z' = Z - Z/32 - (X+Y)/2 - (X+Y)/8 + (X/256)(Y/128) + 13440
// for the default parameters (k = 1/64, delta = 8, gamma = 24, b = 2,
// B = 40, S = 512). Every "/2^j" is a logical right shift of a
// non-negative register value (or of X+Y), the row is summed exactly in
// 64-bit signed arithmetic and the result is reduced modulo 2^17.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorenz_cipher/rational.hpp"

namespace lorenz_cipher {

inline constexpr int kRegisterBits = 17;
inline constexpr std::uint32_t kRegisterModulus = 1u << kRegisterBits;
inline constexpr std::uint32_t kRegisterMask = kRegisterModulus - 1;
inline constexpr int kPerturbationBits = 14;

// Parameters of the continuous system and its Euler step size.
struct ContinuousParams {
    Rational k{1, 64};
    Rational delta{8};
    Rational gamma{24};
    Rational b{2};

    void validate() const {
        if (delta.sign() <= 0) throw std::invalid_argument("delta must be > 0");
        if (b.sign() <= 0) throw std::invalid_argument("b must be > 0");
        if (k.sign() < 0) throw std::invalid_argument("k must be >= 0");
    }

    friend bool operator==(const ContinuousParams&, const ContinuousParams&) = default;
};

// Affine change of variables from physical coordinates to registers:
// register = (physical + bias) * scale.
struct TransformParams {
    Rational bias{40};
    Rational scale{512};

    void validate() const {
        if (scale.sign() <= 0) throw std::invalid_argument("scale must be > 0");
    }

    friend bool operator==(const TransformParams&, const TransformParams&) = default;
};

// One signed power-of-two term: contributes sign * floor(v / 2^shift).
// A negative shift is a left shift (exact multiplication).
struct ShiftTerm {
    int sign = 1;
    int shift = 0;

    [[nodiscard]] Rational value() const {
        return shift >= 0 ? Rational(sign, std::int64_t{1} << shift) : Rational(sign * (std::int64_t{1} << -shift));
    }

    friend bool operator==(const ShiftTerm&, const ShiftTerm&) = default;
};

using ShiftDecomposition = std::vector<ShiftTerm>;

// Minimal signed-digit (non-adjacent form) decomposition of a dyadic
// rational. Returns nullopt when the denominator is not a power of two.
inline std::optional<ShiftDecomposition> decompose_dyadic(const Rational& c) {
    if (!c.is_dyadic()) return std::nullopt;
    ShiftDecomposition terms;
    int exponent = 0;
    for (std::int64_t d = c.den(); d > 1; d >>= 1) ++exponent;
    const int sign = c.sign();
    // |num| fits comfortably; INT64_MIN is excluded by Rational.
    std::int64_t m = c.num() < 0 ? -c.num() : c.num();
    int position = 0;
    while (m != 0) {
        if (m & 1) {
            const std::int64_t digit = 2 - (m & 3);  // +1 or -1
            m -= digit;
            terms.push_back({sign * static_cast<int>(digit), exponent - position});
        }
        m >>= 1;
        ++position;
    }
    // Largest magnitude first, the way the register equations are written.
    std::reverse(terms.begin(), terms.end());
    return terms;
}

inline Rational sum_terms(const ShiftDecomposition& terms) {
    Rational total;
    for (const auto& t : terms) total += t.value();
    return total;
}

enum class Operand { x, y, z, x_plus_y };

struct LinearTerm {
    Operand operand;
    ShiftTerm term;
};

// sign * (lhs >> lhs_shift) * (rhs >> rhs_shift)
struct ProductTerm {
    int sign = 1;
    Operand lhs = Operand::x;
    int lhs_shift = 0;
    Operand rhs = Operand::y;
    int rhs_shift = 0;
};

struct RowPlan {
    std::vector<LinearTerm> linear;
    std::optional<ProductTerm> product;
    std::int64_t constant = 0;
};

// The shift/add datapath realizing one map step.
struct ShiftPlan {
    std::array<RowPlan, 3> rows;
};

// Exact coefficients of the transformed map. Signs follow the algebraic
// form: coef_xz and coef_xy_sum_on_z are subtracted in their rows.
struct MapCoefficients {
    Rational coef_x_on_x;       // 1 - k*delta
    Rational coef_y_on_x;       // k*delta
    Rational coef_y_on_y;       // 1 - k
    Rational coef_x_on_y;       // k*B + k*gamma
    Rational coef_z_on_y;       // k*B
    Rational coef_xz;           // k/S, subtracted
    Rational const_y;           // k*B*S - k*gamma*B*S - k*B^2*S
    Rational coef_z_on_z;       // 1 - k*b
    Rational coef_xy_sum_on_z;  // k*B, subtracted
    Rational coef_xy;           // k/S
    Rational const_z;           // k*B^2*S + k*b*B*S

    std::optional<ShiftPlan> shift_plan;
    // Names of coefficients that prevented building shift_plan.
    std::vector<std::string> non_decomposable;

    [[nodiscard]] bool shift_decomposable() const { return shift_plan.has_value(); }
};

namespace detail {

// Power-of-two exponent s with c == 2^-s, s >= 0.
inline std::optional<int> inverse_power_of_two(const Rational& c) {
    if (c.num() != 1 || !c.is_dyadic()) return std::nullopt;
    int s = 0;
    for (std::int64_t d = c.den(); d > 1; d >>= 1) ++s;
    return s;
}

inline bool append_linear(RowPlan& row, Operand op, const Rational& coef, int sign, const char* name,
                          std::vector<std::string>& failures) {
    auto terms = decompose_dyadic(coef);
    if (!terms) {
        failures.emplace_back(name);
        return false;
    }
    for (auto t : *terms) {
        t.sign *= sign;
        row.linear.push_back({op, t});
    }
    return true;
}

inline bool set_product(RowPlan& row, Operand lhs, Operand rhs, const Rational& coef, int sign, const char* name,
                        std::vector<std::string>& failures) {
    if (coef.is_zero()) return true;
    auto s = inverse_power_of_two(coef);
    if (!s) {
        failures.emplace_back(name);
        return false;
    }
    // Split the shift so both truncated factors stay short: 2^-15 -> /256 * /128.
    row.product = ProductTerm{sign, lhs, (*s + 1) / 2, rhs, *s / 2};
    return true;
}

inline bool set_constant(RowPlan& row, const Rational& c, const char* name, std::vector<std::string>& failures) {
    if (!c.is_integer()) {
        failures.emplace_back(name);
        return false;
    }
    row.constant = c.num();
    return true;
}

}  // namespace detail

// Applies the bias/scale transform to the Euler map symbolically and
// returns the exact coefficients. The shift plan is attached only when
// every coefficient admits one; otherwise non_decomposable lists the
// offending coefficients and the float path remains the only option.
inline MapCoefficients derive_coefficients(const ContinuousParams& p, const TransformParams& t) {
    p.validate();
    t.validate();
    const Rational& k = p.k;
    const Rational& B = t.bias;
    const Rational& S = t.scale;

    MapCoefficients c;
    c.coef_x_on_x = Rational(1) - k * p.delta;
    c.coef_y_on_x = k * p.delta;
    c.coef_y_on_y = Rational(1) - k;
    c.coef_x_on_y = k * B + k * p.gamma;
    c.coef_z_on_y = k * B;
    c.coef_xz = k / S;
    c.const_y = k * B * S - k * p.gamma * B * S - k * B * B * S;
    c.coef_z_on_z = Rational(1) - k * p.b;
    c.coef_xy_sum_on_z = k * B;
    c.coef_xy = k / S;
    c.const_z = k * B * B * S + k * p.b * B * S;

    ShiftPlan plan;
    auto& fail = c.non_decomposable;
    using detail::append_linear;
    auto& rx = plan.rows[0];
    append_linear(rx, Operand::x, c.coef_x_on_x, +1, "coef_x_on_x", fail);
    append_linear(rx, Operand::y, c.coef_y_on_x, +1, "coef_y_on_x", fail);

    auto& ry = plan.rows[1];
    append_linear(ry, Operand::y, c.coef_y_on_y, +1, "coef_y_on_y", fail);
    append_linear(ry, Operand::x, c.coef_x_on_y, +1, "coef_x_on_y", fail);
    append_linear(ry, Operand::z, c.coef_z_on_y, +1, "coef_z_on_y", fail);
    detail::set_product(ry, Operand::x, Operand::z, c.coef_xz, -1, "coef_xz", fail);
    detail::set_constant(ry, c.const_y, "const_y", fail);

    auto& rz = plan.rows[2];
    append_linear(rz, Operand::z, c.coef_z_on_z, +1, "coef_z_on_z", fail);
    append_linear(rz, Operand::x_plus_y, c.coef_xy_sum_on_z, -1, "coef_xy_sum_on_z", fail);
    detail::set_product(rz, Operand::x, Operand::y, c.coef_xy, +1, "coef_xy", fail);
    detail::set_constant(rz, c.const_z, "const_z", fail);

    if (fail.empty()) c.shift_plan = std::move(plan);
    return c;
}

// Shifts the additive Z-row constant by delta register units (models a
// receiver whose constant p differs from the transmitter's).
inline MapCoefficients offset_const_z(MapCoefficients c, std::int64_t delta) {
    c.const_z += Rational(delta);
    if (c.shift_plan) c.shift_plan->rows[2].constant += delta;
    return c;
}

struct ChaoticState {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t z = 0;
    std::uint64_t n = 0;

    [[nodiscard]] bool valid() const { return x < kRegisterModulus && y < kRegisterModulus && z < kRegisterModulus; }

    friend bool operator==(const ChaoticState&, const ChaoticState&) = default;
};

inline ChaoticState make_state(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    ChaoticState s{x, y, z, 0};
    if (!s.valid()) throw std::out_of_range("initial condition outside the 17-bit register range");
    return s;
}

struct PerturbationConfig {
    std::uint32_t interval = 10000;

    void validate() const {
        if (interval < 1 || interval >= (1u << kPerturbationBits))
            throw std::out_of_range("perturbation interval must be in [1, 2^14)");
    }
};

// Unreduced row sums of one map step.
struct RawStep {
    std::int64_t x;
    std::int64_t y;
    std::int64_t z;

    [[nodiscard]] bool in_range() const {
        auto ok = [](std::int64_t v) { return v >= 0 && v < kRegisterModulus; };
        return ok(x) && ok(y) && ok(z);
    }
};

namespace detail {

inline std::int64_t operand_value(Operand op, std::int64_t x, std::int64_t y, std::int64_t z) {
    switch (op) {
        case Operand::x: return x;
        case Operand::y: return y;
        case Operand::z: return z;
        case Operand::x_plus_y: return x + y;
    }
    return 0;
}

inline std::int64_t shifted(std::int64_t v, int shift) { return shift >= 0 ? v >> shift : v << -shift; }

inline std::int64_t evaluate_row(const RowPlan& row, std::int64_t x, std::int64_t y, std::int64_t z) {
    std::int64_t acc = row.constant;
    for (const auto& lt : row.linear) acc += lt.term.sign * shifted(operand_value(lt.operand, x, y, z), lt.term.shift);
    if (row.product) {
        const auto& p = *row.product;
        acc += p.sign * shifted(operand_value(p.lhs, x, y, z), p.lhs_shift) *
               shifted(operand_value(p.rhs, x, y, z), p.rhs_shift);
    }
    return acc;
}

inline std::uint32_t reduce(std::int64_t v) {
    return static_cast<std::uint32_t>(v & static_cast<std::int64_t>(kRegisterMask));
}

}  // namespace detail

inline RawStep map_step_raw(const ChaoticState& s, const MapCoefficients& c) {
    if (!c.shift_plan) throw std::invalid_argument("map coefficients are not shift-decomposable");
    const auto& rows = c.shift_plan->rows;
    const std::int64_t x = s.x, y = s.y, z = s.z;
    return {detail::evaluate_row(rows[0], x, y, z), detail::evaluate_row(rows[1], x, y, z),
            detail::evaluate_row(rows[2], x, y, z)};
}

// One step of the register map; the signed row sums wrap modulo 2^17.
inline ChaoticState map_step(const ChaoticState& s, const MapCoefficients& c) {
    const RawStep r = map_step_raw(s, c);
    return {detail::reduce(r.x), detail::reduce(r.y), detail::reduce(r.z), s.n + 1};
}

// X[7..0] <- X[7..0] xor Y[7..0]; everything else untouched.
inline ChaoticState perturb(ChaoticState s) {
    s.x ^= s.y & 0xFFu;
    return s;
}

// map_step followed by the perturbation when the new counter is a
// positive multiple of the interval.
inline ChaoticState advance(const ChaoticState& s, const MapCoefficients& c,
                            const std::optional<PerturbationConfig>& pc) {
    ChaoticState next = map_step(s, c);
    if (pc && next.n % pc->interval == 0) next = perturb(next);
    return next;
}

inline ChaoticState iterate(ChaoticState s, const MapCoefficients& c, const std::optional<PerturbationConfig>& pc,
                            std::uint64_t steps) {
    if (pc) pc->validate();
    for (std::uint64_t i = 0; i < steps; ++i) s = advance(s, c, pc);
    return s;
}

// Floating-point reference --------------------------------------------------

struct FloatState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Explicit Euler step of the continuous Lorenz flow.
inline FloatState float_map_step(const FloatState& s, const ContinuousParams& p) {
    const double k = p.k.to_double();
    const double delta = p.delta.to_double();
    const double gamma = p.gamma.to_double();
    const double b = p.b.to_double();
    FloatState next{s.x + k * (-delta * (s.x - s.y)), s.y + k * (-s.x * s.z + gamma * s.x - s.y),
                    s.z + k * (s.x * s.y - b * s.z)};
    if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.z))
        throw std::domain_error("float trajectory diverged");
    return next;
}

inline double to_physical(std::uint32_t v, const TransformParams& t) {
    return static_cast<double>(v) / t.scale.to_double() - t.bias.to_double();
}

inline std::uint32_t to_register(double r, const TransformParams& t) {
    const double v = std::round((r + t.bias.to_double()) * t.scale.to_double());
    if (!(v >= 0.0 && v < static_cast<double>(kRegisterModulus)))
        throw std::out_of_range("value maps outside the 17-bit register range");
    return static_cast<std::uint32_t>(v);
}

}  // namespace lorenz_cipher
