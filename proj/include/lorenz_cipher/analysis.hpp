#pragma once

// Evaluation instruments: autocovariance, DFT magnitude, cycle length,
// trajectory and delay-embedding exports.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "lorenz_cipher/cipher.hpp"

namespace lorenz_cipher {

// Autocovariance --------------------------------------------------------------

struct AutocovResult {
    std::size_t sample_count = 0;
    std::vector<double> rho;  // rho[tau], tau = 0..max_lag

    [[nodiscard]] std::size_t max_lag() const { return rho.empty() ? 0 : rho.size() - 1; }

    // Largest |rho(tau)| for tau >= 1.
    [[nodiscard]] double max_off_peak() const {
        double m = 0;
        for (std::size_t t = 1; t < rho.size(); ++t) m = std::max(m, std::abs(rho[t]));
        return m;
    }
};

// Biased estimator C(tau) = (1/M) sum (s_i - mu)(s_{i+tau} - mu), normalized by C(0).
inline AutocovResult autocovariance(std::span<const double> samples, std::size_t max_lag) {
    const std::size_t m = samples.size();
    if (m == 0 || m < 10 * max_lag) throw std::invalid_argument("autocovariance: need at least 10 samples per lag");
    double mu = 0;
    for (double v : samples) mu += v;
    mu /= static_cast<double>(m);
    std::vector<double> centered(m);
    for (std::size_t i = 0; i < m; ++i) centered[i] = samples[i] - mu;

    std::vector<double> c(max_lag + 1, 0.0);
    for (std::size_t tau = 0; tau <= max_lag; ++tau) {
        double acc = 0;
        const double* a = centered.data();
        const double* b = centered.data() + tau;
        const std::size_t count = m - tau;
        for (std::size_t i = 0; i < count; ++i) acc += a[i] * b[i];
        c[tau] = acc / static_cast<double>(m);
    }
    if (!(c[0] > 0)) throw std::invalid_argument("autocovariance: constant input has zero variance");
    AutocovResult r{m, std::vector<double>(max_lag + 1)};
    for (std::size_t tau = 0; tau <= max_lag; ++tau) r.rho[tau] = c[tau] / c[0];
    r.rho[0] = 1.0;
    return r;
}

// Spectrum -------------------------------------------------------------------------

struct SpectrumResult {
    std::size_t sample_count = 0;
    std::vector<double> magnitude;  // one per bin, 0..size-1

    // max/mean over bins 1..size/2 (DC is zero after mean removal and the
    // upper half mirrors the lower one for real input).
    [[nodiscard]] double peak_to_mean() const {
        const std::size_t half = magnitude.size() / 2;
        double peak = 0, sum = 0;
        for (std::size_t k = 1; k <= half; ++k) {
            peak = std::max(peak, magnitude[k]);
            sum += magnitude[k];
        }
        return sum > 0 ? peak * static_cast<double>(half) / sum : 0.0;
    }

    // Share of spectral energy (bins 1..size/2) in the lowest `fraction` of those bins.
    [[nodiscard]] double low_band_energy_share(double fraction) const {
        const std::size_t half = magnitude.size() / 2;
        const auto low = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(half))));
        double total = 0, band = 0;
        for (std::size_t k = 1; k <= half; ++k) {
            const double e = magnitude[k] * magnitude[k];
            total += e;
            if (k <= low) band += e;
        }
        return total > 0 ? band / total : 0.0;
    }
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey.
inline void fft_in_place(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        for (std::size_t k = 0; k < half; ++k) {
            const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
            for (std::size_t i = k; i < n; i += len) {
                const std::complex<double> u = a[i];
                const std::complex<double> v = a[i + half] * w;
                a[i] = u + v;
                a[i + half] = u - v;
            }
        }
    }
}

inline SpectrumResult dft_magnitude(std::span<const double> samples, std::size_t size) {
    if (!is_power_of_two(size)) throw std::invalid_argument("dft: size must be a power of two");
    if (size > samples.size()) throw std::invalid_argument("dft: fewer samples than transform size");
    double mu = 0;
    for (std::size_t i = 0; i < size; ++i) mu += samples[i];
    mu /= static_cast<double>(size);
    std::vector<std::complex<double>> buf(size);
    for (std::size_t i = 0; i < size; ++i) buf[i] = samples[i] - mu;
    fft_in_place(buf);
    SpectrumResult r{size, std::vector<double>(size)};
    for (std::size_t k = 0; k < size; ++k) r.magnitude[k] = std::abs(buf[k]);
    return r;
}

// Ciphertext under the four key modes -----------------------------------------------

enum class KeyWidth { low_byte, full_register };

struct KeyMode {
    KeyWidth width = KeyWidth::low_byte;
    bool perturbation = true;
};

// C_n = P_n xor K_n with P the repeating 0..255 ramp; K is X[7..0] or the
// whole X[16..0] depending on the mode.
inline std::vector<double> ciphertext_samples(KeystreamConfig cfg, KeyMode mode, std::size_t count) {
    cfg.perturbation = mode.perturbation;
    KeystreamGenerator gen(cfg);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t plain = static_cast<std::uint32_t>(i & 0xFFu);
        const std::uint32_t key = mode.width == KeyWidth::low_byte ? gen.next_key_byte() : gen.full_key_word();
        out[i] = static_cast<double>(plain ^ key);
    }
    return out;
}

// Cycle length -----------------------------------------------------------------------

struct CycleResult {
    bool exceeded = false;
    std::uint64_t period = 0;
    std::uint64_t tail = 0;
};

namespace detail {

// State as seen by the dynamics: with perturbation the phase n mod N matters.
struct ExtendedState {
    std::uint32_t x, y, z, phase;
    friend bool operator==(const ExtendedState&, const ExtendedState&) = default;
};

inline ExtendedState extended(const ChaoticState& s, const std::optional<PerturbationConfig>& pc) {
    return {s.x, s.y, s.z, pc ? static_cast<std::uint32_t>(s.n % pc->interval) : 0u};
}

}  // namespace detail

// Brent's cycle detection on the extended state, followed by a search for
// the pre-period and a replay confirming state(tail) == state(tail+period).
// Returns exceeded once the detection phase would need more than `cap`
// steps.
inline CycleResult cycle_length(const KeystreamConfig& cfg, bool perturbation, std::uint64_t cap = 100'000'000) {
    KeystreamConfig c = cfg;
    c.perturbation = perturbation;
    c.validate();
    const MapCoefficients coef = coefficients_for(c);
    const auto pc = c.perturbation_config();
    const ChaoticState start = make_state(c.x0, c.y0, c.z0);
    auto step = [&](const ChaoticState& s) { return advance(s, coef, pc); };
    auto key = [&](const ChaoticState& s) { return detail::extended(s, pc); };

    std::uint64_t power = 1, lambda = 1, spent = 1;
    ChaoticState tortoise = start;
    ChaoticState hare = step(start);
    while (key(tortoise) != key(hare)) {
        if (power == lambda) {
            tortoise = hare;
            power *= 2;
            lambda = 0;
        }
        hare = step(hare);
        ++lambda;
        if (++spent > cap) return {true, 0, 0};
    }

    ChaoticState lead = start;
    for (std::uint64_t i = 0; i < lambda; ++i) lead = step(lead);
    ChaoticState trail = start;
    std::uint64_t mu = 0;
    while (key(trail) != key(lead)) {
        trail = step(trail);
        lead = step(lead);
        ++mu;
    }

    // Replay: state at mu must recur after exactly lambda steps and not earlier.
    ChaoticState probe = iterate(start, coef, pc, mu);
    const auto anchor = key(probe);
    for (std::uint64_t i = 1; i <= lambda; ++i) {
        probe = step(probe);
        if ((key(probe) == anchor) != (i == lambda))
            throw std::logic_error("cycle_length: replay did not confirm the detected period");
    }
    return {false, lambda, mu};
}

// Trajectory and delay-embedding exports ---------------------------------------------------

enum class Coordinates { registers, physical };

struct TrajectoryPoint {
    std::uint64_t n;
    double x, y, z;
};

inline std::vector<TrajectoryPoint> trajectory_export(const KeystreamConfig& cfg, std::size_t steps,
                                                      Coordinates coords = Coordinates::registers) {
    if (steps < 1) throw std::invalid_argument("trajectory: need at least one step");
    cfg.validate();
    const MapCoefficients coef = coefficients_for(cfg);
    const auto pc = cfg.perturbation_config();
    ChaoticState s = make_state(cfg.x0, cfg.y0, cfg.z0);
    std::vector<TrajectoryPoint> out;
    out.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        if (coords == Coordinates::physical)
            out.push_back({s.n, to_physical(s.x, cfg.transform), to_physical(s.y, cfg.transform),
                           to_physical(s.z, cfg.transform)});
        else
            out.push_back({s.n, double(s.x), double(s.y), double(s.z)});
        if (i + 1 < steps) s = advance(s, coef, pc);
    }
    return out;
}

inline std::vector<FloatState> float_trajectory(FloatState s, const ContinuousParams& p, std::size_t steps) {
    std::vector<FloatState> out;
    out.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(s);
        s = float_map_step(s, p);
    }
    return out;
}

struct BoundingBox {
    std::array<double, 3> lo{}, hi{};
};

template <typename Range, typename Proj>
BoundingBox bounding_box(const Range& points, Proj proj) {
    BoundingBox box;
    box.lo.fill(INFINITY);
    box.hi.fill(-INFINITY);
    for (const auto& p : points) {
        const auto [x, y, z] = proj(p);
        const double v[3] = {x, y, z};
        for (int a = 0; a < 3; ++a) {
            box.lo[a] = std::min(box.lo[a], v[a]);
            box.hi[a] = std::max(box.hi[a], v[a]);
        }
    }
    return box;
}

struct EmbeddingPoints {
    int dimension = 2;
    std::vector<std::array<std::uint8_t, 3>> rows;  // unused trailing entries are 0
};

inline EmbeddingPoints pair_plot_export(std::span<const std::uint8_t> samples, int dimension) {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("pair plot: dimension must be 2 or 3");
    if (samples.size() < static_cast<std::size_t>(dimension)) throw std::invalid_argument("pair plot: too few samples");
    EmbeddingPoints e{dimension, {}};
    const std::size_t count = samples.size() - static_cast<std::size_t>(dimension) + 1;
    e.rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        e.rows.push_back({samples[i], samples[i + 1], dimension == 3 ? samples[i + 2] : std::uint8_t{0}});
    return e;
}

// Fraction of the 256x256 (c_n, c_{n+1}) grid that is hit.
inline double grid_occupancy(const EmbeddingPoints& e) {
    std::vector<bool> hit(256 * 256, false);
    for (const auto& r : e.rows) hit[r[0] * 256 + r[1]] = true;
    return static_cast<double>(std::count(hit.begin(), hit.end(), true)) / (256.0 * 256.0);
}

// CSV writers --------------------------------------------------------------------------------

inline void write_autocov_csv(std::ostream& os, const AutocovResult& r) {
    os << "lag,rho\n";
    for (std::size_t t = 0; t < r.rho.size(); ++t) os << t << ',' << r.rho[t] << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const SpectrumResult& r) {
    os << "bin,magnitude\n";
    for (std::size_t k = 0; k < r.magnitude.size(); ++k) os << k << ',' << r.magnitude[k] << '\n';
}

inline void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryPoint> pts) {
    os << "n,x,y,z\n" << std::setprecision(12);
    for (const auto& p : pts) os << p.n << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
}

inline void write_pairs_csv(std::ostream& os, const EmbeddingPoints& e) {
    os << (e.dimension == 3 ? "n,c0,c1,c2\n" : "n,c0,c1\n");
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        const auto& r = e.rows[i];
        os << i << ',' << int(r[0]) << ',' << int(r[1]);
        if (e.dimension == 3) os << ',' << int(r[2]);
        os << '\n';
    }
}

}  // namespace lorenz_cipher
