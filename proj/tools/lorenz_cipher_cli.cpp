// Command-line front end for the Lorenz-map stream cipher library.

#include <CLI11.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "lorenz_cipher/lorenz_cipher.hpp"

namespace fs = std::filesystem;
using namespace lorenz_cipher;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::string seed_x, seed_y, seed_z;
    std::string n_perturb;
    std::string bit_order;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::runtime_error("read failed on '" + path + "'");
    return data;
}

ConfigFile load_config(const std::string& path) {
    if (path.empty()) return {};
    try {
        return parse_config(read_text(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// The global config plus any command-line overrides.
ConfigFile resolve_config(const GlobalOptions& g) {
    ConfigFile cfg = load_config(g.config_path);
    auto& ks = cfg.keystream;
    if (!g.seed_x.empty()) ks.x0 = parse_unsigned32(g.seed_x);
    if (!g.seed_y.empty()) ks.y0 = parse_unsigned32(g.seed_y);
    if (!g.seed_z.empty()) ks.z0 = parse_unsigned32(g.seed_z);
    if (!g.n_perturb.empty()) ks.n_perturb = parse_unsigned32(g.n_perturb);
    if (!g.bit_order.empty()) cfg.bit_order = parse_bit_order(g.bit_order);
    ks.validate();
    return cfg;
}

std::uint64_t parse_count(const std::string& text, const char* what, std::uint64_t min = 1) {
    const std::int64_t v = parse_integer(text);
    if (v < static_cast<std::int64_t>(min))
        throw UsageError(std::string(what) + " must be at least " + std::to_string(min));
    return static_cast<std::uint64_t>(v);
}

bool parse_on_off(const std::string& text) {
    if (text == "on") return true;
    if (text == "off") return false;
    throw UsageError("expected on or off, got '" + text + "'");
}

// Writes to `path` through a sibling temporary so a failed command never
// leaves a partial file behind; an empty path means standard output.
void emit(const std::string& path, const std::function<void(std::ostream&)>& writer, bool binary = false) {
    if (path.empty()) {
        writer(std::cout);
        std::cout.flush();
        if (!std::cout) throw std::runtime_error("write to standard output failed");
        return;
    }
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    try {
        {
            std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write '" + path + "'");
            writer(out);
            out.flush();
            if (!out) throw std::runtime_error("write failed on '" + path + "'");
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

void write_hex(std::ostream& os, std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        os << digits[bytes[i] >> 4] << digits[bytes[i] & 0xF];
        if ((i + 1) % 32 == 0 || i + 1 == bytes.size()) os << '\n';
    }
}

void write_binary(std::ostream& os, std::span<const std::uint8_t> bytes) {
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// Parses "a..b" (inclusive integer range) or a comma-separated list of numbers.
std::vector<double> parse_offsets(const std::string& spec) {
    std::vector<double> out;
    if (const auto dots = spec.find(".."); dots != std::string::npos) {
        const std::int64_t lo = parse_integer(spec.substr(0, dots));
        const std::int64_t hi = parse_integer(spec.substr(dots + 2));
        if (lo > hi) throw UsageError("empty offset range '" + spec + "'");
        if (hi - lo > 100000) throw UsageError("offset range too large '" + spec + "'");
        for (std::int64_t v = lo; v <= hi; ++v) out.push_back(double(v));
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto t = std::string(detail::trim(item));
        if (t.empty()) continue;
        std::size_t used = 0;
        double v{};
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size()) throw UsageError("bad offset '" + t + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("no offsets given");
    return out;
}

constexpr const char* kGeneratorSpecs = "lorenz[:CONFIG], lfsr:SEED, lehmer:SEED, marsaglia:SEED, zeros";

struct GeneratorSource {
    std::string name;
    ByteSource source;
};

GeneratorSource make_generator(const std::string& spec, const ConfigFile& base) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
    const auto need_arg = [&] {
        if (arg.empty()) throw UsageError("generator '" + kind + "' needs a seed; valid: " + kGeneratorSpecs);
    };
    if (kind == "lorenz") {
        const ConfigFile cfg = arg.empty() ? base : load_config(arg);
        auto g = std::make_shared<KeystreamGenerator>(cfg.keystream);
        return {"lorenz", [g]() -> std::optional<std::uint8_t> { return g->next_key_byte(); }};
    }
    if (kind == "lfsr") {
        need_arg();
        auto g = std::make_shared<Lfsr32>(parse_unsigned32(arg));
        return {"lfsr", [g]() -> std::optional<std::uint8_t> { return g->next_byte(); }};
    }
    if (kind == "lehmer") {
        need_arg();
        auto g = std::make_shared<LehmerMinStd>(parse_unsigned32(arg));
        return {"lehmer", [g]() -> std::optional<std::uint8_t> { return g->next_byte(); }};
    }
    if (kind == "marsaglia") {
        need_arg();
        auto g = std::make_shared<MarsagliaXorshift32>(parse_unsigned32(arg));
        return {"marsaglia", [g]() -> std::optional<std::uint8_t> { return g->next_byte(); }};
    }
    if (kind == "zeros" && arg.empty())
        return {"zeros", []() -> std::optional<std::uint8_t> { return std::uint8_t{0}; }};
    throw UsageError("unknown generator '" + spec + "'; valid: " + kGeneratorSpecs);
}

std::size_t largest_power_of_two_at_most(std::size_t n) {
    std::size_t p = 1;
    while (p <= n / 2) p *= 2;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lorenz-map chaotic stream cipher: keystreams, encryption, link simulation and analysis"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "Shared-secret config file (key = value lines)");
    app.add_option("--out", g.out_path, "Output file (default: standard output)");
    app.add_option("--seed-x", g.seed_x, "Override x0 (decimal or 0x-hex)");
    app.add_option("--seed-y", g.seed_y, "Override y0 (decimal or 0x-hex)");
    app.add_option("--seed-z", g.seed_z, "Override z0 (decimal or 0x-hex)");
    app.add_option("--n-perturb", g.n_perturb, "Override the perturbation interval N");
    app.add_option("--bit-order", g.bit_order, "Serializer bit order: lsb or msb");

    // keystream
    auto* ks_cmd = app.add_subcommand("keystream", "Write key bytes");
    std::string ks_count, ks_format = "hex";
    ks_cmd->add_option("--count", ks_count, "Number of key bytes")->required();
    ks_cmd->add_option("--format", ks_format, "hex or binary")->check(CLI::IsMember({"hex", "binary"}));

    // encrypt / decrypt
    std::string enc_in, enc_out, dec_in, dec_out;
    auto* enc_cmd = app.add_subcommand("encrypt", "XOR a file with the keystream");
    enc_cmd->add_option("input", enc_in, "Input file")->required();
    enc_cmd->add_option("output", enc_out, "Output file (or use --out)");
    auto* dec_cmd = app.add_subcommand("decrypt", "XOR a file with the keystream (inverse of encrypt)");
    dec_cmd->add_option("input", dec_in, "Input file")->required();
    dec_cmd->add_option("output", dec_out, "Output file (or use --out)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run a transmitter/receiver link and report the bit error rate");
    std::string sim_rx, sim_message, sim_length = "100000", sim_dump;
    sim_cmd->add_option("--rx-config", sim_rx, "Receiver config (default: same as transmitter)");
    sim_cmd->add_option("--message", sim_message, "Plaintext file (default: repeating 0..255 ramp)");
    sim_cmd->add_option("--length", sim_length, "Ramp length in bytes when no message file is given");
    sim_cmd->add_option("--dump", sim_dump, "Write PREFIX.plain, PREFIX.cipher and PREFIX.recovered");

    // tests
    auto* tests_cmd = app.add_subcommand("tests", "Run the five-test statistical battery");
    std::string t_gen = "lorenz", t_samples = "5", t_bits = "400000", t_lag = "8";
    tests_cmd->add_option("--generator", t_gen, std::string("Generator spec: ") + kGeneratorSpecs);
    tests_cmd->add_option("--samples", t_samples, "Number of consecutive segments");
    tests_cmd->add_option("--bits", t_bits, "Bits per segment");
    tests_cmd->add_option("--lag", t_lag, "Autocorrelation lag");

    // analyze
    auto* an_cmd = app.add_subcommand("analyze", "Autocovariance, spectrum, trajectory, delay pairs or period");
    std::string an_mode, an_samples, an_max_lag = "1000", an_fft, an_key = "low", an_perturb, an_steps = "10000",
                                     an_coords = "registers", an_dim = "2", an_cap = "100000000";
    an_cmd->add_option("mode", an_mode, "autocov | spectrum | trajectory | pairs | period")
        ->required()
        ->check(CLI::IsMember({"autocov", "spectrum", "trajectory", "pairs", "period"}));
    an_cmd->add_option("--samples", an_samples, "Ciphertext sample count");
    an_cmd->add_option("--max-lag", an_max_lag, "Largest autocovariance lag");
    an_cmd->add_option("--fft-size", an_fft, "Transform size (power of two; default: largest fitting)");
    an_cmd->add_option("--key", an_key, "Key width: low (8-bit) or full (17-bit)")
        ->check(CLI::IsMember({"low", "full"}));
    an_cmd->add_option("--perturbation", an_perturb, "on or off (default: from config)");
    an_cmd->add_option("--steps", an_steps, "Trajectory length in rows");
    an_cmd->add_option("--coords", an_coords, "Trajectory coordinates: registers or physical")
        ->check(CLI::IsMember({"registers", "physical"}));
    an_cmd->add_option("--dim", an_dim, "Delay-embedding dimension: 2 or 3");
    an_cmd->add_option("--cap", an_cap, "Step cap for period detection");

    // sweep
    auto* sw_cmd = app.add_subcommand("sweep", "Bit error rate versus receiver parameter mismatch");
    std::string sw_target, sw_offsets, sw_length = "50000";
    bool sw_percent = false;
    sw_cmd->add_option("--target", sw_target, "const_z, x0, y0, z0 or n_perturb")->required();
    sw_cmd->add_option("--offsets", sw_offsets, "Offsets: A..B or a comma-separated list")->required();
    sw_cmd->add_flag("--percent", sw_percent, "Offsets are percentages of the base value");
    sw_cmd->add_option("--length", sw_length, "Ramp message length in bytes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "lorenz-cipher: " << e.what() << '\n';
        return 2;
    }

    try {
        const ConfigFile cfg = resolve_config(g);

        if (*ks_cmd) {
            const auto count = parse_count(ks_count, "--count");
            const auto bytes = keystream(cfg.keystream, count);
            emit(g.out_path, [&](std::ostream& os) {
                if (ks_format == "hex") write_hex(os, bytes);
                else write_binary(os, bytes);
            }, ks_format == "binary");
        } else if (*enc_cmd || *dec_cmd) {
            const bool encrypting = bool(*enc_cmd);
            const std::string& in_path = encrypting ? enc_in : dec_in;
            const std::string& out_path = !(encrypting ? enc_out : dec_out).empty() ? (encrypting ? enc_out : dec_out)
                                                                                   : g.out_path;
            if (out_path.empty()) throw UsageError("no output file; give OUTPUT or --out");
            const auto data = read_bytes(in_path);
            KeystreamGenerator gen(cfg.keystream);
            const auto result = encrypting ? gen.encrypt(data) : gen.decrypt(data);
            emit(out_path, [&](std::ostream& os) { write_binary(os, result); }, true);
        } else if (*sim_cmd) {
            LinkConfig link;
            link.tx = cfg.keystream;
            link.rx = sim_rx.empty() ? cfg.keystream : load_config(sim_rx).keystream;
            link.bit_order = cfg.bit_order;
            const auto msg = sim_message.empty() ? ramp_message(parse_count(sim_length, "--length"))
                                                 : read_bytes(sim_message);
            const auto report = run_link(link, msg);
            std::cout << "BER=" << report.ber << " (" << report.bit_errors << " of " << report.total_bits
                      << " bits)\n";
            if (!g.out_path.empty()) emit(g.out_path, [&](std::ostream& os) { write_link_report_csv(os, report); });
            if (!sim_dump.empty()) {
                emit(sim_dump + ".plain", [&](std::ostream& os) { write_binary(os, report.plain); }, true);
                emit(sim_dump + ".cipher", [&](std::ostream& os) { write_binary(os, report.cipher); }, true);
                emit(sim_dump + ".recovered", [&](std::ostream& os) { write_binary(os, report.recovered); }, true);
            }
        } else if (*tests_cmd) {
            BatteryOptions opt;
            opt.samples = parse_count(t_samples, "--samples");
            opt.bits_per_sample = parse_count(t_bits, "--bits");
            opt.autocorrelation_lag = parse_count(t_lag, "--lag");
            opt.order = cfg.bit_order;
            auto gen = make_generator(t_gen, cfg);
            const std::vector<BatteryReport> reports{run_battery(gen.name, gen.source, opt)};
            emit(g.out_path, [&](std::ostream& os) { write_battery_csv(os, reports); });
            std::cerr << gen.name << ": " << reports[0].passed() << " of " << reports[0].cells()
                      << " cells passed\n";
        } else if (*an_cmd) {
            const bool perturbation = an_perturb.empty() ? cfg.keystream.perturbation : parse_on_off(an_perturb);
            const KeyMode mode{an_key == "full" ? KeyWidth::full_register : KeyWidth::low_byte, perturbation};
            if (an_mode == "autocov") {
                const auto n = parse_count(an_samples.empty() ? "1000000" : an_samples, "--samples");
                const auto r = autocovariance(ciphertext_samples(cfg.keystream, mode, n), parse_count(an_max_lag, "--max-lag"));
                emit(g.out_path, [&](std::ostream& os) { write_autocov_csv(os, r); });
            } else if (an_mode == "spectrum") {
                const auto n = parse_count(an_samples.empty() ? "1048576" : an_samples, "--samples");
                const std::size_t size = an_fft.empty() ? largest_power_of_two_at_most(n) : parse_count(an_fft, "--fft-size");
                const auto r = dft_magnitude(ciphertext_samples(cfg.keystream, mode, n), size);
                emit(g.out_path, [&](std::ostream& os) { write_spectrum_csv(os, r); });
            } else if (an_mode == "trajectory") {
                auto ks = cfg.keystream;
                ks.perturbation = perturbation;
                const auto pts = trajectory_export(ks, parse_count(an_steps, "--steps"),
                                                   an_coords == "physical" ? Coordinates::physical : Coordinates::registers);
                emit(g.out_path, [&](std::ostream& os) { write_trajectory_csv(os, pts); });
            } else if (an_mode == "pairs") {
                const auto n = parse_count(an_samples.empty() ? "100000" : an_samples, "--samples");
                const auto dim = static_cast<int>(parse_count(an_dim, "--dim", 2));
                const auto c = ciphertext_samples(cfg.keystream, {KeyWidth::low_byte, perturbation}, n);
                const std::vector<std::uint8_t> bytes(c.begin(), c.end());
                const auto e = pair_plot_export(bytes, dim);
                emit(g.out_path, [&](std::ostream& os) { write_pairs_csv(os, e); });
            } else {
                const auto r = cycle_length(cfg.keystream, perturbation, parse_count(an_cap, "--cap"));
                emit(g.out_path, [&](std::ostream& os) {
                    if (r.exceeded) os << "exceeded cap " << an_cap << '\n';
                    else os << "period=" << r.period << " tail=" << r.tail << '\n';
                });
            }
        } else if (*sw_cmd) {
            LinkConfig link;
            link.tx = link.rx = cfg.keystream;
            link.bit_order = cfg.bit_order;
            const auto r = mismatch_sweep(link, parse_sweep_target(sw_target), parse_offsets(sw_offsets),
                                          sw_percent ? OffsetUnit::percent : OffsetUnit::absolute,
                                          parse_count(sw_length, "--length"));
            for (const auto& p : r.points)
                if (p.error) std::cerr << "offset " << p.offset << " skipped: " << *p.error << '\n';
            emit(g.out_path, [&](std::ostream& os) { write_sweep_csv(os, r); });
        }
    } catch (const std::exception& e) {
        std::cerr << "lorenz-cipher: " << e.what() << '\n';
        return dynamic_cast<const UsageError*>(&e) ? 2 : 1;
    }
    return 0;
}
