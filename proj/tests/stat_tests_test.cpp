#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "lorenz_cipher/cipher.hpp"
#include "lorenz_cipher/reference_generators.hpp"
#include "lorenz_cipher/stat_tests.hpp"
#include "oracles.hpp"

using namespace lorenz_cipher;

namespace {

BitSequence alternating(std::size_t n) {
    BitSequence s;
    for (std::size_t i = 0; i < n; ++i) s.bits.push_back(static_cast<std::uint8_t>(i & 1));
    return s;
}

BitSequence random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitSequence s;
    s.bits.resize(n);
    for (auto& b : s.bits) b = static_cast<std::uint8_t>(rng() & 1);
    return s;
}

template <typename Gen>
ByteSource source_of(Gen& g) {
    return [&g]() -> std::optional<std::uint8_t> { return g.next_byte(); };
}

}  // namespace

TEST(Thresholds, TableValues) {
    EXPECT_EQ(chi_square_critical(1), 3.842);
    EXPECT_EQ(chi_square_critical(2), 5.992);
    EXPECT_EQ(chi_square_critical(26), 38.885);
    EXPECT_EQ(chi_square_critical(255), 293.248);
    EXPECT_EQ(kNormalOneSided, 1.645);
}

TEST(Thresholds, AgreeWithDistributionQuantiles) {
    for (int dof : {1, 2, 26, 255}) {
        boost::math::chi_squared d(dof);
        EXPECT_NEAR(chi_square_critical(dof), boost::math::quantile(boost::math::complement(d, 0.05)), 1e-3) << dof;
    }
    EXPECT_NEAR(kNormalOneSided, boost::math::quantile(boost::math::normal(), 0.95), 1e-3);
    // Non-tabulated degrees of freedom fall through to the quantile.
    EXPECT_NEAR(chi_square_critical(15), 24.996, 1e-3);
}

TEST(Frequency, BalancedAndSaturated) {
    const auto bal = frequency_test(alternating(1000));
    EXPECT_EQ(bal.statistic, 0.0);
    EXPECT_TRUE(bal.pass);
    EXPECT_EQ(bal.degrees_of_freedom, 1);

    BitSequence ones;
    ones.bits.assign(400000, 1);
    const auto sat = frequency_test(ones);
    EXPECT_EQ(sat.statistic, 400000.0);
    EXPECT_FALSE(sat.pass);

    BitSequence tiny;
    tiny.bits.assign(99, 0);
    EXPECT_THROW(frequency_test(tiny), std::invalid_argument);
}

TEST(Serial, AlternatingMatchesDirectCount) {
    const auto s = alternating(1000);
    const auto r = serial_test(s);
    EXPECT_NEAR(r.statistic, oracle::serial_statistic(s.bits), 1e-9);
    // n00 = n11 = 0 leaves X2 ~ n - 1.
    EXPECT_NEAR(r.statistic, 999.0, 0.01);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.degrees_of_freedom, 2);
}

TEST(Serial, MatchesDirectCountOnRandomInput) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = random_bits(20000, seed);
        EXPECT_NEAR(serial_test(s).statistic, oracle::serial_statistic(s.bits), 1e-9);
    }
}

TEST(Serial, UniformInputAcceptedAtAlphaRate) {
    constexpr int trials = 400;
    int passes = 0;
    for (int t = 0; t < trials; ++t) passes += serial_test(random_bits(20000, 1000 + t)).pass;
    // Expected 95%; binomial standard deviation at 400 trials is about 1.1%.
    EXPECT_GE(passes, static_cast<int>(trials * (0.95 - 3 * 0.011)));
}

TEST(Poker, ConcentratedAndUniform) {
    BitSequence same;
    for (int blk = 0; blk < 50000; ++blk)
        for (int j = 0; j < 8; ++j) same.bits.push_back(static_cast<std::uint8_t>((0xA5 >> (7 - j)) & 1));
    const auto r = poker_test(same, 8);
    EXPECT_DOUBLE_EQ(r.statistic, 255.0 * 50000);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.degrees_of_freedom, 255);
    EXPECT_EQ(r.threshold, 293.248);

    std::vector<std::uint8_t> bytes(256 * 200);
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(i);
    const auto u = poker_test(BitSequence::from_bytes(bytes), 8);
    EXPECT_NEAR(u.statistic, 0.0, 1e-6);
    EXPECT_TRUE(u.pass);
}

TEST(Poker, TooFewBlocks) {
    EXPECT_THROW(poker_test(random_bits(8 * 1279, 1), 8), std::invalid_argument);
    EXPECT_NO_THROW(poker_test(random_bits(8 * 1280, 1), 8));
}

TEST(Poker, SingleBitBlocksReduceToFrequency) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = random_bits(5000 + 37 * seed, seed);
        // Bias some sequences so the statistic is not always tiny.
        for (std::size_t i = 0; i < seed * 40; ++i) s.bits[i] = 1;
        EXPECT_NEAR(poker_test(s, 1).statistic, frequency_test(s).statistic, 1e-6);
    }
}

TEST(Runs, MaxLengthAndDegreesOfFreedom) {
    EXPECT_EQ(runs_max_length(400000), 14);
    EXPECT_NEAR(expected_runs(400000, 1), (400000.0 - 1 + 3) / 8.0, 1e-9);
    EXPECT_EQ(runs_test(random_bits(400000, 5)).degrees_of_freedom, 26);
    EXPECT_EQ(runs_test(random_bits(400000, 5)).threshold, 38.885);
}

TEST(Runs, AlternatingFails) {
    const auto r = runs_test(alternating(400000));
    EXPECT_GT(r.statistic, 1000 * 38.885);
    EXPECT_FALSE(r.pass);
}

TEST(Runs, HandCountedStatistic) {
    // 0011101 repeated: runs 00, 111, 0, 1 -> per period one gap of 2, one
    // block of 3, one gap of 1, one block of 1.
    BitSequence s;
    const std::uint8_t period[] = {0, 0, 1, 1, 1, 0, 1};
    for (int rep = 0; rep < 200; ++rep) s.bits.insert(s.bits.end(), std::begin(period), std::end(period));
    const std::size_t n = s.size();
    const int K = runs_max_length(n);
    ASSERT_GE(K, 3);
    // Boundary runs merge: the trailing 1 and leading 00 are distinct, so
    // counts are exact multiples of 200.
    const double B[] = {0, 200, 0, 200}, G[] = {0, 200, 200, 0};
    double expect = 0;
    for (int i = 1; i <= K; ++i) {
        const double e = expected_runs(n, i);
        const double b = i <= 3 ? B[i] : 0, g = i <= 3 ? G[i] : 0;
        expect += (b - e) * (b - e) / e + (g - e) * (g - e) / e;
    }
    EXPECT_NEAR(runs_test(s).statistic, expect, 1e-9);
}

TEST(Autocorrelation, CorrelatedAndAntiCorrelated) {
    const std::size_t n = 400000, d = 8;
    BitSequence same, flip;
    auto base = random_bits(d, 9);
    for (std::size_t i = 0; i < n; ++i) {
        same.bits.push_back(base.bits[i % d]);
        flip.bits.push_back(static_cast<std::uint8_t>(base.bits[i % d] ^ ((i / d) & 1)));
    }
    const auto rs = autocorrelation_test(same, d);
    EXPECT_NEAR(rs.statistic, -std::sqrt(double(n - d)), 1e-9);
    EXPECT_TRUE(rs.pass);  // accepted under the signed one-sided rule
    EXPECT_FALSE(rs.degrees_of_freedom);

    const auto rf = autocorrelation_test(flip, d);
    EXPECT_NEAR(rf.statistic, std::sqrt(double(n - d)), 1e-9);
    EXPECT_FALSE(rf.pass);
}

TEST(Autocorrelation, LagRange) {
    const auto s = random_bits(1000, 1);
    EXPECT_THROW(autocorrelation_test(s, 0), std::invalid_argument);
    EXPECT_THROW(autocorrelation_test(s, 501), std::invalid_argument);
    EXPECT_NO_THROW(autocorrelation_test(s, 500));
}

TEST(ReferenceGenerators, LehmerFirstStep) {
    LehmerMinStd g(1);
    EXPECT_EQ(g.next_byte(), 167);
    EXPECT_EQ(g.state(), 16807u);
    // Park-Miller check value: seed 1 reaches 1043618065 after 10000 steps.
    LehmerMinStd h(1);
    for (int i = 0; i < 10000; ++i) h.next();
    EXPECT_EQ(h.state(), 1043618065u);
}

TEST(ReferenceGenerators, InvalidSeeds) {
    EXPECT_THROW(Lfsr32(0), std::invalid_argument);
    EXPECT_THROW(LehmerMinStd(0), std::invalid_argument);
    EXPECT_THROW(LehmerMinStd(2147483647u), std::invalid_argument);
    EXPECT_THROW(MarsagliaXorshift32(0), std::invalid_argument);
}

TEST(ReferenceGenerators, Deterministic) {
    Lfsr32 a(0xACE1u), b(0xACE1u);
    MarsagliaXorshift32 c(7), d(7);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(a.next_byte(), b.next_byte());
        ASSERT_EQ(c.next_byte(), d.next_byte());
    }
}

TEST(ReferenceGenerators, LfsrFeedbackFromTaps) {
    Lfsr32 g(1);
    // Only tap 1 is set: feedback 1, output the old top bit 0.
    EXPECT_EQ(g.next_bit(), 0);
    EXPECT_EQ(g.state(), 0b11u);
    EXPECT_EQ(g.next_bit(), 0);
    EXPECT_EQ(g.state(), 0b110u);  // taps 1 and 2 both set -> parity 0
}

TEST(Battery, ZerosFailFrequencyEverywhere) {
    ByteSource zeros = []() -> std::optional<std::uint8_t> { return 0; };
    const auto r = run_battery("zeros", zeros);
    ASSERT_EQ(r.samples.size(), 5u);
    for (const auto& row : r.samples) {
        EXPECT_EQ(row[0].name, "frequency");
        EXPECT_FALSE(row[0].pass);
    }
    EXPECT_FALSE(r.all_passed());
}

TEST(Battery, ExhaustionIsAnError) {
    int left = 1000;
    ByteSource finite = [&]() -> std::optional<std::uint8_t> {
        if (left == 0) return std::nullopt;
        --left;
        return 0x55;
    };
    EXPECT_THROW(run_battery("finite", finite), std::runtime_error);
}

TEST(Battery, RecordsBitOrderAndUsesConsecutiveSegments) {
    MarsagliaXorshift32 g(12345);
    BatteryOptions opt;
    opt.samples = 2;
    opt.bits_per_sample = 16000;
    opt.order = BitOrder::msb_first;
    const auto r = run_battery("mars", source_of(g), opt);
    EXPECT_EQ(r.order, BitOrder::msb_first);

    MarsagliaXorshift32 h(12345);
    std::vector<std::uint8_t> second(2000);
    for (int i = 0; i < 2000; ++i) h.next_byte();
    for (auto& b : second) b = h.next_byte();
    EXPECT_EQ(r.samples[1][0].statistic, frequency_test(BitSequence::from_bytes(second, BitOrder::msb_first)).statistic);
}

TEST(Battery, LfsrShowsRunsOrAutocorrelationFailure) {
    Lfsr32 g(1);
    const auto r = run_battery("lfsr", source_of(g));
    bool any = false;
    for (const auto& row : r.samples) any = any || !row[3].pass || !row[4].pass;
    EXPECT_TRUE(any) << "no runs/autocorrelation failure in the 32-bit maximal-length LFSR";
}

TEST(Battery, LorenzFailureRatePerTestOver100Segments) {
    KeystreamGenerator g(KeystreamConfig{});
    BatteryOptions opt;
    opt.samples = 100;
    const auto r = run_battery("lorenz", [&]() -> std::optional<std::uint8_t> { return g.next_key_byte(); }, opt);
    for (std::size_t t = 0; t < 5; ++t) {
        int fails = 0;
        for (const auto& row : r.samples) fails += !row[t].pass;
        EXPECT_LE(fails, 10) << r.samples[0][t].name;
    }
}

TEST(Battery, CsvLayout) {
    MarsagliaXorshift32 a(1);
    LehmerMinStd b(1);
    BatteryOptions opt;
    opt.samples = 2;
    std::vector<BatteryReport> reports{run_battery("marsaglia", source_of(a), opt),
                                       run_battery("lehmer", source_of(b), opt)};
    std::ostringstream os;
    write_battery_csv(os, reports);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "test,sample,threshold,marsaglia,marsaglia_pass,lehmer,lehmer_pass");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 10);
}
