#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lorenz_cipher/cipher.hpp"

using namespace lorenz_cipher;

TEST(Keystream, FirstBytesFromCanonicalSeed) {
    KeystreamGenerator g(KeystreamConfig{});
    EXPECT_EQ(g.next_key_byte(), 0x47);
    EXPECT_EQ(g.next_key_byte(), 0xA7);
    EXPECT_EQ(g.bytes_emitted(), 2u);
}

TEST(Keystream, FullKeyWordReadsBeforeAdvancing) {
    KeystreamGenerator full(KeystreamConfig{});
    KeystreamGenerator low(KeystreamConfig{});
    EXPECT_EQ(full.full_key_word(), 18503u);
    EXPECT_EQ(low.next_key_byte(), 18503u & 0xFFu);
    for (int i = 0; i < 50000; ++i) ASSERT_EQ(full.full_key_word() & 0xFFu, low.next_key_byte());
}

TEST(Keystream, IdenticalConfigsAgree) {
    KeystreamConfig cfg;
    cfg.x0 = 100;
    cfg.n_perturb = 33;
    EXPECT_EQ(keystream(cfg, 200000), keystream(cfg, 200000));
}

TEST(Keystream, RejectsInvalidConfig) {
    KeystreamConfig cfg;
    cfg.x0 = kRegisterModulus;
    EXPECT_THROW(KeystreamGenerator{cfg}, std::out_of_range);
    cfg = {};
    cfg.n_perturb = 0;
    EXPECT_THROW(KeystreamGenerator{cfg}, std::out_of_range);
    cfg = {};
    cfg.params.k = Rational(1, 3);
    EXPECT_THROW(KeystreamGenerator{cfg}, std::invalid_argument);
}

TEST(Encrypt, ZeroPlaintextExposesKey) {
    KeystreamGenerator g(KeystreamConfig{});
    const std::vector<std::uint8_t> zero{0x00};
    EXPECT_EQ(g.encrypt(zero), std::vector<std::uint8_t>{0x47});
}

TEST(Encrypt, EmptyInputLeavesGeneratorUntouched) {
    KeystreamGenerator g(KeystreamConfig{});
    EXPECT_TRUE(g.encrypt(std::vector<std::uint8_t>{}).empty());
    EXPECT_EQ(g.bytes_emitted(), 0u);
    EXPECT_EQ(g.next_key_byte(), 0x47);
}

TEST(Decrypt, InvertsKnownCiphertext) {
    KeystreamGenerator g(KeystreamConfig{});
    EXPECT_EQ(g.decrypt(std::vector<std::uint8_t>{0x47}), std::vector<std::uint8_t>{0x00});
}

TEST(Decrypt, RoundTripRandomMessages) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        KeystreamConfig cfg;
        cfg.x0 = static_cast<std::uint32_t>(rng() % kRegisterModulus);
        cfg.y0 = static_cast<std::uint32_t>(rng() % kRegisterModulus);
        cfg.z0 = static_cast<std::uint32_t>(rng() % kRegisterModulus);
        cfg.n_perturb = static_cast<std::uint32_t>(1 + rng() % 16383);
        std::vector<std::uint8_t> msg(rng() % (1u << 16));
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
        KeystreamGenerator tx(cfg), rx(cfg);
        ASSERT_EQ(rx.decrypt(tx.encrypt(msg)), msg) << "trial " << trial;
    }
}

TEST(Encrypt, KeystreamIndependentOfPlaintext) {
    std::mt19937 rng(5);
    std::vector<std::uint8_t> a(10000), b(10000);
    for (auto& v : a) v = static_cast<std::uint8_t>(rng());
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    KeystreamGenerator ga(KeystreamConfig{}), gb(KeystreamConfig{});
    const auto ca = ga.encrypt(a);
    const auto cb = gb.encrypt(b);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(ca[i] ^ cb[i], a[i] ^ b[i]);
}

TEST(Decrypt, OneLsbSeedMismatchScramblesHalfTheBits) {
    KeystreamConfig tx_cfg;
    KeystreamConfig rx_cfg;
    rx_cfg.x0 += 1;
    std::vector<std::uint8_t> msg(50000);
    for (std::size_t i = 0; i < msg.size(); ++i) msg[i] = static_cast<std::uint8_t>(i);
    KeystreamGenerator tx(tx_cfg), rx(rx_cfg);
    const auto out = rx.decrypt(tx.encrypt(msg));
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < msg.size(); ++i) wrong += std::popcount(static_cast<unsigned>(msg[i] ^ out[i]));
    EXPECT_NEAR(double(wrong) / (8.0 * double(msg.size())), 0.5, 0.01);
}

TEST(Keystream, ByteHistogramCoversAllValuesEvenly) {
    KeystreamGenerator g(KeystreamConfig{});
    std::array<std::size_t, 256> hist{};
    for (int i = 0; i < 1'000'000; ++i) ++hist[g.next_key_byte()];
    const auto [lo, hi] = std::minmax_element(hist.begin(), hist.end());
    EXPECT_GT(*lo, 0u);
    EXPECT_LT(double(*hi) / double(*lo), 1.1);
}
