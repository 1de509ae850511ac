#include <doctest.h>

#include <cmath>

#include "approxfl/link.hpp"
#include "approxfl/rng.hpp"

using namespace approxfl;

namespace {

BitFrame random_frame(size_t len, uint64_t seed) {
    BitFrame f;
    f.bits.resize(len);
    f.payload_len_bits = len;
    Rng rng(seed);
    for (auto& b : f.bits) b = static_cast<uint8_t>(rng.bit());
    return f;
}

ChannelConfig clean_channel() {
    ChannelConfig ch;
    ch.snr_db = 300.0;
    ch.block_len_symbols = 324;
    return ch;
}

}  // namespace

TEST_CASE("strategy validation") {
    LinkStrategy st;
    st.code_rate = 0.0;
    CHECK_THROWS_AS(st.validate(), std::invalid_argument);
    st = LinkStrategy{};
    st.codeword_len = 647;  // 647 * 0.5 is not an integer
    CHECK_THROWS_AS(st.validate(), std::invalid_argument);
    st = LinkStrategy{};
    CHECK(st.info_bits_per_codeword() == 324);
}

TEST_CASE("ecrt on a clean channel uses one attempt per codeword") {
    Constellation c = Constellation::build(4);
    LinkStrategy st;
    st.kind = StrategyKind::ecrt;
    BitFrame f = random_frame(20736, 1);  // 64 codewords exactly
    auto out = send_ecrt(f, c, clean_channel(), st, 99);
    CHECK(out.retransmissions == 0);
    CHECK(out.residual_bit_errors == 0);
    CHECK(out.raw_bit_errors == 0);
    CHECK(out.delivered.bits == f.bits);
    // 64 codewords * 648 bits / 2 bits per symbol
    CHECK(out.symbols_used == 64 * 324);
}

TEST_CASE("ecrt delivers exact bits under heavy noise") {
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 324;
    LinkStrategy st;
    st.kind = StrategyKind::ecrt;
    BitFrame f = random_frame(6480, 2);
    auto out = send_ecrt(f, c, ch, st, 7);
    CHECK(out.delivered.bits == f.bits);
    CHECK(out.residual_bit_errors == 0);
    // at 10 dB average SNR most fading draws leave more than 7 errors in 648
    // bits, so retransmissions must appear over 20 codewords
    CHECK(out.retransmissions > 0);
    CHECK(out.symbols_used > 20 * 324u);
}

TEST_CASE("ecrt gives up after max_retries") {
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = -30.0;  // hopeless
    ch.block_len_symbols = 324;
    LinkStrategy st;
    st.kind = StrategyKind::ecrt;
    st.max_retries = 3;
    BitFrame f = random_frame(648, 3);
    CHECK_THROWS_AS(send_ecrt(f, c, ch, st, 1), LinkFailure);
}

TEST_CASE("naive transmission is transparent on a clean channel") {
    Constellation c = Constellation::build(4);
    BitFrame f = random_frame(5000, 4);
    auto out = send_naive(f, c, clean_channel(), 11);
    CHECK(out.delivered.bits == f.bits);
    CHECK(out.raw_bit_errors == 0);
    CHECK(out.retransmissions == 0);
    CHECK(out.symbols_used == 2500);

    // odd payloads round up to the next symbol
    BitFrame f2 = random_frame(5001, 5);
    CHECK(send_naive(f2, c, clean_channel(), 11).symbols_used == 2501);
}

TEST_CASE("naive error rate at 10 dB sits near 4e-2") {
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 1;
    BitFrame f = random_frame(1000000, 6);
    auto out = send_naive(f, c, ch, 12);
    double ber = static_cast<double>(out.raw_bit_errors) / 1e6;
    CHECK(ber > 0.035);
    CHECK(ber < 0.052);
}

TEST_CASE("approximate transmission round-trips cleanly at high SNR") {
    Constellation c = Constellation::build(4);
    LinkStrategy st;
    BitFrame f = random_frame(77120, 7);
    auto out = send_approximate(f, c, clean_channel(), st, 13);
    CHECK(out.delivered.bits == f.bits);
    CHECK(out.residual_bit_errors == 0);
    CHECK(out.symbols_used == 38560);
}

TEST_CASE("interleaving preserves the error count through deinterleave") {
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 324;
    LinkStrategy st;
    BitFrame f = random_frame(20000, 8);
    auto out = send_approximate(f, c, ch, st, 14);
    CHECK(out.raw_bit_errors == out.residual_bit_errors);
    CHECK(out.raw_bit_errors > 0);
}

TEST_CASE("content-symmetric frames see identical errors with and without interleaving") {
    // with one fading block covering the whole frame and an all-zero payload,
    // the interleaved wire stream is bit-identical, so the error pattern is too
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 10000;
    BitFrame f;
    f.bits.assign(20000, 0);
    f.payload_len_bits = f.bits.size();
    LinkStrategy st;
    auto naive = send_naive(f, c, ch, 15);
    auto approx = send_approximate(f, c, ch, st, 15);
    CHECK(naive.raw_bit_errors == approx.raw_bit_errors);
}

TEST_CASE("interleaving leaves the marginal error rate unchanged") {
    Constellation c = Constellation::build(4);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 324;
    LinkStrategy st;
    uint64_t naive_errors = 0, approx_errors = 0;
    size_t len = 200000;
    for (uint64_t trial = 0; trial < 5; ++trial) {
        BitFrame f = random_frame(len, 100 + trial);
        naive_errors += send_naive(f, c, ch, 200 + trial).raw_bit_errors;
        approx_errors += send_approximate(f, c, ch, st, 300 + trial).raw_bit_errors;
    }
    double a = static_cast<double>(naive_errors) / (5.0 * len);
    double b = static_cast<double>(approx_errors) / (5.0 * len);
    CHECK(std::abs(a - b) / a < 0.05);
}

TEST_CASE("airtime ratio is the coding overhead when nothing is retransmitted") {
    Constellation c = Constellation::build(4);
    LinkStrategy ecrt;
    ecrt.kind = StrategyKind::ecrt;
    LinkStrategy approx;
    BitFrame f = random_frame(20736, 9);  // divides into 64 full codewords
    auto oe = send_ecrt(f, c, clean_channel(), ecrt, 21);
    auto oa = send_approximate(f, c, clean_channel(), approx, 22);
    CHECK(airtime_ratio(oe, oa) == doctest::Approx(2.0));
    CHECK(send_naive(f, c, clean_channel(), 23).symbols_used == oa.symbols_used);
}
