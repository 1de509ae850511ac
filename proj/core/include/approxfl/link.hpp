#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "approxfl/bitcodec.hpp"
#include "approxfl/channel.hpp"
#include "approxfl/modem.hpp"

namespace approxfl {

enum class StrategyKind { ecrt, naive, approximate };

StrategyKind strategy_from_name(const std::string& name);
std::string strategy_name(StrategyKind k);

// ECRT models a block code statistically: each codeword_len-bit codeword
// carries codeword_len * code_rate information bits and is delivered clean
// when its raw channel errors do not exceed correct_capability; otherwise the
// whole codeword is retransmitted under fresh fading.
struct LinkStrategy {
    StrategyKind kind = StrategyKind::approximate;
    double code_rate = 0.5;
    int codeword_len = 648;
    int correct_capability = 7;
    int max_retries = 100;
    int interleaver_depth = 32;

    void validate() const;
    int info_bits_per_codeword() const;
};

struct TransmissionOutcome {
    BitFrame delivered;
    uint64_t raw_bit_errors = 0;       // channel errors across every attempt
    uint64_t residual_bit_errors = 0;  // errors left in the delivered payload
    uint64_t symbols_used = 0;
    uint32_t retransmissions = 0;
};

// A codeword exhausted max_retries; the experiment must stop, not limp on.
struct LinkFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TransmissionOutcome send_ecrt(const BitFrame& frame, const Constellation& c,
                              const ChannelConfig& ch, const LinkStrategy& strategy,
                              uint64_t stream_seed);

// Uncoded transmission, delivered as demodulated. An interleaver may be
// supplied but is not part of the baseline.
TransmissionOutcome send_naive(const BitFrame& frame, const Constellation& c,
                               const ChannelConfig& ch, uint64_t stream_seed,
                               const InterleaverSpec* il = nullptr);

// Uncoded transmission wrapped in interleave/deinterleave; the receiver is
// expected to decode the payload with the exponent-MSB clamp.
TransmissionOutcome send_approximate(const BitFrame& frame, const Constellation& c,
                                     const ChannelConfig& ch, const LinkStrategy& strategy,
                                     uint64_t stream_seed);

TransmissionOutcome send(const LinkStrategy& strategy, const BitFrame& frame,
                         const Constellation& c, const ChannelConfig& ch, uint64_t stream_seed);

double airtime_ratio(const TransmissionOutcome& ecrt, const TransmissionOutcome& approx);

}  // namespace approxfl
