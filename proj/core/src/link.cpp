#include "approxfl/link.hpp"

#include <cmath>

namespace approxfl {

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "ecrt") return StrategyKind::ecrt;
    if (name == "naive") return StrategyKind::naive;
    if (name == "approximate" || name == "approx") return StrategyKind::approximate;
    throw std::invalid_argument("unknown link strategy: " + name);
}

std::string strategy_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::ecrt: return "ecrt";
        case StrategyKind::naive: return "naive";
        default: return "approximate";
    }
}

void LinkStrategy::validate() const {
    if (code_rate <= 0.0 || code_rate > 1.0) {
        throw std::invalid_argument("link: code_rate must be in (0, 1]");
    }
    if (codeword_len < 1) throw std::invalid_argument("link: codeword_len must be >= 1");
    double k = codeword_len * code_rate;
    if (std::abs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0) {
        throw std::invalid_argument("link: codeword_len * code_rate must be a positive integer");
    }
    if (correct_capability < 0) throw std::invalid_argument("link: correct_capability must be >= 0");
    if (max_retries < 1) throw std::invalid_argument("link: max_retries must be >= 1");
    if (interleaver_depth < 1) throw std::invalid_argument("link: interleaver_depth must be >= 1");
}

int LinkStrategy::info_bits_per_codeword() const {
    return static_cast<int>(std::lround(codeword_len * code_rate));
}

namespace {

uint64_t symbols_for_bits(size_t bits, const Constellation& c) {
    size_t m = static_cast<size_t>(c.bits_per_symbol());
    return (bits + m - 1) / m;
}

TransmissionOutcome send_uncoded(const BitFrame& frame, const Constellation& c,
                                 const ChannelConfig& ch, uint64_t stream_seed,
                                 const InterleaverSpec* il) {
    const BitFrame* wire = &frame;
    BitFrame interleaved;
    if (il != nullptr) {
        interleaved = interleave(frame, *il);
        wire = &interleaved;
    }

    SymbolStream sym = modulate(*wire, c);
    Rng rng(derive_seed(stream_seed, 0ULL));
    ChannelOutput rx = transmit(sym.symbols, ch, rng);
    BitFrame rx_bits = demodulate(rx, wire->bits.size(), c);
    rx_bits.payload_len_bits = frame.payload_len_bits;
    rx_bits.pad_bits = frame.pad_bits;

    TransmissionOutcome out;
    out.raw_bit_errors = hamming_distance(wire->bits, rx_bits.bits);
    out.delivered = il != nullptr ? deinterleave(rx_bits, *il) : std::move(rx_bits);
    out.residual_bit_errors = hamming_distance(frame.bits, out.delivered.bits);
    out.symbols_used = sym.symbols.size();
    out.retransmissions = 0;
    return out;
}

}  // namespace

TransmissionOutcome send_ecrt(const BitFrame& frame, const Constellation& c,
                              const ChannelConfig& ch, const LinkStrategy& strategy,
                              uint64_t stream_seed) {
    strategy.validate();
    size_t k = static_cast<size_t>(strategy.info_bits_per_codeword());
    size_t n = static_cast<size_t>(strategy.codeword_len);
    size_t len = frame.bits.size();
    size_t n_blocks = (len + k - 1) / k;

    TransmissionOutcome out;
    out.delivered = frame;  // codewords are delivered clean or retried
    uint64_t symbols_per_attempt = symbols_for_bits(n, c);

    for (size_t b = 0; b < n_blocks; ++b) {
        bool delivered = false;
        for (int attempt = 0; attempt <= strategy.max_retries; ++attempt) {
            Rng rng(derive_seed(stream_seed, b, static_cast<uint64_t>(attempt)));

            BitFrame codeword;
            codeword.bits.resize(n);
            codeword.payload_len_bits = n;
            for (size_t i = 0; i < k; ++i) {
                size_t src = b * k + i;
                codeword.bits[i] = src < len ? frame.bits[src] : 0;
            }
            // Parity is not constructed; its channel statistics are modeled
            // with random fill so codeword symbols stay data-uniform.
            for (size_t i = k; i < n; ++i) codeword.bits[i] = static_cast<uint8_t>(rng.bit());

            SymbolStream sym = modulate(codeword, c);
            ChannelOutput rx = transmit(sym.symbols, ch, rng);
            BitFrame rx_bits = demodulate(rx, n, c);

            uint64_t errors = hamming_distance(codeword.bits, rx_bits.bits);
            out.raw_bit_errors += errors;
            out.symbols_used += symbols_per_attempt;
            if (errors <= static_cast<uint64_t>(strategy.correct_capability)) {
                delivered = true;
                break;
            }
            out.retransmissions++;
        }
        if (!delivered) {
            throw LinkFailure("ecrt: codeword " + std::to_string(b) + " exceeded " +
                              std::to_string(strategy.max_retries) + " retries");
        }
    }
    out.residual_bit_errors = 0;
    return out;
}

TransmissionOutcome send_naive(const BitFrame& frame, const Constellation& c,
                               const ChannelConfig& ch, uint64_t stream_seed,
                               const InterleaverSpec* il) {
    return send_uncoded(frame, c, ch, stream_seed, il);
}

TransmissionOutcome send_approximate(const BitFrame& frame, const Constellation& c,
                                     const ChannelConfig& ch, const LinkStrategy& strategy,
                                     uint64_t stream_seed) {
    strategy.validate();
    InterleaverSpec il{strategy.interleaver_depth, frame.bits.size()};
    return send_uncoded(frame, c, ch, stream_seed, &il);
}

TransmissionOutcome send(const LinkStrategy& strategy, const BitFrame& frame,
                         const Constellation& c, const ChannelConfig& ch, uint64_t stream_seed) {
    switch (strategy.kind) {
        case StrategyKind::ecrt: return send_ecrt(frame, c, ch, strategy, stream_seed);
        case StrategyKind::naive: return send_naive(frame, c, ch, stream_seed);
        default: return send_approximate(frame, c, ch, strategy, stream_seed);
    }
}

double airtime_ratio(const TransmissionOutcome& ecrt, const TransmissionOutcome& approx) {
    return static_cast<double>(ecrt.symbols_used) / static_cast<double>(approx.symbols_used);
}

}  // namespace approxfl
