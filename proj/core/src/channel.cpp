#include "approxfl/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace approxfl {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

void ChannelConfig::validate() const {
    if (path_loss_exponent <= 0.0) throw std::invalid_argument("channel: alpha must be > 0");
    if (distance_m <= 0.0) throw std::invalid_argument("channel: distance must be > 0");
    if (tx_power <= 0.0) throw std::invalid_argument("channel: tx power must be > 0");
    if (block_len_symbols < 1) throw std::invalid_argument("channel: block_len must be >= 1");
}

double ChannelConfig::path_gain() const {
    return tx_power * std::pow(distance_m, -path_loss_exponent);
}

double ChannelConfig::snr_linear() const { return db_to_linear(snr_db); }

double ChannelConfig::noise_variance() const { return path_gain() / snr_linear(); }

ChannelRealization draw_realization(const ChannelConfig& cfg, Rng& rng) {
    cfg.validate();
    ChannelRealization r;
    do {
        r.h = rng.cgaussian(1.0);
    } while (std::abs(r.h) == 0.0);  // a zero gain would leave nothing to detect against
    r.gain = std::sqrt(cfg.path_gain()) * r.h;
    r.sigma2 = cfg.noise_variance();
    return r;
}

ChannelOutput transmit(std::span<const std::complex<double>> symbols, const ChannelConfig& cfg,
                       Rng& rng) {
    cfg.validate();
    if (symbols.empty()) throw std::invalid_argument("transmit: empty symbol stream");

    ChannelOutput out;
    out.block_len_symbols = cfg.block_len_symbols;
    size_t n_blocks = (symbols.size() + cfg.block_len_symbols - 1) / cfg.block_len_symbols;
    out.blocks.reserve(n_blocks);
    out.received.resize(symbols.size());

    for (size_t b = 0; b < n_blocks; ++b) {
        ChannelRealization re = draw_realization(cfg, rng);
        size_t lo = b * cfg.block_len_symbols;
        size_t hi = std::min(symbols.size(), lo + cfg.block_len_symbols);
        for (size_t i = lo; i < hi; ++i) {
            out.received[i] = re.gain * symbols[i] + rng.cgaussian(re.sigma2);
        }
        out.blocks.push_back(re);
    }
    return out;
}

}  // namespace approxfl
