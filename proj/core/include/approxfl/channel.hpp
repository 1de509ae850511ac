#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "approxfl/rng.hpp"

namespace approxfl {

// Rayleigh block-fading uplink with distance path loss and AWGN. SNR is the
// average received symbol energy over noise variance for unit-energy
// constellations: sigma2 = tx_power * distance^-alpha / snr_linear.
struct ChannelConfig {
    double path_loss_exponent = 3.0;
    double distance_m = 10.0;
    double tx_power = 1.0;
    double snr_db = 10.0;
    size_t block_len_symbols = 324;  // symbols sharing one fading draw

    void validate() const;
    double path_gain() const;   // tx_power * distance^-alpha
    double snr_linear() const;
    double noise_variance() const;
};

struct ChannelRealization {
    std::complex<double> h;      // CN(0,1) small-scale fading
    std::complex<double> gain;   // sqrt(tx_power * d^-alpha) * h
    double sigma2 = 0.0;
};

ChannelRealization draw_realization(const ChannelConfig& cfg, Rng& rng);

struct ChannelOutput {
    std::vector<std::complex<double>> received;
    std::vector<ChannelRealization> blocks;
    size_t block_len_symbols = 0;

    const ChannelRealization& block_of(size_t symbol_index) const {
        return blocks[symbol_index / block_len_symbols];
    }
};

// r = gain * s + n per symbol; the fading gain is constant within a block of
// block_len_symbols and drawn fresh per block.
ChannelOutput transmit(std::span<const std::complex<double>> symbols, const ChannelConfig& cfg,
                       Rng& rng);

double db_to_linear(double db);
double linear_to_db(double lin);

}  // namespace approxfl
