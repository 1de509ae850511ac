#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "approxfl/bitcodec.hpp"
#include "approxfl/channel.hpp"

namespace approxfl {

using cdouble = std::complex<double>;

// Square QAM constellation with per-axis reflected Gray labeling and unit
// average symbol energy. The first half of a label addresses the I axis, the
// second half the Q axis; grid index s = row * side + col walks the grid from
// the (+I, +Q) corner with I decreasing along a row and Q decreasing down
// the rows.
class Constellation {
  public:
    static Constellation build(int order);  // order in {4, 16, 256}

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_per_symbol_; }
    int side() const { return side_; }
    double norm_energy() const { return norm_energy_; }

    cdouble point(int label) const { return points_[static_cast<size_t>(label)]; }
    const std::vector<cdouble>& points() const { return points_; }

    int label_at_grid(int row, int col) const;
    int grid_index_of_label(int label) const;  // s-index for a label

    std::string name() const;  // "qpsk", "qam16", "qam256"

  private:
    int order_ = 0;
    int bits_per_symbol_ = 0;
    int side_ = 0;
    double norm_energy_ = 0.0;          // average |point|^2 before scaling
    std::vector<cdouble> points_;       // indexed by label
    std::vector<int> grid_labels_;      // indexed by row * side + col
    std::vector<int> label_to_grid_;
};

int constellation_order_from_name(const std::string& name);

struct SymbolStream {
    std::vector<cdouble> symbols;
    size_t source_len_bits = 0;
};

// Maps consecutive bits_per_symbol-sized groups (MSB first) to symbols.
// Trailing bits of a partial group are padded with zeros.
SymbolStream modulate(const BitFrame& frame, const Constellation& c);

// Nearest-point detection against gain-scaled constellation points; ties go
// to the lowest label.
int ml_detect(cdouble received, cdouble gain, const Constellation& c);

// Detects every symbol of a channel output with its block's gain and unpacks
// the labels back to a bit frame of source_len_bits bits.
BitFrame demodulate(const ChannelOutput& rx, size_t source_len_bits, const Constellation& c);

// Per-symbol neighbor analysis: how many neighbors within the given Chebyshev
// grid radius flip the first (MSB) and last (LSB) label bit.
struct SymbolErrorRow {
    int symbol = 0;
    std::vector<int> neighbors;
    int msb_errors = 0;
    int lsb_errors = 0;
};
std::vector<SymbolErrorRow> msb_lsb_error_table(const Constellation& c, int neighbor_radius = 1);

struct BerPoint {
    double snr_db = 0.0;
    double ber = 0.0;
};

// Monte-Carlo bit error rate through the fading channel, one independent
// fading draw per symbol. Deterministic given the seed.
std::vector<BerPoint> ber_sweep(const Constellation& c, const std::vector<double>& snr_db_list,
                                uint64_t n_bits, uint64_t seed,
                                const ChannelConfig& base = ChannelConfig{});

// Ergodic Rayleigh QPSK bit error rate for per-bit SNR gamma_b (linear).
double qpsk_rayleigh_ber(double gamma_b);

}  // namespace approxfl
