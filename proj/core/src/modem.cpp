#include "approxfl/modem.hpp"

#include <cmath>
#include <stdexcept>

namespace approxfl {

namespace {

int gray_encode(int x) { return x ^ (x >> 1); }

int gray_decode(int g) {
    int x = 0;
    while (g != 0) {
        x ^= g;
        g >>= 1;
    }
    return x;
}

}  // namespace

Constellation Constellation::build(int order) {
    if (order != 4 && order != 16 && order != 256) {
        throw std::invalid_argument("constellation: order must be 4, 16 or 256");
    }
    Constellation c;
    c.order_ = order;
    c.bits_per_symbol_ = static_cast<int>(std::lround(std::log2(order)));
    c.side_ = 1 << (c.bits_per_symbol_ / 2);

    // Mean squared level of a +-1, +-3, ... PAM axis is (L^2 - 1) / 3; two
    // axes give the average symbol energy before normalization.
    int L = c.side_;
    c.norm_energy_ = 2.0 * (static_cast<double>(L) * L - 1.0) / 3.0;
    double scale = 1.0 / std::sqrt(c.norm_energy_);

    int half_bits = c.bits_per_symbol_ / 2;
    int half_mask = (1 << half_bits) - 1;

    c.points_.resize(static_cast<size_t>(order));
    c.grid_labels_.resize(static_cast<size_t>(order));
    c.label_to_grid_.resize(static_cast<size_t>(order));

    for (int label = 0; label < order; ++label) {
        int vi = (label >> half_bits) & half_mask;  // first half: I axis
        int vq = label & half_mask;                 // second half: Q axis
        int col = gray_decode(vi);                  // position in the Gray sequence
        int row = gray_decode(vq);
        double i_coord = static_cast<double>(L - 1 - 2 * col) * scale;
        double q_coord = static_cast<double>(L - 1 - 2 * row) * scale;
        c.points_[static_cast<size_t>(label)] = {i_coord, q_coord};
        int s = row * L + col;
        c.grid_labels_[static_cast<size_t>(s)] = label;
        c.label_to_grid_[static_cast<size_t>(label)] = s;
    }
    return c;
}

int Constellation::label_at_grid(int row, int col) const {
    return grid_labels_[static_cast<size_t>(row * side_ + col)];
}

int Constellation::grid_index_of_label(int label) const {
    return label_to_grid_[static_cast<size_t>(label)];
}

std::string Constellation::name() const {
    switch (order_) {
        case 4: return "qpsk";
        case 16: return "qam16";
        default: return "qam256";
    }
}

int constellation_order_from_name(const std::string& name) {
    if (name == "qpsk" || name == "4") return 4;
    if (name == "qam16" || name == "16") return 16;
    if (name == "qam256" || name == "256") return 256;
    throw std::invalid_argument("unknown modulation: " + name);
}

SymbolStream modulate(const BitFrame& frame, const Constellation& c) {
    SymbolStream s;
    s.source_len_bits = frame.bits.size();
    int m = c.bits_per_symbol();
    size_t n_sym = (frame.bits.size() + static_cast<size_t>(m) - 1) / static_cast<size_t>(m);
    s.symbols.resize(n_sym);
    for (size_t k = 0; k < n_sym; ++k) {
        int label = 0;
        for (int b = 0; b < m; ++b) {
            size_t i = k * static_cast<size_t>(m) + static_cast<size_t>(b);
            int bit = i < frame.bits.size() ? frame.bits[i] : 0;  // zero padding
            label = (label << 1) | bit;
        }
        s.symbols[k] = c.point(label);
    }
    return s;
}

int ml_detect(cdouble received, cdouble gain, const Constellation& c) {
    if (std::abs(gain) == 0.0) {
        throw std::invalid_argument("ml_detect: zero channel gain");
    }
    int best = 0;
    double best_d = std::norm(received - gain * c.point(0));
    for (int label = 1; label < c.order(); ++label) {
        double d = std::norm(received - gain * c.point(label));
        if (d < best_d) {  // strict: ties keep the lowest label
            best_d = d;
            best = label;
        }
    }
    return best;
}

BitFrame demodulate(const ChannelOutput& rx, size_t source_len_bits, const Constellation& c) {
    BitFrame frame;
    frame.bits.resize(source_len_bits);
    frame.payload_len_bits = source_len_bits;
    frame.pad_bits = 0;
    int m = c.bits_per_symbol();
    int mh = m / 2;
    int L = c.side();
    // Equalize by the known gain and slice each axis: for a square grid this
    // picks the same argmin as the full point search.
    double scale = 1.0 / std::sqrt(c.norm_energy());
    cdouble gain{0.0, 0.0};
    auto nearest_pos = [&](double coord) {
        double u = (static_cast<double>(L - 1) - coord / scale) * 0.5;
        long p = std::lround(u);
        if (p < 0) p = 0;
        if (p >= L) p = L - 1;
        return static_cast<int>(p);
    };
    for (size_t k = 0; k < rx.received.size(); ++k) {
        if (k % rx.block_len_symbols == 0) {
            gain = rx.block_of(k).gain;
            if (std::abs(gain) == 0.0) {
                throw std::invalid_argument("demodulate: zero channel gain");
            }
        }
        cdouble y = rx.received[k] / gain;
        int label = (gray_encode(nearest_pos(y.real())) << mh) | gray_encode(nearest_pos(y.imag()));
        for (int b = 0; b < m; ++b) {
            size_t i = k * static_cast<size_t>(m) + static_cast<size_t>(b);
            if (i < source_len_bits) {
                frame.bits[i] = static_cast<uint8_t>((label >> (m - 1 - b)) & 1);
            }
        }
    }
    return frame;
}

std::vector<SymbolErrorRow> msb_lsb_error_table(const Constellation& c, int neighbor_radius) {
    std::vector<SymbolErrorRow> rows;
    int L = c.side();
    int m = c.bits_per_symbol();
    int msb_mask = 1 << (m - 1);
    for (int s = 0; s < c.order(); ++s) {
        SymbolErrorRow row;
        row.symbol = s;
        int r0 = s / L, c0 = s % L;
        int label0 = c.label_at_grid(r0, c0);
        for (int dr = -neighbor_radius; dr <= neighbor_radius; ++dr) {
            for (int dc = -neighbor_radius; dc <= neighbor_radius; ++dc) {
                if (dr == 0 && dc == 0) continue;
                int r = r0 + dr, cc = c0 + dc;
                if (r < 0 || r >= L || cc < 0 || cc >= L) continue;
                int label = c.label_at_grid(r, cc);
                row.neighbors.push_back(r * L + cc);
                if ((label ^ label0) & msb_mask) row.msb_errors++;
                if ((label ^ label0) & 1) row.lsb_errors++;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<BerPoint> ber_sweep(const Constellation& c, const std::vector<double>& snr_db_list,
                                uint64_t n_bits, uint64_t seed, const ChannelConfig& base) {
    if (snr_db_list.empty()) {
        throw std::invalid_argument("ber_sweep: empty SNR list");
    }
    std::vector<BerPoint> out;
    out.reserve(snr_db_list.size());
    for (size_t p = 0; p < snr_db_list.size(); ++p) {
        ChannelConfig cfg = base;
        cfg.snr_db = snr_db_list[p];
        cfg.block_len_symbols = 1;  // fresh fading per symbol for an ergodic estimate
        Rng rng(derive_seed(seed, Stream::ber, p));

        BitFrame tx;
        tx.bits.resize(n_bits);
        tx.payload_len_bits = n_bits;
        for (auto& b : tx.bits) b = static_cast<uint8_t>(rng.bit());

        SymbolStream sym = modulate(tx, c);
        ChannelOutput rx = transmit(sym.symbols, cfg, rng);
        BitFrame decoded = demodulate(rx, n_bits, c);
        uint64_t errors = hamming_distance(tx.bits, decoded.bits);
        out.push_back({snr_db_list[p], static_cast<double>(errors) / static_cast<double>(n_bits)});
    }
    return out;
}

double qpsk_rayleigh_ber(double gamma_b) {
    return 0.5 * (1.0 - std::sqrt(gamma_b / (1.0 + gamma_b)));
}

}  // namespace approxfl
