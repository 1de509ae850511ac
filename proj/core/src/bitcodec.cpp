#include "approxfl/bitcodec.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace approxfl {

BitFrame make_frame(std::vector<uint8_t> bits) {
    BitFrame f;
    f.payload_len_bits = bits.size();
    f.pad_bits = 0;
    f.bits = std::move(bits);
    return f;
}

uint32_t float_to_word(float v) { return std::bit_cast<uint32_t>(v); }

float word_to_float(uint32_t w) { return std::bit_cast<float>(w); }

uint32_t clamp_word(uint32_t w) { return w & ~(1u << 30); }

BitFrame encode_gradients(const GradientTensor& g) {
    BitFrame frame;
    frame.bits.resize(g.values.size() * 32);
    frame.payload_len_bits = frame.bits.size();
    frame.pad_bits = 0;
    size_t pos = 0;
    for (float v : g.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("encode_gradients: non-finite payload value");
        }
        uint32_t w = float_to_word(v);
        for (int i = 0; i < 32; ++i) {
            frame.bits[pos++] = static_cast<uint8_t>((w >> (31 - i)) & 1u);
        }
    }
    return frame;
}

namespace {

uint32_t word_at(const BitFrame& frame, size_t word_index) {
    uint32_t w = 0;
    size_t base = word_index * 32;
    for (int i = 0; i < 32; ++i) {
        w = (w << 1) | frame.bits[base + i];
    }
    return w;
}

GradientTensor decode_words(const BitFrame& frame, bool clamp) {
    if (frame.payload_len_bits % 32 != 0) {
        throw std::invalid_argument("decode: payload length is not a multiple of 32 bits");
    }
    GradientTensor g;
    size_t n = frame.payload_len_bits / 32;
    g.values.resize(n);
    for (size_t k = 0; k < n; ++k) {
        uint32_t w = word_at(frame, k);
        if (clamp) w = clamp_word(w);
        g.values[k] = word_to_float(w);
    }
    return g;
}

// Number of bits the interleaver places in rows [0, r).
size_t row_offset(size_t len, int depth, int r) {
    size_t d = static_cast<size_t>(depth);
    size_t full = len / d;      // bits every row holds
    size_t extra = len % d;     // rows 0..extra-1 hold one more
    size_t rr = static_cast<size_t>(r);
    return rr * full + std::min(rr, extra);
}

void check_spec(const BitFrame& frame, const InterleaverSpec& spec) {
    if (spec.depth < 1) {
        throw std::invalid_argument("interleaver: depth must be >= 1");
    }
    if (spec.frame_len != frame.bits.size()) {
        throw std::invalid_argument("interleaver: spec frame_len does not match frame");
    }
}

}  // namespace

GradientTensor decode_with_clamp(const BitFrame& frame) { return decode_words(frame, true); }

GradientTensor decode_naive(const BitFrame& frame) { return decode_words(frame, false); }

BitFrame interleave(const BitFrame& frame, const InterleaverSpec& spec) {
    check_spec(frame, spec);
    BitFrame out = frame;
    size_t len = frame.bits.size();
    size_t d = static_cast<size_t>(spec.depth);
    for (size_t i = 0; i < len; ++i) {
        int r = static_cast<int>(i % d);
        size_t q = i / d;
        out.bits[row_offset(len, spec.depth, r) + q] = frame.bits[i];
    }
    return out;
}

BitFrame deinterleave(const BitFrame& frame, const InterleaverSpec& spec) {
    check_spec(frame, spec);
    BitFrame out = frame;
    size_t len = frame.bits.size();
    size_t d = static_cast<size_t>(spec.depth);
    for (size_t i = 0; i < len; ++i) {
        int r = static_cast<int>(i % d);
        size_t q = i / d;
        out.bits[i] = frame.bits[row_offset(len, spec.depth, r) + q];
    }
    return out;
}

uint64_t hamming_distance(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    uint64_t d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        d += (a[i] != b[i]) ? 1 : 0;
    }
    return d;
}

}  // namespace approxfl
