#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace approxfl {

// Flat gradient payload; values use the parameter-vector layout of the model
// that produced them.
struct GradientTensor {
    std::vector<float> values;
    int client_id = -1;
    int round = -1;
};

// Ordered bit sequence. payload_len_bits + pad_bits == bits.size(); padding
// bits are zero and carry no payload.
struct BitFrame {
    std::vector<uint8_t> bits;
    size_t payload_len_bits = 0;
    size_t pad_bits = 0;
};

BitFrame make_frame(std::vector<uint8_t> bits);

// Row-column block interleaver. depth rows are filled column by column and
// read row by row; depth 1 is the identity.
struct InterleaverSpec {
    int depth = 32;
    size_t frame_len = 0;
};

// Serializes each scalar as 32 bits, sign first, then exponent (MSB first),
// then fraction. Rejects non-finite values.
BitFrame encode_gradients(const GradientTensor& g);

// Re-interprets each 32-bit word as a float after forcing bit index 1 (the
// exponent MSB) to zero. Total: every bit pattern decodes, and the decoded
// magnitude is < 2 regardless of how the frame was corrupted.
GradientTensor decode_with_clamp(const BitFrame& frame);

// Re-interprets each 32-bit word as-is; corrupted exponents may yield huge,
// non-finite values. Sanitization of those is the aggregator's job.
GradientTensor decode_naive(const BitFrame& frame);

BitFrame interleave(const BitFrame& frame, const InterleaverSpec& spec);
BitFrame deinterleave(const BitFrame& frame, const InterleaverSpec& spec);

// Word-level helpers used by the codec and its diagnostics.
uint32_t float_to_word(float v);
float word_to_float(uint32_t w);
uint32_t clamp_word(uint32_t w);  // clears bit index 1 (exponent MSB)

uint64_t hamming_distance(std::span<const uint8_t> a, std::span<const uint8_t> b);

}  // namespace approxfl
