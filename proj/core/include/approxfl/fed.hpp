#pragma once

#include <span>
#include <vector>

#include "approxfl/bitcodec.hpp"

namespace approxfl {

// Weighted sum of client gradients. Weights must sum to 1 within 1e-9.
// Non-finite entries in a received gradient contribute zero; this is the only
// sanitization point between the wire and the model update.
std::vector<float> aggregate(const std::vector<GradientTensor>& grads,
                             std::span<const double> weights);

// w <- w - lr * g, elementwise in float32.
void apply_update(std::span<float> params, std::span<const float> grad, float lr);

}  // namespace approxfl
