#include "approxfl/fed.hpp"

#include <cmath>
#include <stdexcept>

namespace approxfl {

std::vector<float> aggregate(const std::vector<GradientTensor>& grads,
                             std::span<const double> weights) {
    if (grads.empty()) throw std::invalid_argument("aggregate: no gradients");
    if (grads.size() != weights.size()) {
        throw std::invalid_argument("aggregate: gradient/weight count mismatch");
    }
    size_t n = grads[0].values.size();
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (std::abs(wsum - 1.0) > 1e-9) {
        throw std::invalid_argument("aggregate: weights must sum to 1");
    }
    for (const auto& g : grads) {
        if (g.values.size() != n) {
            throw std::invalid_argument("aggregate: gradient length mismatch");
        }
    }

    std::vector<float> out(n, 0.0f);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t m = 0; m < grads.size(); ++m) {
            float v = grads[m].values[i];
            if (std::isfinite(v)) acc += weights[m] * static_cast<double>(v);
        }
        out[i] = static_cast<float>(acc);
    }
    return out;
}

void apply_update(std::span<float> params, std::span<const float> grad, float lr) {
    if (params.size() != grad.size()) {
        throw std::invalid_argument("apply_update: size mismatch");
    }
    for (size_t i = 0; i < params.size(); ++i) {
        params[i] -= lr * grad[i];
    }
}

}  // namespace approxfl
