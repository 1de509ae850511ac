#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "approxfl/model.hpp"

namespace approxfl {

// Per weight-layer gradient-magnitude bounds under the proof assumptions
// (sigmoid hidden activations, |w| < 1, inputs in [0,1], softmax +
// cross-entropy head).
//
// product_bound multiplies the per-layer factors of the delta recursion:
//   B_delta(L) = 1           (head error p - y)
//   B_delta(l) = 0.25 * n_{l+1} * B_delta(l+1)
// and |dC/dw^l| <= B_delta(l) since every activation magnitude is < 1.
// For the conv kernel the delta is nonzero on one cell per pool window, so
//   B_conv = 0.25 * (pool cells per filter) * n_out.
// sum_bound is the looser headline form: the summed neuron count downstream
// of the layer (vacuously 0 for the output layer itself).
struct LayerBound {
    std::string layer;
    double product_bound = 0.0;
    double sum_bound = 0.0;
    double observed_max = 0.0;
};

struct AssumptionFlags {
    bool sigmoid_hidden = false;
    bool softmax_ce_head = true;  // the only head this model family has
    bool weights_in_unit_range = false;

    bool all() const { return sigmoid_hidden && softmax_ce_head && weights_in_unit_range; }
};

struct BoundReport {
    std::vector<LayerBound> layers;
    double delta_min = 0.0;   // final-layer error range over all trials
    double delta_max = 0.0;
    bool delta_in_unit = false;
    double frac_grads_in_unit = 0.0;  // fraction of |dC/dw| entries < 1
    size_t trials = 0;
    AssumptionFlags assumptions;
    bool violations = false;  // any observed_max above its product bound

    bool valid() const { return assumptions.all() && !violations; }
};

// Bounds from the network shape alone; throws if the hidden activation is not
// sigmoid (the recursion's 0.25 derivative factor does not apply).
std::vector<LayerBound> gradient_bounds(const ModelSpec& spec);

AssumptionFlags check_assumptions(const ModelSpec& spec, std::span<const float> params);

// Randomized verification: n_trials draws of weights U(-1,1) and inputs
// U(0,1) with random one-hot labels; records per-layer max |gradient|, the
// final-layer error range, and compares against gradient_bounds().
BoundReport check_empirical(const ModelSpec& spec, int n_trials, uint64_t seed);

std::string bound_report_header();

}  // namespace approxfl
