#include "approxfl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "approxfl/rng.hpp"

namespace approxfl {

std::vector<LayerBound> gradient_bounds(const ModelSpec& spec) {
    spec.validate();
    if (spec.hidden_act != Activation::sigmoid) {
        throw std::invalid_argument(
            "gradient_bounds: bound holds for sigmoid hidden activations only");
    }
    std::vector<LayerBound> bounds;
    if (spec.arch == Arch::mlp) {
        size_t n_layers = spec.layer_sizes.size() - 1;
        bounds.resize(n_layers);
        double b_delta = 1.0;  // head error magnitude < 1
        double n_sum = 0.0;
        for (size_t l = n_layers; l-- > 0;) {
            bounds[l].layer = "fc" + std::to_string(l + 1);
            bounds[l].product_bound = b_delta;
            bounds[l].sum_bound = n_sum;
            b_delta *= 0.25 * static_cast<double>(spec.layer_sizes[l + 1]);
            n_sum += static_cast<double>(spec.layer_sizes[l + 1]);
        }
    } else {
        double pool_cells = static_cast<double>(spec.pooled_out()) *
                            static_cast<double>(spec.pooled_out());
        LayerBound conv;
        conv.layer = "conv";
        conv.product_bound = 0.25 * pool_cells * static_cast<double>(spec.n_classes);
        conv.sum_bound = static_cast<double>(spec.n_classes);
        LayerBound fc;
        fc.layer = "fc";
        fc.product_bound = 1.0;
        fc.sum_bound = 0.0;
        bounds = {conv, fc};
    }
    return bounds;
}

AssumptionFlags check_assumptions(const ModelSpec& spec, std::span<const float> params) {
    AssumptionFlags flags;
    flags.sigmoid_hidden = spec.hidden_act == Activation::sigmoid;
    flags.softmax_ce_head = true;
    flags.weights_in_unit_range = true;
    auto layout = param_layout(spec);
    for (const auto& slice : layout) {
        for (size_t i = 0; i < slice.w_len; ++i) {
            if (!(std::abs(params[slice.w_offset + i]) < 1.0f)) {
                flags.weights_in_unit_range = false;
                return flags;
            }
        }
    }
    return flags;
}

BoundReport check_empirical(const ModelSpec& spec, int n_trials, uint64_t seed) {
    spec.validate();
    BoundReport report;
    report.layers = gradient_bounds(spec);  // throws on non-sigmoid specs
    report.trials = static_cast<size_t>(n_trials);
    report.delta_min = 1.0;
    report.delta_max = -1.0;
    report.delta_in_unit = true;

    auto layout = param_layout(spec);
    int n_out = spec.output_dim();

    Dataset one;
    if (spec.arch == Arch::mlp) {
        one.height = 1;
        one.width = spec.layer_sizes[0];
    } else {
        one.height = spec.input_h;
        one.width = spec.input_w;
    }
    one.n_classes = n_out;
    one.pixels.resize(static_cast<size_t>(one.dim()));
    one.labels.resize(1);

    std::vector<float> params(spec.param_count());
    const int batch[1] = {0};

    uint64_t in_unit = 0, total_entries = 0;
    for (int trial = 0; trial < n_trials; ++trial) {
        Rng rng(derive_seed(seed, Stream::bounds, static_cast<uint64_t>(trial)));
        for (auto& p : params) p = static_cast<float>(rng.uniform(-1.0, 1.0));
        for (auto& px : one.pixels) px = static_cast<float>(rng.uniform01());
        one.labels[0] = static_cast<int>(rng.below(static_cast<uint64_t>(n_out)));

        auto logits = forward_logits<float>(spec, params, one.sample(0));
        // head error p - y, straight from the forward probabilities
        float mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        std::vector<double> probs(logits.size());
        for (size_t i = 0; i < logits.size(); ++i) {
            probs[i] = std::exp(static_cast<double>(logits[i] - mx));
            sum += probs[i];
        }
        for (size_t i = 0; i < logits.size(); ++i) {
            double delta = probs[i] / sum - (static_cast<int>(i) == one.labels[0] ? 1.0 : 0.0);
            report.delta_min = std::min(report.delta_min, delta);
            report.delta_max = std::max(report.delta_max, delta);
            if (!(delta > -1.0 && delta < 1.0)) report.delta_in_unit = false;
        }

        auto fb = forward_backward<float>(spec, params, one, batch);
        for (size_t l = 0; l < layout.size(); ++l) {
            double mxg = 0.0;
            for (size_t i = 0; i < layout[l].w_len; ++i) {
                double g = std::abs(static_cast<double>(fb.grad[layout[l].w_offset + i]));
                mxg = std::max(mxg, g);
                if (g < 1.0) ++in_unit;
                ++total_entries;
            }
            report.layers[l].observed_max = std::max(report.layers[l].observed_max, mxg);
        }
    }
    report.frac_grads_in_unit =
        total_entries > 0 ? static_cast<double>(in_unit) / static_cast<double>(total_entries) : 0.0;

    report.assumptions.sigmoid_hidden = spec.hidden_act == Activation::sigmoid;
    report.assumptions.softmax_ce_head = true;
    report.assumptions.weights_in_unit_range = true;  // drawn from U(-1,1) above

    for (const auto& lb : report.layers) {
        if (lb.observed_max > lb.product_bound) report.violations = true;
    }
    return report;
}

std::string bound_report_header() {
    return
        "# gradient-magnitude bounds under sigmoid hidden activations, |w| < 1,\n"
        "# inputs in [0,1], softmax + cross-entropy head.\n"
        "# product_bound: prod over downstream layers of (0.25 * layer width);\n"
        "#   head error magnitude < 1, every activation magnitude < 1.\n"
        "#   conv kernels: 0.25 * pool_cells_per_filter * output_width (one\n"
        "#   active delta per pool window).\n"
        "# sum_bound: summed downstream neuron count (0 for the output layer,\n"
        "#   where it is vacuous; see observed_max against both columns).\n";
}

}  // namespace approxfl
