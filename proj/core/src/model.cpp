#include "approxfl/model.hpp"

#include "approxfl/rng.hpp"

namespace approxfl {

Activation activation_from_name(const std::string& name) {
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "relu") return Activation::relu;
    throw std::invalid_argument("unknown activation: " + name);
}

void ModelSpec::validate() const {
    if (arch == Arch::mlp) {
        if (layer_sizes.size() < 2) {
            throw std::invalid_argument("model: mlp needs at least input and output sizes");
        }
        for (int s : layer_sizes) {
            if (s < 1) throw std::invalid_argument("model: layer sizes must be >= 1");
        }
    } else {
        if (conv_kernel < 1 || conv_filters < 1 || n_classes < 1) {
            throw std::invalid_argument("model: bad cnn dimensions");
        }
        if (input_h != input_w) {
            throw std::invalid_argument("model: cnn expects square input");
        }
        if (conv_out() < 2) {
            throw std::invalid_argument("model: conv kernel leaves no room to pool");
        }
        if (conv_out() % 2 != 0) {
            throw std::invalid_argument("model: conv output is not divisible by the 2x2 pool");
        }
    }
}

int ModelSpec::input_dim() const { return input_h * input_w; }

int ModelSpec::output_dim() const {
    return arch == Arch::mlp ? layer_sizes.back() : n_classes;
}

size_t ModelSpec::param_count() const {
    size_t n = 0;
    for (const auto& s : param_layout(*this)) n += s.w_len + s.b_len;
    return n;
}

ModelSpec ModelSpec::mlp_spec(std::vector<int> sizes, Activation act) {
    ModelSpec spec;
    spec.arch = Arch::mlp;
    spec.hidden_act = act;
    spec.layer_sizes = std::move(sizes);
    spec.n_classes = spec.layer_sizes.back();
    spec.validate();
    return spec;
}

ModelSpec ModelSpec::cnn_spec(int input_h, int input_w, int kernel, int filters, int n_classes,
                              Activation act) {
    ModelSpec spec;
    spec.arch = Arch::cnn;
    spec.hidden_act = act;
    spec.input_h = input_h;
    spec.input_w = input_w;
    spec.conv_kernel = kernel;
    spec.conv_filters = filters;
    spec.n_classes = n_classes;
    spec.validate();
    return spec;
}

std::vector<LayerSlice> param_layout(const ModelSpec& spec) {
    std::vector<LayerSlice> layout;
    size_t at = 0;
    if (spec.arch == Arch::mlp) {
        for (size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
            LayerSlice s;
            s.w_len = static_cast<size_t>(spec.layer_sizes[l]) *
                      static_cast<size_t>(spec.layer_sizes[l + 1]);
            s.b_len = static_cast<size_t>(spec.layer_sizes[l + 1]);
            s.w_offset = at;
            at += s.w_len;
            s.b_offset = at;
            at += s.b_len;
            layout.push_back(s);
        }
    } else {
        LayerSlice conv;
        conv.w_len = static_cast<size_t>(spec.conv_filters) *
                     static_cast<size_t>(spec.conv_kernel) * static_cast<size_t>(spec.conv_kernel);
        conv.b_len = static_cast<size_t>(spec.conv_filters);
        conv.w_offset = at;
        at += conv.w_len;
        conv.b_offset = at;
        at += conv.b_len;
        layout.push_back(conv);

        LayerSlice fc;
        size_t fc_in = static_cast<size_t>(spec.conv_filters) *
                       static_cast<size_t>(spec.pooled_out()) *
                       static_cast<size_t>(spec.pooled_out());
        fc.w_len = fc_in * static_cast<size_t>(spec.n_classes);
        fc.b_len = static_cast<size_t>(spec.n_classes);
        fc.w_offset = at;
        at += fc.w_len;
        fc.b_offset = at;
        at += fc.b_len;
        layout.push_back(fc);
    }
    return layout;
}

std::vector<float> init_params(const ModelSpec& spec, uint64_t seed) {
    spec.validate();
    auto layout = param_layout(spec);
    std::vector<float> params(spec.param_count(), 0.0f);
    Rng rng(seed);
    for (size_t l = 0; l < layout.size(); ++l) {
        size_t fan_in = layout[l].w_len / layout[l].b_len;
        float r = 1.0f / std::sqrt(static_cast<float>(fan_in));
        for (size_t i = 0; i < layout[l].w_len; ++i) {
            params[layout[l].w_offset + i] = static_cast<float>(rng.uniform(-r, r));
        }
        // biases start at zero
    }
    return params;
}

double evaluate(const ModelSpec& spec, std::span<const float> params, const Dataset& data) {
    spec.validate();
    if (data.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    size_t correct = 0;
    for (size_t i = 0; i < data.size(); ++i) {
        auto logits = forward_logits<float>(spec, params, data.sample(i));
        int best = 0;
        for (size_t j = 1; j < logits.size(); ++j) {
            if (logits[j] > logits[static_cast<size_t>(best)]) best = static_cast<int>(j);
        }
        if (best == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace approxfl
