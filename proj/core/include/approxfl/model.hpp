#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "approxfl/dataset.hpp"

namespace approxfl {

enum class Arch { mlp, cnn };
enum class Activation { sigmoid, relu };

Activation activation_from_name(const std::string& name);

// mlp: dense layers layer_sizes[0] -> ... -> layer_sizes.back(), hidden_act
// between them, log-softmax + cross-entropy head.
// cnn: one valid conv layer (conv_filters kernels of conv_kernel^2), hidden
// activation, 2x2 max pool, dense head to n_classes — the three-layer
// conv/pool/dense pipeline.
struct ModelSpec {
    Arch arch = Arch::mlp;
    Activation hidden_act = Activation::relu;
    std::vector<int> layer_sizes;  // mlp only, includes input and output
    int input_h = 8;
    int input_w = 8;
    int conv_kernel = 5;
    int conv_filters = 8;
    int n_classes = 10;

    void validate() const;
    int input_dim() const;
    int output_dim() const;
    int conv_out() const { return input_h - conv_kernel + 1; }
    int pooled_out() const { return conv_out() / 2; }
    size_t param_count() const;

    static ModelSpec mlp_spec(std::vector<int> sizes, Activation act);
    static ModelSpec cnn_spec(int input_h, int input_w, int kernel, int filters, int n_classes,
                              Activation act);
};

// Slice of the flat parameter vector belonging to one weight layer.
struct LayerSlice {
    size_t w_offset = 0;
    size_t w_len = 0;
    size_t b_offset = 0;
    size_t b_len = 0;
};
std::vector<LayerSlice> param_layout(const ModelSpec& spec);

std::vector<float> init_params(const ModelSpec& spec, uint64_t seed);

template <class T>
struct FbResult {
    T loss = 0;
    std::vector<T> grad;
};

// Mean cross-entropy loss and its gradient over the batch, computed with the
// delta recursion; the conv kernel gradient correlates deltas with the input
// window and max-pool routes gradient to the argmax cell only.
template <class T>
FbResult<T> forward_backward(const ModelSpec& spec, std::span<const T> params, const Dataset& data,
                             std::span<const int> batch);

// Forward-only mean loss (used by finite-difference oracles).
template <class T>
T batch_loss(const ModelSpec& spec, std::span<const T> params, const Dataset& data,
             std::span<const int> batch);

// Class logits for one sample.
template <class T>
std::vector<T> forward_logits(const ModelSpec& spec, std::span<const T> params,
                              std::span<const float> x);

// Fraction of argmax-correct predictions. A NaN logit vector resolves to
// class 0, so a destroyed model scores like a constant guesser.
double evaluate(const ModelSpec& spec, std::span<const float> params, const Dataset& data);

// --- implementation ---

namespace detail {

template <class T>
T activate(Activation a, T z) {
    if (a == Activation::sigmoid) return T(1) / (T(1) + std::exp(-z));
    return z > T(0) ? z : T(0);
}

template <class T>
T activate_deriv(Activation a, T z, T value) {
    if (a == Activation::sigmoid) return value * (T(1) - value);
    return z > T(0) ? T(1) : T(0);
}

// log-softmax + cross-entropy against a one-hot label; fills probs.
template <class T>
T softmax_ce(std::span<const T> logits, int label, std::span<T> probs) {
    T mx = logits[0];
    for (size_t i = 1; i < logits.size(); ++i) mx = std::max(mx, logits[i]);
    T sum = T(0);
    for (size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - mx);
        sum += probs[i];
    }
    for (size_t i = 0; i < logits.size(); ++i) probs[i] /= sum;
    T logp = logits[static_cast<size_t>(label)] - mx - std::log(sum);
    return -logp;
}

template <class T>
struct MlpWork {
    std::vector<std::vector<T>> z;  // pre-activations per layer
    std::vector<std::vector<T>> a;  // activations, a[0] = input
    std::vector<T> probs;
    std::vector<std::vector<T>> delta;
};

template <class T>
void mlp_forward(const ModelSpec& spec, std::span<const T> params,
                 const std::vector<LayerSlice>& layout, std::span<const float> x, MlpWork<T>& w) {
    size_t n_layers = layout.size();
    w.a.resize(n_layers + 1);
    w.z.resize(n_layers);
    w.a[0].assign(x.begin(), x.end());
    for (size_t l = 0; l < n_layers; ++l) {
        int in = spec.layer_sizes[l];
        int out = spec.layer_sizes[l + 1];
        const T* W = params.data() + layout[l].w_offset;
        const T* b = params.data() + layout[l].b_offset;
        w.z[l].assign(static_cast<size_t>(out), T(0));
        for (int j = 0; j < out; ++j) {
            T acc = b[j];
            const T* row = W + static_cast<size_t>(j) * static_cast<size_t>(in);
            for (int k = 0; k < in; ++k) acc += row[k] * w.a[l][static_cast<size_t>(k)];
            w.z[l][static_cast<size_t>(j)] = acc;
        }
        w.a[l + 1].resize(static_cast<size_t>(out));
        if (l + 1 < n_layers) {
            for (int j = 0; j < out; ++j) {
                w.a[l + 1][static_cast<size_t>(j)] =
                    activate(spec.hidden_act, w.z[l][static_cast<size_t>(j)]);
            }
        } else {
            w.a[l + 1] = w.z[l];  // head is log-softmax over raw logits
        }
    }
}

template <class T>
struct CnnWork {
    std::vector<T> z1, a1;      // conv_filters * conv_out^2
    std::vector<T> a2;          // conv_filters * pooled^2
    std::vector<int> argmax;    // winning a1 index per pooled cell
    std::vector<T> z3, probs;
    std::vector<T> d1, d2, d3;
};

template <class T>
void cnn_forward(const ModelSpec& spec, std::span<const T> params,
                 const std::vector<LayerSlice>& layout, std::span<const float> x, CnnWork<T>& w) {
    int K = spec.conv_kernel;
    int F = spec.conv_filters;
    int co = spec.conv_out();
    int po = spec.pooled_out();
    const T* wk = params.data() + layout[0].w_offset;
    const T* bk = params.data() + layout[0].b_offset;

    w.z1.assign(static_cast<size_t>(F) * co * co, T(0));
    w.a1.resize(w.z1.size());
    for (int f = 0; f < F; ++f) {
        const T* kern = wk + static_cast<size_t>(f) * K * K;
        for (int j = 0; j < co; ++j) {
            for (int k = 0; k < co; ++k) {
                T acc = bk[f];
                for (int p = 0; p < K; ++p) {
                    for (int q = 0; q < K; ++q) {
                        acc += kern[p * K + q] *
                               static_cast<T>(x[static_cast<size_t>((j + p) * spec.input_w +
                                                                    (k + q))]);
                    }
                }
                size_t at = static_cast<size_t>((f * co + j) * co + k);
                w.z1[at] = acc;
                w.a1[at] = activate(spec.hidden_act, acc);
            }
        }
    }

    w.a2.assign(static_cast<size_t>(F) * po * po, T(0));
    w.argmax.assign(w.a2.size(), 0);
    for (int f = 0; f < F; ++f) {
        for (int s = 0; s < po; ++s) {
            for (int t = 0; t < po; ++t) {
                int best = (f * co + 2 * s) * co + 2 * t;
                T bv = w.a1[static_cast<size_t>(best)];
                for (int dj = 0; dj < 2; ++dj) {
                    for (int dk = 0; dk < 2; ++dk) {
                        int at = (f * co + 2 * s + dj) * co + 2 * t + dk;
                        if (w.a1[static_cast<size_t>(at)] > bv) {
                            bv = w.a1[static_cast<size_t>(at)];
                            best = at;
                        }
                    }
                }
                size_t cell = static_cast<size_t>((f * po + s) * po + t);
                w.a2[cell] = bv;
                w.argmax[cell] = best;
            }
        }
    }

    int fc_in = F * po * po;
    int out = spec.n_classes;
    const T* W3 = params.data() + layout[1].w_offset;
    const T* b3 = params.data() + layout[1].b_offset;
    w.z3.assign(static_cast<size_t>(out), T(0));
    for (int i = 0; i < out; ++i) {
        T acc = b3[i];
        const T* row = W3 + static_cast<size_t>(i) * static_cast<size_t>(fc_in);
        for (int j = 0; j < fc_in; ++j) acc += row[j] * w.a2[static_cast<size_t>(j)];
        w.z3[static_cast<size_t>(i)] = acc;
    }
}

}  // namespace detail

template <class T>
std::vector<T> forward_logits(const ModelSpec& spec, std::span<const T> params,
                              std::span<const float> x) {
    auto layout = param_layout(spec);
    if (spec.arch == Arch::mlp) {
        detail::MlpWork<T> w;
        detail::mlp_forward(spec, params, layout, x, w);
        return w.a.back();
    }
    detail::CnnWork<T> w;
    detail::cnn_forward(spec, params, layout, x, w);
    return w.z3;
}

template <class T>
FbResult<T> forward_backward(const ModelSpec& spec, std::span<const T> params, const Dataset& data,
                             std::span<const int> batch) {
    spec.validate();
    if (batch.empty()) throw std::invalid_argument("forward_backward: empty batch");
    if (params.size() != spec.param_count()) {
        throw std::invalid_argument("forward_backward: parameter vector size mismatch");
    }
    auto layout = param_layout(spec);
    FbResult<T> res;
    res.grad.assign(params.size(), T(0));
    T inv_batch = T(1) / static_cast<T>(batch.size());

    if (spec.arch == Arch::mlp) {
        size_t n_layers = layout.size();
        detail::MlpWork<T> w;
        w.probs.resize(static_cast<size_t>(spec.output_dim()));
        w.delta.resize(n_layers);
        for (int si : batch) {
            detail::mlp_forward(spec, params, layout, data.sample(static_cast<size_t>(si)), w);
            int label = data.labels[static_cast<size_t>(si)];
            res.loss += detail::softmax_ce<T>(w.a.back(), label, w.probs);

            // head error: probs - one_hot(label)
            auto& dL = w.delta[n_layers - 1];
            dL = w.probs;
            dL[static_cast<size_t>(label)] -= T(1);

            for (size_t l = n_layers; l-- > 0;) {
                int in = spec.layer_sizes[l];
                int out = spec.layer_sizes[l + 1];
                const auto& d = w.delta[l];
                T* gW = res.grad.data() + layout[l].w_offset;
                T* gb = res.grad.data() + layout[l].b_offset;
                for (int j = 0; j < out; ++j) {
                    T dj = d[static_cast<size_t>(j)] * inv_batch;
                    gb[j] += dj;
                    T* grow = gW + static_cast<size_t>(j) * static_cast<size_t>(in);
                    for (int k = 0; k < in; ++k) grow[k] += dj * w.a[l][static_cast<size_t>(k)];
                }
                if (l == 0) break;
                const T* W = params.data() + layout[l].w_offset;
                auto& dprev = w.delta[l - 1];
                dprev.assign(static_cast<size_t>(in), T(0));
                for (int k = 0; k < in; ++k) {
                    T acc = T(0);
                    for (int j = 0; j < out; ++j) {
                        acc += d[static_cast<size_t>(j)] *
                               W[static_cast<size_t>(j) * static_cast<size_t>(in) +
                                 static_cast<size_t>(k)];
                    }
                    dprev[static_cast<size_t>(k)] =
                        acc * detail::activate_deriv(spec.hidden_act,
                                                     w.z[l - 1][static_cast<size_t>(k)],
                                                     w.a[l][static_cast<size_t>(k)]);
                }
            }
        }
    } else {
        int K = spec.conv_kernel;
        int F = spec.conv_filters;
        int co = spec.conv_out();
        int po = spec.pooled_out();
        int fc_in = F * po * po;
        int out = spec.n_classes;
        detail::CnnWork<T> w;
        w.probs.resize(static_cast<size_t>(out));
        for (int si : batch) {
            auto x = data.sample(static_cast<size_t>(si));
            detail::cnn_forward(spec, params, layout, x, w);
            int label = data.labels[static_cast<size_t>(si)];
            res.loss += detail::softmax_ce<T>(w.z3, label, w.probs);

            w.d3 = w.probs;
            w.d3[static_cast<size_t>(label)] -= T(1);

            const T* W3 = params.data() + layout[1].w_offset;
            T* gW3 = res.grad.data() + layout[1].w_offset;
            T* gb3 = res.grad.data() + layout[1].b_offset;
            w.d2.assign(static_cast<size_t>(fc_in), T(0));
            for (int i = 0; i < out; ++i) {
                T di = w.d3[static_cast<size_t>(i)];
                gb3[i] += di * inv_batch;
                const T* row = W3 + static_cast<size_t>(i) * static_cast<size_t>(fc_in);
                T* grow = gW3 + static_cast<size_t>(i) * static_cast<size_t>(fc_in);
                for (int j = 0; j < fc_in; ++j) {
                    grow[j] += di * w.a2[static_cast<size_t>(j)] * inv_batch;
                    w.d2[static_cast<size_t>(j)] += di * row[j];
                }
            }

            // gradient flows only through each window's argmax cell
            w.d1.assign(w.z1.size(), T(0));
            for (size_t cell = 0; cell < w.d2.size(); ++cell) {
                size_t at = static_cast<size_t>(w.argmax[cell]);
                w.d1[at] += w.d2[cell] * detail::activate_deriv(spec.hidden_act, w.z1[at],
                                                                w.a1[at]);
            }

            T* gW1 = res.grad.data() + layout[0].w_offset;
            T* gb1 = res.grad.data() + layout[0].b_offset;
            for (int f = 0; f < F; ++f) {
                T* gk = gW1 + static_cast<size_t>(f) * K * K;
                T bacc = T(0);
                for (int j = 0; j < co; ++j) {
                    for (int k = 0; k < co; ++k) {
                        T d = w.d1[static_cast<size_t>((f * co + j) * co + k)];
                        if (d == T(0)) continue;
                        bacc += d;
                        for (int p = 0; p < K; ++p) {
                            for (int q = 0; q < K; ++q) {
                                gk[p * K + q] +=
                                    d * inv_batch *
                                    static_cast<T>(x[static_cast<size_t>(
                                        (j + p) * spec.input_w + (k + q))]);
                            }
                        }
                    }
                }
                gb1[f] += bacc * inv_batch;
            }
        }
    }
    res.loss *= inv_batch;
    return res;
}

template <class T>
T batch_loss(const ModelSpec& spec, std::span<const T> params, const Dataset& data,
             std::span<const int> batch) {
    if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
    auto layout = param_layout(spec);
    T loss = T(0);
    std::vector<T> probs(static_cast<size_t>(spec.output_dim()));
    if (spec.arch == Arch::mlp) {
        detail::MlpWork<T> w;
        for (int si : batch) {
            detail::mlp_forward(spec, params, layout, data.sample(static_cast<size_t>(si)), w);
            loss += detail::softmax_ce<T>(w.a.back(), data.labels[static_cast<size_t>(si)], probs);
        }
    } else {
        detail::CnnWork<T> w;
        for (int si : batch) {
            detail::cnn_forward(spec, params, layout, data.sample(static_cast<size_t>(si)), w);
            loss += detail::softmax_ce<T>(w.z3, data.labels[static_cast<size_t>(si)], probs);
        }
    }
    return loss / static_cast<T>(batch.size());
}

}  // namespace approxfl
