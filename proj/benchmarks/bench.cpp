#include <benchmark/benchmark.h>

#include <numeric>

#include "approxfl/bitcodec.hpp"
#include "approxfl/channel.hpp"
#include "approxfl/dataset.hpp"
#include "approxfl/link.hpp"
#include "approxfl/model.hpp"
#include "approxfl/modem.hpp"
#include "approxfl/rng.hpp"

using namespace approxfl;

namespace {

BitFrame random_frame(size_t len, uint64_t seed) {
    BitFrame f;
    f.bits.resize(len);
    f.payload_len_bits = len;
    Rng rng(seed);
    for (auto& b : f.bits) b = static_cast<uint8_t>(rng.bit());
    return f;
}

void BM_Interleave(benchmark::State& state) {
    BitFrame f = random_frame(static_cast<size_t>(state.range(0)), 1);
    InterleaverSpec spec{32, f.bits.size()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(interleave(f, spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Interleave)->Arg(77120);

void BM_EncodeGradients(benchmark::State& state) {
    GradientTensor g;
    g.values.resize(static_cast<size_t>(state.range(0)));
    Rng rng(2);
    for (auto& v : g.values) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode_gradients(g));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeGradients)->Arg(2410);

void BM_ModulateDetect(benchmark::State& state) {
    Constellation c = Constellation::build(static_cast<int>(state.range(0)));
    BitFrame f = random_frame(65536, 3);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 324;
    uint64_t seed = 4;
    for (auto _ : state) {
        SymbolStream sym = modulate(f, c);
        Rng rng(seed);
        ChannelOutput rx = transmit(sym.symbols, ch, rng);
        benchmark::DoNotOptimize(demodulate(rx, f.bits.size(), c));
    }
    state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(BM_ModulateDetect)->Arg(4)->Arg(16)->Arg(256);

void BM_SendApproximate(benchmark::State& state) {
    Constellation c = Constellation::build(4);
    BitFrame f = random_frame(77120, 5);
    ChannelConfig ch;
    ch.snr_db = 10.0;
    ch.block_len_symbols = 324;
    LinkStrategy st;
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(send_approximate(f, c, ch, st, seed++));
    }
    state.SetItemsProcessed(state.iterations() * 77120);
}
BENCHMARK(BM_SendApproximate);

void BM_ForwardBackward(benchmark::State& state) {
    Dataset d = synthetic_digits(18, 6);
    bool cnn = state.range(0) != 0;
    ModelSpec spec = cnn ? ModelSpec::cnn_spec(8, 8, 5, 8, 10, Activation::relu)
                         : ModelSpec::mlp_spec({64, 32, 10}, Activation::relu);
    auto params = init_params(spec, 7);
    std::vector<int> batch(d.size());
    std::iota(batch.begin(), batch.end(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward_backward<float>(spec, params, d, batch));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.size()));
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
