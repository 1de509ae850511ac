#include "approxfl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "approxfl/fed.hpp"
#include "approxfl/rng.hpp"

namespace approxfl {

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig e;
    e.clients = cfg.get_int("fl.clients", e.clients);
    e.rounds = cfg.get_int("fl.rounds", e.rounds);
    e.lr = cfg.get_double("fl.lr", e.lr);
    e.model = cfg.get("fl.model", e.model);
    e.shards_per_client = cfg.get_int("fl.shards_per_client", e.shards_per_client);
    e.seed = cfg.get_u64("fl.seed", e.seed);
    e.batch_size = cfg.get_int("fl.batch_size", e.batch_size);

    e.hidden = cfg.get_int_list("model.hidden", e.hidden);
    e.activation = cfg.get("model.activation", e.activation);
    e.conv_filters = cfg.get_int("model.conv_filters", e.conv_filters);
    e.conv_kernel = cfg.get_int("model.conv_kernel", e.conv_kernel);

    e.data_source = cfg.get("data.source", e.data_source);
    e.train_per_class = cfg.get_int("data.train_per_class", e.train_per_class);
    e.test_per_class = cfg.get_int("data.test_per_class", e.test_per_class);
    e.noise_sigma = cfg.get_double("data.noise_sigma", e.noise_sigma);
    e.train_images = cfg.get("data.train_images", e.train_images);
    e.train_labels = cfg.get("data.train_labels", e.train_labels);
    e.test_images = cfg.get("data.test_images", e.test_images);
    e.test_labels = cfg.get("data.test_labels", e.test_labels);

    e.alpha = cfg.get_double("channel.alpha", e.alpha);
    e.distance_m = cfg.get_double("channel.distance_m", e.distance_m);
    e.tx_power = cfg.get_double("channel.tx_power", e.tx_power);
    e.snr_db = cfg.get_double("channel.snr_db", e.snr_db);
    e.block_len_bits = cfg.get_int("channel.block_len_bits", e.block_len_bits);

    e.order = cfg.get_int("modem.order", e.order);

    e.strategy = cfg.get("link.strategy", e.strategy);
    e.code_rate = cfg.get_double("link.code_rate", e.code_rate);
    e.codeword_len = cfg.get_int("link.codeword_len", e.codeword_len);
    e.correct_capability = cfg.get_int("link.correct_capability", e.correct_capability);
    e.max_retries = cfg.get_int("link.max_retries", e.max_retries);
    e.interleaver_depth = cfg.get_int("link.interleaver_depth", e.interleaver_depth);

    e.symbol_rate_hz = cfg.get_double("out.symbol_rate_hz", e.symbol_rate_hz);

    cfg.check_all_consumed();
    return e;
}

ModelSpec ExperimentConfig::model_spec(const Dataset& train) const {
    Activation act = activation_from_name(activation);
    if (model == "mlp") {
        std::vector<int> sizes;
        sizes.push_back(train.dim());
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        sizes.push_back(train.n_classes);
        return ModelSpec::mlp_spec(std::move(sizes), act);
    }
    if (model == "cnn") {
        return ModelSpec::cnn_spec(train.height, train.width, conv_kernel, conv_filters,
                                   train.n_classes, act);
    }
    throw std::invalid_argument("unknown model: " + model);
}

ChannelConfig ExperimentConfig::channel_config(const Constellation& c) const {
    ChannelConfig ch;
    ch.path_loss_exponent = alpha;
    ch.distance_m = distance_m;
    ch.tx_power = tx_power;
    ch.snr_db = snr_db;
    ch.block_len_symbols = std::max<size_t>(
        1, static_cast<size_t>(block_len_bits) / static_cast<size_t>(c.bits_per_symbol()));
    ch.validate();
    return ch;
}

LinkStrategy ExperimentConfig::link_strategy() const {
    LinkStrategy st;
    st.kind = strategy_from_name(strategy);
    st.code_rate = code_rate;
    st.codeword_len = codeword_len;
    st.correct_capability = correct_capability;
    st.max_retries = max_retries;
    st.interleaver_depth = interleaver_depth;
    st.validate();
    return st;
}

Dataset ExperimentConfig::make_train() const {
    if (data_source == "synthetic") {
        return synthetic_digits(train_per_class, derive_seed(seed, Stream::train_data),
                                static_cast<float>(noise_sigma));
    }
    if (data_source == "idx") {
        return load_idx_dataset(train_images, train_labels);
    }
    throw std::invalid_argument("unknown data source: " + data_source);
}

Dataset ExperimentConfig::make_test() const {
    if (data_source == "synthetic") {
        return synthetic_digits(test_per_class, derive_seed(seed, Stream::test_data),
                                static_cast<float>(noise_sigma));
    }
    return load_idx_dataset(test_images, test_labels);
}

uint64_t RoundReport::raw_total() const {
    return std::accumulate(client_raw_errors.begin(), client_raw_errors.end(), uint64_t{0});
}

uint64_t RoundReport::residual_total() const {
    return std::accumulate(client_residual_errors.begin(), client_residual_errors.end(),
                           uint64_t{0});
}

namespace {

std::vector<int> round_batch(const ClientShard& shard, const ExperimentConfig& cfg, int round,
                             int client) {
    if (cfg.batch_size <= 0 || static_cast<size_t>(cfg.batch_size) >= shard.indices.size()) {
        return shard.indices;
    }
    std::vector<int> idx = shard.indices;
    Rng rng(derive_seed(cfg.seed, Stream::batch, static_cast<uint64_t>(round),
                        static_cast<uint64_t>(client)));
    rng.shuffle(idx.begin(), idx.end());
    idx.resize(static_cast<size_t>(cfg.batch_size));
    return idx;
}

GradientTensor decode_for(StrategyKind kind, const BitFrame& delivered) {
    if (kind == StrategyKind::approximate) return decode_with_clamp(delivered);
    return decode_naive(delivered);  // ecrt bits are exact; naive is taken as-is
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    Dataset train = cfg.make_train();
    Dataset test = cfg.make_test();
    auto shards = partition_noniid(train, cfg.clients, cfg.shards_per_client,
                                   derive_seed(cfg.seed, Stream::partition));
    ModelSpec spec = cfg.model_spec(train);
    std::vector<float> params = init_params(spec, derive_seed(cfg.seed, Stream::model_init));

    Constellation cons = Constellation::build(cfg.order);
    ChannelConfig ch = cfg.channel_config(cons);
    LinkStrategy st = cfg.link_strategy();

    std::vector<double> weights(shards.size());
    for (size_t m = 0; m < shards.size(); ++m) weights[m] = shards[m].weight;

    RunResult res;
    res.strategy = strategy_name(st.kind);
    uint64_t cum_airtime = 0;

    for (int t = 0; t < cfg.rounds; ++t) {
        RoundReport rep;
        rep.round = t;
        std::vector<GradientTensor> received;
        received.reserve(shards.size());
        double loss_acc = 0.0;
        bool loss_finite = true;

        try {
            for (int m = 0; m < cfg.clients; ++m) {
                auto batch = round_batch(shards[static_cast<size_t>(m)], cfg, t, m);
                auto fb = forward_backward<float>(spec, params, train, batch);
                if (std::isfinite(fb.loss) && loss_finite) {
                    loss_acc += weights[static_cast<size_t>(m)] * static_cast<double>(fb.loss);
                } else {
                    loss_finite = false;
                }

                GradientTensor local{std::move(fb.grad), m, t};
                for (auto& v : local.values) {
                    if (!std::isfinite(v)) {
                        v = 0.0f;
                        res.sanitized_local_values++;
                    }
                }

                BitFrame frame = encode_gradients(local);
                uint64_t link_seed = derive_seed(cfg.seed, Stream::link, static_cast<uint64_t>(t),
                                                 static_cast<uint64_t>(m));
                TransmissionOutcome out = send(st, frame, cons, ch, link_seed);

                GradientTensor g = decode_for(st.kind, out.delivered);
                g.client_id = m;
                g.round = t;
                received.push_back(std::move(g));

                rep.client_raw_errors.push_back(out.raw_bit_errors);
                rep.client_residual_errors.push_back(out.residual_bit_errors);
                rep.symbols_used += out.symbols_used;
            }
        } catch (const LinkFailure& e) {
            res.aborted = true;
            res.abort_reason = e.what();
            break;  // completed rounds stay reported
        }

        std::vector<float> agg = aggregate(received, weights);
        apply_update(params, agg, static_cast<float>(cfg.lr));

        cum_airtime += rep.symbols_used;
        rep.cum_airtime_symbols = cum_airtime;
        rep.accuracy = evaluate(spec, params, test);
        rep.loss = loss_finite ? loss_acc : std::nan("");
        res.rounds.push_back(std::move(rep));
    }
    return res;
}

std::vector<RunResult> run_all_strategies(const ExperimentConfig& cfg) {
    std::vector<RunResult> out;
    for (const char* s : {"ecrt", "naive", "approximate"}) {
        ExperimentConfig c = cfg;
        c.strategy = s;
        out.push_back(run_experiment(c));
    }
    return out;
}

std::optional<uint64_t> time_to_target(const RunResult& run, double target_accuracy) {
    for (const auto& rep : run.rounds) {
        if (rep.accuracy >= target_accuracy) return rep.cum_airtime_symbols;
    }
    return std::nullopt;
}

Fig4Result run_modulation_suite(const ExperimentConfig& base, int n_seeds) {
    struct Point {
        int order;
        double snr_db;
    };
    const Point same_snr[] = {{4, 10.0}, {16, 10.0}, {256, 10.0}};
    const Point same_ber[] = {{4, 10.0}, {16, 16.0}, {256, 26.0}};

    Fig4Result result;
    auto run_points = [&](const Point* points, std::vector<Fig4Run>& out) {
        for (int p = 0; p < 3; ++p) {
            Constellation cons = Constellation::build(points[p].order);
            for (int s = 0; s < n_seeds; ++s) {
                ExperimentConfig cfg = base;
                cfg.order = points[p].order;
                cfg.snr_db = points[p].snr_db;
                cfg.strategy = "approximate";
                cfg.interleaver_depth = 1;
                cfg.seed = base.seed + static_cast<uint64_t>(s);

                Fig4Run fr;
                fr.order = points[p].order;
                fr.snr_db = points[p].snr_db;
                fr.seed = cfg.seed;
                ChannelConfig ch = cfg.channel_config(cons);
                fr.measured_ber = ber_sweep(cons, {points[p].snr_db}, 400000,
                                            derive_seed(cfg.seed, Stream::ber), ch)[0].ber;
                fr.run = run_experiment(cfg);
                out.push_back(std::move(fr));
            }
        }
    };
    run_points(same_snr, result.same_snr);
    run_points(same_ber, result.same_ber);
    return result;
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_rounds_csv(const std::string& path, const RunResult& run) {
    auto out = open_out(path);
    out << "round,raw_bit_errors,residual_bit_errors,symbols_used,cum_airtime_symbols,"
           "accuracy,loss\n";
    for (const auto& rep : run.rounds) {
        out << rep.round << ',' << rep.raw_total() << ',' << rep.residual_total() << ','
            << rep.symbols_used << ',' << rep.cum_airtime_symbols << ','
            << format_number(rep.accuracy) << ',' << format_number(rep.loss) << '\n';
    }
    if (run.aborted) out << "# aborted: " << run.abort_reason << '\n';
}

void write_accuracy_vs_airtime_csv(const std::string& path, const std::vector<RunResult>& runs) {
    struct Row {
        uint64_t airtime;
        double accuracy;
        std::string strategy;
    };
    std::vector<Row> rows;
    for (const auto& run : runs) {
        for (const auto& rep : run.rounds) {
            rows.push_back({rep.cum_airtime_symbols, rep.accuracy, run.strategy});
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.airtime != b.airtime) return a.airtime < b.airtime;
        return a.strategy < b.strategy;
    });
    auto out = open_out(path);
    out << "airtime_symbols,accuracy,strategy\n";
    for (const auto& r : rows) {
        out << r.airtime << ',' << format_number(r.accuracy) << ',' << r.strategy << '\n';
    }
}

void write_fig4_csv(const std::string& path, const std::vector<Fig4Run>& runs) {
    auto out = open_out(path);
    out << "modulation,snr_db,seed,measured_ber,round,cum_airtime_symbols,accuracy\n";
    for (const auto& fr : runs) {
        std::string mod = Constellation::build(fr.order).name();
        for (const auto& rep : fr.run.rounds) {
            out << mod << ',' << format_number(fr.snr_db) << ',' << fr.seed << ','
                << format_number(fr.measured_ber) << ',' << rep.round << ','
                << rep.cum_airtime_symbols << ',' << format_number(rep.accuracy) << '\n';
        }
    }
}

void write_ber_csv(const std::string& path,
                   const std::vector<std::pair<std::string, BerPoint>>& rows) {
    auto out = open_out(path);
    out << "modulation,snr_db,ber\n";
    for (const auto& [mod, point] : rows) {
        out << mod << ',' << format_number(point.snr_db) << ',' << format_number(point.ber)
            << '\n';
    }
}

void write_bound_report_csv(const std::string& path, const BoundReport& report) {
    auto out = open_out(path);
    out << bound_report_header();
    out << "# trials=" << report.trials << " delta_min=" << format_number(report.delta_min)
        << " delta_max=" << format_number(report.delta_max)
        << " delta_in_unit=" << (report.delta_in_unit ? 1 : 0)
        << " frac_grads_in_unit=" << format_number(report.frac_grads_in_unit)
        << " assumptions_ok=" << (report.assumptions.all() ? 1 : 0)
        << " violations=" << (report.violations ? 1 : 0) << '\n';
    out << "layer,product_bound,sum_bound,observed_max\n";
    for (const auto& lb : report.layers) {
        out << lb.layer << ',' << format_number(lb.product_bound) << ','
            << format_number(lb.sum_bound) << ',' << format_number(lb.observed_max) << '\n';
    }
}

}  // namespace approxfl
