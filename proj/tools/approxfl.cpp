// approxfl: federated-learning uplink simulator CLI.
//
// Subcommands: run (federated experiment, CSV reports), fig4 (modulation
// comparison suite), sweep-ber / modem ber (Monte-Carlo BER), table1 / modem
// table1 (Gray-coded 16-QAM MSB/LSB error counts), bounds (gradient bound
// verification), codec roundtrip (bit-level float diagnostics).

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "approxfl/bitcodec.hpp"
#include "approxfl/bounds.hpp"
#include "approxfl/experiment.hpp"
#include "approxfl/link.hpp"
#include "approxfl/modem.hpp"

namespace fs = std::filesystem;
using namespace approxfl;

namespace {

ExperimentConfig load_experiment(const std::string& config_path) {
    if (config_path.empty()) return ExperimentConfig{};
    return ExperimentConfig::from_config(Config::parse_file(config_path));
}

std::vector<double> parse_snr_list(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

void print_word(const char* tag, uint32_t w) {
    std::printf("%s: 0x%08X  ", tag, w);
    for (int i = 0; i < 32; ++i) {
        std::printf("%u", (w >> (31 - i)) & 1u);
        if (i == 0 || i == 8) std::printf(" ");
    }
    std::printf("  value=%.9g\n", static_cast<double>(word_to_float(w)));
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_experiment(config_path);
    fs::create_directories(out_dir);

    std::vector<RunResult> runs;
    if (cfg.strategy == "all") {
        runs = run_all_strategies(cfg);
    } else {
        runs.push_back(run_experiment(cfg));
    }
    for (const auto& run : runs) {
        std::string path = out_dir + "/rounds_" + run.strategy + ".csv";
        write_rounds_csv(path, run);
        std::printf("%s: %zu rounds, final accuracy %s%s\n", run.strategy.c_str(),
                    run.rounds.size(), format_number(run.final_accuracy()).c_str(),
                    run.aborted ? " (aborted)" : "");
        if (run.aborted) std::printf("  %s\n", run.abort_reason.c_str());
    }
    write_accuracy_vs_airtime_csv(out_dir + "/fig3_accuracy_vs_time.csv", runs);
    std::printf("wrote %s/fig3_accuracy_vs_time.csv\n", out_dir.c_str());
    return 0;
}

int cmd_fig4(const std::string& config_path, const std::string& out_dir, int seeds) {
    ExperimentConfig cfg = load_experiment(config_path);
    fs::create_directories(out_dir);
    Fig4Result result = run_modulation_suite(cfg, seeds);
    write_fig4_csv(out_dir + "/fig4a_same_snr.csv", result.same_snr);
    write_fig4_csv(out_dir + "/fig4b_same_ber.csv", result.same_ber);
    for (const auto& fr : result.same_ber) {
        std::printf("same-ber %-6s snr=%sdB seed=%" PRIu64 " measured_ber=%s final_acc=%s\n",
                    Constellation::build(fr.order).name().c_str(),
                    format_number(fr.snr_db).c_str(), fr.seed,
                    format_number(fr.measured_ber).c_str(),
                    format_number(fr.run.final_accuracy()).c_str());
    }
    std::printf("wrote %s/fig4a_same_snr.csv and fig4b_same_ber.csv\n", out_dir.c_str());
    return 0;
}

int cmd_ber(const std::string& mods, const std::string& snr_csv, uint64_t bits, uint64_t seed,
            const std::string& out_dir) {
    std::vector<double> snrs = parse_snr_list(snr_csv);
    std::vector<std::pair<std::string, BerPoint>> rows;
    size_t pos = 0;
    while (pos <= mods.size()) {
        size_t next = mods.find(',', pos);
        if (next == std::string::npos) next = mods.size();
        std::string mod = mods.substr(pos, next - pos);
        pos = next + 1;
        if (mod.empty()) continue;
        Constellation c = Constellation::build(constellation_order_from_name(mod));
        for (const auto& point : ber_sweep(c, snrs, bits, seed)) {
            rows.emplace_back(c.name(), point);
        }
    }
    std::printf("modulation,snr_db,ber\n");
    for (const auto& [mod, point] : rows) {
        std::printf("%s,%s,%s\n", mod.c_str(), format_number(point.snr_db).c_str(),
                    format_number(point.ber).c_str());
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_ber_csv(out_dir + "/ber_sweep.csv", rows);
    }
    return 0;
}

int cmd_table1() {
    Constellation c = Constellation::build(16);
    std::printf("symbol,neighbors,msb_errors,lsb_errors\n");
    for (const auto& row : msb_lsb_error_table(c, 1)) {
        std::string neigh;
        for (size_t i = 0; i < row.neighbors.size(); ++i) {
            if (i) neigh += " ";
            neigh += "s" + std::to_string(row.neighbors[i]);
        }
        std::printf("s%d,%s,%d,%d\n", row.symbol, neigh.c_str(), row.msb_errors, row.lsb_errors);
    }
    return 0;
}

int cmd_bounds(const std::string& model, int trials, uint64_t seed, const std::string& out_dir) {
    ModelSpec spec;
    if (model == "mlp") {
        spec = ModelSpec::mlp_spec({64, 16, 16, 10}, Activation::sigmoid);
    } else if (model == "cnn") {
        spec = ModelSpec::cnn_spec(8, 8, 5, 1, 10, Activation::sigmoid);
    } else {
        std::fprintf(stderr, "bounds: model must be mlp or cnn\n");
        return 2;
    }
    BoundReport report = check_empirical(spec, trials, seed);
    std::printf("%s", bound_report_header().c_str());
    std::printf("trials=%zu delta_range=[%s, %s] delta_in_unit=%d frac_grads_in_unit=%s\n",
                report.trials, format_number(report.delta_min).c_str(),
                format_number(report.delta_max).c_str(), report.delta_in_unit ? 1 : 0,
                format_number(report.frac_grads_in_unit).c_str());
    std::printf("layer,product_bound,sum_bound,observed_max\n");
    for (const auto& lb : report.layers) {
        std::printf("%s,%s,%s,%s\n", lb.layer.c_str(), format_number(lb.product_bound).c_str(),
                    format_number(lb.sum_bound).c_str(), format_number(lb.observed_max).c_str());
    }
    std::printf("violations=%d\n", report.violations ? 1 : 0);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_bound_report_csv(out_dir + "/bound_report.csv", report);
    }
    return report.violations ? 1 : 0;
}

int cmd_codec_roundtrip(float value) {
    GradientTensor g{{value}, 0, 0};
    BitFrame frame = encode_gradients(g);
    uint32_t w = float_to_word(value);
    print_word("encoded", w);
    print_word("clamped", clamp_word(w));
    GradientTensor back = decode_with_clamp(frame);
    std::printf("decode_with_clamp=%.9g decode_naive=%.9g\n",
                static_cast<double>(back.values[0]),
                static_cast<double>(decode_naive(frame).values[0]));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"federated learning over a lossy wireless uplink: simulator and reports"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";

    auto* run = app.add_subcommand("run", "run a federated experiment and emit CSV reports");
    run->add_option("--config", config_path, "experiment config file");
    run->add_option("--out", out_dir, "output directory");

    auto* fig4 = app.add_subcommand("fig4", "modulation comparison suite (same SNR / same BER)");
    int fig4_seeds = 3;
    fig4->add_option("--config", config_path, "experiment config file");
    fig4->add_option("--out", out_dir, "output directory");
    fig4->add_option("--seeds", fig4_seeds, "number of master seeds");

    std::string mods = "qpsk";
    std::string snr_csv = "0,5,10,15,20,25,30";
    uint64_t ber_bits = 1000000, ber_seed = 1;
    std::string ber_out;
    auto* sweep = app.add_subcommand("sweep-ber", "Monte-Carlo BER sweep, CSV to stdout");
    sweep->add_option("--mod", mods, "comma list of qpsk,qam16,qam256");
    sweep->add_option("--snr-db", snr_csv, "comma list of SNR points in dB");
    sweep->add_option("--bits", ber_bits, "bits per point");
    sweep->add_option("--seed", ber_seed, "rng seed");
    sweep->add_option("--out", ber_out, "also write ber_sweep.csv here");

    auto* table1 = app.add_subcommand("table1", "16-QAM Gray-coding MSB/LSB error counts");

    std::string bounds_model = "mlp";
    int bounds_trials = 10000;
    uint64_t bounds_seed = 1;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds", "randomized gradient-bound verification");
    bounds->add_option("--model", bounds_model, "mlp or cnn");
    bounds->add_option("--trials", bounds_trials, "random trials");
    bounds->add_option("--seed", bounds_seed, "rng seed");
    bounds->add_option("--out", bounds_out, "also write bound_report.csv here");

    auto* codec = app.add_subcommand("codec", "bit-level float codec diagnostics");
    codec->require_subcommand(1);
    float codec_value = 1.0f;
    auto* roundtrip = codec->add_subcommand("roundtrip", "print a value's bits before/after clamp");
    roundtrip->add_option("--value", codec_value, "float value")->required();

    auto* modem = app.add_subcommand("modem", "modem diagnostics");
    modem->require_subcommand(1);
    auto* modem_ber = modem->add_subcommand("ber", "Monte-Carlo BER, CSV to stdout");
    std::string m_mod = "qpsk", m_snr = "10,20";
    uint64_t m_bits = 1000000, m_seed = 1;
    modem_ber->add_option("--mod", m_mod, "qpsk, qam16 or qam256 (comma list)");
    modem_ber->add_option("--snr-db", m_snr, "comma list of SNR points in dB");
    modem_ber->add_option("--bits", m_bits, "bits per point");
    modem_ber->add_option("--seed", m_seed, "rng seed");
    auto* modem_table1 = modem->add_subcommand("table1", "same as the top-level table1");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (fig4->parsed()) return cmd_fig4(config_path, out_dir, fig4_seeds);
        if (sweep->parsed()) return cmd_ber(mods, snr_csv, ber_bits, ber_seed, ber_out);
        if (table1->parsed()) return cmd_table1();
        if (bounds->parsed()) return cmd_bounds(bounds_model, bounds_trials, bounds_seed, bounds_out);
        if (codec->parsed() && roundtrip->parsed()) return cmd_codec_roundtrip(codec_value);
        if (modem->parsed()) {
            if (modem_table1->parsed()) return cmd_table1();
            if (modem_ber->parsed()) return cmd_ber(m_mod, m_snr, m_bits, m_seed, "");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
