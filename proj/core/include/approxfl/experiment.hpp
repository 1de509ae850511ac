#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "approxfl/bounds.hpp"
#include "approxfl/channel.hpp"
#include "approxfl/config.hpp"
#include "approxfl/dataset.hpp"
#include "approxfl/link.hpp"
#include "approxfl/model.hpp"
#include "approxfl/modem.hpp"

namespace approxfl {

// Full description of one federated run. Two runs with an identical config
// produce byte-identical CSV output.
struct ExperimentConfig {
    // fl.*
    int clients = 10;
    int rounds = 200;
    double lr = 0.01;
    std::string model = "mlp";
    int shards_per_client = 2;
    uint64_t seed = 1;
    int batch_size = 0;  // 0 = full local batch

    // model.*
    std::vector<int> hidden = {32};
    std::string activation = "relu";
    int conv_filters = 8;
    int conv_kernel = 5;

    // data.*
    std::string data_source = "synthetic";
    int train_per_class = 180;
    int test_per_class = 100;
    double noise_sigma = 0.25;
    std::string train_images, train_labels, test_images, test_labels;  // idx paths

    // channel.*
    double alpha = 3.0;
    double distance_m = 10.0;
    double tx_power = 1.0;
    double snr_db = 10.0;
    int block_len_bits = 648;

    // modem.*
    int order = 4;

    // link.*
    std::string strategy = "approximate";
    double code_rate = 0.5;
    int codeword_len = 648;
    int correct_capability = 7;
    int max_retries = 100;
    int interleaver_depth = 32;

    // out.*
    double symbol_rate_hz = 0.0;  // 0: airtime stays in symbols

    static ExperimentConfig from_config(const Config& cfg);

    ModelSpec model_spec(const Dataset& train) const;
    ChannelConfig channel_config(const Constellation& c) const;
    LinkStrategy link_strategy() const;
    Dataset make_train() const;
    Dataset make_test() const;
};

struct RoundReport {
    int round = 0;
    std::vector<uint64_t> client_raw_errors;
    std::vector<uint64_t> client_residual_errors;
    uint64_t symbols_used = 0;         // summed over clients, this round
    uint64_t cum_airtime_symbols = 0;  // non-decreasing
    double accuracy = 0.0;
    double loss = 0.0;

    uint64_t raw_total() const;
    uint64_t residual_total() const;
};

struct RunResult {
    std::string strategy;
    std::vector<RoundReport> rounds;
    bool aborted = false;
    std::string abort_reason;
    uint64_t sanitized_local_values = 0;  // non-finite local grads zeroed before encoding
    double final_accuracy() const { return rounds.empty() ? 0.0 : rounds.back().accuracy; }
};

RunResult run_experiment(const ExperimentConfig& cfg);

// Runs ecrt, naive and approximate with the same master seed.
std::vector<RunResult> run_all_strategies(const ExperimentConfig& cfg);

// Cumulative airtime of the first round whose accuracy reaches the target.
std::optional<uint64_t> time_to_target(const RunResult& run, double target_accuracy);

// Modulation comparison suite: the approximate strategy at equal SNR
// (10 dB for every order) and at equal BER (QPSK 10 dB, 16-QAM 16 dB,
// 256-QAM 26 dB), each over n_seeds master seeds. Runs use an identity
// interleaver so label-bit significance stays aligned with word-bit
// significance.
struct Fig4Run {
    int order = 4;
    double snr_db = 10.0;
    uint64_t seed = 0;
    double measured_ber = 0.0;
    RunResult run;
};
struct Fig4Result {
    std::vector<Fig4Run> same_snr;
    std::vector<Fig4Run> same_ber;
};
Fig4Result run_modulation_suite(const ExperimentConfig& base, int n_seeds = 3);

// CSV emitters. All floating-point fields are printed with a fixed format so
// identical runs give identical bytes.
void write_rounds_csv(const std::string& path, const RunResult& run);
void write_accuracy_vs_airtime_csv(const std::string& path, const std::vector<RunResult>& runs);
void write_fig4_csv(const std::string& path, const std::vector<Fig4Run>& runs);
void write_ber_csv(const std::string& path,
                   const std::vector<std::pair<std::string, BerPoint>>& rows);
void write_bound_report_csv(const std::string& path, const BoundReport& report);

std::string format_number(double v);  // deterministic %.6g; "nan" when not finite

}  // namespace approxfl
