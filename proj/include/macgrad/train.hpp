#pragma once

#include <iosfwd>
#include <string>

#include "macgrad/config.hpp"
#include "macgrad/data.hpp"
#include "macgrad/nn.hpp"

namespace macgrad {

struct DataSplit {
    data::Dataset train, test;
};

// Loads, subsets and (optionally) standardises the configured dataset, then
// lays examples out for the model (`input_layout`).
DataSplit load_data(const RunConfig& cfg);

nn::Sequential make_model(const RunConfig& cfg, const data::Dataset& train);

// Cosine: lr * 0.5 * (1 + cos(pi * k / total)), k counted from 0.
double scheduled_lr(const RunConfig& cfg, long k, long total);

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};
EvalResult evaluate(nn::Sequential& model, const data::Dataset& ds, std::size_t batch_size = 512);

struct RunSummary {
    std::string optimizer;
    long steps = 0;
    double final_train_loss = 0.0;
    double test_acc = 0.0;
    double train_ms = 0.0;  // optimisation loop only, evaluation excluded
    std::size_t peak_state_bytes = 0;
    // training inputs: |x_bar|^2, lambda_max(X^T X) and their ratio
    double mean_norm_sq = 0.0, lambda_max = 0.0, mean_ratio = 0.0;
};

// Trains according to `cfg`, writing metrics.jsonl, config.txt, summary.json
// and (unless disabled) checkpoint.bin under cfg.out_dir. Progress lines go
// to `log` when given. Throws NumericError when the loss or an update becomes
// non-finite or a curvature factor cannot be inverted.
RunSummary run_training(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace macgrad
