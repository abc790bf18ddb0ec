#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "macgrad/config.hpp"
#include "macgrad/convergence.hpp"

namespace macgrad {

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumeric = 3 };

struct TrainArgs {
    std::string config_path;  // empty: built-in defaults
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> optimizer;
    std::optional<long> epochs;
    std::vector<std::string> sets;  // key=value
};

ConfigOverrides build_overrides(const TrainArgs& a);

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err);

struct SpectraArgs {
    std::string checkpoint;
    std::string batch_source = "train";  // train | test
    std::size_t batch_size = 512;
    std::size_t top_k = 20;
    long epoch = 0;
    std::string out = "report.jsonl";
    std::vector<std::string> sets;
};

int cmd_spectra(const SpectraArgs& a, std::ostream& out, std::ostream& err);

struct ConvlabArgs {
    HarnessConfig harness;
    long seeds = 5;
    std::string out = "trace.jsonl";
};

int cmd_convlab(const ConvlabArgs& a, std::ostream& out, std::ostream& err);

struct RunRow {
    std::string dir, optimizer;
    long steps = 0;
    double final_train_loss = 0.0, test_acc = 0.0, train_ms = 0.0;
    std::size_t peak_state_bytes = 0;
};

RunRow read_run(const std::string& dir);
// Aligned table; time and memory are relative to the first run.
std::string compare_table(const std::vector<RunRow>& rows);
int cmd_compare(const std::vector<std::string>& dirs, std::ostream& out, std::ostream& err);

}  // namespace macgrad
