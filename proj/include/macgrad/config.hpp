#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "macgrad/optimizer.hpp"

namespace macgrad {

// Text format: one `key = value` per line, '#' starts a comment. Unknown
// keys, duplicates and malformed values are rejected with the line number.
//
// Selecting `optimizer` loads that method's profile; other optimizer keys in
// the same document override the profile regardless of their position.
struct RunConfig {
    // model
    std::string model = "linear:32, relu, linear:3";
    std::string input_layout = "auto";  // auto | image | flat | rows

    // data
    std::string dataset = "blobs";  // mnist | fashion-mnist | idx | csv | blobs | moons
    std::string data_dir = "data";
    std::string train_images, train_labels, test_images, test_labels;  // dataset = idx
    std::string csv_train, csv_test, csv_label = "label";              // dataset = csv
    long train_subset = 0;  // 0 = all
    long test_subset = 0;
    bool standardize = true;
    long synth_n = 1000, synth_test_n = 200, synth_d = 8, synth_classes = 3;
    double synth_margin = 4.0, moons_noise = 0.1;

    // optimisation
    OptimizerConfig opt = OptimizerConfig::profile("mac");
    long epochs = 3;
    long batch_size = 128;
    std::string lr_schedule = "cosine";  // constant | cosine
    long max_steps = 0;                  // 0 = no cap
    // Seed the first block's MAC factor from the full training-set input mean.
    bool first_layer_mean = false;
    std::uint64_t seed = 0;
    std::string out_dir = "runs/default";
    bool checkpoint = true;

    void validate() const;  // throws ConfigError
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

using ConfigOverrides = std::map<std::string, std::string>;

RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});
// Every key, fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

}  // namespace macgrad
