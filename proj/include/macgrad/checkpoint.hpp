#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "macgrad/nn.hpp"
#include "macgrad/optimizer.hpp"

namespace macgrad {

// --- binary container v1 --------------------------------------------------------
// "MACGRADC" magic, u32 version, u32 section count, then per section:
// string tag, u64 payload length, payload bytes, u32 CRC32 of the payload.

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Section {
    std::string tag;
    std::string payload;
};

void write_container(const std::filesystem::path& path, const std::vector<Section>& sections);
// Throws ParseError on bad magic, unsupported version, truncation or CRC mismatch.
std::vector<Section> read_container(const std::filesystem::path& path);

// Model (layer spec, input shape, parameters), optimizer state and the run
// configuration text.
void checkpoint_save(const std::filesystem::path& path, const std::string& config_text, nn::Sequential& model,
                     const Optimizer* opt);

struct LoadedCheckpoint {
    std::string config_text;
    std::string model_spec;
    Shape input_shape;
};

// Reads only the header sections (config and architecture).
LoadedCheckpoint checkpoint_info(const std::filesystem::path& path);
// Restores parameters into `model` and, when given, state into `opt`. The
// model must have the stored architecture; a different optimizer method
// raises StateError.
LoadedCheckpoint checkpoint_load(const std::filesystem::path& path, nn::Sequential& model, Optimizer* opt);

// --- metrics -------------------------------------------------------------------

struct MetricsRecord {
    std::string kind = "step";  // step | epoch | final
    long step = 0;
    long epoch = 0;
    double train_loss = 0.0;
    std::optional<double> test_acc;
    double wall_ms = 0.0;
    std::vector<BlockBytes> state_bytes;
    double lr = 0.0;
};

std::string metrics_json(const MetricsRecord& r);

class MetricsWriter {
public:
    explicit MetricsWriter(const std::filesystem::path& path);
    void write(const MetricsRecord& r);

private:
    std::ofstream out_;
    long last_step_ = -1;
};

}  // namespace macgrad
