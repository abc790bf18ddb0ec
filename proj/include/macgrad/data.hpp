#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "macgrad/tensor.hpp"

namespace macgrad::data {

struct Dataset {
    Tensor x;                 // [n, ...] per-example features
    std::vector<int> labels;  // class labels (empty for regression targets)
    std::size_t classes = 0;
    Tensor mean, stddev;      // per-feature normalisation applied, if any

    std::size_t size() const { return x.rank() ? x.dim(0) : 0; }
    Shape example_shape() const { return Shape(x.shape().begin() + 1, x.shape().end()); }
    std::size_t features() const { return size() ? x.size() / size() : 0; }
    // [n x features] view
    Tensor flat() const { return x.reshaped({size(), features()}); }
};

// IDX pair (images 0x00000803, labels 0x00000801). Files ending in .gz are
// decompressed transparently. Pixels are scaled to [0, 1]; images keep a
// leading channel axis: [n, 1, rows, cols].
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);
// Parsers over in-memory bytes, reported offsets refer to `bytes`.
Tensor parse_idx_images(const std::vector<std::uint8_t>& bytes);
std::vector<int> parse_idx_labels(const std::vector<std::uint8_t>& bytes);

// Whole file, gunzipped when the name ends in .gz.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// CSV with a header row. `label_column` (by name) holds integer class labels;
// all other columns are parsed as float64 features.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);

// Gaussian blobs with unit-variance noise around class means whose pairwise
// distances are at least `margin`. Class counts differ by at most one.
Dataset synth_blobs(std::size_t n, std::size_t d, std::size_t classes, std::uint64_t seed, double margin = 4.0);
// Two interleaved half circles with Gaussian noise, two classes.
Dataset synth_two_moons(std::size_t n, double noise, std::uint64_t seed);

// Per-feature standardisation fitted on `train` and applied to both.
// Features with variance below 1e-16 are centred only.
void standardize(Dataset& train, Dataset* test);
void apply_normalization(Dataset& ds, const Tensor& mean, const Tensor& stddev);

Dataset take(const Dataset& ds, std::size_t count);
Dataset select(const Dataset& ds, const std::vector<std::size_t>& rows);
// Reshapes every example to `shape` (same element count).
void reshape_examples(Dataset& ds, const Shape& shape);

// Deterministic minibatch order for one epoch.
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::size_t epoch);

}  // namespace macgrad::data
