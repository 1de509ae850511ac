#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace approxfl {

struct Dataset {
    int height = 0;
    int width = 0;
    int n_classes = 0;
    std::vector<float> pixels;  // size() * height * width, row-major per sample
    std::vector<int> labels;

    size_t size() const { return labels.size(); }
    int dim() const { return height * width; }
    std::span<const float> sample(size_t i) const {
        return {pixels.data() + i * static_cast<size_t>(dim()), static_cast<size_t>(dim())};
    }
};

// Built-in 8x8 grayscale digit generator: fixed glyph templates plus a random
// +-1 pixel shift and Gaussian pixel noise, clipped to [0, 1]. Balanced
// across the 10 classes and deterministic given the seed.
Dataset synthetic_digits(int per_class, uint64_t seed, float noise_sigma = 0.25f);

// IDX-format loaders (big-endian, magic 0x803 for images / 0x801 for labels).
Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path);

struct ClientShard {
    std::vector<int> indices;
    double weight = 0.0;        // |D_m| / |D|
    std::vector<int> classes;   // label classes present in this shard
};

// Label-sorted shard partition: every client receives samples from exactly
// shards_per_client classes (n_clients == 1 degenerates to the full dataset).
// Deterministic given the seed; shards are disjoint and cover the dataset.
std::vector<ClientShard> partition_noniid(const Dataset& data, int n_clients,
                                          int shards_per_client, uint64_t seed);

}  // namespace approxfl
