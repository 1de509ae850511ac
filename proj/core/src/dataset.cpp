#include "approxfl/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "approxfl/rng.hpp"

namespace approxfl {

namespace {

// 8x8 glyphs, '#' = ink. Distinct enough that a small classifier separates
// them, noisy enough per sample that it has to actually learn.
const std::array<std::array<const char*, 8>, 10> kGlyphs = {{
    {"..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.",
     "..####.."},
    {"...##...", "..###...", "...##...", "...##...", "...##...", "...##...", "...##...",
     "..####.."},
    {"..####..", ".#....#.", "......#.", ".....#..", "....#...", "...#....", "..#.....",
     ".######."},
    {"..####..", ".#....#.", "......#.", "...###..", "......#.", "......#.", ".#....#.",
     "..####.."},
    {"....##..", "...#.#..", "..#..#..", ".#...#..", ".######.", ".....#..", ".....#..",
     ".....#.."},
    {".######.", ".#......", ".#......", ".#####..", "......#.", "......#.", ".#....#.",
     "..####.."},
    {"..####..", ".#......", ".#......", ".#####..", ".#....#.", ".#....#.", ".#....#.",
     "..####.."},
    {".######.", "......#.", ".....#..", "....#...", "...#....", "...#....", "...#....",
     "...#...."},
    {"..####..", ".#....#.", ".#....#.", "..####..", ".#....#.", ".#....#.", ".#....#.",
     "..####.."},
    {"..####..", ".#....#.", ".#....#.", "..#####.", "......#.", "......#.", "......#.",
     "..####.."},
}};

float glyph_pixel(int digit, int r, int c) {
    if (r < 0 || r >= 8 || c < 0 || c >= 8) return 0.0f;
    return kGlyphs[static_cast<size_t>(digit)][static_cast<size_t>(r)][c] == '#' ? 1.0f : 0.0f;
}

uint32_t read_be32(std::ifstream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw std::runtime_error("idx: truncated header in " + path);
    }
    return (static_cast<uint32_t>(b[0]) << 24) | (static_cast<uint32_t>(b[1]) << 16) |
           (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

}  // namespace

Dataset synthetic_digits(int per_class, uint64_t seed, float noise_sigma) {
    if (per_class < 1) throw std::invalid_argument("synthetic_digits: per_class must be >= 1");
    Dataset d;
    d.height = 8;
    d.width = 8;
    d.n_classes = 10;
    size_t n = static_cast<size_t>(per_class) * 10;
    d.pixels.resize(n * 64);
    d.labels.resize(n);

    Rng rng(seed);
    size_t idx = 0;
    for (int digit = 0; digit < 10; ++digit) {
        for (int k = 0; k < per_class; ++k) {
            int dy = static_cast<int>(rng.below(3)) - 1;
            int dx = static_cast<int>(rng.below(3)) - 1;
            for (int r = 0; r < 8; ++r) {
                for (int c = 0; c < 8; ++c) {
                    float v = glyph_pixel(digit, r - dy, c - dx);
                    v += noise_sigma * static_cast<float>(rng.gaussian());
                    d.pixels[idx * 64 + static_cast<size_t>(r * 8 + c)] =
                        std::clamp(v, 0.0f, 1.0f);
                }
            }
            d.labels[idx] = digit;
            ++idx;
        }
    }
    return d;
}

Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("idx: cannot open " + images_path);
    if (read_be32(img, images_path) != 0x00000803u) {
        throw std::runtime_error("idx: bad image magic in " + images_path);
    }
    uint32_t n = read_be32(img, images_path);
    uint32_t rows = read_be32(img, images_path);
    uint32_t cols = read_be32(img, images_path);

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("idx: cannot open " + labels_path);
    if (read_be32(lab, labels_path) != 0x00000801u) {
        throw std::runtime_error("idx: bad label magic in " + labels_path);
    }
    uint32_t n_lab = read_be32(lab, labels_path);
    if (n != n_lab) throw std::runtime_error("idx: image/label count mismatch");

    Dataset d;
    d.height = static_cast<int>(rows);
    d.width = static_cast<int>(cols);
    size_t dim = static_cast<size_t>(rows) * cols;
    d.pixels.resize(static_cast<size_t>(n) * dim);
    d.labels.resize(n);

    std::vector<unsigned char> buf(dim);
    int max_label = 0;
    for (uint32_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim))) {
            throw std::runtime_error("idx: truncated image data in " + images_path);
        }
        for (size_t j = 0; j < dim; ++j) {
            d.pixels[i * dim + j] = static_cast<float>(buf[j]) / 255.0f;
        }
        char lb;
        if (!lab.get(lb)) throw std::runtime_error("idx: truncated label data in " + labels_path);
        d.labels[i] = static_cast<unsigned char>(lb);
        max_label = std::max(max_label, d.labels[i]);
    }
    d.n_classes = std::max(10, max_label + 1);
    return d;
}

std::vector<ClientShard> partition_noniid(const Dataset& data, int n_clients,
                                          int shards_per_client, uint64_t seed) {
    if (n_clients < 1) throw std::invalid_argument("partition: n_clients must be >= 1");
    if (shards_per_client < 1) {
        throw std::invalid_argument("partition: shards_per_client must be >= 1");
    }

    size_t total = data.size();
    if (n_clients == 1) {
        ClientShard all;
        all.indices.resize(total);
        for (size_t i = 0; i < total; ++i) all.indices[i] = static_cast<int>(i);
        all.weight = 1.0;
        for (int c = 0; c < data.n_classes; ++c) all.classes.push_back(c);
        return {all};
    }

    int n_classes = data.n_classes;
    long slots = static_cast<long>(n_clients) * shards_per_client;
    if (slots % n_classes != 0) {
        throw std::invalid_argument(
            "partition: n_clients * shards_per_client must be a multiple of the class count");
    }
    int slots_per_class = static_cast<int>(slots / n_classes);

    Rng rng(seed);

    // Per-class index pools, shuffled, then cut into slots_per_class chunks.
    std::vector<std::vector<int>> pools(static_cast<size_t>(n_classes));
    for (size_t i = 0; i < total; ++i) {
        pools[static_cast<size_t>(data.labels[i])].push_back(static_cast<int>(i));
    }
    for (auto& pool : pools) rng.shuffle(pool.begin(), pool.end());

    std::vector<std::vector<std::vector<int>>> chunks(static_cast<size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) {
        auto& pool = pools[static_cast<size_t>(c)];
        size_t base = pool.size() / static_cast<size_t>(slots_per_class);
        size_t extra = pool.size() % static_cast<size_t>(slots_per_class);
        size_t pos = 0;
        for (int s = 0; s < slots_per_class; ++s) {
            size_t take = base + (static_cast<size_t>(s) < extra ? 1 : 0);
            chunks[static_cast<size_t>(c)].emplace_back(pool.begin() + static_cast<long>(pos),
                                                        pool.begin() +
                                                            static_cast<long>(pos + take));
            pos += take;
        }
    }

    // Class order is permuted per seed; client i draws shards_per_client
    // consecutive classes from the permuted ring, so its classes are distinct.
    std::vector<int> class_order(static_cast<size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) class_order[static_cast<size_t>(c)] = c;
    rng.shuffle(class_order.begin(), class_order.end());

    std::vector<int> next_chunk(static_cast<size_t>(n_classes), 0);
    std::vector<ClientShard> shards(static_cast<size_t>(n_clients));
    for (int m = 0; m < n_clients; ++m) {
        ClientShard& shard = shards[static_cast<size_t>(m)];
        for (int j = 0; j < shards_per_client; ++j) {
            int cls = class_order[static_cast<size_t>(
                (static_cast<long>(m) * shards_per_client + j) % n_classes)];
            auto& chunk = chunks[static_cast<size_t>(cls)]
                                [static_cast<size_t>(next_chunk[static_cast<size_t>(cls)]++)];
            shard.indices.insert(shard.indices.end(), chunk.begin(), chunk.end());
            shard.classes.push_back(cls);
        }
        std::sort(shard.classes.begin(), shard.classes.end());
        shard.weight = static_cast<double>(shard.indices.size()) / static_cast<double>(total);
    }
    return shards;
}

}  // namespace approxfl
