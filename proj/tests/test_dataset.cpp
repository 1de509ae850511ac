#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "approxfl/dataset.hpp"

using namespace approxfl;

TEST_CASE("synthetic digits are balanced, clipped and reproducible") {
    Dataset d = synthetic_digits(30, 42);
    CHECK(d.size() == 300);
    CHECK(d.dim() == 64);
    std::vector<int> counts(10, 0);
    for (int y : d.labels) counts[static_cast<size_t>(y)]++;
    for (int c : counts) CHECK(c == 30);
    for (float p : d.pixels) {
        CHECK(p >= 0.0f);
        CHECK(p <= 1.0f);
    }
    Dataset d2 = synthetic_digits(30, 42);
    CHECK(d.pixels == d2.pixels);
    CHECK(synthetic_digits(30, 43).pixels != d.pixels);
}

TEST_CASE("non-iid partition: each client holds exactly two digit classes") {
    Dataset d = synthetic_digits(60, 7);
    for (int clients : {10, 100}) {
        if (clients == 100 && d.size() < 2000) d = synthetic_digits(300, 7);
        auto shards = partition_noniid(d, clients, 2, 5);
        REQUIRE(static_cast<int>(shards.size()) == clients);
        std::set<int> seen;
        double wsum = 0.0;
        for (const auto& s : shards) {
            std::set<int> classes;
            for (int i : s.indices) {
                classes.insert(d.labels[static_cast<size_t>(i)]);
                CHECK(seen.insert(i).second);  // pairwise disjoint
            }
            CHECK(classes.size() == 2);
            CHECK(s.classes.size() == 2);
            wsum += s.weight;
        }
        CHECK(seen.size() == d.size());  // union covers the dataset
        CHECK(wsum == doctest::Approx(1.0));
    }
}

TEST_CASE("single-client partition degenerates to the full dataset") {
    Dataset d = synthetic_digits(5, 3);
    auto shards = partition_noniid(d, 1, 2, 1);
    REQUIRE(shards.size() == 1);
    CHECK(shards[0].indices.size() == d.size());
    CHECK(shards[0].weight == doctest::Approx(1.0));
}

TEST_CASE("partition rejects an impossible slot count") {
    Dataset d = synthetic_digits(5, 3);
    CHECK_THROWS_AS(partition_noniid(d, 7, 3, 1), std::invalid_argument);  // 21 slots, 10 classes
}

TEST_CASE("partition is deterministic in the seed") {
    Dataset d = synthetic_digits(30, 9);
    auto a = partition_noniid(d, 10, 2, 11);
    auto b = partition_noniid(d, 10, 2, 11);
    auto c = partition_noniid(d, 10, 2, 12);
    for (size_t m = 0; m < a.size(); ++m) CHECK(a[m].indices == b[m].indices);
    bool same = true;
    for (size_t m = 0; m < a.size(); ++m) same = same && a[m].indices == c[m].indices;
    CHECK_FALSE(same);
}

TEST_CASE("idx files round-trip through the loader") {
    const char* img_path = "test_images.idx";
    const char* lab_path = "test_labels.idx";
    {
        std::ofstream img(img_path, std::ios::binary);
        std::ofstream lab(lab_path, std::ios::binary);
        auto be32 = [](std::ofstream& out, uint32_t v) {
            unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v)};
            out.write(reinterpret_cast<char*>(b), 4);
        };
        be32(img, 0x803);
        be32(img, 2);  // two 2x3 samples
        be32(img, 2);
        be32(img, 3);
        unsigned char px[12] = {0, 51, 102, 153, 204, 255, 255, 204, 153, 102, 51, 0};
        img.write(reinterpret_cast<char*>(px), 12);
        be32(lab, 0x801);
        be32(lab, 2);
        unsigned char ys[2] = {3, 9};
        lab.write(reinterpret_cast<char*>(ys), 2);
    }
    Dataset d = load_idx_dataset(img_path, lab_path);
    CHECK(d.size() == 2);
    CHECK(d.height == 2);
    CHECK(d.width == 3);
    CHECK(d.labels[0] == 3);
    CHECK(d.labels[1] == 9);
    CHECK(d.pixels[1] == doctest::Approx(51.0f / 255.0f));
    CHECK(d.pixels[5] == doctest::Approx(1.0f));
    std::remove(img_path);
    std::remove(lab_path);
}

TEST_CASE("idx loader rejects bad magic") {
    const char* path = "bad.idx";
    {
        std::ofstream out(path, std::ios::binary);
        unsigned char junk[8] = {1, 2, 3, 4, 5, 6, 7, 8};
        out.write(reinterpret_cast<char*>(junk), 8);
    }
    CHECK_THROWS(load_idx_dataset(path, path));
    std::remove(path);
}
