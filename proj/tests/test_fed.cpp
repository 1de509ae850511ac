#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "approxfl/fed.hpp"

using namespace approxfl;

TEST_CASE("aggregate is the weighted sum") {
    std::vector<GradientTensor> grads = {{{1.0f}, 0, 0}, {{-1.0f}, 1, 0}};
    std::vector<double> w = {0.25, 0.75};
    auto out = aggregate(grads, w);
    CHECK(out[0] == doctest::Approx(-0.5f));
}

TEST_CASE("single client with weight one is the identity") {
    std::vector<GradientTensor> grads = {{{0.5f, -2.5f, 0.0f}, 0, 0}};
    auto out = aggregate(grads, std::vector<double>{1.0});
    CHECK(out == std::vector<float>{0.5f, -2.5f, 0.0f});
}

TEST_CASE("identical gradients aggregate to themselves") {
    std::vector<GradientTensor> grads(4, GradientTensor{{0.25f, -0.125f}, 0, 0});
    std::vector<double> w(4, 0.25);
    auto out = aggregate(grads, w);
    CHECK(out[0] == doctest::Approx(0.25f));
    CHECK(out[1] == doctest::Approx(-0.125f));
}

TEST_CASE("non-finite entries contribute zero") {
    float inf = std::numeric_limits<float>::infinity();
    float nan = std::numeric_limits<float>::quiet_NaN();
    std::vector<GradientTensor> grads = {{{inf, nan, 1.0f}, 0, 0}, {{2.0f, 4.0f, -inf}, 1, 0}};
    std::vector<double> w = {0.5, 0.5};
    auto out = aggregate(grads, w);
    CHECK(out[0] == doctest::Approx(1.0f));   // inf dropped, 0.5 * 2
    CHECK(out[1] == doctest::Approx(2.0f));   // nan dropped, 0.5 * 4
    CHECK(out[2] == doctest::Approx(0.5f));   // -inf dropped, 0.5 * 1
    for (float v : out) CHECK(std::isfinite(v));
}

TEST_CASE("weight and shape validation") {
    std::vector<GradientTensor> grads = {{{1.0f}, 0, 0}, {{2.0f}, 1, 0}};
    std::vector<double> bad_sum = {0.5, 0.6};
    std::vector<double> short_w = {1.0};
    std::vector<double> halves = {0.5, 0.5};
    CHECK_THROWS_AS(aggregate(grads, bad_sum), std::invalid_argument);
    CHECK_THROWS_AS(aggregate(grads, short_w), std::invalid_argument);
    std::vector<GradientTensor> ragged = {{{1.0f}, 0, 0}, {{2.0f, 3.0f}, 1, 0}};
    CHECK_THROWS_AS(aggregate(ragged, halves), std::invalid_argument);
}

TEST_CASE("update applies w - lr * g") {
    std::vector<float> w = {1.0f, -1.0f};
    std::vector<float> g = {0.5f, 0.0f};
    apply_update(w, g, 0.01f);
    CHECK(w[0] == doctest::Approx(0.995f));
    CHECK(w[1] == doctest::Approx(-1.0f));
}

TEST_CASE("two updates equal one update with summed gradients") {
    std::vector<float> w1 = {0.25f, 0.5f, -0.75f};
    std::vector<float> w2 = w1;
    std::vector<float> g1 = {0.5f, -0.25f, 0.125f};
    std::vector<float> g2 = {-0.125f, 0.5f, 0.25f};
    apply_update(w1, g1, 0.0625f);
    apply_update(w1, g2, 0.0625f);
    std::vector<float> gsum = {g1[0] + g2[0], g1[1] + g2[1], g1[2] + g2[2]};
    apply_update(w2, gsum, 0.0625f);
    for (size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == doctest::Approx(w2[i]));
}
