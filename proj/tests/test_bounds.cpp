#include <doctest.h>

#include <cmath>

#include "approxfl/bounds.hpp"

using namespace approxfl;

TEST_CASE("output-layer product bound is 1 and tightens with depth") {
    ModelSpec spec = ModelSpec::mlp_spec({64, 16, 16, 10}, Activation::sigmoid);
    auto bounds = gradient_bounds(spec);
    REQUIRE(bounds.size() == 3);
    CHECK(bounds[2].product_bound == doctest::Approx(1.0));
    CHECK(bounds[1].product_bound == doctest::Approx(0.25 * 10));
    CHECK(bounds[0].product_bound == doctest::Approx(0.25 * 16 * 0.25 * 10));
    CHECK(bounds[0].sum_bound == doctest::Approx(16 + 10));
    CHECK(bounds[2].sum_bound == doctest::Approx(0.0));  // vacuous for the head itself
}

TEST_CASE("doubling widths scales the product bound by at most the width factor per layer") {
    ModelSpec narrow = ModelSpec::mlp_spec({64, 16, 16, 10}, Activation::sigmoid);
    ModelSpec wide = ModelSpec::mlp_spec({64, 32, 32, 10}, Activation::sigmoid);
    auto bn = gradient_bounds(narrow);
    auto bw = gradient_bounds(wide);
    CHECK(bw[0].product_bound / bn[0].product_bound == doctest::Approx(2.0));
    CHECK(bw[1].product_bound / bn[1].product_bound == doctest::Approx(1.0));
}

TEST_CASE("relu specs are rejected as outside the assumptions") {
    ModelSpec spec = ModelSpec::mlp_spec({64, 16, 10}, Activation::relu);
    CHECK_THROWS_AS(gradient_bounds(spec), std::invalid_argument);
    CHECK_THROWS_AS(check_empirical(spec, 3, 1), std::invalid_argument);
}

TEST_CASE("cnn bounds: head within 1, kernel within pooled-count product") {
    ModelSpec spec = ModelSpec::cnn_spec(8, 8, 5, 1, 10, Activation::sigmoid);
    auto bounds = gradient_bounds(spec);
    REQUIRE(bounds.size() == 2);
    CHECK(bounds[1].product_bound == doctest::Approx(1.0));
    CHECK(bounds[0].product_bound == doctest::Approx(0.25 * 4 * 10));
    CHECK(bounds[0].sum_bound == doctest::Approx(10.0));
}

TEST_CASE("randomized verification stays within bounds on a small budget") {
    ModelSpec spec = ModelSpec::mlp_spec({64, 16, 16, 10}, Activation::sigmoid);
    BoundReport report = check_empirical(spec, 500, 7);
    CHECK(report.trials == 500);
    CHECK(report.delta_in_unit);
    CHECK(report.delta_min > -1.0);
    CHECK(report.delta_max < 1.0);
    CHECK_FALSE(report.violations);
    CHECK(report.valid());
    for (const auto& lb : report.layers) CHECK(lb.observed_max <= lb.product_bound);
    CHECK(report.frac_grads_in_unit > 0.9);
}

TEST_CASE("cnn randomized verification holds and head gradients stay in the unit range") {
    ModelSpec spec = ModelSpec::cnn_spec(8, 8, 5, 1, 10, Activation::sigmoid);
    BoundReport report = check_empirical(spec, 500, 8);
    CHECK_FALSE(report.violations);
    CHECK(report.delta_in_unit);
    REQUIRE(report.layers.size() == 2);
    CHECK(report.layers[1].observed_max < 1.0);  // dense head: delta * pooled activation
}

TEST_CASE("assumption violations are detected, not silently bound-checked") {
    ModelSpec spec = ModelSpec::mlp_spec({8, 6, 4}, Activation::sigmoid);
    std::vector<float> params(spec.param_count(), 0.5f);
    CHECK(check_assumptions(spec, params).all());
    params[3] = 1.5f;  // inject an out-of-range weight
    auto flags = check_assumptions(spec, params);
    CHECK_FALSE(flags.weights_in_unit_range);
    CHECK_FALSE(flags.all());

    ModelSpec relu_spec = ModelSpec::mlp_spec({8, 6, 4}, Activation::relu);
    std::vector<float> ok(relu_spec.param_count(), 0.5f);
    CHECK_FALSE(check_assumptions(relu_spec, ok).sigmoid_hidden);
}
