#include "doctest.h"

#include <random>

#include "support/profiler_oracle.hpp"
#include "tinytnas/arch.hpp"

using namespace tinytnas;

TEST_CASE("compute_c_max counts halvings down to length 1") {
  CHECK(compute_c_max(1) == 0);
  CHECK(compute_c_max(128) == 7);
  CHECK(compute_c_max(40) == 5);
  CHECK(compute_c_max(2) == 1);
  CHECK(compute_c_max(3) == 1);
  for (int length = 1; length <= 1000; ++length)
    CHECK(compute_c_max(length) == oracle::oracle_c_max(length));
}

TEST_CASE("filters_sequence applies round-half-up 1.5x growth") {
  CHECK(filters_sequence(4, 0) == std::vector<int>{4, 6});
  CHECK(filters_sequence(4, 2) == std::vector<int>{4, 6, 9, 14});
  CHECK(filters_sequence(1, 1) == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(filters_sequence(0, 1), ShapeError);
}

TEST_CASE("build_arch_spec expands the template") {
  SUBCASE("c = 0") {
    const auto spec = build_arch_spec(4, 0, {16, 3, 2});
    REQUIRE(spec.layers.size() == 4);
    CHECK(spec.layers[0] == LayerSpec{LayerKind::DepthwiseSeparableConv1D, 4, 3, 0, 16, 16, 3, 4});
    CHECK(spec.layers[1] == LayerSpec{LayerKind::GlobalAveragePool1D, 0, 0, 0, 16, 1, 4, 4});
    CHECK(spec.layers[2] == LayerSpec{LayerKind::DenseReLU, 6, 0, 0, 1, 1, 4, 6});
    CHECK(spec.layers[3] == LayerSpec{LayerKind::DenseSoftmax, 2, 0, 0, 1, 1, 6, 2});
    CHECK(compact_name(spec) == "k=4,c=0");
  }
  SUBCASE("c exactly c_max leaves the last conv at length 1") {
    const auto spec = build_arch_spec(4, 3, {8, 1, 2});
    REQUIRE(spec.layers.size() == 10);
    CHECK(spec.layers[6].kind == LayerKind::DepthwiseSeparableConv1D);
    CHECK(spec.layers[6].in_length == 1);
    CHECK(spec.layers[5].kind == LayerKind::MaxPool1D);
    CHECK(spec.layers[5].in_length == 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_arch_spec(4, 4, {8, 1, 2}), ShapeError);
    CHECK_THROWS_AS(build_arch_spec(0, 0, {8, 1, 2}), ShapeError);
    CHECK_THROWS_AS(build_arch_spec(4, -1, {8, 1, 2}), ShapeError);
    CHECK_THROWS_AS(build_arch_spec(4, 0, {8, 1, 1}), ShapeError);
    CHECK_THROWS_AS(build_arch_spec(4, 0, {0, 1, 2}), ShapeError);
  }
}

TEST_CASE("odd lengths drop the trailing element when pooling") {
  const auto spec = build_arch_spec(2, 2, {7, 1, 3});
  CHECK(spec.layers[1].in_length == 7);
  CHECK(spec.layers[1].out_length == 3);
  CHECK(spec.layers[3].out_length == 1);
}

TEST_CASE("template invariants over random arguments") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const InputShape input{1 + static_cast<int>(rng() % 300), 1 + static_cast<int>(rng() % 12),
                           2 + static_cast<int>(rng() % 9)};
    const int k = 1 + static_cast<int>(rng() % 64);
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(compute_c_max(input.length) + 1));
    const auto spec = build_arch_spec(k, c, input);
    CHECK(spec == build_arch_spec(k, c, input));

    int pools = 0;
    for (const auto& layer : spec.layers) {
      if (layer.kind == LayerKind::MaxPool1D) {
        ++pools;
        CHECK(layer.in_length >= 2);
        CHECK(layer.out_length == layer.in_length / 2);
      }
      if (layer.kind == LayerKind::DepthwiseSeparableConv1D) {
        CHECK(layer.kernel_size == 3);
        CHECK(layer.out_length == layer.in_length);
      }
    }
    CHECK(pools == c);
    CHECK(spec.layers.size() == static_cast<std::size_t>(2 * c + 4));

    // channel counts are non-decreasing in k
    const auto wider = build_arch_spec(k + 1, c, input);
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
      CHECK(wider.layers[i].in_channels >= spec.layers[i].in_channels);
      CHECK(wider.layers[i].out_channels >= spec.layers[i].out_channels);
    }
  }
}

TEST_CASE("describe lists every layer") {
  const auto text = describe(build_arch_spec(4, 1, {16, 3, 2}));
  CHECK(text.find("k=4,c=1") != std::string::npos);
  CHECK(text.find("MaxPool1D") != std::string::npos);
  CHECK(text.find("DenseSoftmax") != std::string::npos);
}

TEST_CASE("widths are capped") {
  CHECK_NOTHROW(filters_sequence(kMaxFilters / 2, 0));
  CHECK_THROWS_AS(filters_sequence(kMaxFilters + 1, 0), ShapeError);
  CHECK_THROWS_AS(filters_sequence(kMaxFilters / 2, 1), ShapeError);
  CHECK_THROWS_AS(build_arch_spec(1 << 30, 0, {16, 1, 2}), ShapeError);
}
