#include "doctest.h"

#include <random>

#include "support/profiler_oracle.hpp"
#include "tinytnas/profiler.hpp"

using namespace tinytnas;

TEST_CASE("worked examples") {
  const auto small = build_arch_spec(4, 0, {16, 3, 2});
  CHECK(mac_of(small) == 372);
  CHECK(flash_of(small) == 105);
  CHECK(flash_of(small, {0, 2048}) == 2153);
  CHECK(ram_of(small) == 112);
  CHECK(ram_of(small, {1024, 0}) == 1136);

  const auto tiny = build_arch_spec(1, 0, {1, 1, 2});
  CHECK(mac_of(tiny) == 10);
  CHECK(flash_of(tiny) == 30);
  CHECK(ram_of(tiny) == 4);
}

TEST_CASE("named profiles") {
  CHECK(profiler_profile("exact-zero") == ProfilerConfig{0, 0});
  CHECK(profiler_profile("mcu-default") == ProfilerConfig{2048, 4096});
  CHECK_FALSE(profiler_profile("esp32").has_value());
  CHECK(profiler_profile_name({2048, 4096}) == "mcu-default");
}

TEST_CASE("check_feasibility is inclusive on every bound") {
  const ResourceLimits limits{20480, 65536, 60000};
  CHECK(check_feasibility({10000, 19000, 53000}, limits));
  CHECK(check_feasibility({20480, 1, 1}, limits));
  CHECK_FALSE(check_feasibility({20481, 1, 1}, limits));
  CHECK(check_feasibility({1, 65536, 60000}, limits));
  CHECK_FALSE(check_feasibility({1, 65537, 1}, limits));
  CHECK_FALSE(check_feasibility({1, 1, 60001}, limits));
}

TEST_CASE("agrees with the brute-force oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int length = 4 + static_cast<int>(rng() % 253);
    const int channels = 1 + static_cast<int>(rng() % 12);
    const int classes = 2 + static_cast<int>(rng() % 9);
    const int k = 1 + static_cast<int>(rng() % 64);
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(compute_c_max(length) + 1));
    const ProfilerConfig cfg{rng() % 4096, rng() % 8192};
    const auto spec = build_arch_spec(k, c, {length, channels, classes});
    const auto expected = oracle::enumerate_resources(k, c, length, channels, classes,
                                                      cfg.arena_overhead_bytes,
                                                      cfg.model_overhead_bytes);
    const auto est = profile(spec, cfg);
    INFO(compact_name(spec), " L=", length, " C=", channels);
    CHECK(est.mac_count == expected.mac);
    CHECK(est.flash_bytes == expected.flash);
    CHECK(est.ram_bytes == expected.ram);
  }
}

TEST_CASE("monotone in k and c, overheads additive") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const InputShape input{4 + static_cast<int>(rng() % 200), 1 + static_cast<int>(rng() % 8),
                           2 + static_cast<int>(rng() % 6)};
    const int c_max = compute_c_max(input.length);
    const int k = 1 + static_cast<int>(rng() % 40);
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(c_max + 1));
    const auto base = build_arch_spec(k, c, input);

    const auto doubled = build_arch_spec(2 * k, c, input);
    CHECK(mac_of(doubled) > mac_of(base));
    CHECK(flash_of(doubled) >= flash_of(base));
    CHECK(mac_of(build_arch_spec(k + 1, c, input)) >= mac_of(base));
    if (c < c_max) {
      const auto deeper = build_arch_spec(k, c + 1, input);
      CHECK(mac_of(deeper) >= mac_of(base));
      CHECK(flash_of(deeper) >= flash_of(base));
    }

    const ProfilerConfig overhead{rng() % 5000, rng() % 5000};
    CHECK(ram_of(base, overhead) == ram_of(base) + overhead.arena_overhead_bytes);
    CHECK(flash_of(base, overhead) == flash_of(base) + overhead.model_overhead_bytes);
    CHECK(profile(base, overhead) == profile(base, overhead));
  }
}

TEST_CASE("per-layer breakdown sums to the totals") {
  const auto spec = build_arch_spec(8, 2, {32, 3, 4});
  const auto costs = layer_costs(spec);
  REQUIRE(costs.size() == spec.layers.size());
  std::uint64_t macs = 0;
  for (const auto& c : costs) macs += c.macs;
  CHECK(macs == mac_of(spec));
  CHECK(costs[1].macs == 0);  // pooling
}
