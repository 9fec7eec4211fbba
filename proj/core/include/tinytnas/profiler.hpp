#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tinytnas/arch.hpp"

namespace tinytnas {

// Analytical int8 cost model:
//   weights 1 byte, biases 4 bytes (int32), activations 1 byte;
//   RAM is the largest (input buffer + output buffer) over execution steps,
//   with the depthwise and pointwise halves of a DSConv as separate steps;
//   MACs count kernel taps (padded taps included), never bias adds.

struct ResourceEstimate {
  std::uint64_t ram_bytes = 0;
  std::uint64_t flash_bytes = 0;
  std::uint64_t mac_count = 0;

  friend bool operator==(const ResourceEstimate&, const ResourceEstimate&) = default;
};

struct ProfilerConfig {
  std::uint64_t arena_overhead_bytes = 0;
  std::uint64_t model_overhead_bytes = 0;

  friend bool operator==(const ProfilerConfig&, const ProfilerConfig&) = default;
};

/// Named overhead profiles: "exact-zero" (0/0) and "mcu-default" (2048/4096).
std::optional<ProfilerConfig> profiler_profile(std::string_view name);
std::string profiler_profile_name(const ProfilerConfig& cfg);

struct ResourceLimits {
  std::uint64_t ram_max = 0;
  std::uint64_t flash_max = 0;
  std::uint64_t mac_max = 0;

  friend bool operator==(const ResourceLimits&, const ResourceLimits&) = default;
};

/// Per-layer breakdown, handy for the CLI table and for tests.
struct LayerCost {
  std::uint64_t macs = 0;
  std::uint64_t weights = 0;
  std::uint64_t biases = 0;
  std::uint64_t peak_live_bytes = 0;
};

std::vector<LayerCost> layer_costs(const ArchSpec& spec);

std::uint64_t mac_of(const ArchSpec& spec);
std::uint64_t flash_of(const ArchSpec& spec, const ProfilerConfig& cfg = {});
std::uint64_t ram_of(const ArchSpec& spec, const ProfilerConfig& cfg = {});
ResourceEstimate profile(const ArchSpec& spec, const ProfilerConfig& cfg = {});

/// Inclusive on every bound.
bool check_feasibility(const ResourceEstimate& est, const ResourceLimits& limits);

}  // namespace tinytnas
