#include "tinytnas/profiler.hpp"

#include <algorithm>

namespace tinytnas {

std::optional<ProfilerConfig> profiler_profile(std::string_view name) {
  if (name == "exact-zero") return ProfilerConfig{0, 0};
  if (name == "mcu-default") return ProfilerConfig{2048, 4096};
  return std::nullopt;
}

std::string profiler_profile_name(const ProfilerConfig& cfg) {
  if (cfg == ProfilerConfig{0, 0}) return "exact-zero";
  if (cfg == ProfilerConfig{2048, 4096}) return "mcu-default";
  return "custom";
}

std::vector<LayerCost> layer_costs(const ArchSpec& spec) {
  std::vector<LayerCost> costs;
  costs.reserve(spec.layers.size());
  for (const auto& layer : spec.layers) {
    const auto l_in = static_cast<std::uint64_t>(layer.in_length);
    const auto l_out = static_cast<std::uint64_t>(layer.out_length);
    const auto c_in = static_cast<std::uint64_t>(layer.in_channels);
    const auto c_out = static_cast<std::uint64_t>(layer.out_channels);
    LayerCost cost;
    switch (layer.kind) {
      case LayerKind::DepthwiseSeparableConv1D: {
        const auto k = static_cast<std::uint64_t>(layer.kernel_size);
        cost.macs = l_out * c_in * k + l_out * c_in * c_out;
        cost.weights = k * c_in + c_in * c_out;
        cost.biases = c_out;
        const auto depthwise_step = l_in * c_in + l_out * c_in;
        const auto pointwise_step = l_out * c_in + l_out * c_out;
        cost.peak_live_bytes = std::max(depthwise_step, pointwise_step);
        break;
      }
      case LayerKind::MaxPool1D:
      case LayerKind::GlobalAveragePool1D:
        cost.peak_live_bytes = l_in * c_in + l_out * c_out;
        break;
      case LayerKind::DenseReLU:
      case LayerKind::DenseSoftmax:
        cost.macs = c_in * c_out;
        cost.weights = c_in * c_out;
        cost.biases = c_out;
        cost.peak_live_bytes = c_in + c_out;
        break;
    }
    costs.push_back(cost);
  }
  return costs;
}

std::uint64_t mac_of(const ArchSpec& spec) {
  std::uint64_t total = 0;
  for (const auto& cost : layer_costs(spec)) total += cost.macs;
  return total;
}

std::uint64_t flash_of(const ArchSpec& spec, const ProfilerConfig& cfg) {
  std::uint64_t weights = 0;
  std::uint64_t biases = 0;
  for (const auto& cost : layer_costs(spec)) {
    weights += cost.weights;
    biases += cost.biases;
  }
  return weights + 4 * biases + cfg.model_overhead_bytes;
}

std::uint64_t ram_of(const ArchSpec& spec, const ProfilerConfig& cfg) {
  std::uint64_t peak = 0;
  for (const auto& cost : layer_costs(spec)) peak = std::max(peak, cost.peak_live_bytes);
  return peak + cfg.arena_overhead_bytes;
}

ResourceEstimate profile(const ArchSpec& spec, const ProfilerConfig& cfg) {
  return {ram_of(spec, cfg), flash_of(spec, cfg), mac_of(spec)};
}

bool check_feasibility(const ResourceEstimate& est, const ResourceLimits& limits) {
  return est.ram_bytes <= limits.ram_max && est.flash_bytes <= limits.flash_max &&
         est.mac_count <= limits.mac_max;
}

}  // namespace tinytnas
