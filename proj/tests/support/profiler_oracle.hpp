#pragma once

// Brute-force resource oracle. Rebuilds the layer sequence from scratch and
// counts MACs, parameters and live activation bytes by walking every loop
// index, so it shares no code path with the analytical profiler.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace tinytnas::oracle {

struct OracleEstimate {
  std::uint64_t ram = 0;
  std::uint64_t flash = 0;
  std::uint64_t mac = 0;
};

inline int oracle_c_max(int length) {
  int pools = 0;
  for (int l = length; l >= 2; l = static_cast<int>(std::floor(l / 2.0))) ++pools;
  return pools;
}

inline OracleEstimate enumerate_resources(int k, int c, int length, int channels, int classes,
                                          std::uint64_t arena_overhead = 0,
                                          std::uint64_t model_overhead = 0) {
  std::vector<int> filters{k};
  for (int i = 0; i <= c; ++i)
    filters.push_back(std::max(1, static_cast<int>(std::floor(1.5 * filters.back() + 0.5))));

  std::uint64_t macs = 0;
  std::uint64_t weight_bytes = 0;
  std::uint64_t bias_bytes = 0;
  std::vector<std::uint64_t> steps;  // live bytes per execution step

  int len = length;
  int ch = channels;
  auto dsconv = [&](int out_ch) {
    // depthwise: every output element visits three taps
    for (int t = 0; t < len; ++t)
      for (int x = 0; x < ch; ++x)
        for (int tap = 0; tap < 3; ++tap) ++macs;
    for (int tap = 0; tap < 3; ++tap)
      for (int x = 0; x < ch; ++x) ++weight_bytes;
    steps.push_back(static_cast<std::uint64_t>(len) * ch * 2);
    // pointwise
    for (int t = 0; t < len; ++t)
      for (int o = 0; o < out_ch; ++o)
        for (int x = 0; x < ch; ++x) ++macs;
    for (int x = 0; x < ch; ++x)
      for (int o = 0; o < out_ch; ++o) ++weight_bytes;
    for (int o = 0; o < out_ch; ++o) bias_bytes += 4;
    steps.push_back(static_cast<std::uint64_t>(len) * ch + static_cast<std::uint64_t>(len) * out_ch);
    ch = out_ch;
  };
  auto dense = [&](int in, int out) {
    for (int o = 0; o < out; ++o)
      for (int i = 0; i < in; ++i) {
        ++macs;
        ++weight_bytes;
      }
    for (int o = 0; o < out; ++o) bias_bytes += 4;
    steps.push_back(static_cast<std::uint64_t>(in + out));
  };

  dsconv(filters[0]);
  for (int i = 1; i <= c; ++i) {
    const int pooled = len / 2;
    steps.push_back(static_cast<std::uint64_t>(len) * ch + static_cast<std::uint64_t>(pooled) * ch);
    len = pooled;
    dsconv(filters[static_cast<std::size_t>(i)]);
  }
  steps.push_back(static_cast<std::uint64_t>(len) * ch + static_cast<std::uint64_t>(ch));
  const int hidden = filters[static_cast<std::size_t>(c) + 1];
  dense(ch, hidden);
  dense(hidden, classes);

  OracleEstimate est;
  est.mac = macs;
  est.flash = weight_bytes + bias_bytes + model_overhead;
  est.ram = *std::max_element(steps.begin(), steps.end()) + arena_overhead;
  return est;
}

}  // namespace tinytnas::oracle
