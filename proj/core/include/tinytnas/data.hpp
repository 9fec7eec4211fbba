#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tinytnas/arch.hpp"

namespace tinytnas {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MalformedHeaderError : public DataError {
 public:
  using DataError::DataError;
};
class SizeMismatchError : public DataError {
 public:
  using DataError::DataError;
};
class LabelRangeError : public DataError {
 public:
  using DataError::DataError;
};

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;

  friend bool operator==(const DataSplit&, const DataSplit&) = default;
};

struct ChannelNorm {
  double mean = 0.0;
  double stddev = 1.0;
  bool scaled = true;
};

/// Windowed samples, row-major [n][length][channels].
struct Dataset {
  std::vector<float> samples;
  std::vector<int> labels;
  InputShape meta;
  DataSplit split;
  std::vector<ChannelNorm> normalization;

  std::size_t size() const { return labels.size(); }
  std::size_t window_size() const {
    return static_cast<std::size_t>(meta.length) * static_cast<std::size_t>(meta.channels);
  }
  std::span<const float> window(std::size_t i) const {
    return std::span<const float>(samples).subspan(i * window_size(), window_size());
  }
  bool has_split() const { return !split.train.empty() || !split.validation.empty(); }
};

/// Checks sample/label sizes and label range; throws the matching DataError.
void validate(const Dataset& ds);

/// A TTS1 directory (meta.json + data.bin + labels.bin) or a .csv file.
Dataset load_dataset(const std::filesystem::path& path);
Dataset load_tts1(const std::filesystem::path& dir);
/// `channels` <= 0 infers the channel count from t<i>_c<j> header names.
Dataset load_csv(const std::filesystem::path& file, int channels = 0);

void save_tts1(const Dataset& ds, const std::filesystem::path& dir);
void save_csv(const Dataset& ds, const std::filesystem::path& file);

Dataset split_stratified(Dataset ds, double val_fraction, std::uint64_t seed);

/// Per-channel z-score with statistics from the training split only.
Dataset normalize_zscore(Dataset ds);

/// FNV-1a over meta, samples and labels; used to identify a dataset in reports.
std::string dataset_digest(const Dataset& ds);

struct SyntheticWaveformOptions {
  int windows = 1500;
  int length = 64;
  int channels = 3;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
};

/// Three balanced classes: 0 sinusoid, 1 square, 2 sawtooth. Each window
/// draws a random period and phase per channel and adds Gaussian noise.
Dataset make_synthetic_waveforms(const SyntheticWaveformOptions& opts);

/// Deterministic 64-bit mixing used to derive sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

template <typename It>
void seeded_shuffle(It first, It last, std::mt19937_64& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_below(rng, i);
    std::swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(j)]);
  }
}

}  // namespace tinytnas
