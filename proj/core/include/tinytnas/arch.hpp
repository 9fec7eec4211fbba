#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tinytnas {

/// Shape of one windowed time-series sample plus the label space.
struct InputShape {
  int length = 1;
  int channels = 1;
  int num_classes = 2;

  friend bool operator==(const InputShape&, const InputShape&) = default;
};

enum class LayerKind {
  DepthwiseSeparableConv1D,
  MaxPool1D,
  GlobalAveragePool1D,
  DenseReLU,
  DenseSoftmax,
};

const char* to_string(LayerKind kind);

/// One layer of an instantiated candidate. `units` is the filter or neuron
/// count and is 0 for pooling layers.
struct LayerSpec {
  LayerKind kind = LayerKind::DepthwiseSeparableConv1D;
  int units = 0;
  int kernel_size = 0;
  int pool_size = 0;
  int in_length = 0;
  int out_length = 0;
  int in_channels = 0;
  int out_channels = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A concrete member of the search space: DSConv(k), then c blocks of
/// [MaxPool(2), DSConv(k_i)], then GAP, DenseReLU(k_{c+1}), DenseSoftmax.
struct ArchSpec {
  int k = 0;
  int c = 0;
  std::vector<LayerSpec> layers;
  InputShape input;

  friend bool operator==(const ArchSpec&, const ArchSpec&) = default;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kConvKernelSize = 3;
inline constexpr int kPoolSize = 2;
/// Widest layer any architecture may have; keeps width arithmetic in int.
inline constexpr int kMaxFilters = 1 << 24;

void validate(const InputShape& input);

/// Number of size-2 poolings the input length admits (halve until 1).
int compute_c_max(int length);

/// round_half_up(1.5 * k), never below 1.
int grow_filters(int k);

/// [k_0 = k, k_1, ..., k_c, k_{c+1}]; the last entry is the DenseReLU width.
/// Throws ShapeError when any entry would exceed kMaxFilters.
std::vector<int> filters_sequence(int k, int c);

/// Throws ShapeError when k < 1, c < 0, c > compute_c_max(input.length), a
/// layer is wider than kMaxFilters, or the input shape itself is invalid.
ArchSpec build_arch_spec(int k, int c, const InputShape& input);

/// "k=<k>,c=<c>"
std::string compact_name(int k, int c);
std::string compact_name(const ArchSpec& spec);

/// Fixed-width layer table for terminals and logs.
std::string describe(const ArchSpec& spec);

}  // namespace tinytnas
