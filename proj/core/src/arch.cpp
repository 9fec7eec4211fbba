#include "tinytnas/arch.hpp"

#include <cstdio>
#include <string>
#include <sstream>

namespace tinytnas {

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::DepthwiseSeparableConv1D: return "DSConv1D";
    case LayerKind::MaxPool1D: return "MaxPool1D";
    case LayerKind::GlobalAveragePool1D: return "GAP1D";
    case LayerKind::DenseReLU: return "DenseReLU";
    case LayerKind::DenseSoftmax: return "DenseSoftmax";
  }
  return "?";
}

void validate(const InputShape& input) {
  if (input.length < 1) throw ShapeError("input length must be >= 1");
  if (input.channels < 1) throw ShapeError("input channels must be >= 1");
  if (input.num_classes < 2) throw ShapeError("num_classes must be >= 2");
}

int compute_c_max(int length) {
  int count = 0;
  while (length >= 2) {
    length /= 2;
    ++count;
  }
  return count;
}

int grow_filters(int k) {
  const int grown = (3 * k + 1) / 2;
  return grown < 1 ? 1 : grown;
}

std::vector<int> filters_sequence(int k, int c) {
  if (k < 1) throw ShapeError("k must be >= 1");
  if (c < 0) throw ShapeError("c must be >= 0");
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(c) + 2);
  seq.push_back(k);
  for (int i = 0; i <= c + 1; ++i) {
    if (seq.back() > kMaxFilters)
      throw ShapeError("layer width exceeds " + std::to_string(kMaxFilters));
    if (i <= c) seq.push_back(grow_filters(seq.back()));
  }
  return seq;
}

namespace {

LayerSpec conv_layer(int length, int in_ch, int filters) {
  return {LayerKind::DepthwiseSeparableConv1D, filters, kConvKernelSize, 0,
          length, length, in_ch, filters};
}

}  // namespace

ArchSpec build_arch_spec(int k, int c, const InputShape& input) {
  validate(input);
  if (k < 1) throw ShapeError("k must be >= 1, got " + std::to_string(k));
  if (c < 0) throw ShapeError("c must be >= 0, got " + std::to_string(c));
  const int c_max = compute_c_max(input.length);
  if (c > c_max) {
    throw ShapeError("c=" + std::to_string(c) + " exceeds c_max=" +
                     std::to_string(c_max) + " for input length " +
                     std::to_string(input.length));
  }

  const auto filters = filters_sequence(k, c);
  ArchSpec spec{k, c, {}, input};
  spec.layers.reserve(static_cast<std::size_t>(2 * c + 4));

  int length = input.length;
  int channels = input.channels;
  spec.layers.push_back(conv_layer(length, channels, filters[0]));
  channels = filters[0];
  for (int i = 1; i <= c; ++i) {
    const int pooled = length / kPoolSize;
    spec.layers.push_back(
        {LayerKind::MaxPool1D, 0, 0, kPoolSize, length, pooled, channels, channels});
    length = pooled;
    spec.layers.push_back(conv_layer(length, channels, filters[i]));
    channels = filters[i];
  }
  spec.layers.push_back(
      {LayerKind::GlobalAveragePool1D, 0, 0, 0, length, 1, channels, channels});
  const int hidden = filters[static_cast<std::size_t>(c) + 1];
  spec.layers.push_back({LayerKind::DenseReLU, hidden, 0, 0, 1, 1, channels, hidden});
  spec.layers.push_back(
      {LayerKind::DenseSoftmax, input.num_classes, 0, 0, 1, 1, hidden, input.num_classes});
  return spec;
}

std::string compact_name(int k, int c) {
  return "k=" + std::to_string(k) + ",c=" + std::to_string(c);
}

std::string compact_name(const ArchSpec& spec) { return compact_name(spec.k, spec.c); }

std::string describe(const ArchSpec& spec) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "architecture %s  input L=%d C=%d classes=%d\n",
                compact_name(spec).c_str(), spec.input.length, spec.input.channels,
                spec.input.num_classes);
  out << line;
  std::snprintf(line, sizeof line, "  %-3s %-13s %6s %10s %10s\n", "#", "layer", "units",
                "in(LxC)", "out(LxC)");
  out << line;
  int index = 0;
  for (const auto& layer : spec.layers) {
    const std::string in = std::to_string(layer.in_length) + "x" + std::to_string(layer.in_channels);
    const std::string o = std::to_string(layer.out_length) + "x" + std::to_string(layer.out_channels);
    const std::string units = layer.units > 0 ? std::to_string(layer.units) : "-";
    std::snprintf(line, sizeof line, "  %-3d %-13s %6s %10s %10s\n", index++,
                  to_string(layer.kind), units.c_str(), in.c_str(), o.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace tinytnas
