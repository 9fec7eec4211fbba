#pragma once

// Single-sample kernels for the template's layer set. Activations are
// time-major, channel-minor: x[t * channels + ch].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace tinytnas::layers {

/// Depthwise stage (kernel 3, zero padding, no bias) into `mid`, then
/// pointwise projection + bias + ReLU into `y`.
template <typename T>
void dsconv_forward(int length, int c_in, int c_out, std::span<const T> depthwise,
                    std::span<const T> pointwise, std::span<const T> bias, std::span<const T> x,
                    std::span<T> mid, std::span<T> y) {
  for (int t = 0; t < length; ++t) {
    T* m = mid.data() + static_cast<std::size_t>(t) * c_in;
    for (int ch = 0; ch < c_in; ++ch) m[ch] = T(0);
    for (int j = 0; j < 3; ++j) {
      const int src = t + j - 1;
      if (src < 0 || src >= length) continue;
      const T* xs = x.data() + static_cast<std::size_t>(src) * c_in;
      const T* w = depthwise.data() + static_cast<std::size_t>(j) * c_in;
      for (int ch = 0; ch < c_in; ++ch) m[ch] += w[ch] * xs[ch];
    }
    T* out = y.data() + static_cast<std::size_t>(t) * c_out;
    for (int co = 0; co < c_out; ++co) out[co] = bias[co];
    for (int ci = 0; ci < c_in; ++ci) {
      const T v = m[ci];
      const T* row = pointwise.data() + static_cast<std::size_t>(ci) * c_out;
      for (int co = 0; co < c_out; ++co) out[co] += v * row[co];
    }
    for (int co = 0; co < c_out; ++co) out[co] = out[co] > T(0) ? out[co] : T(0);
  }
}

/// `grad_y` is masked in place by the ReLU. Parameter gradients accumulate.
/// `grad_mid` is scratch of size length * c_in. `grad_x` may be empty.
template <typename T>
void dsconv_backward(int length, int c_in, int c_out, std::span<const T> depthwise,
                     std::span<const T> pointwise, std::span<const T> x, std::span<const T> mid,
                     std::span<const T> y, std::span<T> grad_y, std::span<T> grad_depthwise,
                     std::span<T> grad_pointwise, std::span<T> grad_bias, std::span<T> grad_mid,
                     std::span<T> grad_x) {
  const std::size_t n_out = static_cast<std::size_t>(length) * c_out;
  for (std::size_t i = 0; i < n_out; ++i)
    if (!(y[i] > T(0))) grad_y[i] = T(0);

  for (int t = 0; t < length; ++t) {
    const T* g = grad_y.data() + static_cast<std::size_t>(t) * c_out;
    const T* m = mid.data() + static_cast<std::size_t>(t) * c_in;
    T* gm = grad_mid.data() + static_cast<std::size_t>(t) * c_in;
    for (int co = 0; co < c_out; ++co) grad_bias[co] += g[co];
    for (int ci = 0; ci < c_in; ++ci) {
      const T* row = pointwise.data() + static_cast<std::size_t>(ci) * c_out;
      T* grow = grad_pointwise.data() + static_cast<std::size_t>(ci) * c_out;
      const T mv = m[ci];
      T acc = T(0);
      for (int co = 0; co < c_out; ++co) {
        grow[co] += mv * g[co];
        acc += row[co] * g[co];
      }
      gm[ci] = acc;
    }
  }

  if (!grad_x.empty())
    std::fill(grad_x.begin(), grad_x.begin() + static_cast<std::ptrdiff_t>(length) * c_in, T(0));
  for (int t = 0; t < length; ++t) {
    const T* gm = grad_mid.data() + static_cast<std::size_t>(t) * c_in;
    for (int j = 0; j < 3; ++j) {
      const int src = t + j - 1;
      if (src < 0 || src >= length) continue;
      const T* xs = x.data() + static_cast<std::size_t>(src) * c_in;
      const T* w = depthwise.data() + static_cast<std::size_t>(j) * c_in;
      T* gw = grad_depthwise.data() + static_cast<std::size_t>(j) * c_in;
      for (int ch = 0; ch < c_in; ++ch) gw[ch] += gm[ch] * xs[ch];
      if (!grad_x.empty()) {
        T* gx = grad_x.data() + static_cast<std::size_t>(src) * c_in;
        for (int ch = 0; ch < c_in; ++ch) gx[ch] += w[ch] * gm[ch];
      }
    }
  }
}

/// Window 2, stride 2; odd trailing element dropped; ties go to the earlier index.
template <typename T>
void maxpool_forward(int in_length, int channels, std::span<const T> x, std::span<T> y,
                     std::span<int> argmax) {
  const int out_length = in_length / 2;
  for (int t = 0; t < out_length; ++t) {
    for (int ch = 0; ch < channels; ++ch) {
      const int a = (2 * t) * channels + ch;
      const int b = (2 * t + 1) * channels + ch;
      const int pick = x[static_cast<std::size_t>(b)] > x[static_cast<std::size_t>(a)] ? b : a;
      const auto o = static_cast<std::size_t>(t * channels + ch);
      y[o] = x[static_cast<std::size_t>(pick)];
      argmax[o] = pick;
    }
  }
}

/// Scatter of the forward gather: each output gradient lands on its argmax.
template <typename T>
void maxpool_backward(int in_length, int channels, std::span<const int> argmax,
                      std::span<const T> grad_y, std::span<T> grad_x) {
  std::fill(grad_x.begin(),
            grad_x.begin() + static_cast<std::ptrdiff_t>(in_length) * channels, T(0));
  const std::size_t n_out = static_cast<std::size_t>(in_length / 2) * channels;
  for (std::size_t o = 0; o < n_out; ++o)
    grad_x[static_cast<std::size_t>(argmax[o])] += grad_y[o];
}

template <typename T>
void gap_forward(int length, int channels, std::span<const T> x, std::span<T> y) {
  for (int ch = 0; ch < channels; ++ch) y[static_cast<std::size_t>(ch)] = T(0);
  for (int t = 0; t < length; ++t)
    for (int ch = 0; ch < channels; ++ch)
      y[static_cast<std::size_t>(ch)] += x[static_cast<std::size_t>(t * channels + ch)];
  const T inv = T(1) / static_cast<T>(length);
  for (int ch = 0; ch < channels; ++ch) y[static_cast<std::size_t>(ch)] *= inv;
}

template <typename T>
void gap_backward(int length, int channels, std::span<const T> grad_y, std::span<T> grad_x) {
  const T inv = T(1) / static_cast<T>(length);
  for (int t = 0; t < length; ++t)
    for (int ch = 0; ch < channels; ++ch)
      grad_x[static_cast<std::size_t>(t * channels + ch)] = grad_y[static_cast<std::size_t>(ch)] * inv;
}

/// y = x W + b, optionally followed by ReLU.
template <typename T>
void dense_forward(int in, int out, std::span<const T> weights, std::span<const T> bias,
                   std::span<const T> x, std::span<T> y, bool relu) {
  for (int o = 0; o < out; ++o) y[static_cast<std::size_t>(o)] = bias[static_cast<std::size_t>(o)];
  for (int i = 0; i < in; ++i) {
    const T v = x[static_cast<std::size_t>(i)];
    const T* row = weights.data() + static_cast<std::size_t>(i) * out;
    for (int o = 0; o < out; ++o) y[static_cast<std::size_t>(o)] += v * row[o];
  }
  if (relu)
    for (int o = 0; o < out; ++o)
      if (!(y[static_cast<std::size_t>(o)] > T(0))) y[static_cast<std::size_t>(o)] = T(0);
}

/// With `relu`, `grad_y` is masked in place using the post-activation `y`.
template <typename T>
void dense_backward(int in, int out, std::span<const T> weights, std::span<const T> x,
                    std::span<const T> y, bool relu, std::span<T> grad_y,
                    std::span<T> grad_weights, std::span<T> grad_bias, std::span<T> grad_x) {
  if (relu)
    for (int o = 0; o < out; ++o)
      if (!(y[static_cast<std::size_t>(o)] > T(0))) grad_y[static_cast<std::size_t>(o)] = T(0);
  for (int o = 0; o < out; ++o) grad_bias[static_cast<std::size_t>(o)] += grad_y[static_cast<std::size_t>(o)];
  for (int i = 0; i < in; ++i) {
    const T v = x[static_cast<std::size_t>(i)];
    const T* row = weights.data() + static_cast<std::size_t>(i) * out;
    T* grow = grad_weights.data() + static_cast<std::size_t>(i) * out;
    T acc = T(0);
    for (int o = 0; o < out; ++o) {
      grow[o] += v * grad_y[static_cast<std::size_t>(o)];
      acc += row[o] * grad_y[static_cast<std::size_t>(o)];
    }
    if (!grad_x.empty()) grad_x[static_cast<std::size_t>(i)] = acc;
  }
}

/// Stable softmax of `logits` into `probs`; returns -log p[label].
template <typename T>
T softmax_cross_entropy(std::span<const T> logits, int label, std::span<T> probs) {
  const T peak = *std::max_element(logits.begin(), logits.end());
  T sum = T(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - peak);
    sum += probs[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) probs[i] /= sum;
  return -(logits[static_cast<std::size_t>(label)] - peak - std::log(sum));
}

}  // namespace tinytnas::layers
