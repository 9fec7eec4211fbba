#include "tinytnas/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "tinytnas/detail/layers.hpp"

namespace tinytnas {

// ---------------------------------------------------------------------------
// ModelParams

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

template <typename T>
bool ModelParams<T>::all_finite() const {
  for (const auto& t : tensors)
    for (T v : t.values)
      if (!std::isfinite(v)) return false;
  return true;
}

template <typename T>
ModelParams<T> ModelParams<T>::zeros_like() const {
  ModelParams out;
  out.tensors.reserve(tensors.size());
  for (const auto& t : tensors) out.tensors.push_back({t.shape, std::vector<T>(t.size(), T(0))});
  return out;
}

std::vector<std::vector<int>> param_shapes(const ArchSpec& spec) {
  std::vector<std::vector<int>> shapes;
  for (const auto& layer : spec.layers) {
    switch (layer.kind) {
      case LayerKind::DepthwiseSeparableConv1D:
        shapes.push_back({layer.kernel_size, layer.in_channels});
        shapes.push_back({layer.in_channels, layer.out_channels});
        shapes.push_back({layer.out_channels});
        break;
      case LayerKind::DenseReLU:
      case LayerKind::DenseSoftmax:
        shapes.push_back({layer.in_channels, layer.out_channels});
        shapes.push_back({layer.out_channels});
        break;
      case LayerKind::MaxPool1D:
      case LayerKind::GlobalAveragePool1D:
        break;
    }
  }
  return shapes;
}

namespace {

std::size_t element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

template <typename T>
void fill_uniform(std::vector<T>& values, double limit, std::mt19937_64& rng) {
  for (auto& v : values) v = static_cast<T>((2.0 * uniform01(rng) - 1.0) * limit);
}

}  // namespace

template <typename T>
ModelParams<T> init_params(const ArchSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModelParams<T> params;
  auto add = [&](std::vector<int> shape, double limit) {
    Tensor<T> t{std::move(shape), {}};
    t.values.assign(element_count(t.shape), T(0));
    if (limit > 0.0) fill_uniform(t.values, limit, rng);
    params.tensors.push_back(std::move(t));
  };
  for (const auto& layer : spec.layers) {
    switch (layer.kind) {
      case LayerKind::DepthwiseSeparableConv1D:
        add({layer.kernel_size, layer.in_channels}, std::sqrt(6.0 / layer.kernel_size));
        add({layer.in_channels, layer.out_channels}, std::sqrt(6.0 / layer.in_channels));
        add({layer.out_channels}, 0.0);
        break;
      case LayerKind::DenseReLU:
        add({layer.in_channels, layer.out_channels}, std::sqrt(6.0 / layer.in_channels));
        add({layer.out_channels}, 0.0);
        break;
      case LayerKind::DenseSoftmax:
        add({layer.in_channels, layer.out_channels},
            std::sqrt(6.0 / (layer.in_channels + layer.out_channels)));
        add({layer.out_channels}, 0.0);
        break;
      case LayerKind::MaxPool1D:
      case LayerKind::GlobalAveragePool1D:
        break;
    }
  }
  return params;
}

template <typename T>
void check_params(const ArchSpec& spec, const ModelParams<T>& params) {
  const auto shapes = param_shapes(spec);
  if (shapes.size() != params.tensors.size())
    throw ShapeError("parameter tensor count " + std::to_string(params.tensors.size()) +
                     " does not match architecture (" + std::to_string(shapes.size()) + ")");
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& t = params.tensors[i];
    if (t.shape != shapes[i] || t.values.size() != element_count(shapes[i]))
      throw ShapeError("parameter tensor " + std::to_string(i) + " has the wrong shape");
  }
}

// ---------------------------------------------------------------------------
// Network: per-sample activation and gradient buffers for one ArchSpec.

namespace {

template <typename T>
class Network {
 public:
  explicit Network(const ArchSpec& spec) : spec_(spec) {
    std::size_t tensor = 0;
    std::size_t max_mid = 0;
    for (const auto& layer : spec.layers) {
      const auto out_n = static_cast<std::size_t>(layer.out_length) * layer.out_channels;
      acts_.emplace_back(out_n, T(0));
      grads_.emplace_back(out_n, T(0));
      first_tensor_.push_back(tensor);
      switch (layer.kind) {
        case LayerKind::DepthwiseSeparableConv1D: {
          const auto mid_n = static_cast<std::size_t>(layer.in_length) * layer.in_channels;
          mids_.emplace_back(mid_n, T(0));
          max_mid = std::max(max_mid, mid_n);
          argmax_.emplace_back();
          tensor += 3;
          break;
        }
        case LayerKind::MaxPool1D:
          mids_.emplace_back();
          argmax_.emplace_back(out_n, 0);
          break;
        case LayerKind::DenseReLU:
        case LayerKind::DenseSoftmax:
          mids_.emplace_back();
          argmax_.emplace_back();
          tensor += 2;
          break;
        case LayerKind::GlobalAveragePool1D:
          mids_.emplace_back();
          argmax_.emplace_back();
          break;
      }
    }
    grad_mid_.assign(max_mid, T(0));
    probs_.assign(static_cast<std::size_t>(spec.input.num_classes), T(0));
  }

  /// Returns probabilities for a single window. `loss_label` >= 0 also
  /// computes the cross-entropy into `loss`.
  std::span<const T> forward(const ModelParams<T>& p, std::span<const T> x, int loss_label,
                             T* loss) {
    namespace L = layers;
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
      const auto& layer = spec_.layers[i];
      const std::span<const T> in = i == 0 ? x : std::span<const T>(acts_[i - 1]);
      std::span<T> out(acts_[i]);
      const std::size_t ti = first_tensor_[i];
      switch (layer.kind) {
        case LayerKind::DepthwiseSeparableConv1D:
          L::dsconv_forward<T>(layer.in_length, layer.in_channels, layer.out_channels,
                               p.tensors[ti].values, p.tensors[ti + 1].values,
                               p.tensors[ti + 2].values, in, mids_[i], out);
          break;
        case LayerKind::MaxPool1D:
          L::maxpool_forward<T>(layer.in_length, layer.in_channels, in, out, argmax_[i]);
          break;
        case LayerKind::GlobalAveragePool1D:
          L::gap_forward<T>(layer.in_length, layer.in_channels, in, out);
          break;
        case LayerKind::DenseReLU:
        case LayerKind::DenseSoftmax:
          L::dense_forward<T>(layer.in_channels, layer.out_channels, p.tensors[ti].values,
                              p.tensors[ti + 1].values, in, out,
                              layer.kind == LayerKind::DenseReLU);
          break;
      }
    }
    const std::span<const T> logits(acts_.back());
    const T l = layers::softmax_cross_entropy<T>(logits, loss_label < 0 ? 0 : loss_label,
                                                 probs_);
    if (loss) *loss = l;
    return probs_;
  }

  /// Forward + backward for one window, adding `scale` * dloss/dparam into
  /// `grads`. Returns the unscaled sample loss.
  T accumulate(const ModelParams<T>& p, std::span<const T> x, int label, T scale,
               ModelParams<T>& grads, std::span<T> grad_input) {
    namespace L = layers;
    T loss{};
    forward(p, x, label, &loss);
    auto& g_last = grads_.back();
    for (std::size_t o = 0; o < g_last.size(); ++o)
      g_last[o] = (probs_[o] - (static_cast<int>(o) == label ? T(1) : T(0))) * scale;

    for (std::size_t i = spec_.layers.size(); i-- > 0;) {
      const auto& layer = spec_.layers[i];
      const std::span<const T> in = i == 0 ? x : std::span<const T>(acts_[i - 1]);
      const std::span<T> grad_in = i == 0 ? grad_input : std::span<T>(grads_[i - 1]);
      std::span<T> grad_out(grads_[i]);
      const std::size_t ti = first_tensor_[i];
      switch (layer.kind) {
        case LayerKind::DepthwiseSeparableConv1D:
          L::dsconv_backward<T>(layer.in_length, layer.in_channels, layer.out_channels,
                                p.tensors[ti].values, p.tensors[ti + 1].values, in, mids_[i],
                                acts_[i], grad_out, grads.tensors[ti].values,
                                grads.tensors[ti + 1].values, grads.tensors[ti + 2].values,
                                grad_mid_, grad_in);
          break;
        case LayerKind::MaxPool1D:
          L::maxpool_backward<T>(layer.in_length, layer.in_channels, argmax_[i], grad_out,
                                 grad_in);
          break;
        case LayerKind::GlobalAveragePool1D:
          L::gap_backward<T>(layer.in_length, layer.in_channels, grad_out, grad_in);
          break;
        case LayerKind::DenseReLU:
        case LayerKind::DenseSoftmax:
          L::dense_backward<T>(layer.in_channels, layer.out_channels, p.tensors[ti].values, in,
                               acts_[i], layer.kind == LayerKind::DenseReLU, grad_out,
                               grads.tensors[ti].values, grads.tensors[ti + 1].values, grad_in);
          break;
      }
    }
    return loss;
  }

 private:
  const ArchSpec& spec_;
  std::vector<std::vector<T>> acts_;
  std::vector<std::vector<T>> grads_;
  std::vector<std::vector<T>> mids_;
  std::vector<std::vector<int>> argmax_;
  std::vector<std::size_t> first_tensor_;
  std::vector<T> grad_mid_;
  std::vector<T> probs_;
};

std::size_t batch_count(const ArchSpec& spec, std::size_t values) {
  const auto window =
      static_cast<std::size_t>(spec.input.length) * static_cast<std::size_t>(spec.input.channels);
  if (values == 0 || values % window != 0)
    throw ShapeError("batch of " + std::to_string(values) +
                     " values is not a whole number of windows of " + std::to_string(window));
  return values / window;
}

}  // namespace

template <typename T>
std::vector<T> forward(const ArchSpec& spec, const ModelParams<T>& params,
                       std::span<const T> batch) {
  check_params(spec, params);
  const std::size_t n = batch_count(spec, batch.size());
  const std::size_t window = batch.size() / n;
  const auto classes = static_cast<std::size_t>(spec.input.num_classes);
  Network<T> net(spec);
  std::vector<T> out(n * classes);
  for (std::size_t b = 0; b < n; ++b) {
    const auto probs = net.forward(params, batch.subspan(b * window, window), -1, nullptr);
    std::copy(probs.begin(), probs.end(), out.begin() + static_cast<std::ptrdiff_t>(b * classes));
  }
  return out;
}

template <typename T>
LossAndGradients<T> backward(const ArchSpec& spec, const ModelParams<T>& params,
                             std::span<const T> batch, std::span<const int> labels,
                             bool want_input_gradient) {
  check_params(spec, params);
  const std::size_t n = batch_count(spec, batch.size());
  if (labels.size() != n)
    throw ShapeError("label count " + std::to_string(labels.size()) + " != batch size " +
                     std::to_string(n));
  for (int label : labels)
    if (label < 0 || label >= spec.input.num_classes)
      throw LabelRangeError("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(spec.input.num_classes) + ")");
  const std::size_t window = batch.size() / n;
  LossAndGradients<T> result{T(0), params.zeros_like(), {}};
  if (want_input_gradient) result.input_gradient.assign(batch.size(), T(0));
  Network<T> net(spec);
  const T scale = T(1) / static_cast<T>(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::span<T> grad_in;
    if (want_input_gradient) grad_in = std::span<T>(result.input_gradient).subspan(b * window, window);
    result.loss += net.accumulate(params, batch.subspan(b * window, window), labels[b], scale,
                                  result.gradients, grad_in);
  }
  result.loss *= scale;
  return result;
}

// ---------------------------------------------------------------------------
// Adam

template <typename T>
AdamState<T> make_adam_state(const ModelParams<T>& params) {
  return {0, params.zeros_like(), params.zeros_like()};
}

template <typename T>
void adam_step(ModelParams<T>& params, const ModelParams<T>& gradients, AdamState<T>& state,
               double learning_rate) {
  if (state.first_moment.tensors.size() != params.tensors.size()) {
    state.first_moment = params.zeros_like();
    state.second_moment = params.zeros_like();
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(kAdamBeta1, t);
  const double correction2 = 1.0 - std::pow(kAdamBeta2, t);
  const T b1 = static_cast<T>(kAdamBeta1);
  const T b2 = static_cast<T>(kAdamBeta2);
  for (std::size_t i = 0; i < params.tensors.size(); ++i) {
    auto& p = params.tensors[i].values;
    const auto& g = gradients.tensors[i].values;
    auto& m = state.first_moment.tensors[i].values;
    auto& v = state.second_moment.tensors[i].values;
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = b1 * m[j] + (T(1) - b1) * g[j];
      v[j] = b2 * v[j] + (T(1) - b2) * g[j] * g[j];
      const double m_hat = static_cast<double>(m[j]) / correction1;
      const double v_hat = static_cast<double>(v[j]) / correction2;
      p[j] -= static_cast<T>(learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEpsilon));
    }
  }
}

// ---------------------------------------------------------------------------
// Plateau schedule

PlateauScheduler::PlateauScheduler(PlateauSchedule schedule, double initial_lr)
    : schedule_(schedule), lr_(initial_lr) {}

double PlateauScheduler::on_epoch_end(double metric) {
  if (!best_ || metric > *best_) {
    best_ = metric;
    wait_ = 0;
    return lr_;
  }
  if (++wait_ >= schedule_.patience) {
    lr_ = std::max(lr_ * schedule_.factor, std::min(lr_, schedule_.min_lr));
    wait_ = 0;
  }
  return lr_;
}

// ---------------------------------------------------------------------------
// Training

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (cfg.plateau) {
    const auto& s = *cfg.plateau;
    if (!(s.factor > 0.0 && s.factor < 1.0))
      throw std::invalid_argument("plateau factor must be in (0, 1)");
    if (s.patience < 1) throw std::invalid_argument("plateau patience must be >= 1");
    if (!(s.min_lr > 0.0)) throw std::invalid_argument("plateau min_lr must be > 0");
  }
}

namespace {

void check_dataset_matches(const ArchSpec& spec, const Dataset& ds) {
  if (!(ds.meta == spec.input))
    throw ShapeError("dataset shape does not match the architecture input");
  if (!ds.has_split()) throw DataError("dataset has no train/validation split");
}

/// Shared epoch loop for candidate and full training.
class Trainer {
 public:
  Trainer(const ArchSpec& spec, const Dataset& ds, const TrainConfig& cfg)
      : spec_(spec),
        ds_(ds),
        cfg_(cfg),
        net_(spec),
        params_(init_params<float>(spec, mix_seed(cfg.seed, 1))),
        grads_(params_.zeros_like()),
        adam_(make_adam_state(params_)),
        rng_(mix_seed(cfg.seed, 2)),
        order_(ds.split.train) {}

  /// One pass over the shuffled training split; returns the mean sample loss.
  double run_epoch(double learning_rate) {
    seeded_shuffle(order_.begin(), order_.end(), rng_);
    const auto batch = static_cast<std::size_t>(cfg_.batch_size);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order_.size(); start += batch) {
      const std::size_t end = std::min(order_.size(), start + batch);
      for (auto& t : grads_.tensors) std::fill(t.values.begin(), t.values.end(), 0.0f);
      const float scale = 1.0f / static_cast<float>(end - start);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t idx = order_[i];
        batch_loss += net_.accumulate(params_, ds_.window(idx), ds_.labels[idx], scale, grads_, {});
      }
      if (!std::isfinite(batch_loss))
        throw TrainingDiverged("non-finite loss while training " + compact_name(spec_));
      adam_step(params_, grads_, adam_, learning_rate);
      if (!params_.all_finite())
        throw TrainingDiverged("non-finite parameters while training " + compact_name(spec_));
      loss_sum += batch_loss;
    }
    return order_.empty() ? 0.0 : loss_sum / static_cast<double>(order_.size());
  }

  const ModelParams<float>& params() const { return params_; }

 private:
  const ArchSpec& spec_;
  const Dataset& ds_;
  const TrainConfig& cfg_;
  Network<float> net_;
  ModelParams<float> params_;
  ModelParams<float> grads_;
  AdamState<float> adam_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> order_;
};

}  // namespace

double evaluate_accuracy(const ArchSpec& spec, const ModelParams<float>& params,
                         const Dataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  check_params(spec, params);
  if (!(ds.meta == spec.input))
    throw ShapeError("dataset shape does not match the architecture input");
  Network<float> net(spec);
  std::size_t correct = 0;
  for (std::size_t idx : indices) {
    const auto probs = net.forward(params, ds.window(idx), -1, nullptr);
    const auto best = std::distance(probs.begin(), std::max_element(probs.begin(), probs.end()));
    if (best == ds.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

double train_candidate(const ArchSpec& spec, const Dataset& ds, const TrainConfig& cfg) {
  validate(cfg);
  check_dataset_matches(spec, ds);
  Trainer trainer(spec, ds, cfg);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) trainer.run_epoch(cfg.learning_rate);
  return evaluate_accuracy(spec, trainer.params(), ds, ds.split.validation);
}

FullTrainResult train_full(const ArchSpec& spec, const Dataset& ds, const TrainConfig& cfg) {
  validate(cfg);
  if (!cfg.plateau) throw std::invalid_argument("train_full requires a plateau schedule");
  check_dataset_matches(spec, ds);
  Trainer trainer(spec, ds, cfg);
  PlateauScheduler scheduler(*cfg.plateau, cfg.learning_rate);
  FullTrainResult result;
  result.best_val_accuracy = -1.0;
  result.history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double lr = scheduler.learning_rate();
    const double loss = trainer.run_epoch(lr);
    const double val = evaluate_accuracy(spec, trainer.params(), ds, ds.split.validation);
    result.history.push_back({epoch, loss, val, lr});
    if (val > result.best_val_accuracy) {
      result.best_val_accuracy = val;
      result.best_epoch = epoch;
      result.best_params = trainer.params();
    }
    scheduler.on_epoch_end(val);
  }
  return result;
}

// ---------------------------------------------------------------------------
// TTNN container

namespace {

constexpr char kMagic[4] = {'T', 'T', 'N', 'N'};
constexpr std::uint16_t kParamsVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t read(int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size())
      throw SizeMismatchError("TTNN container truncated at byte " + std::to_string(pos_));
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_params(const ModelParams<float>& params) {
  if (params.tensors.size() > 0xffff) throw std::length_error("too many tensors for TTNN");
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u16(out, kParamsVersion);
  put_u16(out, static_cast<std::uint16_t>(params.tensors.size()));
  for (const auto& t : params.tensors) {
    out.push_back(static_cast<std::uint8_t>(t.shape.size()));
    for (int d : t.shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : t.values) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      put_u32(out, bits);
    }
  }
  return out;
}

ModelParams<float> decode_params(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                                      [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; }))
    throw MalformedHeaderError("not a TTNN container");
  Reader r(bytes.subspan(4));
  const auto version = r.read(2);
  if (version != kParamsVersion)
    throw MalformedHeaderError("unsupported TTNN version " + std::to_string(version));
  const auto count = r.read(2);
  ModelParams<float> params;
  params.tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor<float> t;
    const auto rank = r.read(1);
    std::size_t n = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
      const auto dim = r.read(4);
      t.shape.push_back(static_cast<int>(dim));
      n *= dim;
    }
    t.values.resize(n);
    for (auto& v : t.values) {
      const std::uint32_t bits = r.read(4);
      std::memcpy(&v, &bits, sizeof v);
    }
    params.tensors.push_back(std::move(t));
  }
  if (!r.done()) throw SizeMismatchError("trailing bytes after TTNN payload");
  return params;
}

void save_params(const ModelParams<float>& params, const std::filesystem::path& file) {
  const auto bytes = encode_params(params);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + file.string());
}

ModelParams<float> load_params(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_params(bytes);
}

template struct ModelParams<float>;
template struct ModelParams<double>;
template ModelParams<float> init_params<float>(const ArchSpec&, std::uint64_t);
template ModelParams<double> init_params<double>(const ArchSpec&, std::uint64_t);
template void check_params<float>(const ArchSpec&, const ModelParams<float>&);
template void check_params<double>(const ArchSpec&, const ModelParams<double>&);
template std::vector<float> forward<float>(const ArchSpec&, const ModelParams<float>&,
                                           std::span<const float>);
template std::vector<double> forward<double>(const ArchSpec&, const ModelParams<double>&,
                                             std::span<const double>);
template LossAndGradients<float> backward<float>(const ArchSpec&, const ModelParams<float>&,
                                                 std::span<const float>, std::span<const int>, bool);
template LossAndGradients<double> backward<double>(const ArchSpec&, const ModelParams<double>&,
                                                   std::span<const double>, std::span<const int>,
                                                   bool);
template AdamState<float> make_adam_state<float>(const ModelParams<float>&);
template AdamState<double> make_adam_state<double>(const ModelParams<double>&);
template void adam_step<float>(ModelParams<float>&, const ModelParams<float>&, AdamState<float>&,
                               double);
template void adam_step<double>(ModelParams<double>&, const ModelParams<double>&,
                                AdamState<double>&, double);

}  // namespace tinytnas
