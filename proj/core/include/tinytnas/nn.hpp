#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tinytnas/arch.hpp"
#include "tinytnas/data.hpp"

namespace tinytnas {

template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

/// Trainable tensors in layer order. A DSConv owns three tensors
/// (depthwise [3 x C_in], pointwise [C_in x C_out], bias [C_out]); each
/// dense layer owns two (weights [in x out], bias [out]). Pooling owns none.
template <typename T>
struct ModelParams {
  std::vector<Tensor<T>> tensors;

  std::size_t parameter_count() const;
  bool all_finite() const;
  ModelParams zeros_like() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

std::vector<std::vector<int>> param_shapes(const ArchSpec& spec);

/// He-uniform for every ReLU-feeding weight, Glorot-uniform for the
/// classifier, zero biases.
template <typename T>
ModelParams<T> init_params(const ArchSpec& spec, std::uint64_t seed);

/// Throws ShapeError when `params` does not match the spec's tensor shapes.
template <typename T>
void check_params(const ArchSpec& spec, const ModelParams<T>& params);

/// `batch` is [B][length][channels]; returns [B][num_classes] probabilities.
template <typename T>
std::vector<T> forward(const ArchSpec& spec, const ModelParams<T>& params,
                       std::span<const T> batch);

template <typename T>
struct LossAndGradients {
  T loss{};
  ModelParams<T> gradients;
  std::vector<T> input_gradient;  // filled only when requested
};

/// Mean cross-entropy over the batch and its gradient w.r.t. every tensor.
template <typename T>
LossAndGradients<T> backward(const ArchSpec& spec, const ModelParams<T>& params,
                             std::span<const T> batch, std::span<const int> labels,
                             bool want_input_gradient = false);

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-7;

template <typename T>
struct AdamState {
  std::uint64_t step = 0;
  ModelParams<T> first_moment;
  ModelParams<T> second_moment;
};

template <typename T>
AdamState<T> make_adam_state(const ModelParams<T>& params);

template <typename T>
void adam_step(ModelParams<T>& params, const ModelParams<T>& gradients, AdamState<T>& state,
               double learning_rate);

struct PlateauSchedule {
  double factor = 0.5;
  int patience = 20;
  double min_lr = 1e-5;
};

/// Max-mode plateau tracker: after `patience` epochs without a strict
/// improvement the rate is multiplied by `factor`, floored at `min_lr`.
class PlateauScheduler {
 public:
  PlateauScheduler(PlateauSchedule schedule, double initial_lr);

  /// Returns the learning rate to use for the next epoch.
  double on_epoch_end(double metric);
  double learning_rate() const { return lr_; }

 private:
  PlateauSchedule schedule_;
  double lr_;
  std::optional<double> best_;
  int wait_ = 0;
};

struct TrainConfig {
  int epochs = 4;
  double learning_rate = 0.001;
  int batch_size = 64;
  std::uint64_t seed = 0;
  std::optional<PlateauSchedule> plateau;
};

void validate(const TrainConfig& cfg);

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fraction of `indices` whose argmax prediction equals the label.
/// An empty index list gives 0.
double evaluate_accuracy(const ArchSpec& spec, const ModelParams<float>& params,
                         const Dataset& ds, std::span<const std::size_t> indices);

/// Short training used to rank candidates: exactly cfg.epochs epochs, then
/// accuracy on the validation split. Throws TrainingDiverged on a non-finite loss.
double train_candidate(const ArchSpec& spec, const Dataset& ds, const TrainConfig& cfg);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double learning_rate = 0.0;
};

struct FullTrainResult {
  ModelParams<float> best_params;
  double best_val_accuracy = 0.0;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

/// Long training with plateau learning-rate reduction and best-epoch
/// checkpointing on validation accuracy. cfg.plateau must be set.
FullTrainResult train_full(const ArchSpec& spec, const Dataset& ds, const TrainConfig& cfg);

/// TTNN container: "TTNN", u16 version, u16 tensor count, then per tensor
/// u8 rank, u32 dims, float32 payload; all little-endian.
void save_params(const ModelParams<float>& params, const std::filesystem::path& file);
ModelParams<float> load_params(const std::filesystem::path& file);
std::vector<std::uint8_t> encode_params(const ModelParams<float>& params);
ModelParams<float> decode_params(std::span<const std::uint8_t> bytes);

}  // namespace tinytnas
