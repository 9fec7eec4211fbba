#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tinytnas/arch.hpp"
#include "tinytnas/data.hpp"
#include "tinytnas/nn.hpp"
#include "tinytnas/profiler.hpp"

namespace tinytnas {

using Duration = std::chrono::nanoseconds;

/// Constraint regime the engine defaults to: 20 kB RAM, 64 kB FLASH,
/// 60 000 MACs, 10 minutes.
inline constexpr ResourceLimits kDefaultLimits{20 * 1024, 64 * 1024, 60'000};
inline constexpr std::chrono::minutes kDefaultSearchTime{10};

struct SearchConfig {
  ResourceLimits limits = kDefaultLimits;
  Duration search_time = kDefaultSearchTime;
  int candidate_epochs = 4;
  std::uint64_t seed = 0;
  ProfilerConfig profiler;
  int initial_k = 4;
  int initial_c = 3;
};

void validate(const SearchConfig& cfg);

using KC = std::pair<int, int>;

/// Live variables of the search loop.
struct SearchState {
  int k = 4;
  int c = 3;
  int K = 4;
  int C = 3;
  double max_acc_found = 0.0;
  std::vector<KC> pendings;  // popped from the back
  std::map<KC, double> memo;
};

enum class Phase { main, depth, pending };
const char* to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view name);

/// Sentinel resources reported for (k, c) pairs the input shape cannot host.
inline constexpr ResourceEstimate kShapeInfeasible{UINT64_MAX, UINT64_MAX, UINT64_MAX};

struct CandidateRecord {
  int k = 0;
  int c = 0;
  ResourceEstimate resources;
  bool feasible = false;
  double accuracy = 0.0;
  Phase phase = Phase::main;
  std::int64_t wall_ms = 0;
  bool from_memo = false;

  friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

struct StatusUpdate {
  int K = 0;
  int k = 0;
  int C = 0;
  std::vector<KC> pendings;
};

inline constexpr int kStatusMultiplier = 2;
inline constexpr int kStatusDivider = 4;

/// Accepts k as the new answer, doubles the probe and queues the
/// intermediate widths (k + i*floor(k/4), c) for i = 1..4 when that step is
/// at least 1. Previous pendings are discarded.
StatusUpdate update_status(int k, int c);

/// Strict: the budget is spent once elapsed reaches it.
inline bool has_search_time(Duration elapsed, Duration budget) { return elapsed < budget; }

/// Evaluates depth `i` for width `k`: nullopt when infeasible, otherwise the
/// short-training accuracy.
using DepthProbe = std::function<std::optional<double>(int k, int depth)>;

/// Depth exploration for the current width. Tries depths 0..max_depth until
/// the first infeasible one or budget exhaustion, then either adopts the best
/// depth (if it beats `acc`), pops a pending pair, or reports the search done.
/// Mutates state.k/c/K/C/pendings exactly as the main loop expects.
/// Anything but `done` means the search continues.
enum class DepthOutcome { adopted, popped, done };

DepthOutcome explore_depth(double acc, SearchState& state, int max_depth,
                   const std::function<bool()>& has_time, const DepthProbe& probe);

/// Pluggable build/profile/train step so the loop can run against mocks.
class CandidateEvaluator {
 public:
  virtual ~CandidateEvaluator() = default;
  /// nullopt when the architecture cannot be built for the input shape.
  virtual std::optional<ResourceEstimate> profile(int k, int c) = 0;
  /// Short-training accuracy. TrainingDiverged counts as accuracy 0.
  virtual double train(int k, int c) = 0;
};

class SearchClock {
 public:
  virtual ~SearchClock() = default;
  virtual Duration elapsed() const = 0;
};

class SteadySearchClock final : public SearchClock {
 public:
  SteadySearchClock() : start_(std::chrono::steady_clock::now()) {}
  void restart() { start_ = std::chrono::steady_clock::now(); }
  Duration elapsed() const override { return std::chrono::steady_clock::now() - start_; }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Clock that only moves when told to; used for budgets counted in steps.
class ManualSearchClock final : public SearchClock {
 public:
  void advance(Duration d) { now_ += d; }
  Duration elapsed() const override { return now_; }

 private:
  Duration now_{0};
};

/// Real evaluator: builds the architecture, profiles it, and trains it with
/// the candidate TrainConfig on the dataset's split.
class TrainingEvaluator final : public CandidateEvaluator {
 public:
  TrainingEvaluator(const Dataset& ds, ProfilerConfig profiler, TrainConfig train_cfg);
  std::optional<ResourceEstimate> profile(int k, int c) override;
  double train(int k, int c) override;

 private:
  const Dataset& ds_;
  ProfilerConfig profiler_;
  TrainConfig train_cfg_;
};

/// Candidate TrainConfig used by the search: Adam 0.001, batch 64.
TrainConfig candidate_train_config(const SearchConfig& cfg);

enum class StopReason { exhausted, budget };
const char* to_string(StopReason reason);

struct SearchResult {
  int K = 0;
  int C = 0;
  int start_c = 0;  // initial c after clamping to c_max
  bool initial_c_clamped = false;
  double max_acc_found = 0.0;
  StopReason stop_reason = StopReason::exhausted;
  std::vector<CandidateRecord> records;
};

class SearchEngine {
 public:
  using Observer = std::function<void(const CandidateRecord&)>;

  SearchEngine(InputShape input, SearchConfig cfg, CandidateEvaluator& evaluator,
               const SearchClock& clock);

  /// Called once per appended record, before the loop moves on.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  SearchResult run();

 private:
  struct Evaluation {
    bool feasible = false;
    double accuracy = 0.0;
  };
  Evaluation evaluate(int k, int c, Phase phase, SearchResult& result, SearchState& state);

  InputShape input_;
  SearchConfig cfg_;
  CandidateEvaluator& evaluator_;
  const SearchClock& clock_;
  Observer observer_;
};

/// Convenience wrapper: real evaluator and wall clock. `ds` must be split.
SearchResult run_search(const Dataset& ds, const SearchConfig& cfg,
                        SearchEngine::Observer observer = {});

}  // namespace tinytnas
