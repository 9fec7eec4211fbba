#include "tinytnas/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tinytnas {

void validate(const SearchConfig& cfg) {
  if (cfg.limits.ram_max == 0 || cfg.limits.flash_max == 0 || cfg.limits.mac_max == 0)
    throw std::invalid_argument("resource limits must be positive");
  if (cfg.search_time < Duration::zero())
    throw std::invalid_argument("search time must not be negative");
  if (cfg.candidate_epochs < 1) throw std::invalid_argument("candidate epochs must be >= 1");
  if (cfg.initial_k < 1) throw std::invalid_argument("initial k must be >= 1");
  if (cfg.initial_c < 0) throw std::invalid_argument("initial c must be >= 0");
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::main: return "main";
    case Phase::depth: return "depth";
    case Phase::pending: return "pending";
  }
  return "?";
}

std::optional<Phase> phase_from_string(std::string_view name) {
  if (name == "main") return Phase::main;
  if (name == "depth") return Phase::depth;
  if (name == "pending") return Phase::pending;
  return std::nullopt;
}

const char* to_string(StopReason reason) {
  return reason == StopReason::budget ? "budget" : "exhausted";
}

StatusUpdate update_status(int k, int c) {
  const int delta = k * kStatusMultiplier - k;
  const int incr = delta / kStatusDivider;
  StatusUpdate out{k, k * kStatusMultiplier, c, {}};
  if (incr >= 1)
    for (int i = 1; i <= kStatusDivider; ++i) out.pendings.emplace_back(k + i * incr, c);
  return out;
}

namespace {

void apply(SearchState& state, StatusUpdate update) {
  state.K = update.K;
  state.k = update.k;
  state.C = update.C;
  state.c = update.C;
  state.pendings = std::move(update.pendings);
}

}  // namespace

DepthOutcome explore_depth(double acc, SearchState& state, int max_depth,
                   const std::function<bool()>& has_time, const DepthProbe& probe) {
  std::vector<double> accs{0.0};
  std::vector<int> cs{0};
  for (int i = 0; i <= max_depth; ++i) {
    if (!has_time()) break;
    const auto depth_acc = probe(state.k, i);
    if (!depth_acc) break;
    accs.push_back(*depth_acc);
    cs.push_back(i);
  }
  // max_element returns the first maximum, so shallower depths win ties.
  const auto indx = static_cast<std::size_t>(
      std::distance(accs.begin(), std::max_element(accs.begin(), accs.end())));
  if (accs[indx] > acc) {
    apply(state, update_status(state.k, cs[indx]));
    return DepthOutcome::adopted;
  }
  if (!state.pendings.empty()) {
    std::tie(state.k, state.c) = state.pendings.back();
    state.pendings.pop_back();
    return DepthOutcome::popped;
  }
  return DepthOutcome::done;
}

// ---------------------------------------------------------------------------

TrainConfig candidate_train_config(const SearchConfig& cfg) {
  TrainConfig t;
  t.epochs = cfg.candidate_epochs;
  t.learning_rate = 0.001;
  t.batch_size = 64;
  t.seed = cfg.seed;
  return t;
}

TrainingEvaluator::TrainingEvaluator(const Dataset& ds, ProfilerConfig profiler,
                                     TrainConfig train_cfg)
    : ds_(ds), profiler_(profiler), train_cfg_(train_cfg) {}

std::optional<ResourceEstimate> TrainingEvaluator::profile(int k, int c) {
  try {
    return tinytnas::profile(build_arch_spec(k, c, ds_.meta), profiler_);
  } catch (const ShapeError&) {
    return std::nullopt;
  }
}

double TrainingEvaluator::train(int k, int c) {
  const auto spec = build_arch_spec(k, c, ds_.meta);
  TrainConfig cfg = train_cfg_;
  cfg.seed = mix_seed(train_cfg_.seed,
                      (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint32_t>(c));
  return train_candidate(spec, ds_, cfg);
}

// ---------------------------------------------------------------------------

SearchEngine::SearchEngine(InputShape input, SearchConfig cfg, CandidateEvaluator& evaluator,
                           const SearchClock& clock)
    : input_(input), cfg_(cfg), evaluator_(evaluator), clock_(clock) {
  validate(input_);
  validate(cfg_);
}

SearchEngine::Evaluation SearchEngine::evaluate(int k, int c, Phase phase, SearchResult& result,
                                                SearchState& state) {
  const auto started = clock_.elapsed();
  CandidateRecord record;
  record.k = k;
  record.c = c;
  record.phase = phase;
  const auto estimate = evaluator_.profile(k, c);
  record.resources = estimate.value_or(kShapeInfeasible);
  record.feasible = estimate && check_feasibility(*estimate, cfg_.limits);
  if (record.feasible) {
    if (const auto hit = state.memo.find({k, c}); hit != state.memo.end()) {
      record.accuracy = hit->second;
      record.from_memo = true;
    } else {
      double acc = 0.0;
      try {
        acc = evaluator_.train(k, c);
      } catch (const TrainingDiverged&) {
        acc = 0.0;
      }
      state.memo.emplace(KC{k, c}, acc);
      record.accuracy = acc;
    }
  }
  record.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(clock_.elapsed() - started).count();
  result.records.push_back(record);
  if (observer_) observer_(result.records.back());
  return {record.feasible, record.accuracy};
}

SearchResult SearchEngine::run() {
  SearchResult result;
  const int c_max = compute_c_max(input_.length);
  result.start_c = std::min(cfg_.initial_c, c_max);
  result.initial_c_clamped = result.start_c != cfg_.initial_c;

  SearchState state;
  state.k = state.K = cfg_.initial_k;
  state.c = state.C = result.start_c;

  auto has_time = [&] { return has_search_time(clock_.elapsed(), cfg_.search_time); };
  DepthProbe probe = [&](int k, int depth) -> std::optional<double> {
    const auto e = evaluate(k, depth, Phase::depth, result, state);
    if (!e.feasible) return std::nullopt;
    return e.accuracy;
  };

  Phase phase = Phase::main;
  while (true) {
    if (!has_time()) {
      result.stop_reason = StopReason::budget;
      break;
    }
    const auto e = evaluate(state.k, state.c, phase, result, state);
    const double acc = e.feasible ? e.accuracy : 0.0;
    if (e.feasible && state.max_acc_found < acc) {
      state.max_acc_found = acc;
      apply(state, update_status(state.k, state.c));
      phase = Phase::main;
      continue;
    }
    const auto outcome = explore_depth(acc, state, c_max, has_time, probe);
    if (outcome == DepthOutcome::done) {
      result.stop_reason = has_time() ? StopReason::exhausted : StopReason::budget;
      break;
    }
    phase = outcome == DepthOutcome::popped ? Phase::pending : Phase::main;
  }
  result.K = state.K;
  result.C = state.C;
  result.max_acc_found = state.max_acc_found;
  return result;
}

SearchResult run_search(const Dataset& ds, const SearchConfig& cfg,
                        SearchEngine::Observer observer) {
  if (!ds.has_split()) throw DataError("search needs a split dataset");
  TrainingEvaluator evaluator(ds, cfg.profiler, candidate_train_config(cfg));
  SteadySearchClock clock;
  SearchEngine engine(ds.meta, cfg, evaluator, clock);
  if (observer) engine.set_observer(std::move(observer));
  return engine.run();
}

}  // namespace tinytnas
