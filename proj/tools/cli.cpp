#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tinytnas/tinytnas.hpp"

namespace tinytnas::cli {

namespace {

struct CommonData {
  std::string data;
  double val_fraction = 0.2;
  std::optional<std::uint64_t> seed;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TINYTNAS_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw CLI::ValidationError("TINYTNAS_SEED", "must be an unsigned integer");
  }
  return 0;
}

Dataset prepare_dataset(const std::string& path, double val_fraction, std::uint64_t seed) {
  return normalize_zscore(split_stratified(load_dataset(path), val_fraction, seed));
}

std::string format_estimate(const ResourceEstimate& est) {
  std::ostringstream s;
  s << "RAM " << est.ram_bytes << " B (" << std::fixed << std::setprecision(1)
    << static_cast<double>(est.ram_bytes) / 1024.0 << " kB), FLASH " << est.flash_bytes
    << " B, MAC " << est.mac_count;
  return s.str();
}

struct SearchFlags {
  CommonData common;
  double ram_kb = 20;
  double flash_kb = 64;
  std::uint64_t mac = 60000;
  double time_min = 10;
  int epochs_per_candidate = 4;
  std::string profiler_profile = "exact-zero";
  std::string out = "tinytnas_run.jsonl";
};

int cmd_search(const SearchFlags& f, std::ostream& out, std::ostream& err) {
  const auto profiler = profiler_profile(f.profiler_profile);
  if (!profiler) {
    err << "unknown profiler profile '" << f.profiler_profile << "'\n";
    return kBadFlags;
  }
  const std::uint64_t seed = resolve_seed(f.common.seed);
  SearchConfig cfg;
  cfg.limits = {static_cast<std::uint64_t>(std::llround(f.ram_kb * 1024.0)),
                static_cast<std::uint64_t>(std::llround(f.flash_kb * 1024.0)), f.mac};
  cfg.search_time = std::chrono::duration_cast<Duration>(
      std::chrono::duration<double, std::ratio<60>>(f.time_min));
  cfg.candidate_epochs = f.epochs_per_candidate;
  cfg.seed = seed;
  cfg.profiler = *profiler;
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    err << "invalid search configuration: " << e.what() << '\n';
    return kBadFlags;
  }

  Dataset ds;
  try {
    ds = prepare_dataset(f.common.data, f.common.val_fraction, seed);
  } catch (const ShapeError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kBadData;
  } catch (const std::invalid_argument& e) {
    err << "invalid dataset options: " << e.what() << '\n';
    return kBadFlags;
  } catch (const DataError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kBadData;
  }

  ReportConfig rc;
  rc.limits = cfg.limits;
  rc.budget_ms = std::chrono::duration_cast<std::chrono::milliseconds>(cfg.search_time).count();
  rc.seed = seed;
  rc.profiler_profile = f.profiler_profile;
  rc.profiler = cfg.profiler;
  rc.candidate_epochs = cfg.candidate_epochs;
  rc.val_fraction = f.common.val_fraction;
  rc.dataset_digest = dataset_digest(ds);
  rc.input = ds.meta;
  rc.initial_k = cfg.initial_k;
  rc.initial_c = cfg.initial_c;
  rc.engine_version = engine_version();
  rc.deterministic = true;

  ReportWriter writer(f.out, rc);
  const auto started = std::chrono::steady_clock::now();
  const auto result = run_search(ds, cfg, [&](const CandidateRecord& r) {
    writer.write(r);
    err << "  [" << to_string(r.phase) << "] " << compact_name(r.k, r.c)
        << (r.feasible ? "" : " infeasible")
        << (r.feasible ? " acc=" + std::to_string(r.accuracy) : std::string())
        << (r.from_memo ? " (memo)" : "") << '\n';
  });
  const auto total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  const auto summary = summarize(result, ds.meta, cfg.profiler, total_ms);
  writer.finish(summary);

  out << describe(build_arch_spec(result.K, result.C, ds.meta));
  out << "resources: " << format_estimate(summary.resources) << '\n';
  out << "candidate accuracy: " << result.max_acc_found << "  candidates: " << result.records.size()
      << "  stop: " << to_string(result.stop_reason) << "  elapsed: " << total_ms << " ms\n";
  if (result.initial_c_clamped)
    out << "note: initial c clamped to " << result.start_c << " for input length "
        << ds.meta.length << '\n';
  out << "report: " << f.out << '\n';
  return kOk;
}

struct ProfileFlags {
  int k = 4;
  int c = 0;
  int length = 0;
  int channels = 0;
  int classes = 0;
  std::string profiler_profile = "exact-zero";
};

int cmd_profile(const ProfileFlags& f, std::ostream& out, std::ostream& err) {
  const auto profiler = profiler_profile(f.profiler_profile);
  if (!profiler) {
    err << "unknown profiler profile '" << f.profiler_profile << "'\n";
    return kBadFlags;
  }
  try {
    const auto spec = build_arch_spec(f.k, f.c, {f.length, f.channels, f.classes});
    err << describe(spec);
    out << render_resources(profile(spec, *profiler)) << '\n';
    return kOk;
  } catch (const ShapeError& e) {
    err << "shape error: " << e.what() << '\n';
    return kBadFlags;
  }
}

struct TrainFlags {
  CommonData common;
  int k = 4;
  int c = 0;
  int epochs = 200;
  double lr = 0.001;
  int batch_size = 64;
  double plateau_factor = 0.5;
  int plateau_patience = 20;
  double min_lr = 1e-5;
  std::string out = "model.ttnn";
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  Dataset ds;
  try {
    ds = prepare_dataset(f.common.data, f.common.val_fraction, seed);
  } catch (const ShapeError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kBadData;
  } catch (const std::invalid_argument& e) {
    err << "invalid dataset options: " << e.what() << '\n';
    return kBadFlags;
  } catch (const DataError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kBadData;
  }
  ArchSpec spec;
  TrainConfig cfg;
  try {
    spec = build_arch_spec(f.k, f.c, ds.meta);
    cfg.epochs = f.epochs;
    cfg.learning_rate = f.lr;
    cfg.batch_size = f.batch_size;
    cfg.seed = seed;
    cfg.plateau = PlateauSchedule{f.plateau_factor, f.plateau_patience, f.min_lr};
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    err << "invalid training configuration: " << e.what() << '\n';
    return kBadFlags;
  }
  err << describe(spec);
  const auto result = train_full(spec, ds, cfg);
  out << "epoch,train_loss,val_accuracy,learning_rate\n";
  out << std::setprecision(17);
  for (const auto& h : result.history)
    out << h.epoch << ',' << h.train_loss << ',' << h.val_accuracy << ',' << h.learning_rate
        << '\n';
  save_params(result.best_params, f.out);
  out << "best_epoch=" << result.best_epoch << '\n';
  out << "best_val_accuracy=" << result.best_val_accuracy << '\n';
  out << "saved=" << f.out << '\n';
  return kOk;
}

struct EvaluateFlags {
  CommonData common;
  int k = 4;
  int c = 0;
  std::string params;
};

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(f.common.seed);
  Dataset ds;
  try {
    ds = prepare_dataset(f.common.data, f.common.val_fraction, seed);
  } catch (const DataError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kBadData;
  }
  try {
    const auto spec = build_arch_spec(f.k, f.c, ds.meta);
    const auto params = load_params(f.params);
    out << std::setprecision(17)
        << "val_accuracy=" << evaluate_accuracy(spec, params, ds, ds.split.validation) << '\n';
    return kOk;
  } catch (const ShapeError& e) {
    err << "shape error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const DataError& e) {
    err << "parameter file error: " << e.what() << '\n';
    return kBadData;
  }
}

struct SynthFlags {
  SyntheticWaveformOptions opts;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_synth(SynthFlags f, std::ostream& out, std::ostream&) {
  f.opts.seed = resolve_seed(f.seed);
  const auto ds = make_synthetic_waveforms(f.opts);
  if (std::filesystem::path(f.out).extension() == ".csv")
    save_csv(ds, f.out);
  else
    save_tts1(ds, f.out);
  out << "wrote " << ds.size() << " windows (L=" << ds.meta.length << ", C=" << ds.meta.channels
      << ", classes=3) to " << f.out << '\n';
  return kOk;
}

void add_common(CLI::App* app, CommonData& c, bool data_required = true) {
  auto* opt = app->add_option("--data", c.data, "TTS1 dataset directory or CSV file");
  if (data_required) opt->required();
  app->add_option("--val-fraction", c.val_fraction, "Validation fraction per class")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", c.seed, "Seed (falls back to $TINYTNAS_SEED, then 0)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-bound hardware-aware architecture search for TinyML time series",
               "tinytnas"};
  app.require_subcommand(1);

  SearchFlags sf;
  auto* search = app.add_subcommand("search", "Run the architecture search");
  add_common(search, sf.common);
  search->add_option("--ram-kb", sf.ram_kb, "RAM limit in kB")->capture_default_str();
  search->add_option("--flash-kb", sf.flash_kb, "FLASH limit in kB")->capture_default_str();
  search->add_option("--mac", sf.mac, "MAC limit")->capture_default_str();
  search->add_option("--time-min", sf.time_min, "Search budget in minutes")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  search->add_option("--epochs-per-candidate", sf.epochs_per_candidate)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  search->add_option("--profiler-profile", sf.profiler_profile, "exact-zero | mcu-default")
      ->check(CLI::IsMember({"exact-zero", "mcu-default"}))
      ->capture_default_str();
  search->add_option("--out", sf.out, "Report file (JSON lines)")->capture_default_str();

  ProfileFlags pf;
  auto* prof = app.add_subcommand("profile", "Profile one architecture");
  prof->add_option("--k", pf.k)->required();
  prof->add_option("--c", pf.c)->required();
  prof->add_option("--length", pf.length)->required();
  prof->add_option("--channels", pf.channels)->required();
  prof->add_option("--classes", pf.classes)->required();
  prof->add_option("--profiler-profile", pf.profiler_profile)
      ->check(CLI::IsMember({"exact-zero", "mcu-default"}))
      ->capture_default_str();

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Fully train one architecture");
  add_common(train, tf.common);
  train->add_option("--k", tf.k)->required();
  train->add_option("--c", tf.c)->required();
  train->add_option("--epochs", tf.epochs)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", tf.lr)->capture_default_str();
  train->add_option("--batch-size", tf.batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--plateau-factor", tf.plateau_factor)->capture_default_str();
  train->add_option("--plateau-patience", tf.plateau_patience)->capture_default_str();
  train->add_option("--min-lr", tf.min_lr)->capture_default_str();
  train->add_option("--out", tf.out, "Best-epoch parameters (TTNN)")->capture_default_str();

  EvaluateFlags ef;
  auto* evaluate = app.add_subcommand("evaluate", "Validation accuracy of saved parameters");
  add_common(evaluate, ef.common);
  evaluate->add_option("--k", ef.k)->required();
  evaluate->add_option("--c", ef.c)->required();
  evaluate->add_option("--params", ef.params)->required();

  SynthFlags yf;
  auto* synth = app.add_subcommand("synth", "Write the synthetic sine/square/sawtooth dataset");
  synth->add_option("--out", yf.out, "TTS1 directory, or a path ending in .csv")->required();
  synth->add_option("--windows", yf.opts.windows)->capture_default_str();
  synth->add_option("--length", yf.opts.length)->capture_default_str();
  synth->add_option("--channels", yf.opts.channels)->capture_default_str();
  synth->add_option("--noise", yf.opts.noise_sigma)->capture_default_str();
  synth->add_option("--seed", yf.seed);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kBadFlags;
  }

  try {
    if (*search) return cmd_search(sf, out, err);
    if (*prof) return cmd_profile(pf, out, err);
    if (*train) return cmd_train(tf, out, err);
    if (*evaluate) return cmd_evaluate(ef, out, err);
    if (*synth) return cmd_synth(yf, out, err);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kBadFlags;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kBadData;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << '\n';
    return kInternalFailure;
  }
  return kBadFlags;
}

}  // namespace tinytnas::cli
