#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tinytnas/arch.hpp"
#include "tinytnas/profiler.hpp"
#include "tinytnas/search.hpp"

namespace tinytnas {

const char* engine_version();

struct ReportConfig {
  ResourceLimits limits;
  std::int64_t budget_ms = 0;
  std::uint64_t seed = 0;
  std::string profiler_profile = "exact-zero";
  ProfilerConfig profiler;
  int candidate_epochs = 4;
  double val_fraction = 0.2;
  std::string dataset_digest;
  InputShape input;
  int initial_k = 4;
  int initial_c = 3;
  std::string engine_version;
  bool deterministic = true;

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct ReportSummary {
  int K = 0;
  int C = 0;
  ResourceEstimate resources;
  double max_acc_found = 0.0;
  int start_c = 0;
  bool initial_c_clamped = false;
  std::string stop_reason;
  std::size_t record_count = 0;
  std::int64_t total_ms = 0;

  friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

/// Line-delimited JSON: one config line, one line per candidate, one summary line.
struct RunReport {
  ReportConfig config;
  std::vector<CandidateRecord> records;
  ReportSummary summary;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string render_config_line(const ReportConfig& cfg);
std::string render_record_line(const CandidateRecord& record);
std::string render_summary_line(const ReportSummary& summary);
std::string render_report(const RunReport& report);

/// Throws ReportError on malformed lines or a missing summary (truncated run).
RunReport parse_report(const std::string& text);
RunReport read_report(const std::filesystem::path& file);

/// {"ram_bytes":…,"flash_bytes":…,"mac_count":…}
std::string render_resources(const ResourceEstimate& est);
ResourceEstimate parse_resources(const std::string& json_text);

/// Appends and flushes one line per call so an interrupted run leaves a
/// readable prefix.
class ReportWriter {
 public:
  ReportWriter(const std::filesystem::path& file, const ReportConfig& cfg);
  void write(const CandidateRecord& record);
  void finish(const ReportSummary& summary);

 private:
  void line(const std::string& text);
  std::ofstream out_;
  std::filesystem::path file_;
};

/// Summary derived from a finished search; resources are re-profiled for (K, C).
ReportSummary summarize(const SearchResult& result, const InputShape& input,
                        const ProfilerConfig& profiler, std::int64_t total_ms);

}  // namespace tinytnas
