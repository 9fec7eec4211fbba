#include "tinytnas/report.hpp"

#include <sstream>

#include "json.hpp"

#ifndef TINYTNAS_VERSION_STRING
#define TINYTNAS_VERSION_STRING "0.0.0"
#endif

namespace tinytnas {

using json = nlohmann::ordered_json;

const char* engine_version() { return "tinytnas " TINYTNAS_VERSION_STRING; }

namespace {

json resources_json(const ResourceEstimate& est) {
  return {{"ram_bytes", est.ram_bytes},
          {"flash_bytes", est.flash_bytes},
          {"mac_count", est.mac_count}};
}

ResourceEstimate resources_from(const json& j) {
  return {j.at("ram_bytes").get<std::uint64_t>(), j.at("flash_bytes").get<std::uint64_t>(),
          j.at("mac_count").get<std::uint64_t>()};
}

ReportConfig config_from(const json& j) {
  ReportConfig cfg;
  const auto& limits = j.at("limits");
  cfg.limits = {limits.at("ram_max").get<std::uint64_t>(),
                limits.at("flash_max").get<std::uint64_t>(),
                limits.at("mac_max").get<std::uint64_t>()};
  cfg.budget_ms = j.at("budget_ms").get<std::int64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.profiler_profile = j.at("profiler_profile").get<std::string>();
  cfg.profiler = {j.at("arena_overhead_bytes").get<std::uint64_t>(),
                  j.at("model_overhead_bytes").get<std::uint64_t>()};
  cfg.candidate_epochs = j.at("candidate_epochs").get<int>();
  cfg.val_fraction = j.at("val_fraction").get<double>();
  cfg.dataset_digest = j.at("dataset_digest").get<std::string>();
  const auto& input = j.at("input");
  cfg.input = {input.at("length").get<int>(), input.at("channels").get<int>(),
               input.at("num_classes").get<int>()};
  cfg.initial_k = j.at("initial_k").get<int>();
  cfg.initial_c = j.at("initial_c").get<int>();
  cfg.engine_version = j.at("engine_version").get<std::string>();
  cfg.deterministic = j.at("deterministic").get<bool>();
  return cfg;
}

CandidateRecord record_from(const json& j) {
  CandidateRecord r;
  r.k = j.at("k").get<int>();
  r.c = j.at("c").get<int>();
  r.resources = resources_from(j.at("resources"));
  r.feasible = j.at("feasible").get<bool>();
  r.accuracy = j.at("accuracy").get<double>();
  const auto phase = phase_from_string(j.at("phase").get<std::string>());
  if (!phase) throw ReportError("unknown phase in report record");
  r.phase = *phase;
  r.wall_ms = j.at("wall_ms").get<std::int64_t>();
  r.from_memo = j.at("from_memo").get<bool>();
  return r;
}

ReportSummary summary_from(const json& j) {
  ReportSummary s;
  s.K = j.at("K").get<int>();
  s.C = j.at("C").get<int>();
  s.resources = resources_from(j.at("resources"));
  s.max_acc_found = j.at("max_acc_found").get<double>();
  s.start_c = j.at("start_c").get<int>();
  s.initial_c_clamped = j.at("initial_c_clamped").get<bool>();
  s.stop_reason = j.at("stop_reason").get<std::string>();
  s.record_count = j.at("record_count").get<std::size_t>();
  s.total_ms = j.at("total_ms").get<std::int64_t>();
  return s;
}

}  // namespace

std::string render_config_line(const ReportConfig& cfg) {
  json j = {{"type", "config"},
            {"engine_version", cfg.engine_version},
            {"limits",
             {{"ram_max", cfg.limits.ram_max},
              {"flash_max", cfg.limits.flash_max},
              {"mac_max", cfg.limits.mac_max}}},
            {"budget_ms", cfg.budget_ms},
            {"seed", cfg.seed},
            {"profiler_profile", cfg.profiler_profile},
            {"arena_overhead_bytes", cfg.profiler.arena_overhead_bytes},
            {"model_overhead_bytes", cfg.profiler.model_overhead_bytes},
            {"candidate_epochs", cfg.candidate_epochs},
            {"val_fraction", cfg.val_fraction},
            {"dataset_digest", cfg.dataset_digest},
            {"input",
             {{"length", cfg.input.length},
              {"channels", cfg.input.channels},
              {"num_classes", cfg.input.num_classes}}},
            {"initial_k", cfg.initial_k},
            {"initial_c", cfg.initial_c},
            {"deterministic", cfg.deterministic}};
  return j.dump();
}

std::string render_record_line(const CandidateRecord& r) {
  json j = {{"type", "candidate"},
            {"arch", compact_name(r.k, r.c)},
            {"k", r.k},
            {"c", r.c},
            {"phase", to_string(r.phase)},
            {"feasible", r.feasible},
            {"accuracy", r.accuracy},
            {"from_memo", r.from_memo},
            {"resources", resources_json(r.resources)},
            {"wall_ms", r.wall_ms}};
  return j.dump();
}

std::string render_summary_line(const ReportSummary& s) {
  json j = {{"type", "summary"},
            {"arch", compact_name(s.K, s.C)},
            {"K", s.K},
            {"C", s.C},
            {"resources", resources_json(s.resources)},
            {"max_acc_found", s.max_acc_found},
            {"start_c", s.start_c},
            {"initial_c_clamped", s.initial_c_clamped},
            {"stop_reason", s.stop_reason},
            {"record_count", s.record_count},
            {"total_ms", s.total_ms}};
  return j.dump();
}

std::string render_report(const RunReport& report) {
  std::string out = render_config_line(report.config) + '\n';
  for (const auto& r : report.records) out += render_record_line(r) + '\n';
  out += render_summary_line(report.summary) + '\n';
  return out;
}

RunReport parse_report(const std::string& text) {
  RunReport report;
  bool have_config = false;
  bool have_summary = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_summary) throw ReportError("content after summary line " + std::to_string(line_no));
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type"))
      throw ReportError("malformed report line " + std::to_string(line_no));
    try {
      const auto type = j.at("type").get<std::string>();
      if (type == "config") {
        if (have_config) throw ReportError("duplicate config line");
        report.config = config_from(j);
        have_config = true;
      } else if (!have_config) {
        throw ReportError("report does not start with a config line");
      } else if (type == "candidate") {
        report.records.push_back(record_from(j));
      } else if (type == "summary") {
        report.summary = summary_from(j);
        have_summary = true;
      } else {
        throw ReportError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ReportError("report line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_config) throw ReportError("empty report");
  if (!have_summary) throw ReportError("report has no summary line (truncated run?)");
  if (report.summary.record_count != report.records.size())
    throw ReportError("summary record count does not match the candidate lines");
  return report;
}

RunReport read_report(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ReportError("cannot open " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_report(text.str());
}

std::string render_resources(const ResourceEstimate& est) { return resources_json(est).dump(); }

ResourceEstimate parse_resources(const std::string& json_text) {
  const json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ReportError("malformed resource object");
  try {
    return resources_from(j);
  } catch (const json::exception& e) {
    throw ReportError(std::string("resource object: ") + e.what());
  }
}

ReportWriter::ReportWriter(const std::filesystem::path& file, const ReportConfig& cfg)
    : out_(file, std::ios::trunc), file_(file) {
  if (!out_) throw ReportError("cannot open " + file.string() + " for writing");
  line(render_config_line(cfg));
}

void ReportWriter::write(const CandidateRecord& record) { line(render_record_line(record)); }

void ReportWriter::finish(const ReportSummary& summary) { line(render_summary_line(summary)); }

void ReportWriter::line(const std::string& text) {
  out_ << text << '\n';
  out_.flush();
  if (!out_) throw ReportError("failed writing " + file_.string());
}

ReportSummary summarize(const SearchResult& result, const InputShape& input,
                        const ProfilerConfig& profiler, std::int64_t total_ms) {
  ReportSummary s;
  s.K = result.K;
  s.C = result.C;
  s.resources = profile(build_arch_spec(result.K, result.C, input), profiler);
  s.max_acc_found = result.max_acc_found;
  s.start_c = result.start_c;
  s.initial_c_clamped = result.initial_c_clamped;
  s.stop_reason = to_string(result.stop_reason);
  s.record_count = result.records.size();
  s.total_ms = total_ms;
  return s;
}

}  // namespace tinytnas
