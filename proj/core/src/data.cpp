#include "tinytnas/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iterator>
#include <limits>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tinytnas {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

void validate(const Dataset& ds) {
  validate(ds.meta);
  const std::size_t n = ds.labels.size();
  if (ds.samples.size() != n * ds.window_size())
    throw SizeMismatchError("sample payload holds " + std::to_string(ds.samples.size()) +
                            " values, expected " + std::to_string(n * ds.window_size()));
  for (std::size_t i = 0; i < n; ++i)
    if (ds.labels[i] < 0 || ds.labels[i] >= ds.meta.num_classes)
      throw LabelRangeError("label " + std::to_string(ds.labels[i]) + " at index " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(ds.meta.num_classes) + ")");
}

// ---------------------------------------------------------------------------
// TTS1

namespace {

std::vector<char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

int positive_field(const json& meta, const char* key) {
  if (!meta.contains(key) || !meta[key].is_number_integer())
    throw MalformedHeaderError(std::string("meta.json: missing integer field '") + key + "'");
  const auto v = meta[key].get<std::int64_t>();
  if (v < 0 || v > std::numeric_limits<int>::max())
    throw MalformedHeaderError(std::string("meta.json: field '") + key + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

Dataset load_tts1(const fs::path& dir) {
  json meta;
  {
    const auto text = read_file(dir / "meta.json");
    meta = json::parse(text.begin(), text.end(), nullptr, false);
  }
  if (meta.is_discarded() || !meta.is_object())
    throw MalformedHeaderError("meta.json is not a JSON object");
  if (positive_field(meta, "version") != 1)
    throw MalformedHeaderError("meta.json: unsupported version");
  const int n = positive_field(meta, "n");
  Dataset ds;
  ds.meta.length = positive_field(meta, "length");
  ds.meta.channels = positive_field(meta, "channels");
  ds.meta.num_classes = positive_field(meta, "num_classes");
  try {
    validate(ds.meta);
  } catch (const ShapeError& e) {
    throw MalformedHeaderError(std::string("meta.json: ") + e.what());
  }

  const auto data = read_file(dir / "data.bin");
  const std::size_t expected = static_cast<std::size_t>(n) * ds.window_size() * 4;
  if (data.size() != expected)
    throw SizeMismatchError("data.bin has " + std::to_string(data.size()) +
                            " bytes, header declares " + std::to_string(expected));
  ds.samples.resize(expected / 4);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[i * 4 + b])) << (8 * b);
    std::memcpy(&ds.samples[i], &bits, sizeof bits);
  }

  const auto labels = read_file(dir / "labels.bin");
  if (labels.size() != static_cast<std::size_t>(n) * 2)
    throw SizeMismatchError("labels.bin has " + std::to_string(labels.size()) +
                            " bytes, header declares " + std::to_string(n * 2));
  ds.labels.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < ds.labels.size(); ++i)
    ds.labels[i] = static_cast<unsigned char>(labels[2 * i]) |
                   (static_cast<unsigned char>(labels[2 * i + 1]) << 8);
  validate(ds);
  return ds;
}

void save_tts1(const Dataset& ds, const fs::path& dir) {
  validate(ds);
  fs::create_directories(dir);
  const json meta = {{"version", 1},
                     {"n", ds.size()},
                     {"length", ds.meta.length},
                     {"channels", ds.meta.channels},
                     {"num_classes", ds.meta.num_classes}};
  const auto text = meta.dump();
  write_file(dir / "meta.json", std::vector<char>(text.begin(), text.end()));

  std::vector<char> data(ds.samples.size() * 4);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &ds.samples[i], sizeof bits);
    for (int b = 0; b < 4; ++b) data[i * 4 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  write_file(dir / "data.bin", data);

  std::vector<char> labels(ds.labels.size() * 2);
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    const auto v = static_cast<std::uint16_t>(ds.labels[i]);
    labels[2 * i] = static_cast<char>(v & 0xff);
    labels[2 * i + 1] = static_cast<char>(v >> 8);
  }
  write_file(dir / "labels.bin", labels);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Dataset load_csv(const fs::path& file, int channels) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeaderError("CSV file has no header row");
  const auto header = split_csv_line(line);
  if (header.size() < 2) throw MalformedHeaderError("CSV header needs features and a label");
  const std::size_t features = header.size() - 1;

  if (channels <= 0) {
    static const std::regex name(R"(t(\d+)_c(\d+))");
    std::set<int> seen;
    for (std::size_t i = 0; i < features; ++i) {
      std::smatch m;
      if (!std::regex_match(header[i], m, name))
        throw MalformedHeaderError("cannot infer channels from CSV column '" + header[i] + "'");
      seen.insert(std::stoi(m[2].str()));
    }
    channels = static_cast<int>(seen.size());
  }
  if (features % static_cast<std::size_t>(channels) != 0)
    throw MalformedHeaderError("CSV feature count is not a multiple of the channel count");

  Dataset ds;
  ds.meta.channels = channels;
  ds.meta.length = static_cast<int>(features / static_cast<std::size_t>(channels));
  int max_label = 0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw SizeMismatchError("CSV row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
    try {
      for (std::size_t i = 0; i < features; ++i) ds.samples.push_back(std::stof(cells[i]));
      const int label = std::stoi(cells.back());
      if (label < 0) throw LabelRangeError("negative label on CSV row " + std::to_string(row));
      max_label = std::max(max_label, label);
      ds.labels.push_back(label);
    } catch (const std::logic_error&) {
      throw MalformedHeaderError("unparseable number on CSV row " + std::to_string(row));
    }
  }
  ds.meta.num_classes = std::max(2, max_label + 1);
  validate(ds);
  return ds;
}

void save_csv(const Dataset& ds, const fs::path& file) {
  validate(ds);
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw DataError("cannot open " + file.string() + " for writing");
  for (int t = 0; t < ds.meta.length; ++t)
    for (int ch = 0; ch < ds.meta.channels; ++ch) out << 't' << t << "_c" << ch << ',';
  out << "label\n";
  out.precision(9);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (float v : ds.window(i)) out << v << ',';
    out << ds.labels[i] << '\n';
  }
}

Dataset load_dataset(const fs::path& path) {
  if (fs::is_directory(path)) return load_tts1(path);
  if (path.extension() == ".csv") return load_csv(path);
  if (path.filename() == "meta.json") return load_tts1(path.parent_path());
  throw DataError("unrecognised dataset path " + path.string() +
                  " (expected a TTS1 directory or a .csv file)");
}

// ---------------------------------------------------------------------------
// Split and normalization

Dataset split_stratified(Dataset ds, double val_fraction, std::uint64_t seed) {
  if (ds.size() == 0) throw DataError("cannot split an empty dataset");
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw std::invalid_argument("validation fraction must be in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);

  DataSplit split;
  for (auto& [label, members] : by_class) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(label)));
    seeded_shuffle(members.begin(), members.end(), rng);
    const std::size_t count = members.size();
    std::size_t n_val = 0;
    if (count >= 2) {
      n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(count)));
      n_val = std::clamp<std::size_t>(n_val, 1, count - 1);
    }
    split.validation.insert(split.validation.end(), members.begin(),
                            members.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val),
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  ds.split = std::move(split);
  return ds;
}

Dataset normalize_zscore(Dataset ds) {
  if (!ds.has_split()) throw DataError("normalization needs a train/validation split");
  const auto channels = static_cast<std::size_t>(ds.meta.channels);
  const auto length = static_cast<std::size_t>(ds.meta.length);
  std::vector<double> sum(channels, 0.0);
  std::vector<double> sum_sq(channels, 0.0);
  for (std::size_t idx : ds.split.train) {
    const auto w = ds.window(idx);
    for (std::size_t t = 0; t < length; ++t)
      for (std::size_t ch = 0; ch < channels; ++ch) sum[ch] += w[t * channels + ch];
  }
  const double count = static_cast<double>(ds.split.train.size() * length);
  std::vector<ChannelNorm> norm(channels);
  for (std::size_t ch = 0; ch < channels; ++ch) norm[ch].mean = count > 0 ? sum[ch] / count : 0.0;
  for (std::size_t idx : ds.split.train) {
    const auto w = ds.window(idx);
    for (std::size_t t = 0; t < length; ++t)
      for (std::size_t ch = 0; ch < channels; ++ch) {
        const double d = w[t * channels + ch] - norm[ch].mean;
        sum_sq[ch] += d * d;
      }
  }
  for (std::size_t ch = 0; ch < channels; ++ch) {
    const double sd = count > 0 ? std::sqrt(sum_sq[ch] / count) : 0.0;
    norm[ch].scaled = sd >= 1e-12;
    norm[ch].stddev = norm[ch].scaled ? sd : 1.0;
  }
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& n = norm[i % channels];
    ds.samples[i] = static_cast<float>((ds.samples[i] - n.mean) / n.stddev);
  }
  ds.normalization = std::move(norm);
  return ds;
}

std::string dataset_digest(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int32_t dims[3] = {ds.meta.length, ds.meta.channels, ds.meta.num_classes};
  feed(dims, sizeof dims);
  feed(ds.samples.data(), ds.samples.size() * sizeof(float));
  for (int label : ds.labels) {
    const auto v = static_cast<std::int32_t>(label);
    feed(&v, sizeof v);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Synthetic waveforms

Dataset make_synthetic_waveforms(const SyntheticWaveformOptions& opts) {
  if (opts.windows < 3) throw std::invalid_argument("need at least 3 windows");
  Dataset ds;
  ds.meta = {opts.length, opts.channels, 3};
  validate(ds.meta);
  std::mt19937_64 rng(mix_seed(opts.seed, 0x5eed));
  auto gaussian = [&rng] {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  ds.samples.resize(static_cast<std::size_t>(opts.windows) * ds.window_size());
  ds.labels.resize(static_cast<std::size_t>(opts.windows));
  for (std::size_t w = 0; w < ds.labels.size(); ++w) {
    const int label = static_cast<int>(w % 3);
    ds.labels[w] = label;
    std::vector<double> period(static_cast<std::size_t>(opts.channels));
    std::vector<double> phase(period.size());
    std::vector<double> amplitude(period.size());
    for (std::size_t ch = 0; ch < period.size(); ++ch) {
      period[ch] = 8.0 + 24.0 * uniform01(rng);
      phase[ch] = uniform01(rng);
      amplitude[ch] = 0.5 + uniform01(rng);
    }
    float* out = ds.samples.data() + w * ds.window_size();
    for (int t = 0; t < opts.length; ++t) {
      for (int ch = 0; ch < opts.channels; ++ch) {
        const auto c = static_cast<std::size_t>(ch);
        double u = static_cast<double>(t) / period[c] + phase[c];
        u -= std::floor(u);
        double v = 0.0;
        switch (label) {
          case 0: v = std::sin(2.0 * std::numbers::pi * u); break;
          case 1: v = u < 0.5 ? 1.0 : -1.0; break;
          default: v = 2.0 * u - 1.0; break;
        }
        *out++ = static_cast<float>(amplitude[c] * v + opts.noise_sigma * gaussian());
      }
    }
  }
  return ds;
}

}  // namespace tinytnas
