#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "tinytnas/data.hpp"

using namespace tinytnas;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("tinytnas_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_bytes(const fs::path& file, std::size_t n, char fill = 0) {
  std::ofstream out(file, std::ios::binary);
  const std::string bytes(n, fill);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_meta(const fs::path& dir, const std::string& json) {
  std::ofstream(dir / "meta.json") << json;
}

Dataset random_dataset(std::mt19937_64& rng, int n, InputShape meta) {
  Dataset ds;
  ds.meta = meta;
  ds.samples.resize(static_cast<std::size_t>(n) * ds.window_size());
  std::normal_distribution<float> value(2.0f, 3.0f);
  for (auto& v : ds.samples) v = value(rng);
  for (int i = 0; i < n; ++i) ds.labels.push_back(static_cast<int>(rng() % static_cast<std::uint64_t>(meta.num_classes)));
  return ds;
}

}  // namespace

TEST_CASE("TTS1 loading") {
  const auto dir = scratch_dir("tts1");
  write_meta(dir, R"({"version":1,"n":10,"length":4,"channels":2,"num_classes":3})");
  write_bytes(dir / "labels.bin", 20);

  SUBCASE("320-byte payload loads") {
    write_bytes(dir / "data.bin", 320);
    const auto ds = load_dataset(dir);
    CHECK(ds.size() == 10);
    CHECK(ds.meta == InputShape{4, 2, 3});
    CHECK(ds.samples.size() == 80);
  }
  SUBCASE("316-byte payload is a size mismatch") {
    write_bytes(dir / "data.bin", 316);
    CHECK_THROWS_AS(load_dataset(dir), SizeMismatchError);
  }
  SUBCASE("label equal to num_classes is out of range") {
    write_bytes(dir / "data.bin", 320);
    std::ofstream labels(dir / "labels.bin", std::ios::binary);
    for (int i = 0; i < 10; ++i) {
      const char lo = i == 7 ? 3 : 0;
      labels.put(lo).put(0);
    }
    labels.close();
    CHECK_THROWS_AS(load_dataset(dir), LabelRangeError);
  }
  SUBCASE("malformed header") {
    write_bytes(dir / "data.bin", 320);
    write_meta(dir, R"({"version":1,"n":10,"length":4})");
    CHECK_THROWS_AS(load_dataset(dir), MalformedHeaderError);
    write_meta(dir, "not json");
    CHECK_THROWS_AS(load_dataset(dir), MalformedHeaderError);
    write_meta(dir, R"({"version":2,"n":10,"length":4,"channels":2,"num_classes":3})");
    CHECK_THROWS_AS(load_dataset(dir), MalformedHeaderError);
  }
  SUBCASE("labels payload size") {
    write_bytes(dir / "data.bin", 320);
    write_bytes(dir / "labels.bin", 19);
    CHECK_THROWS_AS(load_dataset(dir), SizeMismatchError);
  }
  fs::remove_all(dir);
}

TEST_CASE("save then load is the identity") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const InputShape meta{1 + static_cast<int>(rng() % 30), 1 + static_cast<int>(rng() % 5),
                          2 + static_cast<int>(rng() % 6)};
    const auto ds = random_dataset(rng, 1 + static_cast<int>(rng() % 40), meta);
    const auto dir = scratch_dir("roundtrip");
    save_tts1(ds, dir);
    const auto back = load_dataset(dir);
    CHECK(back.samples == ds.samples);
    CHECK(back.labels == ds.labels);
    CHECK(back.meta == ds.meta);

    // CSV carries the same data; num_classes is inferred from the labels seen
    save_csv(ds, dir / "d.csv");
    const auto csv = load_dataset(dir / "d.csv");
    CHECK(csv.samples == ds.samples);
    CHECK(csv.labels == ds.labels);
    CHECK(csv.meta.length == meta.length);
    CHECK(csv.meta.channels == meta.channels);
    fs::remove_all(dir);
  }
}

TEST_CASE("CSV errors") {
  const auto dir = scratch_dir("csv");
  std::ofstream(dir / "short.csv") << "t0_c0,t1_c0,label\n0.5,0.25,1\n0.5,1\n";
  CHECK_THROWS_AS(load_dataset(dir / "short.csv"), SizeMismatchError);
  std::ofstream(dir / "names.csv") << "a,b,label\n0.5,0.25,1\n";
  CHECK_THROWS_AS(load_dataset(dir / "names.csv"), MalformedHeaderError);
  CHECK(load_csv(dir / "names.csv", 1).meta.length == 2);
  std::ofstream(dir / "text.csv") << "t0_c0,label\nabc,1\n";
  CHECK_THROWS_AS(load_dataset(dir / "text.csv"), MalformedHeaderError);
  CHECK_THROWS_AS(load_dataset(dir / "missing.bin"), DataError);
  fs::remove_all(dir);
}

TEST_CASE("stratified split") {
  SUBCASE("balanced two-class example") {
    Dataset ds;
    ds.meta = {2, 1, 2};
    ds.samples.assign(200, 0.0f);
    for (int i = 0; i < 100; ++i) ds.labels.push_back(i % 2);
    const auto split = split_stratified(ds, 0.2, 5).split;
    CHECK(split.validation.size() == 20);
    int class0 = 0;
    for (auto i : split.validation) class0 += ds.labels[i] == 0;
    CHECK(class0 == 10);
  }
  SUBCASE("a singleton class stays in training") {
    Dataset ds;
    ds.meta = {1, 1, 3};
    ds.samples.assign(11, 0.0f);
    ds.labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2};
    const auto split = split_stratified(ds, 0.2, 1).split;
    CHECK(std::find(split.train.begin(), split.train.end(), 10u) != split.train.end());
    CHECK(split.validation.size() == 2);
  }
  SUBCASE("determinism and errors") {
    std::mt19937_64 rng(2);
    const auto ds = random_dataset(rng, 57, {3, 1, 4});
    CHECK(split_stratified(ds, 0.3, 9).split == split_stratified(ds, 0.3, 9).split);
    CHECK_FALSE(split_stratified(ds, 0.3, 9).split == split_stratified(ds, 0.3, 10).split);
    CHECK_THROWS_AS(split_stratified(Dataset{}, 0.2, 0), DataError);
    CHECK_THROWS_AS(split_stratified(ds, 1.0, 0), std::invalid_argument);
  }
  SUBCASE("partition and per-class proportions over random datasets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const int classes = 2 + static_cast<int>(rng() % 5);
      const auto ds = random_dataset(rng, 1 + static_cast<int>(rng() % 200), {2, 1, classes});
      const double fraction = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
      const auto split = split_stratified(ds, fraction, rng()).split;
      std::set<std::size_t> seen(split.train.begin(), split.train.end());
      for (auto i : split.validation) CHECK(seen.insert(i).second);
      CHECK(seen.size() == ds.size());
      for (int c = 0; c < classes; ++c) {
        int total = 0, val = 0;
        for (std::size_t i = 0; i < ds.size(); ++i) total += ds.labels[i] == c;
        for (auto i : split.validation) val += ds.labels[i] == c;
        if (total >= 2) {
          CHECK(val >= 1);
          CHECK(val <= total - 1);
          CHECK(std::abs(val - fraction * total) <= 1.0 + 1e-9);
        } else {
          CHECK(val == 0);
        }
      }
    }
  }
}

TEST_CASE("z-score normalization") {
  SUBCASE("training statistics become zero mean, unit variance") {
    std::mt19937_64 rng(4);
    const auto ds = normalize_zscore(split_stratified(random_dataset(rng, 120, {16, 3, 3}), 0.25, 1));
    for (int ch = 0; ch < 3; ++ch) {
      double sum = 0, sq = 0, n = 0;
      for (auto idx : ds.split.train)
        for (int t = 0; t < 16; ++t) {
          const double v = ds.window(idx)[static_cast<std::size_t>(t * 3 + ch)];
          sum += v;
          sq += v * v;
          ++n;
        }
      const double mean = sum / n;
      CHECK(std::abs(mean) <= 1e-4);
      CHECK(std::abs(std::sqrt(sq / n - mean * mean) - 1.0) <= 1e-3);
    }
  }
  SUBCASE("constant channel becomes zeros") {
    Dataset ds;
    ds.meta = {2, 2, 2};
    for (int i = 0; i < 6; ++i) {
      ds.samples.insert(ds.samples.end(), {4.0f, static_cast<float>(i), 4.0f, static_cast<float>(-i)});
      ds.labels.push_back(i % 2);
    }
    const auto out = normalize_zscore(split_stratified(ds, 0.3, 0));
    for (std::size_t i = 0; i < out.samples.size(); i += 2) CHECK(out.samples[i] == 0.0f);
    CHECK_FALSE(out.normalization[0].scaled);
    CHECK(out.normalization[1].scaled);
  }
  SUBCASE("already standard values are unchanged") {
    Dataset ds;
    ds.meta = {1, 1, 2};
    ds.samples = {-1.0f, 1.0f, -1.0f, 1.0f};
    ds.labels = {0, 1, 0, 1};
    ds.split = {{0, 1, 2, 3}, {}};
    const auto out = normalize_zscore(ds);
    CHECK(out.samples == ds.samples);
  }
  SUBCASE("needs a split") {
    Dataset ds;
    ds.meta = {1, 1, 2};
    CHECK_THROWS_AS(normalize_zscore(ds), DataError);
  }
}

TEST_CASE("synthetic waveforms") {
  SyntheticWaveformOptions opts;
  opts.windows = 300;
  opts.seed = 12;
  const auto a = make_synthetic_waveforms(opts);
  CHECK(a.size() == 300);
  CHECK(a.meta == InputShape{64, 3, 3});
  for (int c = 0; c < 3; ++c) CHECK(std::count(a.labels.begin(), a.labels.end(), c) == 100);
  CHECK(a.samples == make_synthetic_waveforms(opts).samples);
  CHECK(dataset_digest(a) == dataset_digest(make_synthetic_waveforms(opts)));
  opts.seed = 13;
  CHECK(dataset_digest(a) != dataset_digest(make_synthetic_waveforms(opts)));
}
