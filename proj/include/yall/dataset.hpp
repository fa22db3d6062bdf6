#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "yall/error.hpp"
#include "yall/instance.hpp"
#include "yall/random.hpp"

namespace yall {

struct DatasetBundle {
  std::vector<LabeledInstance> train;
  std::vector<LabeledInstance> dev;
  std::vector<LabeledInstance> test;
  std::uint64_t seed = 0;
  std::string domain_tag;

  std::size_t size() const { return train.size() + dev.size() + test.size(); }
  friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

inline std::size_t count_label(const std::vector<LabeledInstance>& v, Label label) {
  std::size_t n = 0;
  for (const auto& i : v) n += i.label == label ? 1 : 0;
  return n;
}

// Drops repeated (text, label) pairs, keeping the first.
inline std::vector<LabeledInstance> dedup(const std::vector<LabeledInstance>& instances) {
  std::set<std::pair<std::string, Label>> seen;
  std::vector<LabeledInstance> out;
  out.reserve(instances.size());
  for (const auto& i : instances) {
    if (seen.emplace(i.text, i.label).second) out.push_back(i);
  }
  return out;
}

// Subsamples the majority class down to the minority size and returns the
// union in shuffled order.
inline std::vector<LabeledInstance> balance(std::vector<LabeledInstance> plural,
                                            std::vector<LabeledInstance> singular,
                                            std::uint64_t seed) {
  if (plural.empty() || singular.empty()) {
    throw EmptyClassError(std::string("cannot balance: no ") +
                          (plural.empty() ? "plural" : "singular") + " instances");
  }
  Rng rng(seed);
  const std::size_t n = std::min(plural.size(), singular.size());
  auto& majority = plural.size() > n ? plural : singular;
  if (majority.size() > n) {
    rng.shuffle(majority);
    majority.resize(n);
  }
  std::vector<LabeledInstance> out;
  out.reserve(2 * n);
  std::move(plural.begin(), plural.end(), std::back_inserter(out));
  std::move(singular.begin(), singular.end(), std::back_inserter(out));
  rng.shuffle(out);
  return out;
}

// Partition sizes: dev = floor(r_dev * N), test = floor(r_test * N), the
// rest is train.
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitRatios& r) {
  auto floor_of = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
  };
  const std::size_t dev = floor_of(r.dev);
  const std::size_t test = floor_of(r.test);
  return {n - dev - test, dev, test};
}

// Each class is shuffled on its own; dev and test then each take half of
// their quota from each class, the odd instance going to whichever class
// has more left. That keeps every partition within one of balanced.
inline DatasetBundle stratified_split(const std::vector<LabeledInstance>& instances,
                                      const SplitRatios& ratios, std::uint64_t seed,
                                      std::string domain_tag = {}) {
  const double sum = ratios.train + ratios.dev + ratios.test;
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  if (instances.size() < 10) {
    throw TooSmallError("need at least 10 instances to split, got " +
                        std::to_string(instances.size()));
  }

  std::vector<LabeledInstance> plural;
  std::vector<LabeledInstance> singular;
  for (const auto& i : instances) (i.label == Label::Plural ? plural : singular).push_back(i);
  const std::size_t diff = plural.size() > singular.size() ? plural.size() - singular.size()
                                                           : singular.size() - plural.size();
  if (diff > 1) {
    throw DataError("instances are not balanced: " + std::to_string(plural.size()) +
                    " plural vs " + std::to_string(singular.size()) + " singular");
  }

  Rng rng(seed);
  rng.shuffle(plural);
  rng.shuffle(singular);

  const auto sizes = split_sizes(instances.size(), ratios);
  std::size_t p_next = 0;
  std::size_t s_next = 0;
  auto take = [&](std::size_t k) {
    const std::size_t p_left = plural.size() - p_next;
    const std::size_t s_left = singular.size() - s_next;
    std::size_t from_p = k / 2;
    std::size_t from_s = k / 2;
    if (k % 2 == 1) (p_left >= s_left ? from_p : from_s) += 1;
    if (from_p > p_left || from_s > s_left) throw TooSmallError("too few instances for split ratios");
    std::vector<LabeledInstance> part;
    part.reserve(k);
    for (std::size_t i = 0; i < from_p; ++i) part.push_back(plural[p_next++]);
    for (std::size_t i = 0; i < from_s; ++i) part.push_back(singular[s_next++]);
    rng.shuffle(part);
    return part;
  };

  DatasetBundle bundle;
  bundle.seed = seed;
  bundle.domain_tag = std::move(domain_tag);
  bundle.dev = take(sizes[1]);
  bundle.test = take(sizes[2]);
  bundle.train = take(sizes[0]);
  return bundle;
}

// ---------------------------------------------------------------------------
// On disk a bundle is a directory:
//   train.jsonl, dev.jsonl, test.jsonl   one instance per line, no header
//   manifest.json                         {"format", "version", "domain_tag", "seed", "sizes"}

inline constexpr const char* kBundleFormat = "yall-dataset";
inline constexpr int kBundleVersion = 1;

inline void serialize(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) throw ConfigError("cannot create " + dir.string());
  write_instances((dir / "train.jsonl").string(), bundle.train);
  write_instances((dir / "dev.jsonl").string(), bundle.dev);
  write_instances((dir / "test.jsonl").string(), bundle.test);

  Json manifest = Json::object();
  manifest["format"] = kBundleFormat;
  manifest["version"] = kBundleVersion;
  manifest["domain_tag"] = bundle.domain_tag;
  manifest["seed"] = bundle.seed;
  manifest["sizes"] = Json{{"train", bundle.train.size()},
                           {"dev", bundle.dev.size()},
                           {"test", bundle.test.size()}};
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

inline DatasetBundle deserialize(const std::filesystem::path& dir) {
  const auto manifest_path = (dir / "manifest.json").string();
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw ConfigError("not a dataset directory (no manifest.json): " + dir.string());
  Json manifest = Json::parse(in, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    throw ParseError(manifest_path, 1, "malformed manifest");
  }
  if (manifest.value("format", "") != kBundleFormat) {
    throw SchemaError(manifest_path, 1, "format");
  }
  DatasetBundle bundle;
  if (!manifest.contains("seed") || !manifest["seed"].is_number_unsigned()) {
    throw SchemaError(manifest_path, 1, "seed");
  }
  bundle.seed = manifest["seed"].get<std::uint64_t>();
  if (!manifest.contains("domain_tag") || !manifest["domain_tag"].is_string()) {
    throw SchemaError(manifest_path, 1, "domain_tag");
  }
  bundle.domain_tag = manifest["domain_tag"].get<std::string>();
  bundle.train = read_instances((dir / "train.jsonl").string());
  bundle.dev = read_instances((dir / "dev.jsonl").string());
  bundle.test = read_instances((dir / "test.jsonl").string());
  return bundle;
}

}  // namespace yall
