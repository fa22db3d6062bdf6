#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "yall/dataset.hpp"
#include "yall/random.hpp"

namespace {

using testing_util::TempDir;
using testing_util::read_file;

yall::LabeledInstance make(const std::string& text, yall::Label label, std::size_t target = 0) {
  yall::LabeledInstance i;
  i.text = text;
  i.target_token_index = target;
  i.label = label;
  i.provenance.source_id = text;
  return i;
}

// n instances per class with distinct texts.
std::vector<yall::LabeledInstance> balanced(std::size_t plural, std::size_t singular) {
  std::vector<yall::LabeledInstance> v;
  for (std::size_t i = 0; i < plural; ++i) v.push_back(make("you p" + std::to_string(i), yall::Label::Plural));
  for (std::size_t i = 0; i < singular; ++i) v.push_back(make("you s" + std::to_string(i), yall::Label::Singular));
  return v;
}

std::size_t diff(const std::vector<yall::LabeledInstance>& v) {
  const auto p = yall::count_label(v, yall::Label::Plural);
  const auto s = yall::count_label(v, yall::Label::Singular);
  return p > s ? p - s : s - p;
}

TEST(Dedup, Examples) {
  const auto t = make("you t", yall::Label::Plural);
  const auto u = make("you u", yall::Label::Singular);
  EXPECT_EQ(yall::dedup({t, t, u}), (std::vector<yall::LabeledInstance>{t, u}));
  EXPECT_TRUE(yall::dedup({}).empty());
}

TEST(Dedup, SevenPlantedDuplicates) {
  auto v = balanced(50, 43);
  yall::Rng rng(4);
  std::set<std::pair<std::string, yall::Label>> truth;
  for (const auto& i : v) truth.emplace(i.text, i.label);
  for (int k = 0; k < 7; ++k) v.push_back(v[static_cast<std::size_t>(rng.below(93))]);
  rng.shuffle(v);
  ASSERT_EQ(v.size(), 100u);
  const auto d = yall::dedup(v);
  EXPECT_EQ(d.size(), 93u);
  EXPECT_EQ(d.size(), truth.size());
}

TEST(Dedup, SameTextDifferentLabelKept) {
  EXPECT_EQ(yall::dedup({make("you x", yall::Label::Plural), make("you x", yall::Label::Singular)}).size(), 2u);
}

TEST(Balance, SubsamplesMajority) {
  auto all = balanced(36000, 40000);
  std::vector<yall::LabeledInstance> p(all.begin(), all.begin() + 36000);
  std::vector<yall::LabeledInstance> s(all.begin() + 36000, all.end());
  const auto b = yall::balance(p, s, 42);
  EXPECT_EQ(b.size(), 72000u);
  EXPECT_EQ(yall::count_label(b, yall::Label::Plural), 36000u);
  EXPECT_EQ(yall::count_label(b, yall::Label::Singular), 36000u);
  EXPECT_EQ(yall::balance(p, s, 42), b);
}

TEST(Balance, AlreadyBalancedKeepsAll) {
  auto all = balanced(5, 5);
  std::vector<yall::LabeledInstance> p(all.begin(), all.begin() + 5);
  std::vector<yall::LabeledInstance> s(all.begin() + 5, all.end());
  EXPECT_EQ(yall::balance(p, s, 1).size(), 10u);
  EXPECT_THROW(yall::balance({}, s, 1), yall::EmptyClassError);
  EXPECT_THROW(yall::balance(p, {}, 1), yall::EmptyClassError);
}

struct SizeCase {
  std::size_t n;
  std::size_t train, dev, test;
};

class SplitSizes : public ::testing::TestWithParam<SizeCase> {};

TEST_P(SplitSizes, PublishedSizes) {
  const auto c = GetParam();
  const auto data = balanced((c.n + 1) / 2, c.n / 2);
  const auto b = yall::stratified_split(data, {}, 42);
  EXPECT_EQ(b.train.size(), c.train);
  EXPECT_EQ(b.dev.size(), c.dev);
  EXPECT_EQ(b.test.size(), c.test);
  EXPECT_LE(diff(b.train), 1u);
  EXPECT_LE(diff(b.dev), 1u);
  EXPECT_LE(diff(b.test), 1u);
}

INSTANTIATE_TEST_SUITE_P(Table, SplitSizes,
                         ::testing::Values(SizeCase{73703, 58963, 7370, 7370},
                                           SizeCase{14059, 11249, 1405, 1405},
                                           SizeCase{10, 8, 1, 1}),
                         [](const auto& info) { return "N" + std::to_string(info.param.n); });

TEST(StratifiedSplit, Errors) {
  EXPECT_THROW(yall::stratified_split(balanced(4, 5), {}, 1), yall::TooSmallError);
  EXPECT_THROW(yall::stratified_split(balanced(10, 20), {}, 1), yall::DataError);
  EXPECT_THROW(yall::stratified_split(balanced(10, 10), {0.5, 0.1, 0.1}, 1), yall::ConfigError);
  EXPECT_THROW(yall::stratified_split(balanced(10, 10), {1.2, -0.1, -0.1}, 1), yall::ConfigError);
}

// Random N and seed: floor rule, disjointness, union = input, balance.
TEST(StratifiedSplit, PropertiesOverRandomInputs) {
  yall::Rng rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.below(3000));
    const std::uint64_t seed = rng.next();
    const auto data = balanced((n + 1) / 2, n / 2);
    const auto b = yall::stratified_split(data, {}, seed);
    const std::size_t tenth = n / 10;
    ASSERT_EQ(b.dev.size(), tenth) << n;
    ASSERT_EQ(b.test.size(), tenth) << n;
    ASSERT_EQ(b.train.size(), n - 2 * tenth) << n;
    EXPECT_LE(diff(b.train), 1u);
    EXPECT_LE(diff(b.dev), 1u);
    EXPECT_LE(diff(b.test), 1u);

    std::multiset<std::string> in, out;
    for (const auto& i : data) in.insert(i.text);
    for (const auto* part : {&b.train, &b.dev, &b.test}) {
      for (const auto& i : *part) out.insert(i.text);
    }
    EXPECT_EQ(in, out);
    EXPECT_EQ(std::set<std::string>(out.begin(), out.end()).size(), n);
  }
}

TEST(StratifiedSplit, SeedMatters) {
  const auto data = balanced(500, 500);
  EXPECT_EQ(yall::stratified_split(data, {}, 3), yall::stratified_split(data, {}, 3));
  EXPECT_NE(yall::stratified_split(data, {}, 3).test, yall::stratified_split(data, {}, 4).test);
}

TEST(StratifiedSplit, FastOnLargeInput) {
  const auto data = balanced(36852, 36851);
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = yall::stratified_split(data, {}, 42);
  const auto s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(b.size(), 73703u);
  EXPECT_LT(s, 1.0);
}

TEST(Bundle, RoundTripAndDeterminism) {
  TempDir dir;
  auto data = balanced(60, 60);
  data[3].provenance.geo = yall::Geo{1.25, -2.5};
  const auto b = yall::stratified_split(data, {}, 9, "twitter");
  yall::serialize(b, dir.path() / "a");
  yall::serialize(yall::stratified_split(data, {}, 9, "twitter"), dir.path() / "b");
  EXPECT_EQ(yall::deserialize(dir.path() / "a"), b);
  for (const char* f : {"train.jsonl", "dev.jsonl", "test.jsonl", "manifest.json"}) {
    EXPECT_EQ(read_file((dir.path() / "a" / f).string()), read_file((dir.path() / "b" / f).string())) << f;
  }
}

TEST(Bundle, LineCountEqualsInstanceCount) {
  TempDir dir;
  const auto b = yall::stratified_split(balanced(36852, 36851), {}, 42);
  yall::serialize(b, dir.path());
  std::size_t lines = 0;
  for (const char* f : {"train.jsonl", "dev.jsonl", "test.jsonl"}) {
    const auto s = read_file((dir.path() / f).string());
    lines += static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  }
  EXPECT_EQ(lines, 73703u);
}

TEST(Bundle, MissingLabelIsSchemaErrorAtLine) {
  TempDir dir;
  const auto b = yall::stratified_split(balanced(10, 10), {}, 1);
  yall::serialize(b, dir.path());
  auto path = (dir.path() / "dev.jsonl").string();
  auto j = yall::to_json(b.dev[0]);
  j.erase("label");
  testing_util::write_file(path, yall::to_json(b.dev[0]).dump() + "\n" + j.dump() + "\n");
  try {
    yall::deserialize(dir.path());
    FAIL() << "expected SchemaError";
  } catch (const yall::SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "label");
  }
}

TEST(Bundle, NotADatasetDirectory) {
  TempDir dir;
  EXPECT_THROW(yall::deserialize(dir.path()), yall::ConfigError);
}

}  // namespace
