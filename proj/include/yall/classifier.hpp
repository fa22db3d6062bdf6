#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "yall/dataset.hpp"
#include "yall/error.hpp"
#include "yall/instance.hpp"
#include "yall/random.hpp"
#include "yall/text.hpp"

namespace yall {

// ---------------------------------------------------------------------------
// Feature hashing

// FNV-1a over the bytes followed by the splitmix64 finalizer. The low bits
// select the bucket, the top bit the sign.
inline std::uint64_t feature_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

struct Feature {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// Sorted by index, no duplicates, no zeros.
using FeatureVector = std::vector<Feature>;

inline constexpr int kDefaultHashBits = 20;
inline constexpr std::size_t kDefaultWindow = 5;

inline std::string_view distance_bucket(std::size_t d) {
  return d == 1 ? "1" : d == 2 ? "2" : "3+";
}

inline std::string_view length_bucket(std::size_t n) {
  if (n <= 5) return "1-5";
  if (n <= 10) return "6-10";
  if (n <= 20) return "11-20";
  if (n <= 40) return "21-40";
  return "41+";
}

// Feature names before hashing:
//   u:<side><bucket>:<token>            unigram at distance d from the target
//   b:<side><bucket>:<token> <token>    adjacent pair, bucketed by the nearer token
//   len:<bucket>                        sentence length in tokens
inline std::vector<std::string> feature_names(const LabeledInstance& instance,
                                              std::size_t window = kDefaultWindow) {
  const auto tokens = tokenize(instance.text);
  const std::size_t t = instance.target_token_index;
  if (t >= tokens.size()) {
    throw IndexError("target index " + std::to_string(t) + " out of range for " +
                     std::to_string(tokens.size()) + " tokens");
  }
  std::vector<std::string> keys;
  keys.reserve(tokens.size());
  for (const auto& tok : tokens) keys.push_back(token_key(tok.text));

  std::vector<std::string> names;
  const std::size_t left = std::min(window, t);
  const std::size_t right = std::min(window, tokens.size() - 1 - t);
  for (std::size_t d = 1; d <= left; ++d) {
    const std::string bucket(distance_bucket(d));
    names.push_back("u:L" + bucket + ":" + keys[t - d]);
    if (d + 1 <= left) names.push_back("b:L" + bucket + ":" + keys[t - d - 1] + " " + keys[t - d]);
  }
  for (std::size_t d = 1; d <= right; ++d) {
    const std::string bucket(distance_bucket(d));
    names.push_back("u:R" + bucket + ":" + keys[t + d]);
    if (d + 1 <= right) names.push_back("b:R" + bucket + ":" + keys[t + d] + " " + keys[t + d + 1]);
  }
  names.push_back("len:" + std::string(length_bucket(tokens.size())));
  return names;
}

inline FeatureVector hash_features(const std::vector<std::string>& names,
                                   int hash_bits = kDefaultHashBits) {
  const std::uint64_t mask = (std::uint64_t{1} << hash_bits) - 1;
  FeatureVector fv;
  fv.reserve(names.size());
  for (const auto& name : names) {
    const std::uint64_t h = feature_hash(name);
    fv.push_back({static_cast<std::uint32_t>(h & mask), (h >> 63) != 0 ? -1.0 : 1.0});
  }
  std::sort(fv.begin(), fv.end(), [](const Feature& a, const Feature& b) { return a.index < b.index; });
  FeatureVector merged;
  for (const auto& f : fv) {
    if (!merged.empty() && merged.back().index == f.index) {
      merged.back().value += f.value;
    } else {
      merged.push_back(f);
    }
  }
  std::erase_if(merged, [](const Feature& f) { return f.value == 0.0; });
  return merged;
}

inline FeatureVector featurize(const LabeledInstance& instance,
                               std::size_t window = kDefaultWindow,
                               int hash_bits = kDefaultHashBits) {
  return hash_features(feature_names(instance, window), hash_bits);
}

// ---------------------------------------------------------------------------
// Logistic loss

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -log p(y | z), computed without overflow.
inline double logistic_loss(double z, Label y) {
  const double target = y == Label::Plural ? 1.0 : 0.0;
  return std::max(z, 0.0) - target * z + std::log1p(std::exp(-std::abs(z)));
}

inline double dot(std::span<const double> w, const FeatureVector& x) {
  double s = 0.0;
  for (const auto& f : x) s += w[f.index] * f.value;
  return s;
}

// Single-example objective: logistic loss plus (l2 / 2) * ||w||^2. The
// bias is not regularized.
inline double regularized_loss(std::span<const double> w, double bias, const FeatureVector& x,
                               Label y, double l2) {
  double sq = 0.0;
  for (double v : w) sq += v * v;
  return logistic_loss(dot(w, x) + bias, y) + 0.5 * l2 * sq;
}

struct LossGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

inline LossGradient regularized_loss_gradient(std::span<const double> w, double bias,
                                              const FeatureVector& x, Label y, double l2) {
  const double residual = sigmoid(dot(w, x) + bias) - (y == Label::Plural ? 1.0 : 0.0);
  LossGradient g;
  g.weights.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g.weights[i] = l2 * w[i];
  for (const auto& f : x) g.weights[f.index] += residual * f.value;
  g.bias = residual;
  return g;
}

// ---------------------------------------------------------------------------
// Model

struct Hyperparams {
  std::size_t window = kDefaultWindow;
  double learning_rate = 0.5;
  double l2 = 1e-5;
  std::size_t epochs = 5;
  std::uint64_t seed = 42;
  int hash_bits = kDefaultHashBits;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct Model {
  std::vector<double> weights;
  double bias = 0.0;
  Hyperparams hyperparams;
  std::string training_domain;
  std::vector<double> epoch_loss;  // full objective after each epoch

  // All-zero model of the right shape; predicts probability 0.5 everywhere.
  static Model zeros(Hyperparams hp = {}) {
    Model m;
    m.hyperparams = hp;
    m.weights.assign(std::size_t{1} << hp.hash_bits, 0.0);
    return m;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

struct Prediction {
  Label label = Label::Plural;
  double probability = 0.5;  // of Plural
};

inline Prediction predict(const Model& model, const FeatureVector& x) {
  const double z = dot(model.weights, x) + model.bias;
  // z >= 0 is exactly p >= 0.5; ties go to Plural.
  return {z >= 0.0 ? Label::Plural : Label::Singular, sigmoid(z)};
}

inline Prediction predict(const Model& model, const LabeledInstance& instance) {
  return predict(model, featurize(instance, model.hyperparams.window, model.hyperparams.hash_bits));
}

// Mean logistic loss over the set plus (l2 / 2) * ||w||^2.
inline double objective(const Model& model, const std::vector<FeatureVector>& xs,
                        const std::vector<Label>& ys) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    loss += logistic_loss(dot(model.weights, xs[i]) + model.bias, ys[i]);
  }
  double sq = 0.0;
  for (double v : model.weights) sq += v * v;
  return loss / static_cast<double>(xs.size()) + 0.5 * model.hyperparams.l2 * sq;
}

// Seeded-shuffle SGD with step size lr / (1 + lr * l2 * t). Weight decay is applied
// through a running scale factor so each step only touches the example's
// nonzero features.
inline Model train(const std::vector<LabeledInstance>& train_set, const Hyperparams& hp,
                   std::string training_domain = {}) {
  if (train_set.empty()) throw DegenerateDataError("training set is empty");
  if (hp.hash_bits < 1 || hp.hash_bits > 30) throw ConfigError("hash_bits must be in [1, 30]");
  if (!(hp.learning_rate > 0)) throw ConfigError("learning rate must be positive");
  if (hp.l2 < 0) throw ConfigError("l2 must be non-negative");
  if (hp.learning_rate * hp.l2 >= 1.0) throw ConfigError("learning_rate * l2 must be below 1");
  if (hp.epochs < 1) throw ConfigError("epochs must be at least 1");

  std::vector<FeatureVector> xs;
  std::vector<Label> ys;
  xs.reserve(train_set.size());
  ys.reserve(train_set.size());
  for (const auto& inst : train_set) {
    xs.push_back(featurize(inst, hp.window, hp.hash_bits));
    ys.push_back(inst.label);
  }
  const auto plural = std::count(ys.begin(), ys.end(), Label::Plural);
  if (plural == 0 || static_cast<std::size_t>(plural) == ys.size()) {
    throw DegenerateDataError("training set contains a single class");
  }

  Model model = Model::zeros(hp);
  model.training_domain = std::move(training_domain);
  std::vector<double>& v = model.weights;
  double scale = 1.0;
  auto fold_scale = [&] {
    for (double& x : v) x *= scale;
    scale = 1.0;
  };

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(hp.seed);
  std::uint64_t step = 0;
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++step;
      const double eta = hp.learning_rate / (1.0 + hp.learning_rate * hp.l2 * static_cast<double>(step));
      const double z = scale * dot(v, xs[i]) + model.bias;
      const double residual = sigmoid(z) - (ys[i] == Label::Plural ? 1.0 : 0.0);
      scale *= 1.0 - eta * hp.l2;
      if (scale < 1e-9) fold_scale();
      const double step_w = eta * residual / scale;
      for (const auto& f : xs[i]) v[f.index] -= step_w * f.value;
      model.bias -= eta * residual;
    }
    fold_scale();
    model.epoch_loss.push_back(objective(model, xs, ys));
  }

  for (double w : model.weights) {
    if (!std::isfinite(w)) throw DegenerateDataError("training diverged: non-finite weight");
  }
  if (!std::isfinite(model.bias)) throw DegenerateDataError("training diverged: non-finite bias");
  return model;
}

inline double evaluate(const Model& model, const std::vector<LabeledInstance>& test_set) {
  if (test_set.empty()) throw DataError("test set is empty");
  std::size_t correct = 0;
  for (const auto& inst : test_set) correct += predict(model, inst).label == inst.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(test_set.size());
}

// ---------------------------------------------------------------------------
// Model files: JSON with sparse nonzero weights.

inline constexpr const char* kModelFormat = "yall-logreg";
inline constexpr int kModelVersion = 1;

inline Json to_json(const Hyperparams& hp) {
  Json j = Json::object();
  j["window"] = hp.window;
  j["learning_rate"] = hp.learning_rate;
  j["l2"] = hp.l2;
  j["epochs"] = hp.epochs;
  j["seed"] = hp.seed;
  j["hash_bits"] = hp.hash_bits;
  return j;
}

inline Hyperparams hyperparams_from_json(const Json& j) {
  Hyperparams hp;
  try {
    hp.window = j.at("window").get<std::size_t>();
    hp.learning_rate = j.at("learning_rate").get<double>();
    hp.l2 = j.at("l2").get<double>();
    hp.epochs = j.at("epochs").get<std::size_t>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    hp.hash_bits = j.at("hash_bits").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed hyperparams: ") + e.what());
  }
  if (hp.hash_bits < 1 || hp.hash_bits > 30) throw DataError("hash_bits out of range");
  return hp;
}

inline Json to_json(const Model& m) {
  Json weights = Json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    if (m.weights[i] != 0.0) weights.push_back(Json::array({i, m.weights[i]}));
  }
  Json j = Json::object();
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["training_domain"] = m.training_domain;
  j["hyperparams"] = to_json(m.hyperparams);
  j["bias"] = m.bias;
  j["epoch_loss"] = m.epoch_loss;
  j["weights"] = std::move(weights);
  return j;
}

inline Model model_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    throw DataError("not a model file (format != yall-logreg)");
  }
  Model m;
  try {
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    m.training_domain = j.at("training_domain").get<std::string>();
    m.bias = j.at("bias").get<double>();
    m.epoch_loss = j.value("epoch_loss", std::vector<double>{});
    m.weights.assign(std::size_t{1} << m.hyperparams.hash_bits, 0.0);
    for (const auto& entry : j.at("weights")) {
      const auto i = entry.at(0).get<std::size_t>();
      if (i >= m.weights.size()) throw DataError("weight index out of range");
      m.weights[i] = entry.at(1).get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  return m;
}

inline void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << to_json(m).dump() << '\n';
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("model file " + path + " is not valid JSON");
  return model_from_json(j);
}

// ---------------------------------------------------------------------------
// Train-corpus x test-corpus accuracy grid

struct EvalMatrix {
  std::vector<std::string> rows{"Europarl", "Twitter", "Joint"};
  std::vector<std::string> cols{"Europarl", "Twitter"};
  std::vector<std::vector<double>> accuracy;  // rows x cols
};

// Bundles are keyed "europarl" and "twitter". Each row trains one model
// (the Joint row on both train partitions) and tests it on both test
// partitions.
inline EvalMatrix eval_matrix(const std::map<std::string, DatasetBundle>& bundles,
                              const Hyperparams& hp) {
  for (const auto& [name, b] : bundles) {
    if (name != "europarl" && name != "twitter") {
      throw ConfigError("unknown corpus '" + name + "' (expected europarl or twitter)");
    }
  }
  for (const char* needed : {"europarl", "twitter"}) {
    if (!bundles.contains(needed)) throw ConfigError(std::string("missing corpus '") + needed + "'");
  }
  const DatasetBundle& ep = bundles.at("europarl");
  const DatasetBundle& tw = bundles.at("twitter");

  std::vector<LabeledInstance> joint = ep.train;
  joint.insert(joint.end(), tw.train.begin(), tw.train.end());

  const std::vector<const std::vector<LabeledInstance>*> train_sets{&ep.train, &tw.train, &joint};
  const std::vector<std::string> domains{"europarl", "twitter", "joint"};
  EvalMatrix m;
  for (std::size_t r = 0; r < train_sets.size(); ++r) {
    const Model model = train(*train_sets[r], hp, domains[r]);
    m.accuracy.push_back({evaluate(model, ep.test), evaluate(model, tw.test)});
  }
  return m;
}

inline Json to_json(const EvalMatrix& m, const Hyperparams& hp) {
  Json j = Json::object();
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["accuracy"] = m.accuracy;
  j["hyperparams"] = to_json(hp);
  return j;
}

// Plain-text table, accuracy in percent.
inline std::string format_table(const EvalMatrix& m) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-12s", "test ->");
  out << buf;
  for (const auto& c : m.cols) {
    std::snprintf(buf, sizeof buf, "%10s", c.c_str());
    out << buf;
  }
  out << "\ntrain v\n";
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%-12s", m.rows[r].c_str());
    out << buf;
    for (double a : m.accuracy[r]) {
      std::snprintf(buf, sizeof buf, "%10.1f", 100.0 * a);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace yall
