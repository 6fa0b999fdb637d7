// Copyright 2026 The FairHOME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairhome/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <utility>

#include "fairhome/error.h"
#include "json.hpp"
#include "random.h"

namespace fairhome {
namespace {

using nlohmann::json;

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z)
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

std::vector<std::size_t> LayerSizes(std::size_t input_dim,
                                    const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> sizes = {input_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(1);
  return sizes;
}

struct EncodedData {
  std::vector<double> features;  // row-major
  std::size_t dim = 0;
};

EncodedData EncodeAll(const Dataset& data, const EncodingMap& encoding) {
  EncodedData out;
  out.dim = encoding.dimension();
  out.features.resize(data.size() * out.dim);
  for (std::size_t r = 0; r < data.size(); ++r) {
    encoding.EncodeInto(data.rows()[r], out.features.data() + r * out.dim);
  }
  return out;
}

void CheckTrainable(const Dataset& train, const EncodingMap& encoding) {
  if (train.size() < 2) {
    throw Error(ErrorCode::kTraining, "need at least two training rows");
  }
  const auto& labels = train.labels();
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<long>(labels.size())) {
    throw Error(ErrorCode::kTraining,
                "training data contains a single label class");
  }
  if (encoding.dimension() == 0) {
    throw Error(ErrorCode::kTraining, "encoded feature dimension is zero");
  }
}

NetworkClassifier Train(std::string kind, const Dataset& train,
                        const TrainConfig& config,
                        const std::vector<std::size_t>& hidden) {
  config.Validate(train.size());
  EncodingMap encoding = EncodingMap::Fit(train);
  CheckTrainable(train, encoding);
  const EncodedData data = EncodeAll(train, encoding);

  FeedForwardNet net(data.dim, hidden);
  net.Initialize(config.seed);
  // Seeds the shuffle stream apart from the initialization stream.
  internal::Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  const std::size_t n = train.size();
  const std::size_t batch =
      config.batch_size <= 0 ? n : std::min<std::size_t>(config.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> batch_features;
  std::vector<int> batch_labels;
  std::vector<double> batch_weights;
  std::vector<double> gradient;
  std::vector<double> history;
  history.reserve(config.epochs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < n) rng.Shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::span<const double> features;
      std::span<const int> labels;
      std::span<const double> weights;
      if (batch == n) {
        features = data.features;
        labels = train.labels();
        weights = config.instance_weights;
      } else {
        batch_features.clear();
        batch_labels.clear();
        batch_weights.clear();
        for (std::size_t k = start; k < end; ++k) {
          const std::size_t row = order[k];
          batch_features.insert(batch_features.end(),
                                data.features.begin() + row * data.dim,
                                data.features.begin() + (row + 1) * data.dim);
          batch_labels.push_back(train.labels()[row]);
          if (!config.instance_weights.empty()) {
            batch_weights.push_back(config.instance_weights[row]);
          }
        }
        features = batch_features;
        labels = batch_labels;
        weights = batch_weights;
      }
      net.Loss(features, labels, weights, config.l2_penalty, &gradient);
      std::span<double> params = net.mutable_parameters();
      for (std::size_t p = 0; p < params.size(); ++p) {
        params[p] -= config.learning_rate * gradient[p];
      }
    }
    history.push_back(net.Loss(data.features, train.labels(),
                               config.instance_weights, config.l2_penalty,
                               nullptr));
  }

  NetworkClassifier classifier(std::move(kind), std::move(encoding),
                               std::move(net), config);
  classifier.set_loss_history(std::move(history));
  return classifier;
}

}  // namespace

int PredictDecision(const Classifier& classifier, const Instance& instance) {
  return Decide(classifier.PredictProba(instance));
}

void TrainConfig::Validate(std::size_t train_size) const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kUsage, "learning rate must be positive");
  }
  if (epochs <= 0) throw Error(ErrorCode::kUsage, "epochs must be positive");
  if (batch_size < 0) {
    throw Error(ErrorCode::kUsage, "batch size must be positive (0 = full)");
  }
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) {
    throw Error(ErrorCode::kUsage, "l2 penalty must be non-negative");
  }
  if (!instance_weights.empty()) {
    if (instance_weights.size() != train_size) {
      throw Error(ErrorCode::kUsage,
                  "instance weight count differs from training size");
    }
    for (double w : instance_weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::kUsage, "instance weights must be positive");
      }
    }
  }
}

FeedForwardNet::FeedForwardNet(std::size_t input_dim,
                               std::vector<std::size_t> hidden)
    : input_dim_(input_dim), hidden_(std::move(hidden)) {
  for (std::size_t units : hidden_) {
    if (units == 0) throw Error(ErrorCode::kUsage, "empty hidden layer");
  }
  const auto sizes = LayerSizes(input_dim_, hidden_);
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    count += sizes[l] * sizes[l + 1] + sizes[l + 1];
  }
  params_.assign(count, 0.0);
}

void FeedForwardNet::Initialize(std::uint64_t seed) {
  std::fill(params_.begin(), params_.end(), 0.0);
  if (hidden_.empty()) return;
  internal::Rng rng(seed);
  const auto sizes = LayerSizes(input_dim_, hidden_);
  double* p = params_.data();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    const double r = std::sqrt(6.0 / static_cast<double>(in + out));
    for (std::size_t k = 0; k < in * out; ++k) *p++ = rng.Uniform(-r, r);
    p += out;
  }
}

double FeedForwardNet::Logit(std::span<const double> x) const {
  if (x.size() != input_dim_) {
    throw Error(ErrorCode::kShape,
                "input has dimension " + std::to_string(x.size()) +
                    ", network expects " + std::to_string(input_dim_));
  }
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> next;
  const double* p = params_.data();
  const std::size_t layers = hidden_.size() + 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = current.size();
    const std::size_t out = l < hidden_.size() ? hidden_[l] : 1;
    const double* bias = p + in * out;
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = bias[o];
      const double* row = p + o * in;
      for (std::size_t i = 0; i < in; ++i) z += row[i] * current[i];
      next[o] = (l + 1 < layers) ? std::max(z, 0.0) : z;
    }
    p = bias + out;
    current.swap(next);
  }
  return current[0];
}

double FeedForwardNet::Predict(std::span<const double> x) const {
  return Sigmoid(Logit(x));
}

double FeedForwardNet::Loss(std::span<const double> features,
                            std::span<const int> labels,
                            std::span<const double> weights, double l2,
                            std::vector<double>* gradient) const {
  const std::size_t n = labels.size();
  if (features.size() != n * input_dim_) {
    throw Error(ErrorCode::kShape, "feature matrix does not match labels");
  }
  if (!weights.empty() && weights.size() != n) {
    throw Error(ErrorCode::kShape, "weight count does not match labels");
  }
  if (gradient != nullptr) gradient->assign(params_.size(), 0.0);

  const auto sizes = LayerSizes(input_dim_, hidden_);
  const std::size_t layers = sizes.size() - 1;
  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, offset = 0; l < layers; ++l) {
    offsets[l] = offset;
    offset += sizes[l] * sizes[l + 1] + sizes[l + 1];
  }

  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weight_sum += weights.empty() ? 1.0 : weights[i];
  }
  if (n == 0 || !(weight_sum > 0.0)) return 0.0;

  // Pre-activations per layer for backpropagation; activations[0] is the
  // input row.
  std::vector<std::vector<double>> pre(layers);
  std::vector<std::vector<double>> activations(layers);
  std::vector<double> delta;
  std::vector<double> delta_prev;
  double loss = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double* x = features.data() + i * input_dim_;
    activations[0].assign(x, x + input_dim_);
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t in = sizes[l];
      const std::size_t out = sizes[l + 1];
      const double* w = params_.data() + offsets[l];
      const double* b = w + in * out;
      pre[l].assign(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double z = b[o];
        for (std::size_t k = 0; k < in; ++k)
          z += w[o * in + k] * activations[l][k];
        pre[l][o] = z;
      }
      if (l + 1 < layers) {
        activations[l + 1].resize(out);
        for (std::size_t o = 0; o < out; ++o) {
          activations[l + 1][o] = std::max(pre[l][o], 0.0);
        }
      }
    }
    const double z = pre[layers - 1][0];
    const double y = labels[i];
    const double scale = (weights.empty() ? 1.0 : weights[i]) / weight_sum;
    loss += scale * (Softplus(z) - y * z);
    if (gradient == nullptr) continue;

    delta.assign(1, scale * (Sigmoid(z) - y));
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = sizes[l];
      const std::size_t out = sizes[l + 1];
      const double* w = params_.data() + offsets[l];
      double* gw = gradient->data() + offsets[l];
      double* gb = gw + in * out;
      for (std::size_t o = 0; o < out; ++o) {
        gb[o] += delta[o];
        for (std::size_t k = 0; k < in; ++k) {
          gw[o * in + k] += delta[o] * activations[l][k];
        }
      }
      if (l == 0) break;
      delta_prev.assign(in, 0.0);
      for (std::size_t k = 0; k < in; ++k) {
        if (pre[l - 1][k] <= 0.0) continue;
        double sum = 0.0;
        for (std::size_t o = 0; o < out; ++o) sum += w[o * in + k] * delta[o];
        delta_prev[k] = sum;
      }
      delta.swap(delta_prev);
    }
  }

  if (l2 > 0.0) {
    for (std::size_t l = 0; l < layers; ++l) {
      const std::size_t count = sizes[l] * sizes[l + 1];
      const double* w = params_.data() + offsets[l];
      for (std::size_t k = 0; k < count; ++k) {
        loss += 0.5 * l2 * w[k] * w[k];
        if (gradient != nullptr) (*gradient)[offsets[l] + k] += l2 * w[k];
      }
    }
  }
  return loss;
}

NetworkClassifier::NetworkClassifier(std::string kind, EncodingMap encoding,
                                     FeedForwardNet net, TrainConfig config)
    : kind_(std::move(kind)),
      encoding_(std::move(encoding)),
      net_(std::move(net)),
      config_(std::move(config)) {
  if (net_.input_dim() != encoding_.dimension()) {
    throw Error(ErrorCode::kShape,
                "network input dimension does not match the encoding");
  }
  config_.instance_weights.clear();
}

double NetworkClassifier::PredictProba(const Instance& instance) const {
  thread_local std::vector<double> buffer;
  if (instance.values.size() != encoding_.num_attributes()) {
    throw Error(ErrorCode::kShape,
                "instance has " + std::to_string(instance.values.size()) +
                    " attributes, model expects " +
                    std::to_string(encoding_.num_attributes()));
  }
  buffer.resize(encoding_.dimension());
  encoding_.EncodeInto(instance, buffer.data());
  return net_.Predict(buffer);
}

std::uint64_t NetworkClassifier::Fingerprint() const {
  std::uint64_t hash = internal::Fnv1a(kind_.data(), kind_.size());
  const std::size_t dim = net_.input_dim();
  hash = internal::Fnv1a(&dim, sizeof(dim), hash);
  for (std::size_t units : net_.hidden()) {
    hash = internal::Fnv1a(&units, sizeof(units), hash);
  }
  const auto params = net_.parameters();
  return internal::Fnv1a(params.data(), params.size_bytes(), hash);
}

NetworkClassifier FitLogistic(const Dataset& train, const TrainConfig& config) {
  return Train("logistic", train, config, {});
}

NetworkClassifier FitMlp(const Dataset& train, const TrainConfig& config,
                         const std::vector<std::size_t>& hidden) {
  return Train("mlp", train, config, hidden);
}

std::vector<double> ReweightingWeights(const Dataset& train,
                                       const ProtectedDomains& domains) {
  const Schema& schema = train.schema();
  std::map<ProtectedTuple, double> subgroup_count;
  std::map<std::pair<ProtectedTuple, int>, double> cell_count;
  double label_count[2] = {0.0, 0.0};
  std::vector<ProtectedTuple> tuples;
  tuples.reserve(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) {
    ProtectedTuple tuple = ProtectedTupleOf(train.rows()[r], schema);
    if (!domains.Contains(tuple)) {
      throw Error(ErrorCode::kData,
                  "row " + std::to_string(r) +
                      " belongs to a subgroup outside the protected domains");
    }
    const int y = train.labels()[r];
    subgroup_count[tuple] += 1.0;
    cell_count[{tuple, y}] += 1.0;
    label_count[y] += 1.0;
    tuples.push_back(std::move(tuple));
  }
  const double n = static_cast<double>(train.size());
  std::vector<double> weights(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) {
    const int y = train.labels()[r];
    weights[r] = (subgroup_count[tuples[r]] * label_count[y]) /
                 (n * cell_count[{tuples[r], y}]);
  }
  return weights;
}

void SaveClassifier(const NetworkClassifier& classifier,
                    const std::filesystem::path& path) {
  json encoding = json::array();
  for (const auto& block : classifier.encoding().blocks()) {
    if (block.kind == AttributeKind::kCategorical) {
      encoding.push_back({{"kind", "categorical"}, {"levels", block.levels}});
    } else {
      encoding.push_back(
          {{"kind", "numeric"}, {"min", block.min}, {"max", block.max}});
    }
  }
  const auto params = classifier.network().parameters();
  const TrainConfig& config = classifier.config();
  json doc = {
      {"format", "fairhome-classifier"},
      {"version", 1},
      {"kind", classifier.kind()},
      {"input_dim", classifier.network().input_dim()},
      {"hidden", classifier.network().hidden()},
      {"encoding", encoding},
      {"parameters", std::vector<double>(params.begin(), params.end())},
      {"train",
       {{"learning_rate", config.learning_rate},
        {"epochs", config.epochs},
        {"batch_size", config.batch_size},
        {"l2_penalty", config.l2_penalty},
        {"seed", config.seed}}},
  };
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

NetworkClassifier LoadClassifier(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != "fairhome-classifier" || doc.at("version") != 1) {
      throw Error(ErrorCode::kData, "unsupported classifier file format");
    }
    std::vector<EncodingMap::Block> blocks;
    for (const json& entry : doc.at("encoding")) {
      EncodingMap::Block block;
      if (entry.at("kind") == "categorical") {
        block.kind = AttributeKind::kCategorical;
        block.levels = entry.at("levels").get<std::vector<std::string>>();
      } else {
        block.kind = AttributeKind::kNumeric;
        block.min = entry.at("min").get<double>();
        block.max = entry.at("max").get<double>();
      }
      blocks.push_back(std::move(block));
    }
    FeedForwardNet net(doc.at("input_dim").get<std::size_t>(),
                       doc.at("hidden").get<std::vector<std::size_t>>());
    const auto params = doc.at("parameters").get<std::vector<double>>();
    if (params.size() != net.num_parameters()) {
      throw Error(ErrorCode::kData, "parameter count does not match layout");
    }
    std::copy(params.begin(), params.end(), net.mutable_parameters().begin());
    TrainConfig config;
    const json& train = doc.at("train");
    config.learning_rate = train.at("learning_rate").get<double>();
    config.epochs = train.at("epochs").get<int>();
    config.batch_size = train.at("batch_size").get<int>();
    config.l2_penalty = train.at("l2_penalty").get<double>();
    config.seed = train.at("seed").get<std::uint64_t>();
    return NetworkClassifier(doc.at("kind").get<std::string>(),
                             EncodingMap(std::move(blocks)), std::move(net),
                             config);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kData,
                "malformed classifier file " + path.string() + ": " + e.what());
  }
}

}  // namespace fairhome
