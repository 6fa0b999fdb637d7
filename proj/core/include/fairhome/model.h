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

#ifndef FAIRHOME_MODEL_H_
#define FAIRHOME_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairhome/data.h"

namespace fairhome {

// A trained binary classifier. Implementations are immutable once built and
// safe to call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // Probability of the favorable class, in [0, 1].
  virtual double PredictProba(const Instance& instance) const = 0;

  virtual std::string kind() const = 0;
  // Identifies the trained parameters; equal fingerprints mean the same
  // model.
  virtual std::uint64_t Fingerprint() const = 0;
};

constexpr double kDecisionThreshold = 0.5;

// Favorable iff the probability reaches the threshold; 0.5 itself is
// favorable.
inline int Decide(double probability) {
  return probability >= kDecisionThreshold ? 1 : 0;
}

int PredictDecision(const Classifier& classifier, const Instance& instance);

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 100;
  // 0 means full batch.
  int batch_size = 32;
  double l2_penalty = 1e-4;
  std::uint64_t seed = 0;
  // One positive weight per training row, or empty for uniform weights.
  std::vector<double> instance_weights;

  // Throws Error(kUsage) on out-of-range fields.
  void Validate(std::size_t train_size) const;
};

// Fully-connected network with ReLU hidden layers and one sigmoid output.
// With no hidden layers it is logistic regression. Parameters are stored
// flat, layer by layer, each layer as its row-major weight matrix
// (out x in) followed by its bias vector.
class FeedForwardNet {
 public:
  FeedForwardNet() = default;
  FeedForwardNet(std::size_t input_dim, std::vector<std::size_t> hidden);

  std::size_t input_dim() const { return input_dim_; }
  const std::vector<std::size_t>& hidden() const { return hidden_; }
  std::size_t num_parameters() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }

  // Uniform in [-r, r] with r = sqrt(6 / (fan_in + fan_out)) for every
  // weight; biases start at zero. Logistic regression (no hidden layers)
  // starts from all zeros.
  void Initialize(std::uint64_t seed);

  double Logit(std::span<const double> x) const;
  double Predict(std::span<const double> x) const;

  // Weighted mean binary cross-entropy over the rows plus
  // 0.5 * l2 * sum(weights^2) (biases are not penalized). Writes the
  // gradient with respect to parameters() into `gradient` when non-null.
  // `features` is row-major (rows x input_dim); empty `weights` means 1.
  double Loss(std::span<const double> features, std::span<const int> labels,
              std::span<const double> weights, double l2,
              std::vector<double>* gradient) const;

  friend bool operator==(const FeedForwardNet&,
                         const FeedForwardNet&) = default;

 private:
  std::size_t input_dim_ = 0;
  std::vector<std::size_t> hidden_;
  std::vector<double> params_;
};

// Encoding map plus network: the built-in logistic and MLP models.
class NetworkClassifier final : public Classifier {
 public:
  NetworkClassifier(std::string kind, EncodingMap encoding, FeedForwardNet net,
                    TrainConfig config = {});

  double PredictProba(const Instance& instance) const override;
  std::string kind() const override { return kind_; }
  std::uint64_t Fingerprint() const override;

  const EncodingMap& encoding() const { return encoding_; }
  const FeedForwardNet& network() const { return net_; }
  const TrainConfig& config() const { return config_; }

  // Mean training loss recorded after each epoch by Fit*().
  const std::vector<double>& loss_history() const { return loss_history_; }
  void set_loss_history(std::vector<double> history) {
    loss_history_ = std::move(history);
  }

 private:
  std::string kind_;
  EncodingMap encoding_;
  FeedForwardNet net_;
  TrainConfig config_;
  std::vector<double> loss_history_;
};

inline const std::vector<std::size_t>& DeepMlpLayout() {
  static const std::vector<std::size_t> kLayout = {64, 32, 16, 8, 4};
  return kLayout;
}

// Both throw Error(kTraining) when the training set has fewer than two rows,
// a single label class, or encodes to zero features.
NetworkClassifier FitLogistic(const Dataset& train, const TrainConfig& config);
NetworkClassifier FitMlp(
    const Dataset& train, const TrainConfig& config,
    const std::vector<std::size_t>& hidden = DeepMlpLayout());

// Kamiran-Calders style weights over (subgroup, label) cells:
//   w(s, y) = N_s * N_y / (N * N_{s,y}).
// Throws Error(kData) for rows whose subgroup is not in `domains`.
std::vector<double> ReweightingWeights(const Dataset& train,
                                       const ProtectedDomains& domains);

// Versioned JSON dump of kind, encoding map and parameters. Doubles are
// written in round-trip form, so a loaded model predicts bit-identically.
void SaveClassifier(const NetworkClassifier& classifier,
                    const std::filesystem::path& path);
NetworkClassifier LoadClassifier(const std::filesystem::path& path);

}  // namespace fairhome

#endif  // FAIRHOME_MODEL_H_
