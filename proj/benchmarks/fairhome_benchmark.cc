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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>
#include <vector>

#include "fairhome/data.h"
#include "fairhome/ensemble.h"
#include "fairhome/fairea.h"
#include "fairhome/metrics.h"
#include "fairhome/model.h"
#include "fairhome/mutate.h"
#include "fairhome/stats.h"

namespace fairhome {
namespace {

const std::filesystem::path kDataDir = FAIRHOME_DATA_DIR;

struct Compas {
  Schema schema;
  TrainTestSplit split;
  ProtectedDomains domains;
  NetworkClassifier model;
  LabeledPredictions predictions;
};

const Compas& Fixture() {
  static const Compas fixture = [] {
    const Schema schema = LoadSchema(kDataDir / "compas_synth.schema.json");
    auto split =
        Split(LoadDataset(kDataDir / "compas_synth.csv", schema), 0.3, 0);
    auto domains = ComputeProtectedDomains(split.train);
    TrainConfig config;
    config.learning_rate = 0.1;
    config.epochs = 50;
    auto model = FitLogistic(split.train, config);
    std::vector<int> decisions;
    for (const auto& row : split.test.rows()) {
      decisions.push_back(PredictDecision(model, row));
    }
    auto predictions = MakeLabeledPredictions(split.test, decisions);
    return Compas{schema, std::move(split), std::move(domains),
                  std::move(model), std::move(predictions)};
  }();
  return fixture;
}

void BM_GenerateMutants(benchmark::State& state) {
  const auto& f = Fixture();
  const auto& row = f.split.test.rows().front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(GenerateMutants(row, f.schema, f.domains,
                                             MutationStrategy::kProtectedOnly));
  }
}
BENCHMARK(BM_GenerateMutants);

void BM_FairhomePredict(benchmark::State& state) {
  const auto& f = Fixture();
  const FairhomeOptions options{MutationStrategy::kProtectedOnly,
                                static_cast<EnsembleStrategy>(state.range(0))};
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& row = f.split.test.rows()[i++ % f.split.test.size()];
    benchmark::DoNotOptimize(
        FairhomePredict(f.model, row, f.schema, f.domains, options));
  }
}
BENCHMARK(BM_FairhomePredict)->DenseRange(0, 2);

void BM_Evaluate(benchmark::State& state) {
  const auto& f = Fixture();
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(f.predictions));
}
BENCHMARK(BM_Evaluate);

void BM_BaselineGrid(benchmark::State& state) {
  const auto& f = Fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildBaselineGrid(
        f.predictions, DefaultDegrees(), static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_BaselineGrid)->Arg(1)->Arg(10);

void BM_MannWhitney(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> a(static_cast<std::size_t>(state.range(0)));
  std::vector<double> b(a.size());
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng) + 0.5;
  const auto method =
      a.size() * 2 <= kExactLimit ? PValueMethod::kExact : PValueMethod::kAuto;
  for (auto _ : state) benchmark::DoNotOptimize(MannWhitneyU(a, b, method));
}
BENCHMARK(BM_MannWhitney)->Arg(6)->Arg(20)->Arg(200);

}  // namespace
}  // namespace fairhome

BENCHMARK_MAIN();
