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

#include "fairhome/runner.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "fairhome/csv.h"
#include "fairhome/error.h"
#include "fairhome/mutate.h"
#include "json.hpp"
#include "random.h"

namespace fairhome {
namespace {

using nlohmann::json;

constexpr std::array<Method, 8> kAllMethods = {
    Method::kOriginal,  Method::kFairhome,  Method::kFairhome1,
    Method::kFairhome2, Method::kFairhome3, Method::kFairhome4,
    Method::kFairhome5, Method::kRew};

constexpr std::uint64_t kFaireaSeedSalt = 0x5fa1ea0000000001ULL;

std::string Hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::uint64_t ParseHex(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kData, "not a hex value: '" + text + "'");
  }
  return value;
}

std::uint64_t ParseUnsigned(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kData, "not an unsigned integer: '" + text + "'");
  }
  return value;
}

// Undefined values are written as "nan"; empty cells mean "not applicable".
std::string Cell(double value) {
  return std::isnan(value) ? std::string("nan") : FormatNumber(value);
}

double ReadCell(const std::string& text) {
  const auto trimmed = csv::Trim(text);
  if (trimmed.empty() || trimmed == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ParseNumber(text);
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
  return out;
}

void CloseOutput(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
  }
}

void PrepareDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo,
                "cannot create output directory '" + dir.string() + "'");
  }
}

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> SplitOn(const std::string& text,
                                 std::string_view sep) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + sep.size();
  }
}

// Header-indexed CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t Column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kSchema, "missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table ReadTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  Table table;
  auto header = csv::ReadRow(in);
  if (!header)
    throw Error(ErrorCode::kData, "'" + path.string() + "' is empty");
  table.header = std::move(*header);
  while (auto row = csv::ReadRow(in)) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != table.header.size()) {
      throw Error(ErrorCode::kData,
                  "'" + path.string() + "': row width differs from header");
    }
    table.rows.push_back(std::move(*row));
  }
  return table;
}

void SetNamedMetric(MetricReport& report, const std::string& name,
                    double value) {
  auto& wc = report.worst_case;
  auto& ac = report.average_case;
  auto& perf = report.performance;
  if (name == "wc_spd")
    wc.spd = value;
  else if (name == "wc_aod")
    wc.aod = value;
  else if (name == "wc_eod")
    wc.eod = value;
  else if (name == "ac_spd")
    ac.spd = value;
  else if (name == "ac_aod")
    ac.aod = value;
  else if (name == "ac_eod")
    ac.eod = value;
  else if (name == "accuracy")
    perf.accuracy = value;
  else if (name == "macro_precision")
    perf.macro_precision = value;
  else if (name == "macro_recall")
    perf.macro_recall = value;
  else if (name == "macro_f1")
    perf.macro_f1 = value;
  else if (name == "mcc")
    perf.mcc = value;
}

// "spd[sex]" -> {"spd", "sex"}.
std::optional<std::pair<std::string, std::string>> SplitGroupColumn(
    const std::string& name) {
  const auto open = name.find('[');
  if (open == std::string::npos || name.back() != ']') return std::nullopt;
  std::string kind = name.substr(0, open);
  if (kind != "spd" && kind != "aod" && kind != "eod") return std::nullopt;
  return std::make_pair(kind, name.substr(open + 1, name.size() - open - 2));
}

GroupFairness& GroupEntry(MetricReport& report, const std::string& attribute) {
  for (auto& [name, group] : report.per_attribute) {
    if (name == attribute) return group;
  }
  report.per_attribute.emplace_back(attribute, GroupFairness{});
  return report.per_attribute.back().second;
}

std::string TaskName(const ExperimentConfig& config) {
  if (!config.task.empty()) return config.task;
  return config.dataset_path.stem().string();
}

double Mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Records grouped by task, in first-seen order.
std::vector<std::string> TasksInOrder(const std::vector<RunRecord>& records) {
  std::vector<std::string> tasks;
  for (const auto& r : records) {
    if (std::find(tasks.begin(), tasks.end(), r.task) == tasks.end()) {
      tasks.push_back(r.task);
    }
  }
  return tasks;
}

std::vector<std::string> MethodsInOrder(const std::vector<RunRecord>& records) {
  std::vector<std::string> methods;
  for (const auto& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  return methods;
}

std::vector<double> MetricValues(const std::vector<RunRecord>& records,
                                 const std::string& task,
                                 const std::string& method,
                                 std::string_view metric) {
  std::vector<double> values;
  for (const auto& r : records) {
    if (!r.ok || r.task != task || r.method != method) continue;
    const double v = MetricValue(r.report, metric);
    if (std::isfinite(v)) values.push_back(v);
  }
  return values;
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kOriginal:
      return "original";
    case Method::kFairhome:
      return "fairhome";
    case Method::kFairhome1:
      return "fairhome1";
    case Method::kFairhome2:
      return "fairhome2";
    case Method::kFairhome3:
      return "fairhome3";
    case Method::kFairhome4:
      return "fairhome4";
    case Method::kFairhome5:
      return "fairhome5";
    case Method::kRew:
      return "rew";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : kAllMethods) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kUsage, "unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::Validate() const {
  if (dataset_path.empty())
    throw Error(ErrorCode::kUsage, "dataset is required");
  if (schema_path.empty()) throw Error(ErrorCode::kUsage, "schema is required");
  if (methods.empty()) throw Error(ErrorCode::kUsage, "no methods given");
  std::set<Method> seen;
  for (Method m : methods) {
    if (!seen.insert(m).second) {
      throw Error(ErrorCode::kUsage,
                  "duplicate method '" + std::string(MethodName(m)) + "'");
    }
  }
  if (repetitions < 1) {
    throw Error(ErrorCode::kUsage, "repetitions must be at least 1");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kUsage, "test_fraction must lie in (0, 1)");
  }
  if (fairea_degrees.size() < 2 || fairea_degrees.front() != 0.0 ||
      fairea_degrees.back() != 1.0 ||
      !std::is_sorted(fairea_degrees.begin(), fairea_degrees.end())) {
    throw Error(ErrorCode::kUsage,
                "fairea degrees must ascend from 0.0 to 1.0");
  }
  if (fairea_reps < 1) {
    throw Error(ErrorCode::kUsage, "fairea reps must be at least 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kUsage, "alpha must lie in (0, 1)");
  }
  if (!train.instance_weights.empty()) {
    throw Error(ErrorCode::kUsage, "instance weights are set per repetition");
  }
  train.Validate(0);
  for (std::size_t width : mlp_layout) {
    if (width == 0) throw Error(ErrorCode::kUsage, "mlp layer of width 0");
  }
}

ExperimentConfig ParseExperimentConfig(std::istream& in,
                                       const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUsage, std::string("config: ") + e.what());
  }
  if (!doc.is_object())
    throw Error(ErrorCode::kUsage, "config is not an object");

  static const std::set<std::string> kKeys = {
      "task",        "dataset",       "schema",    "model",  "methods",
      "repetitions", "test_fraction", "base_seed", "fairea", "alpha",
      "output_dir",  "train",         "mlp_layout"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) {
      throw Error(ErrorCode::kUsage, "config: unknown key '" + key + "'");
    }
  }

  auto resolve = [&](const std::string& text) {
    std::filesystem::path p(text);
    return p.is_absolute() ? p : (base_dir / p).lexically_normal();
  };

  ExperimentConfig config;
  try {
    if (doc.contains("task")) config.task = doc["task"].get<std::string>();
    if (doc.contains("dataset")) {
      config.dataset_path = resolve(doc["dataset"].get<std::string>());
    }
    if (doc.contains("schema")) {
      config.schema_path = resolve(doc["schema"].get<std::string>());
    }
    if (doc.contains("model")) {
      const auto model = doc["model"].get<std::string>();
      if (model == "logistic") {
        config.model = ModelKind::kLogistic;
      } else if (model == "mlp") {
        config.model = ModelKind::kMlp;
      } else {
        throw Error(ErrorCode::kUsage, "unknown model '" + model + "'");
      }
    }
    if (doc.contains("methods")) {
      config.methods.clear();
      for (const auto& m : doc["methods"]) {
        config.methods.push_back(ParseMethod(m.get<std::string>()));
      }
    }
    if (doc.contains("repetitions")) {
      config.repetitions = doc["repetitions"].get<int>();
    }
    if (doc.contains("test_fraction")) {
      config.test_fraction = doc["test_fraction"].get<double>();
    }
    if (doc.contains("base_seed")) {
      config.base_seed = doc["base_seed"].get<std::uint64_t>();
    }
    if (doc.contains("fairea")) {
      const auto& fairea = doc["fairea"];
      for (const auto& [key, value] : fairea.items()) {
        if (key != "degrees" && key != "reps") {
          throw Error(ErrorCode::kUsage,
                      "config: unknown key 'fairea." + key + "'");
        }
      }
      if (fairea.contains("degrees")) {
        config.fairea_degrees = fairea["degrees"].get<std::vector<double>>();
      }
      if (fairea.contains("reps"))
        config.fairea_reps = fairea["reps"].get<int>();
    }
    if (doc.contains("alpha")) config.alpha = doc["alpha"].get<double>();
    if (doc.contains("output_dir")) {
      config.output_dir = resolve(doc["output_dir"].get<std::string>());
    }
    if (doc.contains("train")) {
      const auto& train = doc["train"];
      for (const auto& [key, value] : train.items()) {
        if (key == "learning_rate") {
          config.train.learning_rate = value.get<double>();
        } else if (key == "epochs") {
          config.train.epochs = value.get<int>();
        } else if (key == "batch_size") {
          config.train.batch_size = value.get<int>();
        } else if (key == "l2_penalty") {
          config.train.l2_penalty = value.get<double>();
        } else {
          throw Error(ErrorCode::kUsage,
                      "config: unknown key 'train." + key + "'");
        }
      }
    }
    if (doc.contains("mlp_layout")) {
      config.mlp_layout = doc["mlp_layout"].get<std::vector<std::size_t>>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUsage, std::string("config: ") + e.what());
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  return ParseExperimentConfig(in, path.parent_path());
}

std::string CanonicalConfigJson(const ExperimentConfig& config) {
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(MethodName(m));
  json doc = {
      {"task", TaskName(config)},
      {"dataset", config.dataset_path.generic_string()},
      {"schema", config.schema_path.generic_string()},
      {"model", ModelKindName(config.model)},
      {"methods", methods},
      {"repetitions", config.repetitions},
      {"test_fraction", config.test_fraction},
      {"base_seed", config.base_seed},
      {"fairea",
       {{"degrees", config.fairea_degrees}, {"reps", config.fairea_reps}}},
      {"alpha", config.alpha},
      {"train",
       {{"learning_rate", config.train.learning_rate},
        {"epochs", config.train.epochs},
        {"batch_size", config.train.batch_size},
        {"l2_penalty", config.train.l2_penalty}}},
      {"mlp_layout", config.mlp_layout},
  };
  return doc.dump();
}

std::uint64_t ConfigHash(const ExperimentConfig& config) {
  const std::string text = CanonicalConfigJson(config);
  return internal::Fnv1a(text.data(), text.size());
}

FairhomeOptions FairhomeOptionsFor(Method method, std::size_t num_protected,
                                   std::string* warning) {
  FairhomeOptions options;
  switch (method) {
    case Method::kFairhome:
      break;
    case Method::kFairhome1:
      options.mutation = MutationStrategy::kCorrelatedFeatures;
      break;
    case Method::kFairhome2:
      options.ensemble = EnsembleStrategy::kAveraging;
      break;
    case Method::kFairhome3:
      options.ensemble = EnsembleStrategy::kWeightedAveraging;
      break;
    case Method::kFairhome4:
      options.mutation = MutationStrategy::kSingleAttributeOnly;
      break;
    case Method::kFairhome5:
      options.mutation = MutationStrategy::kMultiAttributeOnly;
      if (num_protected == 2) {
        options.ensemble = EnsembleStrategy::kAveraging;
        if (warning != nullptr) {
          *warning =
              "fairhome5: two protected attributes leave one mutant per "
              "instance; using averaging instead of majority vote";
        }
      }
      break;
    case Method::kOriginal:
    case Method::kRew:
      throw Error(ErrorCode::kUsage, "'" + std::string(MethodName(method)) +
                                         "' is not an inference-time method");
  }
  return options;
}

std::vector<int> PredictWithMethod(Method method, const MethodContext& context,
                                   std::string* warning) {
  if (context.test == nullptr || context.classifier == nullptr) {
    throw Error(ErrorCode::kUsage, "method context lacks test set or model");
  }
  const auto& rows = context.test->rows();
  std::vector<int> decisions;
  decisions.reserve(rows.size());
  if (method == Method::kOriginal) {
    for (const auto& row : rows) {
      decisions.push_back(PredictDecision(*context.classifier, row));
    }
    return decisions;
  }
  if (context.domains == nullptr) {
    throw Error(ErrorCode::kUsage, "method context lacks protected domains");
  }
  const Schema& schema = context.test->schema();
  FairhomeOptions options =
      FairhomeOptionsFor(method, schema.num_protected(), warning);
  options.correlation = context.correlation;
  for (const auto& row : rows) {
    decisions.push_back(FairhomePredict(*context.classifier, row, schema,
                                        *context.domains, options));
  }
  return decisions;
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const std::string task = TaskName(config);
  const Schema schema = LoadSchema(config.schema_path);
  const Dataset dataset = LoadDataset(config.dataset_path, schema);

  ExperimentResult result;
  auto add_warning = [&](const std::string& text) {
    if (std::find(result.warnings.begin(), result.warnings.end(), text) ==
        result.warnings.end()) {
      result.warnings.push_back(text);
    }
  };
  auto train_model = [&](const Dataset& train, TrainConfig train_config) {
    if (config.model == ModelKind::kLogistic) {
      return FitLogistic(train, train_config);
    }
    return FitMlp(train, train_config, config.mlp_layout);
  };

  for (int rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t seed =
        config.base_seed + static_cast<std::uint64_t>(rep);
    result.seeds.push_back(seed);

    auto make_record = [&](Method method) {
      RunRecord record;
      record.task = task;
      record.method = std::string(MethodName(method));
      record.repetition = rep;
      record.seed = seed;
      return record;
    };

    // Shared per-repetition state; a failure here fails every cell.
    std::optional<TrainTestSplit> split;
    std::optional<NetworkClassifier> model;
    ProtectedDomains domains;
    std::optional<LabeledPredictions> original;
    std::string shared_error;
    try {
      split = Split(dataset, config.test_fraction, seed);
      domains = ComputeProtectedDomains(split->train);
      for (const auto& w : domains.warnings) add_warning(task + ": " + w);
      TrainConfig train_config = config.train;
      train_config.seed = seed;
      model = train_model(split->train, train_config);
      MethodContext context{&split->train, &split->test, &*model, &domains,
                            nullptr};
      original = MakeLabeledPredictions(
          split->test, PredictWithMethod(Method::kOriginal, context));
    } catch (const Error& e) {
      shared_error = e.what();
    }

    std::optional<CorrelationModel> correlation;
    std::string correlation_error;
    bool correlation_tried = false;

    for (Method method : config.methods) {
      RunRecord record = make_record(method);
      const auto start = std::chrono::steady_clock::now();
      try {
        if (!shared_error.empty())
          throw Error(ErrorCode::kTraining, shared_error);
        std::vector<int> decisions;
        std::string warning;
        if (method == Method::kRew) {
          TrainConfig train_config = config.train;
          train_config.seed = seed;
          train_config.instance_weights =
              ReweightingWeights(split->train, domains);
          const NetworkClassifier rew = train_model(split->train, train_config);
          record.model_fingerprint = rew.Fingerprint();
          MethodContext context{&split->train, &split->test, &rew, &domains,
                                nullptr};
          decisions = PredictWithMethod(Method::kOriginal, context);
        } else {
          record.model_fingerprint = model->Fingerprint();
          if (method == Method::kFairhome1 && !correlation_tried) {
            correlation_tried = true;
            try {
              correlation = FitExtrapolationModels(split->train);
              if (correlation->degenerate()) {
                add_warning(task +
                            ": correlation models are rank-deficient; using "
                            "intercept-only fits");
              }
            } catch (const Error& e) {
              correlation_error = e.what();
            }
          }
          if (method == Method::kFairhome1 && !correlation) {
            throw Error(ErrorCode::kUsage, correlation_error);
          }
          MethodContext context{&split->train, &split->test, &*model, &domains,
                                correlation ? &*correlation : nullptr};
          decisions = PredictWithMethod(method, context, &warning);
        }
        if (!warning.empty()) {
          record.warnings.push_back(warning);
          add_warning(task + ": " + warning);
        }
        record.report =
            Evaluate(WithPredictions(*original, std::move(decisions)));
      } catch (const Error& e) {
        record.ok = false;
        record.error = e.what();
      }
      record.duration_seconds = std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count();
      result.records.push_back(std::move(record));
    }

    if (original) {
      try {
        RepetitionBaseline baseline;
        baseline.task = task;
        baseline.repetition = rep;
        baseline.grid =
            BuildBaselineGrid(*original, config.fairea_degrees,
                              config.fairea_reps, seed ^ kFaireaSeedSalt);
        result.baselines.push_back(std::move(baseline));
      } catch (const Error& e) {
        add_warning(task + ": repetition " + std::to_string(rep) +
                    ": no trade-off baseline: " + e.what());
      }
    }
  }
  return result;
}

std::vector<TradeoffCase> ClassifyTradeoffs(
    const std::vector<RunRecord>& records,
    const std::vector<RepetitionBaseline>& baselines) {
  std::vector<TradeoffCase> cases;
  for (const auto& record : records) {
    if (!record.ok || record.method == MethodName(Method::kOriginal)) continue;
    const auto it = std::find_if(
        baselines.begin(), baselines.end(), [&](const RepetitionBaseline& b) {
          return b.task == record.task && b.repetition == record.repetition;
        });
    if (it == baselines.end()) continue;
    for (auto f : kFairnessMetrics) {
      for (auto p : kPerformanceMetrics) {
        const TradeoffBaseline baseline = it->grid.Select(f, p);
        // The degree-0 point is the original model.
        const TradeoffPoint& original = baseline.points.front();
        const TradeoffPoint point{std::string(f), std::string(p),
                                  MetricValue(record.report, f),
                                  MetricValue(record.report, p)};
        const CaseClassification c = ClassifyCase(point, original, baseline);
        cases.push_back({record.task, record.method, record.repetition,
                         std::string(f), std::string(p), c.region, c.clamped});
      }
    }
  }
  return cases;
}

double RegionDistribution::GoodOrBetterShare() const {
  if (total == 0) return 0.0;
  const int good = counts[static_cast<std::size_t>(TradeoffRegion::kWinWin)] +
                   counts[static_cast<std::size_t>(TradeoffRegion::kGood)];
  return static_cast<double>(good) / total;
}

std::vector<RegionDistribution> SummarizeRegions(
    const std::vector<TradeoffCase>& cases) {
  std::vector<RegionDistribution> out;
  for (const auto& c : cases) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& d) { return d.method == c.method; });
    if (it == out.end()) {
      out.push_back({c.method, {}, 0});
      it = out.end() - 1;
    }
    ++it->counts[static_cast<std::size_t>(c.region)];
    ++it->total;
  }
  return out;
}

ImprovementRow Improvement(std::string method, std::string metric,
                           double original_mean, double method_mean) {
  ImprovementRow row;
  row.method = std::move(method);
  row.metric = std::move(metric);
  row.original_mean = original_mean;
  row.method_mean = method_mean;
  row.absolute_change = method_mean - original_mean;
  row.relative_change = original_mean == 0.0
                            ? std::numeric_limits<double>::quiet_NaN()
                            : 100.0 * row.absolute_change / original_mean;
  return row;
}

std::vector<ImprovementRow> ComputeImprovements(
    const std::vector<RunRecord>& records) {
  const std::string original(MethodName(Method::kOriginal));
  const auto tasks = TasksInOrder(records);
  std::vector<ImprovementRow> rows;
  for (const auto& method : MethodsInOrder(records)) {
    if (method == original) continue;
    auto add = [&](std::string_view metric) {
      std::vector<double> original_means;
      std::vector<double> method_means;
      for (const auto& task : tasks) {
        const auto o = MetricValues(records, task, original, metric);
        const auto m = MetricValues(records, task, method, metric);
        if (o.empty() || m.empty()) continue;
        original_means.push_back(Mean(o));
        method_means.push_back(Mean(m));
      }
      if (original_means.empty()) return;
      rows.push_back(Improvement(method, std::string(metric),
                                 Mean(original_means), Mean(method_means)));
    };
    for (auto metric : kFairnessMetrics) add(metric);
    for (auto metric : kPerformanceMetrics) add(metric);
  }
  return rows;
}

WtlMatrix ComputeWinTieLoss(const std::vector<RunRecord>& records,
                            std::string_view reference, double alpha) {
  WtlMatrix matrix;
  const std::string ref(reference);
  const auto methods = MethodsInOrder(records);
  for (const auto& task : TasksInOrder(records)) {
    for (auto metric : kFairnessMetrics) {
      const auto mine = MetricValues(records, task, ref, metric);
      if (mine.empty()) continue;
      for (const auto& other : methods) {
        if (other == ref) continue;
        const auto theirs = MetricValues(records, task, other, metric);
        if (theirs.empty()) continue;
        matrix[std::string(metric)][other].Add(
            WinTieLoss(mine, theirs, alpha, true).label);
      }
    }
  }
  return matrix;
}

void EmitReport(const std::vector<RunRecord>& records,
                const std::vector<RepetitionBaseline>& baselines,
                const std::vector<TradeoffCase>& cases, const WtlMatrix& wtl,
                const std::filesystem::path& output_dir) {
  if (records.empty()) throw Error(ErrorCode::kUsage, "no records to report");
  PrepareDirectory(output_dir);

  // metrics.csv
  {
    std::vector<std::string> group_columns;
    for (const auto& r : records) {
      for (const auto& [attribute, group] : r.report.per_attribute) {
        for (const char* kind : {"spd", "aod", "eod"}) {
          std::string name = std::string(kind) + "[" + attribute + "]";
          if (std::find(group_columns.begin(), group_columns.end(), name) ==
              group_columns.end()) {
            group_columns.push_back(std::move(name));
          }
        }
      }
    }
    std::vector<std::string> header = {
        "task", "method", "repetition",       "seed",
        "ok",   "error",  "model_fingerprint"};
    for (auto m : kFairnessMetrics) header.emplace_back(m);
    for (auto m : kPerformanceMetrics) header.emplace_back(m);
    header.insert(header.end(), group_columns.begin(), group_columns.end());
    header.emplace_back("warnings");

    const auto path = output_dir / "metrics.csv";
    auto out = OpenOutput(path);
    csv::WriteRow(out, header);
    for (const auto& r : records) {
      std::vector<std::string> row = {r.task,
                                      r.method,
                                      std::to_string(r.repetition),
                                      std::to_string(r.seed),
                                      r.ok ? "1" : "0",
                                      r.error,
                                      Hex(r.model_fingerprint)};
      for (auto m : kFairnessMetrics) {
        row.push_back(r.ok ? Cell(MetricValue(r.report, m)) : "");
      }
      for (auto m : kPerformanceMetrics) {
        row.push_back(r.ok ? Cell(MetricValue(r.report, m)) : "");
      }
      for (const auto& column : group_columns) {
        const auto parts = SplitGroupColumn(column);
        std::string cell;
        for (const auto& [attribute, group] : r.report.per_attribute) {
          if (r.ok && attribute == parts->second) {
            cell = Cell(MetricValue(r.report, column));
          }
        }
        row.push_back(cell);
      }
      row.push_back(Join(r.warnings, "; "));
      csv::WriteRow(out, row);
    }
    CloseOutput(out, path);
  }

  // baselines.csv
  {
    const auto path = output_dir / "baselines.csv";
    auto out = OpenOutput(path);
    std::vector<std::string> header = {"task", "repetition", "degree", "reps"};
    for (auto m : kFairnessMetrics) header.emplace_back(m);
    for (auto m : kPerformanceMetrics) header.emplace_back(m);
    csv::WriteRow(out, header);
    for (const auto& b : baselines) {
      for (std::size_t k = 0; k < b.grid.degrees.size(); ++k) {
        std::vector<std::string> row = {b.task, std::to_string(b.repetition),
                                        FormatNumber(b.grid.degrees[k]),
                                        std::to_string(b.grid.reps_per_degree)};
        for (double v : b.grid.rows.at(k)) row.push_back(Cell(v));
        csv::WriteRow(out, row);
      }
    }
    CloseOutput(out, path);
  }

  // improvement.csv
  {
    const auto path = output_dir / "improvement.csv";
    auto out = OpenOutput(path);
    csv::WriteRow(out, {"method", "metric", "original_mean", "method_mean",
                        "absolute_change", "relative_change_percent"});
    for (const auto& row : ComputeImprovements(records)) {
      csv::WriteRow(out, {row.method, row.metric, Cell(row.original_mean),
                          Cell(row.method_mean), Cell(row.absolute_change),
                          Cell(row.relative_change)});
    }
    CloseOutput(out, path);
  }

  // wtl.csv
  {
    std::vector<std::string> compared;
    for (const auto& method : MethodsInOrder(records)) {
      for (const auto& [metric, cells] : wtl) {
        if (cells.count(method) && std::find(compared.begin(), compared.end(),
                                             method) == compared.end()) {
          compared.push_back(method);
        }
      }
    }
    const auto path = output_dir / "wtl.csv";
    auto out = OpenOutput(path);
    std::vector<std::string> header = {"metric"};
    header.insert(header.end(), compared.begin(), compared.end());
    csv::WriteRow(out, header);
    for (auto metric : kFairnessMetrics) {
      const auto it = wtl.find(std::string(metric));
      if (it == wtl.end()) continue;
      std::vector<std::string> row = {std::string(metric)};
      for (const auto& method : compared) {
        const auto cell = it->second.find(method);
        row.push_back(cell == it->second.end() ? WtlCounts{}.ToString()
                                               : cell->second.ToString());
      }
      csv::WriteRow(out, row);
    }
    CloseOutput(out, path);
  }

  // regions.csv
  {
    const auto path = output_dir / "regions.csv";
    auto out = OpenOutput(path);
    csv::WriteRow(out, {"method", "win_win", "good", "poor", "lose_lose",
                        "inverted", "total", "good_or_better_share"});
    for (const auto& d : SummarizeRegions(cases)) {
      std::vector<std::string> row = {d.method};
      for (int count : d.counts) row.push_back(std::to_string(count));
      row.push_back(std::to_string(d.total));
      row.push_back(FormatNumber(d.GoodOrBetterShare()));
      csv::WriteRow(out, row);
    }
    CloseOutput(out, path);
  }

  // tradeoffs.csv
  {
    const auto path = output_dir / "tradeoffs.csv";
    auto out = OpenOutput(path);
    csv::WriteRow(out, {"task", "method", "repetition", "fairness_metric",
                        "performance_metric", "region", "clamped"});
    for (const auto& c : cases) {
      csv::WriteRow(out, {c.task, c.method, std::to_string(c.repetition),
                          c.fairness_metric, c.performance_metric,
                          std::string(TradeoffRegionName(c.region)),
                          c.clamped ? "1" : "0"});
    }
    CloseOutput(out, path);
  }
}

void WriteRunManifest(const ExperimentConfig& config,
                      const ExperimentResult& result,
                      const std::filesystem::path& output_dir) {
  PrepareDirectory(output_dir);
  json cells = json::array();
  for (const auto& r : result.records) {
    json cell = {{"task", r.task},
                 {"method", r.method},
                 {"repetition", r.repetition},
                 {"seed", r.seed},
                 {"ok", r.ok},
                 {"model_fingerprint", Hex(r.model_fingerprint)}};
    if (!r.ok) cell["error"] = r.error;
    cells.push_back(std::move(cell));
  }
  json manifest = {
      {"format", "fairhome-run-manifest"},
      {"version", 1},
      {"config", json::parse(CanonicalConfigJson(config))},
      {"config_hash", Hex(ConfigHash(config))},
      {"seeds", result.seeds},
      {"warnings", result.warnings},
      {"cells", cells},
      {"files",
       {"metrics.csv", "baselines.csv", "improvement.csv", "wtl.csv",
        "regions.csv", "tradeoffs.csv", "timings.csv"}},
  };
  {
    const auto path = output_dir / "manifest.json";
    auto out = OpenOutput(path);
    out << manifest.dump(2) << "\n";
    CloseOutput(out, path);
  }
  {
    const auto path = output_dir / "timings.csv";
    auto out = OpenOutput(path);
    csv::WriteRow(out, {"task", "method", "repetition", "duration_seconds"});
    for (const auto& r : result.records) {
      csv::WriteRow(out, {r.task, r.method, std::to_string(r.repetition),
                          FormatNumber(r.duration_seconds)});
    }
    CloseOutput(out, path);
  }
}

std::vector<RunRecord> ReadMetricsCsv(const std::filesystem::path& path) {
  const Table table = ReadTable(path);
  const std::size_t task = table.Column("task");
  const std::size_t method = table.Column("method");
  const std::size_t repetition = table.Column("repetition");
  const std::size_t seed = table.Column("seed");
  const std::size_t ok = table.Column("ok");
  const std::size_t error = table.Column("error");
  const std::size_t fingerprint = table.Column("model_fingerprint");
  std::vector<std::pair<std::string, std::size_t>> named;
  for (auto m : kFairnessMetrics) {
    named.emplace_back(std::string(m), table.Column(std::string(m)));
  }
  for (auto m : kPerformanceMetrics) {
    named.emplace_back(std::string(m), table.Column(std::string(m)));
  }
  std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>>
      groups;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (auto parts = SplitGroupColumn(table.header[c])) {
      groups.emplace_back(*parts, c);
    }
  }
  const auto warnings_it =
      std::find(table.header.begin(), table.header.end(), "warnings");

  std::vector<RunRecord> records;
  for (const auto& row : table.rows) {
    RunRecord r;
    r.task = row[task];
    r.method = row[method];
    r.repetition = static_cast<int>(ParseUnsigned(row[repetition]));
    r.seed = ParseUnsigned(row[seed]);
    r.ok = row[ok] == "1";
    r.error = row[error];
    r.model_fingerprint = ParseHex(row[fingerprint]);
    if (r.ok) {
      for (const auto& [name, column] : named) {
        SetNamedMetric(r.report, name, ReadCell(row[column]));
      }
      for (const auto& [parts, column] : groups) {
        if (csv::Trim(row[column]).empty()) continue;
        GroupFairness& g = GroupEntry(r.report, parts.second);
        const double value = ReadCell(row[column]);
        if (parts.first == "spd")
          g.spd = value;
        else if (parts.first == "aod")
          g.aod = value;
        else
          g.eod = value;
      }
    }
    if (warnings_it != table.header.end()) {
      r.warnings = SplitOn(
          row[static_cast<std::size_t>(warnings_it - table.header.begin())],
          "; ");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RepetitionBaseline> ReadBaselinesCsv(
    const std::filesystem::path& path) {
  const Table table = ReadTable(path);
  const std::size_t task = table.Column("task");
  const std::size_t repetition = table.Column("repetition");
  const std::size_t degree = table.Column("degree");
  const std::size_t reps = table.Column("reps");
  std::vector<std::size_t> columns;
  for (auto m : kFairnessMetrics)
    columns.push_back(table.Column(std::string(m)));
  for (auto m : kPerformanceMetrics) {
    columns.push_back(table.Column(std::string(m)));
  }
  std::vector<RepetitionBaseline> baselines;
  for (const auto& row : table.rows) {
    const int rep = static_cast<int>(ParseUnsigned(row[repetition]));
    if (baselines.empty() || baselines.back().task != row[task] ||
        baselines.back().repetition != rep) {
      RepetitionBaseline b;
      b.task = row[task];
      b.repetition = rep;
      b.grid.reps_per_degree = static_cast<int>(ParseUnsigned(row[reps]));
      baselines.push_back(std::move(b));
    }
    auto& grid = baselines.back().grid;
    grid.degrees.push_back(ParseNumber(row[degree]));
    std::vector<double> values;
    for (std::size_t c : columns) values.push_back(ReadCell(row[c]));
    grid.rows.push_back(std::move(values));
  }
  return baselines;
}

}  // namespace fairhome
