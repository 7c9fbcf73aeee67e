#ifndef LVSIE_EXPERIMENT_HPP
#define LVSIE_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lvsie/alignment.hpp"
#include "lvsie/dataset.hpp"
#include "lvsie/evaluation.hpp"
#include "lvsie/format_io.hpp"
#include "lvsie/model.hpp"

namespace lvsie {

enum class Scenario {
  kOverlapTable3,
  kDataQuantityFig2,
  kLossAblationTable4,
  kScirexTable5,
  kSciercStandardTable6,
  kStatsReport,
};

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view s);

// Environment variable naming the default data directory.
inline constexpr const char* kDataRootEnv = "LVSIE_DATA_ROOT";

struct DataPaths {
  std::string semeval_xml;
  std::string semeval_relations;
  std::string scierc;
  std::string scirex;
  std::string scierc_split;

  // Standard file names under one directory.
  static DataPaths in_directory(const std::string& dir);
};

struct ExperimentConfig {
  Scenario scenario = Scenario::kStatsReport;
  DataPaths data;
  SplitSpec split;
  ModelConfig model;
  std::size_t epochs = 30;
  std::size_t batch_size = 8;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  // Data-quantity caps; in desk-scale mode they are read as fractions of 1400
  // and applied to the available sentence count.
  std::vector<std::size_t> caps{1400, 1300, 1200, 1100, 1000, 900, 800, 700, 600, 500, 400};
  // Tiny encoder and few epochs so every scenario finishes in seconds.
  bool desk_scale = true;
  std::size_t desk_epochs = 20;
  std::string output_dir = "runs";
};

nlohmann::ordered_json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// FNV-1a 64 over the canonical JSON of everything except output_dir.
std::string config_hash(const ExperimentConfig& c);

// The model and schedule actually used once desk-scale mode is applied.
struct TrainingSchedule {
  ModelConfig model;
  std::size_t epochs = 0;
  std::size_t batch_size = 0;
};
TrainingSchedule effective_schedule(const ExperimentConfig& c);

struct LoadedData {
  ParseResult semeval;
  ParseResult scierc;
  std::optional<ParseResult> scirex;
  std::optional<std::map<std::string, Partition>> partition;
  OverlapResult overlap;
  Extras extras;
};

// Reads and aligns what the scenario needs; throws before any training when a
// required file is missing.
LoadedData load_data(const ExperimentConfig& c);

struct HeadScores {
  EvalResult ner;
  EvalResult re;
};

// Predicts with `model_head` on every example and scores against the gold of
// `gold_head`.
HeadScores evaluate_head(JointModel& model, const std::vector<TrainingExample>& gold,
                         Head model_head, Head gold_head, bool typed_ner);

JointModel train_model(const std::vector<TrainingExample>& examples,
                       const std::array<LabelSchema, kNumHeads>& schemas,
                       const TrainingSchedule& schedule, std::uint64_t seed,
                       std::optional<Divergence> divergence = std::nullopt, bool soft = false);

struct RunSummary {
  std::string run_dir;
  std::string config_hash;
  std::vector<std::uint64_t> trained_seeds;
  std::vector<std::uint64_t> skipped_seeds;
  bool noop = false;
};

// Writes <output_dir>/<scenario>-<hash>/{config.json, manifest.json,
// seed-<s>.json, metrics.json, plots/}. Seeds whose metrics file exists with
// the same hash are skipped.
RunSummary run_scenario(const ExperimentConfig& c);

}  // namespace lvsie

#endif  // LVSIE_EXPERIMENT_HPP
