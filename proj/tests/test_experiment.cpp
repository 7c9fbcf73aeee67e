#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "lvsie/experiment.hpp"
#include "lvsie/plots.hpp"
#include "lvsie/synthetic.hpp"

using namespace lvsie;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ExperimentConfig smoke_config(const TempDir& dir, Scenario s) {
  SyntheticSpec spec;
  spec.overlapped = 6;
  spec.sem_only = 2;
  spec.sci_only = 2;
  spec.scirex = 2;
  spec.sentences_per_doc = 2;
  write_synthetic(generate_synthetic(spec), (dir.path() / "data").string());
  ExperimentConfig c;
  c.scenario = s;
  c.data = DataPaths::in_directory((dir.path() / "data").string());
  c.seeds = {1, 2};
  c.desk_epochs = 2;
  c.caps = {1400, 700};
  c.output_dir = (dir.path() / "runs").string();
  return c;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_file(p.string())); }

}  // namespace

TEST(Config, JsonRoundTripAndHash) {
  ExperimentConfig c;
  c.scenario = Scenario::kLossAblationTable4;
  c.split.soft_labels = true;
  c.split.cap = 300;
  c.seeds = {4, 5};
  const ExperimentConfig back = experiment_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  ExperimentConfig moved = c;
  moved.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(moved), config_hash(c));
  ExperimentConfig other = c;
  other.seeds = {4};
  EXPECT_NE(config_hash(other), config_hash(c));
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(experiment_config_from_json({{"scenario", "TABLE_9"}}), Error);
  EXPECT_THROW(experiment_config_from_json({{"seeds", nlohmann::json::array()}}), Error);
  EXPECT_THROW(experiment_config_from_json({{"split", {{"strategy", "UNION"}}}}), Error);
}

TEST(Config, DeskScaleShrinksSchedule) {
  ExperimentConfig c;
  const TrainingSchedule desk = effective_schedule(c);
  EXPECT_EQ(desk.epochs, c.desk_epochs);
  c.desk_scale = false;
  EXPECT_EQ(effective_schedule(c).epochs, c.epochs);
}

TEST(Scenario, MissingDataFailsBeforeWriting) {
  TempDir dir("lvsie_missing_data");
  ExperimentConfig c;
  c.scenario = Scenario::kOverlapTable3;
  c.data = DataPaths::in_directory((dir.path() / "nowhere").string());
  c.output_dir = (dir.path() / "runs").string();
  EXPECT_THROW(run_scenario(c), Error);
  EXPECT_FALSE(fs::exists(dir.path() / "runs"));
}

class ScenarioSmoke : public ::testing::TestWithParam<Scenario> {};

TEST_P(ScenarioSmoke, WritesArtifactsAndRerunIsNoop) {
  TempDir dir("lvsie_smoke_" + std::string(to_string(GetParam())));
  const ExperimentConfig c = smoke_config(dir, GetParam());
  const RunSummary first = run_scenario(c);
  EXPECT_FALSE(first.noop);
  const fs::path run(first.run_dir);
  for (const char* f : {"config.json", "manifest.json", "metrics.json"}) EXPECT_TRUE(fs::exists(run / f)) << f;
  EXPECT_TRUE(fs::exists(run / "plots" / "relation_distribution.csv"));
  const auto manifest = read_json(run / "manifest.json");
  EXPECT_EQ(manifest.at("config_hash"), first.config_hash);
  for (const auto& f : manifest.at("files")) EXPECT_TRUE(fs::exists(run / f.get<std::string>())) << f;
  const std::string metrics = read_file((run / "metrics.json").string());

  const auto stamp = fs::last_write_time(run / "manifest.json");
  const RunSummary second = run_scenario(c);
  EXPECT_TRUE(second.noop);
  EXPECT_TRUE(second.trained_seeds.empty());
  EXPECT_EQ(fs::last_write_time(run / "manifest.json"), stamp);
  EXPECT_EQ(read_file((run / "metrics.json").string()), metrics);
}

INSTANTIATE_TEST_SUITE_P(All, ScenarioSmoke,
                         ::testing::Values(Scenario::kOverlapTable3, Scenario::kDataQuantityFig2,
                                           Scenario::kLossAblationTable4, Scenario::kScirexTable5,
                                           Scenario::kSciercStandardTable6, Scenario::kStatsReport),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Scenario, Table3RowsAndBlockedCells) {
  TempDir dir("lvsie_table3_rows");
  ExperimentConfig c = smoke_config(dir, Scenario::kOverlapTable3);
  c.seeds = {1};
  const auto metrics = read_json(fs::path(run_scenario(c).run_dir) / "metrics.json");
  const auto& rows = metrics.at("rows");
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    const std::string s = r.at("strategy");
    const auto& res = r.at("results");
    EXPECT_EQ(res.contains("SCI"), s != "CONCAT_PLUS_SCI") << s;
    EXPECT_EQ(res.contains("SEM"), s != "CONCAT_PLUS_SEM") << s;
    if (res.contains("AVG")) {
      EXPECT_NEAR(res.at("AVG").at("RE").at("f1").get<double>(),
                  (res.at("SEM").at("RE").at("f1").get<double>() + res.at("SCI").at("RE").at("f1").get<double>()) / 2,
                  1e-12);
    }
  }
}

TEST(Scenario, PartialRerunTrainsOnlyNewSeeds) {
  TempDir dir("lvsie_partial_rerun");
  ExperimentConfig c = smoke_config(dir, Scenario::kLossAblationTable4);
  const RunSummary first = run_scenario(c);
  fs::remove(fs::path(first.run_dir) / "seed-2.json");
  const RunSummary second = run_scenario(c);
  EXPECT_FALSE(second.noop);
  EXPECT_EQ(second.trained_seeds, (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(second.skipped_seeds, (std::vector<std::uint64_t>{1}));
}

TEST(Plots, EmitsDataAndRejectsEmptyInput) {
  TempDir dir("lvsie_plots");
  const nlohmann::json curve = {{"series", {{{"name", "gold"}, {"points", {{400, 0.1}, {1400, 0.3}}}}}}};
  const PlotFiles f = emit_plots(curve, PlotKind::kQuantityCurve, dir.path().string(), "curve");
  EXPECT_EQ(read_file(f.data), "series,x,y\ngold,400,0.1\ngold,1400,0.3\n");
  EXPECT_TRUE(fs::exists(f.image));
  EXPECT_THROW(emit_plots({{"series", nlohmann::json::array()}}, PlotKind::kQuantityCurve,
                          dir.path().string(), "empty"),
               Error);
  EXPECT_FALSE(fs::exists(dir.path() / "empty.csv"));

  const auto t = fixtures::load_four_docs();
  const nlohmann::json heat = cooccurrence_to_json(build_cooccurrence(t.overlap.aligned, Perspective::kSci));
  const PlotFiles h = emit_plots(heat, PlotKind::kCooccurrenceHeatmap, dir.path().string(), "heat");
  EXPECT_NE(read_file(h.data).find("Method,Method,Used-for,1,"), std::string::npos);
  EXPECT_THROW(plot_kind_from_string("PIE"), Error);
}
