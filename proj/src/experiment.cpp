#include "lvsie/experiment.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "lvsie/plots.hpp"
#include "lvsie/synthetic.hpp"

namespace lvsie {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

struct ScenarioName {
  Scenario scenario;
  std::string_view name;
};

constexpr ScenarioName kScenarioNames[] = {
    {Scenario::kOverlapTable3, "OVERLAP_TABLE3"},
    {Scenario::kDataQuantityFig2, "DATA_QUANTITY_FIG2"},
    {Scenario::kLossAblationTable4, "LOSS_ABLATION_TABLE4"},
    {Scenario::kScirexTable5, "SCIREX_TABLE5"},
    {Scenario::kSciercStandardTable6, "SCIERC_STANDARD_TABLE6"},
    {Scenario::kStatsReport, "STATS_REPORT"},
};

// Sentence count of the reference overlap set; larger deviations usually mean
// the sentence splitter disagrees with the one used for the original data.
constexpr std::size_t kReferenceOverlapSentences = 1400;

std::string_view to_string(ConflictPolicy p) {
  switch (p) {
    case ConflictPolicy::kKeepBoth: return "KEEP_BOTH";
    case ConflictPolicy::kPreferSci: return "PREFER_SCI";
    case ConflictPolicy::kPreferSem: return "PREFER_SEM";
  }
  return "?";
}

ConflictPolicy conflict_policy_from_string(std::string_view s) {
  for (auto p : {ConflictPolicy::kKeepBoth, ConflictPolicy::kPreferSci, ConflictPolicy::kPreferSem})
    if (to_string(p) == s) return p;
  throw Error("unknown conflict policy '" + std::string(s) + "'");
}

std::string_view to_string(LabelSpace s) {
  return s == LabelSpace::kCommonUntyped ? "COMMON_UNTYPED" : "FULL";
}

LabelSpace label_space_from_string(std::string_view s) {
  if (s == "COMMON_UNTYPED") return LabelSpace::kCommonUntyped;
  if (s == "FULL") return LabelSpace::kFull;
  throw Error("unknown label space '" + std::string(s) + "'");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp.string(), content);
  fs::rename(tmp, path);
}

EvalResult eval_from_json(const json& j) {
  EvalResult r;
  r.task = j.at("task").get<std::string>() == "NER" ? Task::kNer : Task::kRe;
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.tp = j.at("tp").get<std::size_t>();
  r.fp = j.at("fp").get<std::size_t>();
  r.fn = j.at("fn").get<std::size_t>();
  return r;
}

ojson scores_json(const HeadScores& s) { return {{"NER", to_json(s.ner)}, {"RE", to_json(s.re)}}; }

// Everything a seed run needs besides the config.
struct Context {
  const ExperimentConfig& config;
  const LoadedData& data;
  TrainingSchedule schedule;
};

std::vector<TrainingExample> build(const Context& ctx, Strategy s, LabelSpace space,
                                   std::uint64_t seed) {
  SplitSpec spec = ctx.config.split;
  spec.strategy = s;
  spec.label_space = space;
  spec.seed = seed;
  spec.cap.reset();
  return build_training_set(ctx.data.overlap.aligned, &ctx.data.extras, spec);
}

bool soft_for(const ExperimentConfig& c, Strategy s) {
  SplitSpec spec = c.split;
  spec.strategy = s;
  return attaches_soft_labels(spec);
}

ojson run_table3(const Context& ctx, std::uint64_t seed) {
  const LabelSpace space = LabelSpace::kCommonUntyped;
  const auto& ex = ctx.data.extras;
  const auto sem_on_sci = gold_examples(ex.sem_only, Perspective::kSem, space, true);
  const auto sem_on_sem = gold_examples(ex.sem_only, Perspective::kSem, space, false);
  const auto sci_test = gold_examples(ex.sci_only, Perspective::kSci, space, false);

  const std::pair<const char*, Strategy> rows[] = {
      {"1.1", Strategy::kIndependentSem}, {"1.2", Strategy::kIndependentSci},
      {"2.1", Strategy::kConcat},         {"2.2", Strategy::kConcatPlusSci},
      {"2.3", Strategy::kConcatPlusSem},  {"3.1", Strategy::kMixed},
      {"3.2", Strategy::kMixedSci},       {"3.3", Strategy::kMixedSem},
      {"4.1", Strategy::kMtl},            {"4.2", Strategy::kMtlSoft},
  };
  ojson out = ojson::array();
  for (const auto& [id, strategy] : rows) {
    const auto train = build(ctx, strategy, space, seed);
    JointModel model = train_model(train, head_schemas(space), ctx.schedule, seed, std::nullopt,
                                   soft_for(ctx.config, strategy));
    ojson row{{"row", id}, {"strategy", std::string(to_string(strategy))},
              {"train_examples", train.size()}};
    ojson results;
    std::optional<HeadScores> sem, sci;
    if (may_evaluate_on(strategy, Perspective::kSem))
      sem = uses_both_heads(strategy)
                ? evaluate_head(model, sem_on_sem, Head::kSem, Head::kSem, false)
                : evaluate_head(model, sem_on_sci, Head::kSci, Head::kSci, false);
    if (may_evaluate_on(strategy, Perspective::kSci))
      sci = evaluate_head(model, sci_test, Head::kSci, Head::kSci, false);
    if (sem) results["SEM"] = scores_json(*sem);
    if (sci) results["SCI"] = scores_json(*sci);
    if (sem && sci)
      results["AVG"] = scores_json({average_sets(sem->ner, sci->ner), average_sets(sem->re, sci->re)});
    row["results"] = results;
    out.push_back(row);
  }
  return out;
}

std::vector<std::size_t> actual_caps(const ExperimentConfig& c, std::size_t available) {
  std::vector<std::size_t> out;
  for (auto cap : c.caps) {
    if (c.desk_scale) {
      const double frac = static_cast<double>(cap) / static_cast<double>(kReferenceOverlapSentences);
      out.push_back(std::clamp<std::size_t>(
          static_cast<std::size_t>(std::llround(frac * static_cast<double>(available))), 1,
          available));
    } else {
      if (cap > available)
        throw Error("data-quantity cap " + std::to_string(cap) + " exceeds the " +
                    std::to_string(available) + " available sentences");
      out.push_back(cap);
    }
  }
  return out;
}

ojson run_fig2(const Context& ctx, std::uint64_t seed) {
  const LabelSpace space = ctx.config.split.label_space;
  const auto sci_test = gold_examples(ctx.data.extras.sci_only, Perspective::kSci, space, false);
  const auto gold = build(ctx, Strategy::kIndependentSci, space, seed);
  const auto variation = build(ctx, Strategy::kMtlSoft, space, seed);
  const auto caps = actual_caps(ctx.config, gold.size());
  ojson out = ojson::array();
  for (std::size_t i = 0; i < caps.size(); ++i) {
    for (const auto& [series, set, soft] :
         {std::tuple{"gold", &gold, false}, std::tuple{"variation", &variation, true}}) {
      const auto capped = cap_data_quantity(*set, caps[i], seed);
      JointModel model = train_model(capped, head_schemas(space), ctx.schedule, seed,
                                     std::nullopt, soft);
      const HeadScores s = evaluate_head(model, sci_test, Head::kSci, Head::kSci, false);
      out.push_back({{"row", std::string(series) + "@" + std::to_string(ctx.config.caps[i])},
                     {"series", series},
                     {"cap", ctx.config.caps[i]},
                     {"train_examples", caps[i]},
                     {"results", {{"SCI", scores_json(s)}}}});
    }
  }
  return out;
}

ojson run_table4(const Context& ctx, std::uint64_t seed) {
  const LabelSpace space = ctx.config.split.label_space;
  const auto sci_test = gold_examples(ctx.data.extras.sci_only, Perspective::kSci, space, false);
  const auto plain = build(ctx, Strategy::kMtl, space, seed);
  const auto soft = build(ctx, Strategy::kMtlSoft, space, seed);
  const std::pair<const char*, std::optional<Divergence>> rows[] = {
      {"MTL", std::nullopt},
      {"MTL+BCE", Divergence::kBce},
      {"MTL+CE", Divergence::kCe},
      {"MTL+KL_INVERSE", Divergence::kKlInverse},
      {"MTL+KL_STANDARD", Divergence::kKlStandard},
  };
  ojson out = ojson::array();
  for (const auto& [id, d] : rows) {
    JointModel model = train_model(d ? soft : plain, head_schemas(space), ctx.schedule, seed, d,
                                   d.has_value());
    const HeadScores s = evaluate_head(model, sci_test, Head::kSci, Head::kSci,
                                       space == LabelSpace::kFull);
    out.push_back({{"row", id},
                   {"divergence", d ? std::string(to_string(*d)) : "NONE"},
                   {"results", {{"SCI", scores_json(s)}}}});
  }
  return out;
}

ojson run_table5(const Context& ctx, std::uint64_t seed) {
  const LabelSpace space = LabelSpace::kFull;
  std::vector<std::vector<EntityMention>> gold;
  std::vector<const Sentence*> sentences;
  for (const auto& d : ctx.data.scirex->documents)
    for (const auto& s : d.sentences) {
      gold.push_back(s.entities);
      sentences.push_back(&s);
    }
  const std::pair<const char*, Strategy> rows[] = {{"gold", Strategy::kIndependentSci},
                                                   {"variation", Strategy::kMtl},
                                                   {"variation+soft", Strategy::kMtlSoft}};
  ojson out = ojson::array();
  for (const auto& [id, strategy] : rows) {
    const auto train = build(ctx, strategy, space, seed);
    JointModel model = train_model(train, head_schemas(space), ctx.schedule, seed, std::nullopt,
                                   soft_for(ctx.config, strategy));
    std::vector<std::vector<EntityMention>> pred;
    for (const auto* s : sentences) pred.push_back(model.predict(s->tokens, Head::kSci).entities);
    out.push_back({{"row", id},
                   {"strategy", std::string(to_string(strategy))},
                   {"results", {{"SCIREX", {{"NER", to_json(score_scirex_cross(pred, gold))}}}}}});
  }
  return out;
}

ojson run_table6(const Context& ctx, std::uint64_t seed) {
  const std::pair<const char*, Strategy> rows[] = {{"SciERC gold", Strategy::kIndependentSci},
                                                   {"MTL+soft", Strategy::kMtlSoft}};
  ojson out = ojson::array();
  for (const auto& [id, strategy] : rows) {
    SplitSpec spec = ctx.config.split;
    spec.strategy = strategy;
    spec.label_space = LabelSpace::kFull;
    spec.seed = seed;
    const StandardSplit split = build_scierc_standard_split(ctx.data.scierc.documents, ctx.data.overlap,
                                                            *ctx.data.partition, spec);
    JointModel model = train_model(split.train, head_schemas(LabelSpace::kFull), ctx.schedule, seed,
                                   std::nullopt, attaches_soft_labels(spec));
    const HeadScores s = evaluate_head(model, split.test, Head::kSci, Head::kSci, true);
    out.push_back({{"row", id},
                   {"strategy", std::string(to_string(strategy))},
                   {"dual_head_abstracts", split.dual_head_abstracts},
                   {"single_head_abstracts", split.single_head_abstracts},
                   {"overlapped_test_abstracts", split.overlapped_test_abstracts},
                   {"results", {{"SCI", scores_json(s)}}}});
  }
  return out;
}

ojson stats_report(const LoadedData& data) {
  ojson out;
  auto parse = [](const ParseReport& r) {
    return ojson{{"documents", r.documents},
                 {"entities", r.entities},
                 {"relations", r.relations},
                 {"relations_per_document", r.relations_per_document()},
                 {"dropped_relations", r.dropped_relations},
                 {"skipped_documents", r.skipped_documents}};
  };
  out["semeval"] = parse(data.semeval.report);
  out["scierc"] = parse(data.scierc.report);
  out["overlap"] = ojson::parse(overlap_report_to_json(overlap_statistics(data.overlap)));
  return out;
}

std::size_t aligned_sentences(const OverlapResult& o) {
  std::size_t n = 0;
  for (const auto& a : o.aligned) n += a.sci_doc.sentences.size();
  return n;
}

// Mean of every (set, task) result over seeds, row by row.
ojson aggregate(const std::vector<ojson>& per_seed) {
  ojson rows = ojson::array();
  const auto& first = per_seed.front().at("rows");
  for (std::size_t r = 0; r < first.size(); ++r) {
    ojson row = first[r];
    ojson results;
    for (const auto& [set, tasks] : first[r].at("results").items()) {
      for (const auto& [task, _] : tasks.items()) {
        std::vector<EvalResult> seeds;
        for (const auto& s : per_seed) seeds.push_back(eval_from_json(s.at("rows")[r].at("results").at(set).at(task)));
        results[set][task] = to_json(average_over_seeds(seeds));
      }
    }
    row["results"] = results;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& n : kScenarioNames)
    if (n.scenario == s) return n.name;
  return "?";
}

Scenario scenario_from_string(std::string_view s) {
  for (const auto& n : kScenarioNames)
    if (n.name == s) return n.scenario;
  throw Error("unknown scenario '" + std::string(s) + "'");
}

DataPaths DataPaths::in_directory(const std::string& dir) {
  const fs::path d(dir);
  return {(d / data_files::kSemevalXml).string(), (d / data_files::kSemevalRelations).string(),
          (d / data_files::kScierc).string(), (d / data_files::kScirex).string(),
          (d / data_files::kSciercSplit).string()};
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["scenario"] = std::string(to_string(c.scenario));
  j["data"] = {{"semeval_xml", c.data.semeval_xml},
               {"semeval_relations", c.data.semeval_relations},
               {"scierc", c.data.scierc},
               {"scirex", c.data.scirex},
               {"scierc_split", c.data.scierc_split}};
  j["split"] = {{"strategy", std::string(to_string(c.split.strategy))},
                {"conflict_policy", std::string(to_string(c.split.conflict_policy))},
                {"soft_labels", c.split.soft_labels},
                {"entity_soft_labels", c.split.entity_soft_labels},
                {"label_space", std::string(to_string(c.split.label_space))},
                {"cap", c.split.cap ? ojson(*c.split.cap) : ojson(nullptr)},
                {"seed", c.split.seed}};
  j["model"] = ojson::parse(to_json(c.model).dump());
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["seeds"] = c.seeds;
  j["caps"] = c.caps;
  j["desk_scale"] = c.desk_scale;
  j["desk_epochs"] = c.desk_epochs;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("scenario")) c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("data_dir")) c.data = DataPaths::in_directory(j.at("data_dir").get<std::string>());
    if (j.contains("data")) {
      const auto& d = j.at("data");
      c.data.semeval_xml = d.value("semeval_xml", c.data.semeval_xml);
      c.data.semeval_relations = d.value("semeval_relations", c.data.semeval_relations);
      c.data.scierc = d.value("scierc", c.data.scierc);
      c.data.scirex = d.value("scirex", c.data.scirex);
      c.data.scierc_split = d.value("scierc_split", c.data.scierc_split);
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      if (s.contains("strategy")) c.split.strategy = strategy_from_string(s.at("strategy").get<std::string>());
      if (s.contains("conflict_policy"))
        c.split.conflict_policy = conflict_policy_from_string(s.at("conflict_policy").get<std::string>());
      c.split.soft_labels = s.value("soft_labels", c.split.soft_labels);
      c.split.entity_soft_labels = s.value("entity_soft_labels", c.split.entity_soft_labels);
      if (s.contains("label_space"))
        c.split.label_space = label_space_from_string(s.at("label_space").get<std::string>());
      if (s.contains("cap") && !s.at("cap").is_null()) c.split.cap = s.at("cap").get<std::size_t>();
      c.split.seed = s.value("seed", c.split.seed);
    }
    if (j.contains("model")) c.model = model_config_from_json(j.at("model"));
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("caps")) c.caps = j.at("caps").get<std::vector<std::size_t>>();
    c.desk_scale = j.value("desk_scale", c.desk_scale);
    c.desk_epochs = j.value("desk_epochs", c.desk_epochs);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw Error(std::string("experiment config: ") + e.what());
  }
  if (c.seeds.empty()) throw Error("experiment config: at least one seed is required");
  if (c.batch_size == 0) throw Error("experiment config: batch_size must be positive");
  return c;
}

std::string config_hash(const ExperimentConfig& c) {
  ojson j = to_json(c);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

TrainingSchedule effective_schedule(const ExperimentConfig& c) {
  TrainingSchedule s{c.model, c.epochs, c.batch_size};
  if (c.desk_scale) {
    s.model.encoder = nn::TinyEncoderConfig{};
    s.model.encoder.vocab_buckets = 2048;
    s.model.neg_entities = std::min<std::size_t>(s.model.neg_entities, 30);
    s.model.neg_relations = std::min<std::size_t>(s.model.neg_relations, 30);
    s.epochs = c.desk_epochs;
  }
  return s;
}

LoadedData load_data(const ExperimentConfig& c) {
  auto require = [](const std::string& path, const char* what) {
    if (path.empty()) throw Error(std::string("no path configured for the ") + what);
    if (!fs::exists(path)) throw Error(std::string("missing ") + what + ": " + path);
  };
  require(c.data.semeval_xml, "SemEval abstracts");
  require(c.data.semeval_relations, "SemEval relations");
  require(c.data.scierc, "SciERC corpus");
  if (c.scenario == Scenario::kScirexTable5) require(c.data.scirex, "SciREX corpus");
  if (c.scenario == Scenario::kSciercStandardTable6) require(c.data.scierc_split, "SciERC partition");

  LoadedData d;
  d.semeval = parse_semeval(read_file(c.data.semeval_xml), read_file(c.data.semeval_relations));
  d.scierc = parse_scierc(read_file(c.data.scierc));
  if (c.scenario == Scenario::kScirexTable5) d.scirex = parse_scirex_abstracts(read_file(c.data.scirex));
  if (c.scenario == Scenario::kSciercStandardTable6) {
    d.partition = parse_partition(read_file(c.data.scierc_split));
    if (d.partition->empty()) throw Error("SciERC partition is empty: " + c.data.scierc_split);
  }
  d.overlap = align_corpora(d.semeval.documents, d.scierc.documents);
  d.extras.sem_only = d.overlap.sem_only;
  d.extras.sci_only = d.overlap.sci_only;
  return d;
}

HeadScores evaluate_head(JointModel& model, const std::vector<TrainingExample>& gold,
                         Head model_head, Head gold_head, bool typed_ner) {
  std::vector<std::vector<EntityMention>> pe, ge;
  std::vector<HeadAnnotation> pa, ga;
  for (const auto& ex : gold) {
    if (!ex.has(gold_head)) continue;
    HeadAnnotation p = model.predict(ex.tokens, model_head);
    pe.push_back(p.entities);
    ge.push_back(ex.at(gold_head).entities);
    pa.push_back(std::move(p));
    ga.push_back(ex.at(gold_head));
  }
  return {score_ner(pe, ge, typed_ner), score_re(pa, ga, true)};
}

JointModel train_model(const std::vector<TrainingExample>& examples,
                       const std::array<LabelSchema, kNumHeads>& schemas,
                       const TrainingSchedule& schedule, std::uint64_t seed,
                       std::optional<Divergence> divergence, bool soft) {
  ModelConfig mc = schedule.model;
  mc.seed = seed;
  mc.soft_labels = soft;
  if (divergence) mc.divergence = *divergence;
  JointModel model(mc, schemas);
  TrainOptions opt;
  opt.epochs = schedule.epochs;
  opt.batch_size = schedule.batch_size;
  opt.seed = seed;
  train(model, examples, opt);
  return model;
}

RunSummary run_scenario(const ExperimentConfig& c) {
  RunSummary summary;
  summary.config_hash = config_hash(c);
  const std::string name = std::string(to_string(c.scenario));
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  const fs::path run = fs::path(c.output_dir) / (lower + "-" + summary.config_hash);
  summary.run_dir = run.string();

  const LoadedData data = load_data(c);
  fs::create_directories(run / "plots");

  const std::string config_text = to_json(c).dump(2) + "\n";
  const fs::path config_path = run / "config.json";
  if (!fs::exists(config_path)) write_atomic(config_path, config_text);

  const Context ctx{c, data, effective_schedule(c)};
  const bool is_stats = c.scenario == Scenario::kStatsReport;
  const std::vector<std::uint64_t> seeds = is_stats ? std::vector<std::uint64_t>{0} : c.seeds;

  std::vector<ojson> per_seed;
  for (auto seed : seeds) {
    const fs::path file = is_stats ? run / "stats.json" : run / ("seed-" + std::to_string(seed) + ".json");
    if (fs::exists(file)) {
      try {
        ojson prev = ojson::parse(read_file(file.string()));
        if (prev.value("config_hash", "") == summary.config_hash) {
          summary.skipped_seeds.push_back(seed);
          per_seed.push_back(std::move(prev));
          continue;
        }
      } catch (const ojson::exception&) {
        // Unreadable leftovers are recomputed.
      }
    }
    ojson result;
    result["config_hash"] = summary.config_hash;
    result["scenario"] = name;
    if (is_stats) {
      result["report"] = stats_report(data);
    } else {
      result["seed"] = seed;
      switch (c.scenario) {
        case Scenario::kOverlapTable3: result["rows"] = run_table3(ctx, seed); break;
        case Scenario::kDataQuantityFig2: result["rows"] = run_fig2(ctx, seed); break;
        case Scenario::kLossAblationTable4: result["rows"] = run_table4(ctx, seed); break;
        case Scenario::kScirexTable5: result["rows"] = run_table5(ctx, seed); break;
        case Scenario::kSciercStandardTable6: result["rows"] = run_table6(ctx, seed); break;
        case Scenario::kStatsReport: break;
      }
    }
    write_atomic(file, result.dump(2) + "\n");
    summary.trained_seeds.push_back(seed);
    per_seed.push_back(std::move(result));
  }

  const fs::path manifest_path = run / "manifest.json";
  if (summary.trained_seeds.empty() && fs::exists(manifest_path) && fs::exists(run / "metrics.json")) {
    summary.noop = true;
    return summary;
  }

  ojson metrics;
  metrics["config_hash"] = summary.config_hash;
  metrics["scenario"] = name;
  if (is_stats) {
    metrics["report"] = per_seed.front().at("report");
  } else {
    metrics["seeds"] = seeds;
    metrics["rows"] = aggregate(per_seed);
  }
  write_atomic(run / "metrics.json", metrics.dump(2) + "\n");

  std::vector<std::string> files{"config.json", "metrics.json"};
  for (auto seed : seeds)
    files.push_back(is_stats ? "stats.json" : "seed-" + std::to_string(seed) + ".json");

  const auto overlap_json = json::parse(overlap_report_to_json(overlap_statistics(data.overlap)));
  auto plot = [&](const json& artifact, PlotKind kind, const std::string& stem) {
    const PlotFiles f = emit_plots(artifact, kind, (run / "plots").string(), stem);
    files.push_back("plots/" + fs::path(f.data).filename().string());
    files.push_back("plots/" + fs::path(f.image).filename().string());
    write_atomic(run / "plots" / (stem + ".json"), artifact.dump(2) + "\n");
    files.push_back("plots/" + stem + ".json");
  };
  plot(overlap_json, PlotKind::kRelationDistribution, "relation_distribution");
  for (auto p : {Perspective::kSci, Perspective::kSem}) {
    const json table = cooccurrence_to_json(build_cooccurrence(data.overlap.aligned, p));
    if (!table.at("cells").empty())
      plot(table, PlotKind::kCooccurrenceHeatmap, "cooccurrence_" + std::string(to_string(p)));
  }
  if (c.scenario == Scenario::kDataQuantityFig2) {
    json series = json::array();
    for (const char* s : {"gold", "variation"}) {
      json points = json::array();
      for (const auto& row : metrics.at("rows"))
        if (row.at("series") == s)
          points.push_back({row.at("cap").get<double>(),
                            row.at("results").at("SCI").at("RE").at("f1").get<double>()});
      series.push_back({{"name", s}, {"points", points}});
    }
    plot({{"series", series}}, PlotKind::kQuantityCurve, "quantity_curve");
  }

  const TrainingSchedule sched = ctx.schedule;
  ojson manifest;
  manifest["config_hash"] = summary.config_hash;
  manifest["scenario"] = name;
  manifest["written_at"] = timestamp();
  manifest["desk_scale"] = c.desk_scale;
  manifest["encoder"] = nn::TinyEncoder(sched.model.encoder, 0).identifier();
  manifest["epochs"] = sched.epochs;
  manifest["seeds"] = seeds;
  manifest["trained_seeds"] = summary.trained_seeds;
  manifest["skipped_seeds"] = summary.skipped_seeds;
  const std::size_t n = aligned_sentences(data.overlap);
  const double deviation = std::abs(static_cast<double>(n) - kReferenceOverlapSentences) /
                           static_cast<double>(kReferenceOverlapSentences);
  manifest["overlap_sentences"] = n;
  manifest["overlap_sentence_deviation"] = deviation;
  manifest["segmentation_mismatch"] = deviation > 0.02;
  manifest["files"] = files;
  write_atomic(manifest_path, manifest.dump(2) + "\n");
  return summary;
}

}  // namespace lvsie
