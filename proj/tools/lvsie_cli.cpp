// Command-line front end: parse, align, build, train, evaluate and run the
// experiment scenarios.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lvsie/alignment.hpp"
#include "lvsie/dataset.hpp"
#include "lvsie/evaluation.hpp"
#include "lvsie/experiment.hpp"
#include "lvsie/format_io.hpp"
#include "lvsie/model.hpp"
#include "lvsie/plots.hpp"
#include "lvsie/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lvsie;
using ojson = nlohmann::ordered_json;

namespace {

// Data locations shared by every verb that reads the corpora.
struct DataOptions {
  std::string dir;
  std::string semeval_xml, semeval_relations, scierc, scirex, scierc_split;

  void add(CLI::App* app) {
    app->add_option("--data", dir, "Directory holding the standard data files (default: $LVSIE_DATA_ROOT)");
    app->add_option("--semeval-xml", semeval_xml, "SemEval abstracts XML");
    app->add_option("--semeval-relations", semeval_relations, "SemEval relation list");
    app->add_option("--scierc", scierc, "SciERC JSON lines");
    app->add_option("--scirex", scirex, "SciREX JSON lines");
    app->add_option("--scierc-split", scierc_split, "SciERC partition JSON");
  }

  DataPaths resolve() const {
    std::string root = dir;
    if (root.empty())
      if (const char* env = std::getenv(kDataRootEnv)) root = env;
    DataPaths p = root.empty() ? DataPaths{} : DataPaths::in_directory(root);
    if (!semeval_xml.empty()) p.semeval_xml = semeval_xml;
    if (!semeval_relations.empty()) p.semeval_relations = semeval_relations;
    if (!scierc.empty()) p.scierc = scierc;
    if (!scirex.empty()) p.scirex = scirex;
    if (!scierc_split.empty()) p.scierc_split = scierc_split;
    if (p.semeval_xml.empty() || p.semeval_relations.empty() || p.scierc.empty())
      throw Error(std::string("no data location given; pass --data or set ") + kDataRootEnv);
    return p;
  }
};

LabelSpace parse_space(const std::string& s) {
  if (s == "common") return LabelSpace::kCommonUntyped;
  if (s == "full") return LabelSpace::kFull;
  throw Error("label space must be 'common' or 'full', got '" + s + "'");
}

Head parse_head(const std::string& s) {
  if (s == "SCI" || s == "1") return Head::kSci;
  if (s == "SEM" || s == "2") return Head::kSem;
  throw Error("head must be SCI or SEM, got '" + s + "'");
}

LoadedData load(const DataPaths& paths, Scenario scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.data = paths;
  return load_data(c);
}

void print(const ojson& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
}

std::vector<TrainingExample> read_examples(const std::string& path) {
  std::vector<TrainingExample> out;
  for (const auto& d : read_unified(read_file(path))) out.push_back(from_document(d));
  if (out.empty()) throw Error("no examples in " + path);
  return out;
}

void write_examples(const std::vector<TrainingExample>& examples, const std::string& path) {
  std::vector<Document> docs;
  for (const auto& e : examples) docs.push_back(to_document(e));
  write_file(path, write_unified(docs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-perspective scientific information extraction toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus pair in release formats");
  std::string synth_out;
  SyntheticSpec synth_spec;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--overlapped", synth_spec.overlapped, "Abstracts annotated by both corpora");
  synth->add_option("--sem-only", synth_spec.sem_only, "SemEval-only abstracts");
  synth->add_option("--sci-only", synth_spec.sci_only, "SciERC-only abstracts");
  synth->add_option("--scirex", synth_spec.scirex, "SciREX papers");
  synth->add_option("--sentences", synth_spec.sentences_per_doc, "Sentences per abstract");
  synth->add_option("--seed", synth_spec.seed, "Generator seed");

  // parse
  auto* parse = app.add_subcommand("parse", "Parse one release file into the unified format");
  std::string parse_format, parse_input, parse_relations, parse_out, parse_report;
  parse->add_option("--format", parse_format, "semeval | scierc | scirex")->required();
  parse->add_option("--input", parse_input, "Release file")->required();
  parse->add_option("--relations", parse_relations, "SemEval relation list");
  parse->add_option("--out", parse_out, "Unified JSON lines output")->required();
  parse->add_option("--report", parse_report, "Write the parse report here instead of stdout");

  // align / stats
  auto* align = app.add_subcommand("align", "Align the two corpora and report agreement counts");
  DataOptions align_data;
  align_data.add(align);
  std::string align_out;
  align->add_option("--out", align_out, "Report path (default stdout)");

  auto* stats = app.add_subcommand("stats", "Corpus and overlap statistics");
  DataOptions stats_data;
  stats_data.add(stats);
  std::string stats_out;
  stats->add_option("--out", stats_out, "Report path (default stdout)");

  // build
  auto* build = app.add_subcommand("build", "Build a training set or a gold test set");
  DataOptions build_data;
  build_data.add(build);
  std::string build_strategy = "MTL", build_space = "common", build_policy = "KEEP_BOTH",
              build_gold, build_out;
  bool build_soft = false, build_entity_soft = false;
  std::optional<std::size_t> build_cap;
  std::uint64_t build_seed = 0;
  build->add_option("--strategy", build_strategy, "Combination strategy");
  build->add_option("--label-space", build_space, "common | full");
  build->add_option("--conflict-policy", build_policy, "KEEP_BOTH | PREFER_SCI | PREFER_SEM");
  build->add_flag("--soft-labels", build_soft, "Attach relation soft labels");
  build->add_flag("--entity-soft-labels", build_entity_soft, "Attach entity soft labels");
  build->add_option("--cap", build_cap, "Keep at most this many sentences");
  build->add_option("--seed", build_seed, "Sampling seed");
  build->add_option("--gold", build_gold,
                    "Instead of training data, write gold test examples: sem-only | sem-only-sci | sci-only");
  build->add_option("--out", build_out, "Output directory")->required();

  // train
  auto* trainc = app.add_subcommand("train", "Train a model on built examples");
  std::string train_examples, train_space = "common", train_out, train_divergence, train_config;
  std::size_t train_epochs = 30, train_batch = 8;
  std::uint64_t train_seed = 1;
  bool train_soft = false;
  trainc->add_option("--examples", train_examples, "Unified examples file")->required();
  trainc->add_option("--label-space", train_space, "common | full");
  trainc->add_option("--model-config", train_config, "Model config JSON");
  trainc->add_option("--epochs", train_epochs, "Training epochs");
  trainc->add_option("--batch-size", train_batch, "Sentences per batch");
  trainc->add_option("--seed", train_seed, "Seed");
  trainc->add_flag("--soft", train_soft, "Add the soft-label loss");
  trainc->add_option("--divergence", train_divergence, "KL_STANDARD | KL_INVERSE | CE | BCE");
  trainc->add_option("--out", train_out, "Checkpoint directory")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on gold examples");
  std::string eval_ckpt, eval_examples, eval_head = "SCI", eval_gold_head, eval_out;
  bool eval_typed = false, eval_typed_re = false;
  evaluate->add_option("--checkpoint", eval_ckpt, "Checkpoint directory")->required();
  evaluate->add_option("--examples", eval_examples, "Unified gold examples")->required();
  evaluate->add_option("--head", eval_head, "Prediction head: SCI | SEM");
  evaluate->add_option("--gold-head", eval_gold_head, "Gold head (default: same as --head)");
  evaluate->add_flag("--typed-ner", eval_typed, "Require entity types to match");
  evaluate->add_flag("--typed-re", eval_typed_re, "Require relation endpoint types to match");
  evaluate->add_option("--out", eval_out, "Metrics path (default stdout)");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Run an experiment scenario");
  DataOptions scen_data;
  scen_data.add(scenario);
  std::string scen_name, scen_config, scen_out;
  std::vector<std::uint64_t> scen_seeds;
  bool scen_full = false;
  std::optional<std::size_t> scen_epochs;
  scenario->add_option("--name", scen_name,
                       "OVERLAP_TABLE3 | DATA_QUANTITY_FIG2 | LOSS_ABLATION_TABLE4 | "
                       "SCIREX_TABLE5 | SCIERC_STANDARD_TABLE6 | STATS_REPORT");
  scenario->add_option("--config", scen_config, "Experiment config JSON");
  scenario->add_option("--seeds", scen_seeds, "Seeds")->delimiter(',');
  scenario->add_option("--out", scen_out, "Output root");
  scenario->add_option("--epochs", scen_epochs, "Epochs (desk-scale epochs in desk mode)");
  scenario->add_flag("--full-scale", scen_full, "Disable desk-scale mode");

  // plot
  auto* plot = app.add_subcommand("plot", "Render plot data from a JSON artifact");
  std::string plot_kind, plot_input, plot_out, plot_stem = "plot";
  plot->add_option("--kind", plot_kind, "QUANTITY_CURVE | RELATION_DISTRIBUTION | COOCCURRENCE_HEATMAP")
      ->required();
  plot->add_option("--input", plot_input, "Artifact JSON")->required();
  plot->add_option("--out", plot_out, "Output directory")->required();
  plot->add_option("--stem", plot_stem, "File name stem");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      write_synthetic(generate_synthetic(synth_spec), synth_out);
      std::cout << "wrote synthetic corpus to " << synth_out << "\n";
    } else if (parse->parsed()) {
      ParseResult r;
      const std::string text = read_file(parse_input);
      if (parse_format == "semeval") {
        if (parse_relations.empty()) throw Error("--relations is required for SemEval input");
        r = parse_semeval(text, read_file(parse_relations));
      } else if (parse_format == "scierc") {
        r = parse_scierc(text);
      } else if (parse_format == "scirex") {
        r = parse_scirex_abstracts(text);
      } else {
        throw Error("unknown format '" + parse_format + "'");
      }
      write_file(parse_out, write_unified(r.documents));
      print(ojson::parse(report_to_json(r.report)), parse_report);
      for (const auto& w : r.report.warnings) std::cerr << "warning: " << w << "\n";
    } else if (align->parsed()) {
      const LoadedData d = load(align_data.resolve(), Scenario::kStatsReport);
      print(ojson::parse(overlap_report_to_json(overlap_statistics(d.overlap))), align_out);
    } else if (stats->parsed()) {
      const LoadedData d = load(stats_data.resolve(), Scenario::kStatsReport);
      ojson j;
      j["semeval"] = ojson::parse(report_to_json(d.semeval.report));
      j["scierc"] = ojson::parse(report_to_json(d.scierc.report));
      j["overlap"] = ojson::parse(overlap_report_to_json(overlap_statistics(d.overlap)));
      print(j, stats_out);
    } else if (build->parsed()) {
      const LoadedData d = load(build_data.resolve(), Scenario::kStatsReport);
      const LabelSpace space = parse_space(build_space);
      std::vector<TrainingExample> examples;
      ojson manifest;
      if (!build_gold.empty()) {
        if (build_gold == "sem-only")
          examples = gold_examples(d.extras.sem_only, Perspective::kSem, space, false);
        else if (build_gold == "sem-only-sci")
          examples = gold_examples(d.extras.sem_only, Perspective::kSem, space, true);
        else if (build_gold == "sci-only")
          examples = gold_examples(d.extras.sci_only, Perspective::kSci, space, false);
        else
          throw Error("unknown gold set '" + build_gold + "'");
        manifest["gold_set"] = build_gold;
      } else {
        ExperimentConfig c;
        c.split.strategy = strategy_from_string(build_strategy);
        c.split.label_space = space;
        c.split.soft_labels = build_soft;
        c.split.entity_soft_labels = build_entity_soft;
        c.split.cap = build_cap;
        c.split.seed = build_seed;
        // Round-trip through the config parser for the policy name check.
        ojson cj = to_json(c);
        cj["split"]["conflict_policy"] = build_policy;
        c = experiment_config_from_json(nlohmann::json::parse(cj.dump()));
        examples = build_training_set(d.overlap.aligned, &d.extras, c.split);
        manifest["split"] = to_json(c)["split"];
      }
      manifest["label_space"] = build_space;
      manifest["examples"] = examples.size();
      manifest["relations"] = {{"SCI", relation_count(examples, Head::kSci)},
                               {"SEM", relation_count(examples, Head::kSem)}};
      fs::create_directories(build_out);
      write_examples(examples, (fs::path(build_out) / "examples.jsonl").string());
      print(manifest, (fs::path(build_out) / "manifest.json").string());
      std::cout << manifest.dump(2) << "\n";
    } else if (trainc->parsed()) {
      const auto examples = read_examples(train_examples);
      ModelConfig mc = train_config.empty()
                           ? ModelConfig{}
                           : model_config_from_json(nlohmann::json::parse(read_file(train_config)));
      mc.seed = train_seed;
      mc.soft_labels = train_soft;
      if (!train_divergence.empty()) mc.divergence = divergence_from_string(train_divergence);
      JointModel model(mc, head_schemas(parse_space(train_space)));
      TrainOptions opt;
      opt.epochs = train_epochs;
      opt.batch_size = train_batch;
      opt.seed = train_seed;
      opt.on_epoch = [](std::size_t e, const LossBreakdown& l) {
        std::cerr << "epoch " << e + 1 << " loss " << l.total << " (multi " << l.multi << ", soft "
                  << l.soft_total << ")\n";
      };
      train(model, examples, opt);
      model.save(train_out);
      std::cout << "saved checkpoint to " << train_out << "\n";
    } else if (evaluate->parsed()) {
      JointModel model = JointModel::load(eval_ckpt);
      const auto gold = read_examples(eval_examples);
      const Head mh = parse_head(eval_head);
      const Head gh = eval_gold_head.empty() ? mh : parse_head(eval_gold_head);
      std::vector<std::vector<EntityMention>> pe, ge;
      std::vector<HeadAnnotation> pa, ga;
      for (const auto& ex : gold) {
        if (!ex.has(gh)) continue;
        pa.push_back(model.predict(ex.tokens, mh));
        ga.push_back(ex.at(gh));
        pe.push_back(pa.back().entities);
        ge.push_back(ga.back().entities);
      }
      if (ga.empty()) throw Error("no gold annotations on the requested head");
      print({{"NER", to_json(score_ner(pe, ge, eval_typed))},
             {"RE", to_json(score_re(pa, ga, !eval_typed_re))}},
            eval_out);
    } else if (scenario->parsed()) {
      ExperimentConfig c;
      if (!scen_config.empty()) c = experiment_config_from_json(nlohmann::json::parse(read_file(scen_config)));
      if (!scen_name.empty()) c.scenario = scenario_from_string(scen_name);
      if (scen_config.empty() && scen_name.empty()) throw Error("pass --name or --config");
      const bool paths_given = !scen_data.dir.empty() || !scen_data.semeval_xml.empty() ||
                               std::getenv(kDataRootEnv) != nullptr;
      if (paths_given || c.data.semeval_xml.empty()) c.data = scen_data.resolve();
      if (!scen_seeds.empty()) c.seeds = scen_seeds;
      if (!scen_out.empty()) c.output_dir = scen_out;
      if (scen_full) c.desk_scale = false;
      if (scen_epochs) (c.desk_scale ? c.desk_epochs : c.epochs) = *scen_epochs;
      const RunSummary s = run_scenario(c);
      std::cout << (s.noop ? "up to date: " : "wrote: ") << s.run_dir << "\n";
      std::cout << "config hash " << s.config_hash << ", trained seeds " << s.trained_seeds.size()
                << ", reused seeds " << s.skipped_seeds.size() << "\n";
    } else if (plot->parsed()) {
      const PlotFiles f = emit_plots(nlohmann::json::parse(read_file(plot_input)),
                                     plot_kind_from_string(plot_kind), plot_out, plot_stem);
      std::cout << f.data << "\n" << f.image << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
