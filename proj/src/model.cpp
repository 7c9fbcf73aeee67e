#include "lvsie/model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "lvsie/format_io.hpp"

namespace lvsie {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::Tape;
using nn::Var;

namespace {

constexpr std::size_t hidx(Head h) { return static_cast<std::size_t>(h); }

Matrix xavier(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  return nn::uniform_init(in, out, std::sqrt(6.0 / static_cast<double>(in + out)), rng);
}

nlohmann::json schema_json(const LabelSchema& s) {
  return {{"entity_types", s.entity_types}, {"relation_types", s.relation_types}};
}

LabelSchema schema_from_json(const nlohmann::json& j) {
  return {j.at("entity_types").get<std::vector<std::string>>(),
          j.at("relation_types").get<std::vector<std::string>>()};
}

}  // namespace

nlohmann::json to_json(const ModelConfig& c) {
  return {{"max_span_width", c.max_span_width},
          {"width_dim", c.width_dim},
          {"neg_entities", c.neg_entities},
          {"neg_relations", c.neg_relations},
          {"relation_threshold", c.relation_threshold},
          {"encoder", nn::to_json(c.encoder)},
          {"learning_rate", c.learning_rate},
          {"soft_labels", c.soft_labels},
          {"entity_soft_labels", c.entity_soft_labels},
          {"divergence", std::string(to_string(c.divergence))},
          {"seed", c.seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.max_span_width = j.value("max_span_width", c.max_span_width);
  c.width_dim = j.value("width_dim", c.width_dim);
  c.neg_entities = j.value("neg_entities", c.neg_entities);
  c.neg_relations = j.value("neg_relations", c.neg_relations);
  c.relation_threshold = j.value("relation_threshold", c.relation_threshold);
  if (j.contains("encoder")) c.encoder = nn::tiny_encoder_config_from_json(j.at("encoder"));
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.soft_labels = j.value("soft_labels", c.soft_labels);
  c.entity_soft_labels = j.value("entity_soft_labels", c.entity_soft_labels);
  if (j.contains("divergence"))
    c.divergence = divergence_from_string(j.at("divergence").get<std::string>());
  c.seed = j.value("seed", c.seed);
  if (c.max_span_width == 0) throw Error("max_span_width must be at least 1");
  return c;
}

std::vector<Span> enumerate_spans(std::size_t length, std::size_t max_width) {
  std::vector<Span> out;
  const std::size_t w_max = std::min(max_width, length);
  for (std::size_t w = 1; w <= w_max; ++w)
    for (std::size_t s = 0; s + w <= length; ++s) out.push_back({s, s + w});
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Candidates sample_negatives(const TrainingExample& ex,
                            const std::array<LabelSchema, kNumHeads>& schemas,
                            std::size_t max_width, std::size_t ne, std::size_t nr,
                            std::uint64_t seed) {
  Candidates out;
  const std::size_t n = ex.tokens.size();
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    if (!ex.heads[h]) continue;
    const HeadAnnotation& ann = *ex.heads[h];
    const LabelSchema& schema = schemas[h];
    HeadCandidates c;

    std::map<std::string, std::size_t> span_of;
    std::map<Span, std::size_t> index_of;
    for (const auto& e : ann.entities) {
      const auto type = schema.entity_index(e.entity_type);
      if (!type || e.span.end > n || e.span.start >= e.span.end) continue;
      auto [it, fresh] = index_of.emplace(e.span, c.spans.size());
      if (fresh) {
        c.spans.push_back(e.span);
        c.span_labels.push_back(1 + *type);
      }
      span_of[e.id] = it->second;
    }
    const std::size_t gold_spans = c.spans.size();

    std::vector<Span> pool;
    for (const auto& s : enumerate_spans(n, max_width))
      if (!index_of.count(s)) pool.push_back(s);
    const auto perm = seeded_permutation(pool.size(), mix_seed(seed, h, 1));
    for (std::size_t k = 0; k < std::min(ne, pool.size()); ++k) {
      c.spans.push_back(pool[perm[k]]);
      c.span_labels.push_back(0);
    }

    const std::size_t R = schema.relation_types.size();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_row;
    std::vector<std::vector<double>> targets;
    std::vector<std::optional<std::size_t>> row_of_relation(ann.relations.size());
    for (std::size_t ri = 0; ri < ann.relations.size(); ++ri) {
      const auto& r = ann.relations[ri];
      const auto label = schema.relation_index(r.relation_type);
      auto hi = span_of.find(r.head);
      auto ti = span_of.find(r.tail);
      if (!label || hi == span_of.end() || ti == span_of.end() || hi->second == ti->second)
        continue;
      const auto key = std::make_pair(hi->second, ti->second);
      auto [it, fresh] = pair_row.emplace(key, c.pairs.size());
      if (fresh) {
        c.pairs.push_back(key);
        targets.emplace_back(R, 0.0);
      }
      targets[it->second][*label] = 1.0;
      row_of_relation[ri] = it->second;
    }

    std::vector<std::pair<std::size_t, std::size_t>> unrelated;
    for (std::size_t i = 0; i < gold_spans; ++i)
      for (std::size_t j = 0; j < gold_spans; ++j)
        if (i != j && !pair_row.count({i, j})) unrelated.emplace_back(i, j);
    const auto rperm = seeded_permutation(unrelated.size(), mix_seed(seed, h, 2));
    for (std::size_t k = 0; k < std::min(nr, unrelated.size()); ++k) {
      c.pairs.push_back(unrelated[rperm[k]]);
      targets.emplace_back(R, 0.0);
    }

    c.relation_targets = Matrix::Zero(static_cast<Eigen::Index>(targets.size()),
                                      static_cast<Eigen::Index>(R));
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t k = 0; k < R; ++k)
        c.relation_targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            targets[i][k];

    for (const auto& sl : ann.relation_soft_labels)
      if (sl.index < row_of_relation.size() && row_of_relation[sl.index])
        c.relation_soft.emplace_back(*row_of_relation[sl.index], sl.label);
    for (const auto& sl : ann.entity_soft_labels) {
      if (sl.index >= ann.entities.size()) continue;
      auto it = span_of.find(ann.entities[sl.index].id);
      if (it != span_of.end()) c.entity_soft.emplace_back(it->second, sl.label);
    }
    out.heads[h] = std::move(c);
  }
  return out;
}

Batch make_batch(const std::vector<const TrainingExample*>& examples,
                 const std::array<LabelSchema, kNumHeads>& schemas, const ModelConfig& config,
                 std::uint64_t seed) {
  Batch b;
  b.examples = examples;
  for (std::size_t i = 0; i < examples.size(); ++i)
    b.candidates.push_back(sample_negatives(*examples[i], schemas, config.max_span_width,
                                            config.neg_entities, config.neg_relations,
                                            mix_seed(seed, i)));
  return b;
}

Batch make_batch(const std::vector<TrainingExample>& examples,
                 const std::array<LabelSchema, kNumHeads>& schemas, const ModelConfig& config,
                 std::uint64_t seed) {
  std::vector<const TrainingExample*> ptrs;
  for (const auto& ex : examples) ptrs.push_back(&ex);
  return make_batch(ptrs, schemas, config, seed);
}

JointModel::JointModel(ModelConfig config, std::array<LabelSchema, kNumHeads> schemas,
                       std::unique_ptr<nn::Encoder> encoder)
    : config_(std::move(config)), schemas_(std::move(schemas)), encoder_(std::move(encoder)) {
  if (config_.max_span_width == 0) throw Error("max_span_width must be at least 1");
  if (!encoder_) encoder_ = std::make_unique<nn::TinyEncoder>(config_.encoder, config_.seed);
  std::mt19937_64 rng(mix_seed(config_.seed, 7));
  const std::size_t d = encoder_->dim();
  const std::size_t span_dim = 2 * d + config_.width_dim;
  const std::size_t pair_dim = 2 * span_dim + d;
  width_embedding_ =
      nn::Parameter("width_embedding", nn::uniform_init(config_.max_span_width + 1,
                                                        config_.width_dim, 0.3, rng));
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    const std::string base = "head" + std::to_string(h + 1) + ".";
    const std::size_t C = schemas_[h].entity_types.size();
    const std::size_t R = schemas_[h].relation_types.size();
    if (C == 0 || R == 0) throw Error("head " + std::to_string(h + 1) + " has an empty schema");
    auto& hp = heads_[h];
    hp.entity_w = nn::Parameter(base + "entity.w", xavier(span_dim, C + 1, rng));
    hp.entity_b = nn::Parameter(base + "entity.b", Matrix::Zero(1, C + 1));
    hp.relation_w = nn::Parameter(base + "relation.w", xavier(pair_dim, R, rng));
    hp.relation_b = nn::Parameter(base + "relation.b", Matrix::Zero(1, R));
    hp.aux_w = nn::Parameter(base + "aux.w", xavier(pair_dim, R, rng));
    hp.aux_b = nn::Parameter(base + "aux.b", Matrix::Zero(1, R));
    hp.entity_aux_w = nn::Parameter(base + "entity_aux.w", xavier(span_dim, C, rng));
    hp.entity_aux_b = nn::Parameter(base + "entity_aux.b", Matrix::Zero(1, C));
  }
}

std::vector<nn::Parameter*> JointModel::head_parameters(Head h) {
  auto& hp = heads_[hidx(h)];
  return {&hp.entity_w, &hp.entity_b, &hp.relation_w,   &hp.relation_b,
          &hp.aux_w,    &hp.aux_b,    &hp.entity_aux_w, &hp.entity_aux_b};
}

std::vector<nn::Parameter*> JointModel::parameters() {
  std::vector<nn::Parameter*> out = encoder_->parameters();
  out.push_back(&width_embedding_);
  for (Head h : {Head::kSci, Head::kSem})
    for (auto* p : head_parameters(h)) out.push_back(p);
  return out;
}

Var JointModel::span_reps(Tape& tape, const nn::Encoded& enc, const std::vector<Span>& spans) {
  std::vector<std::size_t> buckets;
  buckets.reserve(spans.size());
  for (const auto& s : spans) buckets.push_back(std::min(s.width(), config_.max_span_width));
  const Var pooled = nn::span_max_pool(tape, enc.tokens, spans);
  const Var widths = nn::gather_rows(tape, tape.param(width_embedding_), buckets);
  const Var ctx = nn::broadcast_rows(tape, enc.context, spans.size());
  return nn::concat_cols(tape, {pooled, widths, ctx});
}

Var JointModel::pair_reps(Tape& tape, const nn::Encoded& enc, Var spans,
                          const std::vector<Span>& span_list,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::size_t> heads, tails;
  std::vector<std::pair<std::size_t, std::size_t>> between;
  for (const auto& [a, b] : pairs) {
    heads.push_back(a);
    tails.push_back(b);
    const Span& x = span_list[a];
    const Span& y = span_list[b];
    if (x.end <= y.start)
      between.emplace_back(x.end, y.start);
    else if (y.end <= x.start)
      between.emplace_back(y.end, x.start);
    else
      between.emplace_back(0, 0);
  }
  return nn::concat_cols(tape, {nn::gather_rows(tape, spans, heads),
                                nn::gather_rows(tape, spans, tails),
                                nn::range_max_pool(tape, enc.tokens, between)});
}

JointModel::Graph JointModel::build(Tape& tape, const Batch& batch, bool with_soft,
                                    Divergence d) {
  if (batch.examples.size() != batch.candidates.size())
    throw Error("batch has mismatched examples and candidates");
  std::array<HeadTerms, kNumHeads> terms;
  for (std::size_t i = 0; i < batch.examples.size(); ++i) {
    const Candidates& cand = batch.candidates[i];
    if (!cand.heads[0] && !cand.heads[1]) continue;
    const nn::Encoded enc = encoder_->encode(tape, batch.examples[i]->tokens);
    for (std::size_t h = 0; h < kNumHeads; ++h) {
      if (!cand.heads[h] || cand.heads[h]->spans.empty()) continue;
      const HeadCandidates& c = *cand.heads[h];
      auto& hp = heads_[h];
      HeadTerms& ht = terms[h];

      const Var S = span_reps(tape, enc, c.spans);
      const Var ent_logits = nn::add_bias(
          tape, nn::matmul(tape, S, tape.param(hp.entity_w)), tape.param(hp.entity_b));
      ht.span_ce.push_back(nn::softmax_ce_sum(tape, ent_logits, c.span_labels));
      ht.spans += c.spans.size();

      if (with_soft && config_.entity_soft_labels && !c.entity_soft.empty()) {
        std::vector<std::size_t> rows;
        std::vector<SoftLabel> targets;
        for (const auto& [idx, label] : c.entity_soft) {
          rows.push_back(idx);
          targets.push_back(label);
        }
        const Var logits = nn::add_bias(
            tape, nn::matmul(tape, nn::gather_rows(tape, S, rows), tape.param(hp.entity_aux_w)),
            tape.param(hp.entity_aux_b));
        ht.ent_soft.push_back(nn::soft_divergence_sum(tape, logits, targets, d));
        ht.ent_soft_n += rows.size();
      }

      if (c.pairs.empty()) continue;
      const Var P = pair_reps(tape, enc, S, c.spans, c.pairs);
      const Var rel_logits = nn::add_bias(
          tape, nn::matmul(tape, P, tape.param(hp.relation_w)), tape.param(hp.relation_b));
      ht.rel_bce.push_back(nn::bce_logits_sum(tape, rel_logits, c.relation_targets));
      ht.pairs += c.pairs.size();

      if (with_soft && !c.relation_soft.empty()) {
        std::vector<std::size_t> rows;
        std::vector<SoftLabel> targets;
        for (const auto& [idx, label] : c.relation_soft) {
          rows.push_back(idx);
          targets.push_back(label);
        }
        const Var logits = nn::add_bias(
            tape, nn::matmul(tape, nn::gather_rows(tape, P, rows), tape.param(hp.aux_w)),
            tape.param(hp.aux_b));
        ht.rel_soft.push_back(nn::soft_divergence_sum(tape, logits, targets, d));
        ht.rel_soft_n += rows.size();
      }
    }
  }

  auto mean = [&](const std::vector<Var>& parts, std::size_t n) {
    if (parts.empty() || n == 0) return tape.constant(Matrix::Zero(1, 1));
    return nn::scale(tape, nn::sum(tape, parts), 1.0 / static_cast<double>(n));
  };
  Graph g;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    const HeadTerms& ht = terms[h];
    g.single[h] = nn::add(tape, mean(ht.span_ce, ht.spans), mean(ht.rel_bce, ht.pairs));
    g.soft[h] = nn::add(tape, mean(ht.rel_soft, ht.rel_soft_n), mean(ht.ent_soft, ht.ent_soft_n));
    g.has_soft[h] = ht.rel_soft_n + ht.ent_soft_n > 0;
  }
  g.multi = nn::add(tape, g.single[0], g.single[1]);
  g.soft_total = nn::add(tape, g.soft[0], g.soft[1]);
  g.total = with_soft ? nn::add(tape, g.multi, g.soft_total) : g.multi;
  return g;
}

LossBreakdown JointModel::read(const Tape& tape, const Graph& g) {
  LossBreakdown out;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    out.single[h] = tape.scalar(g.single[h]);
    out.soft[h] = tape.scalar(g.soft[h]);
  }
  out.multi = tape.scalar(g.multi);
  out.soft_total = tape.scalar(g.soft_total);
  out.total = tape.scalar(g.total);
  return out;
}

double JointModel::loss_single(Head h, const Batch& batch) {
  Tape tape;
  const Graph g = build(tape, batch, false, config_.divergence);
  return tape.scalar(g.single[hidx(h)]);
}

double JointModel::loss_multi(const Batch& batch) {
  Tape tape;
  return tape.scalar(build(tape, batch, false, config_.divergence).multi);
}

double JointModel::loss_soft(const Batch& batch, Divergence d) {
  Tape tape;
  return tape.scalar(build(tape, batch, true, d).soft_total);
}

LossBreakdown JointModel::losses(const Batch& batch) {
  Tape tape;
  const bool soft = config_.soft_labels || config_.entity_soft_labels;
  return read(tape, build(tape, batch, soft, config_.divergence));
}

LossBreakdown JointModel::accumulate_gradients(const Batch& batch) {
  Tape tape;
  const bool soft = config_.soft_labels || config_.entity_soft_labels;
  const Graph g = build(tape, batch, soft, config_.divergence);
  tape.backward(g.total);
  return read(tape, g);
}

HeadAnnotation JointModel::predict(const std::vector<Token>& tokens, Head h) {
  return predict(tokens, h, config_.relation_threshold);
}

HeadAnnotation JointModel::predict(const std::vector<Token>& tokens, Head h, double threshold) {
  HeadAnnotation out;
  if (tokens.empty()) return out;
  const std::size_t hi = hidx(h);
  const LabelSchema& schema = schemas_[hi];
  const Perspective p = h == Head::kSci ? Perspective::kSci : Perspective::kSem;
  auto& hp = heads_[hi];

  Tape tape;
  const nn::Encoded enc = encoder_->encode(tape, tokens);
  const std::vector<Span> spans = enumerate_spans(tokens.size(), config_.max_span_width);
  const Var S = span_reps(tape, enc, spans);
  const Matrix logits = tape.value(nn::add_bias(
      tape, nn::matmul(tape, S, tape.param(hp.entity_w)), tape.param(hp.entity_b)));

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Eigen::Index best = 0;
    logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
    if (best == 0) continue;
    kept.push_back(i);
    out.entities.push_back({"E" + std::to_string(out.entities.size()), spans[i],
                            schema.entity_types[static_cast<std::size_t>(best - 1)], p});
  }
  if (kept.size() < 2) return out;

  std::vector<std::pair<std::size_t, std::size_t>> pairs, entity_pairs;
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = 0; b < kept.size(); ++b)
      if (a != b) {
        pairs.emplace_back(kept[a], kept[b]);
        entity_pairs.emplace_back(a, b);
      }
  const Var P = pair_reps(tape, enc, S, spans, pairs);
  Matrix scores = nn::sigmoid(tape.value(nn::add_bias(
      tape, nn::matmul(tape, P, tape.param(hp.relation_w)), tape.param(hp.relation_b))));
  scores = scores.cwiseMax(kProbFloor).cwiseMin(1.0 - kProbFloor);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t k = 0; k < schema.relation_types.size(); ++k)
      if (scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) > threshold)
        out.relations.push_back({out.entities[entity_pairs[i].first].id,
                                 out.entities[entity_pairs[i].second].id,
                                 schema.relation_types[k], p});
  return out;
}

void JointModel::save(const std::string& directory) {
  fs::create_directories(directory);
  nlohmann::ordered_json manifest;
  manifest["format"] = "lvsie-checkpoint-1";
  manifest["encoder"] = encoder_->identifier();
  manifest["encoder_config"] = encoder_->config();
  manifest["model"] = to_json(config_);
  manifest["seed"] = config_.seed;
  manifest["heads"] = {{{"head", "HEAD_1"}, {"perspective", "SCI"}, {"schema", schema_json(schemas_[0])}},
                       {{"head", "HEAD_2"}, {"perspective", "SEM"}, {"schema", schema_json(schemas_[1])}}};
  auto& plist = manifest["parameters"] = nlohmann::ordered_json::array();

  std::ofstream blob(fs::path(directory) / "parameters.bin", std::ios::binary);
  if (!blob) throw Error("cannot write checkpoint in " + directory);
  for (auto* p : parameters()) {
    plist.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}});
    // Column-major doubles in host byte order.
    blob.write(reinterpret_cast<const char*>(p->value.data()),
               static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!blob) throw Error("failed writing checkpoint in " + directory);
  write_file((fs::path(directory) / "manifest.json").string(), manifest.dump(2) + "\n");
}

JointModel JointModel::load(const std::string& directory) {
  const auto manifest =
      nlohmann::json::parse(read_file((fs::path(directory) / "manifest.json").string()));
  if (manifest.value("format", "") != "lvsie-checkpoint-1")
    throw Error("unrecognized checkpoint format in " + directory);
  ModelConfig config = model_config_from_json(manifest.at("model"));
  std::array<LabelSchema, kNumHeads> schemas{schema_from_json(manifest.at("heads")[0].at("schema")),
                                             schema_from_json(manifest.at("heads")[1].at("schema"))};
  JointModel model(config, schemas);
  if (model.encoder_->identifier() != manifest.at("encoder").get<std::string>())
    throw Error("checkpoint encoder '" + manifest.at("encoder").get<std::string>() +
                "' is not available");

  std::ifstream blob(fs::path(directory) / "parameters.bin", std::ios::binary);
  if (!blob) throw Error("missing parameters.bin in " + directory);
  const auto params = model.parameters();
  const auto& listed = manifest.at("parameters");
  if (listed.size() != params.size()) throw Error("checkpoint parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto* p = params[i];
    if (listed[i].at("name") != p->name || listed[i].at("rows") != p->value.rows() ||
        listed[i].at("cols") != p->value.cols())
      throw Error("checkpoint parameter " + p->name + " does not match the model");
    blob.read(reinterpret_cast<char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!blob) throw Error("truncated parameters.bin in " + directory);
  }
  return model;
}

std::vector<LossBreakdown> train(JointModel& model, const std::vector<TrainingExample>& examples,
                                 const TrainOptions& options) {
  if (options.batch_size == 0) throw Error("batch size must be positive");
  nn::Adam adam(model.parameters(), model.config().learning_rate);
  std::vector<LossBreakdown> history;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto order = seeded_permutation(examples.size(), mix_seed(options.seed, epoch));
    LossBreakdown mean;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      std::vector<const TrainingExample*> chunk;
      for (std::size_t k = start; k < std::min(order.size(), start + options.batch_size); ++k)
        chunk.push_back(&examples[order[k]]);
      const Batch batch =
          make_batch(chunk, model.schemas(), model.config(), mix_seed(options.seed, epoch, start + 1));
      adam.zero_grad();
      const LossBreakdown lb = model.accumulate_gradients(batch);
      adam.step();
      for (std::size_t h = 0; h < kNumHeads; ++h) {
        mean.single[h] += lb.single[h];
        mean.soft[h] += lb.soft[h];
      }
      mean.multi += lb.multi;
      mean.soft_total += lb.soft_total;
      mean.total += lb.total;
      ++batches;
    }
    if (batches > 0) {
      const double inv = 1.0 / static_cast<double>(batches);
      for (std::size_t h = 0; h < kNumHeads; ++h) {
        mean.single[h] *= inv;
        mean.soft[h] *= inv;
      }
      mean.multi *= inv;
      mean.soft_total *= inv;
      mean.total *= inv;
    }
    history.push_back(mean);
    if (options.on_epoch) options.on_epoch(epoch, mean);
  }
  return history;
}

}  // namespace lvsie
