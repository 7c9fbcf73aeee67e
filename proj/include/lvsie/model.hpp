#ifndef LVSIE_MODEL_HPP
#define LVSIE_MODEL_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lvsie/corpus.hpp"
#include "lvsie/dataset.hpp"
#include "lvsie/nn/autograd.hpp"
#include "lvsie/nn/encoder.hpp"
#include "lvsie/softlabel.hpp"

namespace lvsie {

struct ModelConfig {
  std::size_t max_span_width = 10;
  std::size_t width_dim = 25;
  std::size_t neg_entities = 100;
  std::size_t neg_relations = 100;
  double relation_threshold = 0.4;
  nn::TinyEncoderConfig encoder;
  double learning_rate = 5e-3;
  bool soft_labels = false;
  // Extends the soft loss to entity heads, using the entity soft labels the
  // dataset builder attaches.
  bool entity_soft_labels = false;
  Divergence divergence = Divergence::kKlStandard;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

// All spans with 1 <= width <= min(max_width, length), ordered by width and
// then start.
std::vector<Span> enumerate_spans(std::size_t length, std::size_t max_width);

// Deterministic seed derivation shared by every sampling step.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Training candidates for one head of one sentence.
struct HeadCandidates {
  std::vector<Span> spans;
  std::vector<std::size_t> span_labels;  // 0 is NONE, else 1 + entity type index
  // Ordered pairs of indices into `spans`; only gold entity spans take part.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  nn::Matrix relation_targets;  // pairs x relation classes, multi-hot
  std::vector<std::pair<std::size_t, SoftLabel>> relation_soft;  // pair index -> P
  std::vector<std::pair<std::size_t, SoftLabel>> entity_soft;    // span index -> P
};

struct Candidates {
  std::array<std::optional<HeadCandidates>, kNumHeads> heads;
};

// Gold spans and pairs plus up to ne non-gold spans and nr unrelated gold
// pairs per head, sampled deterministically from `seed`.
Candidates sample_negatives(const TrainingExample& ex,
                            const std::array<LabelSchema, kNumHeads>& schemas,
                            std::size_t max_width, std::size_t ne, std::size_t nr,
                            std::uint64_t seed);

struct Batch {
  std::vector<const TrainingExample*> examples;
  std::vector<Candidates> candidates;
};

Batch make_batch(const std::vector<const TrainingExample*>& examples,
                 const std::array<LabelSchema, kNumHeads>& schemas, const ModelConfig& config,
                 std::uint64_t seed);
Batch make_batch(const std::vector<TrainingExample>& examples,
                 const std::array<LabelSchema, kNumHeads>& schemas, const ModelConfig& config,
                 std::uint64_t seed);

struct LossBreakdown {
  std::array<double, kNumHeads> single{};
  std::array<double, kNumHeads> soft{};
  double multi = 0.0;
  double soft_total = 0.0;
  double total = 0.0;
};

class JointModel {
 public:
  JointModel(ModelConfig config, std::array<LabelSchema, kNumHeads> schemas,
             std::unique_ptr<nn::Encoder> encoder = nullptr);

  const ModelConfig& config() const { return config_; }
  const std::array<LabelSchema, kNumHeads>& schemas() const { return schemas_; }
  nn::Encoder& encoder() { return *encoder_; }
  std::vector<nn::Parameter*> parameters();
  std::vector<nn::Parameter*> head_parameters(Head h);

  double loss_single(Head h, const Batch& batch);
  double loss_multi(const Batch& batch);
  double loss_soft(const Batch& batch, Divergence d);
  LossBreakdown losses(const Batch& batch);
  // Forward and backward on L_multi (+ L_soft when enabled); gradients are
  // added to the parameters' grad buffers.
  LossBreakdown accumulate_gradients(const Batch& batch);

  // Spans whose argmax is not NONE become entities; ordered pairs of them
  // become relations for every class whose score exceeds the threshold.
  HeadAnnotation predict(const std::vector<Token>& tokens, Head h);
  HeadAnnotation predict(const std::vector<Token>& tokens, Head h, double threshold);

  void save(const std::string& directory);
  static JointModel load(const std::string& directory);

 private:
  struct HeadParams {
    nn::Parameter entity_w, entity_b;
    nn::Parameter relation_w, relation_b;
    nn::Parameter aux_w, aux_b;
    nn::Parameter entity_aux_w, entity_aux_b;
  };
  struct HeadTerms {
    std::vector<nn::Var> span_ce, rel_bce, rel_soft, ent_soft;
    std::size_t spans = 0, pairs = 0, rel_soft_n = 0, ent_soft_n = 0;
  };
  struct Graph {
    std::array<nn::Var, kNumHeads> single;
    std::array<nn::Var, kNumHeads> soft;
    std::array<bool, kNumHeads> has_soft{};
    nn::Var multi, soft_total, total;
  };

  Graph build(nn::Tape& tape, const Batch& batch, bool with_soft, Divergence d);
  nn::Var span_reps(nn::Tape& tape, const nn::Encoded& enc, const std::vector<Span>& spans);
  nn::Var pair_reps(nn::Tape& tape, const nn::Encoded& enc, nn::Var spans,
                    const std::vector<Span>& span_list,
                    const std::vector<std::pair<std::size_t, std::size_t>>& pairs);
  static LossBreakdown read(const nn::Tape& tape, const Graph& g);

  ModelConfig config_;
  std::array<LabelSchema, kNumHeads> schemas_;
  std::unique_ptr<nn::Encoder> encoder_;
  nn::Parameter width_embedding_;
  std::array<HeadParams, kNumHeads> heads_;
};

struct TrainOptions {
  std::size_t epochs = 50;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;
  // Called after every epoch with the epoch index and the mean batch losses.
  std::function<void(std::size_t, const LossBreakdown&)> on_epoch;
};

std::vector<LossBreakdown> train(JointModel& model, const std::vector<TrainingExample>& examples,
                                 const TrainOptions& options);

}  // namespace lvsie

#endif  // LVSIE_MODEL_HPP
