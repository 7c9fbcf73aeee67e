#ifndef LVSIE_DATASET_HPP
#define LVSIE_DATASET_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvsie/alignment.hpp"
#include "lvsie/corpus.hpp"
#include "lvsie/softlabel.hpp"

namespace lvsie {

// HEAD_1 carries the SciERC perspective, HEAD_2 the SemEval one.
enum class Head : std::size_t { kSci = 0, kSem = 1 };
inline constexpr std::size_t kNumHeads = 2;

struct IndexedSoftLabel {
  std::size_t index = 0;  // relation (or entity) index within the head annotation
  SoftLabel label;
};

struct HeadAnnotation {
  std::vector<EntityMention> entities;
  std::vector<RelationMention> relations;
  std::vector<IndexedSoftLabel> relation_soft_labels;
  std::vector<IndexedSoftLabel> entity_soft_labels;
};

struct TrainingExample {
  std::string doc_id;
  std::size_t sentence_index = 0;
  // Sentence text; token character offsets index into it.
  std::string text;
  std::vector<Token> tokens;
  std::array<std::optional<HeadAnnotation>, kNumHeads> heads;

  bool has(Head h) const { return heads[static_cast<std::size_t>(h)].has_value(); }
  const HeadAnnotation& at(Head h) const { return *heads[static_cast<std::size_t>(h)]; }
  HeadAnnotation& at(Head h) { return *heads[static_cast<std::size_t>(h)]; }
};

enum class Strategy {
  kIndependentSem,
  kIndependentSci,
  kConcat,
  kConcatPlusSci,
  kConcatPlusSem,
  kMixed,
  kMixedSci,
  kMixedSem,
  kMtl,
  kMtlSoft,
  kSciercStandard,
};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

// What to do with a LOW-agreement pair when both perspectives share one head.
enum class ConflictPolicy { kKeepBoth, kPreferSci, kPreferSem };

// kCommonUntyped: five mapped relations, entity types erased.
// kFull: every label of both corpora; SemEval entities take the type of an
// EXACT-matched SciERC entity, else OtherScientificTerm_2.
enum class LabelSpace { kCommonUntyped, kFull };

struct SplitSpec {
  Strategy strategy = Strategy::kMtl;
  ConflictPolicy conflict_policy = ConflictPolicy::kKeepBoth;
  bool soft_labels = false;
  // Also attach entity soft labels (EXACT -> HIGH, PARTIAL -> LOW, unmatched
  // -> MEDIUM). Needs an entity schema with at least two types.
  bool entity_soft_labels = false;
  LabelSpace label_space = LabelSpace::kCommonUntyped;
  std::optional<std::size_t> cap;
  std::uint64_t seed = 0;
};

// Head schemas used by a label space. Single-head strategies train HEAD_1 in
// the SciERC space.
std::array<LabelSchema, kNumHeads> head_schemas(LabelSpace space);

bool uses_both_heads(Strategy s);
bool attaches_soft_labels(const SplitSpec& spec);
// Whether a model trained with `s` may be scored on the given test perspective
// (the CONCAT_PLUS variants consume that perspective's held-out abstracts).
bool may_evaluate_on(Strategy s, Perspective test_set);

struct Extras {
  std::vector<Document> sem_only;
  std::vector<Document> sci_only;
};

std::vector<TrainingExample> build_training_set(const std::vector<AlignedDocument>& aligned,
                                                const Extras* extras, const SplitSpec& spec);

// Gold annotations of one corpus as evaluation examples. With
// `into_sci_space`, SemEval relations are mapped onto HEAD_1 labels;
// otherwise a SemEval corpus lands on HEAD_2.
std::vector<TrainingExample> gold_examples(const std::vector<Document>& docs,
                                           Perspective source, LabelSpace space,
                                           bool into_sci_space);

enum class Partition { kTrain, kDev, kTest };

struct StandardSplit {
  std::vector<TrainingExample> train;
  std::vector<TrainingExample> test;
  std::size_t dual_head_abstracts = 0;
  std::size_t single_head_abstracts = 0;
  std::size_t overlapped_test_abstracts = 0;
};

// Official SciERC partition with dev folded into train. Overlapped training
// abstracts get both heads; the rest get HEAD_1 only with MEDIUM soft labels
// when spec.soft_labels is set. The test side is untouched SciERC gold.
StandardSplit build_scierc_standard_split(const std::vector<Document>& sci_corpus,
                                          const OverlapResult& overlap,
                                          const std::map<std::string, Partition>& partition,
                                          const SplitSpec& spec);

// Seeded nested subsample: cap(e, n1, s) is a subset of cap(e, n2, s) for
// n1 < n2. Original order is kept.
std::vector<TrainingExample> cap_data_quantity(const std::vector<TrainingExample>& examples,
                                               std::size_t n, std::uint64_t seed);

// Seeded permutation shared by every sampling step.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

// One single-sentence unified Document per example: HEAD_1 annotations are
// tagged SCI and HEAD_2 annotations SEM.
Document to_document(const TrainingExample& ex);
TrainingExample from_document(const Document& doc);

std::size_t relation_count(const std::vector<TrainingExample>& examples, Head h);

}  // namespace lvsie

#endif  // LVSIE_DATASET_HPP
