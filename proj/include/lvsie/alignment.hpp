#ifndef LVSIE_ALIGNMENT_HPP
#define LVSIE_ALIGNMENT_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lvsie/corpus.hpp"

namespace lvsie {

enum class MatchKind { kExact, kPartial };

struct EntityMatch {
  std::size_t sentence = 0;
  std::string sem_id;
  std::string sci_id;
  MatchKind kind = MatchKind::kExact;
};

struct RelationVerdict {
  std::size_t sentence = 0;
  std::optional<RelationMention> sci_relation;
  std::optional<RelationMention> sem_relation;
  Agreement agreement = Agreement::kMedium;
};

// One abstract annotated by both corpora. `sem_doc` is the SemEval annotation
// re-projected onto the SciERC token grid, so sentence i of sem_doc and
// sentence i of sci_doc share their tokens. `sem_source` keeps the original
// parse for statistics.
struct AlignedDocument {
  Document sem_doc;
  Document sci_doc;
  Document sem_source;
  std::vector<std::pair<std::size_t, std::size_t>> sentence_alignment;
  std::vector<EntityMatch> entity_matches;
  std::vector<RelationVerdict> relation_verdicts;
  std::size_t dropped_sem_entities = 0;
  std::size_t dropped_sem_relations = 0;

  const EntityMatch* match_for_sem(std::string_view sem_id) const;
  const EntityMatch* match_for_sci(std::string_view sci_id) const;
};

struct OverlapResult {
  std::vector<AlignedDocument> aligned;
  std::vector<Document> sem_only;
  std::vector<Document> sci_only;
};

// Pairs documents whose normalize_for_matching() skeletons are equal and
// re-projects each SemEval partner onto its SciERC token grid. Aligned pairs
// come back in SciERC corpus order.
OverlapResult find_overlaps(const std::vector<Document>& sem_corpus,
                            const std::vector<Document>& sci_corpus);

// Builds the sentence-aligned pair for two documents with the same text.
AlignedDocument project_pair(const Document& sem, const Document& sci);

// Greedy one-to-one entity matching per aligned sentence: highest token
// overlap first, then the shorter union, then the leftmost spans.
AlignedDocument align_entities(AlignedDocument pair);

// Gives every relation of both perspectives exactly one verdict.
AlignedDocument assign_agreements(AlignedDocument pair);

// find_overlaps + align_entities + assign_agreements.
OverlapResult align_corpora(const std::vector<Document>& sem_corpus,
                            const std::vector<Document>& sci_corpus);

// Relation label in the shared (SciERC) label space, if it has a counterpart.
std::optional<std::string> shared_label(const RelationMention& r);

// Counts of relation k between an argument-1 entity of type i and an
// argument-2 entity of type j, plus argument marginals.
struct CooccurrenceTable {
  Perspective perspective = Perspective::kSci;
  std::vector<std::string> entity_labels;
  std::vector<std::string> relation_labels;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> pair_counts;
  std::map<std::string, std::size_t> arg1_counts;
  std::map<std::string, std::size_t> arg2_counts;
  std::size_t total_relations = 0;

  std::size_t count(const std::string& i, const std::string& j, const std::string& k) const;
  std::size_t n1(const std::string& i) const;
  std::size_t n2(const std::string& j) const;
};

// SemEval entities take the type of an EXACT-matched SciERC entity, and
// OtherScientificTerm_2 otherwise.
CooccurrenceTable build_cooccurrence(const std::vector<AlignedDocument>& aligned, Perspective p);

// A(i,j,k) / (N1(i) + N2(j)). Throws when the denominator is zero.
double cooccurrence_score(const CooccurrenceTable& table, const std::string& i,
                          const std::string& j, const std::string& k);

// Entity-type pair with the highest score for relation k.
std::pair<std::string, std::string> cooccurrence_argmax(const CooccurrenceTable& table,
                                                        const std::string& k);

struct PerspectiveCounts {
  std::size_t entities = 0;
  std::size_t relations = 0;
  // Relations whose label is one of the five mapped labels.
  std::size_t common_relations = 0;
  // Mapped-label relations that also have a partner relation over an
  // EXACT-matched entity pair (HIGH or LOW verdicts).
  std::size_t common_matched_relations = 0;
  // Counts per mapped label, in the soft-label class order.
  std::array<std::size_t, 5> label_distribution{};
};

struct OverlapReport {
  std::size_t aligned_documents = 0;
  std::size_t sem_only_documents = 0;
  std::size_t sci_only_documents = 0;
  std::size_t aligned_sentences = 0;
  PerspectiveCounts sem;
  PerspectiveCounts sci;
  std::size_t high = 0, medium = 0, low = 0;
  std::size_t dropped_sem_entities = 0;
  std::size_t dropped_sem_relations = 0;
};

OverlapReport overlap_statistics(const OverlapResult& overlap);
std::string overlap_report_to_json(const OverlapReport& report, int indent = 2);

}  // namespace lvsie

#endif  // LVSIE_ALIGNMENT_HPP
