#ifndef LVSIE_CORPUS_HPP
#define LVSIE_CORPUS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lvsie {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Perspective { kSci, kSem };
enum class Source { kSemeval, kScierc, kScirex };
enum class Agreement { kHigh, kMedium, kLow };

std::string_view to_string(Perspective p);
std::string_view to_string(Source s);
std::string_view to_string(Agreement a);
Perspective perspective_from_string(std::string_view s);
Source source_from_string(std::string_view s);
Agreement agreement_from_string(std::string_view s);

inline constexpr std::string_view kUntypedEntity = "ENTITY";
inline constexpr std::string_view kSemevalOnlyEntity = "OtherScientificTerm_2";

struct Token {
  std::size_t index = 0;
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token&) const = default;
};

// Half-open token range [start, end) within one sentence.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t width() const { return end - start; }
  bool overlaps(const Span& o) const { return start < o.end && o.start < end; }
  std::size_t overlap(const Span& o) const;

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct EntityMention {
  std::string id;
  Span span;
  std::string entity_type;
  Perspective perspective = Perspective::kSci;

  bool operator==(const EntityMention&) const = default;
};

struct RelationMention {
  std::string head;
  std::string tail;
  std::string relation_type;
  Perspective perspective = Perspective::kSci;

  bool operator==(const RelationMention&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<EntityMention> entities;
  std::vector<RelationMention> relations;

  std::size_t size() const { return tokens.size(); }
  const EntityMention* find_entity(std::string_view id) const;

  bool operator==(const Sentence&) const = default;
};

// Reference from a stored relation (or, with on_entity, an entity) to its
// agreement-graded soft label. The probabilities themselves are recomputed
// from (agreement, K, target).
struct SoftLabelRef {
  std::size_t sentence = 0;
  std::size_t relation = 0;
  bool on_entity = false;
  Agreement agreement = Agreement::kMedium;
  std::size_t num_classes = 0;
  std::size_t target_class = 0;

  bool operator==(const SoftLabelRef&) const = default;
};

struct Document {
  std::string doc_id;
  Source source = Source::kScierc;
  std::string raw_text;
  std::vector<Sentence> sentences;
  std::vector<SoftLabelRef> soft_labels;
  // Perspectives that annotated this document, when that differs from what
  // the mentions alone show (a perspective may annotate nothing in a sentence).
  std::vector<Perspective> perspectives;

  std::size_t entity_count() const;
  std::size_t relation_count() const;

  bool operator==(const Document&) const = default;
};

struct LabelSchema {
  std::vector<std::string> entity_types;
  std::vector<std::string> relation_types;

  std::optional<std::size_t> entity_index(std::string_view label) const;
  std::optional<std::size_t> relation_index(std::string_view label) const;
  bool has_entity(std::string_view label) const { return entity_index(label).has_value(); }
  bool has_relation(std::string_view label) const { return relation_index(label).has_value(); }

  bool operator==(const LabelSchema&) const = default;
};

namespace schema {
LabelSchema scierc_full();
LabelSchema semeval_full();
// Five mapped relations in the soft-label encoding order
// [Used-for, Compare, Feature-of, Part-of, Evaluate-for], untyped entities.
LabelSchema scierc_common();
// The SemEval counterparts of scierc_common(), same order.
LabelSchema semeval_common();
// SciERC entity types plus the marker type for SemEval-only entities.
LabelSchema semeval_typed_variation();
// Everything a parsed or built document of that perspective may carry.
LabelSchema for_perspective(Perspective p);
}  // namespace schema

enum class MapDirection { kSemToSci, kSciToSem };

// Table of the five relation correspondences between the two corpora.
std::optional<std::string> map_relation_label(std::string_view label, MapDirection direction);
bool is_mapped_label(std::string_view label, Perspective p);

// Returns one human-readable line per violated invariant; empty when valid.
// The one-argument form checks labels against schema::for_perspective().
std::vector<std::string> validate_document(const Document& doc);
std::vector<std::string> validate_document(const Document& doc, const LabelSchema& sci,
                                           const LabelSchema& sem);

}  // namespace lvsie

#endif  // LVSIE_CORPUS_HPP
