#include "lvsie/corpus.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <utility>

namespace lvsie {

std::string_view to_string(Perspective p) { return p == Perspective::kSci ? "SCI" : "SEM"; }

std::string_view to_string(Source s) {
  switch (s) {
    case Source::kSemeval: return "SEMEVAL";
    case Source::kScierc: return "SCIERC";
    case Source::kScirex: return "SCIREX";
  }
  return "?";
}

std::string_view to_string(Agreement a) {
  switch (a) {
    case Agreement::kHigh: return "HIGH";
    case Agreement::kMedium: return "MEDIUM";
    case Agreement::kLow: return "LOW";
  }
  return "?";
}

Perspective perspective_from_string(std::string_view s) {
  if (s == "SCI") return Perspective::kSci;
  if (s == "SEM") return Perspective::kSem;
  throw Error("unknown perspective '" + std::string(s) + "'");
}

Source source_from_string(std::string_view s) {
  if (s == "SEMEVAL") return Source::kSemeval;
  if (s == "SCIERC") return Source::kScierc;
  if (s == "SCIREX") return Source::kScirex;
  throw Error("unknown source '" + std::string(s) + "'");
}

Agreement agreement_from_string(std::string_view s) {
  if (s == "HIGH") return Agreement::kHigh;
  if (s == "MEDIUM") return Agreement::kMedium;
  if (s == "LOW") return Agreement::kLow;
  throw Error("unknown agreement level '" + std::string(s) + "'");
}

std::size_t Span::overlap(const Span& o) const {
  const std::size_t lo = std::max(start, o.start);
  const std::size_t hi = std::min(end, o.end);
  return hi > lo ? hi - lo : 0;
}

const EntityMention* Sentence::find_entity(std::string_view id) const {
  for (const auto& e : entities)
    if (e.id == id) return &e;
  return nullptr;
}

std::size_t Document::entity_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.entities.size();
  return n;
}

std::size_t Document::relation_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.relations.size();
  return n;
}

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& v, std::string_view label) {
  auto it = std::find(v.begin(), v.end(), label);
  if (it == v.end()) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

struct MappedPair {
  std::string_view sem;
  std::string_view sci;
};

// Order matches the soft-label class encoding.
constexpr std::array<MappedPair, 5> kRelationMapping{{
    {"Usage", "Used-for"},
    {"Comparison", "Compare"},
    {"Model", "Feature-of"},
    {"Part-whole", "Part-of"},
    {"Result", "Evaluate-for"},
}};

const std::vector<std::string>& scierc_entity_types() {
  static const std::vector<std::string> types{"Task",     "Method",              "Metric",
                                              "Material", "OtherScientificTerm", "Generic"};
  return types;
}

}  // namespace

std::optional<std::size_t> LabelSchema::entity_index(std::string_view label) const {
  return index_of(entity_types, label);
}

std::optional<std::size_t> LabelSchema::relation_index(std::string_view label) const {
  return index_of(relation_types, label);
}

namespace schema {

LabelSchema scierc_full() {
  return {scierc_entity_types(),
          {"Used-for", "Feature-of", "Hyponym-of", "Part-of", "Compare", "Conjunction",
           "Evaluate-for"}};
}

LabelSchema semeval_full() {
  return {{std::string(kUntypedEntity)},
          {"Usage", "Result", "Model", "Part-whole", "Topic", "Comparison"}};
}

LabelSchema scierc_common() {
  LabelSchema s{{std::string(kUntypedEntity)}, {}};
  for (const auto& m : kRelationMapping) s.relation_types.emplace_back(m.sci);
  return s;
}

LabelSchema semeval_common() {
  LabelSchema s{{std::string(kUntypedEntity)}, {}};
  for (const auto& m : kRelationMapping) s.relation_types.emplace_back(m.sem);
  return s;
}

LabelSchema semeval_typed_variation() {
  LabelSchema s{scierc_entity_types(), semeval_full().relation_types};
  s.entity_types.emplace_back(kSemevalOnlyEntity);
  return s;
}

LabelSchema for_perspective(Perspective p) {
  if (p == Perspective::kSci) {
    LabelSchema s = scierc_full();
    s.entity_types.emplace_back(kUntypedEntity);
    return s;
  }
  LabelSchema s = semeval_typed_variation();
  s.entity_types.emplace_back(kUntypedEntity);
  return s;
}

}  // namespace schema

std::optional<std::string> map_relation_label(std::string_view label, MapDirection direction) {
  for (const auto& m : kRelationMapping) {
    if (direction == MapDirection::kSemToSci && m.sem == label) return std::string(m.sci);
    if (direction == MapDirection::kSciToSem && m.sci == label) return std::string(m.sem);
  }
  return std::nullopt;
}

bool is_mapped_label(std::string_view label, Perspective p) {
  return map_relation_label(label, p == Perspective::kSem ? MapDirection::kSemToSci
                                                          : MapDirection::kSciToSem)
      .has_value();
}

std::vector<std::string> validate_document(const Document& doc) {
  return validate_document(doc, schema::for_perspective(Perspective::kSci),
                           schema::for_perspective(Perspective::kSem));
}

std::vector<std::string> validate_document(const Document& doc, const LabelSchema& sci,
                                           const LabelSchema& sem) {
  std::vector<std::string> out;
  auto report = [&](std::size_t si, const std::string& what) {
    std::ostringstream os;
    os << doc.doc_id << " sentence " << si << ": " << what;
    out.push_back(os.str());
  };

  // Sentence character ranges must be disjoint, ordered, and inside raw_text.
  std::size_t prev_end = 0;
  bool first = true;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const auto& sent = doc.sentences[si];
    for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
      const Token& t = sent.tokens[ti];
      if (t.index != ti) report(si, "token " + std::to_string(ti) + " has index " +
                                        std::to_string(t.index));
      if (t.char_start >= t.char_end)
        report(si, "token " + std::to_string(ti) + " has empty character range");
      if (t.char_end > doc.raw_text.size())
        report(si, "token " + std::to_string(ti) + " lies outside raw_text");
      if (!first && t.char_start < prev_end)
        report(si, "token " + std::to_string(ti) + " overlaps the previous token");
      prev_end = t.char_end;
      first = false;
    }

    std::set<std::string> ids;
    for (const auto& e : sent.entities) {
      if (!ids.insert(e.id).second) report(si, "duplicate entity id " + e.id);
      if (!(e.span.start < e.span.end && e.span.end <= sent.size()))
        report(si, "entity " + e.id + " span [" + std::to_string(e.span.start) + "," +
                       std::to_string(e.span.end) + ") out of bounds for length " +
                       std::to_string(sent.size()));
      const LabelSchema& s = e.perspective == Perspective::kSci ? sci : sem;
      if (!s.has_entity(e.entity_type))
        report(si, "entity " + e.id + " has type '" + e.entity_type + "' outside the " +
                       std::string(to_string(e.perspective)) + " schema");
    }
    for (std::size_t ri = 0; ri < sent.relations.size(); ++ri) {
      const auto& r = sent.relations[ri];
      const std::string name = "relation " + std::to_string(ri) + " (" + r.head + "->" +
                               r.tail + " " + r.relation_type + ")";
      if (r.head == r.tail) report(si, name + " is reflexive");
      const EntityMention* h = sent.find_entity(r.head);
      const EntityMention* t = sent.find_entity(r.tail);
      if (!h || !t) report(si, name + " has an endpoint outside this sentence");
      if ((h && h->perspective != r.perspective) || (t && t->perspective != r.perspective))
        report(si, name + " mixes perspectives");
      const LabelSchema& s = r.perspective == Perspective::kSci ? sci : sem;
      if (!s.has_relation(r.relation_type))
        report(si, name + " has a label outside the " + std::string(to_string(r.perspective)) +
                       " schema");
    }
  }

  for (const auto& sl : doc.soft_labels) {
    const bool missing =
        sl.sentence >= doc.sentences.size() ||
        sl.relation >= (sl.on_entity ? doc.sentences[sl.sentence].entities.size()
                                     : doc.sentences[sl.sentence].relations.size());
    if (missing) {
      out.push_back(doc.doc_id + ": soft label references a missing mention");
      continue;
    }
    if (sl.num_classes < 2 || sl.target_class >= sl.num_classes)
      out.push_back(doc.doc_id + ": soft label has invalid class geometry");
  }
  return out;
}

}  // namespace lvsie
