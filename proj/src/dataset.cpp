#include "lvsie/dataset.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

namespace lvsie {

namespace {

constexpr std::size_t idx(Head h) { return static_cast<std::size_t>(h); }

struct StrategyName {
  Strategy strategy;
  std::string_view name;
};

constexpr StrategyName kStrategyNames[] = {
    {Strategy::kIndependentSem, "INDEPENDENT_SEM"},
    {Strategy::kIndependentSci, "INDEPENDENT_SCI"},
    {Strategy::kConcat, "CONCAT"},
    {Strategy::kConcatPlusSci, "CONCAT_PLUS_SCI"},
    {Strategy::kConcatPlusSem, "CONCAT_PLUS_SEM"},
    {Strategy::kMixed, "MIXED"},
    {Strategy::kMixedSci, "MIXED_SCI"},
    {Strategy::kMixedSem, "MIXED_SEM"},
    {Strategy::kMtl, "MTL"},
    {Strategy::kMtlSoft, "MTL_SOFT"},
    {Strategy::kSciercStandard, "SCIERC_STANDARD"},
};

// Sentence text and tokens re-based onto that text.
void copy_sentence(const Document& doc, const Sentence& s, TrainingExample& ex) {
  ex.tokens = s.tokens;
  if (s.tokens.empty()) return;
  const std::size_t base = s.tokens.front().char_start;
  ex.text = doc.raw_text.substr(base, s.tokens.back().char_end - base);
  for (auto& t : ex.tokens) {
    t.char_start -= base;
    t.char_end -= base;
  }
}

Agreement entity_agreement(const EntityMatch* m) {
  if (!m) return Agreement::kMedium;
  return m->kind == MatchKind::kExact ? Agreement::kHigh : Agreement::kLow;
}

// SciERC annotation on HEAD_1.
HeadAnnotation sci_view(const Sentence& s, const LabelSchema& schema, LabelSpace space) {
  HeadAnnotation a;
  for (auto e : s.entities) {
    if (space == LabelSpace::kCommonUntyped) e.entity_type = std::string(kUntypedEntity);
    if (!schema.has_entity(e.entity_type)) continue;
    e.perspective = Perspective::kSci;
    a.entities.push_back(std::move(e));
  }
  for (auto r : s.relations) {
    if (!schema.has_relation(r.relation_type)) continue;
    r.perspective = Perspective::kSci;
    a.relations.push_back(std::move(r));
  }
  return a;
}

// SemEval annotation on HEAD_2 in its own label space.
HeadAnnotation sem_view(const Sentence& s, const LabelSchema& schema, LabelSpace space,
                        const AlignedDocument* pair) {
  HeadAnnotation a;
  for (auto e : s.entities) {
    if (space == LabelSpace::kCommonUntyped) {
      e.entity_type = std::string(kUntypedEntity);
    } else {
      e.entity_type = std::string(kSemevalOnlyEntity);
      if (pair) {
        const EntityMatch* m = pair->match_for_sem(e.id);
        if (m && m->kind == MatchKind::kExact)
          if (const auto* p = pair->sci_doc.sentences[m->sentence].find_entity(m->sci_id))
            e.entity_type = p->entity_type;
      }
    }
    if (!schema.has_entity(e.entity_type)) continue;
    e.perspective = Perspective::kSem;
    a.entities.push_back(std::move(e));
  }
  for (auto r : s.relations) {
    if (!schema.has_relation(r.relation_type)) continue;
    r.perspective = Perspective::kSem;
    a.relations.push_back(std::move(r));
  }
  return a;
}

// SemEval annotation moved onto HEAD_1: untyped entities, mapped relations.
HeadAnnotation sem_in_sci_space(const Sentence& s) {
  HeadAnnotation a;
  for (auto e : s.entities) {
    e.entity_type = std::string(kUntypedEntity);
    e.perspective = Perspective::kSci;
    a.entities.push_back(std::move(e));
  }
  for (auto r : s.relations) {
    const auto mapped = map_relation_label(r.relation_type, MapDirection::kSemToSci);
    if (!mapped) continue;
    r.relation_type = *mapped;
    r.perspective = Perspective::kSci;
    a.relations.push_back(std::move(r));
  }
  return a;
}

void require_common(const SplitSpec& spec) {
  if (spec.label_space != LabelSpace::kCommonUntyped)
    throw Error(std::string(to_string(spec.strategy)) +
                " puts SemEval relations on the SciERC head and needs the common label space");
}

void attach_relation_soft_labels(HeadAnnotation& a, const LabelSchema& schema,
                                 const std::vector<Agreement>& levels) {
  for (std::size_t ri = 0; ri < a.relations.size(); ++ri) {
    const auto target = schema.relation_index(a.relations[ri].relation_type);
    if (!target) continue;
    a.relation_soft_labels.push_back(
        {ri, make_soft_label(*target, levels[ri], schema.relation_types.size())});
  }
}

void attach_entity_soft_labels(HeadAnnotation& a, const LabelSchema& schema,
                               const AlignedDocument* pair, Head h) {
  if (schema.entity_types.size() < 2)
    throw Error("entity soft labels need at least two entity types");
  for (std::size_t ei = 0; ei < a.entities.size(); ++ei) {
    const auto target = schema.entity_index(a.entities[ei].entity_type);
    if (!target) continue;
    const EntityMatch* m = nullptr;
    if (pair)
      m = h == Head::kSci ? pair->match_for_sci(a.entities[ei].id)
                          : pair->match_for_sem(a.entities[ei].id);
    a.entity_soft_labels.push_back(
        {ei, make_soft_label(*target, entity_agreement(m), schema.entity_types.size())});
  }
}

// Agreement for each relation of one perspective in sentence si, consuming
// verdicts so duplicated relations each get their own.
std::vector<Agreement> agreements_for(const AlignedDocument& pair, std::size_t si,
                                      const std::vector<RelationMention>& rels, Perspective p) {
  std::vector<bool> used(pair.relation_verdicts.size(), false);
  std::vector<Agreement> out;
  for (const auto& r : rels) {
    Agreement level = Agreement::kMedium;
    for (std::size_t vi = 0; vi < pair.relation_verdicts.size(); ++vi) {
      const auto& v = pair.relation_verdicts[vi];
      if (used[vi] || v.sentence != si) continue;
      const auto& cand = p == Perspective::kSci ? v.sci_relation : v.sem_relation;
      if (!cand || cand->head != r.head || cand->tail != r.tail ||
          cand->relation_type != r.relation_type)
        continue;
      used[vi] = true;
      level = v.agreement;
      break;
    }
    out.push_back(level);
  }
  return out;
}

TrainingExample base_example(const Document& doc, std::size_t si) {
  TrainingExample ex;
  ex.doc_id = doc.doc_id;
  ex.sentence_index = si;
  copy_sentence(doc, doc.sentences[si], ex);
  return ex;
}

TrainingExample mtl_example(const AlignedDocument& pair, std::size_t si, const SplitSpec& spec,
                            const std::array<LabelSchema, kNumHeads>& schemas) {
  TrainingExample ex = base_example(pair.sci_doc, si);
  HeadAnnotation sci = sci_view(pair.sci_doc.sentences[si], schemas[0], spec.label_space);
  HeadAnnotation sem = sem_view(pair.sem_doc.sentences[si], schemas[1], spec.label_space, &pair);
  if (attaches_soft_labels(spec)) {
    attach_relation_soft_labels(sci, schemas[0],
                                agreements_for(pair, si, sci.relations, Perspective::kSci));
    attach_relation_soft_labels(sem, schemas[1],
                                agreements_for(pair, si, sem.relations, Perspective::kSem));
  }
  if (spec.entity_soft_labels) {
    attach_entity_soft_labels(sci, schemas[0], &pair, Head::kSci);
    attach_entity_soft_labels(sem, schemas[1], &pair, Head::kSem);
  }
  ex.heads[0] = std::move(sci);
  ex.heads[1] = std::move(sem);
  return ex;
}

TrainingExample mixed_example(const AlignedDocument& pair, std::size_t si, ConflictPolicy policy) {
  TrainingExample ex = base_example(pair.sci_doc, si);
  const Sentence& sci_s = pair.sci_doc.sentences[si];
  const Sentence& sem_s = pair.sem_doc.sentences[si];
  HeadAnnotation merged = sci_view(sci_s, schema::scierc_common(), LabelSpace::kCommonUntyped);
  HeadAnnotation sem = sem_in_sci_space(sem_s);

  // Entities: one per distinct span; SemEval ids alias onto SciERC ids.
  std::unordered_map<std::string, std::string> alias;
  for (const auto& e : sem.entities) {
    auto same = std::find_if(merged.entities.begin(), merged.entities.end(),
                             [&](const EntityMention& m) { return m.span == e.span; });
    if (same != merged.entities.end()) {
      alias[e.id] = same->id;
    } else {
      alias[e.id] = e.id;
      merged.entities.push_back(e);
    }
  }

  // Relations removed on account of the verdicts. Each verdict names the
  // original (unmapped) relation; compare on endpoints and label.
  std::multiset<std::tuple<std::string, std::string, std::string>> drop_sem, drop_sci;
  for (const auto& v : pair.relation_verdicts) {
    if (v.sentence != si || !v.sci_relation || !v.sem_relation) continue;
    const auto sem_key = std::make_tuple(v.sem_relation->head, v.sem_relation->tail,
                                         v.sem_relation->relation_type);
    const auto sci_key = std::make_tuple(v.sci_relation->head, v.sci_relation->tail,
                                         v.sci_relation->relation_type);
    if (v.agreement == Agreement::kHigh) {
      drop_sem.insert(sem_key);
    } else if (v.agreement == Agreement::kLow) {
      if (policy == ConflictPolicy::kPreferSci) drop_sem.insert(sem_key);
      if (policy == ConflictPolicy::kPreferSem) drop_sci.insert(sci_key);
    }
  }
  auto consume = [](auto& bag, const auto& key) {
    auto it = bag.find(key);
    if (it == bag.end()) return false;
    bag.erase(it);
    return true;
  };

  std::vector<RelationMention> rels;
  for (const auto& r : merged.relations)
    if (!consume(drop_sci, std::make_tuple(r.head, r.tail, r.relation_type))) rels.push_back(r);
  for (const auto& orig : sem_s.relations) {
    const auto mapped = map_relation_label(orig.relation_type, MapDirection::kSemToSci);
    if (!mapped) continue;
    if (consume(drop_sem, std::make_tuple(orig.head, orig.tail, orig.relation_type))) continue;
    rels.push_back({alias.at(orig.head), alias.at(orig.tail), *mapped, Perspective::kSci});
  }
  // Identical endpoints and label collapse to one relation.
  std::vector<RelationMention> unique;
  for (auto& r : rels)
    if (std::find(unique.begin(), unique.end(), r) == unique.end()) unique.push_back(std::move(r));
  merged.relations = std::move(unique);
  ex.heads[0] = std::move(merged);
  return ex;
}

}  // namespace

std::string_view to_string(Strategy s) {
  for (const auto& n : kStrategyNames)
    if (n.strategy == s) return n.name;
  return "?";
}

Strategy strategy_from_string(std::string_view s) {
  for (const auto& n : kStrategyNames)
    if (n.name == s) return n.strategy;
  throw Error("unknown strategy '" + std::string(s) + "'");
}

std::array<LabelSchema, kNumHeads> head_schemas(LabelSpace space) {
  if (space == LabelSpace::kCommonUntyped) return {schema::scierc_common(), schema::semeval_common()};
  return {schema::scierc_full(), schema::semeval_typed_variation()};
}

bool uses_both_heads(Strategy s) {
  return s == Strategy::kMtl || s == Strategy::kMtlSoft || s == Strategy::kSciercStandard;
}

bool attaches_soft_labels(const SplitSpec& spec) {
  return spec.soft_labels || spec.strategy == Strategy::kMtlSoft;
}

bool may_evaluate_on(Strategy s, Perspective test_set) {
  if (s == Strategy::kConcatPlusSci) return test_set != Perspective::kSci;
  if (s == Strategy::kConcatPlusSem) return test_set != Perspective::kSem;
  return true;
}

std::vector<TrainingExample> build_training_set(const std::vector<AlignedDocument>& aligned,
                                                const Extras* extras, const SplitSpec& spec) {
  const auto schemas = head_schemas(spec.label_space);
  std::vector<TrainingExample> out;
  auto each_sentence = [&](auto&& fn) {
    for (const auto& pair : aligned)
      for (std::size_t si = 0; si < pair.sci_doc.sentences.size(); ++si) fn(pair, si);
  };

  switch (spec.strategy) {
    case Strategy::kIndependentSci:
      each_sentence([&](const AlignedDocument& pair, std::size_t si) {
        TrainingExample ex = base_example(pair.sci_doc, si);
        ex.heads[0] = sci_view(pair.sci_doc.sentences[si], schemas[0], spec.label_space);
        if (spec.entity_soft_labels)
          attach_entity_soft_labels(*ex.heads[0], schemas[0], &pair, Head::kSci);
        out.push_back(std::move(ex));
      });
      break;
    case Strategy::kIndependentSem:
      require_common(spec);
      each_sentence([&](const AlignedDocument& pair, std::size_t si) {
        TrainingExample ex = base_example(pair.sci_doc, si);
        ex.heads[0] = sem_in_sci_space(pair.sem_doc.sentences[si]);
        out.push_back(std::move(ex));
      });
      break;
    case Strategy::kConcat:
    case Strategy::kConcatPlusSci:
    case Strategy::kConcatPlusSem:
      require_common(spec);
      each_sentence([&](const AlignedDocument& pair, std::size_t si) {
        TrainingExample a = base_example(pair.sci_doc, si);
        a.heads[0] = sci_view(pair.sci_doc.sentences[si], schemas[0], spec.label_space);
        TrainingExample b = base_example(pair.sci_doc, si);
        b.heads[0] = sem_in_sci_space(pair.sem_doc.sentences[si]);
        out.push_back(std::move(a));
        out.push_back(std::move(b));
      });
      if (spec.strategy != Strategy::kConcat) {
        if (!extras) throw Error(std::string(to_string(spec.strategy)) + " needs the extra corpus");
        const bool sci = spec.strategy == Strategy::kConcatPlusSci;
        auto extra = gold_examples(sci ? extras->sci_only : extras->sem_only,
                                   sci ? Perspective::kSci : Perspective::kSem,
                                   spec.label_space, true);
        for (auto& ex : extra) out.push_back(std::move(ex));
      }
      break;
    case Strategy::kMixed:
    case Strategy::kMixedSci:
    case Strategy::kMixedSem: {
      require_common(spec);
      const ConflictPolicy policy = spec.strategy == Strategy::kMixedSci   ? ConflictPolicy::kPreferSci
                                    : spec.strategy == Strategy::kMixedSem ? ConflictPolicy::kPreferSem
                                                                           : spec.conflict_policy;
      each_sentence([&](const AlignedDocument& pair, std::size_t si) {
        out.push_back(mixed_example(pair, si, policy));
      });
      break;
    }
    case Strategy::kMtl:
    case Strategy::kMtlSoft:
      each_sentence([&](const AlignedDocument& pair, std::size_t si) {
        out.push_back(mtl_example(pair, si, spec, schemas));
      });
      break;
    case Strategy::kSciercStandard:
      throw Error("SCIERC_STANDARD sets are built by build_scierc_standard_split");
  }
  if (spec.cap) return cap_data_quantity(out, *spec.cap, spec.seed);
  return out;
}

std::vector<TrainingExample> gold_examples(const std::vector<Document>& docs,
                                           Perspective source, LabelSpace space,
                                           bool into_sci_space) {
  const auto schemas = head_schemas(space);
  if (source == Perspective::kSem && into_sci_space && space != LabelSpace::kCommonUntyped)
    throw Error("SemEval gold maps onto the SciERC head only in the common label space");
  std::vector<TrainingExample> out;
  for (const auto& doc : docs) {
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      TrainingExample ex = base_example(doc, si);
      const Sentence& s = doc.sentences[si];
      if (source == Perspective::kSci)
        ex.heads[0] = sci_view(s, schemas[0], space);
      else if (into_sci_space)
        ex.heads[0] = sem_in_sci_space(s);
      else
        ex.heads[1] = sem_view(s, schemas[1], space, nullptr);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

StandardSplit build_scierc_standard_split(const std::vector<Document>& sci_corpus,
                                          const OverlapResult& overlap,
                                          const std::map<std::string, Partition>& partition,
                                          const SplitSpec& spec) {
  if (partition.empty()) throw Error("SciERC partition missing");
  SplitSpec s = spec;
  s.label_space = LabelSpace::kFull;
  const auto schemas = head_schemas(LabelSpace::kFull);
  std::unordered_map<std::string, const AlignedDocument*> by_sci_id;
  for (const auto& a : overlap.aligned) by_sci_id[a.sci_doc.doc_id] = &a;

  StandardSplit out;
  for (const auto& doc : sci_corpus) {
    auto part = partition.find(doc.doc_id);
    if (part == partition.end()) throw Error("SciERC partition has no entry for " + doc.doc_id);
    const AlignedDocument* pair = nullptr;
    if (auto it = by_sci_id.find(doc.doc_id); it != by_sci_id.end()) pair = it->second;

    if (part->second == Partition::kTest) {
      if (pair) ++out.overlapped_test_abstracts;
      for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
        TrainingExample ex = base_example(doc, si);
        ex.heads[0] = sci_view(doc.sentences[si], schemas[0], LabelSpace::kFull);
        out.test.push_back(std::move(ex));
      }
      continue;
    }
    if (pair && uses_both_heads(spec.strategy)) {
      ++out.dual_head_abstracts;
      for (std::size_t si = 0; si < pair->sci_doc.sentences.size(); ++si)
        out.train.push_back(mtl_example(*pair, si, s, schemas));
      continue;
    }
    ++out.single_head_abstracts;
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      TrainingExample ex = base_example(doc, si);
      HeadAnnotation a = sci_view(doc.sentences[si], schemas[0], LabelSpace::kFull);
      if (attaches_soft_labels(s))
        attach_relation_soft_labels(a, schemas[0],
                                    std::vector<Agreement>(a.relations.size(), Agreement::kMedium));
      ex.heads[0] = std::move(a);
      out.train.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  // Fisher-Yates on raw engine output; the engine sequence is fixed by the
  // standard, unlike the distribution adaptors.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  return perm;
}

std::vector<TrainingExample> cap_data_quantity(const std::vector<TrainingExample>& examples,
                                               std::size_t n, std::uint64_t seed) {
  if (n > examples.size())
    throw Error("cannot cap " + std::to_string(examples.size()) + " examples to " +
                std::to_string(n));
  std::vector<std::size_t> keep = seeded_permutation(examples.size(), seed);
  keep.resize(n);
  std::sort(keep.begin(), keep.end());
  std::vector<TrainingExample> out;
  out.reserve(n);
  for (auto i : keep) out.push_back(examples[i]);
  return out;
}

Document to_document(const TrainingExample& ex) {
  Document d;
  d.doc_id = ex.doc_id + "#" + std::to_string(ex.sentence_index);
  d.source = ex.has(Head::kSci) ? Source::kScierc : Source::kSemeval;
  d.raw_text = ex.text;
  Sentence s;
  s.tokens = ex.tokens;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    if (!ex.heads[h]) continue;
    const Perspective p = h == 0 ? Perspective::kSci : Perspective::kSem;
    d.perspectives.push_back(p);
    const HeadAnnotation& a = *ex.heads[h];
    const std::size_t ent_base = s.entities.size();
    const std::size_t rel_base = s.relations.size();
    for (auto e : a.entities) {
      e.perspective = p;
      s.entities.push_back(std::move(e));
    }
    for (auto r : a.relations) {
      r.perspective = p;
      s.relations.push_back(std::move(r));
    }
    for (const auto& sl : a.relation_soft_labels)
      d.soft_labels.push_back({0, rel_base + sl.index, false, sl.label.agreement, sl.label.size(),
                               sl.label.target_class});
    for (const auto& sl : a.entity_soft_labels)
      d.soft_labels.push_back({0, ent_base + sl.index, true, sl.label.agreement, sl.label.size(),
                               sl.label.target_class});
  }
  d.sentences.push_back(std::move(s));
  return d;
}

TrainingExample from_document(const Document& doc) {
  if (doc.sentences.size() != 1)
    throw Error("training record " + doc.doc_id + " must hold exactly one sentence");
  TrainingExample ex;
  const auto hash = doc.doc_id.rfind('#');
  if (hash == std::string::npos) throw Error("training record id '" + doc.doc_id + "' lacks '#'");
  ex.doc_id = doc.doc_id.substr(0, hash);
  ex.sentence_index = std::stoul(doc.doc_id.substr(hash + 1));
  ex.text = doc.raw_text;
  const Sentence& s = doc.sentences.front();
  ex.tokens = s.tokens;

  std::vector<Perspective> present = doc.perspectives;
  if (present.empty()) {
    for (const auto& e : s.entities)
      if (std::find(present.begin(), present.end(), e.perspective) == present.end())
        present.push_back(e.perspective);
  }
  std::vector<std::size_t> ent_local(s.entities.size()), rel_local(s.relations.size());
  for (auto p : present) {
    HeadAnnotation a;
    for (std::size_t i = 0; i < s.entities.size(); ++i)
      if (s.entities[i].perspective == p) {
        ent_local[i] = a.entities.size();
        a.entities.push_back(s.entities[i]);
      }
    for (std::size_t i = 0; i < s.relations.size(); ++i)
      if (s.relations[i].perspective == p) {
        rel_local[i] = a.relations.size();
        a.relations.push_back(s.relations[i]);
      }
    ex.heads[p == Perspective::kSci ? 0 : 1] = std::move(a);
  }
  for (const auto& ref : doc.soft_labels) {
    const Perspective p = ref.on_entity ? s.entities.at(ref.relation).perspective
                                        : s.relations.at(ref.relation).perspective;
    auto& head = ex.heads[p == Perspective::kSci ? 0 : 1];
    if (!head) throw Error("soft label on an absent head in " + doc.doc_id);
    if (ref.on_entity)
      head->entity_soft_labels.push_back({ent_local[ref.relation], make_soft_label(ref)});
    else
      head->relation_soft_labels.push_back({rel_local[ref.relation], make_soft_label(ref)});
  }
  return ex;
}

std::size_t relation_count(const std::vector<TrainingExample>& examples, Head h) {
  std::size_t n = 0;
  for (const auto& ex : examples)
    if (ex.has(h)) n += ex.at(h).relations.size();
  return n;
}

}  // namespace lvsie
