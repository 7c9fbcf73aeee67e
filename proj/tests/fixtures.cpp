#include "fixtures.hpp"

#include <map>
#include <stdexcept>

#include "lvsie/synthetic.hpp"

namespace lvsie::fixtures {

namespace {

const std::map<std::string, std::string> kSemToSci{
    {"Usage", "Used-for"},   {"Comparison", "Compare"}, {"Model", "Feature-of"},
    {"Part-whole", "Part-of"}, {"Result", "Evaluate-for"},
};
const std::set<std::string> kSciMapped{"Used-for", "Compare", "Feature-of", "Part-of", "Evaluate-for"};

Span span_of(const Sentence& s, const std::string& id) {
  const EntityMention* e = s.find_entity(id);
  if (!e) throw std::logic_error("dangling entity id " + id);
  return e->span;
}

Agreement verdict(const AlignedDocument& pair, std::size_t si, const RelationMention& r) {
  for (const auto& v : pair.relation_verdicts) {
    if (v.sentence != si) continue;
    if (r.perspective == Perspective::kSci && v.sci_relation && *v.sci_relation == r) return v.agreement;
    if (r.perspective == Perspective::kSem && v.sem_relation && *v.sem_relation == r) return v.agreement;
  }
  throw std::logic_error("relation without a verdict");
}

}  // namespace

std::string four_docs_semeval_xml() {
  return R"(<?xml version="1.0" encoding="UTF-8"?>
<doc>
<text id="T1">
<title>Example one</title>
<abstract>The <entity id="T1.1">system</entity> is based on a <entity id="T1.2">multi-component architecture</entity> .</abstract>
</text>
<text id="T2">
<title>Example two</title>
<abstract><entity id="T2.1">semantics</entity> represented in a <entity id="T2.2">logical form language</entity> .</abstract>
</text>
<text id="T3">
<title>Example three</title>
<abstract>This paper introduces a <entity id="T3.1">system for categorizing unknown words</entity> .</abstract>
</text>
<text id="T4">
<title>Example four</title>
<abstract>We propose a <entity id="T4.1">detection method</entity> for orthographic variants caused by <entity id="T4.2">transliteration</entity> in a large <entity id="T4.3">corpus</entity> .</abstract>
</text>
</doc>
)";
}

std::string four_docs_semeval_relations() {
  return "USAGE(T1.1,T1.2,REVERSE)\n"
         "MODEL-FEATURE(T2.1,T2.2,REVERSE)\n"
         "PART_WHOLE(T4.2,T4.3)\n";
}

std::string four_docs_scierc_jsonl() {
  return R"({"doc_key":"P1","sentences":[["The","system","is","based","on","a","multi-component","architecture","."]],"ner":[[[1,1,"Method"],[6,7,"Method"]]],"relations":[[[6,7,1,1,"USED-FOR"]]]}
{"doc_key":"P2","sentences":[["semantics","represented","in","a","logical","form","language","."]],"ner":[[[0,0,"OtherScientificTerm"],[4,6,"Method"]]],"relations":[[[4,6,0,0,"USED-FOR"]]]}
{"doc_key":"P3","sentences":[["This","paper","introduces","a","system","for","categorizing","unknown","words","."]],"ner":[[[4,4,"Method"],[6,8,"Task"]]],"relations":[[[6,8,4,4,"USED-FOR"]]]}
{"doc_key":"P4","sentences":[["We","propose","a","detection","method","for","orthographic","variants","caused","by","transliteration","in","a","large","corpus","."]],"ner":[[[3,4,"Method"],[6,7,"OtherScientificTerm"],[10,10,"OtherScientificTerm"]]],"relations":[[[6,7,3,4,"USED-FOR"]]]}
)";
}

FourDocs load_four_docs() {
  FourDocs t;
  t.sem = parse_semeval(four_docs_semeval_xml(), four_docs_semeval_relations());
  t.sci = parse_scierc(four_docs_scierc_jsonl());
  t.overlap = align_corpora(t.sem.documents, t.sci.documents);
  return t;
}

Aligned synthetic_aligned(std::size_t overlapped, std::size_t sentences, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.overlapped = overlapped;
  spec.sentences_per_doc = sentences;
  spec.seed = seed;
  const SyntheticCorpus c = generate_synthetic(spec);
  Aligned a;
  a.sem = parse_semeval(c.semeval_xml, c.semeval_relations);
  a.sci = parse_scierc(c.scierc_jsonl);
  a.overlap = align_corpora(a.sem.documents, a.sci.documents);
  return a;
}

std::set<RelKey> oracle_mixed(const OverlapResult& o, Strategy s) {
  std::set<RelKey> out;
  for (const auto& pair : o.aligned) {
    for (std::size_t si = 0; si < pair.sci_doc.sentences.size(); ++si) {
      const Sentence& sci = pair.sci_doc.sentences[si];
      const Sentence& sem = pair.sem_doc.sentences[si];
      for (const auto& r : sci.relations) {
        if (!kSciMapped.count(r.relation_type)) continue;
        if (s == Strategy::kMixedSem && verdict(pair, si, r) == Agreement::kLow) continue;
        out.insert({pair.sci_doc.doc_id, si, span_of(sci, r.head), span_of(sci, r.tail), r.relation_type});
      }
      for (const auto& r : sem.relations) {
        auto it = kSemToSci.find(r.relation_type);
        if (it == kSemToSci.end()) continue;
        if (s == Strategy::kMixedSci && verdict(pair, si, r) == Agreement::kLow) continue;
        out.insert({pair.sci_doc.doc_id, si, span_of(sem, r.head), span_of(sem, r.tail), it->second});
      }
    }
  }
  return out;
}

std::multiset<RelKey> oracle_concat(const OverlapResult& o) {
  std::multiset<RelKey> out;
  for (const auto& pair : o.aligned) {
    for (std::size_t si = 0; si < pair.sci_doc.sentences.size(); ++si) {
      const Sentence& sci = pair.sci_doc.sentences[si];
      const Sentence& sem = pair.sem_doc.sentences[si];
      for (const auto& r : sci.relations)
        if (kSciMapped.count(r.relation_type))
          out.insert({pair.sci_doc.doc_id, si, span_of(sci, r.head), span_of(sci, r.tail), r.relation_type});
      for (const auto& r : sem.relations) {
        auto it = kSemToSci.find(r.relation_type);
        if (it != kSemToSci.end())
          out.insert({pair.sci_doc.doc_id, si, span_of(sem, r.head), span_of(sem, r.tail), it->second});
      }
    }
  }
  return out;
}

std::multiset<RelKey> relation_keys(const std::vector<TrainingExample>& examples, Head h) {
  std::multiset<RelKey> out;
  for (const auto& ex : examples) {
    if (!ex.has(h)) continue;
    const HeadAnnotation& a = ex.at(h);
    auto span = [&](const std::string& id) {
      for (const auto& e : a.entities)
        if (e.id == id) return e.span;
      throw std::logic_error("dangling entity id " + id);
    };
    for (const auto& r : a.relations)
      out.insert({ex.doc_id, ex.sentence_index, span(r.head), span(r.tail), r.relation_type});
  }
  return out;
}

std::vector<TrainingExample> overfit_corpus(bool soft) {
  const Aligned a = synthetic_aligned(2, 3, 7);
  SplitSpec spec;
  spec.strategy = soft ? Strategy::kMtlSoft : Strategy::kMtl;
  auto examples = build_training_set(a.overlap.aligned, nullptr, spec);
  examples.resize(5);
  return examples;
}

ModelConfig tiny_model_config(bool soft, Divergence d) {
  ModelConfig c;
  c.soft_labels = soft;
  c.divergence = d;
  c.encoder.vocab_buckets = 64;
  c.encoder.embed_dim = 4;
  c.encoder.hidden_dim = 3;
  c.width_dim = 3;
  c.max_span_width = 4;
  c.neg_entities = 6;
  c.neg_relations = 4;
  c.seed = 5;
  return c;
}

}  // namespace lvsie::fixtures
