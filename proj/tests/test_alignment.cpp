#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lvsie/alignment.hpp"

using namespace lvsie;

namespace {

std::vector<Agreement> verdicts(const AlignedDocument& d) {
  std::vector<Agreement> out;
  for (const auto& v : d.relation_verdicts) out.push_back(v.agreement);
  return out;
}

Document one_sentence(const std::string& id, Source src, std::vector<std::string> words,
                      std::vector<EntityMention> ents, Perspective p) {
  Document d;
  d.doc_id = id;
  d.source = src;
  Sentence s;
  std::size_t at = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    s.tokens.push_back({i, words[i], at, at + words[i].size()});
    d.raw_text += (i ? " " : "") + words[i];
    at += words[i].size() + 1;
  }
  for (auto& e : ents) e.perspective = p;
  s.entities = std::move(ents);
  d.sentences.push_back(std::move(s));
  return d;
}

}  // namespace

TEST(FourDocs, FourExamplesAlign) {
  const auto t = fixtures::load_four_docs();
  EXPECT_EQ(t.overlap.aligned.size(), 4u);
  EXPECT_TRUE(t.overlap.sem_only.empty());
  EXPECT_TRUE(t.overlap.sci_only.empty());
}

TEST(FourDocs, AgreementLevels) {
  const auto t = fixtures::load_four_docs();
  const auto& a = t.overlap.aligned;
  EXPECT_EQ(verdicts(a[0]), (std::vector<Agreement>{Agreement::kHigh}));
  EXPECT_EQ(verdicts(a[1]), (std::vector<Agreement>{Agreement::kLow}));
  EXPECT_EQ(verdicts(a[2]), (std::vector<Agreement>{Agreement::kMedium}));
  EXPECT_EQ(verdicts(a[3]), (std::vector<Agreement>{Agreement::kMedium, Agreement::kMedium}));
}

TEST(FourDocs, ConflictedEntityIsPartial) {
  const auto t = fixtures::load_four_docs();
  const AlignedDocument& ex3 = t.overlap.aligned[2];
  ASSERT_EQ(ex3.entity_matches.size(), 1u);
  EXPECT_EQ(ex3.entity_matches[0].kind, MatchKind::kPartial);
  EXPECT_EQ(ex3.entity_matches[0].sem_id, "T3.1");
}

TEST(AlignEntities, ExactPartialAndNone) {
  auto run = [](Span sem, Span sci) {
    const std::vector<std::string> w{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
    AlignedDocument p = project_pair(
        one_sentence("S", Source::kSemeval, w, {{"s1", sem, "X", {}}}, Perspective::kSem),
        one_sentence("C", Source::kScierc, w, {{"c1", sci, "Method", {}}}, Perspective::kSci));
    return align_entities(std::move(p)).entity_matches;
  };
  auto exact = run({4, 6}, {4, 6});
  ASSERT_EQ(exact.size(), 1u);
  EXPECT_EQ(exact[0].kind, MatchKind::kExact);
  auto partial = run({4, 9}, {4, 5});
  ASSERT_EQ(partial.size(), 1u);
  EXPECT_EQ(partial[0].kind, MatchKind::kPartial);
  EXPECT_TRUE(run({1, 2}, {5, 6}).empty());
}

TEST(AlignEntities, EachEntityMatchedAtMostOnce) {
  const fixtures::Aligned a = fixtures::synthetic_aligned(10, 3, 3);
  for (const auto& d : a.overlap.aligned) {
    std::set<std::string> sem, sci;
    for (const auto& m : d.entity_matches) {
      EXPECT_TRUE(sem.insert(m.sem_id).second);
      EXPECT_TRUE(sci.insert(m.sci_id).second);
    }
  }
}

TEST(AssignAgreements, EveryRelationGetsOneVerdict) {
  const fixtures::Aligned a = fixtures::synthetic_aligned(10, 3, 5);
  for (const auto& d : a.overlap.aligned) {
    std::size_t sci = 0, sem = 0;
    for (const auto& v : d.relation_verdicts) {
      sci += v.sci_relation.has_value();
      sem += v.sem_relation.has_value();
      if (v.agreement == Agreement::kMedium)
        EXPECT_NE(v.sci_relation.has_value(), v.sem_relation.has_value());
      else
        EXPECT_TRUE(v.sci_relation && v.sem_relation);
    }
    EXPECT_EQ(sci, d.sci_doc.relation_count());
    EXPECT_EQ(sem, d.sem_doc.relation_count());
  }
}

TEST(FindOverlaps, DisjointAndWhitespaceVariants) {
  const auto a = one_sentence("S", Source::kSemeval, {"alpha", "beta"}, {}, Perspective::kSem);
  const auto b = one_sentence("C", Source::kScierc, {"gamma"}, {}, Perspective::kSci);
  const OverlapResult none = find_overlaps({a}, {b});
  EXPECT_TRUE(none.aligned.empty());
  EXPECT_EQ(none.sem_only.size(), 1u);
  EXPECT_EQ(none.sci_only.size(), 1u);

  Document spaced = a;
  spaced.raw_text = "alpha    beta";
  spaced.sentences[0].tokens[1].char_start = 9;
  spaced.sentences[0].tokens[1].char_end = 13;
  Document sci = a;
  sci.doc_id = "C";
  sci.source = Source::kScierc;
  EXPECT_EQ(find_overlaps({spaced}, {sci}).aligned.size(), 1u);
}

TEST(FindOverlaps, AmbiguousPartnerIsAnError) {
  const auto a = one_sentence("S", Source::kSemeval, {"alpha"}, {}, Perspective::kSem);
  auto b = one_sentence("C1", Source::kScierc, {"alpha"}, {}, Perspective::kSci);
  auto c = b;
  c.doc_id = "C2";
  EXPECT_THROW(find_overlaps({a}, {b, c}), Error);
}

TEST(Cooccurrence, ScoreIsCountOverMarginals) {
  CooccurrenceTable t;
  t.pair_counts[{"Method", "Method", "Compare"}] = 3;
  t.arg1_counts["Method"] = 10;
  t.arg2_counts["Method"] = 5;
  EXPECT_DOUBLE_EQ(cooccurrence_score(t, "Method", "Method", "Compare"), 0.2);
  EXPECT_DOUBLE_EQ(cooccurrence_score(t, "Method", "Method", "Used-for"), 0.0);
  EXPECT_THROW(cooccurrence_score(t, "Task", "Task", "Compare"), Error);
}

TEST(Cooccurrence, CountsMatchRelations) {
  const fixtures::Aligned a = fixtures::synthetic_aligned(8, 3, 9);
  for (auto p : {Perspective::kSci, Perspective::kSem}) {
    const CooccurrenceTable t = build_cooccurrence(a.overlap.aligned, p);
    std::size_t total = 0;
    for (const auto& [k, n] : t.pair_counts) total += n;
    EXPECT_EQ(total, t.total_relations);
    std::size_t rels = 0;
    for (const auto& d : a.overlap.aligned) rels += (p == Perspective::kSci ? d.sci_doc : d.sem_doc).relation_count();
    EXPECT_EQ(t.total_relations, rels);
  }
}

TEST(OverlapStatistics, FourDocCounts) {
  const auto t = fixtures::load_four_docs();
  const OverlapReport r = overlap_statistics(t.overlap);
  EXPECT_EQ(r.aligned_documents, 4u);
  EXPECT_EQ(r.sem.entities, 8u);
  EXPECT_EQ(r.sci.entities, 9u);
  EXPECT_EQ(r.sem.relations, 3u);
  EXPECT_EQ(r.sci.relations, 4u);
  EXPECT_EQ(r.high, 1u);
  EXPECT_EQ(r.low, 1u);
  EXPECT_EQ(r.medium, 3u);
}
