#include "lvsie/alignment.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "lvsie/tokenize.hpp"

namespace lvsie {

const EntityMatch* AlignedDocument::match_for_sem(std::string_view sem_id) const {
  for (const auto& m : entity_matches)
    if (m.sem_id == sem_id) return &m;
  return nullptr;
}

const EntityMatch* AlignedDocument::match_for_sci(std::string_view sci_id) const {
  for (const auto& m : entity_matches)
    if (m.sci_id == sci_id) return &m;
  return nullptr;
}

AlignedDocument project_pair(const Document& sem, const Document& sci) {
  AlignedDocument out;
  out.sci_doc = sci;
  out.sem_source = sem;
  out.sem_doc.doc_id = sem.doc_id;
  out.sem_doc.source = sem.source;
  out.sem_doc.raw_text = sci.raw_text;
  for (const auto& s : sci.sentences) {
    Sentence copy;
    copy.tokens = s.tokens;
    out.sem_doc.sentences.push_back(std::move(copy));
  }
  for (std::size_t i = 0; i < sci.sentences.size(); ++i) out.sentence_alignment.emplace_back(i, i);

  const std::vector<std::size_t> sem_skel = skeleton_offsets(sem.raw_text);
  const std::vector<std::size_t> sci_skel = skeleton_offsets(sci.raw_text);

  // Skeleton range of every SciERC token, with its sentence.
  struct GridToken {
    std::size_t sentence, index, lo, hi;
  };
  std::vector<GridToken> grid;
  for (std::size_t si = 0; si < sci.sentences.size(); ++si)
    for (const auto& t : sci.sentences[si].tokens)
      grid.push_back({si, t.index, sci_skel[t.char_start], sci_skel[t.char_end]});

  std::unordered_map<std::string, std::size_t> new_sentence;
  for (const auto& s : sem.sentences) {
    for (const auto& e : s.entities) {
      const std::size_t lo = sem_skel[s.tokens[e.span.start].char_start];
      const std::size_t hi = sem_skel[s.tokens[e.span.end - 1].char_end];
      std::optional<std::size_t> sent;
      std::size_t first = std::numeric_limits<std::size_t>::max(), last = 0;
      bool split = false;
      for (const auto& g : grid) {
        if (g.lo >= g.hi || g.hi <= lo || g.lo >= hi) continue;
        if (sent && *sent != g.sentence) split = true;
        sent = g.sentence;
        first = std::min(first, g.index);
        last = std::max(last, g.index + 1);
      }
      if (!sent || split) {
        ++out.dropped_sem_entities;
        continue;
      }
      EntityMention moved = e;
      moved.span = {first, last};
      out.sem_doc.sentences[*sent].entities.push_back(std::move(moved));
      new_sentence[e.id] = *sent;
    }
  }
  for (const auto& s : sem.sentences) {
    for (const auto& r : s.relations) {
      auto h = new_sentence.find(r.head);
      auto t = new_sentence.find(r.tail);
      if (h == new_sentence.end() || t == new_sentence.end() || h->second != t->second) {
        ++out.dropped_sem_relations;
        continue;
      }
      out.sem_doc.sentences[h->second].relations.push_back(r);
    }
  }
  return out;
}

OverlapResult find_overlaps(const std::vector<Document>& sem_corpus,
                            const std::vector<Document>& sci_corpus) {
  std::unordered_map<std::string, std::vector<std::size_t>> sem_by_key, sci_by_key;
  std::vector<std::string> sem_keys, sci_keys;
  for (std::size_t i = 0; i < sem_corpus.size(); ++i) {
    sem_keys.push_back(normalize_for_matching(sem_corpus[i].raw_text));
    sem_by_key[sem_keys.back()].push_back(i);
  }
  for (std::size_t i = 0; i < sci_corpus.size(); ++i) {
    sci_keys.push_back(normalize_for_matching(sci_corpus[i].raw_text));
    sci_by_key[sci_keys.back()].push_back(i);
  }

  auto ambiguity = [](const std::vector<Document>& a, const std::vector<std::size_t>& ai,
                      const std::vector<Document>& b, const std::vector<std::size_t>& bi) {
    std::string ids;
    for (auto i : ai) ids += " " + a[i].doc_id;
    for (auto i : bi) ids += " " + b[i].doc_id;
    return Error("ambiguous overlap: normalized text shared by" + ids);
  };

  OverlapResult out;
  std::vector<bool> sem_used(sem_corpus.size(), false);
  for (std::size_t i = 0; i < sci_corpus.size(); ++i) {
    if (sci_keys[i].empty()) {
      out.sci_only.push_back(sci_corpus[i]);
      continue;
    }
    auto it = sem_by_key.find(sci_keys[i]);
    if (it == sem_by_key.end()) {
      out.sci_only.push_back(sci_corpus[i]);
      continue;
    }
    const auto& partners = it->second;
    const auto& twins = sci_by_key.at(sci_keys[i]);
    if (partners.size() > 1 || twins.size() > 1)
      throw ambiguity(sem_corpus, partners, sci_corpus, twins);
    sem_used[partners.front()] = true;
    out.aligned.push_back(project_pair(sem_corpus[partners.front()], sci_corpus[i]));
  }
  for (std::size_t i = 0; i < sem_corpus.size(); ++i)
    if (!sem_used[i]) out.sem_only.push_back(sem_corpus[i]);
  return out;
}

AlignedDocument align_entities(AlignedDocument pair) {
  pair.entity_matches.clear();
  const std::size_t n = std::min(pair.sem_doc.sentences.size(), pair.sci_doc.sentences.size());
  for (std::size_t si = 0; si < n; ++si) {
    const auto& sem = pair.sem_doc.sentences[si].entities;
    const auto& sci = pair.sci_doc.sentences[si].entities;
    struct Candidate {
      std::size_t overlap, union_len;
      Span lo_span, hi_span;
      std::size_t a, b;
    };
    std::vector<Candidate> cands;
    for (std::size_t a = 0; a < sem.size(); ++a) {
      for (std::size_t b = 0; b < sci.size(); ++b) {
        const std::size_t ov = sem[a].span.overlap(sci[b].span);
        if (ov == 0) continue;
        const std::size_t ul = std::max(sem[a].span.end, sci[b].span.end) -
                               std::min(sem[a].span.start, sci[b].span.start);
        const Span lo = std::min(sem[a].span, sci[b].span);
        const Span hi = std::max(sem[a].span, sci[b].span);
        cands.push_back({ov, ul, lo, hi, a, b});
      }
    }
    // The ordering key only looks at the pair of spans, so swapping the two
    // perspectives yields the same matching.
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      if (x.overlap != y.overlap) return x.overlap > y.overlap;
      if (x.union_len != y.union_len) return x.union_len < y.union_len;
      if (x.lo_span != y.lo_span) return x.lo_span < y.lo_span;
      return x.hi_span < y.hi_span;
    });
    std::vector<bool> used_a(sem.size(), false), used_b(sci.size(), false);
    for (const auto& c : cands) {
      if (used_a[c.a] || used_b[c.b]) continue;
      used_a[c.a] = used_b[c.b] = true;
      pair.entity_matches.push_back({si, sem[c.a].id, sci[c.b].id,
                                     sem[c.a].span == sci[c.b].span ? MatchKind::kExact
                                                                    : MatchKind::kPartial});
    }
  }
  return pair;
}

std::optional<std::string> shared_label(const RelationMention& r) {
  if (r.perspective == Perspective::kSem)
    return map_relation_label(r.relation_type, MapDirection::kSemToSci);
  if (map_relation_label(r.relation_type, MapDirection::kSciToSem)) return r.relation_type;
  return std::nullopt;
}

AlignedDocument assign_agreements(AlignedDocument pair) {
  pair.relation_verdicts.clear();
  std::unordered_map<std::string, std::string> sem_to_sci;
  for (const auto& m : pair.entity_matches)
    if (m.kind == MatchKind::kExact) sem_to_sci[m.sem_id] = m.sci_id;

  const std::size_t n = std::max(pair.sem_doc.sentences.size(), pair.sci_doc.sentences.size());
  for (std::size_t si = 0; si < n; ++si) {
    static const std::vector<RelationMention> kNone;
    const auto& sem = si < pair.sem_doc.sentences.size() ? pair.sem_doc.sentences[si].relations
                                                         : kNone;
    const auto& sci = si < pair.sci_doc.sentences.size() ? pair.sci_doc.sentences[si].relations
                                                         : kNone;
    // 0 = no shared entity pair, 1 = same pair reversed, 2 = same direction.
    auto pairing = [&](const RelationMention& a, const RelationMention& b) {
      auto h = sem_to_sci.find(a.head);
      auto t = sem_to_sci.find(a.tail);
      if (h == sem_to_sci.end() || t == sem_to_sci.end()) return 0;
      if (h->second == b.head && t->second == b.tail) return 2;
      if (h->second == b.tail && t->second == b.head) return 1;
      return 0;
    };
    auto agree = [](const RelationMention& a, const RelationMention& b) {
      const auto la = shared_label(a);
      const auto lb = shared_label(b);
      return la && lb && *la == *lb;
    };

    std::vector<bool> used_sem(sem.size(), false), used_sci(sci.size(), false);
    // Agreeing partners first (same direction before reversed), then conflicts.
    for (int pass = 0; pass < 4; ++pass) {
      const bool want_agree = pass < 2;
      const int want_dir = pass % 2 == 0 ? 2 : 1;
      for (std::size_t a = 0; a < sem.size(); ++a) {
        if (used_sem[a]) continue;
        for (std::size_t b = 0; b < sci.size(); ++b) {
          if (used_sci[b] || pairing(sem[a], sci[b]) != want_dir) continue;
          if (agree(sem[a], sci[b]) != want_agree) continue;
          used_sem[a] = used_sci[b] = true;
          pair.relation_verdicts.push_back(
              {si, sci[b], sem[a], want_agree ? Agreement::kHigh : Agreement::kLow});
          break;
        }
      }
    }
    for (std::size_t b = 0; b < sci.size(); ++b)
      if (!used_sci[b]) pair.relation_verdicts.push_back({si, sci[b], std::nullopt, Agreement::kMedium});
    for (std::size_t a = 0; a < sem.size(); ++a)
      if (!used_sem[a]) pair.relation_verdicts.push_back({si, std::nullopt, sem[a], Agreement::kMedium});
  }
  return pair;
}

OverlapResult align_corpora(const std::vector<Document>& sem_corpus,
                            const std::vector<Document>& sci_corpus) {
  OverlapResult r = find_overlaps(sem_corpus, sci_corpus);
  for (auto& a : r.aligned) a = assign_agreements(align_entities(std::move(a)));
  return r;
}

std::size_t CooccurrenceTable::count(const std::string& i, const std::string& j,
                                     const std::string& k) const {
  auto it = pair_counts.find({i, j, k});
  return it == pair_counts.end() ? 0 : it->second;
}

std::size_t CooccurrenceTable::n1(const std::string& i) const {
  auto it = arg1_counts.find(i);
  return it == arg1_counts.end() ? 0 : it->second;
}

std::size_t CooccurrenceTable::n2(const std::string& j) const {
  auto it = arg2_counts.find(j);
  return it == arg2_counts.end() ? 0 : it->second;
}

CooccurrenceTable build_cooccurrence(const std::vector<AlignedDocument>& aligned, Perspective p) {
  CooccurrenceTable table;
  table.perspective = p;
  table.entity_labels = schema::scierc_full().entity_types;
  if (p == Perspective::kSem) {
    table.entity_labels.emplace_back(kSemevalOnlyEntity);
    table.relation_labels = schema::semeval_full().relation_types;
  } else {
    table.relation_labels = schema::scierc_full().relation_types;
  }

  for (const auto& doc : aligned) {
    const Document& d = p == Perspective::kSci ? doc.sci_doc : doc.sem_doc;
    for (std::size_t si = 0; si < d.sentences.size(); ++si) {
      const Sentence& s = d.sentences[si];
      auto type_of = [&](const std::string& id) -> std::string {
        const EntityMention* e = s.find_entity(id);
        if (!e) return std::string(kSemevalOnlyEntity);
        if (p == Perspective::kSci) return e->entity_type;
        const EntityMatch* m = doc.match_for_sem(id);
        if (m && m->kind == MatchKind::kExact) {
          const EntityMention* partner = doc.sci_doc.sentences[m->sentence].find_entity(m->sci_id);
          if (partner) return partner->entity_type;
        }
        return std::string(kSemevalOnlyEntity);
      };
      for (const auto& r : s.relations) {
        const std::string i = type_of(r.head);
        const std::string j = type_of(r.tail);
        ++table.pair_counts[{i, j, r.relation_type}];
        ++table.arg1_counts[i];
        ++table.arg2_counts[j];
        ++table.total_relations;
      }
    }
  }
  return table;
}

double cooccurrence_score(const CooccurrenceTable& table, const std::string& i,
                          const std::string& j, const std::string& k) {
  const std::size_t denom = table.n1(i) + table.n2(j);
  if (denom == 0) throw Error("co-occurrence score undefined: no occurrences of " + i + "/" + j);
  return static_cast<double>(table.count(i, j, k)) / static_cast<double>(denom);
}

std::pair<std::string, std::string> cooccurrence_argmax(const CooccurrenceTable& table,
                                                        const std::string& k) {
  std::pair<std::string, std::string> best;
  double best_score = -1.0;
  for (const auto& i : table.entity_labels) {
    for (const auto& j : table.entity_labels) {
      if (table.n1(i) + table.n2(j) == 0) continue;
      const double s = cooccurrence_score(table, i, j, k);
      if (s > best_score) {
        best_score = s;
        best = {i, j};
      }
    }
  }
  return best;
}

OverlapReport overlap_statistics(const OverlapResult& overlap) {
  OverlapReport rep;
  rep.aligned_documents = overlap.aligned.size();
  rep.sem_only_documents = overlap.sem_only.size();
  rep.sci_only_documents = overlap.sci_only.size();
  const auto sci_order = schema::scierc_common().relation_types;
  auto tally = [&](PerspectiveCounts& c, const Document& d) {
    c.entities += d.entity_count();
    for (const auto& s : d.sentences) {
      for (const auto& r : s.relations) {
        ++c.relations;
        if (const auto lbl = shared_label(r)) {
          ++c.common_relations;
          const auto pos = std::find(sci_order.begin(), sci_order.end(), *lbl) - sci_order.begin();
          ++c.label_distribution[static_cast<std::size_t>(pos)];
        }
      }
    }
  };
  for (const auto& a : overlap.aligned) {
    rep.aligned_sentences += a.sci_doc.sentences.size();
    tally(rep.sci, a.sci_doc);
    // Entity and relation totals describe the original annotation, before
    // any projection loss.
    PerspectiveCounts tmp;
    tally(tmp, a.sem_source);
    rep.sem.entities += tmp.entities;
    rep.sem.relations += tmp.relations;
    rep.sem.common_relations += tmp.common_relations;
    for (std::size_t k = 0; k < 5; ++k) rep.sem.label_distribution[k] += tmp.label_distribution[k];
    rep.dropped_sem_entities += a.dropped_sem_entities;
    rep.dropped_sem_relations += a.dropped_sem_relations;
    for (const auto& v : a.relation_verdicts) {
      switch (v.agreement) {
        case Agreement::kHigh: ++rep.high; break;
        case Agreement::kMedium: ++rep.medium; break;
        case Agreement::kLow: ++rep.low; break;
      }
      if (v.sci_relation && v.sem_relation) {
        if (shared_label(*v.sci_relation)) ++rep.sci.common_matched_relations;
        if (shared_label(*v.sem_relation)) ++rep.sem.common_matched_relations;
      }
    }
  }
  return rep;
}

std::string overlap_report_to_json(const OverlapReport& r, int indent) {
  using ordered_json = nlohmann::ordered_json;
  const auto sci_labels = schema::scierc_common().relation_types;
  const auto sem_labels = schema::semeval_common().relation_types;
  auto side = [](const PerspectiveCounts& c, const std::vector<std::string>& labels) {
    ordered_json j;
    j["entities"] = c.entities;
    j["relations"] = c.relations;
    j["common_relations"] = c.common_relations;
    j["common_matched_relations"] = c.common_matched_relations;
    ordered_json dist;
    for (std::size_t k = 0; k < labels.size(); ++k) dist[labels[k]] = c.label_distribution[k];
    j["label_distribution"] = std::move(dist);
    return j;
  };
  ordered_json j;
  j["aligned_documents"] = r.aligned_documents;
  j["sem_only_documents"] = r.sem_only_documents;
  j["sci_only_documents"] = r.sci_only_documents;
  j["aligned_sentences"] = r.aligned_sentences;
  j["semeval"] = side(r.sem, sem_labels);
  j["scierc"] = side(r.sci, sci_labels);
  j["agreement"] = {{"HIGH", r.high}, {"MEDIUM", r.medium}, {"LOW", r.low}};
  j["dropped_sem_entities"] = r.dropped_sem_entities;
  j["dropped_sem_relations"] = r.dropped_sem_relations;
  return j.dump(indent);
}

}  // namespace lvsie
