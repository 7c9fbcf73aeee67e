#include "lvsie/evaluation.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace lvsie {

namespace {

constexpr std::string_view kScirexTypes[] = {"Method", "Task", "Metric", "Material"};

// One-to-one matching over hashable keys is a multiset intersection.
template <typename Key>
EvalResult match(Task task, const std::vector<std::vector<Key>>& pred,
                 const std::vector<std::vector<Key>>& gold) {
  if (pred.size() != gold.size())
    throw Error("prediction and gold sentence counts differ (" + std::to_string(pred.size()) +
                " vs " + std::to_string(gold.size()) + ")");
  std::size_t tp = 0, np = 0, ng = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::map<Key, std::size_t> bag;
    for (const auto& g : gold[i]) ++bag[g];
    for (const auto& p : pred[i]) {
      auto it = bag.find(p);
      if (it != bag.end() && it->second > 0) {
        --it->second;
        ++tp;
      }
    }
    np += pred[i].size();
    ng += gold[i].size();
  }
  return from_counts(task, tp, np - tp, ng - tp);
}

using EntityKey = std::tuple<std::size_t, std::size_t, std::string>;
using RelationKey =
    std::tuple<std::size_t, std::size_t, std::string, std::size_t, std::size_t, std::string,
               std::string>;

std::vector<EntityKey> entity_keys(const std::vector<EntityMention>& es, bool typed) {
  std::vector<EntityKey> out;
  for (const auto& e : es) out.emplace_back(e.span.start, e.span.end, typed ? e.entity_type : "");
  return out;
}

std::vector<RelationKey> relation_keys(const HeadAnnotation& a, bool boundaries_only) {
  std::vector<RelationKey> out;
  for (const auto& r : a.relations) {
    const EntityMention* h = nullptr;
    const EntityMention* t = nullptr;
    for (const auto& e : a.entities) {
      if (e.id == r.head) h = &e;
      if (e.id == r.tail) t = &e;
    }
    if (!h || !t) throw Error("relation endpoint " + (h ? r.tail : r.head) + " is not an entity");
    out.emplace_back(h->span.start, h->span.end, boundaries_only ? "" : h->entity_type,
                     t->span.start, t->span.end, boundaries_only ? "" : t->entity_type,
                     r.relation_type);
  }
  return out;
}

}  // namespace

std::string_view to_string(Task t) { return t == Task::kNer ? "NER" : "RE"; }

EvalResult from_counts(Task task, std::size_t tp, std::size_t fp, std::size_t fn) {
  EvalResult r;
  r.task = task;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

EvalResult score_ner(const std::vector<std::vector<EntityMention>>& pred,
                     const std::vector<std::vector<EntityMention>>& gold, bool typed) {
  std::vector<std::vector<EntityKey>> p, g;
  for (const auto& s : pred) p.push_back(entity_keys(s, typed));
  for (const auto& s : gold) g.push_back(entity_keys(s, typed));
  return match(Task::kNer, p, g);
}

EvalResult score_ner(const std::vector<EntityMention>& pred, const std::vector<EntityMention>& gold,
                     bool typed) {
  return score_ner(std::vector<std::vector<EntityMention>>{pred}, std::vector<std::vector<EntityMention>>{gold}, typed);
}

EvalResult score_re(const std::vector<HeadAnnotation>& pred, const std::vector<HeadAnnotation>& gold,
                    bool boundaries_only) {
  std::vector<std::vector<RelationKey>> p, g;
  for (const auto& s : pred) p.push_back(relation_keys(s, boundaries_only));
  for (const auto& s : gold) g.push_back(relation_keys(s, boundaries_only));
  return match(Task::kRe, p, g);
}

EvalResult score_re(const HeadAnnotation& pred, const HeadAnnotation& gold, bool boundaries_only) {
  return score_re(std::vector{pred}, std::vector{gold}, boundaries_only);
}

EvalResult average_over_seeds(const std::vector<EvalResult>& results) {
  if (results.empty()) throw Error("cannot average zero results");
  EvalResult out;
  out.task = results.front().task;
  for (const auto& r : results) {
    if (r.task != out.task) throw Error("cannot average NER and RE results together");
    out.precision += r.precision;
    out.recall += r.recall;
    out.f1 += r.f1;
    out.tp += r.tp;
    out.fp += r.fp;
    out.fn += r.fn;
  }
  const double n = static_cast<double>(results.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  out.per_seed = results;
  return out;
}

EvalResult average_sets(const EvalResult& sem_result, const EvalResult& sci_result) {
  if (sem_result.task != sci_result.task) throw Error("cannot average NER and RE results together");
  EvalResult out;
  out.task = sem_result.task;
  out.precision = (sem_result.precision + sci_result.precision) / 2.0;
  out.recall = (sem_result.recall + sci_result.recall) / 2.0;
  out.f1 = (sem_result.f1 + sci_result.f1) / 2.0;
  out.tp = sem_result.tp + sci_result.tp;
  out.fp = sem_result.fp + sci_result.fp;
  out.fn = sem_result.fn + sci_result.fn;
  return out;
}

EvalResult score_scirex_cross(const std::vector<std::vector<EntityMention>>& pred,
                              const std::vector<std::vector<EntityMention>>& gold) {
  auto keep = [](const std::vector<std::vector<EntityMention>>& in) {
    std::vector<std::vector<EntityMention>> out;
    for (const auto& s : in) {
      auto& o = out.emplace_back();
      for (const auto& e : s)
        if (std::find(std::begin(kScirexTypes), std::end(kScirexTypes), e.entity_type) !=
            std::end(kScirexTypes))
          o.push_back(e);
    }
    return out;
  };
  return score_ner(keep(pred), keep(gold), true);
}

nlohmann::ordered_json to_json(const EvalResult& r) {
  nlohmann::ordered_json j;
  j["task"] = std::string(to_string(r.task));
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  if (!r.per_seed.empty()) {
    auto& seeds = j["per_seed"] = nlohmann::ordered_json::array();
    for (const auto& s : r.per_seed) seeds.push_back(to_json(s));
  }
  return j;
}

}  // namespace lvsie
