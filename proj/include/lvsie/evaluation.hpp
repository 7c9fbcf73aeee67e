#ifndef LVSIE_EVALUATION_HPP
#define LVSIE_EVALUATION_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lvsie/corpus.hpp"
#include "lvsie/dataset.hpp"

namespace lvsie {

enum class Task { kNer, kRe };

std::string_view to_string(Task t);

struct EvalResult {
  Task task = Task::kNer;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<EvalResult> per_seed;
};

// P, R and F1 from counts, with 0/0 taken as 0.
EvalResult from_counts(Task task, std::size_t tp, std::size_t fp, std::size_t fn);

// Each argument holds one entry per sentence; pred[i] and gold[i] share a
// token grid.
EvalResult score_ner(const std::vector<std::vector<EntityMention>>& pred,
                     const std::vector<std::vector<EntityMention>>& gold, bool typed);
EvalResult score_ner(const std::vector<EntityMention>& pred, const std::vector<EntityMention>& gold,
                     bool typed);

// A relation matches on head span, tail span and label; with
// boundaries_only = false the endpoint entity types must match too.
EvalResult score_re(const std::vector<HeadAnnotation>& pred, const std::vector<HeadAnnotation>& gold,
                    bool boundaries_only = true);
EvalResult score_re(const HeadAnnotation& pred, const HeadAnnotation& gold,
                    bool boundaries_only = true);

EvalResult average_over_seeds(const std::vector<EvalResult>& results);
EvalResult average_sets(const EvalResult& sem_result, const EvalResult& sci_result);

// Typed NER over Method, Task, Metric and Material; predictions of any other
// type are discarded first.
EvalResult score_scirex_cross(const std::vector<std::vector<EntityMention>>& pred,
                              const std::vector<std::vector<EntityMention>>& gold);

nlohmann::ordered_json to_json(const EvalResult& r);

}  // namespace lvsie

#endif  // LVSIE_EVALUATION_HPP
