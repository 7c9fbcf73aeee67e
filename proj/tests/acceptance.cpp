// Acceptance report: one PASS / FAIL / SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <boost/rational.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "lvsie/evaluation.hpp"
#include "lvsie/experiment.hpp"
#include "lvsie/softlabel.hpp"
#include "lvsie/synthetic.hpp"

using namespace lvsie;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr double kSoftSum = 1e-12;
constexpr double kDivergence = 1e-10;
constexpr double kIdentity = 1e-9;
constexpr double kLossSum = 1e-9;
constexpr double kGradient = 1e-4;
constexpr std::size_t kMinGradientParams = 100;
constexpr double kOverfitF1 = 0.99;
constexpr std::size_t kOverfitEpochs = 500;
constexpr std::size_t kMonotoneWindow = 50;
constexpr double kMonotoneNoise = 1e-3;
constexpr double kAverage = 0.01;
constexpr double kRelationsPerDoc = 0.05;
}  // namespace tol

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::kFail, std::move(d)}; }
Outcome skip(std::string d) { return {Status::kSkip, std::move(d)}; }

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

// 1. Corpus statistics on the official release.
Outcome official_statistics() {
  const char* root = std::getenv(kDataRootEnv);
  if (!root) return skip(std::string("official corpora not available (set ") + kDataRootEnv + "); criterion 4 stands in");
  ExperimentConfig c;
  c.data = DataPaths::in_directory(root);
  const LoadedData d = load_data(c);
  const OverlapReport r = overlap_statistics(d.overlap);
  std::vector<std::string> bad;
  auto expect = [&](const char* what, std::size_t got, std::size_t want) {
    if (got != want) bad.push_back(std::string(what) + " " + std::to_string(got) + "!=" + std::to_string(want));
  };
  expect("sem docs", d.semeval.report.documents, 500);
  expect("sci docs", d.scierc.report.documents, 500);
  expect("overlapped", r.aligned_documents, 307);
  expect("sem-only", r.sem_only_documents, 193);
  expect("sci-only", r.sci_only_documents, 193);
  expect("sem entities", d.semeval.report.entities, 7483);
  expect("sci entities", d.scierc.report.entities, 8089);
  expect("sem relations", d.semeval.report.relations, 1583);
  expect("sci relations", d.scierc.report.relations, 4648);
  expect("overlap sem entities", r.sem.entities, 4592);
  expect("overlap sci entities", r.sci.entities, 4252);
  expect("overlap sem relations", r.sem.relations, 1087);
  expect("overlap sci relations", r.sci.relations, 2476);
  expect("sem common", r.sem.common_relations, 1071);
  expect("sci common", r.sci.common_relations, 1922);
  if (std::abs(d.semeval.report.relations_per_document() - 3.2) > tol::kRelationsPerDoc)
    bad.push_back("sem relations/doc " + num(d.semeval.report.relations_per_document()));
  if (std::abs(d.scierc.report.relations_per_document() - 9.3) > tol::kRelationsPerDoc)
    bad.push_back("sci relations/doc " + num(d.scierc.report.relations_per_document()));
  if (bad.empty()) return pass("all counts exact");
  std::string msg;
  for (const auto& b : bad) msg += (msg.empty() ? "" : "; ") + b;
  return fail(msg);
}

// 2. Soft labels.
Outcome soft_labels() {
  using R = boost::rational<long long>;
  const std::pair<Agreement, R> levels[] = {
      {Agreement::kHigh, R(9, 10)}, {Agreement::kMedium, R(8, 10)}, {Agreement::kLow, R(6, 10)}};
  for (const auto& [level, m] : levels)
    for (std::size_t t = 0; t < 5; ++t) {
      const SoftLabel s = make_soft_label(t, level, 5);
      for (std::size_t i = 0; i < 5; ++i) {
        const R want = i == t ? m : (R(1) - m) / R(4);
        if (s.probs[i] != boost::rational_cast<double>(want)) return fail("K=5 vector entry differs");
      }
    }
  double worst = 0.0;
  for (std::size_t k = 2; k <= 20; ++k)
    for (std::size_t t = 0; t < k; ++t)
      for (const auto& [level, m] : levels) {
        const SoftLabel s = make_soft_label(t, level, k);
        worst = std::max(worst, std::abs(std::accumulate(s.probs.begin(), s.probs.end(), 0.0) - 1.0));
        if (static_cast<std::size_t>(std::max_element(s.probs.begin(), s.probs.end()) - s.probs.begin()) != t)
          return fail("argmax differs from target");
      }
  if (worst > tol::kSoftSum) return fail("max |sum-1| = " + num(worst));
  return pass("K=5 vectors exact; max |sum-1| = " + num(worst));
}

// 3. Divergences against long double oracles.
Outcome divergences() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.005, 1.0);
  auto simplex = [&](std::size_t k) {
    std::vector<double> v(k);
    for (auto& x : v) x = u(rng);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= s;
    return v;
  };
  double worst = 0.0, self = 0.0, ident = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 12);
    SoftLabel p;
    p.probs = simplex(k);
    const PredictionDistribution q{simplex(k)};
    long double kl = 0, kli = 0, ce = 0, bce = 0, h = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const long double a = p.probs[i], b = q.probs[i];
      kl += a * (std::log(a) - std::log(b));
      kli += b * (std::log(b) - std::log(a));
      ce -= a * std::log(b);
      bce -= a * std::log(b) + (1 - a) * std::log1p(-b);
      h -= a * std::log(a);
    }
    bce /= static_cast<long double>(k);
    for (auto [got, want] : {std::pair{kl_standard(p, q), kl}, std::pair{kl_inverse(p, q), kli},
                             std::pair{soft_loss_ce(p, q), ce}, std::pair{soft_loss_bce(p, q), bce}})
      worst = std::max(worst, std::abs(got - static_cast<double>(want)));
    self = std::max(self, std::abs(kl_standard(p, PredictionDistribution{p.probs})));
    ident = std::max(ident, std::abs(soft_loss_ce(p, q) - kl_standard(p, q) - static_cast<double>(h)));
  }
  const std::string d = "max err " + num(worst) + ", KL(P,P) " + num(self) + ", CE-KL-H " + num(ident);
  if (worst > tol::kDivergence || self > tol::kIdentity || ident > tol::kIdentity) return fail(d);
  return pass(d);
}

// 4. Four-document agreements and strategy oracles.
Outcome alignment_oracle() {
  const auto t = fixtures::load_four_docs();
  if (t.overlap.aligned.size() != 4) return fail("four-document fixtures did not align");
  std::vector<std::vector<Agreement>> got;
  for (const auto& d : t.overlap.aligned) {
    got.emplace_back();
    for (const auto& v : d.relation_verdicts) got.back().push_back(v.agreement);
  }
  const std::vector<std::vector<Agreement>> want{
      {Agreement::kHigh}, {Agreement::kLow}, {Agreement::kMedium}, {Agreement::kMedium, Agreement::kMedium}};
  if (got != want) return fail("verdicts differ from HIGH/LOW/MEDIUM/MEDIUM");

  std::vector<const OverlapResult*> corpora{&t.overlap};
  std::vector<fixtures::Aligned> synthetic;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) synthetic.push_back(fixtures::synthetic_aligned(12, 3, seed));
  for (const auto& s : synthetic) corpora.push_back(&s.overlap);
  for (const auto* o : corpora) {
    for (auto s : {Strategy::kMixed, Strategy::kMixedSci, Strategy::kMixedSem}) {
      SplitSpec spec;
      spec.strategy = s;
      const auto oracle = fixtures::oracle_mixed(*o, s);
      if (fixtures::relation_keys(build_training_set(o->aligned, nullptr, spec), Head::kSci) !=
          std::multiset<fixtures::RelKey>(oracle.begin(), oracle.end()))
        return fail(std::string(to_string(s)) + " differs from the union/filter oracle");
    }
    SplitSpec spec;
    spec.strategy = Strategy::kConcat;
    if (fixtures::relation_keys(build_training_set(o->aligned, nullptr, spec), Head::kSci) !=
        fixtures::oracle_concat(*o))
      return fail("CONCAT differs from the oracle");
  }
  return pass("verdicts HIGH/LOW/MEDIUM/MEDIUM; MIXED, MIXED_SCI, MIXED_SEM, CONCAT equal oracles on " +
              std::to_string(corpora.size()) + " corpora");
}

// 5. Loss additivity and gradient check.
Outcome gradients() {
  const auto ex = fixtures::overfit_corpus(true);
  JointModel m(fixtures::tiny_model_config(true), head_schemas(LabelSpace::kCommonUntyped));
  if (m.encoder().dim() > 16) return fail("encoder dimension above 16");
  const Batch b = make_batch(ex, m.schemas(), m.config(), 3);
  const double gap = std::abs(m.loss_multi(b) - m.loss_single(Head::kSci, b) - m.loss_single(Head::kSem, b));
  if (gap > tol::kLossSum) return fail("loss_multi differs from head sum by " + num(gap));

  for (auto* p : m.parameters()) p->zero_grad();
  m.accumulate_gradients(b);
  std::vector<std::pair<nn::Parameter*, Eigen::Index>> entries;
  for (auto* p : m.parameters())
    for (Eigen::Index i = 0; i < p->value.size(); ++i) entries.emplace_back(p, i);
  std::mt19937_64 rng(17);
  std::shuffle(entries.begin(), entries.end(), rng);
  entries.resize(std::min<std::size_t>(entries.size(), 300));
  double worst = 0.0;
  const double h = 1e-6;
  for (auto [p, i] : entries) {
    const double orig = p->value(i);
    p->value(i) = orig + h;
    const double up = m.losses(b).total;
    p->value(i) = orig - h;
    const double down = m.losses(b).total;
    p->value(i) = orig;
    const double numeric = (up - down) / (2 * h);
    const double analytic = p->grad(i);
    worst = std::max(worst, std::abs(numeric - analytic) /
                                std::max({std::abs(numeric), std::abs(analytic), 1e-6}));
  }
  const std::string d = std::to_string(entries.size()) + " parameters, max relative error " + num(worst) +
                        ", d=" + std::to_string(m.encoder().dim());
  if (entries.size() < tol::kMinGradientParams || worst >= tol::kGradient) return fail(d);
  return pass(d + "; loss_multi gap " + num(gap));
}

// 6. Overfit a five-sentence dual-annotated corpus.
Outcome overfit() {
  const auto ex = fixtures::overfit_corpus(true);
  ModelConfig c;
  c.soft_labels = true;
  c.learning_rate = 1e-2;
  JointModel m(c, head_schemas(LabelSpace::kCommonUntyped));
  std::vector<double> soft;
  TrainOptions opt;
  opt.epochs = tol::kOverfitEpochs;
  opt.batch_size = ex.size();
  opt.on_epoch = [&](std::size_t, const LossBreakdown& l) { soft.push_back(l.soft_total); };
  train(m, ex, opt);
  double min_f1 = 1.0;
  for (Head h : {Head::kSci, Head::kSem}) {
    std::vector<std::vector<EntityMention>> pe, ge;
    std::vector<HeadAnnotation> pa, ga;
    for (const auto& e : ex) {
      pa.push_back(m.predict(e.tokens, h));
      ga.push_back(e.at(h));
      pe.push_back(pa.back().entities);
      ge.push_back(ga.back().entities);
    }
    min_f1 = std::min({min_f1, score_ner(pe, ge, true).f1, score_re(pa, ga).f1});
  }
  double rise = 0.0;
  for (std::size_t e = soft.size() - tol::kMonotoneWindow; e < soft.size(); ++e)
    rise = std::max(rise, soft[e] - soft[e - 1]);
  const std::string d = "min F1 over heads/tasks " + num(min_f1) + ", max L_soft rise in last 50 epochs " +
                        num(rise) + ", final L_soft " + num(soft.back());
  if (min_f1 < tol::kOverfitF1 || rise > tol::kMonotoneNoise) return fail(d);
  return pass(d);
}

// 7. Hand-counted scores and the set average.
Outcome evaluation() {
  auto ent = [](std::size_t s, std::size_t e, const char* type = "Method") {
    return EntityMention{"e" + std::to_string(s), {s, e}, type, Perspective::kSci};
  };
  struct Case {
    std::vector<EntityMention> pred, gold;
    bool typed;
    std::size_t tp, fp, fn;
  };
  const std::vector<Case> cases{
      {{ent(0, 2), ent(3, 4, "Method"), ent(8, 9)}, {ent(0, 2), ent(3, 4, "Task"), ent(5, 7)}, true, 1, 2, 2},
      {{ent(0, 2), ent(3, 4, "Method"), ent(8, 9)}, {ent(0, 2), ent(3, 4, "Task"), ent(5, 7)}, false, 2, 1, 1},
      {{}, {ent(0, 1)}, true, 0, 0, 1},
      {{ent(0, 1), ent(0, 1)}, {ent(0, 1)}, true, 1, 1, 0},
      {{ent(0, 1), ent(1, 2), ent(2, 3)}, {ent(0, 1), ent(1, 2), ent(2, 3)}, true, 3, 0, 0},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const EvalResult r = score_ner(c.pred, c.gold, c.typed);
    const double p = c.tp + c.fp ? double(c.tp) / double(c.tp + c.fp) : 0.0;
    const double rc = c.tp + c.fn ? double(c.tp) / double(c.tp + c.fn) : 0.0;
    const double f = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
    if (r.tp != c.tp || r.fp != c.fp || r.fn != c.fn || r.precision != p || r.recall != rc || r.f1 != f)
      return fail("NER fixture " + std::to_string(i + 1) + " differs");
  }
  HeadAnnotation gold, pred;
  gold.entities = {ent(0, 1), ent(2, 4, "Task"), ent(5, 6)};
  gold.relations = {{"e0", "e2", "Used-for", Perspective::kSci}, {"e5", "e0", "Compare", Perspective::kSci}};
  pred.entities = {ent(0, 1), ent(2, 4), ent(5, 6)};
  pred.relations = {{"e0", "e2", "Used-for", Perspective::kSci},
                    {"e0", "e5", "Compare", Perspective::kSci},
                    {"e5", "e0", "Part-of", Perspective::kSci}};
  const EvalResult re = score_re(pred, gold);
  if (re.tp != 1 || re.fp != 2 || re.fn != 1 || re.f1 != 0.4) return fail("RE fixture differs");
  if (score_re(pred, gold, false).tp != 0) return fail("typed RE fixture differs");
  EvalResult sem, sci;
  sem.f1 = 22.37;
  sci.f1 = 39.66;
  const double avg = average_sets(sem, sci).f1;
  if (std::abs(avg - 31.02) > tol::kAverage) return fail("average_sets gave " + num(avg));
  return pass("5 NER + 2 RE fixtures exact; average_sets(22.37, 39.66) = " + std::to_string(avg));
}

// 8. Every scenario at desk scale, then a no-op rerun.
Outcome scenarios() {
  const fs::path root = fs::temp_directory_path() / "lvsie_acceptance_scenarios";
  fs::remove_all(root);
  write_synthetic(generate_synthetic(SyntheticSpec{}), (root / "data").string());
  const Scenario all[] = {Scenario::kOverlapTable3,       Scenario::kDataQuantityFig2,
                          Scenario::kLossAblationTable4,  Scenario::kScirexTable5,
                          Scenario::kSciercStandardTable6, Scenario::kStatsReport};
  std::string msg;
  for (auto s : all) {
    ExperimentConfig c;
    c.scenario = s;
    c.data = DataPaths::in_directory((root / "data").string());
    c.seeds = {1, 2};
    c.output_dir = (root / "runs").string();
    const RunSummary first = run_scenario(c);
    const fs::path run(first.run_dir);
    for (const char* f : {"manifest.json", "metrics.json", "plots/relation_distribution.csv"})
      if (!fs::exists(run / f)) return fail(std::string(to_string(s)) + " did not write " + f);
    if (s == Scenario::kDataQuantityFig2 && !fs::exists(run / "plots/quantity_curve.csv"))
      return fail("DATA_QUANTITY_FIG2 did not write the quantity curve");
    const auto before = fs::last_write_time(run / "metrics.json");
    const RunSummary second = run_scenario(c);
    if (!second.noop || fs::last_write_time(run / "metrics.json") != before)
      return fail(std::string(to_string(s)) + " rerun was not a no-op");
  }
  fs::remove_all(root);
  return pass("6 scenarios wrote manifest, metrics and plot data; reruns were no-ops");
}

// 9. Full-scale reproduction.
Outcome full_scale() {
  return skip("needs a pretrained scientific-text encoder and the official corpora; only the built-in "
              "tiny encoder is available");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"official data statistics", official_statistics},
      {"soft labels", soft_labels},
      {"divergence oracles", divergences},
      {"alignment and strategy oracles", alignment_oracle},
      {"loss additivity and gradients", gradients},
      {"overfit", overfit},
      {"evaluation oracles", evaluation},
      {"scenario smoke runs", scenarios},
      {"full-scale reproduction", full_scale},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    failures += o.status == Status::kFail;
    std::cout << tag << " criterion " << index << " (" << name << "): " << o.detail << " [" << std::fixed
              << std::setprecision(2) << secs << "s]" << std::defaultfloat << "\n";
  }
  return failures == 0 ? 0 : 1;
}
