#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "lvsie/evaluation.hpp"
#include "lvsie/model.hpp"

using namespace lvsie;
using nn::Matrix;

namespace {

// Central differences of f with respect to every entry of p, compared to the
// gradient left in p.grad.
double max_relative_error(nn::Parameter& p, const std::function<double()>& f, double h = 1e-6) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.value.size(); ++i) {
    const double orig = p.value(i);
    p.value(i) = orig + h;
    const double up = f();
    p.value(i) = orig - h;
    const double down = f();
    p.value(i) = orig;
    const double numeric = (up - down) / (2 * h);
    const double analytic = p.grad(i);
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic) / denom);
  }
  return worst;
}

double op_check(Matrix x0, const std::function<nn::Var(nn::Tape&, nn::Var)>& build) {
  nn::Parameter p("x", std::move(x0));
  auto run = [&] {
    nn::Tape t;
    return t.scalar(build(t, t.param(p)));
  };
  p.zero_grad();
  nn::Tape t;
  t.backward(build(t, t.param(p)));
  return max_relative_error(p, run);
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
  return m;
}

}  // namespace

TEST(Autograd, ElementaryOpsMatchFiniteDifferences) {
  const Matrix w = random_matrix(4, 3, 1);
  EXPECT_LT(op_check(random_matrix(2, 4, 2), [&](nn::Tape& t, nn::Var x) {
              return nn::sum(t, {nn::softmax_ce_sum(t, nn::tanh(t, nn::matmul(t, x, t.constant(w))), {0, 2})});
            }),
            1e-6);
  EXPECT_LT(op_check(random_matrix(5, 3, 3), [&](nn::Tape& t, nn::Var x) {
              const nn::Var pooled = nn::span_max_pool(t, x, {{0, 2}, {1, 4}, {3, 5}});
              const nn::Var ranged = nn::range_max_pool(t, x, {{0, 0}, {2, 5}, {1, 3}});
              return nn::softmax_ce_sum(t, nn::concat_cols(t, {pooled, ranged}), {1, 0, 5});
            }),
            1e-6);
  Matrix targets(3, 2);
  targets << 1, 0, 0, 0, 1, 1;
  EXPECT_LT(op_check(random_matrix(3, 2, 4), [&](nn::Tape& t, nn::Var x) {
              return nn::bce_logits_sum(t, nn::add_bias(t, x, t.constant(random_matrix(1, 2, 5))), targets);
            }),
            1e-6);
}

TEST(Autograd, SoftDivergenceGradients) {
  const std::vector<SoftLabel> labels{make_soft_label(1, Agreement::kHigh, 4),
                                      make_soft_label(3, Agreement::kLow, 4)};
  for (auto d : {Divergence::kKlStandard, Divergence::kKlInverse, Divergence::kCe, Divergence::kBce}) {
    EXPECT_LT(op_check(random_matrix(2, 4, 6),
                       [&](nn::Tape& t, nn::Var x) { return nn::soft_divergence_sum(t, x, labels, d); }),
              1e-5)
        << to_string(d);
  }
}

TEST(Autograd, SoftDivergenceValueMatchesSoftlabelModule) {
  const Matrix logits = random_matrix(1, 5, 8);
  const SoftLabel p = make_soft_label(2, Agreement::kMedium, 5);
  for (auto d : {Divergence::kKlStandard, Divergence::kKlInverse, Divergence::kCe, Divergence::kBce}) {
    nn::Tape t;
    const double v = t.scalar(nn::soft_divergence_sum(t, t.constant(logits), {p}, d));
    const Matrix q = d == Divergence::kBce ? nn::sigmoid(logits) : nn::softmax_rows(logits);
    PredictionDistribution pd{{q.data(), q.data() + q.size()}};
    EXPECT_NEAR(v, divergence(d, p, pd), 1e-12);
  }
}

TEST(Spans, EnumeratedByWidthThenStart) {
  const auto s = enumerate_spans(3, 2);
  EXPECT_EQ(s, (std::vector<Span>{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}}));
  EXPECT_EQ(enumerate_spans(12, 10).size(), 12u + 11 + 10 + 9 + 8 + 7 + 6 + 5 + 4 + 3);
  EXPECT_TRUE(enumerate_spans(0, 10).empty());
}

TEST(Negatives, DeterministicAndCapped) {
  const auto ex = fixtures::overfit_corpus(false);
  const auto schemas = head_schemas(LabelSpace::kCommonUntyped);
  const Candidates a = sample_negatives(ex[0], schemas, 10, 3, 2, 99);
  const Candidates b = sample_negatives(ex[0], schemas, 10, 3, 2, 99);
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    ASSERT_TRUE(a.heads[h].has_value());
    EXPECT_EQ(a.heads[h]->spans, b.heads[h]->spans);
    std::size_t negatives = 0;
    for (auto l : a.heads[h]->span_labels) negatives += l == 0;
    EXPECT_LE(negatives, 3u);
    EXPECT_EQ(a.heads[h]->spans.size() - negatives, ex[0].heads[h]->entities.size());
  }
}

TEST(Model, MultiLossIsSumOfHeads) {
  const auto ex = fixtures::overfit_corpus(true);
  JointModel m(fixtures::tiny_model_config(true), head_schemas(LabelSpace::kCommonUntyped));
  const Batch b = make_batch(ex, m.schemas(), m.config(), 3);
  const double l1 = m.loss_single(Head::kSci, b);
  const double l2 = m.loss_single(Head::kSem, b);
  EXPECT_NEAR(m.loss_multi(b), l1 + l2, 1e-9);
  const LossBreakdown lb = m.losses(b);
  EXPECT_NEAR(lb.total, lb.multi + lb.soft_total, 1e-9);
  EXPECT_NEAR(lb.soft_total, lb.soft[0] + lb.soft[1], 1e-9);
  EXPECT_GT(lb.soft_total, 0.0);
}

TEST(Model, GradientsOfMultiWithSoftMatchFiniteDifferences) {
  const auto ex = fixtures::overfit_corpus(true);
  for (auto d : {Divergence::kKlStandard, Divergence::kBce}) {
    JointModel m(fixtures::tiny_model_config(true, d), head_schemas(LabelSpace::kCommonUntyped));
    const Batch b = make_batch(ex, m.schemas(), m.config(), 3);
    for (auto* p : m.parameters()) p->zero_grad();
    m.accumulate_gradients(b);
    std::size_t checked = 0;
    for (auto* p : m.parameters()) {
      EXPECT_LT(max_relative_error(*p, [&] { return m.losses(b).total; }), 1e-4) << p->name;
      checked += p->size();
    }
    EXPECT_GE(checked, 100u);
  }
}

TEST(Model, AbsentHeadGetsNoGradient) {
  auto ex = fixtures::overfit_corpus(true);
  for (auto& e : ex) e.heads[1].reset();
  JointModel m(fixtures::tiny_model_config(true), head_schemas(LabelSpace::kCommonUntyped));
  const Batch b = make_batch(ex, m.schemas(), m.config(), 1);
  for (auto* p : m.parameters()) p->zero_grad();
  m.accumulate_gradients(b);
  for (auto* p : m.head_parameters(Head::kSem)) EXPECT_EQ(p->grad.norm(), 0.0) << p->name;
  double sci = 0.0;
  for (auto* p : m.head_parameters(Head::kSci)) sci += p->grad.norm();
  EXPECT_GT(sci, 0.0);
}

TEST(Model, BatchOrderDoesNotChangeLoss) {
  const auto ex = fixtures::overfit_corpus(true);
  JointModel m(fixtures::tiny_model_config(true), head_schemas(LabelSpace::kCommonUntyped));
  std::vector<const TrainingExample*> fwd;
  for (const auto& e : ex) fwd.push_back(&e);
  Batch a = make_batch(fwd, m.schemas(), m.config(), 4);
  Batch b = a;
  std::reverse(b.examples.begin(), b.examples.end());
  std::reverse(b.candidates.begin(), b.candidates.end());
  EXPECT_NEAR(m.losses(a).total, m.losses(b).total, 1e-10);
}

TEST(Model, CheckpointRoundTrip) {
  const auto ex = fixtures::overfit_corpus(true);
  JointModel m(fixtures::tiny_model_config(true), head_schemas(LabelSpace::kCommonUntyped));
  TrainOptions opt;
  opt.epochs = 3;
  train(m, ex, opt);
  const auto dir = std::filesystem::temp_directory_path() / "lvsie_ckpt_test";
  std::filesystem::remove_all(dir);
  m.save(dir.string());
  JointModel back = JointModel::load(dir.string());
  const Batch b = make_batch(ex, m.schemas(), m.config(), 2);
  EXPECT_DOUBLE_EQ(back.losses(b).total, m.losses(b).total);
  for (const auto& e : ex) {
    const auto p1 = m.predict(e.tokens, Head::kSci);
    const auto p2 = back.predict(e.tokens, Head::kSci);
    EXPECT_EQ(p1.entities, p2.entities);
    EXPECT_EQ(p1.relations, p2.relations);
  }
  std::filesystem::remove_all(dir);
  EXPECT_THROW(JointModel::load(dir.string()), Error);
}

TEST(Model, ConfigJsonRoundTrip) {
  ModelConfig c = fixtures::tiny_model_config(true, Divergence::kCe);
  c.relation_threshold = 0.25;
  const ModelConfig back = model_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Model, OverfitsFiveSentences) {
  const auto ex = fixtures::overfit_corpus(true);
  ModelConfig c;
  c.soft_labels = true;
  c.learning_rate = 1e-2;
  JointModel m(c, head_schemas(LabelSpace::kCommonUntyped));
  TrainOptions opt;
  opt.epochs = 300;
  opt.batch_size = 5;
  train(m, ex, opt);
  for (Head h : {Head::kSci, Head::kSem}) {
    std::vector<std::vector<EntityMention>> pe, ge;
    std::vector<HeadAnnotation> pa, ga;
    for (const auto& e : ex) {
      pa.push_back(m.predict(e.tokens, h));
      ga.push_back(e.at(h));
      pe.push_back(pa.back().entities);
      ge.push_back(ga.back().entities);
    }
    EXPECT_GE(score_ner(pe, ge, true).f1, 0.99);
    EXPECT_GE(score_re(pa, ga).f1, 0.99);
  }
}
