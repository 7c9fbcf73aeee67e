#include "lvsie/nn/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvsie::nn {

Parameter::Parameter(std::string n, Matrix init)
    : name(std::move(n)),
      value(std::move(init)),
      grad(Matrix::Zero(value.rows(), value.cols())),
      m(Matrix::Zero(value.rows(), value.cols())),
      v(Matrix::Zero(value.rows(), value.cols())) {}

Matrix uniform_init(std::size_t rows, std::size_t cols, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
  return m;
}

Var Tape::constant(Matrix value) { return push(std::move(value), nullptr); }

Var Tape::param(Parameter& p) {
  Var v = push(p.value, nullptr);
  nodes_[v.id].param = &p;
  return v;
}

Var Tape::push(Matrix value, Backward backward) {
  nodes_.push_back({std::move(value), Matrix(), nullptr, std::move(backward)});
  return {nodes_.size() - 1};
}

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = nodes_[v.id];
  if (n.grad.size() == 0)
    n.grad = g;
  else
    n.grad += g;
}

void Tape::backward(Var loss) {
  accumulate(loss, Matrix::Ones(1, 1));
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (n.param) n.param->grad += n.grad;
    if (n.backward) {
      // accumulate() may grow another node's grad; pass a copy so nothing aliases.
      const Matrix g = n.grad;
      n.backward(g, *this);
    }
  }
}

Var matmul(Tape& t, Var a, Var b) {
  const Matrix& A = t.value(a);
  const Matrix& B = t.value(b);
  return t.push(A * B, [a, b](const Matrix& g, Tape& tp) {
    tp.accumulate(a, g * tp.value(b).transpose());
    tp.accumulate(b, tp.value(a).transpose() * g);
  });
}

Var add(Tape& t, Var a, Var b) {
  return t.push(t.value(a) + t.value(b), [a, b](const Matrix& g, Tape& tp) {
    tp.accumulate(a, g);
    tp.accumulate(b, g);
  });
}

Var scale(Tape& t, Var a, double s) {
  return t.push(t.value(a) * s, [a, s](const Matrix& g, Tape& tp) { tp.accumulate(a, g * s); });
}

Var add_bias(Tape& t, Var x, Var bias) {
  Matrix out = t.value(x);
  out.rowwise() += t.value(bias).row(0);
  return t.push(std::move(out), [x, bias](const Matrix& g, Tape& tp) {
    tp.accumulate(x, g);
    tp.accumulate(bias, g.colwise().sum());
  });
}

Var tanh(Tape& t, Var x) {
  return t.push(t.value(x).array().tanh().matrix(), [x](const Matrix& g, Tape& tp) {
    const auto y = tp.value(x).array().tanh();
    tp.accumulate(x, (g.array() * (1.0 - y.square())).matrix());
  });
}

Var row(Tape& t, Var x, std::size_t i) {
  const auto r = static_cast<Eigen::Index>(i);
  return t.push(t.value(x).row(r), [x, r](const Matrix& g, Tape& tp) {
    Matrix full = Matrix::Zero(tp.value(x).rows(), tp.value(x).cols());
    full.row(r) = g.row(0);
    tp.accumulate(x, full);
  });
}

Var gather_rows(Tape& t, Var x, const std::vector<std::size_t>& rows) {
  const Matrix& X = t.value(x);
  Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return t.push(std::move(out), [x, rows](const Matrix& g, Tape& tp) {
    Matrix full = Matrix::Zero(tp.value(x).rows(), tp.value(x).cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
      full.row(static_cast<Eigen::Index>(rows[i])) += g.row(static_cast<Eigen::Index>(i));
    tp.accumulate(x, full);
  });
}

Var stack_rows(Tape& t, const std::vector<Var>& rows) {
  if (rows.empty()) throw Error("stack_rows of nothing");
  Matrix out(static_cast<Eigen::Index>(rows.size()), t.value(rows[0]).cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = t.value(rows[i]).row(0);
  return t.push(std::move(out), [rows](const Matrix& g, Tape& tp) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      tp.accumulate(rows[i], g.row(static_cast<Eigen::Index>(i)));
  });
}

Var concat_cols(Tape& t, const std::vector<Var>& parts) {
  if (parts.empty()) throw Error("concat_cols of nothing");
  const Eigen::Index n = t.value(parts[0]).rows();
  Eigen::Index cols = 0;
  for (auto p : parts) {
    if (t.value(p).rows() != n) throw Error("concat_cols row mismatch");
    cols += t.value(p).cols();
  }
  Matrix out(n, cols);
  Eigen::Index at = 0;
  for (auto p : parts) {
    out.middleCols(at, t.value(p).cols()) = t.value(p);
    at += t.value(p).cols();
  }
  return t.push(std::move(out), [parts](const Matrix& g, Tape& tp) {
    Eigen::Index at = 0;
    for (auto p : parts) {
      const Eigen::Index c = tp.value(p).cols();
      tp.accumulate(p, g.middleCols(at, c));
      at += c;
    }
  });
}

Var broadcast_rows(Tape& t, Var x, std::size_t n) {
  const Matrix out = t.value(x).row(0).replicate(static_cast<Eigen::Index>(n), 1);
  return t.push(out, [x](const Matrix& g, Tape& tp) { tp.accumulate(x, g.colwise().sum()); });
}

namespace {

// Column-wise max over rows [lo, hi) of X, with the winning row per column.
void pool(const Matrix& X, Eigen::Index lo, Eigen::Index hi, Matrix& out, Eigen::Index at,
          std::vector<Eigen::Index>& arg) {
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    Eigen::Index best = lo;
    for (Eigen::Index r = lo + 1; r < hi; ++r)
      if (X(r, c) > X(best, c)) best = r;
    out(at, c) = X(best, c);
    arg.push_back(best);
  }
}

Var pooled(Tape& t, Var x, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
  const Matrix& X = t.value(x);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ranges.size()), X.cols());
  // arg[i * cols + c] = source row, or -1 for an empty range.
  std::vector<Eigen::Index> arg;
  arg.reserve(ranges.size() * static_cast<std::size_t>(X.cols()));
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto [lo, hi] = ranges[i];
    if (hi > static_cast<std::size_t>(X.rows())) throw Error("pooling range out of bounds");
    if (lo >= hi) {
      arg.insert(arg.end(), static_cast<std::size_t>(X.cols()), -1);
      continue;
    }
    pool(X, static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi), out,
         static_cast<Eigen::Index>(i), arg);
  }
  return t.push(std::move(out), [x, arg = std::move(arg)](const Matrix& g, Tape& tp) {
    Matrix full = Matrix::Zero(tp.value(x).rows(), tp.value(x).cols());
    const Eigen::Index cols = full.cols();
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const Eigen::Index r = arg[static_cast<std::size_t>(i * cols + c)];
        if (r >= 0) full(r, c) += g(i, c);
      }
    tp.accumulate(x, full);
  });
}

}  // namespace

Var max_pool_rows(Tape& t, Var x) {
  return pooled(t, x, {{0, static_cast<std::size_t>(t.value(x).rows())}});
}

Var span_max_pool(Tape& t, Var x, const std::vector<Span>& spans) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(spans.size());
  for (const auto& s : spans) {
    if (s.start >= s.end) throw Error("span_max_pool on an empty span");
    ranges.emplace_back(s.start, s.end);
  }
  return pooled(t, x, ranges);
}

Var range_max_pool(Tape& t, Var x,
                   const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
  return pooled(t, x, ranges);
}

Var sum(Tape& t, const std::vector<Var>& scalars) {
  double total = 0.0;
  for (auto s : scalars) total += t.scalar(s);
  return t.push(Matrix::Constant(1, 1, total), [scalars](const Matrix& g, Tape& tp) {
    for (auto s : scalars) tp.accumulate(s, g);
  });
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out = logits;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double mx = out.row(i).maxCoeff();
    out.row(i) = (out.row(i).array() - mx).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Matrix log_softmax_rows(const Matrix& logits) {
  Matrix out = logits;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double mx = out.row(i).maxCoeff();
    const double lse = mx + std::log((out.row(i).array() - mx).exp().sum());
    out.row(i).array() -= lse;
  }
  return out;
}

Matrix sigmoid(const Matrix& logits) {
  return logits.unaryExpr([](double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  });
}

Var softmax_ce_sum(Tape& t, Var logits, const std::vector<std::size_t>& labels) {
  const Matrix& Z = t.value(logits);
  if (static_cast<std::size_t>(Z.rows()) != labels.size()) throw Error("label count mismatch");
  const Matrix logp = log_softmax_rows(Z);
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    total -= logp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels[i]));
  return t.push(Matrix::Constant(1, 1, total), [logits, labels](const Matrix& g, Tape& tp) {
    Matrix d = softmax_rows(tp.value(logits));
    for (std::size_t i = 0; i < labels.size(); ++i)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels[i])) -= 1.0;
    tp.accumulate(logits, d * g(0, 0));
  });
}

Var bce_logits_sum(Tape& t, Var logits, const Matrix& targets) {
  const Matrix& Z = t.value(logits);
  if (Z.rows() != targets.rows() || Z.cols() != targets.cols())
    throw Error("relation target shape mismatch");
  // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z, computed stably.
  double total = 0.0;
  for (Eigen::Index i = 0; i < Z.rows(); ++i)
    for (Eigen::Index k = 0; k < Z.cols(); ++k) {
      const double z = Z(i, k);
      const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
      total += softplus - targets(i, k) * z;
    }
  const double K = static_cast<double>(std::max<Eigen::Index>(Z.cols(), 1));
  total /= K;
  return t.push(Matrix::Constant(1, 1, total), [logits, targets, K](const Matrix& g, Tape& tp) {
    tp.accumulate(logits, (sigmoid(tp.value(logits)) - targets) * (g(0, 0) / K));
  });
}

Var soft_divergence_sum(Tape& t, Var logits, const std::vector<SoftLabel>& targets,
                        Divergence d) {
  const Matrix& Z = t.value(logits);
  if (static_cast<std::size_t>(Z.rows()) != targets.size())
    throw Error("soft label count does not match the auxiliary output");
  const Matrix Q = d == Divergence::kBce ? sigmoid(Z) : softmax_rows(Z);
  double total = 0.0;
  Matrix dz(Z.rows(), Z.cols());
  const double log_floor = std::log(kProbFloor);
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    const SoftLabel& P = targets[static_cast<std::size_t>(i)];
    if (P.size() != static_cast<std::size_t>(Z.cols()))
      throw Error("soft label has " + std::to_string(P.size()) +
                  " classes but the auxiliary output has " + std::to_string(Z.cols()));
    PredictionDistribution q;
    q.probs.resize(static_cast<std::size_t>(Z.cols()));
    for (Eigen::Index k = 0; k < Z.cols(); ++k) q.probs[static_cast<std::size_t>(k)] = Q(i, k);
    total += divergence(d, P, q);

    const Eigen::Index K = Z.cols();
    switch (d) {
      case Divergence::kKlStandard:
      case Divergence::kCe: {
        // d/dlogQ = -P where Q is above the floor; then through log-softmax.
        Eigen::RowVectorXd gl(K);
        for (Eigen::Index k = 0; k < K; ++k)
          gl(k) = Q(i, k) > kProbFloor ? -P.probs[static_cast<std::size_t>(k)] : 0.0;
        dz.row(i) = gl - Q.row(i) * gl.sum();
        break;
      }
      case Divergence::kKlInverse: {
        // d/dQ of sum Q (log Q - log P) = log Q - log P + 1; then through softmax.
        Eigen::RowVectorXd gq(K);
        for (Eigen::Index k = 0; k < K; ++k) {
          const double qk = Q(i, k);
          if (qk <= 0.0) {
            gq(k) = 0.0;
            continue;
          }
          const double lq = qk > kProbFloor ? std::log(qk) : log_floor;
          gq(k) = lq - std::log(std::max(P.probs[static_cast<std::size_t>(k)], kProbFloor)) +
                  (qk > kProbFloor ? 1.0 : 0.0);
        }
        const double dot = Q.row(i).dot(gq);
        dz.row(i) = (Q.row(i).array() * (gq.array() - dot)).matrix();
        break;
      }
      case Divergence::kBce:
        for (Eigen::Index k = 0; k < K; ++k)
          dz(i, k) = (Q(i, k) - P.probs[static_cast<std::size_t>(k)]) / static_cast<double>(K);
        break;
    }
  }
  return t.push(Matrix::Constant(1, 1, total), [logits, dz](const Matrix& g, Tape& tp) {
    tp.accumulate(logits, dz * g(0, 0));
  });
}

Adam::Adam(std::vector<Parameter*> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::zero_grad() {
  for (auto* p : params_) p->zero_grad();
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (auto* p : params_) {
    p->m = beta1_ * p->m + (1.0 - beta1_) * p->grad;
    p->v = beta2_ * p->v + (1.0 - beta2_) * p->grad.cwiseProduct(p->grad);
    p->value.array() -= lr_ * (p->m.array() / c1) / ((p->v.array() / c2).sqrt() + eps_);
  }
}

}  // namespace lvsie::nn
