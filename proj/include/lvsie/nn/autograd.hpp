#ifndef LVSIE_NN_AUTOGRAD_HPP
#define LVSIE_NN_AUTOGRAD_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lvsie/corpus.hpp"
#include "lvsie/softlabel.hpp"

namespace lvsie::nn {

// Row-major convention throughout: a sequence of n vectors is an n x d matrix.
using Matrix = Eigen::MatrixXd;

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  // Adam moments.
  Matrix m;
  Matrix v;

  Parameter() = default;
  Parameter(std::string n, Matrix init);
  void zero_grad() { grad.setZero(); }
  std::size_t size() const { return static_cast<std::size_t>(value.size()); }
};

Matrix uniform_init(std::size_t rows, std::size_t cols, double scale, std::mt19937_64& rng);

struct Var {
  std::size_t id = 0;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so a reverse
// sweep visits every node after all of its consumers.
class Tape {
 public:
  using Backward = std::function<void(const Matrix& out_grad, Tape& tape)>;

  Var constant(Matrix value);
  Var param(Parameter& p);
  Var push(Matrix value, Backward backward);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  double scalar(Var v) const { return nodes_[v.id].value(0, 0); }
  std::size_t size() const { return nodes_.size(); }

  void accumulate(Var v, const Matrix& g);
  // Seeds d(loss)/d(loss) = 1 and adds the result into Parameter::grad.
  void backward(Var loss);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Parameter* param = nullptr;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
Var scale(Tape& t, Var a, double s);
// x (n x c) plus a 1 x c bias on every row.
Var add_bias(Tape& t, Var x, Var bias);
Var tanh(Tape& t, Var x);
Var row(Tape& t, Var x, std::size_t i);
Var gather_rows(Tape& t, Var x, const std::vector<std::size_t>& rows);
Var stack_rows(Tape& t, const std::vector<Var>& rows);
Var concat_cols(Tape& t, const std::vector<Var>& parts);
// 1 x c row repeated n times.
Var broadcast_rows(Tape& t, Var x, std::size_t n);
// Column-wise max over all rows; 1 x c.
Var max_pool_rows(Tape& t, Var x);
// One row per span: column-wise max over rows [start, end).
Var span_max_pool(Tape& t, Var x, const std::vector<Span>& spans);
// One row per range; an empty range yields a zero row.
Var range_max_pool(Tape& t, Var x, const std::vector<std::pair<std::size_t, std::size_t>>& ranges);
Var sum(Tape& t, const std::vector<Var>& scalars);

// Sum over rows of -log softmax(logits)[label]; 1 x 1.
Var softmax_ce_sum(Tape& t, Var logits, const std::vector<std::size_t>& labels);
// Sum over rows of the per-class binary cross-entropy averaged over classes.
Var bce_logits_sum(Tape& t, Var logits, const Matrix& targets);
// Sum over rows of divergence(P_row, Q_row). Q is softmax(logits) for the
// KL and CE variants and the per-class sigmoid for BCE.
Var soft_divergence_sum(Tape& t, Var logits, const std::vector<SoftLabel>& targets,
                        Divergence d);

Matrix softmax_rows(const Matrix& logits);
Matrix log_softmax_rows(const Matrix& logits);
Matrix sigmoid(const Matrix& logits);

class Adam {
 public:
  Adam(std::vector<Parameter*> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  void zero_grad();
  void step();
  std::uint64_t steps() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  double lr_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
};

}  // namespace lvsie::nn

#endif  // LVSIE_NN_AUTOGRAD_HPP
