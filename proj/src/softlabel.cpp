#include "lvsie/softlabel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lvsie {

namespace {

void check_dims(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error("distribution dimension mismatch: " + std::to_string(a) + " vs " +
                std::to_string(b));
}

double floored(double q) { return std::max(q, kProbFloor); }

}  // namespace

namespace {

// Target mass in tenths, so every probability is one correctly rounded division.
int target_tenths(Agreement level) {
  switch (level) {
    case Agreement::kHigh: return 9;
    case Agreement::kMedium: return 8;
    case Agreement::kLow: return 6;
  }
  return 8;
}

}  // namespace

double target_mass(Agreement level) { return target_tenths(level) / 10.0; }

SoftLabel make_soft_label(std::size_t target_class, Agreement level, std::size_t num_classes) {
  if (num_classes < 2) throw Error("soft label needs at least two classes");
  if (target_class >= num_classes)
    throw Error("soft label target " + std::to_string(target_class) + " out of range for K=" +
                std::to_string(num_classes));
  const int tenths = target_tenths(level);
  SoftLabel label;
  label.agreement = level;
  label.target_class = target_class;
  label.probs.assign(num_classes, (10 - tenths) / (10.0 * static_cast<double>(num_classes - 1)));
  label.probs[target_class] = tenths / 10.0;
  return label;
}

SoftLabel make_soft_label(const SoftLabelRef& ref) {
  return make_soft_label(ref.target_class, ref.agreement, ref.num_classes);
}

double kl_standard(const SoftLabel& p, const PredictionDistribution& q) {
  check_dims(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.probs[i] <= 0.0) continue;
    sum += p.probs[i] * (std::log(p.probs[i]) - std::log(floored(q.probs[i])));
  }
  return std::max(sum, 0.0);
}

double kl_inverse(const SoftLabel& p, const PredictionDistribution& q) {
  check_dims(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double qi = q.probs[i];
    if (qi <= 0.0) continue;
    sum += qi * (std::log(floored(qi)) - std::log(floored(p.probs[i])));
  }
  return std::max(sum, 0.0);
}

double soft_loss_ce(const SoftLabel& p, const PredictionDistribution& q) {
  check_dims(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum -= p.probs[i] * std::log(floored(q.probs[i]));
  return sum;
}

double soft_loss_bce(const SoftLabel& p, const PredictionDistribution& q) {
  check_dims(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double qi = std::clamp(q.probs[i], kProbFloor, 1.0 - kProbFloor);
    sum -= p.probs[i] * std::log(qi) + (1.0 - p.probs[i]) * std::log(1.0 - qi);
  }
  return sum / static_cast<double>(p.size());
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

std::string_view to_string(Divergence d) {
  switch (d) {
    case Divergence::kKlStandard: return "KL_STANDARD";
    case Divergence::kKlInverse: return "KL_INVERSE";
    case Divergence::kCe: return "CE";
    case Divergence::kBce: return "BCE";
  }
  return "?";
}

Divergence divergence_from_string(std::string_view s) {
  for (auto d : {Divergence::kKlStandard, Divergence::kKlInverse, Divergence::kCe, Divergence::kBce})
    if (to_string(d) == s) return d;
  throw Error("unknown divergence '" + std::string(s) + "'");
}

double divergence(Divergence d, const SoftLabel& p, const PredictionDistribution& q) {
  switch (d) {
    case Divergence::kKlStandard: return kl_standard(p, q);
    case Divergence::kKlInverse: return kl_inverse(p, q);
    case Divergence::kCe: return soft_loss_ce(p, q);
    case Divergence::kBce: return soft_loss_bce(p, q);
  }
  return 0.0;
}

std::vector<double> log_normalize(const SoftLabel& p) {
  std::vector<double> out(p.size());
  std::transform(p.probs.begin(), p.probs.end(), out.begin(),
                 [](double x) { return std::log(x); });
  return out;
}

double kl_standard_log(std::span<const double> log_p, std::span<const double> log_q) {
  check_dims(log_p.size(), log_q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < log_p.size(); ++i)
    sum += std::exp(log_p[i]) * (log_p[i] - log_q[i]);
  return sum;
}

}  // namespace lvsie
