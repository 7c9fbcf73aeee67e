#ifndef LVSIE_SOFTLABEL_HPP
#define LVSIE_SOFTLABEL_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lvsie/corpus.hpp"

namespace lvsie {

// Floor applied to predicted probabilities before any logarithm.
inline constexpr double kProbFloor = 1e-12;

// Agreement-graded target distribution over K relation classes.
struct SoftLabel {
  std::vector<double> probs;
  Agreement agreement = Agreement::kMedium;
  std::size_t target_class = 0;

  std::size_t size() const { return probs.size(); }
};

// A model head's normalized output over the same K classes.
struct PredictionDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
};

// Probability placed on the annotated class for each agreement level.
double target_mass(Agreement level);

// Target class receives target_mass(level); the rest is spread uniformly.
SoftLabel make_soft_label(std::size_t target_class, Agreement level, std::size_t num_classes);
SoftLabel make_soft_label(const SoftLabelRef& ref);

// D_KL(P || Q) with Q floored at kProbFloor.
double kl_standard(const SoftLabel& p, const PredictionDistribution& q);
// D_KL(Q || P), computed on the raw soft label (no log-domain target).
double kl_inverse(const SoftLabel& p, const PredictionDistribution& q);
// -sum P log Q.
double soft_loss_ce(const SoftLabel& p, const PredictionDistribution& q);
// Per-class binary cross-entropy averaged over the K classes; q holds
// independent per-class probabilities.
double soft_loss_bce(const SoftLabel& p, const PredictionDistribution& q);

double entropy(std::span<const double> p);

// Loss used for the auxiliary soft-label output.
enum class Divergence { kKlStandard, kKlInverse, kCe, kBce };

std::string_view to_string(Divergence d);
Divergence divergence_from_string(std::string_view s);
double divergence(Divergence d, const SoftLabel& p, const PredictionDistribution& q);

std::vector<double> log_normalize(const SoftLabel& p);

// Divergences in the log domain; the model heads feed log-probabilities here.
double kl_standard_log(std::span<const double> log_p, std::span<const double> log_q);

}  // namespace lvsie

#endif  // LVSIE_SOFTLABEL_HPP
