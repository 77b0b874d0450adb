#pragma once

// Discrete diagnostic scales: quantile discretization of a continuous score,
// outcome-conditional class probabilities, sensitivity/specificity and
// cutpoint selection.
//
// Class indices are 1-based throughout. A threshold c calls a subject
// positive when its class index is >= c; c = k + 1 is admitted as the
// "nobody positive" threshold so ROC curves close at (0, 0).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scalesense {

/// Tolerance on |sum(pi) - 1| for probability vectors after arithmetic.
inline constexpr double kMassTolerance = 1e-9;

enum class Outcome : std::uint8_t { Healthy = 0, Diseased = 1 };

struct LabeledSample {
  double score = 0.0;
  Outcome outcome = Outcome::Healthy;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// Ordered samples with cached outcome counts. Scores must be finite.
class Cohort {
 public:
  Cohort() = default;
  explicit Cohort(std::vector<LabeledSample> samples);

  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n0() const noexcept { return n0_; }

  friend bool operator==(const Cohort&, const Cohort&) = default;

 private:
  std::vector<LabeledSample> samples_;
  std::size_t n1_ = 0;
  std::size_t n0_ = 0;
};

/// A k-class partition of the real line. Class j covers
/// (boundary_{j-1}, boundary_j]; the last class is open above. Boundaries
/// are non-decreasing: a repeated boundary denotes an empty class, which
/// arises when ties straddle a quantile rank.
class PartitionSpec {
 public:
  PartitionSpec(std::size_t k, std::vector<double> boundaries);

  std::size_t k() const noexcept { return k_; }
  const std::vector<double>& boundaries() const noexcept { return boundaries_; }

  /// Smallest j with score <= boundary_j, else k.
  std::size_t classify(double score) const;

  friend bool operator==(const PartitionSpec&, const PartitionSpec&) = default;

 private:
  std::size_t k_;
  std::vector<double> boundaries_;
};

struct ScaleAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> class_indices;

  friend bool operator==(const ScaleAssignment&, const ScaleAssignment&) = default;
};

/// Class probabilities pi_1..pi_k conditional on one outcome.
class ConditionalPMF {
 public:
  /// Validates nonnegativity and |sum - 1| <= kMassTolerance.
  ConditionalPMF(std::vector<double> probs, Outcome conditioning_outcome);

  std::size_t k() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  /// 1-based access.
  double operator[](std::size_t class_index) const { return probs_.at(class_index - 1); }
  Outcome conditioning_outcome() const noexcept { return outcome_; }

  friend bool operator==(const ConditionalPMF&, const ConditionalPMF&) = default;

 private:
  std::vector<double> probs_;
  Outcome outcome_;
};

enum class ThresholdCriterion { YoudenJ, ClosestToTopLeft, SeSpProduct };

std::string_view criterion_name(ThresholdCriterion criterion) noexcept;
/// Accepts "youden", "closest-to-top-left", "se-sp-product".
ThresholdCriterion parse_criterion(std::string_view name);

struct DiagnosticSummary {
  std::size_t c = 1;
  double se = 0.0;
  double sp = 0.0;
  /// Raw criterion value at c: J, squared distance to (0,1), or Se*Sp.
  double criterion_value = 0.0;

  friend bool operator==(const DiagnosticSummary&, const DiagnosticSummary&) = default;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// k-tile discretization. boundary_j is the sorted pooled score at rank
/// ceil(j*n/k); ties are never split across classes.
std::pair<PartitionSpec, ScaleAssignment> discretize(const Cohort& cohort, std::size_t k);

/// Returns (pmf given diseased, pmf given healthy).
std::pair<ConditionalPMF, ConditionalPMF> estimate_conditional_pmfs(
    const ScaleAssignment& assignment, const Cohort& cohort);

/// P[X >= c | Y = 1] = sum_{i=c}^{k} pi_i, for 1 <= c <= k + 1.
double sensitivity(const ConditionalPMF& pmf1, std::size_t c);

/// P[X < c | Y = 0] = sum_{i=1}^{c-1} pi_i, for 1 <= c <= k + 1.
double specificity(const ConditionalPMF& pmf0, std::size_t c);

/// Value of the criterion at a given (Se, Sp) operating point.
double criterion_value(ThresholdCriterion criterion, double se, double sp);

/// True when larger criterion values are better.
bool criterion_maximized(ThresholdCriterion criterion) noexcept;

/// Ties closer than this are resolved toward the smaller threshold.
inline constexpr double kTieTolerance = 1e-12;

/// Best c in 1..k under the criterion; ties go to the smallest c.
DiagnosticSummary select_threshold(const ConditionalPMF& pmf1, const ConditionalPMF& pmf0,
                                   ThresholdCriterion criterion = ThresholdCriterion::YoudenJ);

/// k + 1 points (1 - Sp(c), Se(c)) for c = 1..k+1, from (1,1) to (0,0).
std::vector<RocPoint> roc_points(const ConditionalPMF& pmf1, const ConditionalPMF& pmf0);

}  // namespace scalesense
