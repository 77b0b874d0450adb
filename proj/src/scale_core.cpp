#include "scalesense/scale_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scalesense/errors.hpp"

namespace scalesense {

Cohort::Cohort(std::vector<LabeledSample> samples) : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.score)) {
      throw Error(ErrorKind::ParseError, "sample " + std::to_string(i + 1) + " has a non-finite score");
    }
    if (s.outcome == Outcome::Diseased) {
      ++n1_;
    } else if (s.outcome == Outcome::Healthy) {
      ++n0_;
    } else {
      throw Error(ErrorKind::ParseError, "sample " + std::to_string(i + 1) + " has a non-binary outcome");
    }
  }
}

PartitionSpec::PartitionSpec(std::size_t k, std::vector<double> boundaries)
    : k_(k), boundaries_(std::move(boundaries)) {
  if (k_ == 0) {
    throw Error(ErrorKind::InvalidClassCount, "k must be at least 1");
  }
  if (boundaries_.size() != k_ - 1) {
    throw Error(ErrorKind::DimensionMismatch, "a " + std::to_string(k_) + "-class partition needs " +
                                                  std::to_string(k_ - 1) + " boundaries");
  }
  for (std::size_t j = 0; j < boundaries_.size(); ++j) {
    if (!std::isfinite(boundaries_[j])) {
      throw Error(ErrorKind::InvariantViolation, "boundaries must be finite");
    }
    if (j > 0 && boundaries_[j] < boundaries_[j - 1]) {
      throw Error(ErrorKind::InvariantViolation, "boundaries must be non-decreasing");
    }
  }
}

std::size_t PartitionSpec::classify(double score) const {
  const auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), score);
  return static_cast<std::size_t>(it - boundaries_.begin()) + 1;
}

ConditionalPMF::ConditionalPMF(std::vector<double> probs, Outcome conditioning_outcome)
    : probs_(std::move(probs)), outcome_(conditioning_outcome) {
  if (probs_.empty()) {
    throw Error(ErrorKind::InvalidClassCount, "a PMF needs at least one class");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorKind::InvalidProbability,
                  "pi_" + std::to_string(i + 1) + " = " + std::to_string(p) + " is not a probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw Error(ErrorKind::InvalidProbability, "probabilities sum to " + std::to_string(total));
  }
}

std::string_view criterion_name(ThresholdCriterion criterion) noexcept {
  switch (criterion) {
    case ThresholdCriterion::YoudenJ: return "youden";
    case ThresholdCriterion::ClosestToTopLeft: return "closest-to-top-left";
    case ThresholdCriterion::SeSpProduct: return "se-sp-product";
  }
  return "youden";
}

ThresholdCriterion parse_criterion(std::string_view name) {
  for (auto c : {ThresholdCriterion::YoudenJ, ThresholdCriterion::ClosestToTopLeft,
                 ThresholdCriterion::SeSpProduct}) {
    if (criterion_name(c) == name) {
      return c;
    }
  }
  throw Error(ErrorKind::SchemaError, "unknown threshold criterion '" + std::string(name) + "'");
}

std::pair<PartitionSpec, ScaleAssignment> discretize(const Cohort& cohort, std::size_t k) {
  if (k == 0) {
    throw Error(ErrorKind::InvalidClassCount, "k must be at least 1");
  }
  if (cohort.empty()) {
    throw Error(ErrorKind::EmptyInput, "cannot discretize an empty cohort");
  }
  const std::size_t n = cohort.size();
  if (k > n) {
    throw Error(ErrorKind::InsufficientSamples,
                "k = " + std::to_string(k) + " exceeds the cohort size " + std::to_string(n));
  }

  std::vector<double> sorted(n);
  std::transform(cohort.samples().begin(), cohort.samples().end(), sorted.begin(),
                 [](const LabeledSample& s) { return s.score; });
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> boundaries;
  boundaries.reserve(k - 1);
  for (std::size_t j = 1; j < k; ++j) {
    // 1-based rank ceil(j*n/k).
    const std::size_t rank = (j * n + k - 1) / k;
    boundaries.push_back(sorted[rank - 1]);
  }

  PartitionSpec partition(k, std::move(boundaries));
  ScaleAssignment assignment{k, {}};
  assignment.class_indices.reserve(n);
  for (const auto& s : cohort.samples()) {
    assignment.class_indices.push_back(partition.classify(s.score));
  }
  return {std::move(partition), std::move(assignment)};
}

std::pair<ConditionalPMF, ConditionalPMF> estimate_conditional_pmfs(const ScaleAssignment& assignment,
                                                                    const Cohort& cohort) {
  if (assignment.class_indices.size() != cohort.size()) {
    throw Error(ErrorKind::AlignmentError, "assignment has " + std::to_string(assignment.class_indices.size()) +
                                               " entries for a cohort of " + std::to_string(cohort.size()));
  }
  if (cohort.n1() == 0 || cohort.n0() == 0) {
    throw Error(ErrorKind::DegenerateCohort, "both outcomes must be present (n1 = " + std::to_string(cohort.n1()) +
                                                 ", n0 = " + std::to_string(cohort.n0()) + ")");
  }
  const std::size_t k = assignment.k;
  std::vector<std::size_t> diseased(k, 0);
  std::vector<std::size_t> healthy(k, 0);
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    const std::size_t cls = assignment.class_indices[i];
    if (cls < 1 || cls > k) {
      throw Error(ErrorKind::InvariantViolation, "class index " + std::to_string(cls) + " outside 1.." +
                                                     std::to_string(k));
    }
    auto& counts = cohort.samples()[i].outcome == Outcome::Diseased ? diseased : healthy;
    ++counts[cls - 1];
  }

  auto normalize = [](const std::vector<std::size_t>& counts, std::size_t total) {
    std::vector<double> probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    }
    return probs;
  };
  return {ConditionalPMF(normalize(diseased, cohort.n1()), Outcome::Diseased),
          ConditionalPMF(normalize(healthy, cohort.n0()), Outcome::Healthy)};
}

namespace {

void check_threshold(const ConditionalPMF& pmf, std::size_t c) {
  if (c < 1 || c > pmf.k() + 1) {
    throw Error(ErrorKind::ThresholdOutOfRange,
                "c = " + std::to_string(c) + " outside 1.." + std::to_string(pmf.k() + 1));
  }
}

void check_same_k(const ConditionalPMF& pmf1, const ConditionalPMF& pmf0) {
  if (pmf1.k() != pmf0.k()) {
    throw Error(ErrorKind::DimensionMismatch,
                "pmf1 has " + std::to_string(pmf1.k()) + " classes, pmf0 has " + std::to_string(pmf0.k()));
  }
}

// Se(c) and Sp(c) for c = 1..k+1, accumulated in the same order as
// sensitivity()/specificity() so the values agree bit for bit.
std::vector<double> se_curve(const ConditionalPMF& pmf1) {
  const std::size_t k = pmf1.k();
  std::vector<double> se(k + 1);
  double tail = 0.0;
  se[k] = 0.0;
  for (std::size_t c = k; c >= 2; --c) {
    tail += pmf1[c];
    se[c - 1] = std::min(tail, 1.0);
  }
  se[0] = 1.0;
  return se;
}

std::vector<double> sp_curve(const ConditionalPMF& pmf0) {
  const std::size_t k = pmf0.k();
  std::vector<double> sp(k + 1);
  double head = 0.0;
  sp[0] = 0.0;
  for (std::size_t c = 2; c <= k; ++c) {
    head += pmf0[c - 1];
    sp[c - 1] = std::min(head, 1.0);
  }
  sp[k] = 1.0;
  return sp;
}

}  // namespace

double sensitivity(const ConditionalPMF& pmf1, std::size_t c) {
  check_threshold(pmf1, c);
  if (c == 1) {
    return 1.0;
  }
  // Tail-first accumulation keeps Se(c) >= Se(c+1) exact in floating point.
  double tail = 0.0;
  for (std::size_t i = pmf1.k(); i >= c; --i) {
    tail += pmf1[i];
  }
  return std::min(tail, 1.0);
}

double specificity(const ConditionalPMF& pmf0, std::size_t c) {
  check_threshold(pmf0, c);
  if (c == pmf0.k() + 1) {
    return 1.0;
  }
  double head = 0.0;
  for (std::size_t i = 1; i < c; ++i) {
    head += pmf0[i];
  }
  return std::min(head, 1.0);
}

double criterion_value(ThresholdCriterion criterion, double se, double sp) {
  switch (criterion) {
    case ThresholdCriterion::YoudenJ:
      return se + sp - 1.0;
    case ThresholdCriterion::ClosestToTopLeft:
      return (1.0 - se) * (1.0 - se) + (1.0 - sp) * (1.0 - sp);
    case ThresholdCriterion::SeSpProduct:
      return se * sp;
  }
  return 0.0;
}

bool criterion_maximized(ThresholdCriterion criterion) noexcept {
  return criterion != ThresholdCriterion::ClosestToTopLeft;
}

DiagnosticSummary select_threshold(const ConditionalPMF& pmf1, const ConditionalPMF& pmf0,
                                   ThresholdCriterion criterion) {
  check_same_k(pmf1, pmf0);
  const std::size_t k = pmf1.k();
  const double sign = criterion_maximized(criterion) ? 1.0 : -1.0;

  const auto se = se_curve(pmf1);
  const auto sp = sp_curve(pmf0);
  std::vector<DiagnosticSummary> candidates;
  candidates.reserve(k);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 1; c <= k; ++c) {
    DiagnosticSummary s{c, se[c - 1], sp[c - 1], 0.0};
    s.criterion_value = criterion_value(criterion, s.se, s.sp);
    best = std::max(best, sign * s.criterion_value);
    candidates.push_back(s);
  }
  for (const auto& s : candidates) {
    if (sign * s.criterion_value >= best - kTieTolerance) {
      return s;
    }
  }
  return candidates.front();
}

std::vector<RocPoint> roc_points(const ConditionalPMF& pmf1, const ConditionalPMF& pmf0) {
  check_same_k(pmf1, pmf0);
  const auto se = se_curve(pmf1);
  const auto sp = sp_curve(pmf0);
  std::vector<RocPoint> points;
  points.reserve(se.size());
  for (std::size_t i = 0; i < se.size(); ++i) {
    points.push_back({1.0 - sp[i], se[i]});
  }
  return points;
}

}  // namespace scalesense
