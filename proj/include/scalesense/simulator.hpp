#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scalesense/scale_core.hpp"

namespace scalesense {

/// Two-component Gaussian location model: Y ~ Bernoulli(prevalence),
/// score | Y ~ N(mu_Y, sigma^2) with mu_diseased > mu_healthy.
struct CohortSpec {
  std::size_t n = 2000;
  double prevalence = 0.3;
  double mu_healthy = 0.0;
  double mu_diseased = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  /// Throws spec-validation-error.
  void validate() const;

  friend bool operator==(const CohortSpec&, const CohortSpec&) = default;
};

/// Deterministic in spec.seed, bit for bit across platforms.
Cohort generate_cohort(const CohortSpec& spec);

/// Seed of replication r: a splitmix64 mix of (master, r); distinct for distinct r.
std::uint64_t replication_seed(std::uint64_t master, std::uint64_t replication);

/// 800-, 500-, 200-, 100-, 50-, 15-, 10-, 8-, 6-, 5-, 4-, 3- and 2-tiles, ascending.
const std::vector<std::size_t>& default_k_ladder();

inline constexpr std::size_t kDefaultReplications = 1000;

struct SweepRecord {
  std::size_t k = 0;
  double mean_se = 0.0;
  double sd_se = 0.0;
  double mean_sp = 0.0;
  double sd_sp = 0.0;
  double mean_c = 0.0;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct ExperimentReport {
  std::vector<std::size_t> k_values;
  std::size_t reps = 0;
  std::vector<SweepRecord> records;  // aligned with k_values
  CohortSpec spec;
  ThresholdCriterion criterion = ThresholdCriterion::YoudenJ;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Monte Carlo sweep: per replication, one cohort; per k, discretize,
/// estimate PMFs, pick the threshold and record (Se, Sp, c).
/// threads = 0 uses the hardware concurrency. Output does not depend on it.
ExperimentReport run_partition_sweep(const CohortSpec& spec, std::span<const std::size_t> k_values,
                                     std::size_t reps,
                                     ThresholdCriterion criterion = ThresholdCriterion::YoudenJ,
                                     unsigned threads = 0);

}  // namespace scalesense
