#pragma once

// The (k) -> (k+1) refinement model: the refined scale keeps
// pi_i - a_i in each old class and collects sum(a_i) in a new top class.
// A witness fixes the deltas and the thresholds c (old scale) and c' (new).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scalesense/scale_core.hpp"

namespace scalesense {

/// Validated mode admits only 0 <= a_i <= pi_i. Research mode also admits
/// negative deltas, as long as the refined vector stays a probability vector.
enum class DeltaMode { Validated, Research };

ConditionalPMF apply_refinement(const ConditionalPMF& base, std::span<const double> deltas,
                                DeltaMode mode = DeltaMode::Validated);

struct RefinementWitness {
  ConditionalPMF base;
  std::vector<double> deltas;
  ConditionalPMF refined;
  std::size_t c = 1;
  std::size_t c_prime = 1;

  /// Builds refined via apply_refinement and range-checks both thresholds.
  static RefinementWitness make(const ConditionalPMF& base, std::vector<double> deltas, std::size_t c,
                                std::size_t c_prime, DeltaMode mode = DeltaMode::Validated);
};

/// sum_{i=c}^{c'-1} pi_i <= sum_{i=1}^{c'-1} a_i, with b_i taken as a_i.
/// Throws not-covered when c > c', invariant-violation on an inconsistent witness.
bool check_assumption1(const RefinementWitness& witness);

enum class VerdictStatus { Holds, Violated, AssumptionFailed, InvalidDeltas, NotCoveredByTheorem };

std::string_view verdict_name(VerdictStatus status) noexcept;

struct MonotonicityVerdict {
  VerdictStatus status = VerdictStatus::Holds;
  double se_base = 0.0;
  double se_refined = 0.0;
};

/// se values are always filled in, whatever the status. Throws
/// invariant-violation only if the witness breaks the refinement identity.
MonotonicityVerdict verify_monotonicity(const RefinementWitness& witness);

struct CounterexampleQuery {
  std::size_t k = 2;
  double grid_step = 0.1;
  bool allow_negative_deltas = false;
  bool enforce_assumption = true;
};

/// Lexicographic grid search over (base, deltas, c, c') with c <= c'.
/// Returns the first witness with se_refined < se_base, if any.
std::optional<RefinementWitness> search_counterexample(const CounterexampleQuery& query);

}  // namespace scalesense
