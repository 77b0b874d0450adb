#include "scalesense/refinement.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "scalesense/errors.hpp"

namespace scalesense {

ConditionalPMF apply_refinement(const ConditionalPMF& base, std::span<const double> deltas, DeltaMode mode) {
  const std::size_t k = base.k();
  if (deltas.size() != k) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(deltas.size()) + " deltas for a " + std::to_string(k) + "-class PMF");
  }
  std::vector<double> refined(k + 1);
  double moved = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double a = deltas[i];
    if (!std::isfinite(a)) {
      throw Error(ErrorKind::InvalidDelta, "a_" + std::to_string(i + 1) + " is not finite");
    }
    if (mode == DeltaMode::Validated && a < 0.0) {
      throw Error(ErrorKind::InvalidDelta, "a_" + std::to_string(i + 1) + " = " + std::to_string(a) +
                                               " is negative");
    }
    if (a > base.probs()[i]) {
      throw Error(ErrorKind::NegativeProbability, "a_" + std::to_string(i + 1) + " = " + std::to_string(a) +
                                                      " exceeds pi_" + std::to_string(i + 1) + " = " +
                                                      std::to_string(base.probs()[i]));
    }
    refined[i] = base.probs()[i] - a;
    moved += a;
  }
  if (moved < 0.0) {
    throw Error(ErrorKind::NegativeProbability, "the new class would receive mass " + std::to_string(moved));
  }
  refined[k] = moved;
  return ConditionalPMF(std::move(refined), base.conditioning_outcome());
}

RefinementWitness RefinementWitness::make(const ConditionalPMF& base, std::vector<double> deltas, std::size_t c,
                                          std::size_t c_prime, DeltaMode mode) {
  if (c < 1 || c > base.k()) {
    throw Error(ErrorKind::ThresholdOutOfRange, "c = " + std::to_string(c) + " outside 1.." + std::to_string(base.k()));
  }
  if (c_prime < 1 || c_prime > base.k() + 1) {
    throw Error(ErrorKind::ThresholdOutOfRange,
                "c' = " + std::to_string(c_prime) + " outside 1.." + std::to_string(base.k() + 1));
  }
  ConditionalPMF refined = apply_refinement(base, deltas, mode);
  return RefinementWitness{base, std::move(deltas), std::move(refined), c, c_prime};
}

namespace {

void check_consistent(const RefinementWitness& w) {
  const std::size_t k = w.base.k();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvariantViolation, what); };
  if (w.deltas.size() != k || w.refined.k() != k + 1) {
    fail("witness dimensions do not describe a k -> k+1 refinement");
  }
  if (w.c < 1 || w.c > k || w.c_prime < 1 || w.c_prime > k + 1) {
    fail("witness thresholds out of range");
  }
  double moved = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(w.refined.probs()[i] - (w.base.probs()[i] - w.deltas[i])) > kMassTolerance) {
      fail("refined pi_" + std::to_string(i + 1) + " != base pi_" + std::to_string(i + 1) + " - a_" +
           std::to_string(i + 1));
    }
    moved += w.deltas[i];
  }
  if (std::abs(w.refined.probs()[k] - moved) > kMassTolerance) {
    fail("new class mass differs from the sum of deltas");
  }
}

bool deltas_valid(const RefinementWitness& w) {
  for (std::size_t i = 0; i < w.deltas.size(); ++i) {
    if (w.deltas[i] < 0.0 || w.deltas[i] > w.base.probs()[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool check_assumption1(const RefinementWitness& witness) {
  check_consistent(witness);
  if (witness.c > witness.c_prime) {
    throw Error(ErrorKind::NotCovered, "c = " + std::to_string(witness.c) + " > c' = " +
                                           std::to_string(witness.c_prime));
  }
  double excluded = 0.0;
  for (std::size_t i = witness.c; i < witness.c_prime; ++i) {
    excluded += witness.base[i];
  }
  double shaved = 0.0;
  for (std::size_t i = 1; i < witness.c_prime; ++i) {
    shaved += witness.deltas[i - 1];
  }
  return excluded <= shaved;
}

std::string_view verdict_name(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::Holds: return "holds";
    case VerdictStatus::Violated: return "violated";
    case VerdictStatus::AssumptionFailed: return "assumption_failed";
    case VerdictStatus::InvalidDeltas: return "invalid_deltas";
    case VerdictStatus::NotCoveredByTheorem: return "not_covered_by_theorem";
  }
  return "holds";
}

MonotonicityVerdict verify_monotonicity(const RefinementWitness& witness) {
  check_consistent(witness);
  MonotonicityVerdict verdict;
  verdict.se_base = sensitivity(witness.base, witness.c);
  verdict.se_refined = sensitivity(witness.refined, witness.c_prime);

  if (!deltas_valid(witness)) {
    verdict.status = VerdictStatus::InvalidDeltas;
  } else if (witness.c > witness.c_prime) {
    verdict.status = VerdictStatus::NotCoveredByTheorem;
  } else if (!check_assumption1(witness)) {
    verdict.status = VerdictStatus::AssumptionFailed;
  } else if (verdict.se_refined < verdict.se_base - kMassTolerance) {
    verdict.status = VerdictStatus::Violated;
  } else {
    verdict.status = VerdictStatus::Holds;
  }
  return verdict;
}

namespace {

// Advances `digits` to the next vector in lexicographic order with
// lo[i] <= digits[i] <= hi[i]. Returns false after the last one.
bool next_lexicographic(std::vector<std::int64_t>& digits, const std::vector<std::int64_t>& lo,
                        const std::vector<std::int64_t>& hi) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < hi[i]) {
      ++digits[i];
      return true;
    }
    digits[i] = lo[i];
  }
  return false;
}

// Next composition of `total` into parts.size() nonnegative parts, in
// lexicographic order starting from (0, ..., 0, total).
bool next_composition(std::vector<std::int64_t>& parts) {
  const std::size_t k = parts.size();
  // The last part is determined; find the rightmost free part that can grow.
  for (std::size_t i = k - 1; i-- > 0;) {
    std::int64_t rest = 0;
    for (std::size_t j = i + 1; j < k; ++j) {
      rest += parts[j];
    }
    if (rest > 0) {
      ++parts[i];
      for (std::size_t j = i + 1; j + 1 < k; ++j) {
        parts[j] = 0;
      }
      parts[k - 1] = rest - 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<RefinementWitness> search_counterexample(const CounterexampleQuery& query) {
  const std::size_t k = query.k;
  if (k < 2) {
    throw Error(ErrorKind::InvalidClassCount, "counterexample search needs k >= 2");
  }
  if (!(query.grid_step > 0.0) || query.grid_step > 0.5) {
    throw Error(ErrorKind::InvalidGridStep, "grid step must lie in (0, 0.5]");
  }
  const double units = 1.0 / query.grid_step;
  const double rounded = std::round(units);
  if (std::abs(units - rounded) > 1e-9 * units) {
    throw Error(ErrorKind::EmptyGrid,
                "no probability vector lies on the grid of multiples of " + std::to_string(query.grid_step));
  }
  const auto total = static_cast<std::int64_t>(rounded);

  std::vector<std::int64_t> base(k, 0);
  base[k - 1] = total;
  std::vector<std::int64_t> lo(k), hi(k), deltas(k);
  do {
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = query.allow_negative_deltas ? base[i] - total : 0;
      hi[i] = base[i];
    }
    deltas = lo;
    do {
      const std::int64_t moved = std::accumulate(deltas.begin(), deltas.end(), std::int64_t{0});
      if (moved < 0) {
        continue;
      }
      // Everything in grid units; refined has k+1 classes, the last being `moved`.
      for (std::size_t c = 1; c <= k; ++c) {
        std::int64_t se_base = 0;
        for (std::size_t i = c; i <= k; ++i) {
          se_base += base[i - 1];
        }
        for (std::size_t c_prime = c; c_prime <= k + 1; ++c_prime) {
          std::int64_t se_refined = moved;
          for (std::size_t i = c_prime; i <= k; ++i) {
            se_refined += base[i - 1] - deltas[i - 1];
          }
          if (query.enforce_assumption) {
            std::int64_t excluded = 0;
            for (std::size_t i = c; i < c_prime; ++i) {
              excluded += base[i - 1];
            }
            std::int64_t shaved = 0;
            for (std::size_t i = 1; i < c_prime; ++i) {
              shaved += deltas[i - 1];
            }
            if (excluded > shaved) {
              continue;
            }
          }
          if (se_refined < se_base) {
            std::vector<double> base_probs(k), delta_values(k);
            for (std::size_t i = 0; i < k; ++i) {
              base_probs[i] = static_cast<double>(base[i]) / rounded;
              delta_values[i] = static_cast<double>(deltas[i]) / rounded;
            }
            return RefinementWitness::make(
                ConditionalPMF(std::move(base_probs), Outcome::Diseased), std::move(delta_values), c, c_prime,
                query.allow_negative_deltas ? DeltaMode::Research : DeltaMode::Validated);
          }
        }
      }
    } while (next_lexicographic(deltas, lo, hi));
  } while (next_composition(base));
  return std::nullopt;
}

}  // namespace scalesense
