#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's numeric routines; each oracle re-derives its answer by brute force.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

namespace oracle {

/// Class of each score under k-tiling when all scores are distinct:
/// rank r (1-based) lands in class floor((r-1)k/n) + 1.
inline std::vector<std::size_t> distinct_score_classes(const std::vector<double>& scores, std::size_t k) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<std::size_t> classes(n);
  for (std::size_t r = 1; r <= n; ++r) classes[order[r - 1]] = (r - 1) * k / n + 1;
  return classes;
}

/// Sort-and-rank with ties: boundary j is the value at rank ceil(j n / k);
/// each score scans the boundaries linearly for the first one >= it.
inline std::vector<std::size_t> tie_aware_classes(const std::vector<double>& scores, std::size_t k) {
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(scores.size());
  std::vector<double> cuts;
  for (std::size_t j = 1; j < k; ++j) {
    const auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(j) * n / static_cast<double>(k) - 1e-12));
    cuts.push_back(sorted[rank - 1]);
  }
  std::vector<std::size_t> classes;
  for (double s : scores) {
    std::size_t cls = k;
    for (std::size_t j = 0; j < cuts.size(); ++j) {
      if (s <= cuts[j]) { cls = j + 1; break; }
    }
    classes.push_back(cls);
  }
  return classes;
}

/// pmf by explicit tally over (class, outcome) pairs.
inline std::vector<double> tally_pmf(const std::vector<std::size_t>& classes, const std::vector<int>& outcomes,
                                     int which, std::size_t k) {
  std::map<std::size_t, double> counts;
  double total = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (outcomes[i] == which) { counts[classes[i]] += 1; total += 1; }
  }
  std::vector<double> pmf(k, 0.0);
  for (auto [cls, cnt] : counts) pmf[cls - 1] = cnt / total;
  return pmf;
}

/// Forward-order sums, deliberately different from the library's accumulation.
inline double se(const std::vector<double>& pmf1, std::size_t c) {
  double s = 0;
  for (std::size_t i = c; i <= pmf1.size(); ++i) s += pmf1[i - 1];
  return s;
}

inline double sp(const std::vector<double>& pmf0, std::size_t c) {
  double s = 0;
  for (std::size_t i = 1; i < c; ++i) s += pmf0[i - 1];
  return s;
}

enum class Crit { Youden, TopLeft, Product };

/// Exhaustive argmax over c = 1..k; ties (within tol) go to the smallest c.
inline std::size_t best_threshold(const std::vector<double>& pmf1, const std::vector<double>& pmf0, Crit crit,
                                  double tol = 1e-12) {
  const std::size_t k = pmf1.size();
  std::vector<double> score(k);
  for (std::size_t c = 1; c <= k; ++c) {
    const double a = se(pmf1, c), b = sp(pmf0, c);
    switch (crit) {
      case Crit::Youden: score[c - 1] = a + b - 1; break;
      case Crit::TopLeft: score[c - 1] = -((1 - a) * (1 - a) + (1 - b) * (1 - b)); break;
      case Crit::Product: score[c - 1] = a * b; break;
    }
  }
  const double best = *std::max_element(score.begin(), score.end());
  for (std::size_t c = 1; c <= k; ++c) {
    if (score[c - 1] >= best - tol) return c;
  }
  return 1;
}

/// Uniform point on the simplex via normalized exponential spacings.
/// With zero_prob > 0 some coordinates are forced to zero (ties, empty classes).
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k, double zero_prob = 0.0) {
  std::exponential_distribution<double> exp1(1.0);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<double> x(k);
  double total = 0;
  for (auto& v : x) {
    v = zero(rng) ? 0.0 : exp1(rng);
    total += v;
  }
  if (total == 0) {
    x[0] = 1.0;
    return x;
  }
  for (auto& v : x) v /= total;
  return x;
}

}  // namespace oracle
