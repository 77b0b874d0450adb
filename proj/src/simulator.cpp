#include "scalesense/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <string>
#include <thread>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "scalesense/errors.hpp"

namespace scalesense {

void CohortSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::SpecValidation, what); };
  if (n < 2) {
    fail("n must be at least 2");
  }
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    fail("prevalence must lie strictly between 0 and 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail("sigma must be positive and finite");
  }
  if (!std::isfinite(mu_healthy) || !std::isfinite(mu_diseased)) {
    fail("score means must be finite");
  }
  if (!(mu_diseased > mu_healthy)) {
    fail("mu_diseased must exceed mu_healthy (positive association)");
  }
}

Cohort generate_cohort(const CohortSpec& spec) {
  spec.validate();
  boost::random::mt19937_64 engine(spec.seed);
  boost::random::bernoulli_distribution<double> outcome(spec.prevalence);
  boost::random::normal_distribution<double> noise(0.0, spec.sigma);

  std::vector<LabeledSample> samples;
  samples.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool diseased = outcome(engine);
    const double mean = diseased ? spec.mu_diseased : spec.mu_healthy;
    samples.push_back({mean + noise(engine), diseased ? Outcome::Diseased : Outcome::Healthy});
  }
  return Cohort(std::move(samples));
}

std::uint64_t replication_seed(std::uint64_t master, std::uint64_t replication) {
  std::uint64_t z = master + (replication + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const std::vector<std::size_t>& default_k_ladder() {
  static const std::vector<std::size_t> ladder{2, 3, 4, 5, 6, 8, 10, 15, 50, 100, 200, 500, 800};
  return ladder;
}

namespace {

struct Observation {
  double se;
  double sp;
  double c;
};

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  return sum / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

ExperimentReport run_partition_sweep(const CohortSpec& spec, std::span<const std::size_t> k_values,
                                     std::size_t reps, ThresholdCriterion criterion, unsigned threads) {
  spec.validate();
  if (reps == 0) {
    throw Error(ErrorKind::EmptyExperiment, "at least one replication is required");
  }
  if (k_values.empty()) {
    throw Error(ErrorKind::InvalidClassCount, "no class counts given");
  }
  std::set<std::size_t> seen;
  for (std::size_t k : k_values) {
    if (k < 2 || k > spec.n) {
      throw Error(ErrorKind::InvalidClassCount,
                  "k = " + std::to_string(k) + " outside 2.." + std::to_string(spec.n));
    }
    if (!seen.insert(k).second) {
      throw Error(ErrorKind::InvalidClassCount, "k = " + std::to_string(k) + " listed twice");
    }
  }

  const std::size_t nk = k_values.size();
  std::vector<Observation> observations(reps * nk);
  std::vector<std::exception_ptr> failures(reps);

  auto run_replication = [&](std::size_t r) {
    try {
      CohortSpec rep_spec = spec;
      rep_spec.seed = replication_seed(spec.seed, r);
      const Cohort cohort = generate_cohort(rep_spec);
      for (std::size_t j = 0; j < nk; ++j) {
        const auto [partition, assignment] = discretize(cohort, k_values[j]);
        const auto [pmf1, pmf0] = estimate_conditional_pmfs(assignment, cohort);
        const DiagnosticSummary best = select_threshold(pmf1, pmf0, criterion);
        observations[r * nk + j] = {best.se, best.sp, static_cast<double>(best.c)};
      }
    } catch (...) {
      failures[r] = std::current_exception();
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) {
      run_replication(r);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < reps; r = next++) {
          run_replication(r);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }

  ExperimentReport report;
  report.k_values.assign(k_values.begin(), k_values.end());
  report.reps = reps;
  report.spec = spec;
  report.criterion = criterion;
  std::vector<double> se(reps), sp(reps), c(reps);
  for (std::size_t j = 0; j < nk; ++j) {
    for (std::size_t r = 0; r < reps; ++r) {
      const Observation& o = observations[r * nk + j];
      se[r] = o.se;
      sp[r] = o.sp;
      c[r] = o.c;
    }
    SweepRecord record;
    record.k = k_values[j];
    record.mean_se = mean_of(se);
    record.sd_se = sd_of(se, record.mean_se);
    record.mean_sp = mean_of(sp);
    record.sd_sp = sd_of(sp, record.mean_sp);
    record.mean_c = mean_of(c);
    report.records.push_back(record);
  }
  return report;
}

}  // namespace scalesense
