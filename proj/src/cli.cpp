#include "scalesense/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "scalesense/analysis_io.hpp"
#include "scalesense/errors.hpp"
#include "scalesense/refinement.hpp"
#include "scalesense/scale_core.hpp"
#include "scalesense/simulator.hpp"

namespace scalesense::cli {

namespace {

const std::vector<std::string> kCriterionNames{"youden", "closest-to-top-left", "se-sp-product"};

std::string num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string join(std::span<const double> xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += (i ? "," : "") + num(xs[i]);
  }
  return s;
}

ReportFormat resolve_format(const std::string& flag, const std::filesystem::path& out) {
  if (flag == "json") {
    return ReportFormat::StructuredJson;
  }
  if (flag == "csv") {
    return ReportFormat::FlatCsv;
  }
  return out.extension() == ".csv" ? ReportFormat::FlatCsv : ReportFormat::StructuredJson;
}

std::string default_timestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    return epoch;
  }
  return "";
}

struct CohortFlags {
  std::size_t n = 2000;
  double prevalence = 0.3;
  double mu0 = 0.0;
  double mu1 = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master RNG seed")->required();
    app->add_option("--n", n, "Samples per cohort")->capture_default_str();
    app->add_option("--prevalence", prevalence, "P[outcome = 1]")->capture_default_str();
    app->add_option("--mu0", mu0, "Mean score of the healthy group")->capture_default_str();
    app->add_option("--mu1", mu1, "Mean score of the diseased group")->capture_default_str();
    app->add_option("--sigma", sigma, "Common score standard deviation")->capture_default_str();
  }

  CohortSpec spec() const { return {n, prevalence, mu0, mu1, sigma, seed}; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete diagnostic scale toolkit: sensitivity, cutpoints, refinement checks and k-tile sweeps",
               "scalesense"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Discretize a labeled cohort file and select a threshold");
  std::string input;
  std::size_t analyze_k = 0;
  std::string criterion = "youden";
  std::string out_path;
  std::string format = "auto";
  std::string timestamp = default_timestamp();
  CohortFileSchema schema;
  bool no_header = false;
  analyze->add_option("--input", input, "Cohort file (delimited text)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--k", analyze_k, "Number of classes (k-tiles)")->required();
  analyze->add_option("--criterion", criterion, "Threshold criterion")
      ->check(CLI::IsMember(kCriterionNames))
      ->capture_default_str();
  analyze->add_option("--out", out_path, "Report destination (.json or .csv)");
  analyze->add_option("--format", format, "Report format: auto (by extension), json or csv")
      ->check(CLI::IsMember({"auto", "json", "csv"}))
      ->capture_default_str();
  analyze->add_option("--score-column", schema.score_column, "Score column name")->capture_default_str();
  analyze->add_option("--outcome-column", schema.outcome_column, "Outcome column name")->capture_default_str();
  analyze->add_option("--delimiter", schema.delimiter, "Field delimiter");
  analyze->add_flag("--no-header", no_header, "Input has no header row; score is column 1, outcome column 2");
  analyze->add_option("--timestamp", timestamp, "Provenance timestamp (default: $SOURCE_DATE_EPOCH or empty)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic labeled cohort file");
  CohortFlags sim_flags;
  sim_flags.attach(simulate);
  simulate->add_option("--out", out_path, "Cohort file destination")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep of sensitivity across k-tile scales");
  CohortFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::vector<std::size_t> k_list = default_k_ladder();
  std::size_t reps = kDefaultReplications;
  unsigned threads = 0;
  sweep->add_option("--k-list", k_list, "Comma-separated class counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--reps", reps, "Number of simulated data sets")->capture_default_str();
  sweep->add_option("--criterion", criterion, "Threshold criterion")
      ->check(CLI::IsMember(kCriterionNames))
      ->capture_default_str();
  sweep->add_option("--out", out_path, "Report destination (.json or .csv)")->required();
  sweep->add_option("--format", format, "Report format: auto (by extension), json or csv")
      ->check(CLI::IsMember({"auto", "json", "csv"}))
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads, 0 = all cores (output is unaffected)");
  sweep->add_option("--timestamp", timestamp, "Provenance timestamp (default: $SOURCE_DATE_EPOCH or empty)");

  // refine-check
  auto* refine = app.add_subcommand("refine-check", "Check a k -> k+1 refinement for sensitivity monotonicity");
  std::vector<double> base;
  std::vector<double> deltas;
  std::size_t c = 1;
  std::size_t c_prime = 1;
  bool allow_negative = false;
  refine->add_option("--base", base, "Comma-separated k-class PMF")->delimiter(',')->required();
  refine->add_option("--deltas", deltas, "Comma-separated mass moved out of each class")->delimiter(',')->required();
  refine->add_option("--c", c, "Threshold class of the k-class scale")->required();
  refine->add_option("--c-prime", c_prime, "Threshold class of the (k+1)-class scale")->required();

  // counterexample
  auto* counter = app.add_subcommand("counterexample", "Grid search for a refinement that lowers sensitivity");
  std::size_t search_k = 2;
  double grid_step = 0.1;
  bool no_assumption = false;
  counter->add_option("--k", search_k, "Classes of the base scale")->capture_default_str();
  counter->add_option("--grid-step", grid_step, "Probability grid spacing")->capture_default_str();
  counter->add_flag("--allow-negative", allow_negative, "Admit negative deltas");
  counter->add_flag("--no-assumption", no_assumption, "Do not filter on the mass-control assumption");

  std::vector<std::string> argv_storage{"scalesense"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) {
    argv.push_back(a.data());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (analyze->parsed()) {
      schema.has_header = !no_header;
      const Cohort cohort = load_cohort(input, schema);
      const ThresholdCriterion crit = parse_criterion(criterion);
      AnalysisResult result = analyze_cohort(cohort, analyze_k, crit);
      const DiagnosticSummary summary = result.summary;
      if (!out_path.empty()) {
        ReportDocument doc{kReportSchemaVersion, std::move(result), Provenance{std::nullopt, kToolVersion, timestamp}};
        write_report(doc, out_path, resolve_format(format, out_path));
      }
      out << "analyze n=" << cohort.size() << " k=" << analyze_k << " criterion=" << criterion
          << " c=" << summary.c << " se=" << num(summary.se) << " sp=" << num(summary.sp)
          << " value=" << num(summary.criterion_value) << '\n';
    } else if (simulate->parsed()) {
      const Cohort cohort = generate_cohort(sim_flags.spec());
      write_cohort(cohort, out_path);
      out << "simulate n=" << cohort.size() << " n1=" << cohort.n1() << " n0=" << cohort.n0()
          << " seed=" << sim_flags.seed << " out=" << out_path << '\n';
    } else if (sweep->parsed()) {
      const ThresholdCriterion crit = parse_criterion(criterion);
      ExperimentReport report = run_partition_sweep(sweep_flags.spec(), k_list, reps, crit, threads);
      std::size_t best_k = report.records.front().k;
      double best_se = report.records.front().mean_se;
      for (const auto& r : report.records) {
        if (r.mean_se > best_se) {
          best_se = r.mean_se;
          best_k = r.k;
        }
      }
      ReportDocument doc{kReportSchemaVersion, std::move(report),
                         Provenance{sweep_flags.seed, kToolVersion, timestamp}};
      write_report(doc, out_path, resolve_format(format, out_path));
      out << "sweep reps=" << reps << " scales=" << k_list.size() << " criterion=" << criterion
          << " best_k=" << best_k << " best_mean_se=" << num(best_se) << " out=" << out_path << '\n';
    } else if (refine->parsed()) {
      // Research mode so that negative deltas surface as an invalid_deltas verdict.
      const ConditionalPMF base_pmf(base, Outcome::Diseased);
      const auto witness = RefinementWitness::make(base_pmf, deltas, c, c_prime, DeltaMode::Research);
      const MonotonicityVerdict verdict = verify_monotonicity(witness);
      out << verdict_name(verdict.status) << " se_base=" << num(verdict.se_base)
          << " se_refined=" << num(verdict.se_refined) << " refined=" << join(witness.refined.probs()) << '\n';
      return verdict.status == VerdictStatus::Holds ? kSuccess : kDomainError;
    } else if (counter->parsed()) {
      const auto found = search_counterexample({search_k, grid_step, allow_negative, !no_assumption});
      if (!found) {
        out << "none k=" << search_k << " grid_step=" << num(grid_step) << '\n';
      } else {
        const MonotonicityVerdict verdict = verify_monotonicity(*found);
        out << "found base=" << join(found->base.probs()) << " deltas=" << join(found->deltas)
            << " c=" << found->c << " c_prime=" << found->c_prime << " se_base=" << num(verdict.se_base)
            << " se_refined=" << num(verdict.se_refined) << " status=" << verdict_name(verdict.status) << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kSuccess;
}

}  // namespace scalesense::cli
