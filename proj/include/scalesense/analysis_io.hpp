#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scalesense/scale_core.hpp"
#include "scalesense/simulator.hpp"

namespace scalesense {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchemaVersion = "1.0";

/// Without a header, the score is column 0 and the outcome column 1.
struct CohortFileSchema {
  std::string score_column = "score";
  std::string outcome_column = "outcome";
  char delimiter = ',';
  bool has_header = true;

  void validate() const;
};

Cohort parse_cohort(std::istream& in, const CohortFileSchema& schema = {});
Cohort load_cohort(const std::filesystem::path& path, const CohortFileSchema& schema = {});

/// Scores are written in shortest round-trip form, so loading reproduces them exactly.
void write_cohort(const Cohort& cohort, const std::filesystem::path& path, const CohortFileSchema& schema = {});

/// Everything a single-cohort analysis produces.
struct AnalysisResult {
  PartitionSpec partition{1, {}};
  ConditionalPMF pmf1{{1.0}, Outcome::Diseased};
  ConditionalPMF pmf0{{1.0}, Outcome::Healthy};
  std::vector<RocPoint> roc;
  DiagnosticSummary summary;
  ThresholdCriterion criterion = ThresholdCriterion::YoudenJ;

  friend bool operator==(const AnalysisResult&, const AnalysisResult&) = default;
};

/// discretize -> estimate_conditional_pmfs -> roc_points + select_threshold.
AnalysisResult analyze_cohort(const Cohort& cohort, std::size_t k, ThresholdCriterion criterion);

struct Provenance {
  std::optional<std::uint64_t> seed;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ReportDocument {
  std::string schema_version = kReportSchemaVersion;
  std::variant<ExperimentReport, AnalysisResult> payload;
  Provenance provenance;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

enum class ReportFormat { StructuredJson, FlatCsv };

/// Stable key order; doubles in shortest round-trip form.
std::string to_json(const ReportDocument& doc);
ReportDocument parse_report_json(const std::string& text);

/// Header "k,mean_se,sd_se,mean_sp,sd_sp,mean_c", ascending k, 12 significant
/// digits. An analysis payload is written as one row with zero sds.
std::string to_flat_csv(const ReportDocument& doc);

void write_report(const ReportDocument& doc, const std::filesystem::path& path, ReportFormat format);

}  // namespace scalesense
