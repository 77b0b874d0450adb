#include "scalesense/analysis_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "scalesense/errors.hpp"

namespace scalesense {

using Json = nlohmann::ordered_json;

void CohortFileSchema::validate() const {
  if (delimiter == '\n' || delimiter == '\r' || delimiter == '\0') {
    throw Error(ErrorKind::SchemaError, "delimiter must be a printable single character");
  }
  if (has_header) {
    if (score_column.empty() || outcome_column.empty()) {
      throw Error(ErrorKind::SchemaError, "column names must be nonempty");
    }
    if (score_column == outcome_column) {
      throw Error(ErrorKind::SchemaError, "score and outcome columns must differ");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; };
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorKind::SchemaError, "missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

std::string row_label(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string fixed12(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace

Cohort parse_cohort(std::istream& in, const CohortFileSchema& schema) {
  schema.validate();
  std::size_t score_col = 0;
  std::size_t outcome_col = 1;
  std::size_t line_no = 0;
  std::string line;

  if (schema.has_header) {
    bool found = false;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
        line.erase(0, 3);
      }
      if (!trim(line).empty()) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::EmptyInput, "no header row");
    }
    const auto header = split(line, schema.delimiter);
    score_col = find_column(header, schema.score_column);
    outcome_col = find_column(header, schema.outcome_column);
  }

  std::vector<LabeledSample> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    ++row;
    const auto fields = split(line, schema.delimiter);
    const std::string where = row_label(row, line_no);
    if (fields.size() <= std::max(score_col, outcome_col)) {
      throw Error(ErrorKind::ParseError, where + ": expected at least " +
                                             std::to_string(std::max(score_col, outcome_col) + 1) + " fields");
    }

    const std::string_view score_text = fields[score_col];
    double score = 0.0;
    const auto [end, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || end != score_text.data() + score_text.size()) {
      throw Error(ErrorKind::ParseError, where + ": score '" + std::string(score_text) + "' is not a number");
    }
    if (!std::isfinite(score)) {
      throw Error(ErrorKind::ParseError, where + ": score '" + std::string(score_text) + "' is not finite");
    }

    const std::string_view outcome_text = fields[outcome_col];
    Outcome outcome;
    if (outcome_text == "1") {
      outcome = Outcome::Diseased;
    } else if (outcome_text == "0") {
      outcome = Outcome::Healthy;
    } else {
      throw Error(ErrorKind::ParseError,
                  where + ": outcome must be 0 or 1, got '" + std::string(outcome_text) + "'");
    }
    samples.push_back({score, outcome});
  }
  if (samples.empty()) {
    throw Error(ErrorKind::EmptyInput, "no data rows");
  }
  return Cohort(std::move(samples));
}

Cohort load_cohort(const std::filesystem::path& path, const CohortFileSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
  }
  return parse_cohort(in, schema);
}

void write_cohort(const Cohort& cohort, const std::filesystem::path& path, const CohortFileSchema& schema) {
  schema.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  }
  if (schema.has_header) {
    out << schema.score_column << schema.delimiter << schema.outcome_column << '\n';
  }
  for (const auto& s : cohort.samples()) {
    out << shortest(s.score) << schema.delimiter << (s.outcome == Outcome::Diseased ? '1' : '0') << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
  }
}

AnalysisResult analyze_cohort(const Cohort& cohort, std::size_t k, ThresholdCriterion criterion) {
  auto [partition, assignment] = discretize(cohort, k);
  auto [pmf1, pmf0] = estimate_conditional_pmfs(assignment, cohort);
  AnalysisResult result{std::move(partition), pmf1, pmf0, roc_points(pmf1, pmf0), {}, criterion};
  result.summary = select_threshold(pmf1, pmf0, criterion);
  return result;
}

namespace {

Json spec_to_json(const CohortSpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["prevalence"] = spec.prevalence;
  j["mu_healthy"] = spec.mu_healthy;
  j["mu_diseased"] = spec.mu_diseased;
  j["sigma"] = spec.sigma;
  j["seed"] = spec.seed;
  return j;
}

CohortSpec spec_from_json(const Json& j) {
  CohortSpec spec;
  spec.n = j.at("n").get<std::size_t>();
  spec.prevalence = j.at("prevalence").get<double>();
  spec.mu_healthy = j.at("mu_healthy").get<double>();
  spec.mu_diseased = j.at("mu_diseased").get<double>();
  spec.sigma = j.at("sigma").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

Json payload_to_json(const ExperimentReport& report) {
  Json j;
  j["kind"] = "experiment";
  j["criterion"] = criterion_name(report.criterion);
  j["reps"] = report.reps;
  j["k_values"] = report.k_values;
  j["spec"] = spec_to_json(report.spec);
  Json records = Json::array();
  for (const auto& r : report.records) {
    Json rec;
    rec["k"] = r.k;
    rec["mean_se"] = r.mean_se;
    rec["sd_se"] = r.sd_se;
    rec["mean_sp"] = r.mean_sp;
    rec["sd_sp"] = r.sd_sp;
    rec["mean_c"] = r.mean_c;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j;
}

Json payload_to_json(const AnalysisResult& result) {
  Json j;
  j["kind"] = "analysis";
  j["criterion"] = criterion_name(result.criterion);
  j["partition"] = {{"k", result.partition.k()}, {"boundaries", result.partition.boundaries()}};
  j["pmf1"] = std::vector<double>(result.pmf1.probs().begin(), result.pmf1.probs().end());
  j["pmf0"] = std::vector<double>(result.pmf0.probs().begin(), result.pmf0.probs().end());
  Json roc = Json::array();
  for (const auto& p : result.roc) {
    roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}});
  }
  j["roc"] = std::move(roc);
  j["summary"] = {{"c", result.summary.c},
                  {"se", result.summary.se},
                  {"sp", result.summary.sp},
                  {"criterion_value", result.summary.criterion_value}};
  return j;
}

ExperimentReport experiment_from_json(const Json& j) {
  ExperimentReport report;
  report.criterion = parse_criterion(j.at("criterion").get<std::string>());
  report.reps = j.at("reps").get<std::size_t>();
  report.k_values = j.at("k_values").get<std::vector<std::size_t>>();
  report.spec = spec_from_json(j.at("spec"));
  for (const auto& rec : j.at("records")) {
    report.records.push_back({rec.at("k").get<std::size_t>(), rec.at("mean_se").get<double>(),
                              rec.at("sd_se").get<double>(), rec.at("mean_sp").get<double>(),
                              rec.at("sd_sp").get<double>(), rec.at("mean_c").get<double>()});
  }
  return report;
}

AnalysisResult analysis_from_json(const Json& j) {
  const Json& part = j.at("partition");
  AnalysisResult result{
      PartitionSpec(part.at("k").get<std::size_t>(), part.at("boundaries").get<std::vector<double>>()),
      ConditionalPMF(j.at("pmf1").get<std::vector<double>>(), Outcome::Diseased),
      ConditionalPMF(j.at("pmf0").get<std::vector<double>>(), Outcome::Healthy),
      {},
      {},
      parse_criterion(j.at("criterion").get<std::string>())};
  for (const auto& p : j.at("roc")) {
    result.roc.push_back({p.at("fpr").get<double>(), p.at("tpr").get<double>()});
  }
  const Json& s = j.at("summary");
  result.summary = {s.at("c").get<std::size_t>(), s.at("se").get<double>(), s.at("sp").get<double>(),
                    s.at("criterion_value").get<double>()};
  return result;
}

}  // namespace

std::string to_json(const ReportDocument& doc) {
  Json j;
  j["schema_version"] = doc.schema_version;
  Json prov;
  if (doc.provenance.seed) {
    prov["seed"] = *doc.provenance.seed;
  } else {
    prov["seed"] = nullptr;
  }
  prov["tool_version"] = doc.provenance.tool_version;
  prov["timestamp"] = doc.provenance.timestamp;
  j["provenance"] = std::move(prov);
  j["payload"] = std::visit([](const auto& payload) { return payload_to_json(payload); }, doc.payload);
  return j.dump(2) + "\n";
}

ReportDocument parse_report_json(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<std::string>();
    const Json& prov = j.at("provenance");
    if (!prov.at("seed").is_null()) {
      doc.provenance.seed = prov.at("seed").get<std::uint64_t>();
    }
    doc.provenance.tool_version = prov.at("tool_version").get<std::string>();
    doc.provenance.timestamp = prov.at("timestamp").get<std::string>();
    const Json& payload = j.at("payload");
    const auto kind = payload.at("kind").get<std::string>();
    if (kind == "experiment") {
      doc.payload = experiment_from_json(payload);
    } else if (kind == "analysis") {
      doc.payload = analysis_from_json(payload);
    } else {
      throw Error(ErrorKind::SchemaError, "unknown payload kind '" + kind + "'");
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string to_flat_csv(const ReportDocument& doc) {
  std::vector<SweepRecord> rows;
  if (const auto* report = std::get_if<ExperimentReport>(&doc.payload)) {
    rows = report->records;
  } else {
    const auto& result = std::get<AnalysisResult>(doc.payload);
    rows.push_back({result.partition.k(), result.summary.se, 0.0, result.summary.sp, 0.0,
                    static_cast<double>(result.summary.c)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.k < b.k; });

  std::ostringstream out;
  out << "k,mean_se,sd_se,mean_sp,sd_sp,mean_c\n";
  for (const auto& r : rows) {
    out << r.k << ',' << fixed12(r.mean_se) << ',' << fixed12(r.sd_se) << ',' << fixed12(r.mean_sp) << ','
        << fixed12(r.sd_sp) << ',' << fixed12(r.mean_c) << '\n';
  }
  return out.str();
}

void write_report(const ReportDocument& doc, const std::filesystem::path& path, ReportFormat format) {
  const std::string text = format == ReportFormat::StructuredJson ? to_json(doc) : to_flat_csv(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw Error(ErrorKind::IoError, "write to '" + path.string() + "' failed");
  }
}

}  // namespace scalesense
