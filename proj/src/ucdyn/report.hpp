#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ucdyn/bounds.hpp"
#include "ucdyn/config.hpp"
#include "ucdyn/family.hpp"
#include "ucdyn/verdict.hpp"

namespace ucdyn {

/// Which implications between the two systems the profile licenses.
struct Applicability {
  bool f_implies_F = false;  // (X,f) has P  =>  (X,F) has P
  bool F_implies_f = false;  // (X,F) has P  =>  (X,f) has P
  std::vector<std::string> missing;
  bool any() const { return f_implies_F || F_implies_f; }
};

/// Theorem label a row is judged against, e.g. "Prop tt".
std::string theorem_label(const std::string& property);
Applicability applicability(const std::string& property, const HypothesisProfile& profile);

struct ReportRow {
  std::string property;
  std::string label;
  Verdict verdict_F;
  Verdict verdict_f;
  Applicability applicable;
  bool consistent = true;
  std::string note;
  nlohmann::json extra = nlohmann::json::object();
};

struct ComparisonReport {
  std::string id;
  std::string family;
  nlohmann::json scenario;  // canonical spec without output section
  HypothesisProfile profile;
  std::vector<ReportRow> rows;
  nlohmann::json bounds;        // bound-check summary
  nlohmann::json cross_checks;  // array
  nlohmann::json series;        // plot series
  nlohmann::json provenance;
  std::vector<std::string> warnings;

  bool consistent() const;
};

/// profile -> bounds -> checkers in both modes -> rows.
ComparisonReport run_comparison(const ScenarioSpec& spec);

/// Bound-check summary for a family (what reports carry under "bounds").
nlohmann::json bound_summary(const MapFamily& fam, const ScenarioSpec& spec, const HypothesisProfile& profile);

nlohmann::json report_to_json(const ComparisonReport& r);
ComparisonReport report_from_json(const nlohmann::json& j);
/// Deterministic text: sorted keys, two-space indent, trailing newline.
std::string report_dump(const ComparisonReport& r);

std::string report_csv(const ComparisonReport& r);

/// Writes report.json, report.csv, or the plot .dat files into `dir`;
/// returns the paths written. Throws IoError.
std::vector<std::string> emit(const ComparisonReport& r, const std::string& dir, const std::string& format);

}  // namespace ucdyn
