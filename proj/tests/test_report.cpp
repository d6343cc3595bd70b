#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ucdyn/catalog.hpp"
#include "ucdyn/error.hpp"
#include "ucdyn/report.hpp"

using namespace ucdyn;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HypothesisProfile profile_with(bool commutes, bool summable, bool feeble, bool uniform) {
  HypothesisProfile p;
  p.commutes.outcome = commutes ? Outcome::Holds : Outcome::Refuted;
  p.summability.flag = summable ? SummabilityFlag::SummableLikely : SummabilityFlag::DivergentLikely;
  p.feeble_open.outcome = feeble ? Outcome::Holds : Outcome::Refuted;
  p.uniform_convergence.outcome = uniform ? Outcome::Holds : Outcome::Inconclusive;
  return p;
}

const ReportRow& row(const ComparisonReport& r, const std::string& property) {
  for (const auto& x : r.rows)
    if (x.property == property) return x;
  throw std::runtime_error("missing row " + property);
}

}  // namespace

TEST_CASE("applicability table") {
  auto all = profile_with(true, true, true, true);
  for (const auto& p : property_names()) CHECK(applicability(p, all).any());

  auto no_feeble = profile_with(true, true, false, true);
  Applicability tt = applicability("transitivity", no_feeble);
  CHECK(tt.F_implies_f);
  CHECK_FALSE(tt.f_implies_F);
  CHECK_FALSE(applicability("topological-mixing", no_feeble).any());
  CHECK_FALSE(applicability("li-yorke-sensitivity", no_feeble).any());
  CHECK(applicability("minimality", no_feeble).f_implies_F);

  Applicability pp = applicability("periodic-points", all);
  CHECK(pp.F_implies_f);
  CHECK_FALSE(pp.f_implies_F);

  auto none = profile_with(false, false, false, false);
  Applicability eq = applicability("equicontinuity", none);
  CHECK_FALSE(eq.any());
  CHECK(eq.missing == std::vector<std::string>{"commutes", "summable"});

  CHECK(theorem_label("dense-periodicity") == "Prop pp");
  CHECK_THROWS_AS(theorem_label("chaos"), ConfigError);
}

TEST_CASE("scenario report is consistent and round-trips") {
  ScenarioSpec spec = catalog_entry("inverse-square").spec;
  ComparisonReport r = run_comparison(spec);
  CHECK(r.consistent());
  CHECK(r.rows.size() == property_names().size());
  const auto& pp = row(r, "periodic-points");
  CHECK(pp.verdict_F.refuted());
  CHECK(pp.verdict_f.holds());
  CHECK(pp.consistent);
  CHECK(pp.note.find("one-directional") != std::string::npos);

  std::string text = report_dump(r);
  CHECK(report_dump(report_from_json(nlohmann::json::parse(text))) == text);
  CHECK(report_dump(run_comparison(spec)) == text);
}

TEST_CASE("empty property list gives a header-only csv") {
  ScenarioSpec spec = catalog_entry("inverse-square").spec;
  spec.properties.clear();
  ComparisonReport r = run_comparison(spec);
  CHECK(r.rows.empty());
  CHECK(report_csv(r) == "property,label,verdict_F,verdict_f,theorem_applicable,consistent,note\n");
}

TEST_CASE("sens scenario verdicts") {
  ComparisonReport r = run_comparison(catalog_entry("sens").spec);
  CHECK(r.consistent());
  for (const char* p : {"sensitivity", "transitivity", "topological-mixing"}) {
    CHECK_MESSAGE(row(r, p).verdict_F.refuted(), p);
    CHECK_MESSAGE(row(r, p).verdict_f.holds(), p);
  }
  CHECK(r.profile.feeble_open.refuted());
  std::string csv = report_csv(r);
  CHECK(csv.find("sensitivity,Prop sen,Refuted,Holds") != std::string::npos);
}

TEST_CASE("emit writes the requested format") {
  ScenarioSpec spec = catalog_entry("inverse-square").spec;
  spec.properties = {"minimality"};
  ComparisonReport r = run_comparison(spec);
  auto dir = std::filesystem::temp_directory_path() / "ucdyn_emit_test";
  std::filesystem::remove_all(dir);
  CHECK(emit(r, dir.string(), "json").size() == 1);
  CHECK(slurp(dir / "report.json") == report_dump(r));
  CHECK(emit(r, dir.string(), "csv").size() == 1);
  auto dat = emit(r, dir.string(), "plotdata");
  CHECK(dat.size() == 5);
  CHECK(slurp(dir / "profile_T.dat").rfind("# n T(n)\n", 0) == 0);
  CHECK_THROWS_AS(emit(r, dir.string(), "xml"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("catalog") {
  CHECK(catalog().size() == 5);
  CHECK_THROWS_AS(catalog_entry("nope"), UnknownIdError);
}

TEST_CASE("golden reports") {
  for (const auto& e : catalog()) {
    auto path = std::filesystem::path(UCDYN_GOLDEN_DIR) / (e.id + ".json");
    REQUIRE_MESSAGE(std::filesystem::exists(path), path.string());
    CHECK_MESSAGE(report_dump(run_comparison(e.spec)) == slurp(path), e.id);
  }
}
