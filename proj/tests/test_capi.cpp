// Exercises the library strictly through the C header.
#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ucdyn/ucdyn.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ucd_string_free(s);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version and catalog") {
  CHECK(std::string(ucd_version()).size() > 0);
  char* text = nullptr;
  REQUIRE(ucd_catalog_json(&text) == UCD_OK);
  auto j = nlohmann::json::parse(take(text));
  CHECK(j.size() == 5);
  CHECK(j[0].contains("id"));
}

TEST_CASE("null arguments are rejected") {
  CHECK(ucd_catalog_json(nullptr) == UCD_ERR_INVALID_ARGUMENT);
  ucd_scenario* s = nullptr;
  CHECK(ucd_scenario_builtin(nullptr, &s) == UCD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ucd_last_error()).find("null") != std::string::npos);
  CHECK(ucd_run(nullptr, nullptr) == UCD_ERR_INVALID_ARGUMENT);
  CHECK(ucd_report_consistent(nullptr) == 0);
  ucd_scenario_free(nullptr);
  ucd_report_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  ucd_scenario* s = nullptr;
  CHECK(ucd_scenario_builtin("nope", &s) == UCD_ERR_UNKNOWN_ID);
  CHECK(s == nullptr);
  CHECK(ucd_scenario_from_json("{not json", &s) == UCD_ERR_CONFIG);
  CHECK(ucd_scenario_from_file("/nonexistent/spec.json", &s) == UCD_ERR_IO);

  REQUIRE(ucd_scenario_builtin("sens", &s) == UCD_OK);
  CHECK(ucd_scenario_set(s, "eps", "0.5") == UCD_ERR_CONFIG);  // eps must stay below delta
  CHECK(ucd_scenario_set(s, "horizon", "oops") == UCD_ERR_CONFIG);
  CHECK(ucd_scenario_set_properties(s, "chaos") == UCD_ERR_CONFIG);
  char* text = nullptr;
  CHECK(ucd_check_json(s, "chaos", &text) == UCD_ERR_CONFIG);
  CHECK(ucd_bound_json(s, 0, 0, &text) == UCD_ERR_DOMAIN);
  ucd_scenario_free(s);
}

TEST_CASE("overrides land in the scenario") {
  ucd_scenario* s = nullptr;
  REQUIRE(ucd_scenario_builtin("doubling", &s) == UCD_OK);
  REQUIRE(ucd_scenario_set(s, "horizon", "300") == UCD_OK);
  REQUIRE(ucd_scenario_set_properties(s, "sensitivity,minimality") == UCD_OK);
  char* text = nullptr;
  REQUIRE(ucd_scenario_json(s, &text) == UCD_OK);
  auto j = nlohmann::json::parse(take(text));
  CHECK(j["check"]["horizon"] == 300);
  CHECK(j["properties"].size() == 2);
  ucd_scenario_free(s);
}

TEST_CASE("run, render and emit") {
  ucd_scenario* s = nullptr;
  REQUIRE(ucd_scenario_builtin("inverse-square", &s) == UCD_OK);
  ucd_report* r = nullptr;
  REQUIRE(ucd_run(s, &r) == UCD_OK);
  CHECK(ucd_report_consistent(r) == 1);

  char* json = nullptr;
  REQUIRE(ucd_report_json(r, &json) == UCD_OK);
  std::string text = take(json);
  CHECK(text == slurp(std::filesystem::path(UCDYN_GOLDEN_DIR) / "inverse-square.json"));

  char* csv = nullptr;
  REQUIRE(ucd_report_csv(r, &csv) == UCD_OK);
  CHECK(take(csv).find("periodic-points,Prop pp,Refuted,Holds") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "ucdyn_capi_emit";
  std::filesystem::remove_all(dir);
  CHECK(ucd_report_emit(r, dir.c_str(), "csv") == UCD_OK);
  CHECK(std::filesystem::exists(dir / "report.csv"));
  CHECK(ucd_report_emit(r, dir.c_str(), "yaml") == UCD_ERR_CONFIG);
  std::filesystem::remove_all(dir);

  ucd_report_free(r);
  ucd_scenario_free(s);
}

TEST_CASE("bounds and single checks") {
  ucd_scenario* s = nullptr;
  REQUIRE(ucd_scenario_builtin("doubling", &s) == UCD_OK);
  char* text = nullptr;
  REQUIRE(ucd_bound_json(s, 0, 2, &text) == UCD_OK);
  auto b = nlohmann::json::parse(take(text));
  CHECK(b["bound"].get<double>() == doctest::Approx(1.5));
  CHECK(b["violations"].get<int>() > 0);
  CHECK(b["isometry"]["status"] == "refused");

  REQUIRE(ucd_profile_csv(s, &text) == UCD_OK);
  CHECK(take(text).rfind("n,k,E,bound,holds\n", 0) == 0);

  REQUIRE(ucd_check_json(s, "sensitivity", &text) == UCD_OK);
  auto c = nlohmann::json::parse(take(text));
  CHECK(c["non-autonomous"]["outcome"] == "Holds");
  ucd_scenario_free(s);
}
