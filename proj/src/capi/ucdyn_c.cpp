#include "ucdyn/ucdyn.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ucdyn/bounds.hpp"
#include "ucdyn/catalog.hpp"
#include "ucdyn/checkers.hpp"
#include "ucdyn/error.hpp"
#include "ucdyn/report.hpp"

struct ucd_scenario {
  ucdyn::ScenarioSpec spec;
};

struct ucd_report {
  ucdyn::ComparisonReport report;
};

namespace {

thread_local std::string g_last_error;

ucd_status fail(ucd_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
ucd_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return UCD_OK;
  } catch (const ucdyn::UnknownIdError& e) {
    return fail(UCD_ERR_UNKNOWN_ID, e.what());
  } catch (const ucdyn::ConfigError& e) {
    return fail(UCD_ERR_CONFIG, e.what());
  } catch (const ucdyn::TypeError& e) {
    return fail(UCD_ERR_DOMAIN, e.what());
  } catch (const ucdyn::DomainError& e) {
    return fail(UCD_ERR_DOMAIN, e.what());
  } catch (const ucdyn::ResolutionError& e) {
    return fail(UCD_ERR_RESOLUTION, e.what());
  } catch (const ucdyn::HypothesisError& e) {
    return fail(UCD_ERR_HYPOTHESIS, e.what());
  } catch (const ucdyn::IoError& e) {
    return fail(UCD_ERR_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(UCD_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(UCD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UCD_ERR_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

ucd_status null_arg(const char* what) { return fail(UCD_ERR_INVALID_ARGUMENT, std::string(what) + " is null"); }

ucd_scenario* make_scenario(ucdyn::ScenarioSpec spec) {
  spec.validate();
  // Build the family once so bad family configs fail here, not at run time.
  ucdyn::family_from_json(spec.space, spec.family);
  return new ucd_scenario{std::move(spec)};
}

}  // namespace

extern "C" {

const char* ucd_version(void) { return UCDYN_VERSION; }

const char* ucd_last_error(void) { return g_last_error.c_str(); }

void ucd_string_free(char* s) { std::free(s); }

ucd_status ucd_catalog_json(char** out_json) {
  if (!out_json) return null_arg("out_json");
  return guard([&] {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : ucdyn::catalog())
      arr.push_back({{"id", e.id}, {"summary", e.summary}, {"spec", ucdyn::spec_to_json(e.spec)}});
    *out_json = dup(arr.dump(2));
  });
}

ucd_status ucd_scenario_from_json(const char* json, ucd_scenario** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ucdyn::ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    *out = make_scenario(ucdyn::spec_from_json(j));
  });
}

ucd_status ucd_scenario_from_file(const char* path, ucd_scenario** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ucdyn::IoError(std::string("cannot read ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ucdyn::ConfigError(std::string(path) + " is not valid JSON: " + e.what());
    }
    *out = make_scenario(ucdyn::spec_from_json(j));
  });
}

ucd_status ucd_scenario_builtin(const char* id, ucd_scenario** out) {
  if (!id) return null_arg("id");
  if (!out) return null_arg("out");
  return guard([&] { *out = make_scenario(ucdyn::catalog_entry(id).spec); });
}

ucd_status ucd_scenario_set(ucd_scenario* s, const char* key, const char* value) {
  if (!s) return null_arg("scenario");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guard([&] {
    nlohmann::json v;
    try {
      v = nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      throw ucdyn::ConfigError(std::string("value for '") + key + "' is not a JSON scalar: " + value);
    }
    ucdyn::ScenarioSpec next = s->spec;
    nlohmann::json patch = ucdyn::check_config_to_json(next.check);
    const bool window_default = next.check.tail_window == std::min<std::size_t>(2000, next.check.horizon);
    patch[key] = v;
    // A horizon change drags a defaulted tail window along with it.
    if (std::string(key) == "horizon" && window_default && v.is_number_unsigned())
      patch["tail_window"] = std::min<std::size_t>(2000, v.get<std::size_t>());
    next.check = ucdyn::check_config_from_json(patch);
    next.validate();
    s->spec = std::move(next);
  });
}

ucd_status ucd_scenario_set_properties(ucd_scenario* s, const char* comma_list) {
  if (!s) return null_arg("scenario");
  if (!comma_list) return null_arg("comma_list");
  return guard([&] {
    std::vector<std::string> props;
    std::stringstream ss(comma_list);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) props.push_back(item);
    ucdyn::ScenarioSpec next = s->spec;
    next.properties = props;
    next.validate();
    s->spec = std::move(next);
  });
}

ucd_status ucd_scenario_json(const ucd_scenario* s, char** out_json) {
  if (!s) return null_arg("scenario");
  if (!out_json) return null_arg("out_json");
  return guard([&] { *out_json = dup(ucdyn::spec_to_json(s->spec).dump(2)); });
}

void ucd_scenario_free(ucd_scenario* s) { delete s; }

ucd_status ucd_run(const ucd_scenario* s, ucd_report** out) {
  if (!s) return null_arg("scenario");
  if (!out) return null_arg("out");
  return guard([&] { *out = new ucd_report{ucdyn::run_comparison(s->spec)}; });
}

ucd_status ucd_report_json(const ucd_report* r, char** out_json) {
  if (!r) return null_arg("report");
  if (!out_json) return null_arg("out_json");
  return guard([&] { *out_json = dup(ucdyn::report_dump(r->report)); });
}

ucd_status ucd_report_csv(const ucd_report* r, char** out_csv) {
  if (!r) return null_arg("report");
  if (!out_csv) return null_arg("out_csv");
  return guard([&] { *out_csv = dup(ucdyn::report_csv(r->report)); });
}

int ucd_report_consistent(const ucd_report* r) { return r && r->report.consistent() ? 1 : 0; }

ucd_status ucd_report_emit(const ucd_report* r, const char* dir, const char* format) {
  if (!r) return null_arg("report");
  if (!dir) return null_arg("dir");
  if (!format) return null_arg("format");
  return guard([&] { ucdyn::emit(r->report, dir, format); });
}

void ucd_report_free(ucd_report* r) { delete r; }

ucd_status ucd_bound_json(const ucd_scenario* s, size_t n, size_t k, char** out_json) {
  if (!s) return null_arg("scenario");
  if (!out_json) return null_arg("out_json");
  return guard([&] {
    if (k < 1) throw ucdyn::DomainError("k must be positive");
    const auto& spec = s->spec;
    ucdyn::MapFamily fam = ucdyn::family_from_json(spec.space, spec.family);
    const auto& b = spec.bounds;
    const double tol = spec.check.tol;
    ucdyn::BoundLedger ledger =
        ucdyn::build_ledger(fam, std::max(n + k, b.n_max + b.profile_k_max), spec.check.sup_grid);
    nlohmann::json records = nlohmann::json::array();
    std::size_t violations = 0;
    for (const auto& r :
         ucdyn::deviation_sweep(fam, ledger, ucdyn::sample_grid(fam.space(), b.sample_points).points, n, k, tol)) {
      if (r.k != k) continue;
      violations += !r.holds;
      records.push_back(ucdyn::record_to_json(r));
    }
    nlohmann::json out{{"family", fam.label()},
                       {"n", n},
                       {"k", k},
                       {"bound", ledger.shifted(n, k)},
                       {"approximate_bound", !ledger.exact_range(n, k)},
                       {"records", records},
                       {"violations", violations}};
    try {
      auto r = ucdyn::isometry_bound_check(fam, ledger, spec.check.sup_grid, n, k, tol);
      out["isometry"] = {{"status", "checked"}, {"record", ucdyn::record_to_json(r)}};
    } catch (const ucdyn::HypothesisError& e) {
      out["isometry"] = {{"status", "refused"}, {"reason", e.what()}};
    }
    auto p = ucdyn::collective_convergence_profile(fam, ledger, b.n_max, b.profile_k_max, b.sample_points,
                                                   spec.check.eps, tol);
    out["profile"] = {{"T", p.T}, {"collective_likely", p.collective_likely}};
    *out_json = dup(out.dump(2));
  });
}

ucd_status ucd_profile_csv(const ucd_scenario* s, char** out_csv) {
  if (!s) return null_arg("scenario");
  if (!out_csv) return null_arg("out_csv");
  return guard([&] {
    const auto& spec = s->spec;
    ucdyn::MapFamily fam = ucdyn::family_from_json(spec.space, spec.family);
    const auto& b = spec.bounds;
    auto ledger = ucdyn::build_ledger(fam, b.n_max + b.profile_k_max, spec.check.sup_grid);
    auto p = ucdyn::collective_convergence_profile(fam, ledger, b.n_max, b.profile_k_max, b.sample_points,
                                                   spec.check.eps, spec.check.tol);
    *out_csv = dup(ucdyn::profile_csv(p, spec.check.tol));
  });
}

ucd_status ucd_check_json(const ucd_scenario* s, const char* property, char** out_json) {
  if (!s) return null_arg("scenario");
  if (!property) return null_arg("property");
  if (!out_json) return null_arg("out_json");
  return guard([&] {
    if (!ucdyn::is_property(property)) throw ucdyn::ConfigError(std::string("unknown property '") + property + "'");
    ucdyn::MapFamily fam = ucdyn::family_from_json(s->spec.space, s->spec.family);
    nlohmann::json out;
    for (auto mode : {ucdyn::Mode::NonAutonomous, ucdyn::Mode::AutonomousLimit})
      out[ucdyn::to_string(mode)] =
          ucdyn::verdict_to_json(ucdyn::run_property(ucdyn::SystemView{fam, mode}, property, s->spec.check));
    *out_json = dup(out.dump(2));
  });
}

}  // extern "C"
