// ucdyn command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ucdyn/ucdyn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::optional<std::size_t> horizon, grid;
  std::optional<double> eps, delta;
  std::string out;
  std::string format = "json";
  std::string properties;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--horizon", o.horizon, "orbit horizon N");
  cmd->add_option("--grid", o.grid, "grid resolution");
  cmd->add_option("--eps", o.eps, "closeness target");
  cmd->add_option("--delta", o.delta, "separation target");
  cmd->add_option("--out", o.out, "directory for emitted files");
  cmd->add_option("--format", o.format, "csv | json | plotdata")->check(CLI::IsMember({"csv", "json", "plotdata"}));
}

int exit_for(ucd_status s) {
  switch (s) {
    case UCD_OK:
      return kExitOk;
    case UCD_ERR_CONFIG:
    case UCD_ERR_UNKNOWN_ID:
    case UCD_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    default:
      return kExitFailure;
  }
}

class Failure {
 public:
  explicit Failure(ucd_status s) : status(s), message(ucd_last_error()) {}
  ucd_status status;
  std::string message;
};

void ok(ucd_status s) {
  if (s != UCD_OK) throw Failure(s);
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  ucd_string_free(s);
  return out;
}

struct Scenario {
  ucd_scenario* p = nullptr;
  Scenario() = default;
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;
  ~Scenario() { ucd_scenario_free(p); }
};

struct Report {
  ucd_report* p = nullptr;
  Report() = default;
  Report(const Report&) = delete;
  Report& operator=(const Report&) = delete;
  ~Report() { ucd_report_free(p); }
};

// A path to a JSON spec, or failing that a catalog id.
void load(Scenario& s, const std::string& source) {
  if (std::filesystem::exists(source)) ok(ucd_scenario_from_file(source.c_str(), &s.p));
  else ok(ucd_scenario_builtin(source.c_str(), &s.p));
}

void apply(Scenario& s, const Overrides& o) {
  if (o.horizon) ok(ucd_scenario_set(s.p, "horizon", std::to_string(*o.horizon).c_str()));
  if (o.grid) ok(ucd_scenario_set(s.p, "grid", std::to_string(*o.grid).c_str()));
  auto real = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  if (o.eps) ok(ucd_scenario_set(s.p, "eps", real(*o.eps).c_str()));
  if (o.delta) ok(ucd_scenario_set(s.p, "delta", real(*o.delta).c_str()));
  if (!o.properties.empty()) ok(ucd_scenario_set_properties(s.p, o.properties.c_str()));
}

int run_report(Scenario& s, const Overrides& o) {
  Report r;
  ok(ucd_run(s.p, &r.p));
  if (!o.out.empty()) {
    ok(ucd_report_emit(r.p, o.out.c_str(), o.format.c_str()));
    std::cerr << "wrote " << o.format << " output to " << o.out << "\n";
  } else if (o.format == "csv") {
    char* text = nullptr;
    ok(ucd_report_csv(r.p, &text));
    std::cout << take(text);
  } else if (o.format == "json") {
    char* text = nullptr;
    ok(ucd_report_json(r.p, &text));
    std::cout << take(text);
  } else {
    std::cerr << "plotdata output needs --out <dir>\n";
    return kExitConfig;
  }
  if (!ucd_report_consistent(r.p)) {
    std::cerr << "inconsistency detected: a verdict pair contradicts an applicable theorem\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucdyn: compare non-autonomous systems with their limit map"};
  app.set_version_flag("--version", std::string(ucd_version()));
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list the scenario catalog");

  Overrides run_o;
  std::string spec_path;
  auto* run = app.add_subcommand("run", "run a scenario spec (JSON file) in both modes");
  run->add_option("spec", spec_path, "scenario JSON file")->required();
  run->add_option("--properties", run_o.properties, "comma-separated subset of properties");
  add_overrides(run, run_o);

  Overrides rep_o;
  std::string example_id;
  auto* reproduce = app.add_subcommand("reproduce", "run a catalog scenario with its pinned parameters");
  reproduce->add_option("id", example_id, "catalog id (see `list`)")->required();
  add_overrides(reproduce, rep_o);

  Overrides bound_o;
  std::string bound_spec;
  std::size_t bound_n = 0, bound_k = 1;
  auto* bound = app.add_subcommand("bound", "deviation bounds at (n, k); --format csv prints the E(n,k) profile");
  bound->add_option("spec", bound_spec, "scenario JSON file or catalog id")->required();
  bound->add_option("--n", bound_n, "window start n");
  bound->add_option("--k", bound_k, "window length k")->check(CLI::PositiveNumber);
  add_overrides(bound, bound_o);

  Overrides check_o;
  std::string property, check_spec;
  auto* check = app.add_subcommand("check", "run one property checker in both modes");
  check->add_option("property", property, "property name")->required();
  check->add_option("spec", check_spec, "scenario JSON file or catalog id")->required();
  add_overrides(check, check_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      char* text = nullptr;
      ok(ucd_catalog_json(&text));
      std::cout << take(text) << "\n";
      return kExitOk;
    }
    if (run->parsed()) {
      Scenario s;
      ok(ucd_scenario_from_file(spec_path.c_str(), &s.p));
      apply(s, run_o);
      return run_report(s, run_o);
    }
    if (reproduce->parsed()) {
      Scenario s;
      ok(ucd_scenario_builtin(example_id.c_str(), &s.p));
      apply(s, rep_o);
      return run_report(s, rep_o);
    }
    if (bound->parsed()) {
      Scenario s;
      load(s, bound_spec);
      apply(s, bound_o);
      char* text = nullptr;
      if (bound_o.format == "csv") ok(ucd_profile_csv(s.p, &text));
      else ok(ucd_bound_json(s.p, bound_n, bound_k, &text));
      std::string body = take(text);
      if (!bound_o.out.empty()) {
        std::filesystem::create_directories(bound_o.out);
        auto path = std::filesystem::path(bound_o.out) / (bound_o.format == "csv" ? "profile.csv" : "bound.json");
        std::ofstream(path) << body << (bound_o.format == "csv" ? "" : "\n");
      } else {
        std::cout << body << (bound_o.format == "csv" ? "" : "\n");
      }
      return kExitOk;
    }
    if (check->parsed()) {
      Scenario s;
      load(s, check_spec);
      apply(s, check_o);
      char* text = nullptr;
      ok(ucd_check_json(s.p, property.c_str(), &text));
      std::cout << take(text) << "\n";
      return kExitOk;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
