#include "ucdyn/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "ucdyn/checkers.hpp"
#include "ucdyn/error.hpp"
#include "ucdyn/orbit.hpp"
#include "ucdyn/region.hpp"

namespace ucdyn {

using nlohmann::json;

namespace {

enum class Rule { Equivalence, FeebleForward, FeebleOnly, PeriodicOneWay, ProximalPair, LiYorke };

Rule rule_for(const std::string& p) {
  static const std::map<std::string, Rule> rules{
      {"equicontinuity", Rule::Equivalence},     {"minimality", Rule::Equivalence},
      {"transitivity", Rule::FeebleForward},     {"weak-mixing", Rule::FeebleForward},
      {"sensitivity", Rule::FeebleForward},      {"cofinite-sensitivity", Rule::FeebleForward},
      {"topological-mixing", Rule::FeebleOnly},  {"periodic-points", Rule::PeriodicOneWay},
      {"dense-periodicity", Rule::PeriodicOneWay}, {"proximal-cells", Rule::ProximalPair},
      {"proximal-pairs", Rule::ProximalPair},    {"li-yorke-sensitivity", Rule::LiYorke}};
  auto it = rules.find(p);
  if (it == rules.end()) throw ConfigError("unknown property '" + p + "'");
  return it->second;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

Verdict guarded(const SystemView& sys, const std::string& property, const CheckConfig& cfg) {
  try {
    return run_property(sys, property, cfg);
  } catch (const Error& e) {
    return Verdict{property, to_string(sys.mode), Outcome::Inconclusive, Basis::Horizon, {{"error", e.what()}},
                   std::string("checker failed: ") + e.what()};
  }
}

// Evenly strided subset of at most `count` points.
std::vector<Point> subsample(const PointCloud& c, std::size_t count) {
  if (c.points.size() <= count || count == 0) return c.points;
  std::vector<Point> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(c.points[i * c.points.size() / count]);
  return out;
}

struct BoundsOutput {
  json summary;
  json series;
};

json sweep_summary(const std::vector<DeviationRecord>& recs, std::size_t n, std::size_t k_max, std::size_t points,
                   bool guaranteed) {
  std::size_t violations = 0;
  double max_excess = -std::numeric_limits<double>::infinity();
  bool approx = false;
  json first = nullptr;
  for (const auto& r : recs) {
    max_excess = std::max(max_excess, r.measured - r.bound);
    approx = approx || r.approximate_bound;
    if (!r.holds && violations++ == 0) first = record_to_json(r);
  }
  return {{"n", n},
          {"k_max", k_max},
          {"points", points},
          {"records", recs.size()},
          {"violations", violations},
          {"first_violation", first},
          {"max_excess", max_excess},
          {"approximate_bound", approx},
          {"guaranteed", guaranteed}};
}

BoundsOutput compute_bounds(const MapFamily& fam, const ScenarioSpec& spec, const HypothesisProfile& profile) {
  const auto& b = spec.bounds;
  const double tol = spec.check.tol;
  BoundsOutput out;
  const std::size_t n_terms = std::max(b.k_max + 10, b.n_max + b.profile_k_max);
  BoundLedger ledger = build_ledger(fam, n_terms, spec.check.sup_grid);
  const bool all_exact = std::all_of(ledger.exact.begin(), ledger.exact.end(), [](bool e) { return e; });
  out.summary["ledger"] = {{"terms", n_terms}, {"exact", all_exact}, {"S_k_max", ledger.prefix[b.k_max]}};

  auto points = subsample(sample_grid(fam.space(), b.sample_points), b.sample_points);
  const bool guaranteed = profile.commutes.holds();
  json dev_series = json::array(), bound_series = json::array();
  for (std::size_t n : {std::size_t{0}, std::size_t{10}}) {
    const char* key = n == 0 ? "deviation" : "shifted";
    try {
      auto recs = deviation_sweep(fam, ledger, points, n, b.k_max, tol);
      out.summary[key] = sweep_summary(recs, n, b.k_max, points.size(), guaranteed);
      if (n == 0) {
        std::vector<double> worst(b.k_max + 1, 0.0);
        for (const auto& r : recs) worst[r.k] = std::max(worst[r.k], r.measured);
        for (std::size_t k = 1; k <= b.k_max; ++k) {
          dev_series.push_back({k, worst[k]});
          bound_series.push_back({k, ledger.prefix[k]});
        }
      }
    } catch (const Error& e) {
      out.summary[key] = {{"error", e.what()}};
    }
  }
  try {
    DeviationRecord r = isometry_bound_check(fam, ledger, spec.check.sup_grid, 5, 3, tol);
    out.summary["isometry"] = {{"status", "checked"}, {"record", record_to_json(r)}};
  } catch (const HypothesisError& e) {
    out.summary["isometry"] = {{"status", "refused"}, {"reason", e.what()}};
  } catch (const Error& e) {
    out.summary["isometry"] = {{"status", "error"}, {"reason", e.what()}};
  }
  json t_series = json::array();
  try {
    CollectiveProfile p =
        collective_convergence_profile(fam, ledger, b.n_max, b.profile_k_max, b.sample_points, spec.check.eps, tol);
    bool respected = true;
    for (std::size_t n = 0; n <= p.n_max; ++n)
      for (std::size_t k = 0; k < p.k_max; ++k) respected = respected && p.E[n][k] <= p.bound[n][k] + tol;
    out.summary["profile"] = {{"n_max", p.n_max},
                              {"k_max", p.k_max},
                              {"T", p.T},
                              {"collective_likely", p.collective_likely},
                              {"within_bound", respected}};
    for (std::size_t n = 0; n <= p.n_max; ++n) t_series.push_back({n, p.T[n]});
  } catch (const Error& e) {
    out.summary["profile"] = {{"error", e.what()}};
  }
  out.series = {{"deviation", dev_series}, {"bound", bound_series}, {"profile_T", t_series}};
  return out;
}

json diameter_series(const MapFamily& fam, Mode mode, const CheckConfig& cfg) {
  const std::size_t horizon = std::min<std::size_t>(cfg.horizon, 200);
  json s = json::array();
  try {
    StepSequence steps(SystemView{fam, mode}, horizon);
    Point c = sample_grid(fam.space(), cfg.grid).points.front();
    Region r = ball_region(fam.space(), c, cfg.eps);
    s.push_back({0, region_diameter(fam.space(), r)});
    for (std::size_t n = 1; n <= horizon; ++n) {
      r = image(fam.space(), steps.step(n), r);
      s.push_back({n, region_diameter(fam.space(), r)});
    }
  } catch (const Error&) {
  }
  return s;
}

ReportRow judge(const std::string& property, Verdict F, Verdict f, const HypothesisProfile& profile) {
  ReportRow row;
  row.property = property;
  row.label = theorem_label(property);
  row.verdict_F = std::move(F);
  row.verdict_f = std::move(f);
  row.applicable = applicability(property, profile);
  const auto& a = row.applicable;
  const bool F_to_f_broken = a.F_implies_f && row.verdict_F.holds() && row.verdict_f.refuted();
  const bool f_to_F_broken = a.f_implies_F && row.verdict_f.holds() && row.verdict_F.refuted();
  row.consistent = !F_to_f_broken && !f_to_F_broken;
  const bool one_way = rule_for(property) == Rule::PeriodicOneWay;
  if (!row.consistent) {
    row.note = "contradicts " + row.label + (F_to_f_broken ? ": (X,F) holds but (X,f) is refuted"
                                                           : ": (X,f) holds but (X,F) is refuted");
  } else if (one_way && row.verdict_F.refuted() && row.verdict_f.holds()) {
    row.note = row.label + " is one-directional; no inconsistency";
  } else if (!a.any()) {
    row.note = "not applicable: " + join(a.missing, ", ");
  } else if (row.verdict_F.outcome == row.verdict_f.outcome && row.verdict_F.outcome != Outcome::Inconclusive) {
    row.note = "verdicts agree";
  } else if (row.verdict_F.outcome == Outcome::Inconclusive || row.verdict_f.outcome == Outcome::Inconclusive) {
    row.note = "inconclusive verdict; compatible";
  } else {
    row.note = "no applicable direction is contradicted";
  }
  return row;
}

// Every grid point periodic for (X,F) must be periodic for (X,f).
void pointwise_periodic(ReportRow& row, const MapFamily& fam, const CheckConfig& cfg) {
  std::size_t nF = 0, nf = 0;
  json violations = json::array();
  for (const auto& x : sample_grid(fam.space(), cfg.grid).points) {
    try {
      Verdict vF = check_periodic(SystemView{fam, Mode::NonAutonomous}, x, cfg, cfg.max_period, cfg.repetitions);
      Verdict vf = check_periodic(SystemView{fam, Mode::AutonomousLimit}, x, cfg, cfg.max_period, cfg.repetitions);
      nF += vF.holds();
      nf += vf.holds();
      if (vF.holds() && vf.refuted()) violations.push_back(point_to_json(x));
    } catch (const Error&) {
    }
  }
  row.extra["pointwise"] = {{"F_periodic", nF}, {"f_periodic", nf}, {"violations", violations}};
  if (row.applicable.F_implies_f && !violations.empty()) {
    row.consistent = false;
    row.note = "contradicts " + row.label + ": a grid point periodic for (X,F) is not periodic for (X,f)";
  }
}

json row_to_json(const ReportRow& r) {
  return {{"property", r.property},
          {"label", r.label},
          {"verdict_F", verdict_to_json(r.verdict_F)},
          {"verdict_f", verdict_to_json(r.verdict_f)},
          {"theorem_applicable", r.applicable.any()},
          {"applicability",
           {{"f_implies_F", r.applicable.f_implies_F},
            {"F_implies_f", r.applicable.F_implies_f},
            {"missing", r.applicable.missing}}},
          {"consistent", r.consistent},
          {"note", r.note},
          {"extra", r.extra}};
}

ReportRow row_from_json(const json& j) {
  ReportRow r;
  r.property = j.at("property").get<std::string>();
  r.label = j.at("label").get<std::string>();
  r.verdict_F = verdict_from_json(j.at("verdict_F"));
  r.verdict_f = verdict_from_json(j.at("verdict_f"));
  const auto& a = j.at("applicability");
  r.applicable.f_implies_F = a.at("f_implies_F").get<bool>();
  r.applicable.F_implies_f = a.at("F_implies_f").get<bool>();
  r.applicable.missing = a.at("missing").get<std::vector<std::string>>();
  r.consistent = j.at("consistent").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.extra = j.at("extra");
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write " + p.string());
  os << text;
  if (!os) throw IoError("write failed for " + p.string());
}

std::string series_dat(const json& s, const char* header) {
  std::ostringstream os;
  os.precision(17);
  os << "# " << header << '\n';
  for (const auto& row : s) os << row[0].get<double>() << ' ' << row[1].get<double>() << '\n';
  return os.str();
}

}  // namespace

std::string theorem_label(const std::string& property) {
  static const std::map<std::string, std::string> labels{
      {"equicontinuity", "Prop eq"},       {"minimality", "Prop min"},
      {"transitivity", "Prop tt"},         {"weak-mixing", "Prop wm"},
      {"topological-mixing", "Prop tm"},   {"sensitivity", "Prop sen"},
      {"cofinite-sensitivity", "Prop ss"}, {"periodic-points", "Prop pp"},
      {"dense-periodicity", "Prop pp"},    {"proximal-cells", "Prop prox"},
      {"proximal-pairs", "Prop prp"},      {"li-yorke-sensitivity", "Prop lys"}};
  auto it = labels.find(property);
  if (it == labels.end()) throw ConfigError("unknown property '" + property + "'");
  return it->second;
}

Applicability applicability(const std::string& property, const HypothesisProfile& profile) {
  const bool commutes = profile.commutes.holds();
  const bool summable = profile.summable_likely();
  const bool feeble = profile.feeble_open.holds();
  const bool uniform = profile.uniform_convergence.holds();
  Applicability a;
  auto need = [&](bool ok, const char* name) {
    if (!ok && std::find(a.missing.begin(), a.missing.end(), name) == a.missing.end()) a.missing.push_back(name);
    return ok;
  };
  switch (rule_for(property)) {
    case Rule::Equivalence:
    case Rule::ProximalPair: {
      bool ok = need(commutes, "commutes") & need(summable, "summable");
      a.f_implies_F = a.F_implies_f = ok;
      break;
    }
    case Rule::FeebleForward: {
      bool base = need(commutes, "commutes") & need(summable, "summable");
      bool fo = need(feeble, "feeble-open");
      a.F_implies_f = base;
      a.f_implies_F = base && fo;
      break;
    }
    case Rule::FeebleOnly:
      a.f_implies_F = a.F_implies_f = need(feeble, "feeble-open");
      break;
    case Rule::PeriodicOneWay:
      a.F_implies_f = need(uniform, "uniform-convergence");
      break;
    case Rule::LiYorke: {
      bool ok = need(feeble, "feeble-open") & need(commutes, "commutes") & need(summable, "summable");
      a.f_implies_F = a.F_implies_f = ok;
      break;
    }
  }
  return a;
}

bool ComparisonReport::consistent() const {
  for (const auto& r : rows)
    if (!r.consistent) return false;
  for (const auto& c : cross_checks)
    if (!c.at("consistent").get<bool>()) return false;
  return true;
}

json bound_summary(const MapFamily& fam, const ScenarioSpec& spec, const HypothesisProfile& profile) {
  return compute_bounds(fam, spec, profile).summary;
}

ComparisonReport run_comparison(const ScenarioSpec& spec) {
  spec.validate();
  MapFamily fam = family_from_json(spec.space, spec.family);
  ComparisonReport rep;
  rep.id = spec.id;
  rep.family = fam.label();
  rep.scenario = spec_to_json(spec);
  rep.scenario.erase("output");
  rep.warnings = fam.warnings();
  rep.profile = profile_hypotheses(fam, spec.check);

  BoundsOutput b = compute_bounds(fam, spec, rep.profile);
  rep.bounds = std::move(b.summary);
  rep.series = std::move(b.series);
  rep.series["diameter_F"] = diameter_series(fam, Mode::NonAutonomous, spec.check);
  rep.series["diameter_f"] = diameter_series(fam, Mode::AutonomousLimit, spec.check);

  std::map<std::string, std::pair<Outcome, Outcome>> outcomes;
  for (const auto& p : spec.properties) {
    Verdict F = guarded(SystemView{fam, Mode::NonAutonomous}, p, spec.check);
    Verdict f = guarded(SystemView{fam, Mode::AutonomousLimit}, p, spec.check);
    outcomes[p] = {F.outcome, f.outcome};
    ReportRow row = judge(p, std::move(F), std::move(f), rep.profile);
    if (p == "periodic-points") pointwise_periodic(row, fam, spec.check);
    rep.rows.push_back(std::move(row));
  }

  // Sensitivity together with dense proximal cells forces Li-Yorke partners.
  rep.cross_checks = json::array();
  if (outcomes.count("sensitivity") && outcomes.count("proximal-cells") && outcomes.count("li-yorke-sensitivity")) {
    for (int m = 0; m < 2; ++m) {
      auto pick = [m](const std::pair<Outcome, Outcome>& o) { return m == 0 ? o.first : o.second; };
      const bool applies = pick(outcomes["sensitivity"]) == Outcome::Holds &&
                           pick(outcomes["proximal-cells"]) == Outcome::Holds;
      const bool ok = !applies || pick(outcomes["li-yorke-sensitivity"]) != Outcome::Refuted;
      rep.cross_checks.push_back({{"rule", "Prop nads"},
                                  {"mode", to_string(m == 0 ? Mode::NonAutonomous : Mode::AutonomousLimit)},
                                  {"applies", applies},
                                  {"consistent", ok}});
    }
  }
  rep.provenance = {{"config_hash", config_hash(spec)}, {"seed", 0}, {"version", UCDYN_VERSION}};
  return rep;
}

json report_to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(row_to_json(row));
  return {{"id", r.id},
          {"family", r.family},
          {"scenario", r.scenario},
          {"hypotheses", profile_to_json(r.profile)},
          {"rows", rows},
          {"bounds", r.bounds},
          {"cross_checks", r.cross_checks},
          {"series", r.series},
          {"provenance", r.provenance},
          {"warnings", r.warnings},
          {"consistent", r.consistent()}};
}

ComparisonReport report_from_json(const json& j) {
  try {
    ComparisonReport r;
    r.id = j.at("id").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.scenario = j.at("scenario");
    r.profile = profile_from_json(j.at("hypotheses"));
    for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
    r.bounds = j.at("bounds");
    r.cross_checks = j.at("cross_checks");
    r.series = j.at("series");
    r.provenance = j.at("provenance");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string report_dump(const ComparisonReport& r) { return report_to_json(r).dump(2) + "\n"; }

std::string report_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << "property,label,verdict_F,verdict_f,theorem_applicable,consistent,note\n";
  for (const auto& row : r.rows)
    os << row.property << ',' << csv_field(row.label) << ',' << to_string(row.verdict_F.outcome) << ','
       << to_string(row.verdict_f.outcome) << ',' << (row.applicable.any() ? "true" : "false") << ','
       << (row.consistent ? "true" : "false") << ',' << csv_field(row.note) << '\n';
  return os.str();
}

std::vector<std::string> emit(const ComparisonReport& r, const std::string& dir, const std::string& format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    fs::path p = fs::path(dir) / name;
    write_file(p, text);
    written.push_back(p.string());
  };
  if (format == "json") {
    put("report.json", report_dump(r));
  } else if (format == "csv") {
    put("report.csv", report_csv(r));
  } else if (format == "plotdata") {
    static const std::vector<std::pair<const char*, const char*>> files{
        {"deviation", "k max_x d(omega_k x, f^k x)"},
        {"bound", "k S_k"},
        {"profile_T", "n T(n)"},
        {"diameter_F", "n diameter of the tracked ball under (X,F)"},
        {"diameter_f", "n diameter of the tracked ball under (X,f)"}};
    for (const auto& [key, header] : files)
      put(std::string(key) + ".dat", series_dat(r.series.value(key, json::array()), header));
  } else {
    throw ConfigError("unknown output format '" + format + "'");
  }
  return written;
}

}  // namespace ucdyn
