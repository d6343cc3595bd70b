// Acceptance suite: one PASS/FAIL line per criterion, with wall time.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ucdyn/bounds.hpp"
#include "ucdyn/catalog.hpp"
#include "ucdyn/checkers.hpp"
#include "ucdyn/report.hpp"

using namespace ucdyn;

namespace {

struct Outcome_ {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why = what;
    ok = ok && cond;
  }
};

CheckConfig desk(std::size_t horizon, std::size_t grid, double eps, double delta, std::size_t window) {
  CheckConfig c;
  c.horizon = horizon;
  c.grid = grid;
  c.eps = eps;
  c.delta = delta;
  c.tail_window = window;
  c.max_period = 12;
  c.repetitions = 3;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Rotation deviations against the bound for 100 points and k <= 200.
void bound_suite(Outcome_& o) {
  auto pts = sample_grid(PhaseSpace::circle(), 100).points;
  for (const char* name : {"alternating-rotation", "inverse-square-rotation"}) {
    auto fam = make_builtin_family(name);
    auto ledger = build_ledger(fam, 200, 64);
    std::size_t bad = 0;
    double gap = 0.0;
    for (const auto& r : deviation_sweep(fam, ledger, pts, 0, 200, 1e-9)) {
      bad += !r.holds;
      gap = std::max(gap, std::abs(r.measured - r.bound));
    }
    o.expect(bad == 0, std::string(name) + ": " + std::to_string(bad) + " bound violations");
    if (std::string(name) == "inverse-square-rotation")
      o.expect(gap <= 1e-12, "inverse-square: measured differs from bound by " + std::to_string(gap));
  }
}

void doubling_violation(Outcome_& o) {
  auto fam = make_builtin_family("perturbed-doubling");
  auto ledger = build_ledger(fam, 5, 64);
  bool found = false;
  for (std::size_t k = 1; k <= 5 && !found; ++k) found = !deviation_check(fam, ledger, circle_point(0.0), k, 1e-9).holds;
  o.expect(found, "no violation for k <= 5");
}

void inverse_square(Outcome_& o) {
  auto fam = make_builtin_family("inverse-square-rotation");
  auto s = summability_estimate(fam, 1000, 64);
  o.expect(s.limit_estimate && std::abs(*s.limit_estimate - kPi * kPi / 6) < 1e-6, "series limit is not pi^2/6");
  for (std::size_t i = 1; i < s.partial_sums.size(); ++i)
    o.expect(s.partial_sums[i] > s.partial_sums[i - 1], "partial sums not increasing");
  CheckConfig cfg = desk(500, 20, 0.1, 0.5, 200);
  for (const auto& x : sample_grid(fam.space(), 50).points) {
    Verdict vF = check_periodic(SystemView{fam, Mode::NonAutonomous}, x, cfg, 100, 5);
    Verdict vf = check_periodic(SystemView{fam, Mode::AutonomousLimit}, x, cfg, 100, 5);
    o.expect(vF.refuted(), "(X,F) periodic at " + to_string(x));
    o.expect(vf.holds() && vf.witness.value("period", 0) == 1, "(X,f) not period 1 at " + to_string(x));
  }
}

void eqex(Outcome_& o) {
  auto fam = make_builtin_family("alternating-rotation");
  const double a = golden_alpha();
  for (double t : {0.0, 1.0, 2.5}) {
    Trajectory tr = trajectory(fam, circle_point(t), 2000);
    for (std::size_t n = 0; n <= 1000; ++n) {
      double d = distance(fam.space(), tr.states[2 * n], circle_point(t + 2.0 * n * a));
      if (d > 1e-9) {
        o.expect(false, "omega_2n drifts from theta + 2n alpha at n = " + std::to_string(n));
        break;
      }
    }
  }
  CheckConfig cfg = desk(5000, 20, 0.05, 0.5, 2000);
  o.expect(check_minimality(SystemView{fam, Mode::NonAutonomous}, cfg).holds(), "(X,F) minimality");
  o.expect(check_minimality(SystemView{fam, Mode::AutonomousLimit}, cfg).holds(), "(X,f) minimality");
  o.expect(summability_estimate(fam, 5000, 64).flag == SummabilityFlag::DivergentLikely, "series flagged summable");
}

void sens(Outcome_& o) {
  auto fam = make_builtin_family("plateau-tent");
  CheckConfig cfg = desk(500, 21, 0.1, 0.25, 200);
  for (const char* p : {"sensitivity", "transitivity", "topological-mixing"}) {
    o.expect(run_property(SystemView{fam, Mode::NonAutonomous}, p, cfg).refuted(), std::string(p) + " (X,F)");
    o.expect(run_property(SystemView{fam, Mode::AutonomousLimit}, p, cfg).holds(), std::string(p) + " (X,f)");
  }
  Verdict g = feeble_open_check(fam.map(1));
  o.expect(g.refuted() && g.witness.value("slope", 1.0) == 0.0, "plateau map not refuted with a zero slope");
}

void autonomous_wrapper(Outcome_& o) {
  auto fam = MapFamily::autonomous(PhaseSpace::unit_interval(), tent(), "tent");
  CheckConfig cfg = desk(300, 11, 0.1, 0.25, 100);
  for (const auto& p : property_names()) {
    Verdict a = run_property(SystemView{fam, Mode::NonAutonomous}, p, cfg);
    Verdict b = run_property(SystemView{fam, Mode::AutonomousLimit}, p, cfg);
    o.expect(a.outcome == b.outcome && a.witness == b.witness && a.basis == b.basis, p + " differs between modes");
  }
}

void semigroup(Outcome_& o) {
  std::vector<MapFamily> fams;
  for (const auto& n : builtin_family_names()) fams.push_back(make_builtin_family(n));
  std::mt19937_64 rng(20241);
  std::uniform_int_distribution<std::size_t> pick(0, fams.size() - 1), len(0, 40);
  for (int i = 0; i < 1000; ++i) {
    const auto& fam = fams[pick(rng)];
    auto grid = sample_grid(fam.space(), 64).points;
    Point x = grid[std::uniform_int_distribution<std::size_t>(0, grid.size() - 1)(rng)];
    std::size_t n = len(rng), k = len(rng);
    if (!(omega(fam, x, n + k) == omega_window(fam, omega(fam, x, n), n, k))) {
      o.expect(false, fam.label() + ": omega_{n+k} != window o omega_n at n=" + std::to_string(n) +
                          " k=" + std::to_string(k));
      return;
    }
  }
}

void profile(Outcome_& o) {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto li = build_ledger(inv, 100, 64);
  CollectiveProfile p = collective_convergence_profile(inv, li, 50, 50, 100, 0.1, 1e-9);
  for (std::size_t n = 1; n <= 50; ++n) o.expect(p.T[n] < p.T[n - 1], "T not strictly decreasing");
  o.expect(p.T[50] < 0.02, "T(50) = " + std::to_string(p.T[50]));
  auto dbl = make_builtin_family("perturbed-doubling");
  auto ld = build_ledger(dbl, 100, 64);
  CollectiveProfile q = collective_convergence_profile(dbl, ld, 50, 50, 100, 0.1, 1e-9);
  o.expect(q.T.size() == 51, "doubling profile incomplete");
}

void zero_alpha(Outcome_& o) {
  ScenarioSpec spec = catalog_entry("eqex").spec;
  spec.id.clear();
  spec.family = {{"builtin", "alternating-rotation"}, {"params", {{"alpha", 0.0}}}};
  spec.check.horizon = 500;
  spec.check.tail_window = 200;
  spec.properties = {"periodic-points"};
  MapFamily fam = family_from_json(spec.space, spec.family);
  for (const auto& x : sample_grid(fam.space(), spec.check.grid).points) {
    Verdict vF = check_periodic(SystemView{fam, Mode::NonAutonomous}, x, spec.check, 12, 3);
    Verdict vf = check_periodic(SystemView{fam, Mode::AutonomousLimit}, x, spec.check, 12, 3);
    o.expect(vF.holds() && vF.witness.value("period", 0) == 2, "(X,F) period != 2 at " + to_string(x));
    o.expect(vf.holds() && vf.witness.value("period", 0) == 1, "(X,f) period != 1 at " + to_string(x));
  }
  ComparisonReport r = run_comparison(spec);
  o.expect(r.rows.size() == 1 && r.rows[0].label == "Prop pp" && r.rows[0].consistent, "row is not a consistent Prop pp row");
}

void goldens(Outcome_& o) {
  for (const auto& e : catalog()) {
    auto path = std::filesystem::path(UCDYN_GOLDEN_DIR) / (e.id + ".json");
    o.expect(std::filesystem::exists(path), "missing golden " + path.string());
    o.expect(report_dump(run_comparison(e.spec)) == slurp(path), e.id + " differs from its golden");
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // seconds
    std::function<void(Outcome_&)> run;
  };
  const std::vector<Criterion> criteria{
      {"01 rotation deviation bounds", 10, bound_suite},
      {"02 doubling breaks the bound", 1, doubling_violation},
      {"03 inverse-square series and periodicity", 30, inverse_square},
      {"04 alternating rotation closed form and minimality", 60, eqex},
      {"05 plateau-tent verdicts", 30, sens},
      {"06 autonomous wrapper mode parity", 30, autonomous_wrapper},
      {"07 semigroup identity", 5, semigroup},
      {"08 collective convergence profile", 30, profile},
      {"09 zero-alpha periodicity", 10, zero_alpha},
      {"10 golden reports", 180, goldens},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome_ o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(s <= c.budget, "over the " + std::to_string(c.budget) + " s budget");
    std::printf("%s %s %.3fs%s%s\n", o.ok ? "PASS" : "FAIL", c.name, s, o.ok ? "" : " -- ", o.why.c_str());
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
