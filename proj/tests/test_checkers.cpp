#include <doctest.h>

#include <cmath>

#include "ucdyn/checkers.hpp"
#include "ucdyn/error.hpp"

using namespace ucdyn;

namespace {

CheckConfig desk(std::size_t horizon, std::size_t grid, double eps, double delta) {
  CheckConfig c;
  c.horizon = horizon;
  c.grid = grid;
  c.eps = eps;
  c.delta = delta;
  c.tail_window = std::min<std::size_t>(horizon / 2, 2000);
  c.max_period = 12;
  c.repetitions = 3;
  return c;
}

SystemView F(const MapFamily& fam) { return {fam, Mode::NonAutonomous}; }
SystemView f(const MapFamily& fam) { return {fam, Mode::AutonomousLimit}; }

MapFamily identity_family() {
  return MapFamily::autonomous(PhaseSpace::circle(), rotation(0.0), "identity");
}

}  // namespace

TEST_CASE("equicontinuity") {
  auto alt = make_builtin_family("alternating-rotation");
  CHECK(check_equicontinuity(F(alt), desk(500, 20, 0.1, 0.5)).holds());

  auto dbl = make_builtin_family("perturbed-doubling");
  Verdict v = check_equicontinuity(f(dbl), desk(200, 20, 0.1, 0.5));
  CHECK(v.refuted());

  auto id = identity_family();
  CHECK(check_equicontinuity(f(id), desk(200, 20, 0.1, 0.5)).holds());
}

TEST_CASE("sensitivity") {
  auto pt = make_builtin_family("plateau-tent");
  auto cfg = desk(500, 21, 0.1, 0.25);
  CHECK(check_sensitivity(F(pt), cfg).refuted());
  CHECK(check_sensitivity(f(pt), cfg).holds());

  auto inv = make_builtin_family("inverse-square-rotation");
  Verdict r = check_sensitivity(F(inv), desk(500, 20, 0.1, 0.5));
  CHECK(r.refuted());
  CHECK(r.basis == Basis::Symbolic);

  auto dbl = make_builtin_family("perturbed-doubling");
  CHECK(check_sensitivity(F(dbl), desk(500, 20, 0.1, 0.5)).holds());
}

TEST_CASE("cofinite sensitivity") {
  auto dbl = make_builtin_family("perturbed-doubling");
  CHECK(check_cofinite_sensitivity(F(dbl), desk(500, 20, 0.1, 0.5)).holds());
  auto pt = make_builtin_family("plateau-tent");
  CHECK(check_cofinite_sensitivity(F(pt), desk(500, 21, 0.1, 0.25)).refuted());
  auto inv = make_builtin_family("inverse-square-rotation");
  CHECK(check_cofinite_sensitivity(F(inv), desk(500, 20, 0.1, 0.5)).refuted());
}

TEST_CASE("transitivity") {
  auto dbl = make_builtin_family("perturbed-doubling");
  CHECK(check_transitivity(f(dbl), desk(200, 20, 0.2, 0.5)).holds());
  auto pt = make_builtin_family("plateau-tent");
  CHECK(check_transitivity(F(pt), desk(500, 21, 0.1, 0.25)).refuted());
  auto alt = make_builtin_family("alternating-rotation");
  CHECK(check_transitivity(F(alt), desk(2000, 20, 0.1, 0.5)).holds());
}

TEST_CASE("weak and topological mixing") {
  auto dbl = make_builtin_family("perturbed-doubling");
  auto cfg = desk(500, 20, 0.1, 0.5);
  CHECK(check_weak_mixing(F(dbl), cfg).holds());
  CHECK(check_weak_mixing(f(dbl), cfg).holds());
  CHECK(check_topological_mixing(F(dbl), cfg).holds());

  auto alt = make_builtin_family("alternating-rotation");
  CHECK_FALSE(check_weak_mixing(F(alt), cfg).holds());
  CHECK(check_topological_mixing(F(alt), cfg).refuted());

  auto pt = make_builtin_family("plateau-tent");
  auto pcfg = desk(500, 21, 0.1, 0.25);
  CHECK(check_weak_mixing(F(pt), pcfg).refuted());
  CHECK(check_topological_mixing(f(pt), pcfg).holds());
}

TEST_CASE("minimality") {
  auto alt = make_builtin_family("alternating-rotation");
  auto cfg = desk(5000, 20, 0.05, 0.5);
  CHECK(check_minimality(F(alt), cfg).holds());
  CHECK(check_minimality(f(alt), cfg).holds());

  auto inv = make_builtin_family("inverse-square-rotation");
  CHECK(check_minimality(F(inv), desk(500, 20, 0.1, 0.5)).refuted());

  auto pt = make_builtin_family("plateau-tent");
  CHECK(check_minimality(f(pt), desk(500, 21, 0.1, 0.25)).refuted());
}

TEST_CASE("periodic points") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto cfg = desk(500, 20, 0.1, 0.5);
  for (double t : {0.0, 1.0, 4.5}) {
    CHECK(check_periodic(F(inv), circle_point(t), cfg, 100, 5).refuted());
    Verdict v = check_periodic(f(inv), circle_point(t), cfg, 100, 5);
    REQUIRE(v.holds());
    CHECK(v.witness["period"] == 1);
  }

  auto alt0 = make_builtin_family("alternating-rotation", {{"alpha", 0.0}});
  Verdict v = check_periodic(F(alt0), circle_point(0.3), cfg, 12, 3);
  REQUIRE(v.holds());
  CHECK(v.witness["period"] == 2);
}

TEST_CASE("dense periodicity") {
  auto id = identity_family();
  CHECK(check_dense_periodicity(f(id), desk(200, 20, 0.1, 0.5), 12, 3).holds());
  auto inv = make_builtin_family("inverse-square-rotation");
  CHECK(check_dense_periodicity(F(inv), desk(500, 20, 0.1, 0.5), 12, 3).refuted());
  auto dbl = make_builtin_family("perturbed-doubling");
  CHECK(check_dense_periodicity(f(dbl), desk(500, 20, 0.1, 0.5), 10, 3).holds());
}

TEST_CASE("proximal and li-yorke pairs") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto cfg = desk(500, 20, 0.1, 0.5);
  Verdict same = proximal_check(F(inv), circle_point(0.4), circle_point(0.4), cfg);
  CHECK(same.holds());
  CHECK(proximal_check(F(inv), circle_point(0.4), circle_point(1.4), cfg).refuted());
  CHECK(li_yorke_check(F(inv), circle_point(0.4), circle_point(0.4), cfg).refuted());
  CHECK(li_yorke_check(F(inv), circle_point(0.4), circle_point(1.4), cfg).refuted());

  auto pt = make_builtin_family("plateau-tent");
  CHECK(proximal_check(F(pt), interval_point(0.1), interval_point(0.3), desk(500, 21, 0.1, 0.25)).holds());

  auto dbl = make_builtin_family("perturbed-doubling");
  auto ly = desk(5000, 20, 0.01, 0.5);
  ly.tail_window = 2000;
  CHECK(li_yorke_check(f(dbl), circle_point(0.0), circle_point(1e-3 * std::sqrt(2.0)), ly).holds());
}

TEST_CASE("cell density") {
  auto pt = make_builtin_family("plateau-tent");
  CHECK(cell_density(F(pt), interval_point(0.2), desk(500, 21, 0.1, 0.25), PairPredicate::Proximal).holds());

  auto inv = make_builtin_family("inverse-square-rotation");
  CHECK(cell_density(F(inv), circle_point(0.0), desk(500, 20, 0.1, 0.5), PairPredicate::Proximal).refuted());

  auto dbl = make_builtin_family("perturbed-doubling");
  auto cfg = desk(500, 20, 0.1, 0.5);
  Verdict prox = cell_density(f(dbl), circle_point(0.0), cfg, PairPredicate::Proximal);
  Verdict ly = cell_density(f(dbl), circle_point(0.0), cfg, PairPredicate::LiYorke);
  CHECK(prox.holds());
  CHECK(ly.holds());
}

TEST_CASE("autonomous wrapper gives the same answers in both modes") {
  auto fam = MapFamily::autonomous(PhaseSpace::unit_interval(), tent(), "tent");
  auto cfg = desk(300, 11, 0.1, 0.25);
  for (const auto& p : property_names()) {
    Verdict a = run_property(F(fam), p, cfg);
    Verdict b = run_property(f(fam), p, cfg);
    CHECK_MESSAGE(a.outcome == b.outcome, p);
    CHECK_MESSAGE(a.witness == b.witness, p);
  }
}

TEST_CASE("dispatch") {
  auto inv = make_builtin_family("inverse-square-rotation");
  Verdict v = run_property(F(inv), "minimality", desk(500, 20, 0.1, 0.5));
  CHECK(v.property == "minimality");
  REQUIRE(v.mode);
  CHECK(*v.mode == to_string(Mode::NonAutonomous));
  CHECK_THROWS_AS(run_property(F(inv), "chaos", desk(500, 20, 0.1, 0.5)), ConfigError);
}
