#include <doctest.h>

#include <cmath>

#include "ucdyn/error.hpp"
#include "ucdyn/family.hpp"

using namespace ucdyn;

namespace {

double theta(const Point& p) { return std::get<CircleAngle>(p).theta; }

}  // namespace

TEST_CASE("builtin generators") {
  auto alt = make_builtin_family("alternating-rotation");
  const double a = golden_alpha();
  CHECK(std::get<Rotation>(alt.map(1).v).amount == doctest::Approx(a + 1.0));
  CHECK(std::get<Rotation>(alt.map(2).v).amount == doctest::Approx(a - 1.0));

  auto inv = make_builtin_family("inverse-square-rotation");
  CHECK(std::get<Rotation>(inv.map(2).v).amount == doctest::Approx(0.25));

  auto pt = make_builtin_family("plateau-tent");
  CHECK(map_to_json(pt.map(5)) == map_to_json(tent()));
  CHECK(pt.autonomous_from() == 2u);
  CHECK_THROWS_AS(pt.map(0), DomainError);

  CHECK_THROWS_AS(make_builtin_family("no-such-family"), ConfigError);
}

TEST_CASE("rational alpha is flagged") {
  auto fam = make_builtin_family("alternating-rotation", {{"alpha", 0.0}});
  CHECK_FALSE(fam.warnings().empty());
  CHECK(make_builtin_family("alternating-rotation").warnings().empty());
}

TEST_CASE("family from json generator") {
  nlohmann::json j = {{"generator", {{{"from", 1}, {"to", 1}, {"map", {{"type", "rotation"}, {"amount", 0.5}}}},
                                     {{"from", 2}, {"map", {{"type", "rotation"}, {"amount", 0.0}}}}}},
                      {"limit", {{"type", "rotation"}, {"amount", 0.0}}},
                      {"label", "kick"}};
  auto fam = family_from_json(PhaseSpace::circle(), j);
  CHECK(fam.label() == "kick");
  CHECK(theta(ucdyn::apply(fam.map(1), circle_point(0.0))) == doctest::Approx(0.5));
  CHECK(theta(ucdyn::apply(fam.map(7), circle_point(0.3))) == doctest::Approx(0.3));
  CHECK(fam.autonomous_from() == 2u);

  nlohmann::json mismatched = j;
  mismatched["limit"] = {{"type", "tent"}};
  CHECK_THROWS(family_from_json(PhaseSpace::circle(), mismatched));
}

TEST_CASE("commutation with the limit") {
  auto alt = make_builtin_family("alternating-rotation");
  CHECK(commutes_with_limit(alt, 64, 1e-9, 50).holds());

  auto dbl = make_builtin_family("perturbed-doubling");
  Verdict v = commutes_with_limit(dbl, 64, 1e-9, 50);
  CHECK(v.refuted());
  CHECK(v.witness["n"] == 1);
  CHECK(v.witness["gap"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("feeble openness") {
  CHECK(feeble_open_check(tent()).holds());
  CHECK(feeble_open_check(rotation(0.4)).holds());
  auto g = piecewise_linear({{0.0, 1.0}, {0.5, 1.0}, {1.0, 0.0}});
  Verdict v = feeble_open_check(g);
  REQUIRE(v.refuted());
  CHECK(v.witness["slope"].get<double>() == 0.0);
  CHECK(v.witness["piece"][0].get<double>() == 0.0);
  CHECK(v.witness["piece"][1].get<double>() == 0.5);
}

TEST_CASE("summability") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto s = summability_estimate(inv, 1000, 64);
  CHECK(s.flag == SummabilityFlag::SummableLikely);
  CHECK(s.exact_closed_form);
  REQUIRE(s.limit_estimate);
  CHECK(*s.limit_estimate == doctest::Approx(kPi * kPi / 6).epsilon(1e-12));
  CHECK(s.partial_sums.back() < kPi * kPi / 6);

  auto alt = make_builtin_family("alternating-rotation");
  CHECK(summability_estimate(alt, 1000, 64).flag == SummabilityFlag::DivergentLikely);
}

TEST_CASE("isometry and surjectivity") {
  auto c = PhaseSpace::circle();
  auto i = PhaseSpace::unit_interval();
  MetricCheck r = isometry_shrinking_check(c, rotation(0.9), 64, 1e-9);
  CHECK(r.isometry);
  CHECK(r.shrinking);
  MetricCheck d = isometry_shrinking_check(c, affine(2, 0.0), 64, 1e-9);
  CHECK_FALSE(d.isometry);
  CHECK_FALSE(d.shrinking);
  MetricCheck t = isometry_shrinking_check(i, tent(), 64, 1e-9);
  CHECK_FALSE(t.isometry);
  CHECK_FALSE(t.shrinking);

  CHECK(surjectivity_check(i, tent(), 64, 0.05).holds());
  CHECK(surjectivity_check(c, rotation(2.0), 64, 0.05).holds());
  Verdict half = surjectivity_check(i, piecewise_linear({{0.0, 0.0}, {1.0, 0.5}}), 64, 0.05);
  CHECK(half.refuted());
}

TEST_CASE("hypothesis profile round trip") {
  auto fam = make_builtin_family("plateau-tent");
  CheckConfig cfg;
  cfg.horizon = 200;
  cfg.tail_window = 100;
  HypothesisProfile p = profile_hypotheses(fam, cfg);
  CHECK(p.feeble_open.refuted());
  CHECK(p.commutes.refuted());
  CHECK(profile_to_json(profile_from_json(profile_to_json(p))) == profile_to_json(p));
}
