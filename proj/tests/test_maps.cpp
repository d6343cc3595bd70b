#include <doctest.h>

#include "ucdyn/error.hpp"
#include "ucdyn/maps.hpp"
#include "ucdyn/sup_metric.hpp"

using namespace ucdyn;

namespace {

double theta(const Point& p) { return std::get<CircleAngle>(p).theta; }
double xval(const Point& p) { return std::get<IntervalPoint>(p).x; }

}  // namespace

TEST_CASE("tent") {
  CHECK(xval(ucdyn::apply(tent(), interval_point(0.5))) == doctest::Approx(1.0));
  CHECK(xval(ucdyn::apply(tent(), interval_point(0.25))) == doctest::Approx(0.5));
  CHECK(xval(ucdyn::apply(tent(), interval_point(1.0))) == doctest::Approx(0.0));
}

TEST_CASE("rotation and affine maps") {
  CHECK(theta(ucdyn::apply(rotation(0.0), circle_point(1.3))) == 1.3);
  CHECK(theta(ucdyn::apply(rotation(1.0), circle_point(kTwoPi - 0.5))) == doctest::Approx(0.5));
  CHECK(theta(ucdyn::apply(affine(2, 0.0), circle_point(0.1))) == doctest::Approx(0.2));
  CHECK(theta(ucdyn::apply(affine(2, 0.0), circle_point(4.0))) == doctest::Approx(8.0 - kTwoPi));
}

TEST_CASE("odometer carries and rolls over") {
  Point all_ones = binary_point("111");
  auto& w = std::get<BinaryWord>(all_ones);
  Point out = ucdyn::apply(odometer(), all_ones);
  CHECK(to_string(out) == "000");
  CHECK(std::get<BinaryWord>(out).effective == w.effective);
  CHECK(to_string(ucdyn::apply(odometer(), binary_point("0110"))) == "1110");
  CHECK(to_string(ucdyn::apply(odometer(), binary_point("1100"))) == "0010");
}

TEST_CASE("deletion shifts the tail and loses one trusted coordinate") {
  Point out = ucdyn::apply(deletion(2), binary_point("1011"));
  CHECK(std::get<BinaryWord>(out).effective == 3);
  auto s = PhaseSpace::binary(4);
  CHECK(distance(s, out, binary_point("111", 3)) <= s.resolution_floor());
}

TEST_CASE("maps reject points of another space") {
  CHECK_THROWS_AS(ucdyn::apply(tent(), circle_point(0.2)), TypeError);
  CHECK_THROWS_AS(ucdyn::apply(rotation(1.0), interval_point(0.2)), TypeError);
}

TEST_CASE("piecewise-linear composition is exact") {
  auto t = std::get<PiecewiseLinear>(tent().v);
  PiecewiseLinear tt = pl_compose(t, t);
  for (double x : {0.0, 0.1, 0.2, 0.3, 0.45, 0.6, 0.77, 1.0})
    CHECK(pl_eval(tt, x) == doctest::Approx(pl_eval(t, pl_eval(t, x))));
  CHECK(tt.breakpoints.size() == 5);
}

TEST_CASE("closed forms") {
  auto f = affine_form(compose(affine(2, 0.5), rotation(0.25)));
  REQUIRE(f);
  CHECK(f->slope == 2);
  CHECK(f->offset == doctest::Approx(1.0));
  CHECK_FALSE(affine_form(tent()));
  auto ops = binary_ops(compose(odometer(), deletion(3)));
  REQUIRE(ops);
  REQUIRE(ops->size() == 2);
  CHECK_FALSE((*ops)[0].odometer);
  CHECK((*ops)[0].index == 3);
  CHECK((*ops)[1].odometer);
}

TEST_CASE("symbolic metric class") {
  auto r = symbolic_metric_class(rotation(0.3));
  REQUIRE(r);
  CHECK(r->isometry);
  auto d = symbolic_metric_class(affine(2, 0.0));
  REQUIRE(d);
  CHECK_FALSE(d->isometry);
  CHECK_FALSE(d->shrinking);
}

TEST_CASE("sup metric") {
  auto c = PhaseSpace::circle();
  const double a = 1.1;
  SupEstimate r = sup_metric(c, rotation(a), rotation(a + 0.01), 64);
  CHECK(r.exact);
  CHECK(r.value == doctest::Approx(0.01).epsilon(1e-9));
  SupEstimate d = sup_metric(c, affine(2, 0.0), affine(2, 0.2), 64);
  CHECK(d.value == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(sup_metric(c, rotation(0.7), rotation(0.7), 64).value == 0.0);

  auto i = PhaseSpace::unit_interval();
  SupEstimate t = sup_metric(i, tent(), identity_on(SpaceKind::UnitInterval), 257);
  CHECK(t.value == doctest::Approx(1.0));
}

TEST_CASE("map json round trip") {
  for (const auto& m : {rotation(0.5), affine(2, 0.25), tent(), compose(tent(), tent())}) {
    SpaceKind k = domain_of(m);
    CHECK(map_to_json(map_from_json(map_to_json(m), k)) == map_to_json(m));
  }
  MapDescriptor od = compose(odometer(), deletion(4));
  CHECK(map_to_json(map_from_json(map_to_json(od), SpaceKind::BinarySeq)) == map_to_json(od));
  CHECK_THROWS_AS(map_from_json(nlohmann::json{{"type", "warp"}}, SpaceKind::Circle), ConfigError);
}
