#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ucdyn/error.hpp"
#include "ucdyn/space.hpp"

using namespace ucdyn;

namespace {

double theta(const Point& p) { return std::get<CircleAngle>(p).theta; }
double xval(const Point& p) { return std::get<IntervalPoint>(p).x; }

}  // namespace

TEST_CASE("circle distance is arc length") {
  auto s = PhaseSpace::circle();
  CHECK(distance(s, circle_point(0.1), circle_point(kTwoPi - 0.1)) == doctest::Approx(0.2));
  CHECK(distance(s, circle_point(0.0), circle_point(kPi)) == doctest::Approx(kPi));
  CHECK(s.diameter() == doctest::Approx(kPi));
}

TEST_CASE("angles wrap into [0, 2pi)") {
  CHECK(theta(circle_point(-0.5)) == doctest::Approx(kTwoPi - 0.5));
  CHECK(theta(circle_point(kTwoPi + 1.0)) == doctest::Approx(1.0));
  double w = wrap_angle(kTwoPi);
  CHECK(w >= 0.0);
  CHECK(w < kTwoPi);
}

TEST_CASE("binary distance is 1/(first disagreement)") {
  auto s = PhaseSpace::binary(8);
  CHECK(distance(s, binary_point("01010101"), binary_point("00010101")) == doctest::Approx(0.5));
  CHECK(distance(s, binary_point("01010101"), binary_point("11010101")) == doctest::Approx(1.0));
  CHECK(distance(s, binary_point("01010101"), binary_point("01010101")) == 0.0);
  // Agreement on every trusted coordinate of a truncated word is only an upper bound.
  Distance floor = measure(s, binary_point("01010101", 4), binary_point("01010111"));
  CHECK(floor.resolution_floor);
  CHECK(floor.value == doctest::Approx(0.25));
}

TEST_CASE("interval distance") {
  auto s = PhaseSpace::unit_interval();
  CHECK(distance(s, interval_point(0.37), interval_point(0.37)) == 0.0);
  CHECK(distance(s, interval_point(0.2), interval_point(0.9)) == doctest::Approx(0.7));
}

TEST_CASE("points outside the space are rejected") {
  CHECK_THROWS_AS(interval_point(1.5), DomainError);
  CHECK_THROWS_AS(binary_point("0120"), DomainError);
  CHECK_THROWS_AS(PhaseSpace::unit_interval().require(circle_point(1.0)), TypeError);
  CHECK_THROWS_AS(distance(PhaseSpace::circle(), circle_point(0.0), interval_point(0.0)), TypeError);
}

TEST_CASE("hausdorff distance") {
  auto s = PhaseSpace::unit_interval();
  PointCloud a{{interval_point(0.0)}, SpaceKind::UnitInterval};
  PointCloud b{{interval_point(0.0), interval_point(0.5)}, SpaceKind::UnitInterval};
  CHECK(hausdorff_distance(s, a, b) == doctest::Approx(0.5));
  CHECK(hausdorff_distance(s, b, b) == 0.0);

  auto c = PhaseSpace::circle();
  PointCloud g = sample_grid(c, 100), h;
  for (const auto& p : g.points) h.points.push_back(circle_point(theta(p) + kPi / 100));
  CHECK(hausdorff_distance(c, g, h) == doctest::Approx(kTwoPi / 200).epsilon(1e-9));
}

TEST_CASE("sample grids") {
  auto c = sample_grid(PhaseSpace::circle(), 4);
  REQUIRE(c.points.size() == 4);
  CHECK(theta(c.points[0]) == doctest::Approx(0.0));
  CHECK(theta(c.points[1]) == doctest::Approx(kPi / 2));
  CHECK(theta(c.points[3]) == doctest::Approx(3 * kPi / 2));

  auto i = sample_grid(PhaseSpace::unit_interval(), 3);
  REQUIRE(i.points.size() == 3);
  CHECK(xval(i.points[0]) == 0.0);
  CHECK(xval(i.points[1]) == doctest::Approx(0.5));
  CHECK(xval(i.points[2]) == 1.0);

  auto b = sample_grid(PhaseSpace::binary(2), 4);
  REQUIRE(b.points.size() == 4);
  std::vector<std::string> words;
  for (const auto& p : b.points) words.push_back(to_string(p));
  for (const char* w : {"00", "01", "10", "11"}) CHECK(std::find(words.begin(), words.end(), w) != words.end());

  CHECK_THROWS(sample_grid(PhaseSpace::circle(), 0));
}

TEST_CASE("nested grids contain the coarser grids") {
  auto s = PhaseSpace::unit_interval();
  auto fine = nested_grid(s, 16), coarse = nested_grid(s, 8);
  for (const auto& p : coarse.points) {
    bool found = std::any_of(fine.points.begin(), fine.points.end(),
                             [&](const Point& q) { return distance(s, p, q) < 1e-12; });
    CHECK(found);
  }
}

TEST_CASE("ball samples stay in the ball") {
  auto s = PhaseSpace::unit_interval();
  auto b = ball_sample(s, interval_point(0.5), 0.1, 3);
  REQUIRE(b.points.size() == 3);
  CHECK(xval(b.points[0]) == doctest::Approx(0.5));
  CHECK(xval(b.points[1]) == doctest::Approx(0.45));
  CHECK(xval(b.points[2]) == doctest::Approx(0.55));

  auto one = ball_sample(PhaseSpace::circle(), circle_point(0.0), 0.3, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(theta(one.points[0]) == 0.0);

  auto c = PhaseSpace::circle();
  for (const auto& p : ball_sample(c, circle_point(0.05), 0.2, 9).points)
    CHECK(distance(c, p, circle_point(0.05)) < 0.2);
}

TEST_CASE("point json round trip") {
  auto s = PhaseSpace::binary(6);
  Point p = binary_point("010011");
  CHECK(point_from_json(s, point_to_json(p)) == p);
  auto c = PhaseSpace::circle();
  Point q = circle_point(1.234);
  CHECK(point_from_json(c, point_to_json(q)) == q);
  CHECK(space_from_json(space_to_json(s)) == s);
}
