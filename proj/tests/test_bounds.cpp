#include <doctest.h>

#include "ucdyn/bounds.hpp"
#include "ucdyn/error.hpp"

using namespace ucdyn;

TEST_CASE("doubling breaks the deviation bound at k = 2") {
  auto dbl = make_builtin_family("perturbed-doubling");
  auto ledger = build_ledger(dbl, 20, 64);
  DeviationRecord r = deviation_check(dbl, ledger, circle_point(0.0), 2, 1e-9);
  CHECK(r.measured == doctest::Approx(2.5));
  CHECK(r.bound == doctest::Approx(1.5));
  CHECK_FALSE(r.holds);
}

TEST_CASE("rotation families meet the bound exactly") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto ledger = build_ledger(inv, 30, 64);
  DeviationRecord r = shifted_deviation_check(inv, ledger, circle_point(0.7), 10, 5, 1e-9);
  double expect = 0.0;
  for (int i = 11; i <= 15; ++i) expect += 1.0 / (i * i);
  CHECK(r.bound == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.measured == doctest::Approx(expect).epsilon(1e-9));
  CHECK(r.holds);
  CHECK_FALSE(r.approximate_bound);

  auto alt = make_builtin_family("alternating-rotation");
  auto la = build_ledger(alt, 10, 64);
  DeviationRecord s = shifted_deviation_check(alt, la, circle_point(0.0), 1, 2, 1e-9);
  // f_2 = alpha - 1, f_3 = alpha + 1/2
  CHECK(s.measured == doctest::Approx(0.5));
  CHECK(s.bound == doctest::Approx(1.5));
  CHECK(s.holds);
}

TEST_CASE("sweep agrees with single checks") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto ledger = build_ledger(inv, 40, 64);
  auto recs = deviation_sweep(inv, ledger, {circle_point(0.3)}, 4, 10, 1e-9);
  REQUIRE(recs.size() == 10);
  for (const auto& r : recs) {
    DeviationRecord one = shifted_deviation_check(inv, ledger, circle_point(0.3), 4, r.k, 1e-9);
    CHECK(r.measured == doctest::Approx(one.measured).epsilon(1e-12));
    CHECK(r.bound == doctest::Approx(one.bound).epsilon(1e-12));
  }
}

TEST_CASE("ledger range errors") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto ledger = build_ledger(inv, 5, 64);
  CHECK_THROWS_AS(ledger.term(0), DomainError);
  CHECK_THROWS_AS(deviation_check(inv, ledger, circle_point(0.0), 6, 1e-9), DomainError);
  CHECK_THROWS_AS(deviation_check(inv, ledger, circle_point(0.0), 0, 1e-9), DomainError);
}

TEST_CASE("isometry bound refuses expanding limits") {
  auto dbl = make_builtin_family("perturbed-doubling");
  auto ledger = build_ledger(dbl, 20, 64);
  CHECK_THROWS_AS(isometry_bound_check(dbl, ledger, 32, 2, 3, 1e-9), HypothesisError);

  auto inv = make_builtin_family("inverse-square-rotation");
  auto li = build_ledger(inv, 20, 64);
  DeviationRecord r = isometry_bound_check(inv, li, 32, 5, 3, 1e-9);
  CHECK(r.holds);
  CHECK(r.measured == doctest::Approx(r.bound).epsilon(1e-9));
}

TEST_CASE("collective convergence profile") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto ledger = build_ledger(inv, 100, 64);
  CollectiveProfile p = collective_convergence_profile(inv, ledger, 50, 50, 20, 0.1, 1e-9);
  REQUIRE(p.T.size() == 51);
  for (std::size_t n = 1; n <= 50; ++n) CHECK(p.T[n] < p.T[n - 1]);
  CHECK(p.T[50] < 0.02);
  CHECK(p.collective_likely);

  std::string csv = profile_csv(p, 1e-9);
  CHECK(csv.rfind("n,k,E,bound,holds\n", 0) == 0);
  CHECK(csv.find("false") == std::string::npos);

  auto dbl = make_builtin_family("perturbed-doubling");
  auto ld = build_ledger(dbl, 100, 64);
  CollectiveProfile q = collective_convergence_profile(dbl, ld, 50, 50, 20, 0.1, 1e-9);
  CHECK_FALSE(q.collective_likely);
}

TEST_CASE("record json round trip") {
  auto inv = make_builtin_family("inverse-square-rotation");
  auto ledger = build_ledger(inv, 10, 64);
  DeviationRecord r = deviation_check(inv, ledger, circle_point(1.0), 4, 1e-9);
  DeviationRecord back = record_from_json(inv.space(), record_to_json(r));
  CHECK(back.x == r.x);
  CHECK(back.measured == r.measured);
  CHECK(back.bound == r.bound);
  CHECK(back.holds == r.holds);
}
