#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucdyn/family.hpp"

namespace ucdyn {

/// Terms D(f_i, f), i = 1..N, with prefix sums.
struct BoundLedger {
  std::string label;
  std::vector<double> terms;   // terms[i-1] = D(f_i, f)
  std::vector<bool> exact;
  std::vector<double> prefix;  // prefix[k] = S_k, prefix[0] = 0

  std::size_t size() const { return terms.size(); }
  double term(std::size_t i) const;
  /// sum_{i=1..k} D(f_{n+i}, f), summed term by term.
  double shifted(std::size_t n, std::size_t k) const;
  /// Every term in (n, n+k] has a closed form.
  bool exact_range(std::size_t n, std::size_t k) const;
};

BoundLedger build_ledger(const MapFamily& fam, std::size_t n_terms, std::size_t resolution);

struct DeviationRecord {
  Point x;
  std::size_t n = 0;
  std::size_t k = 1;
  double measured = 0.0;
  double bound = 0.0;
  bool holds = true;               // measured <= bound + tol
  bool approximate_bound = false;  // bound built from grid-estimated terms
};

/// d(omega_k(x), f^k(x)) against S_k.
DeviationRecord deviation_check(const MapFamily& fam, const BoundLedger& ledger, const Point& x, std::size_t k,
                                double tol);

/// d(omega_{n+k}(x), f^k(omega_n(x))) against sum_{i=1..k} D(f_{n+i}, f).
DeviationRecord shifted_deviation_check(const MapFamily& fam, const BoundLedger& ledger, const Point& x,
                                        std::size_t n, std::size_t k, double tol);

/// shifted_deviation_check for k = 1..k_max at once, one orbit pass per point.
std::vector<DeviationRecord> deviation_sweep(const MapFamily& fam, const BoundLedger& ledger,
                                             const std::vector<Point>& points, std::size_t n, std::size_t k_max,
                                             double tol);

/// Grid estimate of D(omega^n_{n+k}, f^k) against the shifted sum. Requires
/// the limit to be an isometry or shrinking; throws HypothesisError otherwise.
DeviationRecord isometry_bound_check(const MapFamily& fam, const BoundLedger& ledger, std::size_t resolution,
                                     std::size_t n, std::size_t k, double tol);

struct CollectiveProfile {
  std::size_t n_max = 0;
  std::size_t k_max = 0;
  std::vector<std::vector<double>> E;      // E[n][k-1], n = 0..n_max
  std::vector<std::vector<double>> bound;  // shifted sums, same shape
  std::vector<double> T;                   // T[n] = max_k E[n][k-1]
  bool collective_likely = false;
};

CollectiveProfile collective_convergence_profile(const MapFamily& fam, const BoundLedger& ledger, std::size_t n_max,
                                                 std::size_t k_max, std::size_t resolution, double eps, double tol);

/// Columns n,k,E,bound,holds.
std::string profile_csv(const CollectiveProfile& p, double tol);

nlohmann::json record_to_json(const DeviationRecord& r);
DeviationRecord record_from_json(const PhaseSpace& space, const nlohmann::json& j);

}  // namespace ucdyn
