#include "ucdyn/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "ucdyn/error.hpp"
#include "ucdyn/orbit.hpp"
#include "ucdyn/sup_metric.hpp"

namespace ucdyn {

double BoundLedger::term(std::size_t i) const {
  if (i < 1 || i > terms.size())
    throw DomainError("ledger holds terms 1.." + std::to_string(terms.size()) + ", asked for " + std::to_string(i));
  return terms[i - 1];
}

double BoundLedger::shifted(std::size_t n, std::size_t k) const {
  if (n == 0 && k < prefix.size()) return prefix[k];
  double s = 0.0;
  for (std::size_t i = 1; i <= k; ++i) s += term(n + i);
  return s;
}

bool BoundLedger::exact_range(std::size_t n, std::size_t k) const {
  for (std::size_t i = n + 1; i <= n + k; ++i) {
    term(i);
    if (!exact[i - 1]) return false;
  }
  return true;
}

BoundLedger build_ledger(const MapFamily& fam, std::size_t n_terms, std::size_t resolution) {
  BoundLedger l;
  l.label = fam.label();
  l.prefix.push_back(0.0);
  for (std::size_t n = 1; n <= n_terms; ++n) {
    SupEstimate s = sup_metric(fam.space(), fam.map(n), fam.limit(), resolution);
    l.terms.push_back(s.value);
    l.exact.push_back(s.exact);
    l.prefix.push_back(l.prefix.back() + s.value);
  }
  return l;
}

namespace {

DeviationRecord finish(Point x, std::size_t n, std::size_t k, double measured, const BoundLedger& ledger,
                       double tol) {
  DeviationRecord r{std::move(x), n, k, measured, ledger.shifted(n, k), false, !ledger.exact_range(n, k)};
  r.holds = r.measured <= r.bound + tol;
  return r;
}

void require_terms(const BoundLedger& ledger, std::size_t last) {
  if (last > ledger.size())
    throw DomainError("bound needs ledger terms through " + std::to_string(last) + ", ledger has " +
                      std::to_string(ledger.size()));
}

}  // namespace

DeviationRecord deviation_check(const MapFamily& fam, const BoundLedger& ledger, const Point& x, std::size_t k,
                                double tol) {
  return shifted_deviation_check(fam, ledger, x, 0, k, tol);
}

DeviationRecord shifted_deviation_check(const MapFamily& fam, const BoundLedger& ledger, const Point& x,
                                        std::size_t n, std::size_t k, double tol) {
  if (k < 1) throw DomainError("k must be positive");
  require_terms(ledger, n + k);
  fam.space().require(x);
  Point start = omega(fam, x, n);
  double measured = distance(fam.space(), omega_window(fam, start, n, k), limit_iterate(fam, start, k));
  return finish(x, n, k, measured, ledger, tol);
}

std::vector<DeviationRecord> deviation_sweep(const MapFamily& fam, const BoundLedger& ledger,
                                             const std::vector<Point>& points, std::size_t n, std::size_t k_max,
                                             double tol) {
  require_terms(ledger, n + k_max);
  std::vector<MapDescriptor> window;
  for (std::size_t i = 1; i <= k_max; ++i) window.push_back(fam.map(n + i));
  std::vector<double> bounds(k_max + 1, 0.0);
  std::vector<bool> approx(k_max + 1, false);
  for (std::size_t k = 1; k <= k_max; ++k) {
    bounds[k] = n == 0 ? ledger.prefix[k] : bounds[k - 1] + ledger.term(n + k);
    approx[k] = approx[k - 1] || !ledger.exact[n + k - 1];
  }
  std::vector<DeviationRecord> out;
  out.reserve(points.size() * k_max);
  for (const auto& x : points) {
    Point y = omega(fam, x, n), z = y;
    for (std::size_t k = 1; k <= k_max; ++k) {
      y = ucdyn::apply(window[k - 1], y);
      z = ucdyn::apply(fam.limit(), z);
      DeviationRecord r{x, n, k, distance(fam.space(), y, z), bounds[k], false, approx[k]};
      r.holds = r.measured <= r.bound + tol;
      out.push_back(std::move(r));
    }
  }
  return out;
}

DeviationRecord isometry_bound_check(const MapFamily& fam, const BoundLedger& ledger, std::size_t resolution,
                                     std::size_t n, std::size_t k, double tol) {
  if (k < 1) throw DomainError("k must be positive");
  MetricCheck mc = isometry_shrinking_check(fam.space(), fam.limit(), resolution, tol);
  if (!mc.isometry && !mc.shrinking)
    throw HypothesisError("limit map " + describe(fam.limit()) + " is neither an isometry nor shrinking");
  require_terms(ledger, n + k);
  double worst = 0.0;
  Point arg = sample_grid(fam.space(), 2).points.front();
  for (const auto& x : nested_grid(fam.space(), resolution).points) {
    double d = distance(fam.space(), omega_window(fam, x, n, k), limit_iterate(fam, x, k));
    if (d > worst) worst = d, arg = x;
  }
  return finish(arg, n, k, worst, ledger, tol);
}

CollectiveProfile collective_convergence_profile(const MapFamily& fam, const BoundLedger& ledger, std::size_t n_max,
                                                 std::size_t k_max, std::size_t resolution, double eps, double tol) {
  if (n_max < 1 || k_max < 1) throw DomainError("profile needs n_max, k_max >= 1");
  require_terms(ledger, n_max + k_max);
  CollectiveProfile p;
  p.n_max = n_max;
  p.k_max = k_max;
  p.E.assign(n_max + 1, std::vector<double>(k_max, 0.0));
  p.bound.assign(n_max + 1, std::vector<double>(k_max, 0.0));
  std::vector<MapDescriptor> maps;
  for (std::size_t i = 1; i <= n_max + k_max; ++i) maps.push_back(fam.map(i));
  const auto grid = sample_grid(fam.space(), resolution).points;
  for (std::size_t n = 0; n <= n_max; ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
      s += ledger.term(n + k);
      p.bound[n][k - 1] = s;
    }
    for (const auto& x : grid) {
      Point y = x, z = x;
      for (std::size_t k = 1; k <= k_max; ++k) {
        y = ucdyn::apply(maps[n + k - 1], y);
        z = ucdyn::apply(fam.limit(), z);
        p.E[n][k - 1] = std::max(p.E[n][k - 1], distance(fam.space(), y, z));
      }
    }
    p.T.push_back(*std::max_element(p.E[n].begin(), p.E[n].end()));
  }
  bool trend = true;
  for (std::size_t n = n_max / 2 + 1; n <= n_max; ++n) trend = trend && p.T[n] <= p.T[n - 1] + tol;
  p.collective_likely = trend && p.T[n_max] < eps;
  return p;
}

std::string profile_csv(const CollectiveProfile& p, double tol) {
  std::ostringstream os;
  os.precision(17);
  os << "n,k,E,bound,holds\n";
  for (std::size_t n = 0; n <= p.n_max; ++n)
    for (std::size_t k = 1; k <= p.k_max; ++k) {
      double e = p.E[n][k - 1], b = p.bound[n][k - 1];
      os << n << ',' << k << ',' << e << ',' << b << ',' << (e <= b + tol ? "true" : "false") << '\n';
    }
  return os.str();
}

nlohmann::json record_to_json(const DeviationRecord& r) {
  return {{"x", point_to_json(r.x)},   {"n", r.n},         {"k", r.k},
          {"measured", r.measured},    {"bound", r.bound}, {"holds", r.holds},
          {"approximate_bound", r.approximate_bound}};
}

DeviationRecord record_from_json(const PhaseSpace& space, const nlohmann::json& j) {
  try {
    return DeviationRecord{point_from_json(space, j.at("x")),  j.at("n").get<std::size_t>(),
                           j.at("k").get<std::size_t>(),       j.at("measured").get<double>(),
                           j.at("bound").get<double>(),        j.at("holds").get<bool>(),
                           j.at("approximate_bound").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad deviation record: ") + e.what());
  }
}

}  // namespace ucdyn
