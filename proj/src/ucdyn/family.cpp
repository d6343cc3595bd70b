#include "ucdyn/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ucdyn/error.hpp"
#include "ucdyn/sup_metric.hpp"

namespace ucdyn {

namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

// alpha / 2pi within 1e-12 of p/q for some q <= 1000.
bool near_rational(double turns) {
  for (int q = 1; q <= 1000; ++q) {
    double p = std::round(turns * q);
    if (std::fabs(turns - p / q) < 1e-12) return true;
  }
  return false;
}

struct TableEntry {
  std::size_t from = 1;
  std::optional<std::size_t> to;
  nlohmann::json map;
};

MapDescriptor build_entry_map(const nlohmann::json& j, SpaceKind kind, std::size_t n) {
  const auto type = j.value("type", std::string());
  if (type == "rotation_series" || type == "affine_series") {
    double base = j.value("base", 0.0);
    double coeff = j.value("coeff", 1.0);
    double power = j.value("power", 1.0);
    double offset = base + coeff * std::pow(static_cast<double>(n), -power);
    if (type == "rotation_series") return rotation(offset);
    return affine(j.value("slope", 1), offset);
  }
  return map_from_json(j, kind);
}

void check_family_maps(const PhaseSpace& space, const MapDescriptor& m, const std::string& what) {
  if (domain_of(m) != space.kind()) throw TypeError(what + " does not act on the " + to_string(space.kind()) + " space");
}

std::vector<std::pair<std::size_t, double>> make_checkpoints(const std::vector<double>& sums) {
  std::vector<std::pair<std::size_t, double>> out;
  const std::size_t n = sums.size();
  auto push = [&](std::size_t i) {
    if (i >= 1 && i <= n && (out.empty() || out.back().first < i)) out.emplace_back(i, sums[i - 1]);
  };
  for (std::size_t i = 1; i <= 10; ++i) push(i);
  for (std::size_t scale = 10; scale < n; scale *= 10)
    for (std::size_t m : {2, 5, 10}) push(scale * m);
  push(n);
  return out;
}

}  // namespace

MapFamily::MapFamily(PhaseSpace space, Generator generator, MapDescriptor limit, std::string label,
                     std::optional<std::size_t> autonomous_from)
    : space_(space),
      generator_(std::move(generator)),
      limit_(std::move(limit)),
      label_(std::move(label)),
      autonomous_from_(autonomous_from) {
  if (!generator_) throw DomainError("family needs a generator");
  if (autonomous_from_ && *autonomous_from_ < 1) throw DomainError("autonomous index must be positive");
  check_family_maps(space_, limit_, "limit map");
}

MapFamily MapFamily::autonomous(PhaseSpace space, MapDescriptor f, std::string label) {
  auto gen = [f](std::size_t) { return f; };
  return MapFamily(space, gen, f, std::move(label), 1);
}

MapDescriptor MapFamily::map(std::size_t n) const {
  if (n < 1) throw DomainError("family maps are indexed from 1");
  if (autonomous_from_ && n >= *autonomous_from_) return limit_;
  MapDescriptor m = generator_(n);
  check_family_maps(space_, m, "f_" + std::to_string(n));
  return m;
}

const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names{"alternating-rotation", "inverse-square-rotation",
                                              "perturbed-doubling", "plateau-tent", "odometer-deletion"};
  return names;
}

double golden_alpha() { return kTwoPi * (std::sqrt(5.0) - 1.0) / 2.0; }

MapFamily make_builtin_family(const std::string& name, const nlohmann::json& params) {
  const nlohmann::json p = params.is_object() ? params : nlohmann::json::object();
  try {
    if (name == "alternating-rotation") {
      const double alpha = p.value("alpha", golden_alpha());
      auto gen = [alpha](std::size_t n) {
        double nn = static_cast<double>(n);
        return rotation(n % 2 == 1 ? alpha + 2.0 / (nn + 1.0) : alpha - 2.0 / nn);
      };
      MapFamily fam(PhaseSpace::circle(), gen, rotation(alpha), name);
      if (p.value("rational", false) || near_rational(alpha / kTwoPi))
        fam.add_warning("alpha/2pi = " + fmt(alpha / kTwoPi, 12) + " is (near) rational; the limit rotation is not minimal");
      return fam;
    }
    if (name == "inverse-square-rotation") {
      auto gen = [](std::size_t n) {
        double nn = static_cast<double>(n);
        return rotation(1.0 / (nn * nn));
      };
      return MapFamily(PhaseSpace::circle(), gen, rotation(0.0), name);
    }
    if (name == "perturbed-doubling") {
      auto gen = [](std::size_t n) { return affine(2, 1.0 / static_cast<double>(n)); };
      return MapFamily(PhaseSpace::circle(), gen, affine(2, 0.0), name);
    }
    if (name == "plateau-tent") {
      auto g = piecewise_linear({{0.0, 1.0}, {0.5, 1.0}, {1.0, 0.0}});
      auto gen = [g](std::size_t n) { return n == 1 ? g : tent(); };
      return MapFamily(PhaseSpace::unit_interval(), gen, tent(), name, 2);
    }
    if (name == "odometer-deletion") {
      const unsigned w = p.value("word_length", 24u);
      auto gen = [](std::size_t n) { return compose(odometer(), deletion(static_cast<unsigned>(n))); };
      return MapFamily(PhaseSpace::binary(w), gen, odometer(), name);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed parameters for '" + name + "': " + e.what());
  }
  throw ConfigError("unknown builtin family '" + name + "'");
}

MapFamily family_from_json(const PhaseSpace& space, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("'family' must be an object");
  if (j.contains("builtin")) {
    auto params = j.value("params", nlohmann::json::object());
    if (space.kind() == SpaceKind::BinarySeq && !params.contains("word_length"))
      params["word_length"] = space.word_length();
    MapFamily fam = make_builtin_family(j.at("builtin").get<std::string>(), params);
    if (!(fam.space() == space))
      throw ConfigError("builtin '" + fam.label() + "' lives on the " + to_string(fam.space().kind()) + " space");
    if (j.contains("label")) {
      MapFamily relabelled(fam.space(), [fam](std::size_t n) { return fam.map(n); }, fam.limit(),
                           j.at("label").get<std::string>(), fam.autonomous_from());
      for (const auto& w : fam.warnings()) relabelled.add_warning(w);
      return relabelled;
    }
    return fam;
  }
  if (!j.contains("generator") || !j.contains("limit"))
    throw ConfigError("custom family needs 'generator' and 'limit'");
  try {
    MapDescriptor limit = map_from_json(j.at("limit"), space.kind());
    std::vector<TableEntry> table;
    for (const auto& e : j.at("generator")) {
      TableEntry t;
      t.from = e.value("from", std::size_t{1});
      if (e.contains("to")) t.to = e.at("to").get<std::size_t>();
      t.map = e.at("map");
      if (t.to && *t.to < t.from) throw ConfigError("generator entry has to < from");
      build_entry_map(t.map, space.kind(), t.from);  // validate eagerly
      table.push_back(std::move(t));
    }
    if (table.empty()) throw ConfigError("generator table is empty");
    std::sort(table.begin(), table.end(), [](const auto& a, const auto& b) { return a.from < b.from; });
    if (table.front().from != 1) throw ConfigError("generator table must start at index 1");
    for (std::size_t i = 0; i + 1 < table.size(); ++i)
      if (!table[i].to || *table[i].to + 1 != table[i + 1].from)
        throw ConfigError("generator table entries must be contiguous");
    if (table.back().to) throw ConfigError("last generator entry must be open-ended");

    std::optional<std::size_t> autonomous_from;
    if (table.back().map == map_to_json(limit)) autonomous_from = table.back().from;

    const SpaceKind kind = space.kind();
    auto gen = [table, kind](std::size_t n) {
      for (const auto& t : table)
        if (n >= t.from && (!t.to || n <= *t.to)) return build_entry_map(t.map, kind, n);
      throw DomainError("no generator entry for index " + std::to_string(n));
    };
    return MapFamily(space, gen, limit, j.value("label", std::string("custom")), autonomous_from);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed custom family: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const TypeError& e) {
    throw ConfigError(e.what());
  }
}

Verdict commutes_with_limit(const MapFamily& fam, std::size_t resolution, double tol, std::size_t max_index) {
  if (max_index < 1) throw DomainError("commutativity check needs max index >= 1");
  Verdict v{"commutes", std::nullopt, Outcome::Holds, Basis::Symbolic, nlohmann::json::object(), ""};
  std::size_t last = max_index;
  if (fam.autonomous_from()) last = std::min(last, *fam.autonomous_from() - 1);
  double worst = 0.0;
  for (std::size_t n = 1; n <= last; ++n) {
    MapDescriptor fn = fam.map(n);
    SupEstimate s = sup_metric(fam.space(), compose(fn, fam.limit()), compose(fam.limit(), fn), resolution);
    if (!s.exact) v.basis = Basis::Sampled;
    worst = std::max(worst, s.value);
    if (s.value > tol) {
      v.outcome = Outcome::Refuted;
      v.basis = s.exact ? Basis::Symbolic : Basis::Sampled;
      v.witness = {{"n", n}, {"x", s.witness ? point_to_json(*s.witness) : nlohmann::json()}, {"gap", s.value}};
      v.narrative = "f_" + std::to_string(n) + " o f and f o f_" + std::to_string(n) + " differ by " + fmt(s.value);
      return v;
    }
  }
  v.witness = {{"checked_through", max_index}, {"max_gap", worst}};
  v.narrative = "f_n o f = f o f_n within tol for n <= " + std::to_string(max_index);
  if (last < max_index) v.narrative += " (f_n = f from n = " + std::to_string(last + 1) + ")";
  return v;
}

Verdict feeble_open_check(const MapDescriptor& m) {
  Verdict v{"feeble-open", std::nullopt, Outcome::Inconclusive, Basis::Symbolic, nlohmann::json::object(), ""};
  if (affine_form(m)) {
    v.outcome = Outcome::Holds;
    v.narrative = "affine circle maps are open";
    return v;
  }
  if (auto pl = piecewise_form(m)) {
    const auto& b = pl->breakpoints;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      if (b[i + 1].second != b[i].second) continue;
      std::size_t j = i + 1;
      while (j + 1 < b.size() && b[j + 1].second == b[i].second) ++j;
      v.outcome = Outcome::Refuted;
      v.witness = {{"piece", {b[i].first, b[j].first}}, {"value", b[i].second}, {"slope", 0.0}};
      v.narrative = "zero-slope piece [" + fmt(b[i].first) + ", " + fmt(b[j].first) + "] maps to the single point " +
                    fmt(b[i].second);
      return v;
    }
    v.outcome = Outcome::Holds;
    v.narrative = "every linear piece has non-zero slope";
    return v;
  }
  v.basis = Basis::Horizon;
  v.narrative = "no symbolic rule for " + describe(m);
  return v;
}

std::string to_string(SummabilityFlag f) {
  return f == SummabilityFlag::SummableLikely ? "summable-likely" : "divergent-likely";
}

SummabilityEstimate summability_estimate(const MapFamily& fam, std::size_t n_terms, std::size_t resolution) {
  if (n_terms < 2) throw DomainError("summability estimate needs at least two terms");
  SummabilityEstimate est;
  est.terms.reserve(n_terms);
  double sum = 0.0;
  bool all_exact = true;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    SupEstimate s = sup_metric(fam.space(), fam.map(n), fam.limit(), resolution);
    est.terms.push_back(s.value);
    est.exact.push_back(s.exact);
    all_exact = all_exact && s.exact;
    sum += s.value;
    est.partial_sums.push_back(sum);
  }
  est.checkpoints = make_checkpoints(est.partial_sums);

  const std::size_t lo = n_terms / 2;
  std::vector<std::pair<double, double>> pts;  // (log n, log term)
  for (std::size_t n = std::max<std::size_t>(lo, 1); n <= n_terms; ++n)
    if (est.terms[n - 1] > 0.0) pts.emplace_back(std::log(static_cast<double>(n)), std::log(est.terms[n - 1]));

  if (pts.size() < 2) {
    est.flag = SummabilityFlag::SummableLikely;
    est.exact_closed_form = all_exact && pts.empty();
    est.limit_estimate = sum;
    est.rationale = "terms vanish beyond n = " + std::to_string(lo) + "; the series is a finite sum";
    return est;
  }

  double mx = 0, my = 0;
  for (auto [x, y] : pts) mx += x, my += y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  const double p = -sxy / sxx;
  const double c = std::exp(my + p * mx);
  est.fitted_exponent = p;

  // Exact c / n^p with integer p >= 2: the limit is c * zeta(p).
  const double pr = std::round(p);
  if (all_exact && pr >= 2.0 && std::fabs(p - pr) < 1e-6) {
    const double c0 = est.terms[0];
    bool pure = true;
    for (std::size_t n = 1; n <= n_terms && pure; ++n)
      pure = std::fabs(est.terms[n - 1] * std::pow(static_cast<double>(n), pr) - c0) <= 1e-9 * c0;
    if (pure) {
      est.flag = SummabilityFlag::SummableLikely;
      est.exact_closed_form = true;
      est.limit_estimate = c0 * std::riemann_zeta(pr);
      est.rationale = "terms are exactly " + fmt(c0) + "/n^" + fmt(pr) + "; the series sums to " + fmt(c0) +
                      " * zeta(" + fmt(pr) + ")";
      return est;
    }
  }

  const std::string window = " over n in [" + std::to_string(std::max<std::size_t>(lo, 1)) + ", " +
                             std::to_string(n_terms) + "]";
  // Margin above 1 keeps harmonic-like staircases on the divergent side.
  if (p > 1.05) {
    est.flag = SummabilityFlag::SummableLikely;
    const double nn = static_cast<double>(n_terms) + 0.5;
    est.limit_estimate = sum + c * std::pow(nn, 1.0 - p) / (p - 1.0);
    est.rationale = "tail terms fit C/n^p with p = " + fmt(p, 4) + window + "; p > 1 suggests convergence";
  } else {
    est.flag = SummabilityFlag::DivergentLikely;
    est.rationale = "tail terms fit C/n^p with p = " + fmt(p, 4) + window + "; p <= 1 suggests divergence";
  }
  return est;
}

MetricCheck isometry_shrinking_check(const PhaseSpace& space, const MapDescriptor& m, std::size_t resolution,
                                     double tol) {
  if (auto s = symbolic_metric_class(m)) return {s->isometry, s->shrinking, true};
  PointCloud grid = nested_grid(space, resolution);
  if (grid.points.size() > 128) grid.points.resize(128);
  MetricCheck out{true, true, false};
  std::vector<Point> images;
  for (const auto& x : grid.points) images.push_back(apply(m, x));
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    for (std::size_t j = i + 1; j < grid.points.size(); ++j) {
      double before = distance(space, grid.points[i], grid.points[j]);
      double after = distance(space, images[i], images[j]);
      if (std::fabs(after - before) > tol) out.isometry = false;
      if (after > before + tol) out.shrinking = false;
    }
  return out;
}

Verdict surjectivity_check(const PhaseSpace& space, const MapDescriptor& m, std::size_t resolution, double eps) {
  Verdict v{"surjective", std::nullopt, Outcome::Holds, Basis::Sampled, nlohmann::json::object(), ""};
  PointCloud grid = sample_grid(space, resolution);
  PointCloud image{{}, space.kind()};
  for (const auto& x : grid.points) image.points.push_back(apply(m, x));
  const double h = hausdorff_distance(space, grid, image);
  if (h <= eps) {
    v.witness = {{"hausdorff", h}, {"resolution", resolution}};
    v.narrative = "image of the grid is " + fmt(eps) + "-dense (D_H = " + fmt(h) + ")";
    return v;
  }
  v.outcome = Outcome::Refuted;
  for (const auto& g : grid.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : image.points) best = std::min(best, distance(space, g, y));
    if (best > eps) {
      v.witness = {{"uncovered", point_to_json(g)}, {"radius", eps}, {"gap", best}, {"hausdorff", h}};
      v.narrative = "no image point within " + fmt(eps) + " of " + to_string(g);
      return v;
    }
  }
  v.witness = {{"hausdorff", h}, {"radius", eps}};
  v.narrative = "image of the grid leaves the grid by " + fmt(h);
  return v;
}

HypothesisProfile profile_hypotheses(const MapFamily& fam, const CheckConfig& cfg) {
  HypothesisProfile p;
  const PhaseSpace& space = fam.space();
  const std::size_t n = std::max<std::size_t>(cfg.horizon, 2);
  p.commutes = commutes_with_limit(fam, cfg.sup_grid, cfg.tol, n);
  p.summability = summability_estimate(fam, n, cfg.sup_grid);

  std::size_t last = n;
  if (fam.autonomous_from()) last = std::min(last, *fam.autonomous_from());
  p.feeble_open = feeble_open_check(fam.limit());
  p.feeble_open.witness["index"] = "limit";
  for (std::size_t i = 1; i <= last && !p.feeble_open.refuted(); ++i) {
    Verdict vi = feeble_open_check(fam.map(i));
    if (vi.refuted() || (vi.outcome == Outcome::Inconclusive && p.feeble_open.holds())) {
      p.feeble_open = vi;
      p.feeble_open.witness["index"] = i;
      p.feeble_open.narrative = "f_" + std::to_string(i) + ": " + vi.narrative;
    }
  }
  p.feeble_open.property = "feeble-open";

  const std::size_t res = space.kind() == SpaceKind::BinarySeq
                              ? std::max<std::size_t>(2, binary_ball_prefix(cfg.eps))
                              : cover_grid(space, cfg.eps).points.size();
  p.surjective = surjectivity_check(space, fam.limit(), res, cfg.eps);
  p.surjective.witness["index"] = "limit";
  for (std::size_t i = 1; i <= std::min<std::size_t>(last, 64) && p.surjective.holds(); ++i) {
    Verdict vi = surjectivity_check(space, fam.map(i), res, cfg.eps);
    if (vi.refuted()) {
      p.surjective = vi;
      p.surjective.witness["index"] = i;
      p.surjective.narrative = "f_" + std::to_string(i) + ": " + vi.narrative;
    }
  }

  const auto& terms = p.summability.terms;
  double tail = 0.0;
  bool tail_exact = true;
  for (std::size_t i = n / 2; i < n; ++i) {
    tail = std::max(tail, terms[i]);
    tail_exact = tail_exact && p.summability.exact[i];
  }
  p.uniform_convergence = {"uniform-convergence", std::nullopt, Outcome::Inconclusive,
                           tail_exact ? Basis::Symbolic : Basis::Sampled,
                           {{"tail_max", tail}, {"from", n / 2 + 1}, {"to", n}}, ""};
  if (tail < cfg.eps) {
    p.uniform_convergence.outcome = Outcome::Holds;
    p.uniform_convergence.narrative = "D(f_n, f) < eps for all n in the second half of the horizon";
  } else {
    p.uniform_convergence.basis = Basis::Horizon;
    p.uniform_convergence.narrative = "D(f_n, f) still reaches " + fmt(tail) + " late in the horizon";
  }

  MetricCheck mc = isometry_shrinking_check(space, fam.limit(), cfg.sup_grid, cfg.tol);
  p.isometry = mc.isometry;
  p.shrinking = mc.shrinking || mc.isometry;
  p.bijective = symbolic_bijective(fam.limit());
  p.nearness_declared = cfg.nearness_criteria;
  return p;
}

nlohmann::json profile_to_json(const HypothesisProfile& p) {
  nlohmann::json sums = nlohmann::json::array();
  for (auto [n, s] : p.summability.checkpoints) sums.push_back({n, s});
  const auto& se = p.summability;
  return {{"commutes", verdict_to_json(p.commutes)},
          {"summability",
           {{"flag", to_string(se.flag)},
            {"exact", se.exact_closed_form},
            {"fitted_exponent", se.fitted_exponent},
            {"limit_estimate", se.limit_estimate ? nlohmann::json(*se.limit_estimate) : nlohmann::json(nullptr)},
            {"terms", se.checkpoints.empty() ? 0 : se.checkpoints.back().first},
            {"partial_sums", sums},
            {"rationale", se.rationale}}},
          {"feeble_open", verdict_to_json(p.feeble_open)},
          {"surjective", verdict_to_json(p.surjective)},
          {"uniform_convergence", verdict_to_json(p.uniform_convergence)},
          {"isometry", p.isometry},
          {"shrinking", p.shrinking},
          {"bijective", p.bijective ? nlohmann::json(*p.bijective) : nlohmann::json(nullptr)},
          {"nearness_declared", p.nearness_declared}};
}

HypothesisProfile profile_from_json(const nlohmann::json& j) {
  HypothesisProfile p;
  p.commutes = verdict_from_json(j.at("commutes"));
  const auto& s = j.at("summability");
  p.summability.flag = s.at("flag").get<std::string>() == "summable-likely" ? SummabilityFlag::SummableLikely
                                                                             : SummabilityFlag::DivergentLikely;
  p.summability.exact_closed_form = s.at("exact").get<bool>();
  p.summability.fitted_exponent = s.at("fitted_exponent").get<double>();
  if (!s.at("limit_estimate").is_null()) p.summability.limit_estimate = s.at("limit_estimate").get<double>();
  for (const auto& e : s.at("partial_sums"))
    p.summability.checkpoints.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
  p.summability.rationale = s.at("rationale").get<std::string>();
  p.feeble_open = verdict_from_json(j.at("feeble_open"));
  p.surjective = verdict_from_json(j.at("surjective"));
  p.uniform_convergence = verdict_from_json(j.at("uniform_convergence"));
  p.isometry = j.at("isometry").get<bool>();
  p.shrinking = j.at("shrinking").get<bool>();
  if (!j.at("bijective").is_null()) p.bijective = j.at("bijective").get<bool>();
  p.nearness_declared = j.at("nearness_declared").get<bool>();
  return p;
}

}  // namespace ucdyn
