#include "ucdyn/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

#include "ucdyn/error.hpp"
#include "ucdyn/region.hpp"

namespace ucdyn {

namespace {

using nlohmann::json;

constexpr std::size_t kCycleMemory = 64;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Verdict make(const char* property, Outcome o, Basis b, json witness, std::string narrative) {
  return Verdict{property, std::nullopt, o, b, std::move(witness), std::move(narrative)};
}

// ---------------------------------------------------------------- regions

struct RegionTrace {
  std::vector<Region> states;  // states[n] = omega_n(U) until a cycle closes
  bool cyclic = false;
  std::size_t cycle_start = 0;
  std::size_t period = 0;

  const Region& at(std::size_t n) const {
    if (n < states.size()) return states[n];
    return states[cycle_start + (n - cycle_start) % period];
  }
};

RegionTrace trace_region(const StepSequence& steps, Region r0, std::size_t horizon) {
  RegionTrace t;
  t.states.reserve(horizon + 1);
  t.states.push_back(std::move(r0));
  const auto a = steps.autonomous_from();
  for (std::size_t n = 1; n <= horizon; ++n) {
    Region next = image(steps.space(), steps.step(n), t.states.back());
    // From index a-1 on every further step applies f, so a repeat closes a cycle.
    if (a && n >= *a) {
      std::size_t lo = std::max<std::size_t>(*a - 1, n > kCycleMemory ? n - kCycleMemory : 0);
      for (std::size_t j = n; j-- > lo;) {
        if (same_region(t.states[j], next)) {
          t.cyclic = true;
          t.cycle_start = j;
          t.period = n - j;
          return t;
        }
      }
    }
    t.states.push_back(std::move(next));
  }
  return t;
}

std::vector<double> trace_diameters(const PhaseSpace& space, const RegionTrace& t, std::size_t horizon) {
  std::vector<double> d(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n)
    d[n] = n < t.states.size() ? region_diameter(space, t.states[n]) : d[t.cycle_start + (n - t.cycle_start) % t.period];
  return d;
}

using Bits = std::vector<std::uint64_t>;

bool bit(const Bits& b, std::size_t n) { return (b[n >> 6] >> (n & 63)) & 1u; }
void set_bit(Bits& b, std::size_t n) { b[n >> 6] |= std::uint64_t{1} << (n & 63); }

// hits[n] for n in [1, horizon]: omega_n(U) comes within eps of v.
Bits hit_bits(const PhaseSpace& space, const RegionTrace& t, const Point& v, double eps, std::size_t horizon) {
  Bits b((horizon >> 6) + 1, 0);
  const std::size_t stored = t.states.size();
  std::vector<char> own(stored, 0);
  for (std::size_t n = 1; n < stored; ++n) own[n] = region_distance(space, t.states[n], v) < eps;
  if (t.cyclic && t.cycle_start == 0) own[0] = region_distance(space, t.states[0], v) < eps;
  for (std::size_t n = 1; n <= horizon; ++n) {
    std::size_t idx = n < stored ? n : t.cycle_start + (n - t.cycle_start) % t.period;
    if (own[idx]) set_bit(b, n);
  }
  return b;
}

std::optional<std::size_t> first_hit(const Bits& b, std::size_t horizon) {
  for (std::size_t n = 1; n <= horizon; ++n)
    if (bit(b, n)) return n;
  return std::nullopt;
}

// Does the cycle of a cyclic trace contain an index with the bit clear?
bool cycle_misses(const RegionTrace& t, const Bits& b, std::size_t horizon) {
  if (!t.cyclic) return false;
  std::size_t from = std::max<std::size_t>(t.cycle_start, 1);
  for (std::size_t n = from; n < from + t.period && n <= horizon; ++n)
    if (!bit(b, n)) return true;
  return false;
}

// The ball U has diameter at most `diam` from time `from` onward, forever.
struct DiameterCap {
  double diam = 0.0;
  std::size_t from = 0;
  const char* rule = "";
};

std::optional<DiameterCap> diameter_cap(const PhaseSpace& space, const StepSequence& steps, const RegionTrace& t,
                                        const std::vector<double>& diam) {
  if (steps.isometric_steps()) return DiameterCap{region_diameter(space, t.states[0]), 0, "isometric steps"};
  for (std::size_t n = 0; n < diam.size(); ++n)
    if (diam[n] == 0.0) return DiameterCap{0.0, n, "collapse to a point"};
  if (t.cyclic) {
    double worst = 0.0;
    for (std::size_t n = t.cycle_start; n < t.cycle_start + t.period; ++n)
      worst = std::max(worst, region_diameter(space, t.states[n]));
    return DiameterCap{worst, t.cycle_start, "eventually periodic image"};
  }
  return std::nullopt;
}

// Two grid targets no set of diameter `diam` can be eps-close to at once.
std::optional<std::pair<std::size_t, std::size_t>> separated_targets(const PhaseSpace& space, const PointCloud& targets,
                                                                     double diam, double eps) {
  for (std::size_t i = 0; i < targets.points.size(); ++i)
    for (std::size_t j = i + 1; j < targets.points.size(); ++j)
      if (distance(space, targets.points[i], targets.points[j]) >= diam + 2.0 * eps) return std::make_pair(i, j);
  return std::nullopt;
}

// ----------------------------------------------------- rotation confinement

// For systems whose steps are all rotations: bounds on the total unwrapped
// displacement omega_n(x) - x over all n.
struct Confinement {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
};

double signed_amount(double offset) { return offset > kPi ? offset - kTwoPi : offset; }

std::optional<Confinement> rotation_confinement(const StepSequence& steps, std::size_t horizon) {
  if (steps.space().kind() != SpaceKind::Circle || horizon < 4) return std::nullopt;
  std::vector<double> amounts;
  amounts.reserve(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    auto af = affine_form(steps.step(n));
    if (!af || af->slope != 1) return std::nullopt;
    amounts.push_back(signed_amount(af->offset));
  }
  Confinement c{0.0, 0.0, true};
  double sum = 0.0;
  for (double a : amounts) {
    sum += a;
    c.lo = std::min(c.lo, sum);
    c.hi = std::max(c.hi, sum);
  }
  if (auto a = steps.autonomous_from(); a && *a <= horizon) {
    if (amounts[*a - 1] != 0.0) return std::nullopt;  // constant non-zero drift
    return c;
  }
  // Tail beyond the horizon: fit |a_n| ~ C / n^p over the second half.
  const std::size_t from = horizon / 2;
  const double sign = amounts.back() > 0 ? 1.0 : -1.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = from; n <= horizon; ++n) {
    double a = amounts[n - 1] * sign;
    if (!(a > 0.0)) return std::nullopt;
    pts.emplace_back(std::log(static_cast<double>(n)), std::log(a));
  }
  double mx = 0, my = 0;
  for (auto [x, y] : pts) mx += x, my += y;
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  const double p = -sxy / sxx;
  if (!(p > 1.05)) return std::nullopt;
  const double cc = std::exp(my + p * mx);
  // 50% margin over the fitted tail integral.
  const double tail = 1.5 * cc * std::pow(static_cast<double>(horizon), 1.0 - p) / (p - 1.0);
  if (sign > 0) c.hi = std::max(c.hi, sum + tail);
  else c.lo = std::min(c.lo, sum - tail);
  c.exact = false;
  return c;
}

ArcSet confined_arc(const Point& x, const Confinement& c, double radius) {
  double t = std::get<CircleAngle>(x).theta;
  return ArcSet{wrap_angle(t + c.lo - radius), c.hi - c.lo + 2.0 * radius};
}

json arc_json(const ArcSet& a) { return region_to_json(Region{a}); }

// --------------------------------------------------------------- ladders

// Radii used for balls; binary rungs below the word resolution are dropped.
std::vector<double> usable_radii(const PhaseSpace& space, const std::vector<double>& radii) {
  std::vector<double> out;
  for (double r : radii) {
    if (space.kind() == SpaceKind::BinarySeq &&
        (r <= space.resolution_floor() || binary_ball_prefix(r) >= space.word_length()))
      continue;
    out.push_back(r);
  }
  return out;
}

StepSequence make_steps(const SystemView& sys, std::size_t horizon) { return StepSequence(sys, horizon); }

// ------------------------------------------------------------ point orbits

double tail_stat(const PhaseSpace& space, const std::vector<Point>& a, const std::vector<Point>& b, std::size_t from,
                 std::size_t to, bool want_min, std::size_t* where) {
  double best = want_min ? std::numeric_limits<double>::infinity() : -1.0;
  for (std::size_t n = from; n <= to; ++n) {
    double d = distance(space, a[n], b[n]);
    if (want_min ? d < best : d > best) {
      best = d;
      if (where) *where = n;
    }
  }
  return best;
}

// Index where the two orbits first coincide through a step that is constant
// on the segment between them (a plateau). Collapses explained any other
// way, e.g. by floating-point exhaustion of an expanding map, are ignored.
std::optional<std::size_t> plateau_collapse(const StepSequence& steps, const std::vector<Point>& a,
                                            const std::vector<Point>& b) {
  if (steps.space().kind() != SpaceKind::UnitInterval) return std::nullopt;
  for (std::size_t n = 1; n < a.size(); ++n) {
    if (!(a[n] == b[n]) || a[n - 1] == b[n - 1]) continue;
    double x = std::get<IntervalPoint>(a[n - 1]).x;
    double y = std::get<IntervalPoint>(b[n - 1]).x;
    auto pl = piecewise_form(steps.step(n), true);
    if (!pl) return std::nullopt;
    const auto& bp = pl->breakpoints;
    double lo = std::min(x, y), hi = std::max(x, y);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
      if (bp[i].second == bp[i + 1].second && bp[i].first <= lo && hi <= bp[i + 1].first) return n;
    return std::nullopt;
  }
  return std::nullopt;
}

struct PairResult {
  Outcome outcome = Outcome::Inconclusive;
  Basis basis = Basis::Sampled;
  json witness;
  std::string narrative;
};

PairResult proximal_pair(const StepSequence& steps, const std::vector<Point>& ox, const std::vector<Point>& oy,
                         const CheckConfig& cfg) {
  const auto& space = steps.space();
  const std::size_t n = cfg.horizon;
  const std::size_t from = n - cfg.tail_window;
  const double d0 = distance(space, ox[0], oy[0]);
  if (d0 == 0.0) return {Outcome::Holds, Basis::Symbolic, {{"distance", 0.0}}, "x = y"};
  if (steps.isometric_steps())
    return {Outcome::Refuted, Basis::Symbolic, {{"distance", d0}},
            "isometric steps keep the pair at distance " + fmt(d0)};
  if (auto c = plateau_collapse(steps, ox, oy))
    return {Outcome::Holds, Basis::Symbolic, {{"collapse_step", *c}}, "a plateau merges the pair at step " + std::to_string(*c)};
  std::size_t at = from;
  double lo = tail_stat(space, ox, oy, from, n, true, &at);
  if (lo < cfg.eps)
    return {Outcome::Holds, Basis::Sampled, {{"tail_min", lo}, {"time", at}},
            "tail minimum " + fmt(lo) + " < eps at n = " + std::to_string(at)};
  return {Outcome::Inconclusive, Basis::Horizon, {{"tail_min", lo}}, "tail minimum " + fmt(lo) + " >= eps"};
}

PairResult li_yorke_pair(const StepSequence& steps, const std::vector<Point>& ox, const std::vector<Point>& oy,
                         const CheckConfig& cfg) {
  const auto& space = steps.space();
  const std::size_t n = cfg.horizon;
  const std::size_t from = n - cfg.tail_window;
  const double d0 = distance(space, ox[0], oy[0]);
  if (d0 == 0.0) return {Outcome::Refuted, Basis::Symbolic, {{"distance", 0.0}}, "x = y: limsup is 0"};
  if (steps.isometric_steps())
    return {Outcome::Refuted, Basis::Symbolic, {{"distance", d0}}, "isometric steps keep the pair distance constant"};
  if (auto c = plateau_collapse(steps, ox, oy))
    return {Outcome::Refuted, Basis::Symbolic, {{"collapse_step", *c}},
            "a plateau merges the pair at step " + std::to_string(*c) + ": limsup is 0"};
  std::size_t at_lo = from, at_hi = from;
  double lo = tail_stat(space, ox, oy, from, n, true, &at_lo);
  double hi = tail_stat(space, ox, oy, from, n, false, &at_hi);
  json w{{"tail_min", lo}, {"tail_max", hi}, {"min_time", at_lo}, {"max_time", at_hi}};
  if (lo < cfg.eps && hi > cfg.delta)
    return {Outcome::Holds, Basis::Sampled, w, "tail minimum " + fmt(lo) + " < eps and maximum " + fmt(hi) + " > delta"};
  return {Outcome::Inconclusive, Basis::Horizon, w, "tail window does not show both closeness and separation"};
}

// Candidate partners inside the open eps-ball around v; x itself when it lies there.
std::vector<Point> ball_candidates(const PhaseSpace& space, const Point& v, const Point& x, const CheckConfig& cfg) {
  std::vector<Point> out = ball_sample(space, v, cfg.eps, cfg.ball_count).points;
  if (distance(space, x, v) < cfg.eps && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

struct OrbitBank {
  const StepSequence& steps;
  std::vector<Point> keys;
  std::deque<std::vector<Point>> orbits;  // deque: references stay valid

  const std::vector<Point>& of(const Point& p) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (keys[i] == p) return orbits[i];
    keys.push_back(p);
    orbits.push_back(steps.orbit(p));
    return orbits.back();
  }
};

// Per-ball outcome of "the ball holds a partner of x with the predicate".
struct BallOutcome {
  Outcome outcome = Outcome::Inconclusive;
  json witness;
};

BallOutcome ball_partner(OrbitBank& bank, const Point& x, const Point& v, const CheckConfig& cfg, PairPredicate pred) {
  const auto& space = bank.steps.space();
  const auto& ox = bank.of(x);
  bool all_refuted = true;
  json last;
  for (const auto& y : ball_candidates(space, v, x, cfg)) {
    const auto& oy = bank.of(y);
    PairResult r = pred == PairPredicate::Proximal ? proximal_pair(bank.steps, ox, oy, cfg)
                                                   : li_yorke_pair(bank.steps, ox, oy, cfg);
    if (r.outcome == Outcome::Holds) return {Outcome::Holds, {{"y", point_to_json(y)}, {"evidence", r.witness}}};
    if (r.outcome != Outcome::Refuted) all_refuted = false;
    last = {{"y", point_to_json(y)}, {"evidence", r.witness}};
  }
  return {all_refuted ? Outcome::Refuted : Outcome::Inconclusive, last};
}

Verdict cell_density_impl(OrbitBank& bank, const Point& x, const CheckConfig& cfg, PairPredicate pred) {
  const auto& space = bank.steps.space();
  const char* prop = pred == PairPredicate::Proximal ? "proximal-cell" : "li-yorke-cell";
  PointCloud centers = sample_grid(space, cfg.grid);
  std::size_t inconclusive = 0;
  json first_open;
  for (const auto& v : centers.points) {
    BallOutcome b = ball_partner(bank, x, v, cfg, pred);
    if (b.outcome == Outcome::Refuted)
      return make(prop, Outcome::Refuted, Basis::Sampled,
                  {{"x", point_to_json(x)}, {"ball", point_to_json(v)}, {"radius", cfg.eps}, {"last", b.witness}},
                  "no sampled partner of " + to_string(x) + " in the ball around " + to_string(v));
    if (b.outcome == Outcome::Inconclusive && inconclusive++ == 0) first_open = point_to_json(v);
  }
  if (inconclusive == 0)
    return make(prop, Outcome::Holds, Basis::Sampled, {{"x", point_to_json(x)}, {"balls", centers.points.size()}},
                "every grid ball holds a partner of " + to_string(x));
  return make(prop, Outcome::Inconclusive, Basis::Horizon,
              {{"x", point_to_json(x)}, {"open_balls", inconclusive}, {"first_open", first_open}},
              std::to_string(inconclusive) + " grid balls without a confirmed partner");
}

// --------------------------------------------------------------- periodic

std::vector<Point> symbolic_periodic_candidates(const StepSequence& steps, const Point& center, double radius,
                                                std::size_t max_period) {
  std::vector<Point> out;
  auto a = steps.autonomous_from();
  if (!a || *a != 1) return out;
  const auto& f = steps.step(1);
  const auto& space = steps.space();
  if (auto af = affine_form(f); af && af->slope >= 2) {
    long long s = 1;
    double o = 0.0;
    const double c = std::get<CircleAngle>(center).theta;
    for (std::size_t n = 1; n <= max_period; ++n) {
      if (s > 65536 / af->slope) break;
      s *= af->slope;
      o = wrap_angle(static_cast<double>(af->slope) * o + af->offset);
      const double m = static_cast<double>(s - 1);
      // s^n t + o_n = t + 2 pi j  =>  t = (2 pi j - o_n) / (s^n - 1)
      const double jlo = std::ceil(((c - radius) * m + o) / kTwoPi);
      const double jhi = std::floor(((c + radius) * m + o) / kTwoPi);
      for (double j = jlo; j <= jhi && out.size() < 4; ++j) {
        Point p = CircleAngle{wrap_angle((kTwoPi * j - o) / m)};
        if (distance(space, p, center) < radius) out.push_back(p);
      }
      if (!out.empty()) break;
    }
  } else if (auto pl = piecewise_form(f, true)) {
    PiecewiseLinear fn = *pl;
    const double c = std::get<IntervalPoint>(center).x;
    for (std::size_t n = 1; n <= max_period && fn.breakpoints.size() <= 4096; ++n) {
      const auto& b = fn.breakpoints;
      for (std::size_t i = 0; i + 1 < b.size() && out.size() < 4; ++i) {
        auto [x0, y0] = b[i];
        auto [x1, y1] = b[i + 1];
        double g0 = y0 - x0, g1 = y1 - x1;
        if (g0 * g1 > 0.0 || g0 == g1) continue;
        double x = x0 + g0 * (x1 - x0) / (g0 - g1);
        if (std::fabs(x - c) < radius) out.push_back(IntervalPoint{std::clamp(x, 0.0, 1.0)});
      }
      if (!out.empty()) break;
      fn = pl_compose(fn, *pl);
    }
  }
  return out;
}

struct PeriodResult {
  std::optional<std::size_t> period;
  double min_gap = 0.0;
};

PeriodResult find_period(const StepSequence& steps, const Point& x, const CheckConfig& cfg, std::size_t max_period,
                         std::size_t repetitions) {
  const auto& space = steps.space();
  std::vector<Point> orbit = steps.orbit(x, max_period * repetitions);
  PeriodResult r{std::nullopt, std::numeric_limits<double>::infinity()};
  for (std::size_t n = 1; n < orbit.size(); ++n) r.min_gap = std::min(r.min_gap, distance(space, orbit[n], x));
  for (std::size_t n = 1; n <= max_period; ++n) {
    bool ok = true;
    for (std::size_t k = 1; k <= repetitions && ok; ++k) ok = distance(space, orbit[n * k], x) <= cfg.tol;
    if (ok) {
      r.period = n;
      return r;
    }
  }
  return r;
}

Verdict periodic_verdict(const Point& x, const PeriodResult& r, std::size_t max_period, std::size_t repetitions) {
  if (r.period)
    return make("periodic", Outcome::Holds, Basis::Sampled, {{"x", point_to_json(x)}, {"period", *r.period}},
                to_string(x) + " returns every " + std::to_string(*r.period) + " steps");
  return make("periodic", Outcome::Refuted, Basis::Horizon,
              {{"x", point_to_json(x)}, {"max_period", max_period}, {"repetitions", repetitions}, {"min_gap", r.min_gap}},
              "no period <= " + std::to_string(max_period) + "; closest return " + fmt(r.min_gap));
}

std::size_t periodic_horizon(const CheckConfig& cfg, std::size_t p, std::size_t r) { return std::max(cfg.horizon, p * r); }

}  // namespace

// ================================================================ checkers

Verdict check_equicontinuity(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);
  std::vector<double> ladder;
  for (int j = 0; j < 6; ++j) ladder.push_back(cfg.eps * std::pow(4.0, -j));
  std::vector<double> deltas;
  for (double d : ladder)
    if (!usable_radii(space, {d / 2.0}).empty()) deltas.push_back(d);
  if (deltas.empty())
    return make("equicontinuity", Outcome::Inconclusive, Basis::Horizon, json::object(), "no resolvable delta rung");

  for (double d : deltas) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& x : centers.points) {
      RegionTrace t = trace_region(steps, ball_region(space, x, d / 2.0), cfg.horizon);
      for (double di : trace_diameters(space, t, cfg.horizon)) worst = std::max(worst, di);
      if (worst > cfg.eps + cfg.tol) {
        ok = false;
        break;
      }
    }
    if (ok)
      return make("equicontinuity", Outcome::Holds, Basis::Sampled,
                  {{"delta", d}, {"max_separation", worst}, {"horizon", cfg.horizon}},
                  "pairs closer than " + fmt(d) + " stay within " + fmt(cfg.eps) + " through the horizon");
  }

  // Finest rung failed: look for a concrete separating pair.
  const double d = deltas.back();
  for (const auto& x : centers.points) {
    std::vector<Point> ox = steps.orbit(x);
    for (const auto& y : ball_sample(space, x, d / 2.0, cfg.ball_count).points) {
      if (y == x) continue;
      std::vector<Point> oy = steps.orbit(y);
      for (std::size_t n = 1; n <= cfg.horizon; ++n) {
        double sep = distance(space, ox[n], oy[n]);
        if (sep > cfg.eps)
          return make("equicontinuity", Outcome::Refuted, Basis::Sampled,
                      {{"x", point_to_json(x)}, {"y", point_to_json(y)}, {"initial", distance(space, x, y)},
                       {"time", n}, {"separation", sep}, {"delta", d}},
                      "pair at distance " + fmt(distance(space, x, y)) + " separates to " + fmt(sep) + " at n = " +
                          std::to_string(n));
      }
    }
  }
  return make("equicontinuity", Outcome::Inconclusive, Basis::Horizon, {{"delta", d}},
              "images of " + fmt(d) + "-balls exceed eps but no sampled pair separates");
}

namespace {

enum class SensKind { Plain, Cofinite };

Verdict sensitivity_impl(const SystemView& sys, const CheckConfig& cfg, SensKind kind) {
  cfg.validate(sys.fam.space());
  const char* prop = kind == SensKind::Plain ? "sensitivity" : "cofinite-sensitivity";
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);
  const auto radii = usable_radii(space, {cfg.eps, cfg.eps / 4.0, cfg.eps / 16.0});
  if (radii.empty()) return make(prop, Outcome::Inconclusive, Basis::Horizon, json::object(), "no resolvable radius");

  json times = json::array();
  std::size_t open = 0;
  json first_open;
  std::size_t worst = 0;
  for (const auto& x : centers.points) {
    std::size_t per_x = 0;
    for (double r : radii) {
      Region u = ball_region(space, x, r);
      const double d0 = region_diameter(space, u);
      auto refute = [&](const char* rule, json extra) {
        json w{{"x", point_to_json(x)}, {"radius", r}, {"rule", rule}};
        w.update(extra);
        return make(prop, Outcome::Refuted, Basis::Symbolic, w,
                    std::string("ball of radius ") + fmt(r) + " around " + to_string(x) + " never exceeds delta (" +
                        rule + ")");
      };
      if (steps.isometric_steps() && d0 <= cfg.delta) return refute("isometric steps", {{"diameter", d0}});

      RegionTrace t = trace_region(steps, u, cfg.horizon);
      std::vector<double> diam = trace_diameters(space, t, cfg.horizon);
      std::optional<std::size_t> first_big, last_small;
      for (std::size_t n = 1; n <= cfg.horizon; ++n) {
        if (diam[n] > cfg.delta && !first_big) first_big = n;
        if (diam[n] <= cfg.delta) last_small = n;
      }
      auto cap = diameter_cap(space, steps, t, diam);
      // A cap at or below delta means infinitely many small images.
      if (cap && cap->diam <= cfg.delta && (kind == SensKind::Cofinite || !first_big)) {
        json extra{{"from", cap->from}, {"diameter", cap->diam}};
        if (t.cyclic) extra["period"] = t.period;
        return refute(cap->rule, extra);
      }
      if (kind == SensKind::Cofinite && t.cyclic && last_small) {
        bool small_in_cycle = false;
        for (std::size_t n = t.cycle_start; n < t.cycle_start + t.period; ++n)
          small_in_cycle = small_in_cycle || (n >= 1 && diam[n] <= cfg.delta);
        if (small_in_cycle) return refute("eventually periodic image", {{"period", t.period}});
      }
      std::size_t k = 0;
      bool ok = false;
      if (kind == SensKind::Plain) {
        ok = first_big.has_value();
        k = first_big.value_or(0);
      } else {
        k = last_small ? *last_small + 1 : 1;
        ok = k <= cfg.horizon / 2;
      }
      if (!ok && open++ == 0) first_open = {{"x", point_to_json(x)}, {"radius", r}};
      per_x = std::max(per_x, k);
    }
    times.push_back(per_x);
    worst = std::max(worst, per_x);
  }
  if (open == 0) {
    const char* what = kind == SensKind::Plain ? "separation times" : "cofinite thresholds K";
    return make(prop, Outcome::Holds, Basis::Sampled, {{"times", times}, {"max_time", worst}, {"radii", radii}},
                std::string("every sampled ball exceeds delta; ") + what + " up to " + std::to_string(worst));
  }
  return make(prop, Outcome::Inconclusive, Basis::Horizon, {{"open", open}, {"first_open", first_open}},
              std::to_string(open) + " balls without the required separation at horizon " +
                  std::to_string(cfg.horizon));
}

// Ordered (U, V) pairs over the grid: U = eps-ball, V = centre within eps.
struct HitTable {
  std::size_t m = 0;
  std::vector<RegionTrace> traces;
  std::vector<std::vector<double>> diams;
  std::vector<Bits> hits;  // hits[u * m + v]
};

HitTable build_hits(const StepSequence& steps, const PointCloud& centers, const CheckConfig& cfg) {
  const auto& space = steps.space();
  HitTable h;
  h.m = centers.points.size();
  for (const auto& x : centers.points) {
    h.traces.push_back(trace_region(steps, ball_region(space, x, cfg.eps), cfg.horizon));
    h.diams.push_back(trace_diameters(space, h.traces.back(), cfg.horizon));
  }
  for (std::size_t u = 0; u < h.m; ++u)
    for (std::size_t v = 0; v < h.m; ++v)
      h.hits.push_back(hit_bits(space, h.traces[u], centers.points[v], cfg.eps, cfg.horizon));
  return h;
}

}  // namespace

Verdict check_sensitivity(const SystemView& sys, const CheckConfig& cfg) {
  return sensitivity_impl(sys, cfg, SensKind::Plain);
}

Verdict check_cofinite_sensitivity(const SystemView& sys, const CheckConfig& cfg) {
  return sensitivity_impl(sys, cfg, SensKind::Cofinite);
}

Verdict check_transitivity(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);
  HitTable h = build_hits(steps, centers, cfg);
  auto conf = rotation_confinement(steps, cfg.horizon);

  json per_u = json::array();
  std::size_t worst = 0, missed = 0;
  json misses = json::array();
  for (std::size_t u = 0; u < h.m; ++u) {
    std::size_t u_worst = 0;
    for (std::size_t v = 0; v < h.m; ++v) {
      auto fh = first_hit(h.hits[u * h.m + v], cfg.horizon);
      if (fh) {
        u_worst = std::max(u_worst, *fh);
        continue;
      }
      json pair{{"u", point_to_json(centers.points[u])}, {"v", point_to_json(centers.points[v])}};
      if (h.traces[u].cyclic) {
        pair["period"] = h.traces[u].period;
        return make("transitivity", Outcome::Refuted, Basis::Symbolic, pair,
                    "image of U cycles without meeting V");
      }
      if (conf) {
        ArcSet reach = confined_arc(centers.points[u], *conf, cfg.eps);
        if (region_distance(space, Region{reach}, centers.points[v]) >= cfg.eps) {
          pair["reach"] = arc_json(reach);
          return make("transitivity", Outcome::Refuted,
                      conf->exact ? Basis::Symbolic : Basis::Sampled, pair,
                      "rotation steps confine U to an arc that stays eps away from V");
        }
      }
      if (missed++ < 10) misses.push_back(pair);
    }
    per_u.push_back(u_worst);
    worst = std::max(worst, u_worst);
  }
  if (missed == 0)
    return make("transitivity", Outcome::Holds, Basis::Sampled, {{"max_first_hit", worst}, {"first_hits", per_u}},
                "every ordered pair of grid balls meets by n = " + std::to_string(worst));
  return make("transitivity", Outcome::Inconclusive, Basis::Horizon, {{"missed", missed}, {"first_missed", misses}},
              std::to_string(missed) + " ordered pairs never meet within the horizon");
}

Verdict check_weak_mixing(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);

  // Structural refutation: one U can never be near two far-apart centres.
  for (std::size_t u = 0; u < centers.points.size(); ++u) {
    Region u0 = ball_region(space, centers.points[u], cfg.eps);
    RegionTrace t = trace_region(steps, u0, cfg.horizon);
    auto diam = trace_diameters(space, t, cfg.horizon);
    auto cap = diameter_cap(space, steps, t, diam);
    if (!cap) continue;
    auto far = separated_targets(space, centers, cap->diam, cfg.eps);
    if (!far) continue;
    bool early = false;  // simultaneous hit before the cap applies
    for (std::size_t n = 1; n <= cap->from && n <= cfg.horizon && !early; ++n)
      early = region_distance(space, t.at(n), centers.points[far->first]) < cfg.eps &&
              region_distance(space, t.at(n), centers.points[far->second]) < cfg.eps;
    if (early) continue;
    return make("weak-mixing", Outcome::Refuted, Basis::Symbolic,
                {{"u", point_to_json(centers.points[u])},
                 {"v1", point_to_json(centers.points[far->first])},
                 {"v2", point_to_json(centers.points[far->second])},
                 {"rule", cap->rule},
                 {"diameter", cap->diam}},
                std::string("images of U (") + cap->rule + ") cannot meet both V1 and V2 at one time");
  }

  HitTable h = build_hits(steps, centers, cfg);
  const std::size_t pairs = h.hits.size();
  const std::size_t words = h.hits.empty() ? 0 : h.hits[0].size();
  std::size_t missed = 0;
  json first_miss;
  for (std::size_t i = 0; i < pairs; ++i) {
    for (std::size_t j = i; j < pairs; ++j) {
      bool meet = false;
      for (std::size_t w = 0; w < words && !meet; ++w) meet = (h.hits[i][w] & h.hits[j][w]) != 0;
      if (meet) continue;
      if (missed++ == 0)
        first_miss = {{"u1", point_to_json(centers.points[i / h.m])}, {"v1", point_to_json(centers.points[i % h.m])},
                      {"u2", point_to_json(centers.points[j / h.m])}, {"v2", point_to_json(centers.points[j % h.m])}};
    }
  }
  if (missed == 0)
    return make("weak-mixing", Outcome::Holds, Basis::Sampled, {{"pairs", pairs}},
                "every two ordered pairs of grid balls meet at a common time");
  return make("weak-mixing", Outcome::Inconclusive, Basis::Horizon, {{"missed", missed}, {"first_missed", first_miss}},
              std::to_string(missed) + " pairs of pairs without a common hit time");
}

Verdict check_topological_mixing(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);

  for (std::size_t u = 0; u < centers.points.size(); ++u) {
    RegionTrace t = trace_region(steps, ball_region(space, centers.points[u], cfg.eps), cfg.horizon);
    auto cap = diameter_cap(space, steps, t, trace_diameters(space, t, cfg.horizon));
    if (!cap) continue;
    auto far = separated_targets(space, centers, cap->diam, cfg.eps);
    if (!far) continue;
    return make("topological-mixing", Outcome::Refuted, Basis::Symbolic,
                {{"u", point_to_json(centers.points[u])},
                 {"v1", point_to_json(centers.points[far->first])},
                 {"v2", point_to_json(centers.points[far->second])},
                 {"rule", cap->rule},
                 {"diameter", cap->diam}},
                std::string("images of U (") + cap->rule + ") miss V1 or V2 at every later time");
  }

  HitTable h = build_hits(steps, centers, cfg);
  std::size_t k = 1;
  for (std::size_t u = 0; u < h.m; ++u) {
    for (std::size_t v = 0; v < h.m; ++v) {
      const Bits& b = h.hits[u * h.m + v];
      if (cycle_misses(h.traces[u], b, cfg.horizon))
        return make("topological-mixing", Outcome::Refuted, Basis::Symbolic,
                    {{"u", point_to_json(centers.points[u])}, {"v", point_to_json(centers.points[v])},
                     {"period", h.traces[u].period}},
                    "image of U cycles and misses V once per period");
      for (std::size_t n = cfg.horizon; n >= 1; --n)
        if (!bit(b, n)) {
          k = std::max(k, n + 1);
          break;
        }
    }
  }
  double worst_gap = 0.0;
  if (k <= cfg.horizon / 2) {
    for (std::size_t u = 0; u < h.m; ++u)
      for (std::size_t n = k; n <= cfg.horizon; ++n)
        worst_gap = std::max(worst_gap, region_gap_to_space(space, h.traces[u].at(n)));
    if (worst_gap < cfg.eps)
      return make("topological-mixing", Outcome::Holds, Basis::Sampled, {{"K", k}, {"max_hausdorff_gap", worst_gap}},
                  "all grid pairs meet at every n in [" + std::to_string(k) + ", " + std::to_string(cfg.horizon) +
                      "] and images are eps-dense");
  }
  return make("topological-mixing", Outcome::Inconclusive, Basis::Horizon, {{"K", k}, {"max_hausdorff_gap", worst_gap}},
              "no persistence threshold K <= N/2 with eps-dense images");
}

Verdict check_minimality(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  PointCloud starts = sample_grid(space, cfg.grid);
  PointCloud targets = cover_grid(space, cfg.eps);
  auto conf = rotation_confinement(steps, cfg.horizon);
  const auto a = steps.autonomous_from();

  std::size_t worst = 0, open = 0;
  json first_open;
  for (const auto& x : starts.points) {
    std::vector<char> seen(targets.points.size(), 0);
    std::size_t remaining = targets.points.size(), last_new = 0;
    std::vector<Point> recent;
    Point p = x;
    std::optional<std::size_t> cycle_at;
    for (std::size_t n = 0; n <= cfg.horizon && remaining > 0; ++n) {
      if (n > 0) p = steps.advance(p, n);
      for (std::size_t i = 0; i < targets.points.size(); ++i)
        if (!seen[i] && distance(space, p, targets.points[i]) < cfg.eps) {
          seen[i] = 1;
          --remaining;
          last_new = n;
        }
      if (a && n + 1 >= *a) {
        if (std::find(recent.begin(), recent.end(), p) != recent.end()) {
          cycle_at = n;
          break;
        }
        recent.push_back(p);
        if (recent.size() > kCycleMemory) recent.erase(recent.begin());
      }
    }
    if (remaining == 0) {
      worst = std::max(worst, last_new);
      continue;
    }
    std::size_t miss = std::find(seen.begin(), seen.end(), 0) - seen.begin();
    json w{{"start", point_to_json(x)}, {"target", point_to_json(targets.points[miss])}, {"radius", cfg.eps}};
    if (cycle_at) {
      w["repeat_at"] = *cycle_at;
      return make("minimality", Outcome::Refuted, Basis::Symbolic, w,
                  "orbit of " + to_string(x) + " repeats exactly and never comes within eps of " +
                      to_string(targets.points[miss]));
    }
    if (conf) {
      ArcSet reach = confined_arc(x, *conf, 0.0);
      for (const auto& tgt : targets.points)
        if (region_distance(space, Region{reach}, tgt) >= cfg.eps) {
          w["target"] = point_to_json(tgt);
          w["reach"] = arc_json(reach);
          return make("minimality", Outcome::Refuted, conf->exact ? Basis::Symbolic : Basis::Sampled, w,
                      "total rotation is bounded: the orbit stays in an arc of length " +
                          fmt(conf->hi - conf->lo));
        }
    }
    if (open++ == 0) first_open = w;
  }
  if (open == 0)
    return make("minimality", Outcome::Holds, Basis::Sampled,
                {{"max_cover_time", worst}, {"targets", targets.points.size()}, {"starts", starts.points.size()}},
                "every grid orbit is eps-dense by n = " + std::to_string(worst));
  return make("minimality", Outcome::Inconclusive, Basis::Horizon, {{"open_starts", open}, {"first_open", first_open}},
              std::to_string(open) + " starts without an eps-dense orbit at the horizon");
}

Verdict check_periodic(const SystemView& sys, const Point& x, const CheckConfig& cfg, std::size_t max_period,
                       std::size_t repetitions) {
  if (max_period < 1 || repetitions < 1) throw DomainError("period search needs P, R >= 1");
  sys.fam.space().require(x);
  StepSequence steps = make_steps(sys, periodic_horizon(cfg, max_period, repetitions));
  return periodic_verdict(x, find_period(steps, x, cfg, max_period, repetitions), max_period, repetitions);
}

Verdict check_periodic_points(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  const std::size_t P = cfg.max_period, R = cfg.repetitions;
  StepSequence steps = make_steps(sys, periodic_horizon(cfg, P, R));
  const auto& space = steps.space();
  double closest = std::numeric_limits<double>::infinity();
  std::size_t tried = 0;
  for (const auto& c : sample_grid(space, cfg.grid).points) {
    std::vector<Point> cands{c};
    for (const auto& s : symbolic_periodic_candidates(steps, c, cfg.eps, P)) cands.push_back(s);
    for (const auto& x : cands) {
      ++tried;
      PeriodResult r = find_period(steps, x, cfg, P, R);
      if (r.period) {
        Verdict v = periodic_verdict(x, r, P, R);
        v.property = "periodic-points";
        return v;
      }
      closest = std::min(closest, r.min_gap);
    }
  }
  return make("periodic-points", Outcome::Refuted, Basis::Horizon,
              {{"candidates", tried}, {"max_period", P}, {"repetitions", R}, {"min_gap", closest}},
              "no candidate returns within tol for any period <= " + std::to_string(P));
}

Verdict check_dense_periodicity(const SystemView& sys, const CheckConfig& cfg, std::size_t max_period,
                                std::size_t repetitions) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, periodic_horizon(cfg, max_period, repetitions));
  const auto& space = steps.space();
  PointCloud centers = sample_grid(space, cfg.grid);
  std::size_t worst_period = 0;
  for (const auto& c : centers.points) {
    std::vector<Point> cands = ball_sample(space, c, cfg.eps, cfg.ball_count).points;
    for (const auto& s : symbolic_periodic_candidates(steps, c, cfg.eps, max_period)) cands.push_back(s);
    std::optional<std::size_t> found;
    double closest = std::numeric_limits<double>::infinity();
    for (const auto& x : cands) {
      PeriodResult r = find_period(steps, x, cfg, max_period, repetitions);
      if (r.period) {
        found = r.period;
        break;
      }
      closest = std::min(closest, r.min_gap);
    }
    if (!found)
      return make("dense-periodicity", Outcome::Refuted, Basis::Horizon,
                  {{"ball", point_to_json(c)}, {"radius", cfg.eps}, {"candidates", cands.size()}, {"min_gap", closest},
                   {"max_period", max_period}},
                  "no periodic candidate in the ball around " + to_string(c));
    worst_period = std::max(worst_period, *found);
  }
  return make("dense-periodicity", Outcome::Holds, Basis::Sampled,
              {{"balls", centers.points.size()}, {"max_period_found", worst_period}},
              "every grid ball holds a periodic point");
}

Verdict proximal_check(const SystemView& sys, const Point& x, const Point& y, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  PairResult r = proximal_pair(steps, steps.orbit(x), steps.orbit(y), cfg);
  r.witness["x"] = point_to_json(x);
  r.witness["y"] = point_to_json(y);
  return make("proximal", r.outcome, r.basis, r.witness, r.narrative);
}

Verdict li_yorke_check(const SystemView& sys, const Point& x, const Point& y, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  PairResult r = li_yorke_pair(steps, steps.orbit(x), steps.orbit(y), cfg);
  r.witness["x"] = point_to_json(x);
  r.witness["y"] = point_to_json(y);
  return make("li-yorke", r.outcome, r.basis, r.witness, r.narrative);
}

Verdict cell_density(const SystemView& sys, const Point& x, const CheckConfig& cfg, PairPredicate pred) {
  cfg.validate(sys.fam.space());
  sys.fam.space().require(x);
  StepSequence steps = make_steps(sys, cfg.horizon);
  OrbitBank bank{steps, {}, {}};
  return cell_density_impl(bank, x, cfg, pred);
}

namespace {

Verdict all_cells(const SystemView& sys, const CheckConfig& cfg, PairPredicate pred, const char* prop) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  OrbitBank bank{steps, {}, {}};
  std::size_t open = 0;
  json first_open;
  for (const auto& x : sample_grid(steps.space(), cfg.grid).points) {
    Verdict v = cell_density_impl(bank, x, cfg, pred);
    if (v.refuted()) {
      v.property = prop;
      return v;
    }
    if (!v.holds() && open++ == 0) first_open = v.witness;
  }
  if (open == 0)
    return make(prop, Outcome::Holds, Basis::Sampled, {{"cells", cfg.grid}}, "the cell of every grid point is dense");
  return make(prop, Outcome::Inconclusive, Basis::Horizon, {{"open_cells", open}, {"first_open", first_open}},
              std::to_string(open) + " grid cells not confirmed dense");
}

}  // namespace

Verdict check_proximal_cells(const SystemView& sys, const CheckConfig& cfg) {
  return all_cells(sys, cfg, PairPredicate::Proximal, "proximal-cells");
}

Verdict check_proximal_pairs(const SystemView& sys, const CheckConfig& cfg) {
  cfg.validate(sys.fam.space());
  StepSequence steps = make_steps(sys, cfg.horizon);
  const auto& space = steps.space();
  OrbitBank bank{steps, {}, {}};
  PointCloud centers = sample_grid(space, cfg.grid);
  std::size_t open = 0;
  json first_open;
  for (const auto& u : centers.points) {
    std::vector<Point> xs = ball_sample(space, u, cfg.eps, cfg.ball_count).points;
    for (const auto& v : centers.points) {
      Outcome best = Outcome::Refuted;
      json last;
      for (const auto& x : xs) {
        BallOutcome b = ball_partner(bank, x, v, cfg, PairPredicate::Proximal);
        last = b.witness;
        if (b.outcome == Outcome::Holds) {
          best = Outcome::Holds;
          break;
        }
        if (b.outcome == Outcome::Inconclusive) best = Outcome::Inconclusive;
      }
      if (best == Outcome::Refuted)
        return make("proximal-pairs", Outcome::Refuted, Basis::Sampled,
                    {{"u", point_to_json(u)}, {"v", point_to_json(v)}, {"radius", cfg.eps}, {"last", last}},
                    "no sampled proximal pair in U x V");
      if (best == Outcome::Inconclusive && open++ == 0) first_open = {{"u", point_to_json(u)}, {"v", point_to_json(v)}};
    }
  }
  if (open == 0)
    return make("proximal-pairs", Outcome::Holds, Basis::Sampled, {{"pairs", centers.points.size() * centers.points.size()}},
                "every pair of grid balls holds a proximal pair");
  return make("proximal-pairs", Outcome::Inconclusive, Basis::Horizon, {{"open_pairs", open}, {"first_open", first_open}},
              std::to_string(open) + " ball pairs without a confirmed proximal pair");
}

Verdict check_li_yorke_sensitivity(const SystemView& sys, const CheckConfig& cfg) {
  return all_cells(sys, cfg, PairPredicate::LiYorke, "li-yorke-sensitivity");
}

Verdict run_property(const SystemView& sys, const std::string& property, const CheckConfig& cfg) {
  Verdict v;
  if (property == "equicontinuity") v = check_equicontinuity(sys, cfg);
  else if (property == "minimality") v = check_minimality(sys, cfg);
  else if (property == "transitivity") v = check_transitivity(sys, cfg);
  else if (property == "weak-mixing") v = check_weak_mixing(sys, cfg);
  else if (property == "topological-mixing") v = check_topological_mixing(sys, cfg);
  else if (property == "sensitivity") v = check_sensitivity(sys, cfg);
  else if (property == "cofinite-sensitivity") v = check_cofinite_sensitivity(sys, cfg);
  else if (property == "periodic-points") v = check_periodic_points(sys, cfg);
  else if (property == "dense-periodicity") v = check_dense_periodicity(sys, cfg, cfg.max_period, cfg.repetitions);
  else if (property == "proximal-cells") v = check_proximal_cells(sys, cfg);
  else if (property == "proximal-pairs") v = check_proximal_pairs(sys, cfg);
  else if (property == "li-yorke-sensitivity") v = check_li_yorke_sensitivity(sys, cfg);
  else throw ConfigError("unknown property '" + property + "'");
  v.property = property;
  v.mode = to_string(sys.mode);
  return v;
}

}  // namespace ucdyn
