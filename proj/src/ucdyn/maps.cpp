#include "ucdyn/maps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ucdyn/error.hpp"

namespace ucdyn {

namespace {

constexpr double kBreakTol = 1e-15;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_pl(const PiecewiseLinear& pl) {
  const auto& b = pl.breakpoints;
  if (b.size() < 2) throw DomainError("piecewise-linear map needs at least two breakpoints");
  if (b.front().first != 0.0 || b.back().first != 1.0)
    throw DomainError("piecewise-linear breakpoints must span [0,1]");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i].second >= 0.0 && b[i].second <= 1.0))
      throw DomainError("piecewise-linear values must lie in [0,1]");
    if (i > 0 && !(b[i].first > b[i - 1].first))
      throw DomainError("piecewise-linear breakpoints must be strictly increasing");
  }
}

std::uint64_t mask(unsigned n) { return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

BinaryWord odometer_step(BinaryWord w) {
  w.bits = (w.bits + 1) & mask(w.length);
  return w;
}

BinaryWord delete_step(BinaryWord w, unsigned index) {
  if (index > w.length) return w;
  if (w.length == 1) throw ResolutionError("deletion would empty a binary word");
  if (index <= w.effective && w.effective == 1)
    throw ResolutionError("deletion exhausts the trusted coordinates of " + to_string(Point{w}));
  std::uint64_t low = w.bits & mask(index - 1);
  std::uint64_t high = index >= 64 ? 0 : (w.bits >> index) << (index - 1);
  w.bits = (low | high) & mask(w.length - 1);
  w.length -= 1;
  if (index <= w.effective) w.effective -= 1;
  return w;
}

double signed_gap(double from, double to) {
  double d = std::fmod(to - from, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d < -kPi) d += kTwoPi;
  return d;
}

double lookup_eval(const Lookup& t, double x) {
  const std::size_t m = t.values.size();
  if (t.space == SpaceKind::UnitInterval) {
    double pos = x * static_cast<double>(m - 1);
    if (t.interpolation == Interpolation::Nearest)
      return t.values[static_cast<std::size_t>(std::lround(pos))];
    auto i = std::min(static_cast<std::size_t>(pos), m - 2);
    double frac = pos - static_cast<double>(i);
    return std::clamp(t.values[i] + (t.values[i + 1] - t.values[i]) * frac, 0.0, 1.0);
  }
  double pos = x / kTwoPi * static_cast<double>(m);
  if (t.interpolation == Interpolation::Nearest)
    return t.values[static_cast<std::size_t>(std::lround(pos)) % m];
  auto i = static_cast<std::size_t>(pos) % m;
  double frac = pos - std::floor(pos);
  double a = t.values[i];
  double b = t.values[(i + 1) % m];
  return wrap_angle(a + signed_gap(a, b) * frac);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

MapDescriptor rotation(double amount) { return {Rotation{amount}}; }

MapDescriptor affine(int slope, double offset) {
  if (slope < 1) throw DomainError("affine circle map needs slope >= 1");
  return {AffineCircle{slope, offset}};
}

MapDescriptor piecewise_linear(std::vector<std::pair<double, double>> breakpoints) {
  PiecewiseLinear pl{std::move(breakpoints)};
  validate_pl(pl);
  return {std::move(pl)};
}

MapDescriptor tent() { return piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}); }

MapDescriptor identity_on(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Circle: return rotation(0.0);
    case SpaceKind::UnitInterval: return piecewise_linear({{0.0, 0.0}, {1.0, 1.0}});
    case SpaceKind::BinarySeq: break;
  }
  // Deleting a coordinate beyond any representable word is the identity.
  return deletion(kMaxWordLength + 1);
}

MapDescriptor odometer() { return {OdometerAdd{}}; }

MapDescriptor deletion(unsigned index) {
  if (index < 1) throw DomainError("delete index must be positive");
  return {Delete{index}};
}

MapDescriptor compose(MapDescriptor outer, MapDescriptor inner) {
  if (domain_of(outer) != domain_of(inner)) throw TypeError("composed maps act on different spaces");
  return {Compose{std::make_shared<const MapDescriptor>(std::move(outer)),
                  std::make_shared<const MapDescriptor>(std::move(inner))}};
}

MapDescriptor lookup(SpaceKind space, std::vector<double> values, Interpolation interpolation) {
  if (space == SpaceKind::BinarySeq) throw DomainError("lookup maps are defined on the circle and interval only");
  if (values.size() < 2) throw DomainError("lookup table needs at least two values");
  for (double& v : values) {
    if (space == SpaceKind::Circle) {
      v = wrap_angle(v);
    } else if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("interval lookup values must lie in [0,1]");
    }
  }
  return {Lookup{space, std::move(values), interpolation}};
}

SpaceKind domain_of(const MapDescriptor& m) {
  return std::visit(overloaded{
                        [](const Rotation&) { return SpaceKind::Circle; },
                        [](const AffineCircle&) { return SpaceKind::Circle; },
                        [](const PiecewiseLinear&) { return SpaceKind::UnitInterval; },
                        [](const OdometerAdd&) { return SpaceKind::BinarySeq; },
                        [](const Delete&) { return SpaceKind::BinarySeq; },
                        [](const Compose& c) { return domain_of(*c.inner); },
                        [](const Lookup& t) { return t.space; },
                    },
                    m.v);
}

double pl_eval(const PiecewiseLinear& pl, double x) {
  const auto& b = pl.breakpoints;
  auto it = std::upper_bound(b.begin(), b.end(), x, [](double v, const auto& p) { return v < p.first; });
  if (it == b.begin()) return b.front().second;
  if (it == b.end()) return b.back().second;
  const auto& lo = *(it - 1);
  if (lo.first == x) return lo.second;
  const auto& hi = *it;
  double y = lo.second + (hi.second - lo.second) * (x - lo.first) / (hi.first - lo.first);
  return std::clamp(y, 0.0, 1.0);
}

PiecewiseLinear pl_compose(const PiecewiseLinear& outer, const PiecewiseLinear& inner) {
  std::vector<double> xs;
  const auto& ib = inner.breakpoints;
  for (const auto& p : ib) xs.push_back(p.first);
  // Preimages of the outer breakpoints under each linear piece of inner.
  for (std::size_t i = 0; i + 1 < ib.size(); ++i) {
    auto [x0, y0] = ib[i];
    auto [x1, y1] = ib[i + 1];
    if (y0 == y1) continue;
    for (const auto& ob : outer.breakpoints) {
      double t = (ob.first - y0) / (y1 - y0);
      if (t > 0.0 && t < 1.0) xs.push_back(x0 + t * (x1 - x0));
    }
  }
  std::sort(xs.begin(), xs.end());
  PiecewiseLinear out;
  for (double x : xs) {
    if (!out.breakpoints.empty() && x - out.breakpoints.back().first <= kBreakTol) continue;
    out.breakpoints.emplace_back(x, pl_eval(outer, pl_eval(inner, x)));
  }
  out.breakpoints.back().first = 1.0;
  return out;
}

Point apply(const MapDescriptor& m, const Point& x) {
  return std::visit(
      overloaded{
          [&](const Rotation& r) -> Point {
            if (kind_of(x) != SpaceKind::Circle) throw TypeError("rotation applied to a non-circle point");
            return CircleAngle{wrap_angle(std::get<CircleAngle>(x).theta + r.amount)};
          },
          [&](const AffineCircle& a) -> Point {
            if (kind_of(x) != SpaceKind::Circle) throw TypeError("affine circle map applied to a non-circle point");
            return CircleAngle{wrap_angle(a.slope * std::get<CircleAngle>(x).theta + a.offset)};
          },
          [&](const PiecewiseLinear& pl) -> Point {
            if (kind_of(x) != SpaceKind::UnitInterval) throw TypeError("interval map applied to a non-interval point");
            return IntervalPoint{pl_eval(pl, std::get<IntervalPoint>(x).x)};
          },
          [&](const OdometerAdd&) -> Point {
            if (kind_of(x) != SpaceKind::BinarySeq) throw TypeError("odometer applied to a non-binary point");
            return odometer_step(std::get<BinaryWord>(x));
          },
          [&](const Delete& d) -> Point {
            if (kind_of(x) != SpaceKind::BinarySeq) throw TypeError("delete applied to a non-binary point");
            return delete_step(std::get<BinaryWord>(x), d.index);
          },
          [&](const Compose& c) -> Point { return ucdyn::apply(*c.outer, ucdyn::apply(*c.inner, x)); },
          [&](const Lookup& t) -> Point {
            if (kind_of(x) != t.space) throw TypeError("lookup map applied to a point of another space");
            if (t.space == SpaceKind::Circle) return CircleAngle{lookup_eval(t, std::get<CircleAngle>(x).theta)};
            return IntervalPoint{lookup_eval(t, std::get<IntervalPoint>(x).x)};
          },
      },
      m.v);
}

std::string describe(const MapDescriptor& m) {
  return std::visit(overloaded{
                        [](const Rotation& r) { return "rotation(" + fmt(r.amount) + ")"; },
                        [](const AffineCircle& a) {
                          return "affine(" + std::to_string(a.slope) + ", " + fmt(a.offset) + ")";
                        },
                        [](const PiecewiseLinear& pl) {
                          std::string s = "pl[";
                          for (std::size_t i = 0; i < pl.breakpoints.size(); ++i) {
                            if (i) s += ' ';
                            s += "(" + fmt(pl.breakpoints[i].first) + "," + fmt(pl.breakpoints[i].second) + ")";
                          }
                          return s + "]";
                        },
                        [](const OdometerAdd&) { return std::string("odometer"); },
                        [](const Delete& d) { return "delete(" + std::to_string(d.index) + ")"; },
                        [](const Compose& c) { return describe(*c.outer) + " o " + describe(*c.inner); },
                        [](const Lookup& t) { return "lookup[" + std::to_string(t.values.size()) + "]"; },
                    },
                    m.v);
}

std::optional<AffineForm> affine_form(const MapDescriptor& m) {
  if (const auto* r = std::get_if<Rotation>(&m.v)) return AffineForm{1, wrap_angle(r->amount)};
  if (const auto* a = std::get_if<AffineCircle>(&m.v)) return AffineForm{a->slope, wrap_angle(a->offset)};
  if (const auto* c = std::get_if<Compose>(&m.v)) {
    auto o = affine_form(*c->outer);
    auto i = affine_form(*c->inner);
    if (!o || !i) return std::nullopt;
    if (o->slope > (1LL << 40) / i->slope) return std::nullopt;
    return AffineForm{o->slope * i->slope, wrap_angle(static_cast<double>(o->slope) * i->offset + o->offset)};
  }
  return std::nullopt;
}

std::optional<PiecewiseLinear> piecewise_form(const MapDescriptor& m, bool lookup_as_pl) {
  if (const auto* pl = std::get_if<PiecewiseLinear>(&m.v)) return *pl;
  if (const auto* t = std::get_if<Lookup>(&m.v)) {
    if (!lookup_as_pl || t->space != SpaceKind::UnitInterval || t->interpolation != Interpolation::Linear)
      return std::nullopt;
    PiecewiseLinear pl;
    const auto n = t->values.size();
    for (std::size_t i = 0; i < n; ++i)
      pl.breakpoints.emplace_back(static_cast<double>(i) / static_cast<double>(n - 1), t->values[i]);
    return pl;
  }
  if (const auto* c = std::get_if<Compose>(&m.v)) {
    auto o = piecewise_form(*c->outer, lookup_as_pl);
    auto i = piecewise_form(*c->inner, lookup_as_pl);
    if (!o || !i) return std::nullopt;
    return pl_compose(*o, *i);
  }
  return std::nullopt;
}

std::optional<std::vector<BinaryOp>> binary_ops(const MapDescriptor& m) {
  if (std::holds_alternative<OdometerAdd>(m.v)) return std::vector<BinaryOp>{{true, 0}};
  if (const auto* d = std::get_if<Delete>(&m.v)) return std::vector<BinaryOp>{{false, d->index}};
  if (const auto* c = std::get_if<Compose>(&m.v)) {
    auto i = binary_ops(*c->inner);
    auto o = binary_ops(*c->outer);
    if (!i || !o) return std::nullopt;
    i->insert(i->end(), o->begin(), o->end());
    return i;
  }
  return std::nullopt;
}

std::optional<MetricClass> symbolic_metric_class(const MapDescriptor& m) {
  if (auto a = affine_form(m)) {
    bool iso = a->slope == 1;
    return MetricClass{iso, iso};
  }
  if (auto pl = piecewise_form(m)) {
    const auto& b = pl->breakpoints;
    double steepest = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      steepest = std::max(steepest, std::fabs((b[i + 1].second - b[i].second) / (b[i + 1].first - b[i].first)));
    bool monotone_unit = b.size() == 2 && std::fabs(std::fabs(b[1].second - b[0].second) - 1.0) <= 1e-12;
    return MetricClass{monotone_unit, steepest <= 1.0 + 1e-12};
  }
  if (std::holds_alternative<OdometerAdd>(m.v)) return MetricClass{true, true};
  if (const auto* d = std::get_if<Delete>(&m.v)) {
    // Only the out-of-range deletion (identity) preserves distances.
    bool id = d->index > kMaxWordLength;
    return MetricClass{id, id};
  }
  if (const auto* c = std::get_if<Compose>(&m.v)) {
    auto o = symbolic_metric_class(*c->outer);
    auto i = symbolic_metric_class(*c->inner);
    if (o && i && o->isometry && i->isometry) return MetricClass{true, true};
    if (o && i && o->shrinking && i->shrinking) return MetricClass{false, true};
    // Mixed compositions can still be isometries or shrinking; leave to sampling.
    if (o && i && o->isometry && !i->shrinking) return MetricClass{false, false};
  }
  return std::nullopt;
}

std::optional<bool> symbolic_bijective(const MapDescriptor& m) {
  if (auto a = affine_form(m)) return a->slope == 1;
  if (auto pl = piecewise_form(m)) {
    const auto& b = pl->breakpoints;
    bool inc = true, dec = true;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      inc = inc && b[i + 1].second > b[i].second;
      dec = dec && b[i + 1].second < b[i].second;
    }
    bool onto = std::min(b.front().second, b.back().second) == 0.0 && std::max(b.front().second, b.back().second) == 1.0;
    return (inc || dec) && onto;
  }
  if (std::holds_alternative<OdometerAdd>(m.v)) return true;
  if (const auto* d = std::get_if<Delete>(&m.v)) return d->index > kMaxWordLength;
  if (const auto* c = std::get_if<Compose>(&m.v)) {
    auto o = symbolic_bijective(*c->outer);
    auto i = symbolic_bijective(*c->inner);
    if (o && i && *o && *i) return true;
  }
  return std::nullopt;
}

nlohmann::json map_to_json(const MapDescriptor& m) {
  using nlohmann::json;
  return std::visit(overloaded{
                        [](const Rotation& r) { return json{{"type", "rotation"}, {"amount", r.amount}}; },
                        [](const AffineCircle& a) {
                          return json{{"type", "affine"}, {"slope", a.slope}, {"offset", a.offset}};
                        },
                        [](const PiecewiseLinear& pl) {
                          json pts = json::array();
                          for (const auto& [x, y] : pl.breakpoints) pts.push_back({x, y});
                          return json{{"type", "piecewise_linear"}, {"breakpoints", pts}};
                        },
                        [](const OdometerAdd&) { return json{{"type", "odometer"}}; },
                        [](const Delete& d) { return json{{"type", "delete"}, {"index", d.index}}; },
                        [](const Compose& c) {
                          return json{{"type", "compose"}, {"outer", map_to_json(*c.outer)}, {"inner", map_to_json(*c.inner)}};
                        },
                        [](const Lookup& t) {
                          return json{{"type", "lookup"},
                                      {"values", t.values},
                                      {"interpolation", t.interpolation == Interpolation::Linear ? "linear" : "nearest"}};
                        },
                    },
                    m.v);
}

MapDescriptor map_from_json(const nlohmann::json& j, SpaceKind space) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("map descriptor needs a 'type' field");
  const auto type = j.at("type").get<std::string>();
  MapDescriptor m;
  try {
    if (type == "rotation") {
      m = rotation(j.at("amount").get<double>());
    } else if (type == "affine") {
      m = affine(j.value("slope", 1), j.value("offset", 0.0));
    } else if (type == "piecewise_linear") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : j.at("breakpoints")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      m = piecewise_linear(std::move(pts));
    } else if (type == "tent") {
      m = tent();
    } else if (type == "identity") {
      m = identity_on(space);
    } else if (type == "odometer") {
      m = odometer();
    } else if (type == "delete") {
      m = deletion(j.at("index").get<unsigned>());
    } else if (type == "compose") {
      m = compose(map_from_json(j.at("outer"), space), map_from_json(j.at("inner"), space));
    } else if (type == "lookup") {
      auto interp = j.value("interpolation", std::string("linear"));
      if (interp != "linear" && interp != "nearest") throw ConfigError("unknown interpolation '" + interp + "'");
      m = lookup(space, j.at("values").get<std::vector<double>>(),
                 interp == "linear" ? Interpolation::Linear : Interpolation::Nearest);
    } else {
      throw ConfigError("unknown map type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed '" + type + "' map: " + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const TypeError& e) {
    throw ConfigError(e.what());
  }
  if (domain_of(m) != space)
    throw ConfigError("map '" + type + "' does not act on the " + to_string(space) + " space");
  return m;
}

}  // namespace ucdyn
