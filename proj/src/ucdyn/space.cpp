#include "ucdyn/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "ucdyn/error.hpp"

namespace ucdyn {

namespace {

std::uint64_t low_mask(unsigned n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

double circle_gap(double a, double b) {
  double d = std::fabs(a - b);
  return d > kPi ? kTwoPi - d : d;
}

// Enumeration bits used by the BinarySeq grid.
constexpr unsigned kGridEnumerationCap = 12;

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::UnitInterval: return "interval";
    case SpaceKind::BinarySeq: return "binary";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "circle") return SpaceKind::Circle;
  if (name == "interval" || name == "unit-interval") return SpaceKind::UnitInterval;
  if (name == "binary" || name == "binary-seq") return SpaceKind::BinarySeq;
  throw ConfigError("unknown space kind '" + name + "'");
}

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Point circle_point(double theta) { return CircleAngle{wrap_angle(theta)}; }

Point interval_point(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("interval point outside [0,1]: " + std::to_string(x));
  return IntervalPoint{x};
}

Point binary_point(std::uint64_t bits, unsigned length, unsigned effective) {
  if (length == 0 || length > kMaxWordLength)
    throw DomainError("binary word length must be in [1, 64]");
  if (effective == 0 || effective > length)
    throw DomainError("binary word effective length must be in [1, length]");
  return BinaryWord{bits & low_mask(length), length, effective};
}

Point binary_point(const std::string& word, unsigned effective) {
  if (word.empty()) throw DomainError("empty binary word");
  if (word.size() > kMaxWordLength) throw DomainError("binary word longer than 64 coordinates");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] == '1')
      bits |= std::uint64_t{1} << i;
    else if (word[i] != '0')
      throw DomainError("binary word may only contain 0 and 1");
  }
  auto len = static_cast<unsigned>(word.size());
  return binary_point(bits, len, effective == 0 ? len : effective);
}

SpaceKind kind_of(const Point& p) {
  switch (p.index()) {
    case 0: return SpaceKind::Circle;
    case 1: return SpaceKind::UnitInterval;
    default: return SpaceKind::BinarySeq;
  }
}

std::string to_string(const Point& p) {
  if (const auto* c = std::get_if<CircleAngle>(&p)) return std::to_string(c->theta);
  if (const auto* i = std::get_if<IntervalPoint>(&p)) return std::to_string(i->x);
  const auto& w = std::get<BinaryWord>(p);
  std::string s;
  for (unsigned k = 1; k <= w.length; ++k) s.push_back(w.coordinate(k) ? '1' : '0');
  return s;
}

PhaseSpace PhaseSpace::circle() { return PhaseSpace(SpaceKind::Circle, 0); }
PhaseSpace PhaseSpace::unit_interval() { return PhaseSpace(SpaceKind::UnitInterval, 0); }

PhaseSpace PhaseSpace::binary(unsigned word_length) {
  if (word_length < 1 || word_length > kMaxWordLength)
    throw DomainError("binary word length must be in [1, 64]");
  return PhaseSpace(SpaceKind::BinarySeq, word_length);
}

double PhaseSpace::diameter() const { return kind_ == SpaceKind::Circle ? kPi : 1.0; }

double PhaseSpace::resolution_floor() const {
  if (kind_ == SpaceKind::BinarySeq) return 1.0 / word_length_;
  return std::numeric_limits<double>::epsilon() * diameter();
}

bool PhaseSpace::contains(const Point& p) const {
  if (kind_of(p) != kind_) return false;
  if (const auto* c = std::get_if<CircleAngle>(&p)) return c->theta >= 0.0 && c->theta < kTwoPi;
  if (const auto* i = std::get_if<IntervalPoint>(&p)) return i->x >= 0.0 && i->x <= 1.0;
  const auto& w = std::get<BinaryWord>(p);
  return w.effective >= 1 && w.length >= w.effective;
}

void PhaseSpace::require(const Point& p) const {
  if (kind_of(p) != kind_)
    throw TypeError("point of kind " + to_string(kind_of(p)) + " used in " + to_string(kind_) + " space");
  if (!contains(p)) throw DomainError("point " + to_string(p) + " is not in the " + to_string(kind_) + " space");
}

Distance measure(const PhaseSpace& space, const Point& x, const Point& y) {
  space.require(x);
  space.require(y);
  switch (space.kind()) {
    case SpaceKind::Circle:
      return {circle_gap(std::get<CircleAngle>(x).theta, std::get<CircleAngle>(y).theta), false};
    case SpaceKind::UnitInterval:
      return {std::fabs(std::get<IntervalPoint>(x).x - std::get<IntervalPoint>(y).x), false};
    case SpaceKind::BinarySeq: break;
  }
  const auto& a = std::get<BinaryWord>(x);
  const auto& b = std::get<BinaryWord>(y);
  unsigned m = std::min(a.effective, b.effective);
  std::uint64_t diff = (a.bits ^ b.bits) & low_mask(m);
  if (diff != 0) return {1.0 / (std::countr_zero(diff) + 1), false};
  if (a.effective == b.effective) return {0.0, false};
  // Agreement on every coordinate both words trust: only an upper bound.
  return {1.0 / m, true};
}

double distance(const PhaseSpace& space, const Point& x, const Point& y) {
  return measure(space, x, y).value;
}

double hausdorff_distance(const PhaseSpace& space, const PointCloud& a, const PointCloud& b) {
  if (a.points.empty() || b.points.empty()) throw DomainError("hausdorff distance of an empty cloud");
  if (a.source != b.source || a.source != space.kind())
    throw TypeError("hausdorff distance between clouds of different spaces");
  auto directed = [&](const PointCloud& from, const PointCloud& to) {
    double worst = 0.0;
    for (const auto& p : from.points) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to.points) {
        best = std::min(best, distance(space, p, q));
        if (best <= worst) break;
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

PointCloud sample_grid(const PhaseSpace& space, std::size_t resolution) {
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");
  PointCloud cloud{{}, space.kind()};
  switch (space.kind()) {
    case SpaceKind::Circle:
      cloud.points.reserve(resolution);
      for (std::size_t i = 0; i < resolution; ++i)
        cloud.points.push_back(CircleAngle{kTwoPi * static_cast<double>(i) / static_cast<double>(resolution)});
      break;
    case SpaceKind::UnitInterval:
      cloud.points.reserve(resolution);
      for (std::size_t i = 0; i < resolution; ++i)
        cloud.points.push_back(IntervalPoint{static_cast<double>(i) / static_cast<double>(resolution - 1)});
      break;
    case SpaceKind::BinarySeq: {
      unsigned w = space.word_length();
      auto b = static_cast<unsigned>(std::min<std::size_t>({resolution, kGridEnumerationCap, w}));
      std::uint64_t count = std::uint64_t{1} << b;
      cloud.points.reserve(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        for (unsigned j = 1; j <= b; ++j)
          if ((i >> (b - j)) & 1u) bits |= std::uint64_t{1} << (j - 1);
        cloud.points.push_back(BinaryWord{bits, w, w});
      }
      break;
    }
  }
  return cloud;
}

PointCloud nested_grid(const PhaseSpace& space, std::size_t resolution) {
  PointCloud out = sample_grid(space, resolution);
  // Zero-padded binary grids of shorter prefixes are already contained.
  if (space.kind() == SpaceKind::BinarySeq) return out;
  for (std::size_t r = (resolution + 1) / 2; r >= 2; r = (r + 1) / 2) {
    for (auto& p : sample_grid(space, r).points)
      if (std::find(out.points.begin(), out.points.end(), p) == out.points.end()) out.points.push_back(p);
    if (r == 2) break;
  }
  return out;
}

unsigned binary_ball_prefix(double radius) {
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  return static_cast<unsigned>(std::floor(1.0 / radius + 1e-9));
}

PointCloud cover_grid(const PhaseSpace& space, double radius) {
  if (!(radius > 0.0)) throw DomainError("cover radius must be positive");
  switch (space.kind()) {
    case SpaceKind::Circle:
      return sample_grid(space, std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(kTwoPi / radius))));
    case SpaceKind::UnitInterval:
      return sample_grid(space, static_cast<std::size_t>(std::ceil(1.0 / radius)) + 1);
    case SpaceKind::BinarySeq: break;
  }
  unsigned k = binary_ball_prefix(radius);
  if (k >= space.word_length()) throw ResolutionError("cover radius below the binary resolution floor");
  return sample_grid(space, std::max(2u, k));
}

PointCloud ball_sample(const PhaseSpace& space, const Point& center, double radius, std::size_t count) {
  space.require(center);
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  if (radius > space.diameter()) throw DomainError("ball radius exceeds the space diameter");
  if (count < 1) throw DomainError("ball sample count must be at least 1");
  PointCloud cloud{{center}, space.kind()};

  if (space.kind() == SpaceKind::BinarySeq) {
    if (radius <= space.resolution_floor())
      throw DomainError("ball radius at or below the binary resolution floor");
    const auto& c = std::get<BinaryWord>(center);
    unsigned k = binary_ball_prefix(radius);
    if (k >= c.effective) throw DomainError("ball not resolvable with the center's trusted coordinates");
    unsigned free = c.effective - k;
    std::uint64_t available = free >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << free);
    for (std::uint64_t j = 1; j < available && cloud.points.size() < count; ++j) {
      std::uint64_t flips = 0;
      for (unsigned b = 0; b < free && (j >> b) != 0; ++b)
        if ((j >> b) & 1u) flips |= std::uint64_t{1} << (k + b);
      cloud.points.push_back(BinaryWord{c.bits ^ flips, c.length, c.effective});
    }
    return cloud;
  }

  std::size_t steps = count / 2;
  double h = radius / static_cast<double>(steps + 1);
  for (std::size_t j = 1; cloud.points.size() < count; ++j) {
    double off = static_cast<double>(j) * h;
    for (double sgn : {-1.0, 1.0}) {
      if (cloud.points.size() >= count) break;
      if (space.kind() == SpaceKind::Circle)
        cloud.points.push_back(CircleAngle{wrap_angle(std::get<CircleAngle>(center).theta + sgn * off)});
      else
        cloud.points.push_back(IntervalPoint{std::clamp(std::get<IntervalPoint>(center).x + sgn * off, 0.0, 1.0)});
    }
  }
  return cloud;
}

nlohmann::json point_to_json(const Point& p) {
  if (const auto* c = std::get_if<CircleAngle>(&p)) return c->theta;
  if (const auto* i = std::get_if<IntervalPoint>(&p)) return i->x;
  const auto& w = std::get<BinaryWord>(p);
  return {{"word", to_string(p)}, {"effective", w.effective}};
}

Point point_from_json(const PhaseSpace& space, const nlohmann::json& j) {
  switch (space.kind()) {
    case SpaceKind::Circle:
      if (!j.is_number()) throw ConfigError("circle point must be a number");
      return circle_point(j.get<double>());
    case SpaceKind::UnitInterval:
      if (!j.is_number()) throw ConfigError("interval point must be a number");
      return interval_point(j.get<double>());
    case SpaceKind::BinarySeq: break;
  }
  if (j.is_string()) return binary_point(j.get<std::string>());
  if (!j.is_object() || !j.contains("word")) throw ConfigError("binary point must be a word string or {word, effective}");
  return binary_point(j.at("word").get<std::string>(), j.value("effective", 0u));
}

nlohmann::json space_to_json(const PhaseSpace& space) {
  nlohmann::json j{{"kind", to_string(space.kind())}};
  if (space.kind() == SpaceKind::BinarySeq) j["word_length"] = space.word_length();
  return j;
}

PhaseSpace space_from_json(const nlohmann::json& j) {
  std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  switch (space_kind_from_string(kind)) {
    case SpaceKind::Circle: return PhaseSpace::circle();
    case SpaceKind::UnitInterval: return PhaseSpace::unit_interval();
    case SpaceKind::BinarySeq: break;
  }
  unsigned len = j.is_object() ? j.value("word_length", 24u) : 24u;
  return PhaseSpace::binary(len);
}

}  // namespace ucdyn
