#include "ucdyn/region.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "ucdyn/error.hpp"

namespace ucdyn {

namespace {

constexpr std::size_t kCloudSize = 64;

std::uint64_t mask(unsigned n) { return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1); }

bool full_arc(const ArcSet& a) { return a.length >= kTwoPi; }

double ccw(double from, double to) {
  double d = to - from;
  if (d < 0.0) d += kTwoPi;
  return d;
}

CloudSet to_cloud(const PhaseSpace& space, const Region& r) {
  if (const auto* c = std::get_if<CloudSet>(&r)) return *c;
  CloudSet out;
  if (const auto* iv = std::get_if<IntervalSet>(&r)) {
    for (std::size_t i = 0; i < kCloudSize; ++i)
      out.points.push_back(IntervalPoint{iv->lo + (iv->hi - iv->lo) * static_cast<double>(i) / (kCloudSize - 1)});
  } else if (const auto* a = std::get_if<ArcSet>(&r)) {
    double len = std::min(a->length, kTwoPi);
    for (std::size_t i = 0; i < kCloudSize; ++i)
      out.points.push_back(CircleAngle{wrap_angle(a->start + len * static_cast<double>(i) / kCloudSize)});
  } else {
    const auto& cy = std::get<CylinderSet>(r);
    unsigned free = std::min(6u, cy.word.effective - cy.k);
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << free); ++j)
      out.points.push_back(BinaryWord{(cy.word.bits & mask(cy.k)) | (j << cy.k), cy.word.length, cy.word.effective});
  }
  (void)space;
  return out;
}

IntervalSet pl_image(const PiecewiseLinear& pl, const IntervalSet& iv) {
  double lo = std::min(pl_eval(pl, iv.lo), pl_eval(pl, iv.hi));
  double hi = std::max(pl_eval(pl, iv.lo), pl_eval(pl, iv.hi));
  for (const auto& [x, y] : pl.breakpoints)
    if (x > iv.lo && x < iv.hi) lo = std::min(lo, y), hi = std::max(hi, y);
  return {lo, hi};
}

CylinderSet cylinder_image(const std::vector<BinaryOp>& ops, CylinderSet c) {
  for (const auto& op : ops) {
    if (op.odometer) {
      c.word.bits = (c.word.bits & ~mask(c.k)) | ((c.word.bits + 1) & mask(c.k));
    } else if (op.index <= c.k) {
      std::uint64_t low = c.word.bits & mask(op.index - 1);
      std::uint64_t high = (c.word.bits >> op.index) << (op.index - 1);
      c.k -= 1;
      c.word.bits = (low | high) & mask(c.k);
    }
  }
  c.word.bits &= mask(c.k);
  return c;
}

}  // namespace

Region ball_region(const PhaseSpace& space, const Point& center, double radius) {
  space.require(center);
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  switch (space.kind()) {
    case SpaceKind::UnitInterval: {
      double x = std::get<IntervalPoint>(center).x;
      return IntervalSet{std::max(0.0, x - radius), std::min(1.0, x + radius)};
    }
    case SpaceKind::Circle: {
      double t = std::get<CircleAngle>(center).theta;
      if (radius >= kPi) return ArcSet{0.0, kTwoPi};
      return ArcSet{wrap_angle(t - radius), 2.0 * radius};
    }
    case SpaceKind::BinarySeq: break;
  }
  const auto& w = std::get<BinaryWord>(center);
  unsigned k = binary_ball_prefix(radius);
  if (k > w.effective) throw ResolutionError("ball radius below the resolution of the center word");
  return CylinderSet{BinaryWord{w.bits & mask(k), w.length, w.effective}, k};
}

Region image(const PhaseSpace& space, const MapDescriptor& m, const Region& r) {
  if (const auto* iv = std::get_if<IntervalSet>(&r)) {
    if (auto pl = piecewise_form(m, true)) return pl_image(*pl, *iv);
  } else if (const auto* a = std::get_if<ArcSet>(&r)) {
    if (auto af = affine_form(m)) {
      if (full_arc(*a)) {
        if (af->slope >= 1) return ArcSet{0.0, kTwoPi};
      }
      double len = static_cast<double>(af->slope) * a->length;
      if (len >= kTwoPi) return ArcSet{0.0, kTwoPi};
      return ArcSet{wrap_angle(static_cast<double>(af->slope) * a->start + af->offset), len};
    }
  } else if (const auto* c = std::get_if<CylinderSet>(&r)) {
    if (auto ops = binary_ops(m)) return cylinder_image(*ops, *c);
  }
  CloudSet cloud = to_cloud(space, r);
  for (auto& p : cloud.points) p = ucdyn::apply(m, p);
  return cloud;
}

double region_diameter(const PhaseSpace& space, const Region& r) {
  if (const auto* iv = std::get_if<IntervalSet>(&r)) return iv->hi - iv->lo;
  if (const auto* a = std::get_if<ArcSet>(&r)) return std::min(a->length, kPi);
  if (const auto* c = std::get_if<CylinderSet>(&r)) return c->k == 0 ? 1.0 : 1.0 / (c->k + 1);
  const auto& pts = std::get<CloudSet>(r).points;
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(space, pts[i], pts[j]));
  return d;
}

double region_distance(const PhaseSpace& space, const Region& r, const Point& v) {
  if (const auto* iv = std::get_if<IntervalSet>(&r)) {
    double x = std::get<IntervalPoint>(v).x;
    return std::max({0.0, iv->lo - x, x - iv->hi});
  }
  if (const auto* a = std::get_if<ArcSet>(&r)) {
    if (full_arc(*a)) return 0.0;
    double t = std::get<CircleAngle>(v).theta;
    double into = ccw(a->start, t);
    if (into <= a->length) return 0.0;
    // Outside the arc: nearer of the two endpoints, going either way round.
    return std::min(into - a->length, kTwoPi - into);
  }
  if (const auto* c = std::get_if<CylinderSet>(&r)) {
    const auto& w = std::get<BinaryWord>(v);
    unsigned m = std::min(c->k, w.effective);
    std::uint64_t diff = (c->word.bits ^ w.bits) & mask(m);
    if (diff == 0) return 0.0;
    return 1.0 / (std::countr_zero(diff) + 1);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : std::get<CloudSet>(r).points) best = std::min(best, distance(space, p, v));
  return best;
}

double region_gap_to_space(const PhaseSpace& space, const Region& r) {
  if (const auto* iv = std::get_if<IntervalSet>(&r)) return std::max(iv->lo, 1.0 - iv->hi);
  if (const auto* a = std::get_if<ArcSet>(&r)) return full_arc(*a) ? 0.0 : std::min(kPi, (kTwoPi - a->length) / 2.0);
  if (const auto* c = std::get_if<CylinderSet>(&r)) return c->k == 0 ? 0.0 : 1.0;
  double worst = 0.0;
  for (const auto& g : sample_grid(space, 64).points) worst = std::max(worst, region_distance(space, r, g));
  return worst;
}

bool same_region(const Region& a, const Region& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<IntervalSet>(&a)) {
    const auto& y = std::get<IntervalSet>(b);
    return x->lo == y.lo && x->hi == y.hi;
  }
  if (const auto* x = std::get_if<ArcSet>(&a)) {
    const auto& y = std::get<ArcSet>(b);
    if (full_arc(*x) && full_arc(y)) return true;
    return x->start == y.start && x->length == y.length;
  }
  if (const auto* x = std::get_if<CylinderSet>(&a)) {
    const auto& y = std::get<CylinderSet>(b);
    return x->k == y.k && x->word.bits == y.word.bits;
  }
  return std::get<CloudSet>(a).points == std::get<CloudSet>(b).points;
}

nlohmann::json region_to_json(const Region& r) {
  if (const auto* iv = std::get_if<IntervalSet>(&r)) return {{"interval", {iv->lo, iv->hi}}};
  if (const auto* a = std::get_if<ArcSet>(&r)) return {{"arc", {{"start", a->start}, {"length", std::min(a->length, kTwoPi)}}}};
  if (const auto* c = std::get_if<CylinderSet>(&r)) {
    std::string prefix;
    for (unsigned i = 1; i <= c->k; ++i) prefix.push_back(c->word.coordinate(i) ? '1' : '0');
    return {{"cylinder", prefix}};
  }
  return {{"cloud", std::get<CloudSet>(r).points.size()}};
}

}  // namespace ucdyn
