#include "ucdyn/orbit.hpp"

#include "ucdyn/error.hpp"

namespace ucdyn {

Point omega(const MapFamily& fam, const Point& x, std::size_t n) { return omega_window(fam, x, 0, n); }

Point omega_window(const MapFamily& fam, const Point& x, std::size_t n, std::size_t k) {
  fam.space().require(x);
  Point p = x;
  for (std::size_t i = n + 1; i <= n + k; ++i) p = ucdyn::apply(fam.map(i), p);
  return p;
}

Point limit_iterate(const MapFamily& fam, const Point& x, std::size_t k) {
  fam.space().require(x);
  Point p = x;
  for (std::size_t i = 0; i < k; ++i) p = ucdyn::apply(fam.limit(), p);
  return p;
}

Trajectory trajectory(const MapFamily& fam, const Point& x, std::size_t horizon) {
  fam.space().require(x);
  Trajectory t{x, {x}, horizon};
  t.states.reserve(horizon + 1);
  for (std::size_t n = 1; n <= horizon; ++n) t.states.push_back(ucdyn::apply(fam.map(n), t.states.back()));
  return t;
}

CompositionWindow composition_window(const MapFamily& fam, const std::vector<Point>& inputs, std::size_t n,
                                     std::size_t k) {
  CompositionWindow w{n, k, inputs, {}};
  std::vector<MapDescriptor> maps;
  for (std::size_t i = n + 1; i <= n + k; ++i) maps.push_back(fam.map(i));
  for (const auto& x : inputs) {
    fam.space().require(x);
    Point p = x;
    for (const auto& m : maps) p = ucdyn::apply(m, p);
    w.points.push_back(p);
  }
  return w;
}

std::string to_string(Mode m) { return m == Mode::NonAutonomous ? "non-autonomous" : "autonomous-limit"; }

StepSequence::StepSequence(const SystemView& sys, std::size_t horizon)
    : space_(sys.fam.space()), horizon_(horizon) {
  if (sys.mode == Mode::AutonomousLimit) {
    steps_.push_back(sys.fam.limit());
    autonomous_from_ = 1;
  } else {
    std::size_t distinct = horizon;
    if (auto a = sys.fam.autonomous_from(); a && *a <= horizon) {
      autonomous_from_ = *a;
      distinct = *a;
    }
    steps_.reserve(distinct);
    for (std::size_t n = 1; n <= distinct; ++n) steps_.push_back(sys.fam.map(n));
  }
  isometric_ = true;
  for (const auto& m : steps_) {
    auto c = symbolic_metric_class(m);
    if (!c || !c->isometry) {
      isometric_ = false;
      break;
    }
  }
}

const MapDescriptor& StepSequence::step(std::size_t n) const {
  if (n < 1) throw DomainError("steps are indexed from 1");
  if (n <= steps_.size()) return steps_[n - 1];
  if (!autonomous_from_) throw DomainError("step " + std::to_string(n) + " lies beyond the materialized horizon");
  return steps_.back();
}

Point StepSequence::advance(const Point& x, std::size_t n) const { return ucdyn::apply(step(n), x); }

std::vector<Point> StepSequence::orbit(const Point& x) const { return orbit(x, horizon_); }

std::vector<Point> StepSequence::orbit(const Point& x, std::size_t horizon) const {
  std::vector<Point> out;
  out.reserve(horizon + 1);
  out.push_back(x);
  for (std::size_t n = 1; n <= horizon; ++n) out.push_back(advance(out.back(), n));
  return out;
}

}  // namespace ucdyn
