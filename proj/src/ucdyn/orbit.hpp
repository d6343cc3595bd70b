#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ucdyn/family.hpp"

namespace ucdyn {

/// omega_n(x) = f_n o ... o f_1 (x); omega_0 is the identity.
Point omega(const MapFamily& fam, const Point& x, std::size_t n);

/// omega^n_{n+k}(x) = f_{n+k} o ... o f_{n+1} (x).
Point omega_window(const MapFamily& fam, const Point& x, std::size_t n, std::size_t k);

/// f^k(x).
Point limit_iterate(const MapFamily& fam, const Point& x, std::size_t k);

struct Trajectory {
  Point start;
  std::vector<Point> states;  // states[n] = omega_n(start), n = 0..horizon
  std::size_t horizon = 0;
};

Trajectory trajectory(const MapFamily& fam, const Point& x, std::size_t horizon);

struct CompositionWindow {
  std::size_t base = 0;
  std::size_t length = 0;
  std::vector<Point> inputs;
  std::vector<Point> points;  // omega^base_{base+length} applied to inputs
};

CompositionWindow composition_window(const MapFamily& fam, const std::vector<Point>& inputs, std::size_t n,
                                     std::size_t k);

enum class Mode { NonAutonomous, AutonomousLimit };

std::string to_string(Mode m);

/// One of the two systems attached to a family: (X, F) or (X, f).
struct SystemView {
  const MapFamily& fam;
  Mode mode;
};

/// The maps a system applies at steps 1..horizon, materialized once.
/// Checkers only ever see a system through this, so the two modes differ
/// in the step maps and nothing else.
class StepSequence {
 public:
  StepSequence(const SystemView& sys, std::size_t horizon);

  const PhaseSpace& space() const { return space_; }
  std::size_t horizon() const { return horizon_; }
  /// Map applied at step n (1-based).
  const MapDescriptor& step(std::size_t n) const;
  /// Index a with step(n) identical for all n >= a, if known.
  std::optional<std::size_t> autonomous_from() const { return autonomous_from_; }

  Point advance(const Point& x, std::size_t n) const;
  /// states 0..horizon.
  std::vector<Point> orbit(const Point& x) const;
  std::vector<Point> orbit(const Point& x, std::size_t horizon) const;

  /// Every step map is structurally an isometry.
  bool isometric_steps() const { return isometric_; }

 private:
  PhaseSpace space_;
  std::size_t horizon_;
  std::vector<MapDescriptor> steps_;  // steps_[i] = step(i+1) for i < distinct count
  std::optional<std::size_t> autonomous_from_;
  bool isometric_ = false;
};

}  // namespace ucdyn
