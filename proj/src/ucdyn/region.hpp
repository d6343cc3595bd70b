#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "ucdyn/maps.hpp"
#include "ucdyn/space.hpp"

namespace ucdyn {

// Exact images of small open sets. Tracking endpoints instead of sample
// clouds keeps set images honest where floating-point orbits of individual
// points degenerate (tent-map orbits reach 0 exactly within ~55 steps).

/// Closed interval [lo, hi] of the unit interval.
struct IntervalSet {
  double lo = 0.0;
  double hi = 0.0;
};

/// Arc starting at `start` running counter-clockwise for `length`;
/// length >= 2pi is the whole circle.
struct ArcSet {
  double start = 0.0;
  double length = 0.0;
};

/// All sequences sharing the first `k` coordinates of `word`.
struct CylinderSet {
  BinaryWord word;
  unsigned k = 0;
};

/// Fallback for maps without a set rule.
struct CloudSet {
  std::vector<Point> points;
};

using Region = std::variant<IntervalSet, ArcSet, CylinderSet, CloudSet>;

Region ball_region(const PhaseSpace& space, const Point& center, double radius);

Region image(const PhaseSpace& space, const MapDescriptor& m, const Region& r);

double region_diameter(const PhaseSpace& space, const Region& r);
/// inf over the region of d(., v).
double region_distance(const PhaseSpace& space, const Region& r, const Point& v);
/// D_H(region, X).
double region_gap_to_space(const PhaseSpace& space, const Region& r);

bool same_region(const Region& a, const Region& b);

nlohmann::json region_to_json(const Region& r);

}  // namespace ucdyn
