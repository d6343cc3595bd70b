#pragma once

#include <cstddef>
#include <optional>

#include "ucdyn/maps.hpp"
#include "ucdyn/space.hpp"

namespace ucdyn {

struct SupEstimate {
  double value = 0.0;
  /// Closed form; otherwise a grid maximum (a lower bound on the true sup).
  bool exact = false;
  std::optional<Point> witness;
};

/// D(g,h) = sup_x d(g(x), h(x)).
SupEstimate sup_metric(const PhaseSpace& space, const MapDescriptor& g, const MapDescriptor& h,
                       std::size_t resolution);

}  // namespace ucdyn
