#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ucdyn/space.hpp"

namespace ucdyn {

struct MapDescriptor;

/// theta -> theta + amount (mod 2pi).
struct Rotation {
  double amount = 0.0;
};

/// theta -> slope * theta + offset (mod 2pi).
struct AffineCircle {
  int slope = 1;
  double offset = 0.0;
};

/// Continuous piecewise-linear self map of [0,1] through the breakpoints.
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> breakpoints;
};

/// Add 1 at coordinate 1, carrying to the right.
struct OdometerAdd {};

/// Drop coordinate `index` (1-based) and shift the tail left.
struct Delete {
  unsigned index = 1;
};

struct Compose {
  std::shared_ptr<const MapDescriptor> outer;
  std::shared_ptr<const MapDescriptor> inner;
};

enum class Interpolation { Linear, Nearest };

/// Values tabulated on the uniform grid of the space (sample_grid with
/// resolution = values.size()).
struct Lookup {
  SpaceKind space = SpaceKind::UnitInterval;
  std::vector<double> values;
  Interpolation interpolation = Interpolation::Linear;
};

struct MapDescriptor {
  std::variant<Rotation, AffineCircle, PiecewiseLinear, OdometerAdd, Delete, Compose, Lookup> v;
};

MapDescriptor rotation(double amount);
MapDescriptor affine(int slope, double offset);
MapDescriptor piecewise_linear(std::vector<std::pair<double, double>> breakpoints);
MapDescriptor tent();
MapDescriptor identity_on(SpaceKind kind);
MapDescriptor odometer();
MapDescriptor deletion(unsigned index);
MapDescriptor compose(MapDescriptor outer, MapDescriptor inner);
MapDescriptor lookup(SpaceKind space, std::vector<double> values, Interpolation interpolation);

/// Space kind the descriptor acts on.
SpaceKind domain_of(const MapDescriptor& m);

Point apply(const MapDescriptor& m, const Point& x);

std::string describe(const MapDescriptor& m);

double pl_eval(const PiecewiseLinear& pl, double x);
/// Exact breakpoints of outer o inner.
PiecewiseLinear pl_compose(const PiecewiseLinear& outer, const PiecewiseLinear& inner);

struct AffineForm {
  long long slope = 1;
  double offset = 0.0;  // in [0, 2pi)
};

/// Closed form of rotation/affine compositions; nullopt otherwise.
std::optional<AffineForm> affine_form(const MapDescriptor& m);

/// Closed form of piecewise-linear compositions. Linear lookups on the
/// interval count as piecewise-linear only when `lookup_as_pl` is set.
std::optional<PiecewiseLinear> piecewise_form(const MapDescriptor& m, bool lookup_as_pl = false);

struct BinaryOp {
  bool odometer = true;  // false: Delete{index}
  unsigned index = 0;
  friend bool operator==(const BinaryOp&, const BinaryOp&) = default;
};

/// Binary operations in application order; nullopt if m is not built from
/// OdometerAdd/Delete.
std::optional<std::vector<BinaryOp>> binary_ops(const MapDescriptor& m);

struct MetricClass {
  bool isometry = false;
  bool shrinking = false;
};

/// Isometry/shrinking by descriptor structure alone; nullopt when unknown.
std::optional<MetricClass> symbolic_metric_class(const MapDescriptor& m);

std::optional<bool> symbolic_bijective(const MapDescriptor& m);

nlohmann::json map_to_json(const MapDescriptor& m);
MapDescriptor map_from_json(const nlohmann::json& j, SpaceKind space);

}  // namespace ucdyn
