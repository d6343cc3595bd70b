#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ucdyn {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Binary words are stored in a single machine word.
inline constexpr unsigned kMaxWordLength = 64;

enum class SpaceKind { Circle, UnitInterval, BinarySeq };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// Angle in radians, always reduced into [0, 2pi).
struct CircleAngle {
  double theta = 0.0;
  friend bool operator==(const CircleAngle&, const CircleAngle&) = default;
};

struct IntervalPoint {
  double x = 0.0;
  friend bool operator==(const IntervalPoint&, const IntervalPoint&) = default;
};

/// Finite prefix of a one-sided 0/1 sequence. Bit i holds coordinate i+1.
/// Only the first `effective` coordinates are trusted; the rest of the
/// sequence is unknown.
struct BinaryWord {
  std::uint64_t bits = 0;
  unsigned length = 0;
  unsigned effective = 0;

  bool coordinate(unsigned k) const { return (bits >> (k - 1)) & 1u; }
  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;
};

using Point = std::variant<CircleAngle, IntervalPoint, BinaryWord>;

double wrap_angle(double theta);
Point circle_point(double theta);
Point interval_point(double x);
/// Parses "0101..." (coordinate 1 first). Effective length defaults to the
/// word length.
Point binary_point(const std::string& word, unsigned effective = 0);
Point binary_point(std::uint64_t bits, unsigned length, unsigned effective);

SpaceKind kind_of(const Point& p);
std::string to_string(const Point& p);

class PhaseSpace {
 public:
  static PhaseSpace circle();
  static PhaseSpace unit_interval();
  /// Binary sequence space whose points carry `word_length` trusted
  /// coordinates.
  static PhaseSpace binary(unsigned word_length);

  SpaceKind kind() const { return kind_; }
  double diameter() const;
  /// Finest distance the space can resolve; 1/word_length for BinarySeq.
  double resolution_floor() const;
  unsigned word_length() const { return word_length_; }

  bool contains(const Point& p) const;
  void require(const Point& p) const;

  friend bool operator==(const PhaseSpace&, const PhaseSpace&) = default;

 private:
  PhaseSpace(SpaceKind kind, unsigned word_length) : kind_(kind), word_length_(word_length) {}

  SpaceKind kind_;
  unsigned word_length_;
};

struct PointCloud {
  std::vector<Point> points;
  SpaceKind source = SpaceKind::Circle;
};

/// Distance together with a flag marking BinarySeq results that hit the
/// resolution floor (the words agree on every trusted coordinate).
struct Distance {
  double value = 0.0;
  bool resolution_floor = false;
};

Distance measure(const PhaseSpace& space, const Point& x, const Point& y);
double distance(const PhaseSpace& space, const Point& x, const Point& y);

double hausdorff_distance(const PhaseSpace& space, const PointCloud& a, const PointCloud& b);

PointCloud sample_grid(const PhaseSpace& space, std::size_t resolution);

/// Union of sample_grid at resolutions R, ceil(R/2), ceil(R/4), ... >= 2.
/// Grids built this way are nested under doubling of R.
PointCloud nested_grid(const PhaseSpace& space, std::size_t resolution);

/// Grid fine enough that every point of the space lies within `radius`
/// of some grid point.
PointCloud cover_grid(const PhaseSpace& space, double radius);

/// Number of leading coordinates a point must share with the center to lie
/// in the open BinarySeq ball of the given radius.
unsigned binary_ball_prefix(double radius);

PointCloud ball_sample(const PhaseSpace& space, const Point& center, double radius,
                       std::size_t count);

nlohmann::json point_to_json(const Point& p);
Point point_from_json(const PhaseSpace& space, const nlohmann::json& j);

nlohmann::json space_to_json(const PhaseSpace& space);
PhaseSpace space_from_json(const nlohmann::json& j);

}  // namespace ucdyn
