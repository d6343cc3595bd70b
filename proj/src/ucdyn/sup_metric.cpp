#include "ucdyn/sup_metric.hpp"

#include <algorithm>
#include <cmath>

#include "ucdyn/error.hpp"

namespace ucdyn {

namespace {

std::optional<SupEstimate> affine_closed_form(const MapDescriptor& g, const MapDescriptor& h) {
  auto a = affine_form(g);
  auto b = affine_form(h);
  if (!a || !b) return std::nullopt;
  if (a->slope != b->slope) {
    // (s-t)*theta + c sweeps the whole circle, so the antipode is reached.
    double theta = wrap_angle((kPi - (a->offset - b->offset)) / static_cast<double>(a->slope - b->slope));
    return SupEstimate{kPi, true, CircleAngle{theta}};
  }
  double gap = std::fabs(a->offset - b->offset);
  if (gap > kPi) gap = kTwoPi - gap;
  return SupEstimate{gap, true, CircleAngle{0.0}};
}

std::optional<SupEstimate> pl_closed_form(const MapDescriptor& g, const MapDescriptor& h) {
  auto a = piecewise_form(g);
  auto b = piecewise_form(h);
  if (!a || !b) return std::nullopt;
  // g - h is linear between consecutive points of the merged breakpoints.
  std::vector<double> xs;
  for (const auto& p : a->breakpoints) xs.push_back(p.first);
  for (const auto& p : b->breakpoints) xs.push_back(p.first);
  std::sort(xs.begin(), xs.end());
  SupEstimate best{0.0, true, IntervalPoint{0.0}};
  for (double x : xs) {
    double gap = std::fabs(pl_eval(*a, x) - pl_eval(*b, x));
    if (gap > best.value) best = {gap, true, IntervalPoint{x}};
  }
  return best;
}

// Odometer steps are isometries, so only the leading deletion matters.
std::optional<SupEstimate> binary_closed_form(const PhaseSpace& space, const MapDescriptor& g,
                                              const MapDescriptor& h) {
  auto a = binary_ops(g);
  auto b = binary_ops(h);
  if (!a || !b) return std::nullopt;
  BinaryWord origin{0, space.word_length(), space.word_length()};
  if (*a == *b) return SupEstimate{0.0, true, origin};
  auto all_odo = [](const std::vector<BinaryOp>& ops, std::size_t from) {
    return std::all_of(ops.begin() + static_cast<std::ptrdiff_t>(from), ops.end(),
                       [](const BinaryOp& op) { return op.odometer; });
  };
  const std::vector<BinaryOp>* del = &*a;
  const std::vector<BinaryOp>* plain = &*b;
  if (!a->empty() && a->front().odometer) std::swap(del, plain);
  if (del->empty() || del->front().odometer || !all_odo(*del, 1) || !all_odo(*plain, 0)) return std::nullopt;
  if (del->size() - 1 != plain->size()) return std::nullopt;
  unsigned n = del->front().index;
  if (n > space.word_length()) return std::nullopt;
  // A word with coordinates n and n+1 different separates first at n.
  std::uint64_t bits = n < space.word_length() ? (std::uint64_t{1} << n) : 0;
  return SupEstimate{1.0 / n, true, BinaryWord{bits, space.word_length(), space.word_length()}};
}

}  // namespace

SupEstimate sup_metric(const PhaseSpace& space, const MapDescriptor& g, const MapDescriptor& h,
                       std::size_t resolution) {
  if (resolution < 2) throw DomainError("sup metric grid resolution must be at least 2");
  if (domain_of(g) != space.kind() || domain_of(h) != space.kind())
    throw TypeError("sup metric of maps on another space");
  if (auto r = affine_closed_form(g, h)) return *r;
  if (auto r = pl_closed_form(g, h)) return *r;
  if (auto r = binary_closed_form(space, g, h)) return *r;

  SupEstimate best{0.0, false, std::nullopt};
  for (const auto& x : nested_grid(space, resolution).points) {
    double d = distance(space, apply(g, x), apply(h, x));
    if (!best.witness || d > best.value) best = {d, false, x};
  }
  return best;
}

}  // namespace ucdyn
