#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ucdyn/config.hpp"
#include "ucdyn/maps.hpp"
#include "ucdyn/space.hpp"
#include "ucdyn/verdict.hpp"

namespace ucdyn {

using Generator = std::function<MapDescriptor(std::size_t)>;

/// f_1, f_2, ... together with the uniform limit f.
class MapFamily {
 public:
  /// `autonomous_from`: index a with f_n = f for every n >= a, when known.
  MapFamily(PhaseSpace space, Generator generator, MapDescriptor limit, std::string label,
            std::optional<std::size_t> autonomous_from = std::nullopt);

  static MapFamily autonomous(PhaseSpace space, MapDescriptor f, std::string label);

  const PhaseSpace& space() const { return space_; }
  /// f_n for n >= 1.
  MapDescriptor map(std::size_t n) const;
  const MapDescriptor& limit() const { return limit_; }
  const std::string& label() const { return label_; }
  std::optional<std::size_t> autonomous_from() const { return autonomous_from_; }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  PhaseSpace space_;
  Generator generator_;
  MapDescriptor limit_;
  std::string label_;
  std::optional<std::size_t> autonomous_from_;
  std::vector<std::string> warnings_;
};

const std::vector<std::string>& builtin_family_names();

/// Golden-ratio rotation amount 2pi(sqrt5 - 1)/2.
double golden_alpha();

MapFamily make_builtin_family(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// {builtin, params, label} or {generator: [{from, to?, map}], limit, label}.
MapFamily family_from_json(const PhaseSpace& space, const nlohmann::json& j);

// ---- hypothesis checks ----

Verdict commutes_with_limit(const MapFamily& fam, std::size_t resolution, double tol, std::size_t max_index);

Verdict feeble_open_check(const MapDescriptor& m);

enum class SummabilityFlag { SummableLikely, DivergentLikely };
std::string to_string(SummabilityFlag f);

struct SummabilityEstimate {
  std::vector<double> terms;        // D(f_n, f), n = 1..N
  std::vector<bool> exact;          // per-term closed form
  std::vector<double> partial_sums;  // S_1..S_N
  SummabilityFlag flag = SummabilityFlag::DivergentLikely;
  bool exact_closed_form = false;   // series limit known in closed form
  double fitted_exponent = 0.0;     // p in term ~ C / n^p over the tail
  std::optional<double> limit_estimate;  // closed form or tail extrapolation
  std::string rationale;
  /// (n, S_n) at n = 1..10, 20, 50, 100, 200, 500, ..., N; what reports carry.
  std::vector<std::pair<std::size_t, double>> checkpoints;
};

SummabilityEstimate summability_estimate(const MapFamily& fam, std::size_t n_terms, std::size_t resolution);

struct MetricCheck {
  bool isometry = false;
  bool shrinking = false;
  bool symbolic = false;
};

MetricCheck isometry_shrinking_check(const PhaseSpace& space, const MapDescriptor& m, std::size_t resolution,
                                     double tol);

Verdict surjectivity_check(const PhaseSpace& space, const MapDescriptor& m, std::size_t resolution, double eps);

struct HypothesisProfile {
  Verdict commutes;
  SummabilityEstimate summability;
  Verdict feeble_open;
  Verdict surjective;
  Verdict uniform_convergence;
  bool isometry = false;
  bool shrinking = false;
  std::optional<bool> bijective;  // of the limit map
  bool nearness_declared = false;

  bool summable_likely() const { return summability.flag == SummabilityFlag::SummableLikely; }
};

HypothesisProfile profile_hypotheses(const MapFamily& fam, const CheckConfig& cfg);

nlohmann::json profile_to_json(const HypothesisProfile& p);
HypothesisProfile profile_from_json(const nlohmann::json& j);

}  // namespace ucdyn
