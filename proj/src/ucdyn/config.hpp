#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucdyn/space.hpp"

namespace ucdyn {

/// Finite surrogates for the quantifiers in the property definitions.
struct CheckConfig {
  std::size_t horizon = 5000;      // N
  std::size_t grid = 20;           // grid resolution for starts and ball centres
  std::size_t ball_count = 5;      // samples per ball
  double eps = 0.1;                // closeness target
  double delta = 0.5;              // separation target
  double tol = 1e-9;               // float tolerance
  std::size_t tail_window = 2000;  // W, liminf/limsup proxy window [N-W, N]
  std::size_t max_period = 16;     // P
  std::size_t repetitions = 3;     // R
  std::size_t sup_grid = 256;      // grid for sup-metric estimates without closed form
  bool nearness_criteria = false;  // user-declared; never checked

  void validate(const PhaseSpace& space) const;
};

struct BoundsConfig {
  std::size_t k_max = 200;        // deviation checks for k = 1..k_max
  std::size_t n_max = 50;         // collective-convergence profile rows n = 0..n_max
  std::size_t profile_k_max = 50;
  std::size_t sample_points = 100;

  void validate() const;
};

struct OutputConfig {
  std::string dir;
  std::string format = "json";
};

/// Report rows, in report order.
const std::vector<std::string>& property_names();
bool is_property(const std::string& name);

struct ScenarioSpec {
  std::string id;  // catalog id, empty for user specs
  PhaseSpace space = PhaseSpace::circle();
  nlohmann::json family;
  CheckConfig check;
  BoundsConfig bounds;
  std::vector<std::string> properties;
  OutputConfig output;

  void validate() const;
};

ScenarioSpec spec_from_json(const nlohmann::json& j);
/// Canonical form: every field explicit, keys sorted.
nlohmann::json spec_to_json(const ScenarioSpec& s);

nlohmann::json check_config_to_json(const CheckConfig& c);
CheckConfig check_config_from_json(const nlohmann::json& j, CheckConfig base = {});

/// FNV-1a over the canonical JSON dump.
std::string config_hash(const ScenarioSpec& s);

}  // namespace ucdyn
