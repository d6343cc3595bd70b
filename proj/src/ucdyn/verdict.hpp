#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace ucdyn {

enum class Outcome { Holds, Refuted, Inconclusive };

/// How a verdict was reached: finite sampling, a structural rule about the
/// descriptors, or by running out of horizon.
enum class Basis { Sampled, Symbolic, Horizon };

std::string to_string(Outcome o);
std::string to_string(Basis b);
Outcome outcome_from_string(const std::string& s);
Basis basis_from_string(const std::string& s);

struct Verdict {
  std::string property;
  std::optional<std::string> mode;
  Outcome outcome = Outcome::Inconclusive;
  Basis basis = Basis::Horizon;
  nlohmann::json witness = nlohmann::json::object();
  std::string narrative;

  bool holds() const { return outcome == Outcome::Holds; }
  bool refuted() const { return outcome == Outcome::Refuted; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

}  // namespace ucdyn
