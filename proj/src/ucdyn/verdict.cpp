#include "ucdyn/verdict.hpp"

#include "ucdyn/error.hpp"

namespace ucdyn {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "Holds";
    case Outcome::Refuted: return "Refuted";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Basis b) {
  switch (b) {
    case Basis::Sampled: return "sampled";
    case Basis::Symbolic: return "symbolic";
    case Basis::Horizon: return "horizon";
  }
  return "?";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "Holds") return Outcome::Holds;
  if (s == "Refuted") return Outcome::Refuted;
  if (s == "Inconclusive") return Outcome::Inconclusive;
  throw ConfigError("unknown verdict outcome '" + s + "'");
}

Basis basis_from_string(const std::string& s) {
  if (s == "sampled") return Basis::Sampled;
  if (s == "symbolic") return Basis::Symbolic;
  if (s == "horizon") return Basis::Horizon;
  throw ConfigError("unknown verdict basis '" + s + "'");
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j{{"property", v.property},
                   {"outcome", to_string(v.outcome)},
                   {"basis", to_string(v.basis)},
                   {"witness", v.witness},
                   {"narrative", v.narrative}};
  j["mode"] = v.mode ? nlohmann::json(*v.mode) : nlohmann::json(nullptr);
  return j;
}

Verdict verdict_from_json(const nlohmann::json& j) {
  Verdict v;
  v.property = j.at("property").get<std::string>();
  if (j.contains("mode") && !j.at("mode").is_null()) v.mode = j.at("mode").get<std::string>();
  v.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  v.basis = basis_from_string(j.at("basis").get<std::string>());
  v.witness = j.value("witness", nlohmann::json::object());
  v.narrative = j.value("narrative", std::string());
  return v;
}

}  // namespace ucdyn
