#include "ucdyn/config.hpp"

#include <algorithm>
#include <cstdio>

#include "ucdyn/error.hpp"

namespace ucdyn {

void CheckConfig::validate(const PhaseSpace& space) const {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (grid < 2) throw ConfigError("grid resolution must be at least 2");
  if (sup_grid < 2) throw ConfigError("sup grid resolution must be at least 2");
  if (ball_count < 1) throw ConfigError("ball count must be at least 1");
  if (!(eps > 0.0 && eps < delta)) throw ConfigError("need 0 < eps < delta");
  if (delta > space.diameter()) throw ConfigError("delta exceeds the space diameter");
  if (!(tol >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (tail_window > horizon) throw ConfigError("tail window exceeds the horizon");
  if (max_period < 1 || repetitions < 1) throw ConfigError("max period and repetitions must be positive");
  if (space.kind() == SpaceKind::BinarySeq && !(1.0 / eps < space.word_length()))
    throw ConfigError("binary words of length " + std::to_string(space.word_length()) +
                      " cannot resolve eps = " + std::to_string(eps));
}

void BoundsConfig::validate() const {
  if (k_max < 1 || n_max < 1 || profile_k_max < 1) throw ConfigError("bound ranges must be positive");
  if (sample_points < 1) throw ConfigError("bound sample count must be positive");
}

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names{
      "equicontinuity", "minimality",     "transitivity",   "weak-mixing",
      "topological-mixing", "sensitivity", "cofinite-sensitivity", "periodic-points",
      "dense-periodicity", "proximal-cells", "proximal-pairs", "li-yorke-sensitivity"};
  return names;
}

bool is_property(const std::string& name) {
  const auto& n = property_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void ScenarioSpec::validate() const {
  check.validate(space);
  bounds.validate();
  for (const auto& p : properties)
    if (!is_property(p)) throw ConfigError("unknown property '" + p + "'");
  if (output.format != "json" && output.format != "csv" && output.format != "plotdata")
    throw ConfigError("unknown output format '" + output.format + "'");
}

nlohmann::json check_config_to_json(const CheckConfig& c) {
  return {{"horizon", c.horizon},         {"grid", c.grid},
          {"ball_count", c.ball_count},   {"eps", c.eps},
          {"delta", c.delta},             {"tol", c.tol},
          {"tail_window", c.tail_window}, {"max_period", c.max_period},
          {"repetitions", c.repetitions}, {"sup_grid", c.sup_grid},
          {"nearness_criteria", c.nearness_criteria}};
}

CheckConfig check_config_from_json(const nlohmann::json& j, CheckConfig c) {
  if (!j.is_object()) throw ConfigError("'check' must be an object");
  static const std::vector<std::string> known{"horizon", "grid", "ball_count", "eps", "delta", "tol",
                                              "tail_window", "max_period", "repetitions", "sup_grid",
                                              "nearness_criteria"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown check field '" + key + "'");
  try {
    c.horizon = j.value("horizon", c.horizon);
    c.grid = j.value("grid", c.grid);
    c.ball_count = j.value("ball_count", c.ball_count);
    c.eps = j.value("eps", c.eps);
    c.delta = j.value("delta", c.delta);
    c.tol = j.value("tol", c.tol);
    c.tail_window = j.value("tail_window", std::min(c.tail_window, c.horizon));
    c.max_period = j.value("max_period", c.max_period);
    c.repetitions = j.value("repetitions", c.repetitions);
    c.sup_grid = j.value("sup_grid", c.sup_grid);
    c.nearness_criteria = j.value("nearness_criteria", c.nearness_criteria);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed check section: ") + e.what());
  }
  return c;
}

ScenarioSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  ScenarioSpec s;
  try {
    s.id = j.value("id", std::string());
    if (!j.contains("space")) throw ConfigError("scenario config needs a 'space'");
    s.space = space_from_json(j.at("space"));
    if (!j.contains("family")) throw ConfigError("scenario config needs a 'family'");
    s.family = j.at("family");
    if (j.contains("check")) s.check = check_config_from_json(j.at("check"));
    if (j.contains("bounds")) {
      const auto& b = j.at("bounds");
      s.bounds.k_max = b.value("k_max", s.bounds.k_max);
      s.bounds.n_max = b.value("n_max", s.bounds.n_max);
      s.bounds.profile_k_max = b.value("profile_k_max", s.bounds.profile_k_max);
      s.bounds.sample_points = b.value("sample_points", s.bounds.sample_points);
    }
    if (j.contains("properties")) {
      s.properties = j.at("properties").get<std::vector<std::string>>();
    } else {
      s.properties = property_names();
    }
    if (j.contains("output")) {
      s.output.dir = j.at("output").value("dir", std::string());
      s.output.format = j.at("output").value("format", s.output.format);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  s.validate();
  return s;
}

nlohmann::json spec_to_json(const ScenarioSpec& s) {
  return {{"id", s.id},
          {"space", space_to_json(s.space)},
          {"family", s.family},
          {"check", check_config_to_json(s.check)},
          {"bounds",
           {{"k_max", s.bounds.k_max},
            {"n_max", s.bounds.n_max},
            {"profile_k_max", s.bounds.profile_k_max},
            {"sample_points", s.bounds.sample_points}}},
          {"properties", s.properties},
          {"output", {{"dir", s.output.dir}, {"format", s.output.format}}}};
}

std::string config_hash(const ScenarioSpec& s) {
  auto canonical = spec_to_json(s);
  canonical.erase("output");  // where results go does not change them
  const std::string text = canonical.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ucdyn
