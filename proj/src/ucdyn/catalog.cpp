#include "ucdyn/catalog.hpp"

#include "ucdyn/error.hpp"

namespace ucdyn {

namespace {

CatalogEntry entry(const char* id, const char* summary, nlohmann::json spec) {
  spec["id"] = id;
  return CatalogEntry{id, summary, spec_from_json(spec)};
}

nlohmann::json check(std::size_t horizon, std::size_t grid, double eps, double delta, std::size_t window,
                     std::size_t max_period) {
  return {{"horizon", horizon}, {"grid", grid},         {"eps", eps},          {"delta", delta},
          {"tail_window", window}, {"max_period", max_period}, {"repetitions", 3}};
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> c;
  c.push_back(entry("eqex",
                    "golden rotation with alternating 2/(n+1), -2/n kicks: non-summable yet equicontinuous and minimal",
                    {{"space", {{"kind", "circle"}}},
                     {"family", {{"builtin", "alternating-rotation"}}},
                     {"check", check(5000, 20, 0.05, 0.5, 2000, 12)}}));
  c.push_back(entry("odometer-deletion", "odometer after deleting coordinate n, on 24-coordinate binary words",
                    {{"space", {{"kind", "binary"}, {"word_length", 24}}},
                     {"family", {{"builtin", "odometer-deletion"}, {"params", {{"word_length", 24}}}}},
                     {"check", check(200, 6, 0.25, 0.5, 100, 16)}}));
  c.push_back(entry("doubling", "angle doubling with 1/n offsets: neither commuting nor summable",
                    {{"space", {{"kind", "circle"}}},
                     {"family", {{"builtin", "perturbed-doubling"}}},
                     {"check", check(500, 20, 0.1, 0.5, 200, 12)}}));
  c.push_back(entry("sens", "tent map preceded by one plateau map: f sensitive, the family is not",
                    {{"space", {{"kind", "interval"}}},
                     {"family", {{"builtin", "plateau-tent"}}},
                     {"check", check(500, 21, 0.1, 0.25, 200, 12)}}));
  c.push_back(entry("inverse-square", "rotations by 1/n^2 converging to the identity: no periodic points",
                    {{"space", {{"kind", "circle"}}},
                     {"family", {{"builtin", "inverse-square-rotation"}}},
                     {"check", check(500, 20, 0.1, 0.5, 200, 12)}}));
  return c;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  std::string known;
  for (const auto& e : catalog()) known += (known.empty() ? "" : ", ") + e.id;
  throw UnknownIdError("unknown scenario id '" + id + "' (known: " + known + ")");
}

}  // namespace ucdyn
