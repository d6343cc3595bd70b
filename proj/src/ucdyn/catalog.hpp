#pragma once

#include <string>
#include <vector>

#include "ucdyn/config.hpp"

namespace ucdyn {

struct CatalogEntry {
  std::string id;
  std::string summary;
  ScenarioSpec spec;  // pinned parameters
};

/// The five built-in scenarios, in listing order.
const std::vector<CatalogEntry>& catalog();

/// Throws UnknownIdError.
const CatalogEntry& catalog_entry(const std::string& id);

}  // namespace ucdyn
