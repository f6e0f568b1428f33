#pragma once

#include <vector>

#include "json.hpp"
#include "pedacc/derivation.hpp"

namespace pedacc::surface {

/// Node table of one or more derivations; see docs/derivation-format.md.
nlohmann::json derivation_json(const std::vector<DerivationPtr>& roots);

nlohmann::json diagnostic_json(const Diagnostic& d);

/// Node and environment counts of a parsed node table, after checking that
/// every reference points to an earlier entry.
struct TableShape {
  std::size_t nodes = 0;
  std::size_t envs = 0;
};
TableShape validate_derivation_json(const nlohmann::json& j);

}  // namespace pedacc::surface
