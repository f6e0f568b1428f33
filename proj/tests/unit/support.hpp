#pragma once

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "pedacc/surface.hpp"
#include "pedacc/typing.hpp"

namespace testing {

using namespace pedacc;

// Surface syntax with the prelude in scope; unknown names stay free.
inline Term tm(const std::string& src) {
  auto r = surface::parse_expr(src);
  REQUIRE_MESSAGE(ok(r), src);
  return surface::elaborate_expr(*value(r), true);
}

inline Environment env(std::vector<std::pair<std::string, std::string>> entries) {
  Environment e;
  for (auto& [n, t] : entries) e.push_back({n, tm(t), std::nullopt});
  return e;
}

inline std::string show(const Term& t) { return surface::print(t); }

inline std::string source_path(const std::string& rel) { return std::string(PEDACC_SOURCE_DIR) + "/" + rel; }

// Untyped term with well-scoped indices over the given free names.
inline Term random_term(std::mt19937_64& rng, unsigned depth, unsigned binders,
                        const std::vector<std::string>& names) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 5);
  int k = pick(rng);
  switch (k) {
    case 0:
      return Term::prop();
    case 1:
      if (!names.empty()) return Term::free(names[rng() % names.size()]);
      [[fallthrough]];
    case 2:
      if (binders > 0) return Term::bound(static_cast<std::uint32_t>(rng() % binders));
      return Term::prop();
    case 3:
      return Term::app(random_term(rng, depth - 1, binders, names), random_term(rng, depth - 1, binders, names));
    case 4:
      return Term::abs(random_term(rng, depth - 1, binders, names), random_term(rng, depth - 1, binders + 1, names),
                       "v");
    default:
      return Term::prod(random_term(rng, depth - 1, binders, names), random_term(rng, depth - 1, binders + 1, names),
                        "w");
  }
}

}  // namespace testing
