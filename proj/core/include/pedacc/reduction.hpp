#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pedacc/term.hpp"

namespace pedacc {

/// Upper bound on beta contractions for one reduction call.
struct Fuel {
  std::uint64_t max_steps = 100000;
};

inline constexpr Fuel kDefaultFuel{};

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::uint64_t steps);
  std::uint64_t steps() const { return steps_; }

 private:
  std::uint64_t steps_;
};

class BoundExceeded : public std::runtime_error {
 public:
  explicit BoundExceeded(std::uint64_t bound);
};

enum class Strategy { LeftmostOutermost, RightmostInnermost };

/// One leftmost-outermost contraction, or nothing if `t` is normal.
std::optional<Term> beta_step(const Term& t);
std::optional<Term> beta_step(const Term& t, Strategy strategy);

/// Every term reachable from `t` by contracting exactly one redex.
std::vector<Term> one_step_reducts(const Term& t);

bool is_normal(const Term& t);

/// Beta-normal form. Internally this evaluates with shared, lazily forced
/// closures; every closure application counts as one step against `fuel`.
Term normalize(const Term& t, Fuel fuel = kDefaultFuel);

/// Normal form by iterating `beta_step` with the given strategy.
Term normalize_stepwise(const Term& t, Strategy strategy, Fuel fuel = kDefaultFuel);

/// Weak-head normal form: contracts head redexes only.
Term whnf(const Term& t, Fuel fuel = kDefaultFuel);

/// Beta-convertibility, decided by comparing normal forms.
bool convertible(const Term& a, const Term& b, Fuel fuel = kDefaultFuel);

/// Length of the longest reduction path from `t` to its normal form.
/// Exponential; throws BoundExceeded when the length exceeds `bound`.
std::uint64_t longest_reduction_length(const Term& t, std::uint64_t bound);

}  // namespace pedacc
