#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pedacc/typing.hpp"

namespace pedacc {

/// Raised when an extraction receives a derivation outside its
/// precondition, or reaches a case the underlying argument rules out.
class MotivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Inhabited {
  Term term;
  DerivationPtr derivation;  // |- term : goal
};

struct MotivationResult {
  Motivation motivation;
  std::vector<DerivationPtr> cascade;
};

/// One recursive call of inhabit_applied: the goal `B w1 .. wn` and the
/// height of the derivation recursed on. `parent` indexes the caller's
/// step, or is -1 for the outermost call.
struct MeasureStep {
  Term goal;
  std::uint32_t height;
  int parent;
};

struct MotivationOptions {
  CheckOptions check;
  std::vector<MeasureStep>* trace = nullptr;
};

/// From `env |- forall x:A. B : T` built in restricted mode, reads the
/// product's witness and wraps it into an abstraction.
Inhabited inhabit_from_prod_derivation(const DerivationPtr& d);

/// From `env |- B : Type`: the term fun xs : As => top for B = forall xs : As, Prop.
Inhabited inhabit_type_sorted(const DerivationPtr& d, const MotivationOptions& opts = {});

/// From `|- B : forall xs : As, Prop` with B closed and closed `args`
/// fitting the telescope: a closed inhabitant of `B args`. Recurses on the
/// derivation as the abs / app / conv case analysis prescribes.
Inhabited inhabit_applied(const DerivationPtr& d, const std::vector<Term>& args, const MotivationOptions& opts = {});

/// From `|- B : k` with B closed: an inhabitant of B.
Inhabited inhabit_closed(const DerivationPtr& d, const MotivationOptions& opts = {});

/// Closed witnesses for every hypothesis of a well-formed restricted-mode
/// environment, with the cascade derivations.
MotivationResult motivate_env(const DerivationPtr& wf, const MotivationOptions& opts = {});

/// Motivates the environment of `env |- u : B` and instantiates the judgment.
std::pair<MotivationResult, DerivationPtr> motivate_judgment(const DerivationPtr& d,
                                                             const MotivationOptions& opts = {});

/// From `|- f : forall x:A. B`: a closed inhabitant of A.
Inhabited usefulness_argument(const DerivationPtr& d, const MotivationOptions& opts = {});

/// Bounded search, checked by the restricted-mode kernel.
std::optional<Inhabited> inhabit_search(const Environment& env, const Term& goal, unsigned depth,
                                        const CheckOptions& opts = {});

bool check_poincare(const Environment& env, const Motivation& candidate, const CheckOptions& opts = {});

}  // namespace pedacc
