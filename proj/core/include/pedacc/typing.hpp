#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pedacc/derivation.hpp"

namespace pedacc {

/// A known inhabitant of a product. When the checker has to form a product
/// matching `product` (all free names of `product` act as pattern
/// variables), the instantiated `inhabitant` is offered as a witness.
struct Hint {
  Term product;
  Term inhabitant;
};

/// Proposes an inhabitant of `goal` in `env`, or nothing. Proposals are
/// never trusted: the checker re-checks them.
using SearchHook = std::function<std::optional<Term>(const Environment& env, const Term& goal, unsigned depth)>;

/// The standard proposer: a depth-bounded, deterministic goal-directed search
/// over the hypotheses of `env` (newest first).
std::optional<Term> propose_inhabitant(const Environment& env, const Term& goal, unsigned depth,
                                       Fuel fuel = kDefaultFuel);

struct CheckOptions {
  Fuel fuel = kDefaultFuel;
  /// Budget handed to the search; each nested product formation that needs
  /// search gets one less. Zero disables search.
  unsigned search_depth = 8;
  /// Replaces propose_inhabitant when set.
  SearchHook search;
  std::vector<Hint> hints;
  /// NaiveP only: the motivation of the environment.
  std::optional<Motivation> motivation;
  /// Accept generated (`#`) hypothesis names, for environments read back
  /// from derivations.
  bool allow_reserved = false;
};

struct Typed {
  Term type;     // type as built by the rules (the conclusion's type)
  Term type_nf;  // its normal form
  DerivationPtr derivation;
};

struct Checked {
  DerivationPtr derivation;  // env |- t : expected
  DerivationPtr type_sort;   // env |- expected : k; null when expected is Type
};

Result<DerivationPtr> check_wf(const Environment& env, Mode mode, const CheckOptions& opts = {});

Result<Typed> infer_type(const Environment& env, const Term& t, Mode mode, const CheckOptions& opts = {});

Result<Checked> check_type(const Environment& env, const Term& t, const Term& expected, Mode mode,
                           const CheckOptions& opts = {});

/// Cascade judgments `|- t_i : A_i[x_1..x_(i-1) <- t_1..t_(i-1)]`, each
/// checked in `mode` in the empty environment.
Result<std::vector<DerivationPtr>> check_motivated_env(const Environment& env, const Motivation& sigma, Mode mode,
                                                       const CheckOptions& opts = {});

/// Sort derivation for the type of an already typed term, reusing the
/// term's own derivation where the rules allow it.
Result<DerivationPtr> type_sort_of(const DerivationPtr& d, const CheckOptions& opts = {});

/// Every prod_r node of `d` as a reusable hint.
std::vector<Hint> collect_hints(const DerivationPtr& d);

struct NaivePExample {
  std::string label;
  Environment env;
  Term term;
  Term type;
  Motivation sigma;
};

/// The three judgments of the naive motivated system that CC rejects.
std::vector<NaivePExample> naive_p_examples();

}  // namespace pedacc
