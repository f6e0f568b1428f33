#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pedacc/environment.hpp"
#include "pedacc/reduction.hpp"
#include "pedacc/term.hpp"

namespace pedacc {

enum class Mode : std::uint8_t { CC, CCr, NaiveP };

/// One tag per inference rule. PEnv is the motivated-environment node that
/// the naive system uses in place of env1/env2: its premises are the cascade
/// judgments of the motivation.
enum class Rule : std::uint8_t { Env1, Env2, Ax, Var, Abs, Prod, App, Conv, ProdR, PAx, PVar, PEnv };

std::string to_string(Mode m);
std::string to_string(Rule r);
std::optional<Mode> parse_mode(const std::string& s);
std::optional<Rule> parse_rule(const std::string& s);

using EnvPtr = std::shared_ptr<const Environment>;
EnvPtr make_env(Environment env);

/// Substitution from environment names to closed witnesses, in order.
struct Motivation {
  std::vector<std::pair<std::string, Term>> bindings;

  std::size_t size() const { return bindings.size(); }
  /// Applies the whole motivation to `t` at once.
  Term apply(const Term& t) const;
  /// Applies only the first `n` bindings.
  Term apply_prefix(const Term& t, std::size_t n) const;
  friend bool operator==(const Motivation& a, const Motivation& b) { return a.bindings == b.bindings; }
};

struct Judgment {
  enum class Kind : std::uint8_t { WellFormed, HasType };
  Kind kind = Kind::WellFormed;
  EnvPtr env;
  std::optional<Term> term;
  std::optional<Term> type;

  static Judgment well_formed(EnvPtr env);
  static Judgment has_type(EnvPtr env, Term term, Term type);

  bool is_wf() const { return kind == Kind::WellFormed; }
  const Term& subject() const { return *term; }
  const Term& ty() const { return *type; }
};

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

/// A rule application. Derivations form a DAG: identical sub-derivations
/// (typically environment well-formedness) are shared, not copied.
struct Derivation {
  Rule rule;
  Mode mode;
  Judgment conclusion;
  std::vector<DerivationPtr> premises;
  std::optional<Term> witness;           // prod_r: inhabitant of the body
  std::optional<Motivation> motivation;  // p-env / p-ax / p-var
  std::uint32_t height = 1;

  const Environment& env() const { return *conclusion.env; }
};

DerivationPtr make_derivation(Rule rule, Mode mode, Judgment conclusion, std::vector<DerivationPtr> premises,
                              std::optional<Term> witness = std::nullopt,
                              std::optional<Motivation> motivation = std::nullopt);

struct SourcePos {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t offset = 0;
};

/// Structured failure report. `rule` is the rule whose side condition
/// failed; `where` locates it (an environment entry and/or a subterm path).
struct Diagnostic {
  std::string rule;
  std::string where;
  std::optional<Term> expected;
  std::optional<Term> found;
  std::string message;
  std::optional<SourcePos> pos;
};

class KernelError : public std::runtime_error {
 public:
  explicit KernelError(Diagnostic d) : std::runtime_error(d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

template <class T>
using Result = std::variant<T, Diagnostic>;

template <class T>
bool ok(const Result<T>& r) {
  return r.index() == 0;
}
template <class T>
const T& value(const Result<T>& r) {
  return std::get<0>(r);
}
template <class T>
const Diagnostic& error(const Result<T>& r) {
  return std::get<1>(r);
}

// ---------------------------------------------------------------------------
// Traversal helpers.

/// Calls `f` once per distinct node, premises before conclusions, premises
/// in order.
void for_each_node(const DerivationPtr& root, const std::function<void(const DerivationPtr&)>& f);
std::size_t count_nodes(const DerivationPtr& root);

/// The well-formedness derivation of the root judgment's own environment.
DerivationPtr wf_of(const DerivationPtr& d);

/// For a derivation of `wf x1:A1,..,xn:An`, the sort derivations
/// `x1:A1,..,x(i-1):A(i-1) |- Ai : k` in order.
std::vector<DerivationPtr> entry_sort_derivations(const DerivationPtr& wf);

/// Checks that `d`'s premises instantiate its rule schema. Returns an error
/// message, or nothing when the node is a correct rule application. Only the
/// node itself is inspected, not its premises.
std::optional<std::string> verify_node(const Derivation& d, Fuel fuel = kDefaultFuel);
/// verify_node over every node of the DAG.
std::optional<std::string> verify_derivation(const DerivationPtr& root, Fuel fuel = kDefaultFuel);

/// Rule script of a derivation: post-order, shared nodes once, with a pair of
/// var nodes over the same environment merged into "var" and an abs node
/// followed by the prod_r that types its type merged into "abs+prod".
std::vector<std::string> rule_script(const std::vector<DerivationPtr>& roots);

}  // namespace pedacc
