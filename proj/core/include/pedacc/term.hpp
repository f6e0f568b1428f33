#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pedacc {

enum class Sort : std::uint8_t { Prop, Type };

enum class TermKind : std::uint8_t { Sort, Bound, Free, App, Abs, Prod };

struct TermNode;

/// Immutable term of the calculus of constructions.
///
/// Bound variables are De Bruijn indices and free variables are names, so
/// structural equality (`operator==`) is the syntactic identity of terms and
/// no alpha-conversion exists. Binders keep a name hint that is used only for
/// printing and fresh-name generation; it never takes part in equality.
///
/// Nodes are shared between terms. Every operation is a pure function.
class Term {
 public:
  static Term sort(Sort s);
  static Term prop();
  static Term type();
  static Term bound(std::uint32_t index);
  static Term free(std::string name);
  static Term app(Term fun, Term arg);
  static Term abs(Term domain, Term body, std::string hint = "x");
  static Term prod(Term domain, Term body, std::string hint = "x");

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }
  bool is_sort(Sort s) const;

  Sort sort_value() const;
  std::uint32_t index() const;
  const std::string& name() const;
  /// Binder name hint (Abs/Prod only).
  const std::string& hint() const { return name(); }

  const Term& fun() const;
  const Term& arg() const;
  const Term& domain() const { return fun(); }
  const Term& body() const { return arg(); }

  std::size_t hash() const;
  std::size_t size() const;
  /// One more than the largest loose bound index; 0 for locally closed terms.
  std::uint32_t loose_bound() const;
  bool has_free() const;
  bool mentions_type() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  static Term make(TermNode node);

  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind = TermKind::Sort;
  Sort sort = Sort::Prop;
  std::uint32_t index = 0;
  std::string name;  // free-variable name, or binder hint
  std::optional<Term> a;
  std::optional<Term> b;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::uint32_t loose = 0;
  bool has_free = false;
  bool mentions_type = false;
};

inline TermKind Term::kind() const { return node_->kind; }
inline bool Term::is_sort(Sort s) const { return node_->kind == TermKind::Sort && node_->sort == s; }
inline Sort Term::sort_value() const { return node_->sort; }
inline std::uint32_t Term::index() const { return node_->index; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::fun() const { return *node_->a; }
inline const Term& Term::arg() const { return *node_->b; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::size_t Term::size() const { return node_->size; }
inline std::uint32_t Term::loose_bound() const { return node_->loose; }
inline bool Term::has_free() const { return node_->has_free; }
inline bool Term::mentions_type() const { return node_->mentions_type; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Reference to a variable: a free name or a bound index.
class VarRef {
 public:
  static VarRef named(std::string name) { return VarRef(std::move(name)); }
  static VarRef bound(std::uint32_t index) { return VarRef(index); }

  bool is_named() const { return std::holds_alternative<std::string>(ref_); }
  const std::string& name() const { return std::get<std::string>(ref_); }
  std::uint32_t index() const { return std::get<std::uint32_t>(ref_); }

  friend bool operator==(const VarRef&, const VarRef&) = default;

 private:
  explicit VarRef(std::string n) : ref_(std::move(n)) {}
  explicit VarRef(std::uint32_t i) : ref_(i) {}
  std::variant<std::string, std::uint32_t> ref_;
};

/// Shifts bound indices >= cutoff by `amount`.
Term lift(const Term& t, std::uint32_t cutoff, std::uint32_t amount);

/// Shifts bound indices >= cutoff down by `amount`. Returns nothing if some
/// index in [cutoff, cutoff + amount) occurs.
std::optional<Term> lower(const Term& t, std::uint32_t cutoff, std::uint32_t amount);

/// Beta-instantiation: replaces index 0 of `body` by `value` and decrements
/// the other loose indices (the binder is consumed).
Term instantiate(const Term& body, const Term& value);

/// Replaces every occurrence of `target` by `u`, lifting `u` under binders.
/// For a bound target the index is relative to the root of `t`; no other
/// index is renumbered.
Term subst(const Term& t, const VarRef& target, const Term& u);

/// Replaces all targets in one pass; images are never rewritten again.
/// Throws std::invalid_argument when a variable is bound twice.
Term subst_simultaneous(const Term& t, const std::vector<std::pair<VarRef, Term>>& bindings);

std::set<std::string> free_vars(const Term& t);
bool occurs_free(const Term& t, const std::string& name);
bool is_closed(const Term& t);

/// Replaces the loose index 0 of a binder body by the free name `fresh`.
/// Throws std::invalid_argument if `fresh` already occurs free in `body`.
Term open_binder(const Term& body, const std::string& fresh);
/// Inverse of open_binder: abstracts `name` into index 0.
Term close_binder(const Term& t, const std::string& name);

/// True if the body of a binder refers to its own variable.
bool binder_used(const Term& body);

Term mk_apps(Term head, const std::vector<Term>& args);
/// Splits `f a1 .. an` into `f` and `[a1 .. an]`.
std::pair<Term, std::vector<Term>> spine(const Term& t);

/// First-order matching: binds the names in `vars` occurring in `pattern`
/// so that the result is identical to `target`. A variable only captures
/// subterms that do not mention binders of `target` crossed on the way.
bool match_pattern(const Term& pattern, const Term& target, const std::set<std::string>& vars,
                   std::unordered_map<std::string, Term>& theta);

/// Identifiers generated by the kernel start with this character, which the
/// surface syntax rejects.
inline constexpr char kReservedPrefix = '#';

}  // namespace pedacc
