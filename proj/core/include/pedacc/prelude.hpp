#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pedacc/derivation.hpp"
#include "pedacc/term.hpp"

/// System T on Church numerals, written as plain closed terms.
namespace pedacc::prelude {

// Binder builders. The body callback receives the bound variable as a
// placeholder term; the result is closed over it.
Term lam(const std::string& hint, const Term& domain, const std::function<Term(const Term&)>& body);
Term pi(const std::string& hint, const Term& domain, const std::function<Term(const Term&)>& body);
Term arrow(const Term& a, const Term& b);
Term apps(const Term& f, const std::vector<Term>& args);

Term top();   // forall A : Prop, A -> A
Term id();    // fun A : Prop => fun x : A => x
Term bot();   // forall A : Prop, A
Term eq(const Term& type, const Term& x, const Term& y);  // Leibniz equality

Term nat();
Term zero();
Term succ(const Term& n);  // S(n), unreduced
Term succ_fn();            // fun n : Nat => S(n)
/// Normal form of the k-fold successor of zero.
Term numeral(std::uint64_t k);
std::optional<std::uint64_t> to_natural(const Term& t, Fuel fuel = kDefaultFuel);

using Step = std::function<Term(const Term&)>;
using Step2 = std::function<Term(const Term&, const Term&)>;

/// it_T(n, b, (y)step) := n T b (fun y : T => step)
Term iter(const Term& type, const Term& n, const Term& base, const Step& step);

class SimpleType {
 public:
  static SimpleType nat();
  static SimpleType arrow(SimpleType dom, SimpleType cod);

  bool is_nat() const { return !node_; }
  const SimpleType& dom() const { return node_->first; }
  const SimpleType& cod() const { return node_->second; }
  std::string to_string() const;
  friend bool operator==(const SimpleType& a, const SimpleType& b);

 private:
  std::shared_ptr<const std::pair<SimpleType, SimpleType>> node_;
};

Term to_term(const SimpleType& t);
/// Canonical closed inhabitant: zero for Nat, constant functions above.
Term inhabitant(const SimpleType& t);
/// The inhabitant together with its restricted-mode derivation.
std::pair<Term, DerivationPtr> inhabit_simple_type(const SimpleType& t);

Term enc(const SimpleType& t);  // Nat -> T
Term dec(const SimpleType& t);  // T -> Nat

Term pair_type(const SimpleType& t);  // (T -> T -> T) -> T
Term pair(const SimpleType& t, const Term& n, const Term& v);
Term proj1(const SimpleType& t, const Term& c);
Term proj2(const SimpleType& t, const Term& c);

/// Recursor built from the iterator over Nat x T.
Term rec(const SimpleType& t, const Term& n, const Term& base, const Step2& step);

Term plus(const Term& m, const Term& n);
Term times(const Term& m, const Term& n);
Term pred(const Term& n);
Term fact(const Term& n);

/// Closed function versions, as bound in the surface language.
Term iter_fn();  // forall T : Prop, Nat -> T -> (T -> T) -> T
Term rec_fn();   // Nat -> Nat -> (Nat -> Nat -> Nat) -> Nat
Term pair_fn();  // Nat -> Nat -> Nat x Nat
Term fst_fn();
Term snd_fn();
Term plus_fn();
Term times_fn();
Term pred_fn();
Term fact_fn();

/// Surface names of the prelude, in a fixed order.
const std::vector<std::pair<std::string, Term>>& builtins();

}  // namespace pedacc::prelude
