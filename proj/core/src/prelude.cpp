#include "pedacc/prelude.hpp"

#include <atomic>
#include <stdexcept>

#include "pedacc/typing.hpp"

namespace pedacc::prelude {

namespace {

std::string placeholder() {
  static std::atomic<std::uint64_t> counter{0};
  return std::string(1, kReservedPrefix) + "p" + std::to_string(counter++);
}

}  // namespace

Term lam(const std::string& hint, const Term& domain, const std::function<Term(const Term&)>& body) {
  std::string x = placeholder();
  return Term::abs(domain, close_binder(body(Term::free(x)), x), hint);
}

Term pi(const std::string& hint, const Term& domain, const std::function<Term(const Term&)>& body) {
  std::string x = placeholder();
  return Term::prod(domain, close_binder(body(Term::free(x)), x), hint);
}

Term arrow(const Term& a, const Term& b) { return Term::prod(a, lift(b, 0, 1), "_"); }

Term apps(const Term& f, const std::vector<Term>& args) { return mk_apps(f, args); }

Term top() {
  static const Term t = pi("A", Term::prop(), [](const Term& a) { return arrow(a, a); });
  return t;
}

Term id() {
  static const Term t = lam("A", Term::prop(), [](const Term& a) { return lam("x", a, [](const Term& x) { return x; }); });
  return t;
}

Term bot() {
  static const Term t = pi("A", Term::prop(), [](const Term& a) { return a; });
  return t;
}

Term eq(const Term& type, const Term& x, const Term& y) {
  return pi("Q", arrow(type, Term::prop()), [&](const Term& q) { return arrow(Term::app(q, x), Term::app(q, y)); });
}

Term nat() {
  static const Term t =
      pi("A", Term::prop(), [](const Term& a) { return arrow(a, arrow(arrow(a, a), a)); });
  return t;
}

Term zero() {
  static const Term t = lam("A", Term::prop(), [](const Term& a) {
    return lam("x", a, [&](const Term& x) { return lam("f", arrow(a, a), [&](const Term&) { return x; }); });
  });
  return t;
}

Term succ(const Term& n) {
  return lam("A", Term::prop(), [&](const Term& a) {
    return lam("x", a, [&](const Term& x) {
      return lam("f", arrow(a, a), [&](const Term& f) { return Term::app(f, apps(n, {a, x, f})); });
    });
  });
}

Term succ_fn() {
  static const Term t = lam("n", nat(), [](const Term& n) { return succ(n); });
  return t;
}

Term numeral(std::uint64_t k) {
  return lam("A", Term::prop(), [&](const Term& a) {
    return lam("x", a, [&](const Term& x) {
      return lam("f", arrow(a, a), [&](const Term& f) {
        Term body = x;
        for (std::uint64_t i = 0; i < k; ++i) body = Term::app(f, body);
        return body;
      });
    });
  });
}

std::optional<std::uint64_t> to_natural(const Term& t, Fuel fuel) {
  Term n = normalize(t, fuel);
  if (!n.is(TermKind::Abs) || !n.domain().is_sort(Sort::Prop)) return std::nullopt;
  const Term& l1 = n.body();
  if (!l1.is(TermKind::Abs) || !(l1.domain() == Term::bound(0))) return std::nullopt;
  const Term& l2 = l1.body();
  if (!l2.is(TermKind::Abs) || !(l2.domain() == Term::prod(Term::bound(1), Term::bound(2)))) return std::nullopt;
  std::uint64_t k = 0;
  const Term* cur = &l2.body();
  while (cur->is(TermKind::App) && cur->fun() == Term::bound(0)) {
    ++k;
    cur = &cur->arg();
  }
  if (!(*cur == Term::bound(1))) return std::nullopt;
  return k;
}

Term iter(const Term& type, const Term& n, const Term& base, const Step& step) {
  return apps(n, {type, base, lam("y", type, step)});
}

// ---------------------------------------------------------------------------

SimpleType SimpleType::nat() { return SimpleType(); }

SimpleType SimpleType::arrow(SimpleType dom, SimpleType cod) {
  SimpleType t;
  t.node_ = std::make_shared<const std::pair<SimpleType, SimpleType>>(std::move(dom), std::move(cod));
  return t;
}

std::string SimpleType::to_string() const {
  if (is_nat()) return "Nat";
  std::string d = dom().to_string();
  if (!dom().is_nat()) d = "(" + d + ")";
  return d + " -> " + cod().to_string();
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.is_nat() || b.is_nat()) return a.is_nat() == b.is_nat();
  return a.dom() == b.dom() && a.cod() == b.cod();
}

Term to_term(const SimpleType& t) {
  if (t.is_nat()) return nat();
  return arrow(to_term(t.dom()), to_term(t.cod()));
}

Term inhabitant(const SimpleType& t) {
  if (t.is_nat()) return zero();
  Term b = inhabitant(t.cod());
  return lam("x", to_term(t.dom()), [&](const Term&) { return b; });
}

std::pair<Term, DerivationPtr> inhabit_simple_type(const SimpleType& t) {
  Term a = inhabitant(t);
  auto r = check_type(Environment(), a, to_term(t), Mode::CCr);
  if (!ok(r)) throw std::logic_error("simple type inhabitant rejected: " + error(r).message);
  return {a, value(r).derivation};
}

Term enc(const SimpleType& t) {
  if (t.is_nat()) return lam("x", nat(), [](const Term& x) { return x; });
  Term inner = enc(t.cod());
  Term dom = to_term(t.dom());
  return lam("x", nat(), [&](const Term& x) { return lam("z", dom, [&](const Term&) { return Term::app(inner, x); }); });
}

Term dec(const SimpleType& t) {
  if (t.is_nat()) return lam("x", nat(), [](const Term& x) { return x; });
  Term inner = dec(t.cod());
  Term a = inhabitant(t.dom());
  return lam("f", to_term(t), [&](const Term& f) { return Term::app(inner, Term::app(f, a)); });
}

Term pair_type(const SimpleType& t) {
  Term tt = to_term(t);
  return arrow(arrow(tt, arrow(tt, tt)), tt);
}

Term pair(const SimpleType& t, const Term& n, const Term& v) {
  Term tt = to_term(t);
  return lam("f", arrow(tt, arrow(tt, tt)), [&](const Term& f) { return apps(f, {Term::app(enc(t), n), v}); });
}

namespace {

Term selector(const SimpleType& t, bool first) {
  Term tt = to_term(t);
  return lam("x", tt, [&](const Term& x) { return lam("y", tt, [&](const Term& y) { return first ? x : y; }); });
}

}  // namespace

Term proj1(const SimpleType& t, const Term& c) { return Term::app(dec(t), Term::app(c, selector(t, true))); }

Term proj2(const SimpleType& t, const Term& c) { return Term::app(c, selector(t, false)); }

Term rec(const SimpleType& t, const Term& n, const Term& base, const Step2& step) {
  Term it = iter(pair_type(t), n, pair(t, zero(), base), [&](const Term& z) {
    return pair(t, succ(proj1(t, z)), step(proj1(t, z), proj2(t, z)));
  });
  return proj2(t, it);
}

Term plus(const Term& m, const Term& n) {
  return iter(nat(), m, n, [](const Term& y) { return succ(y); });
}

Term times(const Term& m, const Term& n) {
  return iter(nat(), m, zero(), [&](const Term& y) { return plus(n, y); });
}

Term pred(const Term& n) {
  return rec(SimpleType::nat(), n, zero(), [](const Term& x, const Term&) { return x; });
}

Term fact(const Term& n) {
  return rec(SimpleType::nat(), n, numeral(1), [](const Term& x, const Term& y) { return times(succ(x), y); });
}

// ---------------------------------------------------------------------------

namespace {

Term fn2(const std::function<Term(const Term&, const Term&)>& body) {
  return lam("m", nat(), [&](const Term& m) { return lam("n", nat(), [&](const Term& n) { return body(m, n); }); });
}

}  // namespace

Term iter_fn() {
  static const Term t = lam("T", Term::prop(), [](const Term& ty) {
    return lam("n", nat(), [&](const Term& n) {
      return lam("b", ty, [&](const Term& b) {
        return lam("s", arrow(ty, ty), [&](const Term& s) {
          return iter(ty, n, b, [&](const Term& y) { return Term::app(s, y); });
        });
      });
    });
  });
  return t;
}

Term rec_fn() {
  static const Term t = lam("n", nat(), [](const Term& n) {
    return lam("b", nat(), [&](const Term& b) {
      return lam("s", arrow(nat(), arrow(nat(), nat())), [&](const Term& s) {
        return rec(SimpleType::nat(), n, b, [&](const Term& x, const Term& y) { return apps(s, {x, y}); });
      });
    });
  });
  return t;
}

Term pair_fn() {
  static const Term t = fn2([](const Term& m, const Term& n) { return pair(SimpleType::nat(), m, n); });
  return t;
}

Term fst_fn() {
  static const Term t =
      lam("c", pair_type(SimpleType::nat()), [](const Term& c) { return proj1(SimpleType::nat(), c); });
  return t;
}

Term snd_fn() {
  static const Term t =
      lam("c", pair_type(SimpleType::nat()), [](const Term& c) { return proj2(SimpleType::nat(), c); });
  return t;
}

Term plus_fn() {
  static const Term t = fn2([](const Term& m, const Term& n) { return plus(m, n); });
  return t;
}

Term times_fn() {
  static const Term t = fn2([](const Term& m, const Term& n) { return times(m, n); });
  return t;
}

Term pred_fn() {
  static const Term t = lam("n", nat(), [](const Term& n) { return pred(n); });
  return t;
}

Term fact_fn() {
  static const Term t = lam("n", nat(), [](const Term& n) { return fact(n); });
  return t;
}

const std::vector<std::pair<std::string, Term>>& builtins() {
  static const std::vector<std::pair<std::string, Term>> table{
      {"Nat", nat()},       {"zero", zero()},   {"succ", succ_fn()},   {"iter", iter_fn()}, {"rec", rec_fn()},
      {"pair", pair_fn()},  {"fst", fst_fn()},  {"snd", snd_fn()},     {"top", top()},      {"id", id()},
      {"bot", bot()},       {"plus", plus_fn()}, {"times", times_fn()}, {"pred", pred_fn()}, {"fact", fact_fn()},
  };
  return table;
}

}  // namespace pedacc::prelude
