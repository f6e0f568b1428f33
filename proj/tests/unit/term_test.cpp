#include "support.hpp"

#include "pedacc/prelude.hpp"

using namespace pedacc;
using testing::tm;

namespace {

Term B(std::uint32_t i) { return Term::bound(i); }
Term F(const std::string& n) { return Term::free(n); }

}  // namespace

TEST_SUITE("term") {
  TEST_CASE("lift shifts indices at or above the cutoff") {
    CHECK(lift(B(0), 0, 1) == B(1));
    CHECK(lift(Term::abs(Term::prop(), B(0)), 0, 3) == Term::abs(Term::prop(), B(0)));
    // 2 >= 1 moves to 4; 0 < 1 stays
    CHECK(lift(Term::app(B(2), B(0)), 1, 2) == Term::app(B(4), B(0)));
    // under a binder the cutoff moves with it
    CHECK(lift(Term::abs(B(0), B(1)), 0, 1) == Term::abs(B(1), B(2)));
  }

  TEST_CASE("lift by zero is the identity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      Term t = testing::random_term(rng, 5, 3, {"a", "b"});
      CHECK(lift(t, static_cast<std::uint32_t>(i % 4), 0) == t);
    }
  }

  TEST_CASE("subst") {
    Term top = prelude::top();
    CHECK(subst(B(0), VarRef::bound(0), top) == top);
    Term idA = Term::abs(F("A"), B(0));
    CHECK(subst(idA, VarRef::named("y"), F("u")) == idA);

    // forall Q : A -> Prop, Q x -> Q y   with x := zero
    auto leibniz = [](const Term& x) {
      Term qa = Term::prod(F("A"), Term::prop());
      // under Q the arrow's binder shifts Q to index 1
      Term body = Term::prod(Term::app(B(0), x), Term::app(B(1), F("y")));
      return Term::prod(qa, body, "Q");
    };
    CHECK(subst(leibniz(F("x")), VarRef::named("x"), prelude::zero()) == leibniz(prelude::zero()));
  }

  TEST_CASE("subst leaves terms without the variable alone") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      Term t = testing::random_term(rng, 5, 0, {"a", "b"});
      CHECK(subst(t, VarRef::named("c"), prelude::top()) == t);
    }
  }

  TEST_CASE("subst_simultaneous") {
    Term t = Term::app(F("x"), F("y"));
    CHECK(subst_simultaneous(t, {}) == t);
    CHECK(subst_simultaneous(t, {{VarRef::named("x"), F("y")}, {VarRef::named("y"), F("x")}}) ==
          Term::app(F("y"), F("x")));
    CHECK_THROWS_AS(subst_simultaneous(t, {{VarRef::named("x"), F("y")}, {VarRef::named("x"), F("z")}}),
                    std::invalid_argument);
  }

  TEST_CASE("simultaneous and iterated substitution agree on closed images") {
    std::mt19937_64 rng(99);
    const std::vector<std::string> xs{"x1", "x2", "x3"};
    const std::vector<Term> images{prelude::top(), prelude::zero(), prelude::id()};
    for (int i = 0; i < 5; ++i) {
      Term t = testing::random_term(rng, 6, 0, xs);
      std::vector<std::pair<VarRef, Term>> bs;
      Term seq = t;
      for (std::size_t k = 0; k < xs.size(); ++k) {
        bs.emplace_back(VarRef::named(xs[k]), images[k]);
        seq = subst(seq, VarRef::named(xs[k]), images[k]);
      }
      CHECK(subst_simultaneous(t, bs) == seq);
    }
  }

  TEST_CASE("free variables and closedness") {
    CHECK(free_vars(prelude::id()).empty());
    CHECK(free_vars(F("x")) == std::set<std::string>{"x"});
    CHECK(free_vars(prelude::eq(F("A"), F("x"), F("y"))) == std::set<std::string>{"A", "x", "y"});
    CHECK(is_closed(prelude::top()));
    CHECK_FALSE(is_closed(F("x")));
    CHECK(is_closed(prelude::nat()));
  }

  TEST_CASE("open and close binders") {
    CHECK(open_binder(B(0), "x") == F("x"));
    CHECK(close_binder(F("x"), "x") == B(0));
    CHECK_THROWS_AS(open_binder(Term::app(B(0), F("x")), "x"), std::invalid_argument);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      Term b = testing::random_term(rng, 5, 1, {"a"});
      CHECK(close_binder(open_binder(b, "f"), "f") == b);
    }
  }

  TEST_CASE("binder hints do not take part in equality") {
    CHECK(Term::abs(Term::prop(), B(0), "p") == Term::abs(Term::prop(), B(0), "q"));
    CHECK(Term::abs(Term::prop(), B(0)) != Term::prod(Term::prop(), B(0)));
  }
}
