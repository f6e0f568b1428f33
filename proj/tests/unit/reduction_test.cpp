#include "support.hpp"

#include "pedacc/harness.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;
using testing::tm;

TEST_SUITE("reduction") {
  TEST_CASE("beta_step") {
    CHECK_FALSE(beta_step(prelude::id()).has_value());
    auto s = beta_step(Term::app(prelude::id(), prelude::top()));
    REQUIRE(s);
    CHECK(*s == Term::abs(prelude::top(), Term::bound(0)));
  }

  TEST_CASE("stepping the iterator at zero reaches the base") {
    Term b = prelude::numeral(7);
    Term t = prelude::iter(prelude::nat(), prelude::zero(), b, [](const Term& y) { return prelude::succ(y); });
    int steps = 0;
    while (auto n = beta_step(t)) {
      t = *n;
      REQUIRE(++steps < 1000);
    }
    CHECK(t == b);
  }

  TEST_CASE("normalize") {
    CHECK(normalize(prelude::id()) == prelude::id());
    using prelude::SimpleType;
    const std::vector<SimpleType> types{SimpleType::nat(), SimpleType::arrow(SimpleType::nat(), SimpleType::nat()),
                                        SimpleType::arrow(SimpleType::arrow(SimpleType::nat(), SimpleType::nat()),
                                                          SimpleType::nat())};
    for (const auto& ty : types) {
      for (std::uint64_t n = 0; n <= 5; ++n) {
        Term rt = Term::app(prelude::dec(ty), Term::app(prelude::enc(ty), prelude::numeral(n)));
        CHECK(normalize(rt) == prelude::numeral(n));
      }
    }
    Term p = prelude::pair(SimpleType::nat(), prelude::numeral(2), prelude::numeral(9));
    CHECK(normalize(prelude::proj1(SimpleType::nat(), p)) == prelude::numeral(2));
    CHECK(normalize(prelude::proj2(SimpleType::nat(), p)) == prelude::numeral(9));
  }

  TEST_CASE("whnf") {
    Term pi = tm("forall x : A, B");
    CHECK(whnf(pi) == pi);
    CHECK(whnf(tm("(fun A : Prop => A) top")) == prelude::top());
    Term neutral = Term::app(Term::free("f"), tm("(fun A : Prop => A) top"));
    CHECK(whnf(neutral) == neutral);
  }

  TEST_CASE("convertible") {
    Term t = tm("fun x : Nat => succ x");
    CHECK(convertible(t, t));
    CHECK(convertible(tm("(fun H : top -> top => top) (fun y : top => y)"), prelude::top()));
    CHECK_FALSE(convertible(prelude::top(), prelude::bot()));
  }

  TEST_CASE("fuel exhaustion is reported") {
    Term w = tm("fun x : Prop => x x");
    CHECK_THROWS_AS(normalize(Term::app(w, w), Fuel{500}), FuelExhausted);
  }

  TEST_CASE("longest reduction length") {
    CHECK(longest_reduction_length(prelude::id(), 10) == 0);
    CHECK(longest_reduction_length(tm("(fun x : top => x) id"), 10) == 1);
    CHECK_THROWS_AS(longest_reduction_length(prelude::fact(prelude::numeral(3)), 5), BoundExceeded);
  }

  TEST_CASE("contracting a head abstraction shortens the longest path") {
    int found = 0;
    for (std::uint64_t seed = 1; found < 20 && seed < 2000; ++seed) {
      auto c = harness::gen_typed_term(seed, 3);
      auto [head, args] = spine(c.term);
      if (!head.is(TermKind::Abs) || args.empty()) continue;
      std::vector<Term> rest(args.begin() + 1, args.end());
      Term smaller = mk_apps(instantiate(head.body(), args[0]), rest);
      try {
        auto big = longest_reduction_length(c.term, 20000);
        auto small = longest_reduction_length(smaller, 20000);
        CHECK(small < big);
        ++found;
      } catch (const BoundExceeded&) {
      }
    }
    CHECK(found == 20);
  }

  TEST_CASE("both strategies reach the same normal form") {
    int n = 0;
    for (std::uint64_t seed = 1; n < 500; ++seed) {
      auto c = harness::gen_typed_term(seed, 4);
      ++n;
      Term lo = normalize_stepwise(c.term, Strategy::LeftmostOutermost);
      Term ri = normalize_stepwise(c.term, Strategy::RightmostInnermost);
      REQUIRE(lo == ri);
      CHECK(lo == normalize(c.term));
    }
  }

  TEST_CASE("normalize is idempotent and normal terms have no path") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto c = harness::gen_typed_term(seed, 3);
      Term nf = normalize(c.term);
      CHECK(normalize(nf) == nf);
      CHECK_FALSE(beta_step(nf).has_value());
      CHECK(longest_reduction_length(nf, 0) == 0);
      CHECK(one_step_reducts(nf).empty());
    }
  }

  TEST_CASE("convertibility is an equivalence on a sample") {
    std::vector<Term> sample;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) sample.push_back(harness::gen_typed_term(seed, 3).term);
    sample.push_back(tm("id Nat zero"));
    sample.push_back(prelude::zero());
    for (const auto& a : sample) {
      CHECK(convertible(a, a));
      for (const auto& b : sample) {
        CHECK(convertible(a, b) == convertible(b, a));
        if (!convertible(a, b)) continue;
        for (const auto& c : sample) {
          if (convertible(b, c)) CHECK(convertible(a, c));
        }
      }
    }
  }
}
