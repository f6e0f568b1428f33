#include "support.hpp"

#include "pedacc/harness.hpp"
#include "pedacc/motivation.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;
using testing::env;
using testing::tm;

namespace {

DerivationPtr derive(const Environment& e, const Term& t) {
  auto r = infer_type(e, t, Mode::CCr);
  REQUIRE_MESSAGE(ok(r), testing::show(t));
  return value(r).derivation;
}

// Independent re-check of an extraction in the unrestricted kernel.
void recheck(const Term& t, const Term& type) {
  std::string what = testing::show(t) + " : " + testing::show(type);
  CHECK_MESSAGE(ok(check_type(Environment(), t, type, Mode::CC)), what);
}

}  // namespace

TEST_SUITE("motivation") {
  TEST_CASE("witness read from a product formation") {
    auto w = inhabit_from_prod_derivation(derive(Environment(), prelude::top()));
    CHECK(w.term == prelude::id());
    recheck(w.term, prelude::top());

    auto n = inhabit_from_prod_derivation(derive(Environment(), prelude::nat()));
    recheck(n.term, prelude::nat());

    // a conv node over the product formation
    DerivationPtr inner = derive(Environment(), prelude::top());
    DerivationPtr prop = value(infer_type(Environment(), Term::prop(), Mode::CCr)).derivation;
    DerivationPtr conv = make_derivation(Rule::Conv, Mode::CCr, inner->conclusion, {inner, prop});
    CHECK(inhabit_from_prod_derivation(conv).term == w.term);
  }

  TEST_CASE("Type-sorted goals get constant families") {
    struct Row {
      const char* goal;
      const char* expected;
    };
    for (auto [goal, expected] : {Row{"Prop", "top"}, Row{"Nat -> Prop", "fun n : Nat => top"},
                                  Row{"forall A : Prop, Prop", "fun A : Prop => top"}}) {
      auto d = derive(Environment(), tm(goal));
      auto r = inhabit_type_sorted(d);
      CHECK(r.term == tm(expected));
      recheck(r.term, tm(goal));
    }
  }

  TEST_CASE("inhabit_applied") {
    auto a = inhabit_applied(derive(Environment(), prelude::top()), {});
    CHECK(a.term == prelude::id());

    Term fam = tm("fun A : Prop => A -> A");
    auto b = inhabit_applied(derive(Environment(), fam), {prelude::nat()});
    CHECK(is_closed(b.term));
    recheck(b.term, tm("Nat -> Nat"));

    Term red = tm("(fun A : Prop => A) top");
    auto c = inhabit_applied(derive(Environment(), red), {});
    recheck(c.term, prelude::top());
  }

  TEST_CASE("the recursion measure decreases") {
    std::vector<MeasureStep> trace;
    MotivationOptions o;
    o.trace = &trace;
    Term fam = tm("fun A : Prop => fun B : Prop => (fun C : Prop => C -> C) B");
    inhabit_applied(derive(Environment(), fam), {prelude::nat(), prelude::top()}, o);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto g = harness::gen_ccr_env(seed, 4);
      MotivationOptions og;
      og.trace = &trace;
      og.check.hints = g.hints;
      motivate_env(g.wf, og);
    }
    REQUIRE_FALSE(trace.empty());
    std::size_t compared = 0;
    for (const auto& s : trace) {
      if (s.parent < 0) continue;
      const auto& p = trace[static_cast<std::size_t>(s.parent)];
      try {
        auto ms = longest_reduction_length(s.goal, 2000);
        auto mp = longest_reduction_length(p.goal, 2000);
        CHECK((ms < mp || (ms == mp && s.height < p.height)));
        ++compared;
      } catch (const BoundExceeded&) {
      }
    }
    CHECK(compared > 0);
  }

  TEST_CASE("motivate_env") {
    auto empty = check_wf(Environment(), Mode::CCr);
    CHECK(motivate_env(value(empty)).motivation.size() == 0);

    Environment e = env({{"A", "Prop"}, {"x", "A"}});
    auto m = motivate_env(value(check_wf(e, Mode::CCr)));
    CHECK(m.motivation == Motivation{{{"A", prelude::top()}, {"x", prelude::id()}}});
    CHECK(ok(check_motivated_env(e, m.motivation, Mode::CC)));

    Environment e3 = env({{"A", "Prop"}, {"f", "A -> A"}, {"x", "A"}});
    auto m3 = motivate_env(value(check_wf(e3, Mode::CCr)));
    CHECK(m3.motivation.size() == 3);
    CHECK(ok(check_motivated_env(e3, m3.motivation, Mode::CC)));
    for (const auto& [n, t] : m3.motivation.bindings) CHECK(is_closed(t));
  }

  TEST_CASE("motivate_judgment") {
    auto [m0, d0] = motivate_judgment(derive(Environment(), prelude::id()));
    CHECK(m0.motivation.size() == 0);
    CHECK(d0->conclusion.subject() == prelude::id());

    Environment e = env({{"A", "Prop"}, {"x", "A"}});
    auto [m1, d1] = motivate_judgment(derive(e, Term::free("x")));
    CHECK(d1->conclusion.subject() == prelude::id());
    CHECK(convertible(d1->conclusion.ty(), prelude::top()));

    Environment ea = env({{"A", "Prop"}});
    auto [m2, d2] = motivate_judgment(derive(ea, tm("fun x : A => x")));
    CHECK(d2->conclusion.subject() == tm("fun x : top => x"));
    recheck(d2->conclusion.subject(), tm("top -> top"));
  }

  TEST_CASE("usefulness") {
    auto u1 = usefulness_argument(derive(Environment(), prelude::id()));
    CHECK(normalize(u1.term) == prelude::top());
    auto u2 = usefulness_argument(derive(Environment(), prelude::succ_fn()));
    recheck(u2.term, prelude::nat());
    auto u3 = usefulness_argument(derive(Environment(), tm("fun x : top => x")));
    CHECK(u3.term == prelude::id());
  }

  TEST_CASE("inhabit_search") {
    auto t = inhabit_search(Environment(), prelude::top(), 8);
    REQUIRE(t);
    CHECK(t->term == prelude::id());
    auto f = inhabit_search(Environment(), tm("(Nat -> Nat) -> Nat -> Nat"), 8);
    REQUIRE(f);
    recheck(f->term, tm("(Nat -> Nat) -> Nat -> Nat"));
    for (unsigned depth : {1u, 4u, 8u, 12u}) {
      CHECK_FALSE(inhabit_search(env({{"A", "Prop"}}), Term::free("A"), depth).has_value());
    }
    CHECK_FALSE(inhabit_search(Environment(), prelude::bot(), 12).has_value());
  }

  TEST_CASE("check_poincare") {
    CHECK(check_poincare(Environment(), Motivation{}));
    Environment e = env({{"A", "Prop"}, {"x", "A"}});
    CHECK(check_poincare(e, Motivation{{{"A", prelude::top()}, {"x", prelude::id()}}}));
    CHECK_FALSE(check_poincare(e, Motivation{{{"A", prelude::bot()}, {"x", prelude::id()}}}));
  }

  TEST_CASE("extractions reject unrestricted derivations") {
    auto cc = infer_type(Environment(), prelude::id(), Mode::CC);
    CHECK_THROWS_AS(usefulness_argument(value(cc).derivation), MotivationError);
  }
}
