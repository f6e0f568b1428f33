#include "support.hpp"

#include "pedacc/harness.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;
using testing::env;
using testing::tm;

namespace {

const std::vector<std::string> kScript{"env1", "ax", "env2", "var", "env2", "var", "abs+prod", "abs+prod"};

Environment leibniz() {
  return env({{"A", "Prop"}, {"x", "A"}, {"y", "A"}, {"h", "forall Q : A -> Prop, Q x -> Q y"}});
}

}  // namespace

TEST_SUITE("typing") {
  TEST_CASE("the empty environment is well formed in every mode") {
    for (Mode m : {Mode::CC, Mode::CCr}) {
      auto r = check_wf(Environment(), m);
      REQUIRE(ok(r));
      CHECK(value(r)->rule == Rule::Env1);
    }
    CheckOptions o;
    o.motivation = Motivation{};
    auto r = check_wf(Environment(), Mode::NaiveP, o);
    REQUIRE(ok(r));
  }

  TEST_CASE("check_wf") {
    CHECK(ok(check_wf(env({{"A", "Prop"}, {"x", "A"}}), Mode::CCr)));
    auto bad = check_wf(leibniz(), Mode::CCr);
    REQUIRE_FALSE(ok(bad));
    CHECK(error(bad).rule == "prod_r");
    CHECK(error(bad).where.rfind("env[3] h", 0) == 0);
    CHECK(ok(check_wf(leibniz(), Mode::CC)));
    auto dup = check_wf(env({{"A", "Prop"}, {"A", "Prop"}}), Mode::CC);
    REQUIRE_FALSE(ok(dup));
    CHECK(error(dup).message.find("duplicate") != std::string::npos);
  }

  TEST_CASE("infer_type") {
    auto p = infer_type(Environment(), Term::prop(), Mode::CC);
    REQUIRE(ok(p));
    CHECK(value(p).type == Term::type());

    auto o = infer_type(Environment(), prelude::id(), Mode::CCr);
    REQUIRE(ok(o));
    CHECK(value(o).type_nf == prelude::top());
    auto s = type_sort_of(value(o).derivation);
    REQUIRE(ok(s));
    CHECK(value(s)->conclusion.ty() == Term::prop());
    CHECK(rule_script({value(o).derivation, value(s)}) == kScript);

    Environment e = env({{"A", "Prop"}, {"x", "A"}, {"y", "A"}});
    Term eq = prelude::eq(Term::free("A"), Term::free("x"), Term::free("y"));
    auto cc = infer_type(e, eq, Mode::CC);
    REQUIRE(ok(cc));
    CHECK(value(cc).type_nf == Term::prop());
    CHECK_FALSE(ok(infer_type(e, eq, Mode::CCr)));
  }

  TEST_CASE("check_type") {
    CHECK(ok(check_type(Environment(), prelude::id(), prelude::top(), Mode::CCr)));
    CHECK(ok(check_type(Environment(), prelude::id(), normalize(prelude::top()), Mode::CC)));
    CHECK(ok(check_type(Environment(), prelude::zero(), prelude::nat(), Mode::CCr)));
    auto bad = check_type(Environment(), prelude::zero(), prelude::top(), Mode::CC);
    REQUIRE_FALSE(ok(bad));
    CHECK(error(bad).expected.has_value());
  }

  TEST_CASE("Type is refused as a subterm without citing anything") {
    for (const char* src : {"fun x : Type => x", "Type -> Prop"}) {
      auto r = infer_type(Environment(), tm(src), Mode::CC);
      REQUIRE_FALSE(ok(r));
      CHECK(error(r).message.find("Type") != std::string::npos);
      CHECK(error(r).message.find("emma") == std::string::npos);
    }
    auto r = check_wf(Environment({{"x", Term::type(), std::nullopt}}), Mode::CC);
    CHECK_FALSE(ok(r));
  }

  TEST_CASE("check_motivated_env") {
    Environment e1 = env({{"x1", "Prop"}});
    CHECK(ok(check_motivated_env(e1, Motivation{{{"x1", prelude::top()}}}, Mode::CC)));

    Environment e2 = env({{"x1", "Prop"}, {"x2", "(fun H : top -> x1 => top) (fun y : top => y)"}});
    Motivation s2{{{"x1", prelude::top()}, {"x2", prelude::id()}}};
    CHECK(ok(check_motivated_env(e2, s2, Mode::NaiveP)));

    Environment e3 = env({{"A", "Prop"}, {"x", "A"}});
    CHECK(ok(check_motivated_env(e3, Motivation{{{"A", prelude::top()}, {"x", prelude::id()}}}, Mode::CC)));
    auto bad = check_motivated_env(e3, Motivation{{{"A", prelude::bot()}, {"x", prelude::id()}}}, Mode::CC);
    CHECK_FALSE(ok(bad));
  }

  TEST_CASE("the naive system accepts what CC refuses") {
    auto ex = naive_p_examples();
    REQUIRE(ex.size() == 3);
    for (const auto& e : ex) {
      CAPTURE(e.label);
      CheckOptions o;
      o.motivation = e.sigma;
      CHECK(ok(check_type(e.env, e.term, e.type, Mode::NaiveP, o)));
      CHECK_FALSE(ok(check_type(e.env, e.term, e.type, Mode::CC)));
    }
    CheckOptions none;
    CHECK_FALSE(ok(check_type(ex[1].env, ex[1].term, ex[1].type, Mode::NaiveP, none)));
  }

  TEST_CASE("restricted derivations contain no unrestricted product") {
    auto r = infer_type(Environment(), prelude::fact_fn(), Mode::CCr);
    REQUIRE(ok(r));
    bool prod = false;
    for_each_node(value(r).derivation, [&](const DerivationPtr& d) {
      if (d->rule == Rule::Prod) prod = true;
      if (d->rule == Rule::ProdR) CHECK(d->witness.has_value());
    });
    CHECK_FALSE(prod);
    CHECK_FALSE(verify_derivation(value(r).derivation).has_value());
  }

  TEST_CASE("an annotation is used and still checked") {
    Environment good = env({{"A", "Prop"}});
    good.push_back({"h", tm("A -> A"), tm("fun a : A => a")});
    CHECK(ok(check_wf(good, Mode::CCr)));
    Environment bad = env({{"A", "Prop"}, {"B", "Prop"}});
    bad.push_back({"h", tm("A -> B"), tm("fun a : A => a")});
    CHECK_FALSE(ok(check_wf(bad, Mode::CCr)));
  }

  TEST_CASE("diagnostics are deterministic") {
    auto a = check_wf(leibniz(), Mode::CCr);
    auto b = check_wf(leibniz(), Mode::CCr);
    REQUIRE_FALSE(ok(a));
    CHECK(error(a).rule == error(b).rule);
    CHECK(error(a).where == error(b).where);
    CHECK(error(a).message == error(b).message);
    CHECK(error(a).expected == error(b).expected);
  }

  TEST_CASE("types are unique up to conversion") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto c = harness::gen_typed_term(seed, 4);
      CheckOptions o;
      o.hints = c.hints;
      auto k = infer_type(c.env, c.term, Mode::CC, o);
      REQUIRE(ok(k));
      auto ref = harness::reference_type(c.env, c.term);
      REQUIRE(ref);
      CHECK(convertible(value(k).type, *ref));
      CHECK(convertible(value(k).type, c.type));
    }
  }

  TEST_CASE("restricted derivations relabel into unrestricted ones") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      auto g = harness::gen_ccr_env(seed, 5);
      REQUIRE(g.wf);
      auto relabeled = harness::relabel_unrestricted(g.wf);
      CHECK_FALSE(verify_derivation(relabeled).has_value());
      bool all_cc = true;
      for_each_node(relabeled, [&](const DerivationPtr& d) { all_cc = all_cc && d->mode == Mode::CC; });
      CHECK(all_cc);
    }
  }
}
