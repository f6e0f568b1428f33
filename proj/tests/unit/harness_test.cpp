#include <sstream>

#include "support.hpp"

#include "pedacc/harness.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;
using namespace pedacc::harness;

TEST_SUITE("harness") {
  TEST_CASE("generated environments") {
    auto empty = gen_ccr_env(1, 0);
    CHECK(empty.env.empty());
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto g = gen_ccr_env(seed, 5);
      REQUIRE_MESSAGE(g.wf, seed);
      CHECK(g.env.size() <= 5);
      CHECK(ok(check_wf(g.env, Mode::CC)));
      for_each_node(g.wf, [](const DerivationPtr& d) { CHECK(d->rule != Rule::Prod); });
      // regenerable from the seed
      CHECK(gen_ccr_env(seed, 5).env == g.env);
    }
  }

  TEST_CASE("negative corpus") {
    auto cases = negative_corpus();
    bool leibniz_ccr = false, leibniz_cc = false, bottom = false;
    for (const auto& c : cases) {
      CAPTURE(c.label);
      auto o = run_case(c);
      CHECK(o.as_expected);
      if (c.label == "leibniz-env") {
        (c.mode == Mode::CCr ? leibniz_ccr : leibniz_cc) = true;
        CHECK(o.actual == (c.mode == Mode::CCr ? Verdict::Reject : Verdict::Accept));
      }
      if (c.label == "bottom-hypothesis" && c.mode == Mode::CCr) {
        bottom = true;
        REQUIRE(c.search_goal);
        CHECK(c.search_depth == 12);
        CHECK_FALSE(inhabit_search(c.search_env, *c.search_goal, c.search_depth).has_value());
      }
    }
    CHECK(leibniz_ccr);
    CHECK(leibniz_cc);
    CHECK(bottom);
  }

  TEST_CASE("differential") {
    auto l = differential("leibniz", leibniz_env(), leibniz_motivation(), true);
    CHECK(l.cc_wf);
    CHECK_FALSE(l.ccr_wf);
    CHECK(l.motivatable);
    CHECK_FALSE(l.converse_holds);
    CHECK(l.expected_converse_failure);
    CHECK_FALSE(l.unexpected);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto g = gen_ccr_env(seed, 5);
      CheckOptions o;
      o.hints = g.hints;
      auto r = differential("generated", g.env, std::nullopt, false, o);
      CHECK(r.poincare_holds);
      CHECK_FALSE(r.unexpected);
    }
    for (const auto& c : naive_corpus()) CHECK(run_case(c).as_expected);
  }

  TEST_CASE("subject reduction") {
    for (Mode m : {Mode::CC, Mode::CCr}) {
      auto r = subject_reduction_fuzz(150, m, 77);
      CHECK(r.failures == 0);
      CHECK(r.reducts > 0);
    }
    // one step on a projection redex
    using prelude::SimpleType;
    Term t = prelude::proj1(SimpleType::nat(), prelude::pair(SimpleType::nat(), prelude::numeral(2), prelude::zero()));
    for (const auto& r : one_step_reducts(t)) {
      for (Mode m : {Mode::CC, Mode::CCr}) CHECK(ok(check_type(Environment(), r, prelude::nat(), m)));
    }
  }

  TEST_CASE("reference inference agrees with the kernel on the prelude") {
    for (const auto& [name, t] : prelude::builtins()) {
      CAPTURE(name);
      auto k = infer_type(Environment(), t, Mode::CC);
      auto r = reference_type(Environment(), t);
      REQUIRE(ok(k));
      REQUIRE(r);
      CHECK(convertible(value(k).type, *r));
    }
    CHECK_FALSE(reference_type(Environment(), testing::tm("zero zero")).has_value());
  }

  TEST_CASE("every suite passes") {
    std::ostringstream log;
    auto rows = selftest(200, 11, log);
    CAPTURE(log.str());
    bool substitution = false;
    for (const auto& r : rows) {
      CAPTURE(r.name);
      CHECK(r.failures == 0);
      CHECK(r.cases > 0);
      if (r.name == "substitution") substitution = r.cases >= 200;
    }
    CHECK(substitution);
  }
}
