#include "support.hpp"

#include "pedacc/prelude.hpp"

using namespace pedacc;
using namespace pedacc::prelude;
using testing::tm;

namespace {

std::uint64_t nat_of(const Term& t) {
  auto n = to_natural(t);
  REQUIRE(n);
  return *n;
}

Term succ_step(const Term& y) { return succ(y); }

}  // namespace

TEST_SUITE("prelude") {
  TEST_CASE("numerals") {
    CHECK(numeral(0) == zero());
    CHECK(numeral(1) == normalize(succ(zero())));
    for (std::uint64_t k = 0; k <= 10; ++k) {
      CHECK(ok(check_type(Environment(), numeral(k), nat(), Mode::CCr)));
    }
  }

  TEST_CASE("to_natural") {
    CHECK(to_natural(zero()) == 0u);
    CHECK(to_natural(tm("fun A : Prop => fun x : A => fun f : A -> A => f (f x)")) == 2u);
    CHECK_FALSE(to_natural(id()).has_value());
  }

  TEST_CASE("iterator") {
    CHECK(normalize(iter(nat(), zero(), numeral(7), succ_step)) == numeral(7));
    CHECK(normalize(iter(nat(), numeral(2), numeral(3), succ_step)) == numeral(5));
    // 3 * 4 as four additions of three, each by iteration
    Term three = numeral(3);
    Term t = iter(nat(), numeral(4), zero(), [&](const Term& y) { return iter(nat(), three, y, succ_step); });
    CHECK(normalize(t) == numeral(12));
  }

  TEST_CASE("enc and dec") {
    SimpleType N = SimpleType::nat();
    Term x = Term::free("n");
    CHECK(normalize(Term::app(enc(N), x)) == x);
    CHECK(normalize(Term::app(dec(N), x)) == x);
    for (const auto& ty : {N, SimpleType::arrow(N, N), SimpleType::arrow(SimpleType::arrow(N, N), N)}) {
      CHECK(ok(check_type(Environment(), enc(ty), arrow(nat(), to_term(ty)), Mode::CCr)));
      CHECK(ok(check_type(Environment(), dec(ty), arrow(to_term(ty), nat()), Mode::CCr)));
      for (std::uint64_t k = 0; k <= 5; ++k) {
        CHECK(normalize(Term::app(dec(ty), Term::app(enc(ty), numeral(k)))) == numeral(k));
      }
    }
  }

  TEST_CASE("pairs") {
    SimpleType N = SimpleType::nat();
    Term p = pair(N, numeral(2), numeral(9));
    CHECK(normalize(proj1(N, p)) == numeral(2));
    CHECK(normalize(proj2(N, p)) == numeral(9));
    SimpleType NN = SimpleType::arrow(N, N);
    CHECK(ok(check_type(Environment(), pair(NN, numeral(1), succ_fn()), pair_type(NN), Mode::CCr)));
  }

  TEST_CASE("recursor") {
    SimpleType N = SimpleType::nat();
    auto step = [](const Term& x, const Term& y) { return plus(x, y); };
    CHECK(normalize(rec(N, zero(), numeral(3), step)) == numeral(3));
    CHECK(nat_of(pred(numeral(4))) == 3);
    CHECK(nat_of(pred(zero())) == 0);
    CHECK(nat_of(fact(numeral(4))) == 24);
  }

  TEST_CASE("simple types are inhabited") {
    SimpleType N = SimpleType::nat();
    auto [z, dz] = inhabit_simple_type(N);
    CHECK(z == zero());
    auto [f, df] = inhabit_simple_type(SimpleType::arrow(N, N));
    CHECK(f == tm("fun x : Nat => zero"));
    SimpleType big = SimpleType::arrow(SimpleType::arrow(SimpleType::arrow(N, N), N), N);
    auto [g, dg] = inhabit_simple_type(big);
    CHECK(is_closed(g));
    CHECK(ok(check_type(Environment(), g, to_term(big), Mode::CC)));
    CHECK(dg->mode == Mode::CCr);
  }

  TEST_CASE("every builtin except bot types in the restricted system") {
    for (const auto& [name, t] : builtins()) {
      CAPTURE(name);
      auto r = infer_type(Environment(), t, Mode::CCr);
      if (name == "bot") {
        CHECK_FALSE(ok(r));
        CHECK(ok(infer_type(Environment(), t, Mode::CC)));
      } else {
        CHECK(ok(r));
      }
    }
  }
}
