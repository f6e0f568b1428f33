#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

#include "pedacc/export.hpp"
#include "pedacc/prelude.hpp"

using namespace pedacc;
using namespace pedacc::surface;
using testing::tm;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(testing::source_path("corpus"))) {
    if (e.path().extension() == ".ped") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Program elab(const std::string& src) {
  auto d = parse(src);
  REQUIRE(ok(d));
  auto p = elaborate(value(d));
  REQUIRE_MESSAGE(ok(p), error(p).message);
  return value(p);
}

}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("parse") {
    auto a = parse("assume A : Prop");
    REQUIRE(ok(a));
    REQUIRE(value(a).size() == 1);
    CHECK(value(a)[0].kind == DeclKind::Assume);

    auto d = parse("def top := forall A : Prop, A -> A");
    REQUIRE(ok(d));
    CHECK(elaborate_expr(*value(d)[0].expr) == prelude::top());
  }

  TEST_CASE("syntax errors carry positions") {
    auto r = parse("assume A : Prop\ncheck fun x : A x");
    REQUIRE_FALSE(ok(r));
    CHECK(error(r).rule == "syntax");
    REQUIRE(error(r).pos);
    CHECK(error(r).pos->line == 2);
    auto h = parse("def #x := Prop");
    REQUIRE_FALSE(ok(h));
    CHECK(error(h).message.find("reserved") != std::string::npos);
  }

  TEST_CASE("printing") {
    CHECK(print(prelude::id()) == "fun A : Prop => fun x : A => x");
    CHECK(print(prelude::top()) == "forall A : Prop, A -> A");
    // binders renamed away from free names they would capture
    Term t = Term::abs(Term::prop(), Term::app(Term::free("x"), Term::bound(0)), "x");
    CHECK(elaborate_expr(*value(parse_expr(print(t)))) == t);
    Constants fold{{"Nat", prelude::nat()}, {"zero", prelude::zero()}};
    CHECK(print(Term::app(prelude::succ_fn(), prelude::zero()), fold) == "(fun n : Nat => " +
                                                                            print(prelude::succ(Term::free("n")),
                                                                                  fold) +
                                                                            ") zero");
  }

  TEST_CASE("declarations roundtrip through the printer on the corpus") {
    auto files = corpus_files();
    CHECK(files.size() == 50);
    for (const auto& f : files) {
      CAPTURE(f.string());
      auto d = parse(slurp(f));
      REQUIRE(ok(d));
      auto again = parse(print(value(d)));
      REQUIRE(ok(again));
      CHECK(same(value(d), value(again)));
    }
  }

  TEST_CASE("kernel terms roundtrip through the printer") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
      Term t = testing::random_term(rng, 6, 0, {"a", "b", "x"});
      std::string s = print(t);
      auto e = parse_expr(s);
      REQUIRE_MESSAGE(ok(e), s);
      CHECK_MESSAGE(elaborate_expr(*value(e)) == t, s);
    }
  }

  TEST_CASE("elaborate") {
    Program p = elab("assume A : Prop\nassume x : A");
    CHECK(p.env.size() == 2);
    CHECK(p.env[1].type == Term::free("A"));

    Program d = elab("def I := fun B : Prop => fun b : B => b\ncheck I");
    REQUIRE(d.commands.size() == 1);
    CHECK(d.commands[0].term == prelude::id());

    Program w = elab(
        "assume A : Prop\nassume x : A\n"
        "assume h : forall Q : A -> Prop, Q x -> Q x by fun Q : A -> Prop => fun q : Q x => q");
    REQUIRE(w.env[2].witness);
    CHECK(ok(check_wf(w.env, Mode::CCr)));

    auto unbound = elaborate(value(parse("check y")));
    REQUIRE_FALSE(ok(unbound));
    CHECK(error(unbound).rule == "scope");
    auto dup = elaborate(value(parse("assume A : Prop\ndef A := Prop")));
    CHECK_FALSE(ok(dup));
    auto mot = elaborate(value(parse("motivation z := Prop")));
    CHECK_FALSE(ok(mot));
  }

  TEST_CASE("user declarations shadow the prelude") {
    Program p = elab("assume top : Prop\ncheck top");
    CHECK(p.commands[0].term == Term::free("top"));
  }

  TEST_CASE("locate follows kernel paths into the source") {
    auto e = value(parse_expr("fun x : Prop -> Prop => x Prop"));
    SourcePos dom = locate(e, "term.dom", {});
    CHECK(dom.column == 9);
    SourcePos arg = locate(e, "term.body.arg", {});
    CHECK(arg.column == 27);
  }

  TEST_CASE("derivations export to the documented tables") {
    auto r = infer_type(Environment(), prelude::id(), Mode::CCr);
    REQUIRE(ok(r));
    auto j = derivation_json({value(r).derivation});
    CHECK(j["format"] == "pedacc-derivation/1");
    auto shape = validate_derivation_json(j);
    CHECK(shape.nodes == count_nodes(value(r).derivation));
    auto broken = j;
    broken["nodes"][0]["premises"] = {12345};
    CHECK_THROWS(validate_derivation_json(broken));
  }
}
