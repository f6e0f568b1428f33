#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

#include "json.hpp"
#include "pedacc/driver.hpp"
#include "pedacc/export.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run pedacc_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = pedacc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "pedacc-cli-test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    CHECK(pedacc_run({"check", "corpus/prelude.ped", "--system", "ccr"}).code == 0);
    CHECK(pedacc_run({"check", "corpus/negative/leibniz.ped", "--system", "ccr"}).code == 1);
    CHECK(pedacc_run({"check", "corpus/negative/leibniz.ped", "--system", "cc"}).code == 0);
    CHECK(pedacc_run({"check", "corpus/prelude.ped", "--system", "lf"}).code == 2);
    CHECK(pedacc_run({"check", "corpus/prelude.ped"}).code == 2);
    CHECK(pedacc_run({"check", "no/such/file.ped", "--system", "cc"}).code == 2);
    CHECK(pedacc_run({"frobnicate"}).code == 2);
    auto bad = scratch("syntax.ped", "check (Prop");
    CHECK(pedacc_run({"check", bad.string(), "--system", "cc"}).code == 2);
  }

  TEST_CASE("Type inside a checked term is a check failure") {
    auto f = scratch("type.ped", "check fun x : Type => x\n");
    Run r = pedacc_run({"check", f.string(), "--system", "cc"});
    CHECK(r.code == 1);
    CHECK(r.err.find("1:15") != std::string::npos);
    CHECK(r.err.find("emma") == std::string::npos);
  }

  TEST_CASE("naivep needs every motivation") {
    auto f = scratch("unmotivated.ped", "assume A : Prop\ncheck Prop : Type\n");
    Run r = pedacc_run({"check", f.string(), "--system", "naivep"});
    CHECK(r.code == 1);
    CHECK(r.err.find("A") != std::string::npos);
    for (const char* c : {"a", "b", "c"}) {
      std::string path = std::string("corpus/naivep/") + c + ".ped";
      CHECK(pedacc_run({"check", path, "--system", "naivep"}).code == 0);
      CHECK(pedacc_run({"check", path, "--system", "cc"}).code == 1);
    }
  }

  TEST_CASE("emitted derivations validate") {
    auto path = std::filesystem::temp_directory_path() / "pedacc-cli-test" / "prelude.json";
    std::filesystem::create_directories(path.parent_path());
    Run r = pedacc_run({"check", "corpus/prelude.ped", "--system", "ccr", "--emit-derivation", path.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    CHECK(j["system"] == "ccr");
    auto shape = pedacc::surface::validate_derivation_json(j);
    CHECK(shape.nodes > 0);
    CHECK(j["checks"][0]["subject"] == "fun A : Prop => fun x : A => x");

    auto fail = std::filesystem::temp_directory_path() / "pedacc-cli-test" / "leibniz.json";
    Run f = pedacc_run({"check", "corpus/negative/leibniz.ped", "--system", "ccr", "--emit-derivation", fail.string()});
    CHECK(f.code == 1);
    std::ifstream fin(fail);
    auto fj = nlohmann::json::parse(fin);
    CHECK(fj["diagnostic"]["rule"] == "prod_r");
  }

  TEST_CASE("reports are byte-identical across runs") {
    for (const char* file : {"corpus/prelude.ped", "corpus/negative/composition.ped"}) {
      Run a = pedacc_run({"check", file, "--system", "ccr"});
      Run b = pedacc_run({"check", file, "--system", "ccr"});
      CHECK(a.out == b.out);
      CHECK(a.err == b.err);
    }
  }

  TEST_CASE("other commands") {
    Run e = pedacc_run({"eval", "corpus/programs/fact_4.ped"});
    CHECK(e.code == 0);
    CHECK(e.out == "24\n");
    Run m = pedacc_run({"motivate", "corpus/programs/ctx_motivate_chain.ped", "--system", "ccr"});
    CHECK(m.code == 0);
    CHECK(m.out.find("A := top") != std::string::npos);
    Run i = pedacc_run({"inhabit", "corpus/programs/inhabit_simple_1.ped"});
    CHECK(i.code == 0);
    auto bot = scratch("bot.ped", "inhabit bot\n");
    Run ib = pedacc_run({"inhabit", bot.string(), "--search-depth", "6"});
    CHECK(ib.code == 1);
    CHECK(ib.out.find("6") != std::string::npos);
    Run n = pedacc_run({"normalize", "corpus/programs/ctx_normalize_redex.ped"});
    CHECK(n.code == 0);
    CHECK(n.out == "o\n");
    Run s = pedacc_run({"selftest", "--cases", "5", "--seed", "2"});
    CHECK(s.code == 0);
  }
}
