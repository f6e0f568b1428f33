#include "pedacc/driver.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pedacc/export.hpp"
#include "pedacc/harness.hpp"
#include "pedacc/motivation.hpp"
#include "pedacc/prelude.hpp"
#include "pedacc/surface.hpp"

namespace pedacc::cli {

namespace {

using nlohmann::json;
using surface::Command;
using surface::CommandKind;
using surface::Program;

struct Options {
  std::string file;
  std::string system = "ccr";
  Fuel fuel = kDefaultFuel;
  unsigned search_depth = 8;
  std::string emit;
  std::size_t cases = 100;
  std::uint64_t seed = 1;
};

class Session {
 public:
  Session(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {
    copts_.fuel = o.fuel;
    copts_.search_depth = o.search_depth;
  }

  // Reads, parses and elaborates the input file; nonzero on failure.
  int load() {
    std::ifstream in(o_.file, std::ios::binary);
    if (!in) {
      err_ << o_.file << ": error: cannot read file\n";
      return kUsage;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto decls = surface::parse(ss.str());
    if (!ok(decls)) return report(error(decls), kUsage);
    auto prog = surface::elaborate(value(decls));
    if (!ok(prog)) return report(error(prog), kUsage);
    prog_ = value(prog);
    return kOk;
  }

  int check(Mode mode) {
    CheckOptions opts = copts_;
    if (mode == Mode::NaiveP) {
      if (!prog_.unmotivated.empty()) {
        const std::string& x = prog_.unmotivated.front();
        std::size_t i = *prog_.env.index_of(x);
        Diagnostic d{"p-env", "env[" + std::to_string(i) + "] " + x, std::nullopt, std::nullopt,
                     "hypothesis has no 'motivation " + x + " := ...' line", prog_.entry_pos[i]};
        return fail(d);
      }
      opts.motivation = prog_.motivation;
    }
    auto wf = check_wf(prog_.env, mode, opts);
    if (!ok(wf)) return fail(locate_env(error(wf)));
    std::vector<DerivationPtr> roots{value(wf)};
    json checks = json::array();
    for (const Command& c : prog_.commands) {
      if (c.kind != CommandKind::Check) continue;
      Environment env = prog_.env.prefix(c.env_size);
      CheckOptions copts = opts;
      if (mode == Mode::NaiveP) {
        Motivation m;
        m.bindings.assign(prog_.motivation.bindings.begin(),
                          prog_.motivation.bindings.begin() + static_cast<long>(c.env_size));
        copts.motivation = m;
      }
      DerivationPtr d, sort;
      Term type = Term::type();
      if (c.type) {
        auto r = check_type(env, c.term, *c.type, mode, copts);
        if (!ok(r)) return fail(locate_command(error(r), c));
        d = value(r).derivation;
        sort = value(r).type_sort;
        type = *c.type;
      } else {
        auto r = infer_type(env, c.term, mode, copts);
        if (!ok(r)) return fail(locate_command(error(r), c));
        d = value(r).derivation;
        type = value(r).type;
        if (!type.is_sort(Sort::Type)) {
          auto s = type_sort_of(d, copts);
          if (!ok(s)) return fail(locate_command(error(s), c));
          sort = value(s);
        }
      }
      out_ << "check: " << show(c.term) << " : " << show(type);
      if (sort) out_ << " : " << show(sort->conclusion.ty());
      out_ << '\n';
      json jc{{"line", c.pos.line},
              {"subject", surface::print(c.term)},
              {"type", surface::print(type)},
              {"root", roots.size()}};
      roots.push_back(d);
      if (sort) {
        jc["sort"] = surface::print(sort->conclusion.ty());
        jc["type_sort"] = roots.size();
        roots.push_back(sort);
      }
      std::vector<DerivationPtr> mine{d};
      if (sort) mine.push_back(sort);
      jc["script"] = rule_script(mine);
      checks.push_back(std::move(jc));
    }
    out_ << "ok: " << prog_.env.size() << " hypotheses, " << checks.size() << " checks in " << to_string(mode)
         << '\n';
    if (!o_.emit.empty()) {
      json j = surface::derivation_json(roots);
      // Check entries point into the root list; resolve them to node ids.
      for (auto& jc : checks) {
        jc["root"] = j["roots"][jc["root"].get<std::size_t>()];
        if (jc.contains("type_sort")) jc["type_sort"] = j["roots"][jc["type_sort"].get<std::size_t>()];
      }
      j["system"] = to_string(mode);
      j["environment"] = j["roots"][0];
      j["checks"] = std::move(checks);
      if (!write_json(j)) return kUsage;
    }
    return kOk;
  }

  int motivate() {
    auto wf = check_wf(prog_.env, Mode::CCr, copts_);
    if (!ok(wf)) return fail(locate_env(error(wf)));
    std::vector<std::size_t> sizes;
    for (const Command& c : prog_.commands) {
      if (c.kind == CommandKind::Motivate) sizes.push_back(c.env_size);
    }
    if (sizes.empty()) sizes.push_back(prog_.env.size());
    for (std::size_t n : sizes) {
      Environment env = prog_.env.prefix(n);
      auto d = check_wf(env, Mode::CCr, copts_);
      if (!ok(d)) return fail(locate_env(error(d)));
      MotivationResult m;
      try {
        MotivationOptions mo;
        mo.check = copts_;
        m = motivate_env(value(d), mo);
      } catch (const MotivationError& e) {
        return fail(Diagnostic{"motivation", "", std::nullopt, std::nullopt, e.what(), std::nullopt});
      }
      out_ << "motivation of " << n << " hypotheses:\n";
      for (const auto& [x, t] : m.motivation.bindings) out_ << "  " << x << " := " << show(t) << '\n';
      if (!check_poincare(env, m.motivation, copts_)) {
        return fail(Diagnostic{"p-env", "", std::nullopt, std::nullopt, "extracted motivation does not check",
                               std::nullopt});
      }
      out_ << "cascade checked in cc\n";
    }
    return kOk;
  }

  int inhabit() {
    int status = kOk;
    for (const Command& c : prog_.commands) {
      if (c.kind != CommandKind::Inhabit) continue;
      Environment env = prog_.env.prefix(c.env_size);
      auto found = inhabit_search(env, c.term, o_.search_depth, copts_);
      if (found) {
        out_ << "inhabit " << show(c.term) << ": " << show(found->term) << '\n';
      } else {
        out_ << "inhabit " << show(c.term) << ": none found (search depth " << o_.search_depth << ")\n";
        status = kCheckFailed;
      }
    }
    return status;
  }

  int normalize(bool numerals) {
    for (const Command& c : prog_.commands) {
      if (c.kind != (numerals ? CommandKind::Eval : CommandKind::Normalize)) continue;
      Term n = Term::prop();
      try {
        n = pedacc::normalize(c.term, o_.fuel);
      } catch (const FuelExhausted& e) {
        return fail(Diagnostic{"conv", "term", std::nullopt, std::nullopt, e.what(), c.pos});
      }
      std::optional<std::uint64_t> k;
      if (numerals) k = prelude::to_natural(n, o_.fuel);
      if (k) {
        out_ << *k << '\n';
      } else {
        out_ << show(n) << '\n';
      }
    }
    return kOk;
  }

 private:
  std::string show(const Term& t) const { return surface::print(t, prog_.constants); }

  int report(const Diagnostic& d, int code) {
    err_ << surface::format_diagnostic(d, o_.file, prog_.constants);
    return code;
  }

  int fail(const Diagnostic& d) {
    if (!o_.emit.empty()) {
      json j{{"format", "pedacc-derivation/1"}, {"diagnostic", surface::diagnostic_json(d)}};
      write_json(j);
    }
    return report(d, kCheckFailed);
  }

  bool write_json(const json& j) {
    std::ofstream f(o_.emit);
    if (!f) {
      err_ << o_.emit << ": error: cannot write file\n";
      return false;
    }
    f << j.dump(1) << '\n';
    return true;
  }

  // "env[3] h, type.body" -> position inside the assumption's type.
  Diagnostic locate_env(Diagnostic d) {
    if (d.where.rfind("env[", 0) != 0) return d;
    std::size_t i = std::stoul(d.where.substr(4));
    if (i >= prog_.entry_pos.size()) return d;
    SourcePos pos = prog_.entry_pos[i];
    auto comma = d.where.find(", ");
    if (comma != std::string::npos) {
      std::string path = d.where.substr(comma + 2);
      if (path.rfind("type", 0) == 0) pos = surface::locate(prog_.entry_source[i], path, pos);
    }
    d.pos = pos;
    return d;
  }

  Diagnostic locate_command(Diagnostic d, const Command& c) {
    if (d.where.rfind("env[", 0) == 0) return locate_env(d);
    SourcePos pos = c.pos;
    if (d.where.rfind("term", 0) == 0) pos = surface::locate(c.source, d.where, pos);
    if (d.where.rfind("expected", 0) == 0) pos = surface::locate(c.type_source, d.where, pos);
    d.pos = pos;
    return d;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  CheckOptions copts_;
  Program prog_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pedacc: checker for the calculus of constructions and its restricted variant", "pedacc"};
  app.require_subcommand(1);
  Options o;
  auto sys = CLI::IsMember({"cc", "ccr", "naivep"});

  auto* check = app.add_subcommand("check", "Type-check every 'check' declaration of FILE");
  check->add_option("FILE", o.file, "Source file")->required();
  check->add_option("--system", o.system, "cc, ccr or naivep")->required()->check(sys);
  check->add_option("--fuel", o.fuel.max_steps, "Reduction budget");
  check->add_option("--search-depth", o.search_depth, "Witness search depth (0 disables search)");
  check->add_option("--emit-derivation", o.emit, "Write the derivations as JSON to PATH");

  auto* motivate = app.add_subcommand("motivate", "Extract closed examples for the hypotheses of FILE");
  motivate->add_option("FILE", o.file, "Source file")->required();
  motivate->add_option("--system", o.system, "Only ccr")->check(CLI::IsMember({"ccr"}));
  motivate->add_option("--fuel", o.fuel.max_steps, "Reduction budget");
  motivate->add_option("--search-depth", o.search_depth, "Witness search depth");

  auto* inhabit = app.add_subcommand("inhabit", "Search inhabitants for every 'inhabit' declaration of FILE");
  inhabit->add_option("FILE", o.file, "Source file")->required();
  inhabit->add_option("--search-depth", o.search_depth, "Search depth");
  inhabit->add_option("--fuel", o.fuel.max_steps, "Reduction budget");

  auto* normalize = app.add_subcommand("normalize", "Print the normal form of every 'normalize' declaration");
  normalize->add_option("FILE", o.file, "Source file")->required();
  normalize->add_option("--fuel", o.fuel.max_steps, "Reduction budget");

  auto* eval = app.add_subcommand("eval", "Normalize every 'eval' declaration and read numerals back");
  eval->add_option("FILE", o.file, "Source file")->required();
  eval->add_option("--fuel", o.fuel.max_steps, "Reduction budget");

  auto* selftest = app.add_subcommand("selftest", "Run the generated and fixed property suites");
  selftest->add_option("--cases", o.cases, "Generated cases per suite");
  selftest->add_option("--seed", o.seed, "First seed");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (selftest->parsed()) {
    auto rows = harness::selftest(o.cases, o.seed, out);
    bool clean = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.failures == 0; });
    return clean ? kOk : kCheckFailed;
  }

  Session s(o, out, err);
  if (int rc = s.load(); rc != kOk) return rc;
  if (check->parsed()) return s.check(*parse_mode(o.system));
  if (motivate->parsed()) return s.motivate();
  if (inhabit->parsed()) return s.inhabit();
  if (normalize->parsed()) return s.normalize(false);
  return s.normalize(true);
}

}  // namespace pedacc::cli
