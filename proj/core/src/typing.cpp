#include "pedacc/typing.hpp"

#include <unordered_map>
#include <unordered_set>

#include "pedacc/prelude.hpp"

namespace pedacc {

namespace {

struct Ctx {
  EnvPtr env;
  DerivationPtr wf;
  std::optional<Motivation> sigma;  // NaiveP
};

struct Candidate {
  Term type_nf;
  Term inhabitant;
  bool annotation = false;
};

struct NormalHint {
  Term product_nf;
  Term inhabitant;
  std::set<std::string> vars;
};

struct GuardKey {
  std::size_t env_size;
  Term product;
  bool operator==(const GuardKey& o) const { return env_size == o.env_size && product == o.product; }
};
struct GuardHash {
  std::size_t operator()(const GuardKey& k) const { return k.product.hash() ^ (k.env_size * 0x9e3779b97f4a7c15ULL); }
};

std::string join_where(const std::string& prefix, const std::string& path) {
  if (prefix.empty()) return path;
  if (path.empty()) return prefix;
  return prefix + ", " + path;
}

class Checker {
 public:
  Checker(Mode mode, const CheckOptions& opts) : mode_(mode), opts_(opts), depth_(opts.search_depth) {
    for (const auto& h : opts.hints) add_hint(h.product, h.inhabitant);
  }

  [[noreturn]] void fail(const std::string& rule, const std::string& path, std::string message,
                         std::optional<Term> expected = std::nullopt, std::optional<Term> found = std::nullopt) {
    throw KernelError(Diagnostic{rule, join_where(where_, path), std::move(expected), std::move(found),
                                 std::move(message), std::nullopt});
  }

  Term nf(const Term& t) { return normalize(t, opts_.fuel); }

  // --- environments ---------------------------------------------------------

  Ctx context(const Environment& env) {
    if (mode_ == Mode::NaiveP) return naive_context(env);
    EnvPtr cur = make_env(Environment());
    DerivationPtr d = make_derivation(Rule::Env1, mode_, Judgment::well_formed(cur), {});
    for (std::size_t i = 0; i < env.size(); ++i) {
      const Entry& e = env[i];
      where_ = "env[" + std::to_string(i) + "] " + e.name;
      Ctx ctx{cur, d, std::nullopt};
      if (e.name.empty() || (e.name[0] == kReservedPrefix && !opts_.allow_reserved)) fail("env2", "", "invalid hypothesis name");
      if (cur->contains(e.name)) fail("env2", "", "duplicate hypothesis name '" + e.name + "'");
      std::size_t mark = candidates_.size();
      if (e.witness) candidates_.push_back({nf(e.type), *e.witness, true});
      DerivationPtr sort = sort_term(ctx, e.type, "type");
      if (e.witness) {
        // The annotation is authoritative but never trusted.
        truncate_candidates(mark);
        check(ctx, *e.witness, e.type, "witness");
      }
      truncate_candidates(mark);
      cur = make_env(cur->extended(e.name, e.type, e.witness));
      d = make_derivation(Rule::Env2, mode_, Judgment::well_formed(cur), {sort});
    }
    where_.clear();
    return Ctx{cur, d, std::nullopt};
  }

  Ctx naive_context(const Environment& env) {
    if (!opts_.motivation) fail("p-env", "", "the naive system needs a motivation for the environment");
    const Motivation& sigma = *opts_.motivation;
    if (sigma.size() != env.size()) fail("p-env", "", "motivation does not cover the environment");
    std::vector<DerivationPtr> cascade;
    for (std::size_t i = 0; i < env.size(); ++i) {
      where_ = "env[" + std::to_string(i) + "] " + env[i].name;
      if (sigma.bindings[i].first != env[i].name) fail("p-env", "", "motivation names differ from the environment");
      cascade.push_back(cascade_step(env[i].type, sigma, i));
    }
    where_.clear();
    EnvPtr e = make_env(env);
    return Ctx{e, make_derivation(Rule::PEnv, Mode::NaiveP, Judgment::well_formed(e), cascade, std::nullopt, sigma),
               sigma};
  }

  DerivationPtr cascade_step(const Term& type, const Motivation& sigma, std::size_t i) {
    const Term& w = sigma.bindings[i].second;
    if (!is_closed(w)) fail("p-env", "", "motivation witness is not closed", std::nullopt, w);
    CheckOptions sub = opts_;
    sub.motivation.reset();
    auto r = check_type(Environment(), w, sigma.apply_prefix(type, i), Mode::CC, sub);
    if (!ok(r)) {
      Diagnostic d = error(r);
      d.rule = "p-env";
      d.where = join_where(where_, "motivation");
      d.message = "motivation witness rejected: " + d.message;
      throw KernelError(d);
    }
    return value(r).derivation;
  }

  Ctx extend(const Ctx& ctx, const std::string& hint, const Term& domain, const DerivationPtr& dom_sort,
             const Term& avoid, const std::string& path, std::string& name) {
    name = fresh_name(hint, *ctx.env, avoid);
    EnvPtr env = make_env(ctx.env->extended(name, domain));
    if (mode_ != Mode::NaiveP) {
      return Ctx{env, make_derivation(Rule::Env2, mode_, Judgment::well_formed(env), {dom_sort}), std::nullopt};
    }
    // Entering a binder in the naive system: the motivation must grow too.
    Motivation sigma = *ctx.sigma;
    Term goal = sigma.apply(domain);
    std::optional<Term> w = propose(Environment(), goal, opts_.search_depth);
    if (!w) fail("p-env", path, "no closed example found for the bound variable's type", goal);
    sigma.bindings.emplace_back(name, *w);
    std::vector<DerivationPtr> cascade = ctx.wf->premises;
    cascade.push_back(cascade_step(domain, sigma, sigma.size() - 1));
    return Ctx{env, make_derivation(Rule::PEnv, Mode::NaiveP, Judgment::well_formed(env), cascade, std::nullopt, sigma),
               sigma};
  }

  // --- leaves ---------------------------------------------------------------

  DerivationPtr ax(const Ctx& ctx) {
    Judgment j = Judgment::has_type(ctx.env, Term::prop(), Term::type());
    if (mode_ == Mode::NaiveP) return make_derivation(Rule::PAx, mode_, j, {ctx.wf}, std::nullopt, ctx.sigma);
    return make_derivation(Rule::Ax, mode_, j, {ctx.wf});
  }

  // --- inference ------------------------------------------------------------

  Typed infer(const Ctx& ctx, const Term& t, const std::string& path) {
    switch (t.kind()) {
      case TermKind::Sort:
        if (t.is_sort(Sort::Type)) fail("ax", path, "'Type' cannot occur in a checked term; it has no type");
        return {Term::type(), Term::type(), ax(ctx)};
      case TermKind::Bound:
        fail("var", path, "loose bound variable");
      case TermKind::Free: {
        const Entry* e = ctx.env->find(t.name());
        if (!e) fail("var", path, "unbound variable '" + t.name() + "'");
        Judgment j = Judgment::has_type(ctx.env, t, e->type);
        DerivationPtr d = mode_ == Mode::NaiveP
                              ? make_derivation(Rule::PVar, mode_, j, {ctx.wf}, std::nullopt, ctx.sigma)
                              : make_derivation(Rule::Var, mode_, j, {ctx.wf});
        return {e->type, e->type, d};
      }
      case TermKind::Abs:
        return infer_abs(ctx, t, path);
      case TermKind::Prod:
        return infer_prod(ctx, t, path);
      case TermKind::App:
        return infer_app(ctx, t, path);
    }
    fail("var", path, "malformed term");
  }

  DerivationPtr domain_sort(const Ctx& ctx, const Term& domain, const std::string& path) {
    if (mode_ == Mode::NaiveP) return nullptr;
    return sort_term(ctx, domain, path);
  }

  Typed infer_abs(const Ctx& ctx, const Term& t, const std::string& path) {
    DerivationPtr dom = domain_sort(ctx, t.domain(), path + ".dom");
    std::string x;
    Ctx inner = extend(ctx, t.hint(), t.domain(), dom, t.body(), path, x);
    Typed body = infer(inner, open_binder(t.body(), x), path + ".body");
    if (body.type.is_sort(Sort::Type)) {
      fail("abs", path, "the body has type Type, so the abstraction has no type", std::nullopt, body.type);
    }
    DerivationPtr body_sort = sort_of_type(inner, body, path + ".body");
    Term pi = Term::prod(t.domain(), close_binder(body.type, x), t.hint());
    DerivationPtr d =
        make_derivation(Rule::Abs, mode_, Judgment::has_type(ctx.env, t, pi), {body.derivation, body_sort});
    return {pi, pi, d};
  }

  Typed infer_prod(const Ctx& ctx, const Term& t, const std::string& path) {
    DerivationPtr dom = domain_sort(ctx, t.domain(), path + ".dom");
    std::string x;
    Ctx inner = extend(ctx, t.hint(), t.domain(), dom, t.body(), path, x);
    Term body = open_binder(t.body(), x);
    DerivationPtr body_sort = sort_term(inner, body, path + ".body");
    const Term& kappa = body_sort->conclusion.ty();
    Judgment j = Judgment::has_type(ctx.env, t, kappa);
    if (mode_ != Mode::CCr) return {kappa, kappa, make_derivation(Rule::Prod, mode_, j, {body_sort})};
    DerivationPtr w = find_witness(inner, t, body, x, path);
    const Term& witness = w->conclusion.subject();
    add_hint(t, Term::abs(t.domain(), close_binder(witness, x), t.hint()));
    return {kappa, kappa, make_derivation(Rule::ProdR, mode_, j, {w, body_sort}, witness)};
  }

  Typed infer_app(const Ctx& ctx, const Term& t, const std::string& path) {
    Typed fun = infer(ctx, t.fun(), path + ".fun");
    DerivationPtr df = fun.derivation;
    Term pi = fun.type;
    if (!pi.is(TermKind::Prod)) {
      Term w = whnf(pi, opts_.fuel);
      if (!w.is(TermKind::Prod)) {
        fail("app", path + ".fun", "applying a term that is not a function", std::nullopt, nf(pi));
      }
      DerivationPtr ws;
      {
        CandidateScope scope(*this, nf(w), t.fun());
        ws = sort_term(ctx, w, path + ".fun");
      }
      df = make_derivation(Rule::Conv, mode_, Judgment::has_type(ctx.env, t.fun(), w), {df, ws});
      pi = w;
    }
    const Term& dom = pi.domain();
    Typed arg = infer(ctx, t.arg(), path + ".arg");
    DerivationPtr da = arg.derivation;
    if (!(arg.type == dom)) {
      if (!convertible(arg.type, dom, opts_.fuel)) {
        fail("app", path + ".arg", "argument type does not match the function's domain", dom, arg.type);
      }
      DerivationPtr ds;
      {
        CandidateScope scope(*this, nf(dom), t.arg());
        ds = sort_term(ctx, dom, path + ".arg");
      }
      da = make_derivation(Rule::Conv, mode_, Judgment::has_type(ctx.env, t.arg(), dom), {da, ds});
    }
    Term result = instantiate(pi.body(), t.arg());
    return {result, result, make_derivation(Rule::App, mode_, Judgment::has_type(ctx.env, t, result), {df, da})};
  }

  // Derivation of `env |- a : k` with k syntactically a sort.
  DerivationPtr sort_term(const Ctx& ctx, const Term& a, const std::string& path) {
    Typed ta = infer(ctx, a, path);
    return as_sort(ctx, ta, path);
  }

  DerivationPtr as_sort(const Ctx& ctx, const Typed& ta, const std::string& path) {
    if (ta.type.is(TermKind::Sort)) return ta.derivation;
    Term n = nf(ta.type);
    if (n.is_sort(Sort::Prop)) {
      Judgment j = Judgment::has_type(ctx.env, ta.derivation->conclusion.subject(), Term::prop());
      return make_derivation(Rule::Conv, mode_, j, {ta.derivation, ax(ctx)});
    }
    fail(to_string(ta.derivation->rule), path, "expected a type (a term of sort Prop or Type)", std::nullopt, n);
  }

  // Sort derivation of the type of an already typed term.
  DerivationPtr sort_of_type(const Ctx& ctx, const Typed& typed, const std::string& path) {
    const DerivationPtr& d = typed.derivation;
    if (typed.type.is_sort(Sort::Type)) fail("ax", path, "'Type' has no type");
    if (d->rule == Rule::Abs) {
      // The product type of an abstraction is formed from the abstraction's
      // own premises, which already contain an inhabitant of its body.
      const DerivationPtr& body = d->premises[0];
      const DerivationPtr& body_sort = d->premises[1];
      const Term& kappa = body_sort->conclusion.ty();
      Judgment j = Judgment::has_type(ctx.env, typed.type, kappa);
      if (mode_ != Mode::CCr) return make_derivation(Rule::Prod, mode_, j, {body_sort});
      add_hint(typed.type, d->conclusion.subject());
      return make_derivation(Rule::ProdR, mode_, j, {body, body_sort}, body->conclusion.subject());
    }
    CandidateScope scope(*this, nf(typed.type), d->conclusion.subject());
    return sort_term(ctx, typed.type, path);
  }

  Checked check(const Ctx& ctx, const Term& t, const Term& expected, const std::string& path) {
    Typed tt = infer(ctx, t, path);
    if (expected.is_sort(Sort::Type)) {
      if (tt.type.is_sort(Sort::Type)) return {tt.derivation, nullptr};
      fail("conv", path, "type mismatch", expected, tt.type);
    }
    if (tt.type == expected) return {tt.derivation, sort_of_type(ctx, tt, "expected")};
    if (!convertible(tt.type, expected, opts_.fuel)) fail("conv", path, "type mismatch", expected, tt.type);
    DerivationPtr es;
    {
      CandidateScope scope(*this, nf(expected), t);
      es = sort_term(ctx, expected, "expected");
    }
    Judgment j = Judgment::has_type(ctx.env, t, expected);
    return {make_derivation(Rule::Conv, mode_, j, {tt.derivation, es}), es};
  }

  // --- witnesses for restricted product formation ---------------------------

  DerivationPtr find_witness(const Ctx& inner, const Term& product, const Term& body, const std::string& x,
                             const std::string& path) {
    Term pnf = nf(product);
    // Re-entering a product already being formed higher up, in any
    // extension of its environment, would be circular.
    GuardKey key{0, pnf};
    if (nesting_ > kMaxNesting || guard_.count(key)) {
      fail("prod_r", path, "cannot form product: no inhabitant of its body is available", product);
    }
    guard_.insert(key);
    ++nesting_;
    struct Exit {
      Checker& c;
      GuardKey k;
      ~Exit() {
        c.guard_.erase(k);
        --c.nesting_;
      }
    } exit{*this, key};

    auto attempt = [&](const Term& proposal) -> DerivationPtr {
      std::string saved = where_;
      try {
        Checked c = check(inner, proposal, body, path + ".witness");
        where_ = saved;
        return c.derivation;
      } catch (const KernelError&) {
        where_ = saved;
        return nullptr;
      }
    };
    auto body_of = [&](const Term& u) {
      return u.is(TermKind::Abs) ? instantiate(u.body(), Term::free(x)) : Term::app(u, Term::free(x));
    };

    // Explicit annotations first, then inhabitants known from the term
    // being checked, newest first.
    for (std::size_t pass = 0; pass < 2; ++pass) {
      for (std::size_t i = candidates_.size(); i-- > 0;) {
        Candidate c = candidates_[i];
        if (c.annotation != (pass == 0) || !(c.type_nf == pnf)) continue;
        if (occurs_free(c.inhabitant, x)) continue;
        if (auto d = attempt(body_of(c.inhabitant))) return d;
        if (c.annotation) {
          fail("prod_r", path, "the witness annotation does not inhabit the hypothesis", product, c.inhabitant);
        }
      }
    }
    for (std::size_t i = hints_.size(); i-- > 0;) {
      const NormalHint& h = hints_[i];
      std::unordered_map<std::string, Term> theta;
      if (!match_pattern(h.product_nf, pnf, h.vars, theta)) continue;
      std::vector<std::pair<VarRef, Term>> s;
      for (auto& [k, v] : theta) s.emplace_back(VarRef::named(k), v);
      Term u = subst_simultaneous(h.inhabitant, s);
      if (occurs_free(u, x)) continue;
      if (auto d = attempt(body_of(u))) return d;
    }
    if (depth_ > 0) {
      if (auto proposal = propose(*inner.env, body, depth_)) {
        --depth_;
        DerivationPtr d = attempt(*proposal);
        ++depth_;
        if (d) return d;
      }
    }
    fail("prod_r", path,
         "cannot form product: no inhabitant of its body found (search depth " + std::to_string(opts_.search_depth) +
             ")",
         product);
  }

  std::optional<Term> propose(const Environment& env, const Term& goal, unsigned depth) {
    if (depth == 0) return std::nullopt;
    if (opts_.search) return opts_.search(env, goal, depth);
    return propose_inhabitant(env, goal, depth, opts_.fuel);
  }

  void add_hint(const Term& product, const Term& inhabitant) {
    Term pnf = nf(product);
    if (!hint_keys_.insert(pnf).second) return;
    hints_.push_back({pnf, inhabitant, free_vars(product)});
  }

  void truncate_candidates(std::size_t mark) {
    candidates_.erase(candidates_.begin() + static_cast<long>(mark), candidates_.end());
  }

  struct CandidateScope {
    CandidateScope(Checker& c, Term type_nf, Term inhabitant) : checker(c), mark(c.candidates_.size()) {
      if (c.mode_ == Mode::CCr) c.candidates_.push_back({std::move(type_nf), std::move(inhabitant), false});
    }
    ~CandidateScope() { checker.truncate_candidates(mark); }
    Checker& checker;
    std::size_t mark;
  };

  const std::string& where() const { return where_; }

 private:
  static constexpr unsigned kMaxNesting = 48;

  Mode mode_;
  const CheckOptions& opts_;
  unsigned depth_;
  unsigned nesting_ = 0;
  std::string where_;
  std::vector<Candidate> candidates_;
  std::vector<NormalHint> hints_;
  std::unordered_set<Term, TermHash> hint_keys_;
  std::unordered_set<GuardKey, GuardHash> guard_;
};

template <class F>
auto guarded(F&& f) -> Result<decltype(f())> {
  try {
    return f();
  } catch (const KernelError& e) {
    return e.diagnostic();
  } catch (const FuelExhausted& e) {
    return Diagnostic{"conv", "", std::nullopt, std::nullopt, e.what(), std::nullopt};
  }
}

}  // namespace

Result<DerivationPtr> check_wf(const Environment& env, Mode mode, const CheckOptions& opts) {
  return guarded([&] {
    Checker c(mode, opts);
    return c.context(env).wf;
  });
}

Result<Typed> infer_type(const Environment& env, const Term& t, Mode mode, const CheckOptions& opts) {
  return guarded([&] {
    Checker c(mode, opts);
    Ctx ctx = c.context(env);
    Typed r = c.infer(ctx, t, "term");
    r.type_nf = c.nf(r.type);
    return r;
  });
}

Result<Checked> check_type(const Environment& env, const Term& t, const Term& expected, Mode mode,
                           const CheckOptions& opts) {
  return guarded([&] {
    Checker c(mode, opts);
    Ctx ctx = c.context(env);
    return c.check(ctx, t, expected, "term");
  });
}

Result<std::vector<DerivationPtr>> check_motivated_env(const Environment& env, const Motivation& sigma, Mode mode,
                                                       const CheckOptions& opts) {
  if (sigma.size() != env.size()) {
    return Diagnostic{"p-env", "", std::nullopt, std::nullopt, "motivation does not cover the environment",
                      std::nullopt};
  }
  CheckOptions sub = opts;
  sub.motivation.reset();
  // the naive system checks its cascade with the unrestricted rules
  const Mode cascade = mode == Mode::NaiveP ? Mode::CC : mode;
  std::vector<DerivationPtr> out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    std::string where = "env[" + std::to_string(i) + "] " + env[i].name;
    if (sigma.bindings[i].first != env[i].name) {
      return Diagnostic{"p-env", where, std::nullopt, std::nullopt, "motivation names differ from the environment",
                        std::nullopt};
    }
    const Term& w = sigma.bindings[i].second;
    if (!is_closed(w)) {
      return Diagnostic{"p-env", where, std::nullopt, w, "motivation witness is not closed", std::nullopt};
    }
    auto r = check_type(Environment(), w, sigma.apply_prefix(env[i].type, i), cascade, sub);
    if (!ok(r)) {
      Diagnostic d = error(r);
      d.where = join_where(where, d.where);
      return d;
    }
    out.push_back(value(r).derivation);
  }
  return out;
}

Result<DerivationPtr> type_sort_of(const DerivationPtr& d, const CheckOptions& opts) {
  return guarded([&] {
    Checker c(d->mode, opts);
    for (const auto& h : collect_hints(d)) c.add_hint(h.product, h.inhabitant);
    DerivationPtr wf = wf_of(d);
    Ctx ctx = wf ? Ctx{d->conclusion.env, wf, wf->motivation} : c.context(d->env());
    Typed typed{d->conclusion.ty(), d->conclusion.ty(), d};
    return c.sort_of_type(ctx, typed, "type");
  });
}

std::vector<Hint> collect_hints(const DerivationPtr& d) {
  std::vector<Hint> out;
  for_each_node(d, [&](const DerivationPtr& n) {
    if (n->rule != Rule::ProdR || !n->witness) return;
    const Term& pi = n->conclusion.subject();
    const std::string& x = n->premises[0]->env().back().name;
    out.push_back({pi, Term::abs(pi.domain(), close_binder(*n->witness, x), pi.hint())});
  });
  return out;
}

std::vector<NaivePExample> naive_p_examples() {
  using namespace prelude;
  std::vector<NaivePExample> out;
  Term x1 = Term::free("x1");
  {
    Environment env({{"x1", Term::type(), std::nullopt}});
    out.push_back({"a", env, Term::prop(), Term::type(), Motivation{{{"x1", Term::prop()}}}});
  }
  {
    Term ty = Term::app(lam("H", arrow(top(), x1), [](const Term&) { return top(); }),
                        lam("y", top(), [](const Term& y) { return y; }));
    Environment env({{"x1", Term::prop(), std::nullopt}, {"x2", ty, std::nullopt}});
    out.push_back({"b", env, Term::prop(), Term::type(), Motivation{{{"x1", top()}, {"x2", id()}}}});
  }
  {
    Term proof = lam("P", arrow(nat(), Term::prop()),
                     [](const Term& p) { return lam("H", Term::app(p, zero()), [](const Term& h) { return h; }); });
    Term ty = Term::app(lam("H", eq(nat(), x1, zero()), [](const Term&) { return top(); }), proof);
    Environment env({{"x1", nat(), std::nullopt}, {"x2", ty, std::nullopt}});
    out.push_back({"c", env, Term::prop(), Term::type(), Motivation{{{"x1", zero()}, {"x2", id()}}}});
  }
  return out;
}

}  // namespace pedacc
