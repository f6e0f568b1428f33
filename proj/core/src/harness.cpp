#include "pedacc/harness.hpp"

#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "pedacc/prelude.hpp"

namespace pedacc::harness {

using namespace prelude;

std::string to_string(Verdict v) { return v == Verdict::Accept ? "accept" : "reject"; }

namespace {

using Rng = std::mt19937_64;

std::size_t pick(Rng& r, std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(r() % n); }
bool coin(Rng& r, unsigned percent) { return r() % 100 < percent; }

CheckOptions with(const CheckOptions& base, const std::vector<Hint>& hints,
                  const std::optional<Motivation>& m = std::nullopt) {
  CheckOptions o = base;
  o.hints.insert(o.hints.end(), hints.begin(), hints.end());
  if (m) o.motivation = m;
  return o;
}

// --- environment generator ---------------------------------------------------

struct Generated {
  Term type;
  std::optional<Term> inhabitant;
};

// What is in scope while generating: hypotheses as free names, binders as
// HOAS placeholders.
struct Scope {
  std::vector<Term> props;                        // P : Prop
  std::vector<std::pair<Term, Term>> preds;       // Q : D -> Prop, with D
  std::vector<std::pair<Term, Term>> proofs;      // h : T
};

class EnvGen {
 public:
  EnvGen(std::uint64_t seed) : rng_(seed) {}

  std::vector<Hint> hints;

  std::optional<Term> proof_of(const Scope& s, const Term& t) {
    for (std::size_t i = s.proofs.size(); i-- > 0;) {
      if (s.proofs[i].second == t) return s.proofs[i].first;
    }
    return std::nullopt;
  }

  Term product(const std::string& hint, const Term& dom, const std::function<Term(const Term&)>& body,
               const std::function<Term(const Term&)>& inhabitant) {
    Term p = pi(hint, dom, body);
    hints.push_back({p, lam(hint, dom, inhabitant)});
    return p;
  }

  Generated atom(const Scope& s) {
    std::vector<std::function<Generated()>> opts;
    for (const Term& p : s.props) opts.push_back([&, p] { return Generated{p, proof_of(s, p)}; });
    for (const auto& [q, d] : s.preds) {
      if (d.is_sort(Sort::Prop)) {
        for (const Term& p : s.props) {
          Term t = Term::app(q, p);
          opts.push_back([&, t] { return Generated{t, proof_of(s, t)}; });
        }
      }
      for (const auto& [h, ht] : s.proofs) {
        if (ht == d) {
          Term t = Term::app(q, h);
          opts.push_back([&, t] { return Generated{t, proof_of(s, t)}; });
        }
      }
    }
    opts.push_back([&] { return top_type(); });
    return opts[pick(rng_, opts.size())]();
  }

  Generated top_type() {
    Term t = product("A", Term::prop(), [&](const Term& a) { return arrow_hinted(a, a, [](const Term& x) { return x; }); },
                     [](const Term& a) { return lam("x", a, [](const Term& x) { return x; }); });
    return {t, id()};
  }

  Term arrow_hinted(const Term& a, const Term& b, const std::function<Term(const Term&)>& inh) {
    Term p = arrow(a, b);
    hints.push_back({p, lam("x", a, inh)});
    return p;
  }

  Generated prop(const Scope& s, unsigned depth) {
    if (depth == 0 || coin(rng_, 30)) return atom(s);
    switch (pick(rng_, 4)) {
      case 0: {
        // A -> B, with B inhabited, or A -> A.
        Generated a = prop(s, depth - 1);
        Generated b = prop(s, depth - 1);
        if (b.inhabitant) {
          Term w = *b.inhabitant;
          Term t = arrow_hinted(a.type, b.type, [w](const Term&) { return w; });
          return {t, lam("x", a.type, [w](const Term&) { return w; })};
        }
        Term t = arrow_hinted(a.type, a.type, [](const Term& x) { return x; });
        return {t, lam("x", a.type, [](const Term& x) { return x; })};
      }
      case 1: {
        // forall X : Prop, body, with the body inhabited under X.
        std::optional<Term> inner_inh;
        Term t = pi("X", Term::prop(), [&](const Term& x) {
          Scope inner = s;
          inner.props.push_back(x);
          Generated b = prop(inner, depth - 1);
          if (!b.inhabitant) b = {arrow_hinted(x, x, [](const Term& y) { return y; }), lam("y", x, [](const Term& y) { return y; })};
          // Both the product and its inhabitant close over the same placeholder.
          inner_inh = close_binder(*b.inhabitant, x.name());
          return b.type;
        });
        Term inh = Term::abs(Term::prop(), *inner_inh, "X");
        hints.push_back({t, inh});
        return {t, inh};
      }
      case 2: {
        // forall x : D, Q x -> Q x.
        if (s.preds.empty()) return prop(s, depth - 1);
        const auto& pred = s.preds[pick(rng_, s.preds.size())];
        Term q = pred.first, d = pred.second;
        Term t = product(
            "x", d,
            [&](const Term& x) {
              Term qx = Term::app(q, x);
              return arrow_hinted(qx, qx, [](const Term& h) { return h; });
            },
            [&](const Term& x) { return lam("h", Term::app(q, x), [](const Term& h) { return h; }); });
        return {t, hints.back().inhabitant};
      }
      default: {
        // A -> B where A is a hypothesis' type, B inhabited through it.
        if (s.proofs.empty()) return prop(s, depth - 1);
        const auto& proof = s.proofs[pick(rng_, s.proofs.size())];
        Term h = proof.first;
        Generated b = prop(s, depth - 1);
        Term t = arrow_hinted(b.type, proof.second, [h](const Term&) { return h; });
        return {t, lam("x", b.type, [h](const Term&) { return h; })};
      }
    }
  }

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
};

}  // namespace

GeneratedEnv gen_ccr_env(std::uint64_t seed, unsigned max_depth) {
  GeneratedEnv out;
  out.seed = seed;
  EnvGen g(seed);
  Scope s;
  std::size_t n = max_depth == 0 ? 0 : 1 + pick(g.rng(), max_depth);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t kind = s.props.empty() ? 0 : pick(g.rng(), 5);
    std::string name;
    Term type = Term::prop();
    std::optional<Term> inh;
    if (kind == 0) {
      name = "P" + std::to_string(i);
      inh = top();
    } else if (kind == 1) {
      name = "Q" + std::to_string(i);
      Term d = coin(g.rng(), 25) ? Term::prop() : s.props[pick(g.rng(), s.props.size())];
      type = g.arrow_hinted(d, Term::prop(), [](const Term&) { return top(); });
      inh = lam("x", d, [](const Term&) { return top(); });
      s.preds.emplace_back(Term::free(name), d);
    } else {
      name = "h" + std::to_string(i);
      Generated t = g.prop(s, max_depth);
      type = t.type;
      inh = t.inhabitant;
    }
    out.env.push_back({name, type, std::nullopt});
    out.inhabitants.push_back(inh);
    if (kind == 0) s.props.push_back(Term::free(name));
    if (kind >= 2) s.proofs.emplace_back(Term::free(name), type);
  }
  out.hints = g.hints;
  auto r = check_wf(out.env, Mode::CCr, with({}, out.hints));
  if (ok(r)) {
    out.wf = value(r);
  } else {
    out.error = error(r);
  }
  return out;
}

namespace {

Term small_arith(Rng& r) {
  Term m = numeral(pick(r, 3));
  Term n = numeral(pick(r, 3));
  switch (pick(r, 7)) {
    case 0: return apps(plus_fn(), {m, n});
    case 1: return apps(times_fn(), {m, n});
    case 2: return Term::app(pred_fn(), m);
    case 3: return Term::app(succ_fn(), m);
    case 4: return Term::app(fst_fn(), apps(pair_fn(), {m, n}));
    case 5: return Term::app(snd_fn(), apps(pair_fn(), {m, n}));
    default: return apps(iter_fn(), {nat(), m, zero(), succ_fn()});
  }
}

}  // namespace

TypedCase gen_typed_term(std::uint64_t seed, unsigned max_depth) {
  Rng r(seed ^ 0x5bd1e995ULL);
  TypedCase c;
  c.seed = seed;
  if (coin(r, 15)) {
    c.term = small_arith(r);
    c.type = nat();
    return c;
  }
  GeneratedEnv ge = gen_ccr_env(seed, max_depth);
  c.env = ge.env;
  c.hints = ge.hints;
  EnvGen g(seed * 31 + 7);
  Scope s;
  for (const Entry& e : ge.env) {
    if (e.type.is_sort(Sort::Prop)) {
      s.props.push_back(Term::free(e.name));
    } else if (e.name[0] == 'Q') {
      s.preds.emplace_back(Term::free(e.name), e.type.domain());
    } else {
      s.proofs.emplace_back(Term::free(e.name), e.type);
    }
  }
  Generated goal = g.prop(s, 2);
  for (int k = 0; k < 4 && !goal.inhabitant; ++k) goal = g.prop(s, 2);
  if (!goal.inhabitant) goal = g.top_type();
  c.hints.insert(c.hints.end(), g.hints.begin(), g.hints.end());
  Term t = *goal.inhabitant;
  const Term& ty = goal.type;
  std::size_t wraps = 1 + pick(r, 3);
  for (std::size_t k = 0; k < wraps; ++k) {
    switch (pick(r, 3)) {
      case 0: {
        // (fun z : B => t) b, z unused.
        Term b = id(), bty = top();
        if (!s.proofs.empty() && coin(r, 60)) {
          std::tie(b, bty) = s.proofs[pick(r, s.proofs.size())];
        } else if (!s.props.empty() && coin(r, 50)) {
          b = s.props[pick(r, s.props.size())];
          bty = Term::prop();
        }
        Term body = t;
        Term f = lam("z", bty, [body](const Term&) { return body; });
        c.hints.push_back({pi("z", bty, [ty](const Term&) { return ty; }), f});
        t = Term::app(f, b);
        break;
      }
      case 1:
        t = apps(id(), {ty, t});
        break;
      default:
        t = Term::app(lam("z", ty, [](const Term& z) { return z; }), t);
        break;
    }
  }
  c.term = t;
  c.type = ty;
  return c;
}

// --- fixtures ----------------------------------------------------------------

Term leibniz_type() { return eq(Term::free("A"), Term::free("x"), Term::free("y")); }

Environment leibniz_env() {
  Term a = Term::free("A");
  return Environment({{"A", Term::prop(), std::nullopt},
                      {"x", a, std::nullopt},
                      {"y", a, std::nullopt},
                      {"h", leibniz_type(), std::nullopt}});
}

Motivation leibniz_motivation() {
  Term refl = lam("Q", arrow(nat(), Term::prop()),
                  [](const Term& q) { return lam("H", Term::app(q, zero()), [](const Term& h) { return h; }); });
  return Motivation{{{"A", nat()}, {"x", zero()}, {"y", zero()}, {"h", refl}}};
}

Environment composition_env() {
  return Environment(
      {{"A", Term::prop(), std::nullopt}, {"B", Term::prop(), std::nullopt}, {"C", Term::prop(), std::nullopt}});
}

Term composition_type() {
  Term a = Term::free("A"), b = Term::free("B"), c = Term::free("C");
  return arrow(arrow(a, b), arrow(arrow(b, c), arrow(a, c)));
}

Environment bottom_env() { return Environment({{"h", bot(), std::nullopt}}); }

std::vector<GeneratedCase> negative_corpus() {
  std::vector<GeneratedCase> out;
  Environment prefix3 = leibniz_env().prefix(3);
  GeneratedCase c;

  c = {};
  c.label = "leibniz-env";
  c.env = leibniz_env();
  c.mode = Mode::CCr;
  c.expected = Verdict::Reject;
  c.search_goal = leibniz_type();
  c.search_env = prefix3;
  out.push_back(c);
  c.mode = Mode::CC;
  c.expected = Verdict::Accept;
  c.search_goal.reset();
  out.push_back(c);

  c = {};
  c.label = "composition-type";
  c.env = composition_env();
  c.type = composition_type();
  c.mode = Mode::CCr;
  c.expected = Verdict::Reject;
  c.search_goal = arrow(Term::free("A"), Term::free("B"));
  c.search_env = composition_env();
  out.push_back(c);
  c.mode = Mode::CC;
  c.expected = Verdict::Accept;
  c.search_goal.reset();
  out.push_back(c);

  c = {};
  c.label = "bottom-hypothesis";
  c.env = bottom_env();
  c.mode = Mode::CCr;
  c.expected = Verdict::Reject;
  c.search_goal = bot();
  out.push_back(c);
  c.mode = Mode::CC;
  c.expected = Verdict::Accept;
  c.search_goal.reset();
  out.push_back(c);
  return out;
}

std::vector<GeneratedCase> naive_corpus() {
  std::vector<GeneratedCase> out;
  for (const auto& ex : naive_p_examples()) {
    GeneratedCase c;
    c.label = "naive-" + ex.label;
    c.env = ex.env;
    c.term = ex.term;
    c.type = ex.type;
    c.motivation = ex.sigma;
    c.mode = Mode::NaiveP;
    c.expected = Verdict::Accept;
    out.push_back(c);
    c.mode = Mode::CC;
    c.expected = Verdict::Reject;
    out.push_back(c);
  }
  return out;
}

CaseOutcome run_case(const GeneratedCase& c, const CheckOptions& base) {
  CaseOutcome o;
  CheckOptions opts = base;
  if (c.mode == Mode::NaiveP) opts.motivation = c.motivation;
  auto record = [&](const auto& r, auto&& roots) {
    if (ok(r)) {
      o.actual = Verdict::Accept;
      o.derivations = roots(value(r));
    } else {
      o.actual = Verdict::Reject;
      o.diagnostic = error(r);
    }
  };
  if (!c.type) {
    record(check_wf(c.env, c.mode, opts), [](const DerivationPtr& d) { return std::vector<DerivationPtr>{d}; });
  } else if (!c.term) {
    record(check_type(c.env, *c.type, Term::prop(), c.mode, opts),
           [](const Checked& k) { return std::vector<DerivationPtr>{k.derivation}; });
  } else {
    record(check_type(c.env, *c.term, *c.type, c.mode, opts), [](const Checked& k) {
      std::vector<DerivationPtr> v{k.derivation};
      if (k.type_sort) v.push_back(k.type_sort);
      return v;
    });
  }
  o.as_expected = o.actual == c.expected;
  if (c.search_goal) {
    auto found = propose_inhabitant(c.search_env, *c.search_goal, c.search_depth, opts.fuel);
    if (found) {
      o.as_expected = false;
      o.note = "search found a candidate at depth " + std::to_string(c.search_depth);
    } else {
      o.note = "search exhausted at depth " + std::to_string(c.search_depth);
    }
  }
  return o;
}

// --- differential ------------------------------------------------------------

DifferentialReport differential(const std::string& label, const Environment& env,
                                const std::optional<Motivation>& sigma, bool converse_may_fail,
                                const CheckOptions& opts) {
  DifferentialReport r;
  r.label = label;
  r.cc_wf = ok(check_wf(env, Mode::CC, opts));
  auto ccr = check_wf(env, Mode::CCr, opts);
  r.ccr_wf = ok(ccr);
  if (sigma) {
    r.naive_wf = ok(check_wf(env, Mode::NaiveP, with(opts, {}, sigma)));
    r.motivatable = check_poincare(env, *sigma, opts);
  }
  r.poincare_holds = true;
  if (r.ccr_wf) {
    try {
      MotivationOptions mo;
      mo.check = opts;
      MotivationResult m = motivate_env(value(ccr), mo);
      r.poincare_holds = check_poincare(env, m.motivation, opts);
      r.motivatable = r.motivatable || r.poincare_holds;
    } catch (const MotivationError&) {
      r.poincare_holds = false;
    }
  }
  r.converse_holds = !(r.cc_wf && r.motivatable) || r.ccr_wf;
  r.expected_converse_failure = !r.converse_holds && converse_may_fail;
  r.unexpected = !r.poincare_holds || r.converse_holds == converse_may_fail;
  return r;
}

// --- subject reduction ---------------------------------------------------------

SubjectReductionReport subject_reduction_fuzz(std::size_t n, Mode mode, std::uint64_t seed,
                                              const std::function<void(const DerivationPtr&)>& sink) {
  SubjectReductionReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    TypedCase c = gen_typed_term(seed + i, 3);
    ++rep.cases;
    CheckOptions opts = with({}, c.hints);
    auto base = check_type(c.env, c.term, c.type, mode, opts);
    if (!ok(base)) {
      ++rep.rejected_inputs;
      rep.notes.push_back("seed " + std::to_string(c.seed) + ": input rejected: " + error(base).message + " at " +
                          error(base).where);
      continue;
    }
    if (sink) sink(value(base).derivation);
    CheckOptions ropts = with(opts, collect_hints(value(base).derivation));
    for (const Term& red : one_step_reducts(c.term)) {
      ++rep.reducts;
      auto rr = check_type(c.env, red, c.type, mode, ropts);
      if (!ok(rr)) {
        ++rep.failures;
        rep.notes.push_back("seed " + std::to_string(c.seed) + ": reduct rejected: " + error(rr).message + " at " +
                            error(rr).where);
      } else if (sink) {
        sink(value(rr).derivation);
      }
    }
  }
  return rep;
}

DerivationPtr relabel_unrestricted(const DerivationPtr& d) {
  std::map<const Derivation*, DerivationPtr> memo;
  std::function<DerivationPtr(const DerivationPtr&)> go = [&](const DerivationPtr& n) -> DerivationPtr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    std::vector<DerivationPtr> prem;
    Rule rule = n->rule;
    if (rule == Rule::ProdR) {
      rule = Rule::Prod;
      prem.push_back(go(n->premises[1]));
    } else {
      for (const auto& p : n->premises) prem.push_back(go(p));
    }
    DerivationPtr out = make_derivation(rule, n->mode == Mode::CCr ? Mode::CC : n->mode, n->conclusion,
                                        std::move(prem), std::nullopt, n->motivation);
    memo.emplace(n.get(), out);
    return out;
  };
  return go(d);
}

// --- reference inference -------------------------------------------------------

namespace {

class Reference {
 public:
  explicit Reference(Fuel fuel) : fuel_(fuel) {}

  std::optional<Term> type_of(Environment& ctx, const Term& t) {
    switch (t.kind()) {
      case TermKind::Sort:
        if (t.is_sort(Sort::Type)) return std::nullopt;
        return Term::type();
      case TermKind::Bound:
        return std::nullopt;
      case TermKind::Free: {
        const Entry* e = ctx.find(t.name());
        if (!e) return std::nullopt;
        return normalize(e->type, fuel_);
      }
      case TermKind::App: {
        // Argument first: the kernel goes the other way round.
        auto a = type_of(ctx, t.arg());
        auto f = type_of(ctx, t.fun());
        if (!a || !f) return std::nullopt;
        Term pi = whnf(*f, fuel_);
        if (!pi.is(TermKind::Prod) || !convertible(pi.domain(), *a, fuel_)) return std::nullopt;
        return normalize(instantiate(pi.body(), t.arg()), fuel_);
      }
      case TermKind::Abs:
      case TermKind::Prod: {
        auto ds = type_of(ctx, t.domain());
        if (!ds || !ds->is(TermKind::Sort)) return std::nullopt;
        std::string x = fresh_name(t.hint(), ctx, t.body());
        ctx.push_back({x, t.domain(), std::nullopt});
        auto b = type_of(ctx, open_binder(t.body(), x));
        Environment popped = ctx.prefix(ctx.size() - 1);
        ctx = popped;
        if (!b) return std::nullopt;
        if (t.is(TermKind::Prod)) {
          if (!b->is(TermKind::Sort)) return std::nullopt;
          return *b;
        }
        if (b->is_sort(Sort::Type)) return std::nullopt;
        Term pi = Term::prod(t.domain(), close_binder(*b, x), t.hint());
        auto ps = type_of(ctx, pi);
        if (!ps || !ps->is(TermKind::Sort)) return std::nullopt;
        return normalize(pi, fuel_);
      }
    }
    return std::nullopt;
  }

 private:
  Fuel fuel_;
};

}  // namespace

std::optional<Term> reference_type(const Environment& env, const Term& t, Fuel fuel) {
  try {
    Environment ctx = env;
    return Reference(fuel).type_of(ctx, t);
  } catch (const FuelExhausted&) {
    return std::nullopt;
  }
}

// --- invariants ----------------------------------------------------------------

void InvariantChecker::add(const DerivationPtr& root) {
  if (!root) return;
  keep_.push_back(root);
  std::optional<std::vector<Hint>> hints;
  for_each_node(root, [&](const DerivationPtr& d) {
    if (!seen_.insert(d.get()).second) return;
    ++nodes_;
    if (d->mode == Mode::NaiveP) {
      // The naive system admits Type in environments on purpose.
      ++skipped_;
      return;
    }
    bool bad_env = false;
    for (const Entry& e : d->env()) bad_env = bad_env || e.type.mentions_type();
    bool bad_subject = !d->conclusion.is_wf() && d->conclusion.subject().mentions_type();
    if (bad_env || bad_subject) {
      ++type_occurrence_;
      notes_.push_back("Type occurs in the " + std::string(bad_env ? "environment" : "subject") + " of a " +
                       pedacc::to_string(d->rule) + " node");
    }
    if (d->conclusion.is_wf() || d->conclusion.ty().is_sort(Sort::Type)) return;
    auto& done = sorted_[&d->env()];
    if (done.count(d->conclusion.ty())) return;
    if (!hints) hints = collect_hints(root);
    CheckOptions opts;
    opts.hints = *hints;
    opts.allow_reserved = true;
    auto r = infer_type(d->env(), d->conclusion.ty(), d->mode, opts);
    if (ok(r) && value(r).type_nf.is(TermKind::Sort)) {
      done.insert(d->conclusion.ty());
    } else {
      ++type_of_type_;
      notes_.push_back("the type derived by a " + pedacc::to_string(d->rule) + " node has no sort" +
                       (ok(r) ? "" : ": " + error(r).message));
    }
  });
}

// --- selftest --------------------------------------------------------------------

std::vector<SuiteRow> selftest(std::size_t cases, std::uint64_t seed, std::ostream& log) {
  using Clock = std::chrono::steady_clock;
  std::vector<SuiteRow> rows;
  InvariantChecker inv;
  auto run = [&](const std::string& name, const std::function<void(SuiteRow&)>& f) {
    SuiteRow row;
    row.name = name;
    auto t0 = Clock::now();
    f(row);
    row.millis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    rows.push_back(row);
  };
  auto fail = [&](SuiteRow& row, const std::string& what) {
    ++row.failures;
    if (row.failures <= 5) log << "  " << row.name << ": " << what << '\n';
  };

  std::vector<GeneratedEnv> envs;
  run("generated-envs", [&](SuiteRow& row) {
    for (std::size_t i = 0; i < cases; ++i) {
      envs.push_back(gen_ccr_env(seed + i, 5));
      ++row.cases;
      if (!envs.back().wf) fail(row, "seed " + std::to_string(seed + i) + ": " + envs.back().error->message);
    }
  });
  run("poincare", [&](SuiteRow& row) {
    for (const auto& g : envs) {
      if (!g.wf) continue;
      ++row.cases;
      inv.add(g.wf);
      try {
        MotivationOptions mo;
        mo.check.hints = g.hints;
        MotivationResult m = motivate_env(g.wf, mo);
        for (const auto& d : m.cascade) inv.add(d);
        bool closed = true;
        for (const auto& b : m.motivation.bindings) closed = closed && is_closed(b.second);
        if (!closed || !check_poincare(g.env, m.motivation)) fail(row, "seed " + std::to_string(g.seed));
      } catch (const MotivationError& e) {
        fail(row, "seed " + std::to_string(g.seed) + ": " + e.what());
      }
    }
  });
  run("containment", [&](SuiteRow& row) {
    for (const auto& g : envs) {
      if (!g.wf) continue;
      ++row.cases;
      auto v = verify_derivation(relabel_unrestricted(g.wf));
      if (v || !ok(check_wf(g.env, Mode::CC))) fail(row, "seed " + std::to_string(g.seed) + (v ? ": " + *v : ""));
    }
  });
  run("negative", [&](SuiteRow& row) {
    for (const auto& c : negative_corpus()) {
      ++row.cases;
      CaseOutcome o = run_case(c);
      for (const auto& d : o.derivations) inv.add(d);
      if (!o.as_expected) fail(row, c.label + " (" + pedacc::to_string(c.mode) + ") " + o.note);
    }
  });
  run("naive", [&](SuiteRow& row) {
    for (const auto& c : naive_corpus()) {
      ++row.cases;
      CaseOutcome o = run_case(c);
      for (const auto& d : o.derivations) inv.add(d);
      if (!o.as_expected) fail(row, c.label + " (" + pedacc::to_string(c.mode) + ")");
    }
  });
  run("differential", [&](SuiteRow& row) {
    ++row.cases;
    auto r = differential("leibniz", leibniz_env(), leibniz_motivation(), true);
    if (r.unexpected) fail(row, "leibniz");
    for (std::size_t i = 0; i < envs.size() && i < 50; ++i) {
      if (!envs[i].wf) continue;
      ++row.cases;
      CheckOptions o;
      o.hints = envs[i].hints;
      auto d = differential("generated", envs[i].env, std::nullopt, false, o);
      if (d.unexpected) fail(row, "seed " + std::to_string(envs[i].seed));
    }
  });
  for (Mode m : {Mode::CC, Mode::CCr}) {
    run("subject-reduction-" + pedacc::to_string(m), [&](SuiteRow& row) {
      auto rep = subject_reduction_fuzz(cases, m, seed, [&](const DerivationPtr& d) { inv.add(d); });
      row.cases = rep.cases;
      for (const auto& n : rep.notes) fail(row, n);
    });
  }
  run("uniqueness", [&](SuiteRow& row) {
    for (std::size_t i = 0; i < cases; ++i) {
      TypedCase c = gen_typed_term(seed + i, 3);
      ++row.cases;
      auto k = infer_type(c.env, c.term, Mode::CC);
      auto ref = reference_type(c.env, c.term);
      if (!ok(k) || !ref || !convertible(value(k).type, *ref)) fail(row, "seed " + std::to_string(c.seed));
    }
  });
  run("substitution", [&](SuiteRow& row) {
    for (const auto& g : envs) {
      if (!g.wf) continue;
      for (std::size_t i = 0; i < g.env.size(); ++i) {
        if (!g.inhabitants[i]) continue;
        ++row.cases;
        const std::string& x = g.env[i].name;
        const Term& u = *g.inhabitants[i];
        auto sub = [&](const Term& t) { return subst(t, VarRef::named(x), u); };
        Environment e = g.env.prefix(i);
        for (std::size_t j = i + 1; j < g.env.size(); ++j) e.push_back({g.env[j].name, sub(g.env[j].type), std::nullopt});
        CheckOptions o;
        o.hints = g.hints;
        auto wf = check_wf(e, Mode::CCr, o);
        if (!ok(wf)) {
          fail(row, "seed " + std::to_string(g.seed) + " entry " + x + ": " + error(wf).message);
          continue;
        }
        inv.add(value(wf));
        for (std::size_t j = i + 1; j < g.env.size(); ++j) {
          if (!g.inhabitants[j]) continue;
          auto r = check_type(e.prefix(j - 1), sub(*g.inhabitants[j]), sub(g.env[j].type), Mode::CCr, o);
          if (!ok(r)) fail(row, "seed " + std::to_string(g.seed) + " entry " + x + " -> " + g.env[j].name);
        }
      }
    }
  });
  run("invariants", [&](SuiteRow& row) {
    row.cases = inv.nodes();
    row.failures = inv.type_occurrence_violations() + inv.type_of_type_violations();
    for (std::size_t i = 0; i < inv.notes().size() && i < 5; ++i) log << "  invariants: " << inv.notes()[i] << '\n';
  });

  log << std::left << std::setw(24) << "suite" << std::right << std::setw(8) << "cases" << std::setw(10) << "failures"
      << std::setw(12) << "ms" << '\n';
  for (const auto& r : rows) {
    log << std::left << std::setw(24) << r.name << std::right << std::setw(8) << r.cases << std::setw(10)
        << r.failures << std::setw(12) << std::fixed << std::setprecision(1) << r.millis << '\n';
  }
  return rows;
}

}  // namespace pedacc::harness
