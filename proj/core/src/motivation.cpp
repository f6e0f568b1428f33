#include "pedacc/motivation.hpp"

#include <unordered_map>
#include <unordered_set>

#include "pedacc/prelude.hpp"

namespace pedacc {

// ---------------------------------------------------------------------------
// Search.

namespace {

class Searcher {
 public:
  Searcher(const Environment& env, Fuel fuel) : fuel_(fuel) {
    for (const auto& e : env) push(e.name, e.type);
  }

  std::optional<Term> run(const Term& goal, unsigned depth) {
    if (++steps_ > kMaxSteps) return std::nullopt;
    Term g = whnf(goal, fuel_);
    if (g.is_sort(Sort::Prop)) return prelude::top();
    if (g.is_sort(Sort::Type)) return std::nullopt;
    if (g.is(TermKind::Prod)) {
      std::string x = fresh(g.hint(), g.body());
      push(x, g.domain());
      auto r = run(open_binder(g.body(), x), depth);
      pop();
      if (!r) return std::nullopt;
      return Term::abs(g.domain(), close_binder(*r, x), g.hint());
    }
    Term gnf = normalize(g, fuel_);
    for (std::size_t i = names_.size(); i-- > 0;) {
      if (types_nf_[i] == gnf) return Term::free(names_[i]);
    }
    if (depth == 0) return std::nullopt;
    FailKey key{names_.size(), gnf};
    if (auto it = failed_.find(key); it != failed_.end() && it->second >= depth) return std::nullopt;
    for (std::size_t i = names_.size(); i-- > 0;) {
      if (auto r = apply(i, gnf, depth)) return r;
    }
    unsigned& best = failed_[key];
    best = std::max(best, depth);
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kMaxSteps = 20000;

  struct FailKey {
    std::size_t size;
    Term goal;
    bool operator==(const FailKey& o) const { return size == o.size && goal == o.goal; }
  };
  struct FailHash {
    std::size_t operator()(const FailKey& k) const { return k.goal.hash() * 31 + k.size; }
  };

  // Tries `h m1 .. mk` for growing k, solving the metas by matching the
  // codomain against the goal and searching for the rest.
  std::optional<Term> apply(std::size_t i, const Term& gnf, unsigned depth) {
    Term head = Term::free(names_[i]);
    Term cur = types_nf_[i];
    std::vector<std::string> metas;
    std::vector<Term> domains;
    for (std::size_t k = 0; k < kMaxArgs; ++k) {
      cur = whnf(cur, fuel_);
      if (!cur.is(TermKind::Prod)) return std::nullopt;
      std::string m = std::string(1, kReservedPrefix) + "m" + std::to_string(meta_counter_++);
      metas.push_back(m);
      domains.push_back(cur.domain());
      cur = open_binder(cur.body(), m);
      std::set<std::string> vars(metas.begin(), metas.end());
      std::unordered_map<std::string, Term> theta;
      if (!match_pattern(normalize(cur, fuel_), gnf, vars, theta)) continue;
      std::vector<Term> args;
      std::vector<std::pair<VarRef, Term>> solved;
      bool okay = true;
      for (std::size_t j = 0; j < metas.size() && okay; ++j) {
        auto it = theta.find(metas[j]);
        Term a = Term::prop();
        if (it != theta.end()) {
          a = it->second;
        } else {
          auto r = run(subst_simultaneous(domains[j], solved), depth - 1);
          if (!r) {
            okay = false;
            break;
          }
          a = *r;
        }
        args.push_back(a);
        solved.emplace_back(VarRef::named(metas[j]), a);
      }
      if (okay) return mk_apps(head, args);
    }
    return std::nullopt;
  }

  std::string fresh(const std::string& hint, const Term& avoid) {
    std::string base = hint.empty() || hint[0] == kReservedPrefix ? "x" : hint;
    std::string x = std::string(1, kReservedPrefix) + "s" + base + std::to_string(names_.size());
    while (occurs_free(avoid, x)) x += "'";
    return x;
  }

  void push(const std::string& name, const Term& type) {
    names_.push_back(name);
    types_nf_.push_back(normalize(type, fuel_));
  }
  void pop() {
    names_.pop_back();
    types_nf_.pop_back();
  }

  static constexpr std::size_t kMaxArgs = 6;

  Fuel fuel_;
  std::vector<std::string> names_;
  std::vector<Term> types_nf_;
  std::unordered_map<FailKey, unsigned, FailHash> failed_;
  std::size_t steps_ = 0;
  std::size_t meta_counter_ = 0;
};

}  // namespace

std::optional<Term> propose_inhabitant(const Environment& env, const Term& goal, unsigned depth, Fuel fuel) {
  try {
    Searcher s(env, fuel);
    return s.run(goal, depth);
  } catch (const FuelExhausted&) {
    return std::nullopt;
  }
}

std::optional<Inhabited> inhabit_search(const Environment& env, const Term& goal, unsigned depth,
                                        const CheckOptions& opts) {
  auto proposal = propose_inhabitant(env, goal, depth, opts.fuel);
  if (!proposal) return std::nullopt;
  auto r = check_type(env, *proposal, goal, Mode::CCr, opts);
  if (!ok(r)) return std::nullopt;
  return Inhabited{*proposal, value(r).derivation};
}

bool check_poincare(const Environment& env, const Motivation& candidate, const CheckOptions& opts) {
  return ok(check_motivated_env(env, candidate, Mode::CC, opts));
}

// ---------------------------------------------------------------------------
// Extraction.

namespace {

CheckOptions with_hints(const CheckOptions& base, const DerivationPtr& d) {
  CheckOptions o = base;
  auto extra = collect_hints(d);
  o.hints.insert(o.hints.end(), extra.begin(), extra.end());
  return o;
}

template <class T>
T expect_ok(Result<T> r, const char* what) {
  if (!ok(r)) throw MotivationError(std::string(what) + ": " + error(r).message + " at " + error(r).where);
  return std::move(std::get<T>(r));
}

void require_restricted(const DerivationPtr& d, const char* what) {
  if (!d) throw MotivationError(std::string(what) + ": missing derivation");
  if (d->mode != Mode::CCr) throw MotivationError(std::string(what) + ": derivation is not in restricted mode");
}

// Conv node turning `|- t : A` into `|- t : goal` given `|- goal : k`.
DerivationPtr conv_to(const DerivationPtr& d, const Term& goal, const DerivationPtr& goal_sort) {
  if (d->conclusion.ty() == goal) return d;
  Judgment j = Judgment::has_type(d->conclusion.env, d->conclusion.subject(), goal);
  return make_derivation(Rule::Conv, d->mode, j, {d, goal_sort});
}

Inhabited applied(const DerivationPtr& d, const std::vector<Term>& args, const MotivationOptions& opts,
                  int parent) {
  const Term& b = d->conclusion.subject();
  Term goal = mk_apps(b, args);
  int self = parent;
  if (opts.trace) {
    opts.trace->push_back({goal, d->height, parent});
    self = static_cast<int>(opts.trace->size()) - 1;
  }
  const CheckOptions copts = with_hints(opts.check, d);

  switch (d->rule) {
    case Rule::ProdR:
      if (!args.empty()) throw MotivationError("inhabit_applied: product applied to arguments");
      return inhabit_from_prod_derivation(d);

    case Rule::Abs: {
      if (args.empty()) throw MotivationError("inhabit_applied: abstraction used as a proposition");
      Term reduced = instantiate(b.body(), args[0]);
      Typed typed = expect_ok(infer_type(Environment(), reduced, Mode::CCr, copts), "abs case");
      std::vector<Term> rest(args.begin() + 1, args.end());
      Inhabited inner = applied(typed.derivation, rest, opts, self);
      Checked sort = expect_ok(check_type(Environment(), goal, Term::prop(), Mode::CCr, copts), "abs case sort");
      return {inner.term, conv_to(inner.derivation, goal, sort.derivation)};
    }

    case Rule::App: {
      std::vector<Term> more{b.arg()};
      more.insert(more.end(), args.begin(), args.end());
      return applied(d->premises[0], more, opts, self);
    }

    case Rule::Conv: {
      const DerivationPtr& inner = d->premises[0];
      // Re-type the arguments against the telescope of the premise's type.
      Term tele = normalize(inner->conclusion.ty(), copts.fuel);
      for (const Term& w : args) {
        tele = whnf(tele, copts.fuel);
        if (!tele.is(TermKind::Prod)) throw MotivationError("inhabit_applied: conv premise telescope too short");
        expect_ok(check_type(Environment(), w, tele.domain(), Mode::CCr, copts), "conv case argument");
        tele = instantiate(tele.body(), w);
      }
      if (!normalize(tele, copts.fuel).is_sort(Sort::Prop)) {
        throw MotivationError("inhabit_applied: unreachable conv case (premise type is not Type-sorted)");
      }
      return applied(inner, args, opts, self);
    }

    default:
      throw MotivationError("inhabit_applied: unreachable case " + to_string(d->rule));
  }
}

}  // namespace

Inhabited inhabit_from_prod_derivation(const DerivationPtr& d) {
  require_restricted(d, "inhabit_from_prod_derivation");
  switch (d->rule) {
    case Rule::ProdR: {
      const Term& p = d->conclusion.subject();
      const std::string& x = d->premises[0]->env().back().name;
      Term lam = Term::abs(p.domain(), close_binder(*d->witness, x), p.hint());
      Judgment j = Judgment::has_type(d->conclusion.env, lam, p);
      return {lam, make_derivation(Rule::Abs, Mode::CCr, j, {d->premises[0], d->premises[1]})};
    }
    case Rule::Conv:
      return inhabit_from_prod_derivation(d->premises[0]);
    default:
      throw MotivationError("inhabit_from_prod_derivation: not a product formation (" + to_string(d->rule) + ")");
  }
}

Inhabited inhabit_type_sorted(const DerivationPtr& d, const MotivationOptions& opts) {
  require_restricted(d, "inhabit_type_sorted");
  const Term& b = d->conclusion.subject();
  if (!d->conclusion.ty().is_sort(Sort::Type)) throw MotivationError("inhabit_type_sorted: type is not Type");
  Term n = normalize(b, opts.check.fuel);
  std::function<Term(const Term&)> build = [&](const Term& t) -> Term {
    if (t.is_sort(Sort::Prop)) return prelude::top();
    if (!t.is(TermKind::Prod)) throw MotivationError("inhabit_type_sorted: normal form is not an arity");
    return Term::abs(t.domain(), build(t.body()), t.hint());
  };
  Term lam = build(n);
  Checked c =
      expect_ok(check_type(d->env(), lam, n, Mode::CCr, with_hints(opts.check, d)), "inhabit_type_sorted");
  return {lam, conv_to(c.derivation, b, d)};
}

Inhabited inhabit_applied(const DerivationPtr& d, const std::vector<Term>& args, const MotivationOptions& opts) {
  require_restricted(d, "inhabit_applied");
  if (!d->env().empty() || !is_closed(d->conclusion.subject())) {
    throw MotivationError("inhabit_applied: the proposition must be closed");
  }
  for (const auto& a : args) {
    if (!is_closed(a)) throw MotivationError("inhabit_applied: arguments must be closed");
  }
  return applied(d, args, opts, -1);
}

Inhabited inhabit_closed(const DerivationPtr& d, const MotivationOptions& opts) {
  require_restricted(d, "inhabit_closed");
  Term k = normalize(d->conclusion.ty(), opts.check.fuel);
  if (k.is_sort(Sort::Type)) return inhabit_type_sorted(d, opts);
  if (k.is_sort(Sort::Prop)) return inhabit_applied(d, {}, opts);
  throw MotivationError("inhabit_closed: not a type");
}

MotivationResult motivate_env(const DerivationPtr& wf, const MotivationOptions& opts) {
  require_restricted(wf, "motivate_env");
  if (!wf->conclusion.is_wf()) throw MotivationError("motivate_env: not a well-formedness derivation");
  const Environment& env = wf->env();
  std::vector<DerivationPtr> sorts = entry_sort_derivations(wf);
  if (sorts.size() != env.size()) throw MotivationError("motivate_env: malformed environment derivation");
  const CheckOptions copts = with_hints(opts.check, wf);
  MotivationResult out;
  for (std::size_t i = 0; i < env.size(); ++i) {
    // Substituting the earlier witnesses closes the type; its sort is
    // re-derived rather than transported.
    Term closed = out.motivation.apply(env[i].type);
    const Term& kappa = sorts[i]->conclusion.ty();
    Checked sort = expect_ok(check_type(Environment(), closed, kappa, Mode::CCr, copts), "motivate_env");
    Inhabited w = inhabit_closed(sort.derivation, opts);
    if (!is_closed(w.term)) throw MotivationError("motivate_env: witness is not closed");
    out.motivation.bindings.emplace_back(env[i].name, w.term);
    out.cascade.push_back(w.derivation);
  }
  return out;
}

std::pair<MotivationResult, DerivationPtr> motivate_judgment(const DerivationPtr& d, const MotivationOptions& opts) {
  require_restricted(d, "motivate_judgment");
  if (d->conclusion.is_wf()) throw MotivationError("motivate_judgment: not a typing judgment");
  DerivationPtr wf = wf_of(d);
  if (!wf) throw MotivationError("motivate_judgment: no environment derivation");
  MotivationResult m = motivate_env(wf, opts);
  Term u = m.motivation.apply(d->conclusion.subject());
  Term b = m.motivation.apply(d->conclusion.ty());
  if (b.is_sort(Sort::Type)) {
    Typed t = expect_ok(infer_type(Environment(), u, Mode::CCr, with_hints(opts.check, d)), "motivate_judgment");
    return {m, t.derivation};
  }
  Checked c = expect_ok(check_type(Environment(), u, b, Mode::CCr, with_hints(opts.check, d)), "motivate_judgment");
  return {m, c.derivation};
}

Inhabited usefulness_argument(const DerivationPtr& d, const MotivationOptions& opts) {
  require_restricted(d, "usefulness_argument");
  if (d->conclusion.is_wf() || !d->env().empty()) throw MotivationError("usefulness_argument: needs |- f : T");
  Term t = whnf(d->conclusion.ty(), opts.check.fuel);
  if (!t.is(TermKind::Prod)) throw MotivationError("usefulness_argument: the type is not a product");
  // |- f : forall x:A.B gives |- forall x:A.B : k, whose premise lives in
  // the environment x:A.
  DerivationPtr wf;
  auto sort = type_sort_of(d, with_hints(opts.check, d));
  if (ok(sort) && value(sort)->rule == Rule::ProdR) wf = wf_of(value(sort)->premises.back());
  if (!wf) {
    Environment env({{"x", t.domain(), std::nullopt}});
    wf = expect_ok(check_wf(env, Mode::CCr, with_hints(opts.check, d)), "usefulness_argument");
  }
  MotivationResult m = motivate_env(wf, opts);
  return {m.motivation.bindings.at(0).second, m.cascade.at(0)};
}

}  // namespace pedacc
