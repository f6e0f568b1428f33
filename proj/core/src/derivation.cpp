#include "pedacc/derivation.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace pedacc {

namespace {

constexpr std::array<const char*, 3> kModeNames{"cc", "ccr", "naivep"};
constexpr std::array<const char*, 12> kRuleNames{"env1", "env2", "ax",     "var",  "abs",  "prod",
                                                 "app",  "conv", "prod_r", "p-ax", "p-var", "p-env"};

}  // namespace

std::string to_string(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }
std::string to_string(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<Mode> parse_mode(const std::string& s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (s == kModeNames[i]) return static_cast<Mode>(i);
  }
  return std::nullopt;
}

std::optional<Rule> parse_rule(const std::string& s) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  }
  return std::nullopt;
}

EnvPtr make_env(Environment env) { return std::make_shared<const Environment>(std::move(env)); }

Term Motivation::apply(const Term& t) const { return apply_prefix(t, bindings.size()); }

Term Motivation::apply_prefix(const Term& t, std::size_t n) const {
  std::vector<std::pair<VarRef, Term>> subst;
  for (std::size_t i = 0; i < n && i < bindings.size(); ++i) {
    subst.emplace_back(VarRef::named(bindings[i].first), bindings[i].second);
  }
  return subst_simultaneous(t, subst);
}

Judgment Judgment::well_formed(EnvPtr env) {
  Judgment j;
  j.kind = Kind::WellFormed;
  j.env = std::move(env);
  return j;
}

Judgment Judgment::has_type(EnvPtr env, Term term, Term type) {
  Judgment j;
  j.kind = Kind::HasType;
  j.env = std::move(env);
  j.term = std::move(term);
  j.type = std::move(type);
  return j;
}

DerivationPtr make_derivation(Rule rule, Mode mode, Judgment conclusion, std::vector<DerivationPtr> premises,
                              std::optional<Term> witness, std::optional<Motivation> motivation) {
  std::uint32_t h = 0;
  for (const auto& p : premises) h = std::max(h, p->height);
  auto d = std::make_shared<Derivation>(Derivation{rule, mode, std::move(conclusion), std::move(premises),
                                                   std::move(witness), std::move(motivation), h + 1});
  return d;
}

void for_each_node(const DerivationPtr& root, const std::function<void(const DerivationPtr&)>& f) {
  std::unordered_set<const Derivation*> seen;
  // Explicit stack: derivations of long environments are deep.
  struct Frame {
    DerivationPtr node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  if (root && seen.insert(root.get()).second) stack.push_back({root, 0});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next < top.node->premises.size()) {
      const DerivationPtr& p = top.node->premises[top.next++];
      if (p && seen.insert(p.get()).second) stack.push_back({p, 0});
      continue;
    }
    DerivationPtr done = top.node;
    stack.pop_back();
    f(done);
  }
}

std::size_t count_nodes(const DerivationPtr& root) {
  std::size_t n = 0;
  for_each_node(root, [&](const DerivationPtr&) { ++n; });
  return n;
}

DerivationPtr wf_of(const DerivationPtr& d) {
  if (!d) return nullptr;
  const Environment& target = d->env();
  std::vector<DerivationPtr> todo{d};
  std::unordered_set<const Derivation*> seen;
  while (!todo.empty()) {
    DerivationPtr cur = todo.back();
    todo.pop_back();
    if (!seen.insert(cur.get()).second) continue;
    if (cur->conclusion.is_wf() && cur->env().size() == target.size() && cur->env() == target) return cur;
    for (const auto& p : cur->premises) {
      if (p && p->mode == d->mode) todo.push_back(p);
    }
  }
  return nullptr;
}

std::vector<DerivationPtr> entry_sort_derivations(const DerivationPtr& wf) {
  std::vector<DerivationPtr> out;
  DerivationPtr cur = wf;
  while (cur && cur->rule == Rule::Env2) {
    const DerivationPtr& sort = cur->premises.at(0);
    out.push_back(sort);
    cur = wf_of(sort);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool is_sort_term(const std::optional<Term>& t) { return t && t->is(TermKind::Sort); }

bool env_extends(const Environment& big, const Environment& small, const Term& domain) {
  if (big.size() != small.size() + 1) return false;
  if (!(big.prefix(small.size()) == small)) return false;
  return big.back().type == domain && !small.contains(big.back().name);
}

std::optional<std::string> expect(bool cond, const char* msg) {
  if (cond) return std::nullopt;
  return std::string(msg);
}

// Checks premise `p` is HasType(env', open(body), ...) for the binder of `bin`.
std::optional<std::string> check_binder_premise(const Derivation& d, const Judgment& p, const Term& binder,
                                                const Term* opened_term, const Term* opened_type) {
  if (p.is_wf()) return "binder premise is not a typing judgment";
  if (!env_extends(*p.env, d.env(), binder.domain())) return "binder premise environment is not the extension";
  const std::string& x = p.env->back().name;
  if (opened_term && !(p.subject() == *opened_term)) return "binder premise subject mismatch";
  if (opened_type && !(p.ty() == *opened_type)) return "binder premise type mismatch";
  (void)x;
  return std::nullopt;
}

}  // namespace

std::optional<std::string> verify_node(const Derivation& d, Fuel fuel) {
  const Judgment& c = d.conclusion;
  const auto& ps = d.premises;
  auto premise_mode_ok = [&](std::size_t i) { return ps[i]->mode == d.mode; };
  for (const auto& p : ps) {
    if (!p) return "null premise";
  }

  switch (d.rule) {
    case Rule::Env1:
      if (auto e = expect(c.is_wf() && c.env->empty() && ps.empty(), "env1 schema")) return e;
      return expect(d.mode != Mode::NaiveP, "env1 in naive mode");
    case Rule::Env2: {
      if (!c.is_wf() || c.env->empty() || ps.size() != 1) return "env2 shape";
      if (d.mode == Mode::NaiveP) return "env2 in naive mode";
      const Judgment& p = ps[0]->conclusion;
      if (p.is_wf() || !premise_mode_ok(0)) return "env2 premise";
      Environment prefix = c.env->prefix(c.env->size() - 1);
      if (!(prefix == *p.env)) return "env2 premise environment";
      if (prefix.contains(c.env->back().name)) return "env2 name not fresh";
      if (!(p.subject() == c.env->back().type)) return "env2 premise subject";
      return expect(is_sort_term(p.type), "env2 premise type is not a sort");
    }
    case Rule::Ax:
    case Rule::PAx: {
      if (c.is_wf() || !c.subject().is_sort(Sort::Prop) || !c.ty().is_sort(Sort::Type)) return "ax conclusion";
      if (ps.size() != 1 || !ps[0]->conclusion.is_wf() || !(*ps[0]->conclusion.env == *c.env)) return "ax premise";
      if (d.rule == Rule::Ax) {
        if (d.mode == Mode::NaiveP) return "ax in naive mode";
        return expect(premise_mode_ok(0), "ax premise mode");
      }
      if (d.mode != Mode::NaiveP || ps[0]->rule != Rule::PEnv) return "p-ax outside naive mode";
      return expect(d.motivation && ps[0]->motivation && *d.motivation == *ps[0]->motivation, "p-ax motivation");
    }
    case Rule::Var:
    case Rule::PVar: {
      if (c.is_wf() || !c.subject().is(TermKind::Free)) return "var conclusion";
      const Entry* e = c.env->find(c.subject().name());
      if (!e || !(e->type == c.ty())) return "var: hypothesis not in environment";
      if (ps.size() != 1 || !ps[0]->conclusion.is_wf() || !(*ps[0]->conclusion.env == *c.env)) return "var premise";
      if (d.rule == Rule::Var) {
        if (d.mode == Mode::NaiveP) return "var in naive mode";
        return expect(premise_mode_ok(0), "var premise mode");
      }
      if (d.mode != Mode::NaiveP || ps[0]->rule != Rule::PEnv) return "p-var outside naive mode";
      return expect(d.motivation && ps[0]->motivation && *d.motivation == *ps[0]->motivation, "p-var motivation");
    }
    case Rule::PEnv: {
      if (!c.is_wf() || d.mode != Mode::NaiveP || !d.motivation) return "p-env shape";
      const Motivation& s = *d.motivation;
      if (s.size() != c.env->size() || ps.size() != s.size()) return "p-env motivation domain";
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.bindings[i].first != (*c.env)[i].name) return "p-env motivation names";
        if (!is_closed(s.bindings[i].second)) return "p-env witness not closed";
        const Judgment& p = ps[i]->conclusion;
        if (ps[i]->mode != Mode::CC || p.is_wf() || !p.env->empty()) return "p-env cascade premise";
        if (!(p.subject() == s.bindings[i].second)) return "p-env cascade subject";
        if (!(p.ty() == s.apply_prefix((*c.env)[i].type, i))) return "p-env cascade type";
      }
      return std::nullopt;
    }
    case Rule::Abs: {
      if (c.is_wf() || !c.subject().is(TermKind::Abs) || !c.ty().is(TermKind::Prod)) return "abs conclusion";
      const Term& lam = c.subject();
      const Term& pi = c.ty();
      if (!(lam.domain() == pi.domain())) return "abs domain mismatch";
      if (ps.size() != 2 || !premise_mode_ok(0) || !premise_mode_ok(1)) return "abs premises";
      const Judgment& p0 = ps[0]->conclusion;
      if (p0.is_wf() || p0.env->empty()) return "abs premise";
      const std::string& x = p0.env->back().name;
      Term u = open_binder(lam.body(), x);
      Term b = open_binder(pi.body(), x);
      if (auto e = check_binder_premise(d, p0, lam, &u, &b)) return e;
      const Judgment& p1 = ps[1]->conclusion;
      if (auto e = check_binder_premise(d, p1, lam, &b, nullptr)) return e;
      if (!(*p1.env == *p0.env)) return "abs premise environments differ";
      return expect(is_sort_term(p1.type), "abs: type of body type is not a sort");
    }
    case Rule::Prod:
    case Rule::ProdR: {
      if (c.is_wf() || !c.subject().is(TermKind::Prod) || !is_sort_term(c.type)) return "prod conclusion";
      if (d.rule == Rule::Prod && d.mode == Mode::CCr) return "prod in restricted mode";
      if (d.rule == Rule::ProdR && d.mode != Mode::CCr) return "prod_r outside restricted mode";
      const Term& pi = c.subject();
      std::size_t sort_idx = d.rule == Rule::Prod ? 0 : 1;
      if (ps.size() != sort_idx + 1) return "prod premises";
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!premise_mode_ok(i)) return "prod premise mode";
      }
      const Judgment& ps_sort = ps[sort_idx]->conclusion;
      if (ps_sort.is_wf() || ps_sort.env->empty()) return "prod premise";
      const std::string& x = ps_sort.env->back().name;
      Term b = open_binder(pi.body(), x);
      if (auto e = check_binder_premise(d, ps_sort, pi, &b, &c.ty())) return e;
      if (d.rule == Rule::Prod) return std::nullopt;
      const Judgment& pw = ps[0]->conclusion;
      if (!d.witness) return "prod_r without witness";
      if (auto e = check_binder_premise(d, pw, pi, &*d.witness, &b)) return e;
      return expect(*pw.env == *ps_sort.env, "prod_r premise environments differ");
    }
    case Rule::App: {
      if (c.is_wf() || !c.subject().is(TermKind::App)) return "app conclusion";
      if (ps.size() != 2 || !premise_mode_ok(0) || !premise_mode_ok(1)) return "app premises";
      const Judgment& pf = ps[0]->conclusion;
      const Judgment& pa = ps[1]->conclusion;
      if (pf.is_wf() || pa.is_wf() || !(*pf.env == *c.env) || !(*pa.env == *c.env)) return "app premise shape";
      if (!(pf.subject() == c.subject().fun()) || !(pa.subject() == c.subject().arg())) return "app subjects";
      if (!pf.ty().is(TermKind::Prod)) return "app: function type is not a product";
      if (!(pf.ty().domain() == pa.ty())) return "app: argument type differs from domain";
      return expect(c.ty() == instantiate(pf.ty().body(), c.subject().arg()), "app: result type");
    }
    case Rule::Conv: {
      if (c.is_wf() || ps.size() != 2 || !premise_mode_ok(0) || !premise_mode_ok(1)) return "conv shape";
      const Judgment& p0 = ps[0]->conclusion;
      const Judgment& p1 = ps[1]->conclusion;
      if (p0.is_wf() || p1.is_wf() || !(*p0.env == *c.env) || !(*p1.env == *c.env)) return "conv premise shape";
      if (!(p0.subject() == c.subject())) return "conv subject";
      if (!(p1.subject() == c.ty()) || !is_sort_term(p1.type)) return "conv: target type not sorted";
      return expect(convertible(p0.ty(), c.ty(), fuel), "conv: types not convertible");
    }
  }
  return "unknown rule";
}

std::optional<std::string> verify_derivation(const DerivationPtr& root, Fuel fuel) {
  std::optional<std::string> failure;
  for_each_node(root, [&](const DerivationPtr& d) {
    if (failure) return;
    if (auto e = verify_node(*d, fuel)) failure = to_string(d->rule) + ": " + *e;
  });
  return failure;
}

std::vector<std::string> rule_script(const std::vector<DerivationPtr>& roots) {
  std::vector<DerivationPtr> order;
  std::unordered_set<const Derivation*> seen;
  for (const auto& r : roots) {
    if (!r) continue;
    std::vector<DerivationPtr> local;
    for_each_node(r, [&](const DerivationPtr& d) { local.push_back(d); });
    for (auto& d : local) {
      if (seen.insert(d.get()).second) order.push_back(d);
    }
  }
  std::vector<std::string> script;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Derivation& d = *order[i];
    const Derivation* next = i + 1 < order.size() ? order[i + 1].get() : nullptr;
    if (d.rule == Rule::Var && next && next->rule == Rule::Var && next->env() == d.env()) {
      script.push_back("var");
      ++i;
      continue;
    }
    if (d.rule == Rule::Abs && next && next->rule == Rule::ProdR && next->env() == d.env() &&
        next->conclusion.subject() == d.conclusion.ty()) {
      script.push_back("abs+prod");
      ++i;
      continue;
    }
    script.push_back(to_string(d.rule));
  }
  return script;
}

}  // namespace pedacc
