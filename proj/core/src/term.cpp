#include "pedacc/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace pedacc {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Rebuilds a binary node only when a child actually changed.
Term rebuild(const Term& t, Term a, Term b) {
  if (a.same_node(t.fun()) && b.same_node(t.arg())) return t;
  switch (t.kind()) {
    case TermKind::App:
      return Term::app(std::move(a), std::move(b));
    case TermKind::Abs:
      return Term::abs(std::move(a), std::move(b), t.hint());
    case TermKind::Prod:
      return Term::prod(std::move(a), std::move(b), t.hint());
    default:
      return t;
  }
}

bool binds(const Term& t) { return t.is(TermKind::Abs) || t.is(TermKind::Prod); }

}  // namespace

Term Term::make(TermNode n) {
  std::size_t h = mix(static_cast<std::size_t>(n.kind) * 31 + 7, 0);
  switch (n.kind) {
    case TermKind::Sort:
      h = mix(h, static_cast<std::size_t>(n.sort));
      n.mentions_type = n.sort == Sort::Type;
      break;
    case TermKind::Bound:
      h = mix(h, n.index);
      n.loose = n.index + 1;
      break;
    case TermKind::Free:
      h = mix(h, std::hash<std::string>{}(n.name));
      n.has_free = true;
      break;
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod: {
      const Term& a = *n.a;
      const Term& b = *n.b;
      h = mix(mix(h, a.hash()), b.hash());
      n.size = 1 + a.size() + b.size();
      std::uint32_t lb = b.loose_bound();
      if (n.kind != TermKind::App) lb = lb > 0 ? lb - 1 : 0;
      n.loose = std::max(a.loose_bound(), lb);
      n.has_free = a.has_free() || b.has_free();
      n.mentions_type = a.mentions_type() || b.mentions_type();
      break;
    }
  }
  n.hash = h;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::sort(Sort s) {
  TermNode n;
  n.kind = TermKind::Sort;
  n.sort = s;
  return make(std::move(n));
}

Term Term::prop() {
  static const Term p = sort(Sort::Prop);
  return p;
}

Term Term::type() {
  static const Term t = sort(Sort::Type);
  return t;
}

Term Term::bound(std::uint32_t index) {
  TermNode n;
  n.kind = TermKind::Bound;
  n.index = index;
  return make(std::move(n));
}

Term Term::free(std::string name) {
  TermNode n;
  n.kind = TermKind::Free;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  TermNode n;
  n.kind = TermKind::App;
  n.a = std::move(fun);
  n.b = std::move(arg);
  return make(std::move(n));
}

Term Term::abs(Term domain, Term body, std::string hint) {
  TermNode n;
  n.kind = TermKind::Abs;
  n.name = std::move(hint);
  n.a = std::move(domain);
  n.b = std::move(body);
  return make(std::move(n));
}

Term Term::prod(Term domain, Term body, std::string hint) {
  TermNode n;
  n.kind = TermKind::Prod;
  n.name = std::move(hint);
  n.a = std::move(domain);
  n.b = std::move(body);
  return make(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Sort:
      return a.sort_value() == b.sort_value();
    case TermKind::Bound:
      return a.index() == b.index();
    case TermKind::Free:
      return a.name() == b.name();
    default:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
}

Term lift(const Term& t, std::uint32_t cutoff, std::uint32_t amount) {
  if (amount == 0 || t.loose_bound() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return Term::bound(t.index() + amount);
    case TermKind::App:
      return rebuild(t, lift(t.fun(), cutoff, amount), lift(t.arg(), cutoff, amount));
    case TermKind::Abs:
    case TermKind::Prod:
      return rebuild(t, lift(t.domain(), cutoff, amount), lift(t.body(), cutoff + 1, amount));
    default:
      return t;
  }
}

std::optional<Term> lower(const Term& t, std::uint32_t cutoff, std::uint32_t amount) {
  if (amount == 0 || t.loose_bound() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() < cutoff + amount) return std::nullopt;
      return Term::bound(t.index() - amount);
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod: {
      auto a = lower(t.fun(), cutoff, amount);
      if (!a) return std::nullopt;
      auto b = lower(t.arg(), binds(t) ? cutoff + 1 : cutoff, amount);
      if (!b) return std::nullopt;
      return rebuild(t, std::move(*a), std::move(*b));
    }
    default:
      return t;
  }
}

namespace {

// t[depth <- value], decrementing indices above depth.
Term instantiate_at(const Term& t, std::uint32_t depth, const Term& value) {
  if (t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() == depth) return lift(value, 0, depth);
      return Term::bound(t.index() - 1);
    case TermKind::App:
      return rebuild(t, instantiate_at(t.fun(), depth, value), instantiate_at(t.arg(), depth, value));
    case TermKind::Abs:
    case TermKind::Prod:
      return rebuild(t, instantiate_at(t.domain(), depth, value),
                     instantiate_at(t.body(), depth + 1, value));
    default:
      return t;
  }
}

struct Replacer {
  const std::unordered_map<std::string, Term>* named = nullptr;
  const std::unordered_map<std::uint32_t, Term>* indexed = nullptr;
  std::uint32_t max_index = 0;  // one more than the largest bound target

  bool may_touch(const Term& t, std::uint32_t depth) const {
    if (named && !named->empty() && t.has_free()) return true;
    return indexed && !indexed->empty() && t.loose_bound() > depth;
  }

  Term run(const Term& t, std::uint32_t depth) const {
    if (!may_touch(t, depth)) return t;
    switch (t.kind()) {
      case TermKind::Free: {
        if (!named) return t;
        auto it = named->find(t.name());
        return it == named->end() ? t : lift(it->second, 0, depth);
      }
      case TermKind::Bound: {
        if (!indexed || t.index() < depth) return t;
        auto it = indexed->find(t.index() - depth);
        return it == indexed->end() ? t : lift(it->second, 0, depth);
      }
      case TermKind::App:
        return rebuild(t, run(t.fun(), depth), run(t.arg(), depth));
      case TermKind::Abs:
      case TermKind::Prod:
        return rebuild(t, run(t.domain(), depth), run(t.body(), depth + 1));
      default:
        return t;
    }
  }
};

}  // namespace

Term instantiate(const Term& body, const Term& value) { return instantiate_at(body, 0, value); }

Term subst(const Term& t, const VarRef& target, const Term& u) {
  return subst_simultaneous(t, {{target, u}});
}

Term subst_simultaneous(const Term& t, const std::vector<std::pair<VarRef, Term>>& bindings) {
  std::unordered_map<std::string, Term> named;
  std::unordered_map<std::uint32_t, Term> indexed;
  for (const auto& [ref, image] : bindings) {
    bool fresh = ref.is_named() ? named.emplace(ref.name(), image).second
                                : indexed.emplace(ref.index(), image).second;
    if (!fresh) {
      throw std::invalid_argument("simultaneous substitution binds a variable twice: " +
                                  (ref.is_named() ? ref.name() : "#" + std::to_string(ref.index())));
    }
  }
  Replacer r;
  r.named = &named;
  r.indexed = &indexed;
  return r.run(t, 0);
}

namespace {

void collect_free(const Term& t, std::set<std::string>& out) {
  if (!t.has_free()) return;
  switch (t.kind()) {
    case TermKind::Free:
      out.insert(t.name());
      return;
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod:
      collect_free(t.fun(), out);
      collect_free(t.arg(), out);
      return;
    default:
      return;
  }
}

Term open_at(const Term& t, std::uint32_t depth, const Term& var) {
  if (t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() == depth) return var;
      return t.index() > depth ? Term::bound(t.index() - 1) : t;
    case TermKind::App:
      return rebuild(t, open_at(t.fun(), depth, var), open_at(t.arg(), depth, var));
    case TermKind::Abs:
    case TermKind::Prod:
      return rebuild(t, open_at(t.domain(), depth, var), open_at(t.body(), depth + 1, var));
    default:
      return t;
  }
}

Term close_at(const Term& t, std::uint32_t depth, const std::string& name) {
  if (!t.has_free() && t.loose_bound() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Free:
      return t.name() == name ? Term::bound(depth) : t;
    case TermKind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case TermKind::App:
      return rebuild(t, close_at(t.fun(), depth, name), close_at(t.arg(), depth, name));
    case TermKind::Abs:
    case TermKind::Prod:
      return rebuild(t, close_at(t.domain(), depth, name), close_at(t.body(), depth + 1, name));
    default:
      return t;
  }
}

bool uses_index(const Term& t, std::uint32_t depth) {
  if (t.loose_bound() <= depth) return false;
  switch (t.kind()) {
    case TermKind::Bound:
      return t.index() == depth;
    case TermKind::App:
      return uses_index(t.fun(), depth) || uses_index(t.arg(), depth);
    case TermKind::Abs:
    case TermKind::Prod:
      return uses_index(t.domain(), depth) || uses_index(t.body(), depth + 1);
    default:
      return false;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

bool occurs_free(const Term& t, const std::string& name) {
  if (!t.has_free()) return false;
  switch (t.kind()) {
    case TermKind::Free:
      return t.name() == name;
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod:
      return occurs_free(t.fun(), name) || occurs_free(t.arg(), name);
    default:
      return false;
  }
}

bool is_closed(const Term& t) { return !t.has_free(); }

Term open_binder(const Term& body, const std::string& fresh) {
  if (occurs_free(body, fresh)) {
    throw std::invalid_argument("open_binder: name '" + fresh + "' already occurs in the body");
  }
  return open_at(body, 0, Term::free(fresh));
}

Term close_binder(const Term& t, const std::string& name) { return close_at(t, 0, name); }

bool binder_used(const Term& body) { return uses_index(body, 0); }

Term mk_apps(Term head, const std::vector<Term>& args) {
  for (const auto& a : args) head = Term::app(std::move(head), a);
  return head;
}

std::pair<Term, std::vector<Term>> spine(const Term& t) {
  std::vector<Term> args;
  const Term* cur = &t;
  while (cur->is(TermKind::App)) {
    args.push_back(cur->arg());
    cur = &cur->fun();
  }
  std::reverse(args.begin(), args.end());
  return {*cur, std::move(args)};
}

namespace {

bool match_at(const Term& pat, const Term& target, std::uint32_t depth, const std::set<std::string>& vars,
              std::unordered_map<std::string, Term>& theta) {
  if (pat.is(TermKind::Free) && vars.count(pat.name())) {
    auto lowered = lower(target, 0, depth);
    if (!lowered) return false;
    auto [it, fresh] = theta.emplace(pat.name(), *lowered);
    return fresh || it->second == *lowered;
  }
  if (pat.kind() != target.kind()) return false;
  switch (pat.kind()) {
    case TermKind::Sort:
      return pat.sort_value() == target.sort_value();
    case TermKind::Bound:
      return pat.index() == target.index();
    case TermKind::Free:
      return pat.name() == target.name();
    case TermKind::App:
      return match_at(pat.fun(), target.fun(), depth, vars, theta) &&
             match_at(pat.arg(), target.arg(), depth, vars, theta);
    case TermKind::Abs:
    case TermKind::Prod:
      return match_at(pat.domain(), target.domain(), depth, vars, theta) &&
             match_at(pat.body(), target.body(), depth + 1, vars, theta);
  }
  return false;
}

}  // namespace

bool match_pattern(const Term& pattern, const Term& target, const std::set<std::string>& vars,
                   std::unordered_map<std::string, Term>& theta) {
  return match_at(pattern, target, 0, vars, theta);
}

}  // namespace pedacc
