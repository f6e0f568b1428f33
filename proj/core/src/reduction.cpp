#include "pedacc/reduction.hpp"

#include <memory>
#include <string>
#include <unordered_map>

namespace pedacc {

FuelExhausted::FuelExhausted(std::uint64_t steps)
    : std::runtime_error("reduction fuel exhausted after " + std::to_string(steps) + " steps"),
      steps_(steps) {}

BoundExceeded::BoundExceeded(std::uint64_t bound)
    : std::runtime_error("longest reduction exceeds bound " + std::to_string(bound)) {}

// ---------------------------------------------------------------------------
// Small-step reduction on terms.

namespace {

std::optional<Term> contract(const Term& t) {
  if (t.is(TermKind::App) && t.fun().is(TermKind::Abs)) return instantiate(t.fun().body(), t.arg());
  return std::nullopt;
}

Term with_children(const Term& t, Term a, Term b) {
  switch (t.kind()) {
    case TermKind::App:
      return Term::app(std::move(a), std::move(b));
    case TermKind::Abs:
      return Term::abs(std::move(a), std::move(b), t.hint());
    default:
      return Term::prod(std::move(a), std::move(b), t.hint());
  }
}

bool compound(const Term& t) {
  return t.is(TermKind::App) || t.is(TermKind::Abs) || t.is(TermKind::Prod);
}

std::optional<Term> step_outermost(const Term& t) {
  if (auto r = contract(t)) return r;
  if (!compound(t)) return std::nullopt;
  if (auto r = step_outermost(t.fun())) return with_children(t, std::move(*r), t.arg());
  if (auto r = step_outermost(t.arg())) return with_children(t, t.fun(), std::move(*r));
  return std::nullopt;
}

std::optional<Term> step_innermost(const Term& t) {
  if (!compound(t)) return std::nullopt;
  if (auto r = step_innermost(t.arg())) return with_children(t, t.fun(), std::move(*r));
  if (auto r = step_innermost(t.fun())) return with_children(t, std::move(*r), t.arg());
  return contract(t);
}

void collect_reducts(const Term& t, std::vector<Term>& out) {
  if (auto r = contract(t)) out.push_back(std::move(*r));
  if (!compound(t)) return;
  std::vector<Term> sub;
  collect_reducts(t.fun(), sub);
  for (auto& r : sub) out.push_back(with_children(t, std::move(r), t.arg()));
  sub.clear();
  collect_reducts(t.arg(), sub);
  for (auto& r : sub) out.push_back(with_children(t, t.fun(), std::move(r)));
}

}  // namespace

std::optional<Term> beta_step(const Term& t) { return step_outermost(t); }

std::optional<Term> beta_step(const Term& t, Strategy strategy) {
  return strategy == Strategy::LeftmostOutermost ? step_outermost(t) : step_innermost(t);
}

std::vector<Term> one_step_reducts(const Term& t) {
  std::vector<Term> out;
  collect_reducts(t, out);
  return out;
}

bool is_normal(const Term& t) {
  if (t.is(TermKind::App) && t.fun().is(TermKind::Abs)) return false;
  if (!compound(t)) return true;
  return is_normal(t.fun()) && is_normal(t.arg());
}

Term normalize_stepwise(const Term& t, Strategy strategy, Fuel fuel) {
  Term cur = t;
  for (std::uint64_t steps = 0;; ++steps) {
    auto next = beta_step(cur, strategy);
    if (!next) return cur;
    if (steps >= fuel.max_steps) throw FuelExhausted(steps);
    cur = std::move(*next);
  }
}

Term whnf(const Term& t, Fuel fuel) {
  auto [head, args] = spine(t);
  std::size_t used = 0;
  std::uint64_t steps = 0;
  while (head.is(TermKind::Abs) && used < args.size()) {
    if (steps++ >= fuel.max_steps) throw FuelExhausted(steps - 1);
    head = instantiate(head.body(), args[used++]);
    if (head.is(TermKind::App)) {
      auto [h2, more] = spine(head);
      more.insert(more.end(), args.begin() + static_cast<long>(used), args.end());
      head = h2;
      args = std::move(more);
      used = 0;
    }
  }
  if (used == 0 && head.same_node(spine(t).first)) return t;
  return mk_apps(head, std::vector<Term>(args.begin() + static_cast<long>(used), args.end()));
}

// ---------------------------------------------------------------------------
// Normalization by evaluation with call-by-need closures.

namespace {

struct Value;
struct Thunk;
struct EnvNode;
using ValuePtr = std::shared_ptr<const Value>;
using ThunkPtr = std::shared_ptr<Thunk>;
using EnvPtr = std::shared_ptr<const EnvNode>;

struct EnvNode {
  ThunkPtr head;
  EnvPtr tail;
};

struct Thunk {
  EnvPtr env;
  std::optional<Term> term;
  ValuePtr value;
};

enum class VKind { Sort, Neutral, Lam, Pi };
enum class HeadKind { Free, Level, Outer, Stuck };

struct Value {
  VKind kind = VKind::Sort;
  Sort sort = Sort::Prop;
  // Neutral
  HeadKind head = HeadKind::Free;
  std::string name;
  std::uint32_t level = 0;
  ValuePtr stuck;
  std::vector<ThunkPtr> spine;
  // Lam / Pi
  ThunkPtr dom;
  EnvPtr env;
  std::optional<Term> body;
};

class Evaluator {
 public:
  explicit Evaluator(Fuel fuel) : limit_(fuel.max_steps) {}

  ValuePtr eval(const EnvPtr& env, const Term& t) {
    DepthGuard guard(*this);
    switch (t.kind()) {
      case TermKind::Sort: {
        auto v = std::make_shared<Value>();
        v->kind = VKind::Sort;
        v->sort = t.sort_value();
        return v;
      }
      case TermKind::Free: {
        auto v = std::make_shared<Value>();
        v->kind = VKind::Neutral;
        v->head = HeadKind::Free;
        v->name = t.name();
        return v;
      }
      case TermKind::Bound: {
        const EnvNode* cur = env.get();
        std::uint32_t i = t.index();
        std::uint32_t len = 0;
        while (cur && i > 0) {
          cur = cur->tail.get();
          --i;
          ++len;
        }
        if (cur) return force(cur->head);
        auto v = std::make_shared<Value>();
        v->kind = VKind::Neutral;
        v->head = HeadKind::Outer;
        v->level = i;
        return v;
      }
      case TermKind::App: {
        ValuePtr f = eval(env, t.fun());
        return apply(f, delay(env, t.arg()));
      }
      case TermKind::Abs:
      case TermKind::Prod: {
        auto v = std::make_shared<Value>();
        v->kind = t.is(TermKind::Abs) ? VKind::Lam : VKind::Pi;
        v->dom = delay(env, t.domain());
        v->env = env;
        v->body = t.body();
        v->name = t.hint();
        return v;
      }
    }
    return nullptr;
  }

  ValuePtr force(const ThunkPtr& th) {
    if (!th->value) {
      th->value = eval(th->env, *th->term);
      th->env.reset();
      th->term.reset();
    }
    return th->value;
  }

  ValuePtr apply(const ValuePtr& f, ThunkPtr arg) {
    if (f->kind == VKind::Lam) {
      if (steps_ >= limit_) throw FuelExhausted(steps_);
      ++steps_;
      return eval(std::make_shared<const EnvNode>(EnvNode{std::move(arg), f->env}), *f->body);
    }
    auto v = std::make_shared<Value>();
    v->kind = VKind::Neutral;
    if (f->kind == VKind::Neutral) {
      v->head = f->head;
      v->name = f->name;
      v->level = f->level;
      v->stuck = f->stuck;
      v->spine = f->spine;
    } else {
      v->head = HeadKind::Stuck;
      v->stuck = f;
    }
    v->spine.push_back(std::move(arg));
    return v;
  }

  Term quote(std::uint32_t depth, const ValuePtr& v) {
    DepthGuard guard(*this);
    switch (v->kind) {
      case VKind::Sort:
        return Term::sort(v->sort);
      case VKind::Neutral: {
        Term head = Term::prop();
        switch (v->head) {
          case HeadKind::Free:
            head = Term::free(v->name);
            break;
          case HeadKind::Level:
            head = Term::bound(depth - v->level - 1);
            break;
          case HeadKind::Outer:
            head = Term::bound(depth + v->level);
            break;
          case HeadKind::Stuck:
            head = quote(depth, v->stuck);
            break;
        }
        for (const auto& a : v->spine) head = Term::app(std::move(head), quote(depth, force(a)));
        return head;
      }
      case VKind::Lam:
      case VKind::Pi: {
        Term dom = quote(depth, force(v->dom));
        auto var = std::make_shared<Thunk>();
        auto nv = std::make_shared<Value>();
        nv->kind = VKind::Neutral;
        nv->head = HeadKind::Level;
        nv->level = depth;
        var->value = nv;
        Term body = quote(depth + 1, eval(std::make_shared<const EnvNode>(EnvNode{var, v->env}), *v->body));
        return v->kind == VKind::Lam ? Term::abs(std::move(dom), std::move(body), v->name)
                                     : Term::prod(std::move(dom), std::move(body), v->name);
      }
    }
    return Term::prop();
  }

 private:
  // Bounds native recursion so divergent untyped input fails cleanly.
  static constexpr std::uint32_t kMaxDepth = 20000;

  struct DepthGuard {
    explicit DepthGuard(Evaluator& e) : ev(e) {
      if (++ev.depth_ > kMaxDepth) {
        --ev.depth_;
        throw FuelExhausted(ev.steps_);
      }
    }
    ~DepthGuard() { --ev.depth_; }
    Evaluator& ev;
  };

  ThunkPtr delay(const EnvPtr& env, const Term& t) {
    if (t.is(TermKind::Bound)) {
      const EnvNode* cur = env.get();
      std::uint32_t i = t.index();
      while (cur && i > 0) {
        cur = cur->tail.get();
        --i;
      }
      if (cur) return cur->head;
    }
    auto th = std::make_shared<Thunk>();
    th->env = env;
    th->term = t;
    return th;
  }

  std::uint64_t limit_;
  std::uint64_t steps_ = 0;
  std::uint32_t depth_ = 0;
};

}  // namespace

Term normalize(const Term& t, Fuel fuel) {
  if (is_normal(t)) return t;
  Evaluator ev(fuel);
  return ev.quote(0, ev.eval(nullptr, t));
}

bool convertible(const Term& a, const Term& b, Fuel fuel) {
  if (a == b) return true;
  return normalize(a, fuel) == normalize(b, fuel);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t longest(const Term& t, std::uint64_t bound,
                      std::unordered_map<Term, std::uint64_t, TermHash>& memo) {
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  std::uint64_t best = 0;
  for (const auto& r : one_step_reducts(t)) {
    std::uint64_t len = 1 + longest(r, bound, memo);
    if (len > bound) throw BoundExceeded(bound);
    best = std::max(best, len);
  }
  memo.emplace(t, best);
  return best;
}

}  // namespace

std::uint64_t longest_reduction_length(const Term& t, std::uint64_t bound) {
  std::unordered_map<Term, std::uint64_t, TermHash> memo;
  return longest(t, bound, memo);
}

}  // namespace pedacc
