#include "pedacc/surface.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pedacc/prelude.hpp"

namespace pedacc::surface {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"Prop",      "Type", "forall",  "fun",        "assume", "def",       "check",
                                       "motivate", "inhabit", "normalize", "eval", "motivation", "by"};
  return k;
}

ExprPtr mk(ExprKind k, SourcePos pos, std::string name = {}, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  return std::make_shared<const Expr>(Expr{k, std::move(name), std::move(a), std::move(b), pos});
}

Diagnostic diag(const std::string& rule, std::string message, SourcePos pos) {
  return Diagnostic{rule, "", std::nullopt, std::nullopt, std::move(message), pos};
}

// --- lexer -------------------------------------------------------------------

enum class Tok : std::uint8_t { Ident, Colon, Assign, Arrow, FatArrow, Comma, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  SourcePos p{1, 1, 0};
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    p.offset = static_cast<std::uint32_t>(i);
  };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (s.compare(i, 2, "--") == 0) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourcePos start = p;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == ":=") { out.push_back({Tok::Assign, two, start}); advance(2); continue; }
    if (two == "->") { out.push_back({Tok::Arrow, two, start}); advance(2); continue; }
    if (two == "=>") { out.push_back({Tok::FatArrow, two, start}); advance(2); continue; }
    Tok k;
    switch (c) {
      case ':': k = Tok::Colon; break;
      case ',': k = Tok::Comma; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: {
        std::string what = c == '#' ? "'#' is reserved for generated names" : "unexpected character '" + std::string(1, c) + "'";
        throw KernelError(diag("syntax", what, start));
      }
    }
    out.push_back({k, std::string(1, c), start});
    advance(1);
  }
  out.push_back({Tok::End, "", p});
  return out;
}

// --- parser ------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Decl> file() {
    std::vector<Decl> out;
    while (peek().kind != Tok::End) out.push_back(decl());
    return out;
  }

  ExprPtr lone_expr() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) error("expected end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool at_kw(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  Token next() { return toks_[i_++]; }

  [[noreturn]] void error(const std::string& msg) {
    std::string found = peek().kind == Tok::Ident ? "'" + peek().text + "'" : describe(peek().kind);
    throw KernelError(diag("syntax", msg + ", found " + found, peek().pos));
  }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) error(std::string("expected ") + what);
    return next();
  }

  void expect_kw(const char* kw) {
    if (!at_kw(kw)) error(std::string("expected '") + kw + "'");
    next();
  }

  std::string name() {
    if (peek().kind != Tok::Ident) error("expected a name");
    if (is_keyword(peek().text)) error("expected a name, not a keyword");
    return next().text;
  }

  Decl decl() {
    SourcePos pos = peek().pos;
    if (peek().kind != Tok::Ident) error("expected a declaration");
    std::string kw = peek().text;
    Decl d{DeclKind::Check, "", nullptr, nullptr, pos};
    if (kw == "assume") {
      next();
      d.kind = DeclKind::Assume;
      d.name = name();
      expect(Tok::Colon, "':'");
      d.expr = expr();
      if (at_kw("by")) {
        next();
        d.extra = expr();
      }
    } else if (kw == "def") {
      next();
      d.kind = DeclKind::Define;
      d.name = name();
      expect(Tok::Assign, "':='");
      d.expr = expr();
    } else if (kw == "check") {
      next();
      d.expr = expr();
      if (peek().kind == Tok::Colon) {
        next();
        d.extra = expr();
      }
    } else if (kw == "motivate") {
      next();
      d.kind = DeclKind::Motivate;
    } else if (kw == "inhabit") {
      next();
      d.kind = DeclKind::Inhabit;
      d.expr = expr();
    } else if (kw == "normalize") {
      next();
      d.kind = DeclKind::Normalize;
      d.expr = expr();
    } else if (kw == "eval") {
      next();
      d.kind = DeclKind::Eval;
      d.expr = expr();
    } else if (kw == "motivation") {
      next();
      d.kind = DeclKind::Motivation;
      d.name = name();
      expect(Tok::Assign, "':='");
      d.expr = expr();
    } else {
      error("expected a declaration");
    }
    return d;
  }

  ExprPtr expr() {
    if (at_kw("forall") || at_kw("fun")) {
      SourcePos pos = peek().pos;
      bool is_fun = next().text == "fun";
      std::vector<std::pair<std::string, SourcePos>> names;
      do {
        SourcePos np = peek().pos;
        names.emplace_back(name(), np);
      } while (peek().kind == Tok::Ident);
      expect(Tok::Colon, "':'");
      ExprPtr dom = expr();
      if (is_fun) {
        expect(Tok::FatArrow, "'=>'");
      } else {
        expect(Tok::Comma, "','");
      }
      ExprPtr body = expr();
      for (std::size_t k = names.size(); k-- > 0;) {
        body = mk(is_fun ? ExprKind::Fun : ExprKind::Forall, k == 0 ? pos : names[k].second, names[k].first, dom,
                  body);
      }
      return body;
    }
    ExprPtr lhs = app();
    if (peek().kind == Tok::Arrow) {
      next();
      ExprPtr rhs = expr();
      return mk(ExprKind::Arrow, lhs->pos, "", lhs, rhs);
    }
    return lhs;
  }

  bool atom_start() const {
    if (peek().kind == Tok::LParen) return true;
    if (peek().kind != Tok::Ident) return false;
    return !is_keyword(peek().text) || peek().text == "Prop" || peek().text == "Type";
  }

  ExprPtr app() {
    if (!atom_start()) error("expected a term");
    ExprPtr f = atom();
    while (atom_start()) {
      ExprPtr a = atom();
      f = mk(ExprKind::App, f->pos, "", f, a);
    }
    return f;
  }

  ExprPtr atom() {
    SourcePos pos = peek().pos;
    if (peek().kind == Tok::LParen) {
      next();
      ExprPtr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    Token t = next();
    if (t.text == "Prop") return mk(ExprKind::Prop, pos);
    if (t.text == "Type") return mk(ExprKind::Type, pos);
    return mk(ExprKind::Var, pos, t.text);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// --- printing ----------------------------------------------------------------

// Precedence: 0 binders and arrows, 1 application, 2 atoms.
void print_expr(std::ostream& os, const Expr& e, int ctx) {
  switch (e.kind) {
    case ExprKind::Prop: os << "Prop"; return;
    case ExprKind::Type: os << "Type"; return;
    case ExprKind::Var: os << e.name; return;
    case ExprKind::App:
      if (ctx > 1) os << '(';
      print_expr(os, *e.a, 1);
      os << ' ';
      print_expr(os, *e.b, 2);
      if (ctx > 1) os << ')';
      return;
    case ExprKind::Arrow:
      if (ctx > 0) os << '(';
      print_expr(os, *e.a, 1);
      os << " -> ";
      print_expr(os, *e.b, 0);
      if (ctx > 0) os << ')';
      return;
    case ExprKind::Fun:
    case ExprKind::Forall: {
      bool fun = e.kind == ExprKind::Fun;
      if (ctx > 0) os << '(';
      os << (fun ? "fun " : "forall ") << e.name << " : ";
      print_expr(os, *e.a, 0);
      os << (fun ? " => " : ", ");
      print_expr(os, *e.b, 0);
      if (ctx > 0) os << ')';
      return;
    }
  }
}

bool valid_name(const std::string& s) {
  if (s.empty() || !ident_start(static_cast<unsigned char>(s[0])) || is_keyword(s) || s == "_") return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return ident_char(static_cast<unsigned char>(c)); });
}

class TermPrinter {
 public:
  TermPrinter(const Term& root, const Constants& fold) : taken_(free_vars(root)) {
    for (const auto& [n, c] : fold) {
      taken_.insert(n);
      if (!c.is(TermKind::Sort) && !c.is(TermKind::Free)) fold_.emplace(c, n);
    }
  }

  ExprPtr go(const Term& t) {
    SourcePos none{};
    if (!fold_.empty() && t.loose_bound() == 0) {
      if (auto it = fold_.find(t); it != fold_.end()) return mk(ExprKind::Var, none, it->second);
    }
    switch (t.kind()) {
      case TermKind::Sort:
        return mk(t.is_sort(Sort::Prop) ? ExprKind::Prop : ExprKind::Type, none);
      case TermKind::Bound:
        if (t.index() < scope_.size()) return mk(ExprKind::Var, none, scope_[scope_.size() - 1 - t.index()]);
        return mk(ExprKind::Var, none, std::string(1, kReservedPrefix) + "b" + std::to_string(t.index()));
      case TermKind::Free:
        return mk(ExprKind::Var, none, t.name());
      case TermKind::App:
        return mk(ExprKind::App, none, "", go(t.fun()), go(t.arg()));
      case TermKind::Abs:
      case TermKind::Prod: {
        ExprPtr dom = go(t.domain());
        if (t.is(TermKind::Prod) && !binder_used(t.body())) {
          scope_.push_back(std::string(1, kReservedPrefix) + "unused");
          ExprPtr body = go(t.body());
          scope_.pop_back();
          return mk(ExprKind::Arrow, none, "", dom, body);
        }
        std::string n = pick(t.hint());
        scope_.push_back(n);
        ExprPtr body = go(t.body());
        scope_.pop_back();
        return mk(t.is(TermKind::Abs) ? ExprKind::Fun : ExprKind::Forall, none, n, dom, body);
      }
    }
    return mk(ExprKind::Prop, none);
  }

 private:
  std::string pick(const std::string& hint) {
    std::string base = valid_name(hint) ? hint : "x";
    auto clash = [&](const std::string& n) {
      return taken_.count(n) || std::find(scope_.begin(), scope_.end(), n) != scope_.end();
    };
    if (!clash(base)) return base;
    for (unsigned k = 1;; ++k) {
      std::string n = base + std::to_string(k);
      if (!clash(n)) return n;
    }
  }

  std::set<std::string> taken_;
  std::vector<std::string> scope_;
  std::unordered_map<Term, std::string, TermHash> fold_;
};

// --- elaboration -------------------------------------------------------------

struct Binding {
  Term value;
  bool hypothesis;
};

class Elaborator {
 public:
  explicit Elaborator(bool prelude, bool open) : prelude_(prelude), open_(open) {}

  std::map<std::string, Binding> user;

  Term go(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Prop: return Term::prop();
      case ExprKind::Type: return Term::type();
      case ExprKind::Var: return var(e);
      case ExprKind::App: return Term::app(go(*e.a), go(*e.b));
      case ExprKind::Arrow: {
        Term dom = go(*e.a);
        locals_.push_back("");  // the arrow's binder cannot be referenced
        Term body = go(*e.b);
        locals_.pop_back();
        return Term::prod(dom, body, "_");
      }
      case ExprKind::Fun:
      case ExprKind::Forall: {
        Term dom = go(*e.a);
        locals_.push_back(e.name);
        Term body = go(*e.b);
        locals_.pop_back();
        return e.kind == ExprKind::Fun ? Term::abs(dom, body, e.name) : Term::prod(dom, body, e.name);
      }
    }
    return Term::prop();
  }

 private:
  Term var(const Expr& e) {
    for (std::size_t k = locals_.size(); k-- > 0;) {
      if (locals_[k] == e.name) return Term::bound(static_cast<std::uint32_t>(locals_.size() - 1 - k));
    }
    if (auto it = user.find(e.name); it != user.end()) return it->second.value;
    if (prelude_) {
      for (const auto& [n, t] : prelude::builtins()) {
        if (n == e.name) return t;
      }
    }
    if (open_) return Term::free(e.name);
    throw KernelError(diag("scope", "unbound name '" + e.name + "'", e.pos));
  }

  bool prelude_;
  bool open_;
  std::vector<std::string> locals_;
};

SourcePos locate_in(const ExprPtr& e, const std::vector<std::string>& segs, std::size_t i) {
  if (i >= segs.size()) return e->pos;
  const std::string& s = segs[i];
  bool app = e->kind == ExprKind::App;
  bool binder = e->kind == ExprKind::Fun || e->kind == ExprKind::Forall || e->kind == ExprKind::Arrow;
  if ((s == "fun" && app) || (s == "dom" && binder)) return locate_in(e->a, segs, i + 1);
  if ((s == "arg" && app) || (s == "body" && binder)) return locate_in(e->b, segs, i + 1);
  return e->pos;
}

}  // namespace

bool is_keyword(const std::string& s) { return keywords().count(s) > 0; }

bool same(const Expr& x, const Expr& y) {
  if (x.kind != y.kind || x.name != y.name) return false;
  if (static_cast<bool>(x.a) != static_cast<bool>(y.a) || static_cast<bool>(x.b) != static_cast<bool>(y.b)) {
    return false;
  }
  return (!x.a || same(*x.a, *y.a)) && (!x.b || same(*x.b, *y.b));
}

bool same(const Decl& x, const Decl& y) {
  auto opt = [](const ExprPtr& a, const ExprPtr& b) { return a && b ? same(*a, *b) : !a && !b; };
  return x.kind == y.kind && x.name == y.name && opt(x.expr, y.expr) && opt(x.extra, y.extra);
}

bool same(const std::vector<Decl>& x, const std::vector<Decl>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!same(x[i], y[i])) return false;
  }
  return true;
}

Result<std::vector<Decl>> parse(const std::string& text) {
  try {
    Parser p(lex(text));
    return p.file();
  } catch (const KernelError& e) {
    return e.diagnostic();
  }
}

Result<ExprPtr> parse_expr(const std::string& text) {
  try {
    Parser p(lex(text));
    return p.lone_expr();
  } catch (const KernelError& e) {
    return e.diagnostic();
  }
}

std::string print(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string print(const Decl& d) {
  switch (d.kind) {
    case DeclKind::Assume:
      return "assume " + d.name + " : " + print(*d.expr) + (d.extra ? " by " + print(*d.extra) : "");
    case DeclKind::Define: return "def " + d.name + " := " + print(*d.expr);
    case DeclKind::Check: return "check " + print(*d.expr) + (d.extra ? " : " + print(*d.extra) : "");
    case DeclKind::Motivate: return "motivate";
    case DeclKind::Inhabit: return "inhabit " + print(*d.expr);
    case DeclKind::Normalize: return "normalize " + print(*d.expr);
    case DeclKind::Eval: return "eval " + print(*d.expr);
    case DeclKind::Motivation: return "motivation " + d.name + " := " + print(*d.expr);
  }
  return "";
}

std::string print(const std::vector<Decl>& decls) {
  std::string out;
  for (const auto& d : decls) out += print(d) + "\n";
  return out;
}

ExprPtr to_expr(const Term& t) { return TermPrinter(t, {}).go(t); }

std::string print(const Term& t) { return print(*to_expr(t)); }

ExprPtr to_expr(const Term& t, const Constants& fold) { return TermPrinter(t, fold).go(t); }

std::string print(const Term& t, const Constants& fold) { return print(*to_expr(t, fold)); }

Term elaborate_expr(const Expr& e, bool with_prelude) {
  Elaborator el(with_prelude, true);
  return el.go(e);
}

Result<Program> elaborate(const std::vector<Decl>& decls) {
  try {
    Elaborator el(true, false);
    Program prog;
    std::map<std::string, Term> motivations;
    std::set<std::string> hyps;
    auto declare = [&](const Decl& d, Term value, bool hyp) {
      if (el.user.count(d.name)) throw KernelError(diag("scope", "'" + d.name + "' is already declared", d.pos));
      el.user.emplace(d.name, Binding{std::move(value), hyp});
    };
    for (const Decl& d : decls) {
      switch (d.kind) {
        case DeclKind::Assume: {
          Term ty = el.go(*d.expr);
          std::optional<Term> w;
          if (d.extra) w = el.go(*d.extra);
          declare(d, Term::free(d.name), true);
          prog.env.push_back({d.name, ty, w});
          prog.entry_pos.push_back(d.pos);
          prog.entry_source.push_back(d.expr);
          hyps.insert(d.name);
          break;
        }
        case DeclKind::Define: {
          Term v = el.go(*d.expr);
          declare(d, v, false);
          prog.constants.emplace(prog.constants.begin(), d.name, v);
          break;
        }
        case DeclKind::Motivation: {
          if (!hyps.count(d.name)) {
            throw KernelError(diag("scope", "'" + d.name + "' is not an assumed hypothesis", d.pos));
          }
          if (motivations.count(d.name)) {
            throw KernelError(diag("scope", "'" + d.name + "' already has a motivation", d.pos));
          }
          motivations.emplace(d.name, el.go(*d.expr));
          break;
        }
        default: {
          Command c{CommandKind::Check, Term::prop(), std::nullopt, d.expr, d.extra, prog.env.size(), d.pos};
          switch (d.kind) {
            case DeclKind::Check: c.kind = CommandKind::Check; break;
            case DeclKind::Motivate: c.kind = CommandKind::Motivate; break;
            case DeclKind::Inhabit: c.kind = CommandKind::Inhabit; break;
            case DeclKind::Normalize: c.kind = CommandKind::Normalize; break;
            default: c.kind = CommandKind::Eval; break;
          }
          if (d.expr) c.term = el.go(*d.expr);
          if (d.extra) c.type = el.go(*d.extra);
          prog.commands.push_back(std::move(c));
        }
      }
    }
    for (const auto& [n, t] : prelude::builtins()) {
      if (!el.user.count(n)) prog.constants.emplace_back(n, t);
    }
    for (const Entry& e : prog.env) {
      auto it = motivations.find(e.name);
      if (it == motivations.end()) {
        prog.unmotivated.push_back(e.name);
      } else {
        prog.motivation.bindings.emplace_back(e.name, it->second);
      }
    }
    return prog;
  } catch (const KernelError& e) {
    return e.diagnostic();
  }
}

SourcePos locate(const ExprPtr& e, const std::string& path, SourcePos fallback) {
  if (!e) return fallback;
  std::vector<std::string> segs;
  std::stringstream ss(path);
  for (std::string s; std::getline(ss, s, '.');) segs.push_back(s);
  return locate_in(e, segs, 1);
}

std::string format_diagnostic(const Diagnostic& d, const std::string& file, const Constants& fold) {
  std::ostringstream os;
  os << file;
  if (d.pos) os << ':' << d.pos->line << ':' << d.pos->column;
  os << ": error[" << d.rule << "]";
  if (!d.where.empty()) os << " at " << d.where;
  os << ": " << d.message << '\n';
  if (d.expected) os << "  expected: " << print(*d.expected, fold) << '\n';
  if (d.found) os << "  found:    " << print(*d.found, fold) << '\n';
  return os.str();
}

}  // namespace pedacc::surface
