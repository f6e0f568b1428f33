#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pedacc/derivation.hpp"
#include "pedacc/environment.hpp"

namespace pedacc::surface {

enum class ExprKind : std::uint8_t { Prop, Type, Var, App, Fun, Forall, Arrow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Named syntax tree as written. `a`/`b` are fun/arg, or domain/body.
struct Expr {
  ExprKind kind;
  std::string name;  // Var, or the binder of Fun/Forall
  ExprPtr a;
  ExprPtr b;
  SourcePos pos;
};

/// Structural equality, ignoring positions.
bool same(const Expr& x, const Expr& y);

enum class DeclKind : std::uint8_t { Assume, Define, Check, Motivate, Inhabit, Normalize, Eval, Motivation };

struct Decl {
  DeclKind kind;
  std::string name;   // Assume / Define / Motivation
  ExprPtr expr;       // the term (the type for Assume and Inhabit)
  ExprPtr extra;      // Assume: `by` witness; Check: expected type
  SourcePos pos;
};

bool same(const Decl& x, const Decl& y);
bool same(const std::vector<Decl>& x, const std::vector<Decl>& y);

/// Parses a whole file. Failures are Diagnostics with rule "syntax".
Result<std::vector<Decl>> parse(const std::string& text);
Result<ExprPtr> parse_expr(const std::string& text);

std::string print(const Expr& e);
std::string print(const Decl& d);
std::string print(const std::vector<Decl>& decls);

/// Kernel term as source text. Bound variables get names built from their
/// hints that clash neither with free names nor with enclosing binders.
std::string print(const Term& t);
ExprPtr to_expr(const Term& t);

/// Named constants; subterms identical to one print as its name.
using Constants = std::vector<std::pair<std::string, Term>>;
std::string print(const Term& t, const Constants& fold);
ExprPtr to_expr(const Term& t, const Constants& fold);

bool is_keyword(const std::string& s);

// ---------------------------------------------------------------------------
// Elaboration.

enum class CommandKind : std::uint8_t { Check, Motivate, Inhabit, Normalize, Eval };

struct Command {
  CommandKind kind;
  Term term;                   // the subject (the goal for Inhabit)
  std::optional<Term> type;    // Check: expected type
  ExprPtr source;              // the subject as written, for positions
  ExprPtr type_source;
  std::size_t env_size;        // hypotheses in scope
  SourcePos pos;
};

struct Program {
  Environment env;
  std::vector<SourcePos> entry_pos;
  std::vector<ExprPtr> entry_source;
  std::vector<Command> commands;
  Motivation motivation;       // `motivation x := t` lines, in environment order
  std::vector<std::string> unmotivated;  // hypotheses with no motivation line
  Constants constants;         // definitions, then unshadowed prelude names
};

/// Resolves names (binders, then user declarations, then the prelude) and
/// expands definitions. Failures have rule "scope".
Result<Program> elaborate(const std::vector<Decl>& decls);

/// Elaborates a lone expression: binders resolve locally, other names become
/// free variables unless `with_prelude` maps them to prelude constants.
Term elaborate_expr(const Expr& e, bool with_prelude = false);

/// Position of the subterm a kernel path such as "term.fun.arg" points to,
/// as far as the written expression mirrors the term.
SourcePos locate(const ExprPtr& e, const std::string& path, SourcePos fallback);

/// Diagnostic rendering: `file:line:col: error[rule] where: message`, then
/// expected/found lines.
std::string format_diagnostic(const Diagnostic& d, const std::string& file, const Constants& fold = {});

}  // namespace pedacc::surface
