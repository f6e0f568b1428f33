#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pedacc/motivation.hpp"
#include "pedacc/typing.hpp"

namespace pedacc::harness {

enum class Verdict : std::uint8_t { Accept, Reject };
std::string to_string(Verdict v);

/// A fixture or generated instance. Without `type` the case is the
/// well-formedness of `env`; with `type` and no `term`, the formation
/// `env |- type : Prop`; otherwise `env |- term : type`.
struct GeneratedCase {
  std::uint64_t seed = 0;
  std::string label;
  Environment env;
  std::optional<Term> term;
  std::optional<Term> type;
  Mode mode = Mode::CCr;
  Verdict expected = Verdict::Accept;
  std::optional<Motivation> motivation;  // NaiveP, and the differential's motivatability
  /// For rejected goals: the goal the search must fail on, and at what depth.
  std::optional<Term> search_goal;
  Environment search_env;
  unsigned search_depth = 12;
};

struct CaseOutcome {
  Verdict actual = Verdict::Reject;
  std::optional<Diagnostic> diagnostic;
  std::vector<DerivationPtr> derivations;
  bool as_expected = false;
  std::string note;
};

CaseOutcome run_case(const GeneratedCase& c, const CheckOptions& opts = {});

// --- generators --------------------------------------------------------------

struct GeneratedEnv {
  std::uint64_t seed = 0;
  Environment env;
  /// Products created by the generator, each with the inhabitant that
  /// justifies forming it.
  std::vector<Hint> hints;
  /// Known inhabitants of entry types, valid in the preceding prefix.
  std::vector<std::optional<Term>> inhabitants;
  DerivationPtr wf;  // restricted-mode derivation, or null on a generator bug
  std::optional<Diagnostic> error;
};

/// A restricted-mode environment of at most `max_depth` hypotheses whose
/// types nest at most `max_depth` deep. Every product it contains is built
/// together with an inhabitant of its body.
GeneratedEnv gen_ccr_env(std::uint64_t seed, unsigned max_depth);

struct TypedCase {
  std::uint64_t seed = 0;
  Environment env;
  Term term = Term::prop();
  Term type = Term::type();
  std::vector<Hint> hints;
};

/// A term with redexes and its type, over a generated environment or the
/// prelude.
TypedCase gen_typed_term(std::uint64_t seed, unsigned max_depth);

// --- fixtures ----------------------------------------------------------------

Term leibniz_type();                 // forall Q : A -> Prop, Q x -> Q y
Environment leibniz_env();           // A : Prop, x : A, y : A, h : x = y
Motivation leibniz_motivation();     // A := Nat, x y := zero, h := refl
Environment composition_env();       // A B C : Prop
Term composition_type();             // (A -> B) -> (B -> C) -> A -> C
Environment bottom_env();            // h : bot

/// Restricted-mode rejections paired with their unrestricted acceptances.
std::vector<GeneratedCase> negative_corpus();

/// The naive-system judgments: accepted with their motivations, and the
/// same judgments under the unrestricted rules.
std::vector<GeneratedCase> naive_corpus();

// --- differential ------------------------------------------------------------

struct DifferentialReport {
  std::string label;
  bool cc_wf = false;
  bool ccr_wf = false;
  std::optional<bool> naive_wf;
  bool motivatable = false;
  /// CC-well-formed and motivatable implies restricted well-formedness.
  bool converse_holds = false;
  /// Restricted well-formedness implies a motivation was extracted.
  bool poincare_holds = false;
  bool expected_converse_failure = false;
  bool unexpected = false;
};

DifferentialReport differential(const std::string& label, const Environment& env,
                                const std::optional<Motivation>& sigma, bool converse_may_fail,
                                const CheckOptions& opts = {});

// --- property suites ---------------------------------------------------------

struct SubjectReductionReport {
  std::size_t cases = 0;
  std::size_t reducts = 0;
  std::size_t rejected_inputs = 0;  // generated terms the kernel refused
  std::size_t failures = 0;
  std::vector<std::string> notes;
};

/// For `n` generated terms: every one-step reduct re-checks at the original
/// type. `sink` receives every derivation built.
SubjectReductionReport subject_reduction_fuzz(std::size_t n, Mode mode, std::uint64_t seed,
                                              const std::function<void(const DerivationPtr&)>& sink = {});

/// Same derivation with prod_r relabeled prod (witness premise dropped) and
/// every node in unrestricted mode.
DerivationPtr relabel_unrestricted(const DerivationPtr& d);

/// Type inference written independently of the kernel: no derivations, no
/// restricted mode, normal-form types. Nothing on ill-typed input.
std::optional<Term> reference_type(const Environment& env, const Term& t, Fuel fuel = kDefaultFuel);

/// Counts violations of two kernel invariants over derivation nodes: Type
/// never occurs in an environment or a subject, and every derived type is
/// either Type or itself has a sort.
class InvariantChecker {
 public:
  void add(const DerivationPtr& d);
  std::size_t nodes() const { return nodes_; }
  std::size_t type_occurrence_violations() const { return type_occurrence_; }
  std::size_t type_of_type_violations() const { return type_of_type_; }
  std::size_t skipped() const { return skipped_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::size_t nodes_ = 0;
  std::size_t type_occurrence_ = 0;
  std::size_t type_of_type_ = 0;
  std::size_t skipped_ = 0;
  std::vector<std::string> notes_;
  std::unordered_set<const Derivation*> seen_;
  std::vector<DerivationPtr> keep_;
  // (env, type) pairs already verified
  std::unordered_map<const Environment*, std::unordered_set<Term, TermHash>> sorted_;
};

struct SuiteRow {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double millis = 0;
};

/// Every suite, in a fixed order.
std::vector<SuiteRow> selftest(std::size_t cases, std::uint64_t seed, std::ostream& log);

}  // namespace pedacc::harness
