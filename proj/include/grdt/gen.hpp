#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grdt/formula.hpp"
#include "grdt/syntax.hpp"
#include "grdt/types.hpp"
#include "grdt/unify.hpp"

namespace grdt {

class GenError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t {
    UnboundVariable,
    UnboundConstructor,
    PatternUnifyFail,
    NestedCase,
    AnnotationPresent,
    GuessExhausted,
    SolveFailed,
  };
  GenError(Kind k, const std::string& msg, Loc loc);
  Kind kind;
  Loc loc;
  /// SolveFailed / GuessExhausted: the last failing solve.
  std::optional<SolveResult> solve;
  std::optional<NormalForm> normal_form;
};

std::string to_string(GenError::Kind k);

/// Typing context entry. λ- and pattern-bound variables have monomorphic
/// schemes.
struct Assumption {
  Scheme scheme;
  bool lambda_bound = false;
};

using Context = std::map<std::string, Assumption>;

VarSet free_vars(const Context& g);

/// p ⊢ ∀b̄.(D ▷ Γp ▷ t)
struct PatternInfo {
  std::vector<std::string> existentials;
  Constraint guard;
  std::vector<std::pair<std::string, Type>> bindings;
  Type type;
};

struct GenResult {
  Formula formula;
  Type type;
};

struct VarOrigin {
  std::string what;
  Loc loc;
};

enum class GenMode : std::uint8_t { Plain, Known };

/// Constraint generation. Every fresh variable comes from the supply
/// passed in, and its origin is recorded for diagnostics.
class Generator {
 public:
  Generator(const Environment& env, FreshSupply& fresh, GenMode mode = GenMode::Plain);

  PatternInfo infer_pattern(const Pattern& p);
  GenResult generate(const Expr& e, const Context& g);

  const std::map<std::string, VarOrigin>& origins() const { return origins_; }
  GenMode mode() const { return mode_; }

 private:
  Type fresh(std::string_view hint, std::string what, Loc loc);
  GenResult instance(const Scheme& s, const std::string& what, Loc loc);
  GenResult gen(const Expr& e, const Context& g, int case_depth);
  GenResult gen_clause(const Clause& c, const Context& g, int case_depth);
  GenResult annotated(const Expr& e, const Scheme& s, const Context& g, int case_depth, Loc loc);

  const Environment& env_;
  FreshSupply& fresh_;
  GenMode mode_;
  std::map<std::string, VarOrigin> origins_;
};

/// Constraint generation for a closed expression under g.
GenResult gen_constraints(const Environment& env, const Expr& e, FreshSupply& fresh, const Context& g = {});

/// Generation with the known-augmented (Pat) rule. Rejects annotations
/// and nested case expressions.
GenResult gen_constraints_known(const Environment& env, const Expr& e, FreshSupply& fresh, const Context& g = {});

/// Initial guess for a recursive binding: holes of a partial annotation
/// become fresh quantified variables; otherwise λ-arguments scrutinized
/// against constructors of a data type T get T ā and every other position
/// a fresh variable.
Scheme guess_initial(const Environment& env, const std::string& f, const Expr& body,
                     const std::optional<Annotation>& annot, FreshSupply& fresh);

/// F and t2 from Γ.f:σ ⊢ e : (F ▷ t2) with σ the initial guess.
struct GuessedConstraint {
  Formula formula;
  Type type;
  Scheme guess;
};

GuessedConstraint guess_constraint(const Environment& env, const std::string& f, const Expr& body,
                                   const std::optional<Annotation>& annot, FreshSupply& fresh, const Context& g = {},
                                   std::map<std::string, VarOrigin>* origins = nullptr);

struct RecGuessResult {
  Formula formula;  // F ∧ ∀ā.(ψ(t2)=t2′ ⟹ F′)
  Type type;        // t2
  Scheme scheme;    // ∀ā.ψ(t2)
  Formula first;    // F
  Scheme guess;     // the guess F was generated under
  int iterations = 0;
};

/// Rule (Rec-Guess) for `rec f in body`. Throws GenError(SolveFailed)
/// when F has no solution, GenError(GuessExhausted) after max_iter
/// unsuccessful subsumption checks.
RecGuessResult rec_guess(const Environment& env, const std::string& f, const Expr& body,
                         const std::optional<Annotation>& annot, int max_iter, FreshSupply& fresh,
                         const Context& g = {}, std::map<std::string, VarOrigin>* origins = nullptr);

}  // namespace grdt
