#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grdt/formula.hpp"
#include "grdt/types.hpp"

namespace grdt {

enum class FailKind { OccursCheck, Clash, ScopeViolation };

std::string to_string(FailKind k);

/// Why unification failed. `equation` is the input equation whose
/// decomposition exposed the conflict; `lhs`/`rhs` are the conflicting
/// subterms after substitution.
struct Failure {
  FailKind kind = FailKind::Clash;
  Equation equation;
  Type lhs, rhs;
  int step = 0;  // solve step (1 or 3); 0 outside solve

  std::string describe() const;
};

struct UnifyResult {
  std::optional<Substitution> subst;
  Failure failure;

  explicit operator bool() const { return subst.has_value(); }
  const Substitution& operator*() const { return *subst; }
  const Substitution* operator->() const { return &*subst; }
};

/// Most general unifier of c under the mixed prefix. Universal variables
/// are rigid; an existential may only be bound to a term whose universals
/// are quantified before it. Free variables are outermost existentials.
UnifyResult mgu_mixed(const Prefix& prefix, const Constraint& c);

/// Unification with every variable flexible. Between two variables the
/// one quantified later in `order` (free variables count as earliest) is
/// bound, so hypotheses are expressed in terms of the outer scope.
UnifyResult mgu_flexible(const Constraint& c, const Prefix& order = {});

bool satisfiable(const Prefix& prefix, const Constraint& c);

struct SolveResult {
  std::optional<Substitution> subst;
  Failure failure;
  /// E1..En from step 2 (True when a guard has no unifier).
  std::vector<Constraint> branch_equations;
  /// C0 ∧ E1 ∧ ... ∧ En, the step-3 problem.
  Constraint combined;

  explicit operator bool() const { return subst.has_value(); }
};

/// The three-step solver:
///  (1) φ := mgu of C0 under Q;
///  (2) Ei := φi∘φ(Ci) if φi, the mgu of φ(Di), exists, else True;
///  (3) ψ := mgu of C0 ∧ E1 ∧ ... ∧ En under Q.
/// The guard unifier in step 2 treats the hypothesis as an assumption, so
/// all of its variables are instantiable. Each Ei is replaced by its
/// solved form restricted to variables that also occur outside Ci, which
/// is equivalent because the other variables are local to the branch.
/// Known-entries are ignored.
SolveResult solve(const NormalForm& nf);

/// Quantifier-free guarded form with universals replaced by skolem terms.
struct Skolemized {
  Constraint c0;
  std::vector<Guarded> guarded;
  std::map<std::string, Type> skolems;  // universal ↦ skolem term
};

/// Each universal becomes `#name(e1..ek)` over the explicitly quantified
/// existentials preceding it; free variables are not dependencies, so
/// universals with no ∃ block before them become constants.
Skolemized skolemize(const NormalForm& nf);

/// Three-step solving of a skolemized matrix: skolem constants are rigid
/// in steps 1 and 3 and instantiable inside guards, like universals.
SolveResult solve_skolemized(const Skolemized& sk);

class Unsatisfiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whether Q.(c ⟹ e) is valid: the mgu of c under the prefix maps both
/// sides of every equation of e to the same term.
/// Throws Unsatisfiable when Q.c has no unifier.
bool entails_eq(const Prefix& prefix, const Constraint& c, const Constraint& e);

/// c1 ⊨ ∃(fv(c2) − vars). c2 over the free term algebra.
bool entails_projected(const Constraint& c1, const Constraint& c2, const VarSet& vars);

/// Mutual entailment after projecting both constraints onto vars.
bool equiv_wrt(const Constraint& c1, const Constraint& c2, const VarSet& vars);

/// Orders generated names by creation (the numeric suffix), other names
/// lexicographically after them.
bool name_less(const std::string& a, const std::string& b);

}  // namespace grdt
