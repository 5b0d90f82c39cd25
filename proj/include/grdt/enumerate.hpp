#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grdt/formula.hpp"
#include "grdt/types.hpp"
#include "grdt/unify.hpp"

namespace grdt {

/// Implied equation sets of Q.c over `vars`. Each set has at most one
/// equation per variable x ∈ vars, x = s, where s is a non-variable term
/// over vars ∪ rhs_vars whose image under the mgu of c equals that of x, or
/// a variable from rhs_vars with the same image (variables that are also in
/// vars only when they precede x). Guards are assumptions, so all variables
/// are instantiable. Returns {∅} when there is no candidate, otherwise
/// only the non-empty sets. Throws Unsatisfiable when c has no unifier.
std::vector<Constraint> implied_equations(const Prefix& prefix, const Constraint& c,
                                          const std::vector<std::string>& vars,
                                          const std::vector<std::string>& rhs_vars);

class MeaninglessOrIllTyped : public std::runtime_error {
 public:
  MeaninglessOrIllTyped(std::size_t branch, Constraint equations);
  std::size_t branch;
  Constraint equations;
};

struct Budget {
  std::size_t max_solutions = 64;
  std::size_t max_candidates = 4096;
};

struct BuildResult {
  /// Solutions restricted to `vars`, pairwise inequivalent, in discovery order.
  std::vector<Substitution> solutions;
  std::vector<std::string> vars;
  bool incomplete = false;
};

/// Whether ψ solves nf with respect to vars (default: the free variables of
/// nf): ψ(nf) holds for every value of the variables of ψ(vars), the other
/// free variables being existential.
bool is_solution(const NormalForm& nf, const Substitution& psi, std::optional<std::vector<std::string>> vars = {});

/// All solutions of nf built from combinations of implied equation sets,
/// one per guarded implication. `vars` defaults to the variables of the
/// solved form of nf's free variables.
/// Throws MeaninglessOrIllTyped when some C0 ∧ Di ∧ Ci has no unifier.
BuildResult build_solutions(const NormalForm& nf, std::optional<std::vector<std::string>> vars = {},
                            Budget budget = {});

/// Variables of θ0(t) in order of occurrence, θ0 the mgu of C0.
std::vector<std::string> interface_vars(const NormalForm& nf, const Type& t);

}  // namespace grdt
