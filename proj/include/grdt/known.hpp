#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grdt/formula.hpp"
#include "grdt/types.hpp"
#include "grdt/unify.hpp"

namespace grdt {

struct Diagnosis {
  /// Subjects a with F ⊨ known(a) that the formula without its
  /// known-disjunctions does not already entail.
  std::vector<Type> required_known;
  std::optional<Constraint> min_unsat;
  std::vector<std::string> suggestions;
  bool known_sets_agree = false;
  bool satisfiable = false;
  bool criteria_satisfied = false;
};

/// U ∧ K_U ∧ nf ⊨ known(subject), where known distributes over every type
/// constructor and respects equality.
bool entails_known(const NormalForm& nf, const Constraint& u, const Type& subject);

/// One representative variable per class of variables that the mgu of
/// U ∧ C0 identifies, for every class with F ⊨ known(a).
std::vector<Type> known_set(const NormalForm& nf, const Constraint& u);

using Namer = std::function<std::string(const Type&)>;

/// The known-set and satisfiability criteria for efficient inference.
Diagnosis criteria_check(const NormalForm& nf, const Constraint& u, const Namer& name = {});

/// Deletion-based minimal unsatisfiable subset; nothing when Q.c is
/// satisfiable.
std::optional<Constraint> min_unsat_subset(const Prefix& prefix, const Constraint& c);

/// Minimal unsatisfiable subset behind a failed solve: of C0 when step 1
/// fails, otherwise of the branch equations E1..En under the mgu of C0.
std::optional<Constraint> failure_core(const NormalForm& nf, const SolveResult& s);

}  // namespace grdt
