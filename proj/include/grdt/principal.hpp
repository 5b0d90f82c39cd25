#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grdt/enumerate.hpp"
#include "grdt/formula.hpp"
#include "grdt/types.hpp"

namespace grdt {

/// ∃θ. φ(a) = θ(ψ(a)) for every a ∈ vars.
bool more_general(const Substitution& psi, const Substitution& phi, const std::vector<std::string>& vars);

/// (E_ψ ∧ C0 ∧ ⋀Di) ↔ (C0 ∧ ⋀(Ci ∧ Di)) on the skolemized normal form.
/// False proves ψ is not principal; true is inconclusive.
bool necessary_criteria(const NormalForm& nf, const Substitution& psi);

struct PrincipalResult {
  enum class Verdict : std::uint8_t { Principal, NoPrincipal, NotPrincipalWitness, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::optional<Substitution> principal;  // Principal, NotPrincipalWitness
  std::string reason;                     // NotPrincipalWitness
  /// Maximal solutions: none is strictly less general than another.
  std::vector<Substitution> candidates;
  std::vector<Substitution> solutions;
  std::vector<std::string> vars;
};

std::string to_string(PrincipalResult::Verdict v);

/// Enumerates solutions and looks for one that subsumes all others.
/// Throws MeaninglessOrIllTyped from build_solutions.
PrincipalResult principal_type(const NormalForm& nf, std::optional<std::vector<std::string>> vars = {},
                               Budget budget = {});

}  // namespace grdt
