#include "grdt/principal.hpp"

#include <algorithm>
#include <map>

#include "grdt/unify.hpp"

namespace grdt {

namespace {

bool match(const Type& pat, const Type& target, std::map<std::string, Type>& theta) {
  if (pat.is_var()) {
    auto [it, fresh] = theta.emplace(pat.name(), target);
    return fresh || it->second == target;
  }
  if (target.is_var() || pat.name() != target.name() || pat.args().size() != target.args().size()) return false;
  for (std::size_t i = 0; i < pat.args().size(); ++i) {
    if (!match(pat.args()[i], target.args()[i], theta)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(PrincipalResult::Verdict v) {
  switch (v) {
    case PrincipalResult::Verdict::Principal: return "principal";
    case PrincipalResult::Verdict::NoPrincipal: return "no-principal";
    case PrincipalResult::Verdict::NotPrincipalWitness: return "not-principal";
    case PrincipalResult::Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

bool more_general(const Substitution& psi, const Substitution& phi, const std::vector<std::string>& vars) {
  std::map<std::string, Type> theta;
  for (const auto& v : vars) {
    if (!match(psi.apply(Type::var(v)), phi.apply(Type::var(v)), theta)) return false;
  }
  return true;
}

bool necessary_criteria(const NormalForm& nf, const Substitution& psi) {
  Skolemized sk = skolemize(nf);
  Constraint lhs = conj(to_equations(psi), sk.c0);
  Constraint rhs = sk.c0;
  for (const auto& g : sk.guarded) {
    lhs = conj(lhs, g.hyp);
    rhs = conj(conj(rhs, g.concl), g.hyp);
  }
  bool lsat = static_cast<bool>(mgu_flexible(lhs));
  bool rsat = static_cast<bool>(mgu_flexible(rhs));
  if (!lsat || !rsat) return lsat == rsat;
  VarSet lv = free_vars(lhs), rv = free_vars(rhs), shared;
  for (const auto& v : lv) {
    if (rv.count(v)) shared.insert(v);
  }
  return equiv_wrt(lhs, rhs, shared);
}

PrincipalResult principal_type(const NormalForm& nf, std::optional<std::vector<std::string>> vars, Budget budget) {
  PrincipalResult res;
  BuildResult built = build_solutions(nf, std::move(vars), budget);
  res.solutions = built.solutions;
  res.vars = built.vars;
  const auto& sols = built.solutions;

  for (std::size_t i = 0; i < sols.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sols.size() && !dominated; ++j) {
      dominated = j != i && more_general(sols[j], sols[i], res.vars) && !more_general(sols[i], sols[j], res.vars);
    }
    if (!dominated) res.candidates.push_back(sols[i]);
  }

  for (const auto& psi : res.candidates) {
    bool subsumes = std::all_of(sols.begin(), sols.end(),
                                [&](const Substitution& phi) { return more_general(psi, phi, res.vars); });
    if (!subsumes) continue;
    res.principal = psi;
    if (!necessary_criteria(nf, psi)) {
      res.verdict = PrincipalResult::Verdict::NotPrincipalWitness;
      res.reason = "subsumes every enumerated solution but fails the necessary criteria";
      return res;
    }
    res.verdict = built.incomplete ? PrincipalResult::Verdict::Unknown : PrincipalResult::Verdict::Principal;
    return res;
  }
  res.verdict = built.incomplete ? PrincipalResult::Verdict::Unknown : PrincipalResult::Verdict::NoPrincipal;
  return res;
}

}  // namespace grdt
