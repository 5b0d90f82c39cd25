#include "grdt/enumerate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace grdt {

MeaninglessOrIllTyped::MeaninglessOrIllTyped(std::size_t b, Constraint eqs)
    : std::runtime_error("alternative " + std::to_string(b + 1) + " can never be taken: " + to_string(eqs)),
      branch(b),
      equations(std::move(eqs)) {}

namespace {

// All sets with at most one equation per variable, in lexicographic order
// of the per-variable choice.
void product(const std::vector<std::pair<std::string, std::vector<Type>>>& choices, std::size_t k,
             Constraint& current, std::vector<Constraint>& out) {
  if (k == choices.size()) {
    out.push_back(current);
    return;
  }
  product(choices, k + 1, current, out);
  for (const auto& s : choices[k].second) {
    current.push_back({Type::var(choices[k].first), s});
    product(choices, k + 1, current, out);
    current.pop_back();
  }
}

constexpr std::size_t kMaxGeneralizations = 256;

// Terms s with φ(s) = t over the leaf variables: t itself, with any subterm
// possibly replaced by a leaf that φ maps to it.
std::vector<Type> generalizations(const Type& t, const Substitution& phi, const std::vector<std::string>& leaves,
                                  std::size_t cap) {
  std::vector<Type> out;
  for (const auto& v : leaves) {
    if (phi.apply(Type::var(v)) == t) out.push_back(Type::var(v));
  }
  if (!t.is_con()) return out;
  std::vector<std::vector<Type>> per_arg;
  for (const auto& a : t.args()) {
    per_arg.push_back(generalizations(a, phi, leaves, cap));
    if (per_arg.back().empty()) return out;
  }
  std::vector<Type> args;
  auto combine = [&](auto& self, std::size_t k) -> void {
    if (out.size() >= cap) return;
    if (k == per_arg.size()) {
      out.push_back(Type::con(t.name(), args));
      return;
    }
    for (const auto& g : per_arg[k]) {
      args.push_back(g);
      self(self, k + 1);
      args.pop_back();
    }
  };
  combine(combine, 0);
  return out;
}

std::string solution_key(const Substitution& psi, const std::vector<std::string>& vars) {
  std::vector<Type> images;
  for (const auto& v : vars) images.push_back(psi.apply(Type::var(v)));
  return scheme_string(Type::con("#", images));
}

}  // namespace

std::vector<Constraint> implied_equations(const Prefix& prefix, const Constraint& c,
                                          const std::vector<std::string>& vars,
                                          const std::vector<std::string>& rhs_vars) {
  auto phi = mgu_flexible(c, prefix);
  if (!phi) throw Unsatisfiable("no unifier: " + phi.failure.describe());

  VarSet allowed(vars.begin(), vars.end());
  allowed.insert(rhs_vars.begin(), rhs_vars.end());

  std::vector<std::pair<std::string, std::vector<Type>>> choices;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string& x = vars[i];
    Type image = phi->apply(Type::var(x));
    std::vector<std::string> leaves;
    for (const auto& v : allowed) {
      if (v != x) leaves.push_back(v);
    }
    std::vector<Type> rhs;
    if (!image.is_var()) {
      for (const auto& s : generalizations(image, *phi, leaves, kMaxGeneralizations)) {
        if (!s.is_var()) rhs.push_back(s);
      }
    }
    std::set<std::string> seen;
    for (const auto& y : rhs_vars) {
      if (y == x || !seen.insert(y).second) continue;
      bool later_lhs = std::find(vars.begin() + static_cast<std::ptrdiff_t>(i), vars.end(), y) != vars.end();
      if (later_lhs) continue;
      if (phi->apply(Type::var(y)) == image) rhs.push_back(Type::var(y));
    }
    if (!rhs.empty()) choices.emplace_back(x, std::move(rhs));
  }
  std::vector<Constraint> out;
  Constraint current;
  product(choices, 0, current, out);
  if (out.size() > 1) out.erase(out.begin());
  return out;
}

std::vector<std::string> interface_vars(const NormalForm& nf, const Type& t) {
  std::vector<std::string> out;
  auto theta = mgu_mixed(nf.prefix, nf.c0);
  ordered_vars(theta ? theta->apply(t) : t, out);
  return out;
}

bool is_solution(const NormalForm& nf, const Substitution& psi, std::optional<std::vector<std::string>> vars) {
  VarSet free = nf.free_vars();
  std::vector<std::string> interface = vars ? *vars : std::vector<std::string>(free.begin(), free.end());
  VarSet outer_set;
  for (const auto& v : interface) {
    VarSet fv = free_vars(psi.apply(Type::var(v)));
    outer_set.insert(fv.begin(), fv.end());
  }
  std::vector<std::string> outer(outer_set.begin(), outer_set.end());
  std::sort(outer.begin(), outer.end(), name_less);
  std::vector<std::string> inner;
  for (const auto& v : free) {
    if (!psi.binds(v) && !outer_set.count(v)) inner.push_back(v);
  }
  NormalForm inst;
  inst.prefix.append(Quant::Forall, outer);
  inst.prefix.append(Quant::Exists, inner);
  for (const auto& b : nf.prefix.blocks()) {
    std::vector<std::string> vs;
    for (const auto& v : b.vars) {
      if (!psi.binds(v) && !outer_set.count(v)) vs.push_back(v);
    }
    inst.prefix.append(b.quant, vs);
  }
  inst.c0 = psi.apply(nf.c0);
  for (const auto& g : nf.guarded) inst.guarded.push_back({psi.apply(g.hyp), psi.apply(g.concl)});
  return static_cast<bool>(solve(inst));
}

BuildResult build_solutions(const NormalForm& nf, std::optional<std::vector<std::string>> vars, Budget budget) {
  BuildResult res;
  auto theta = mgu_mixed(nf.prefix, nf.c0);
  if (!theta) throw MeaninglessOrIllTyped(0, nf.c0);
  if (vars) {
    res.vars = *vars;
  } else {
    std::vector<std::string> fv;
    for (const auto& v : nf.free_vars()) fv.push_back(v);
    std::sort(fv.begin(), fv.end(), name_less);
    for (const auto& v : fv) ordered_vars(theta->apply(Type::var(v)), res.vars);
  }

  std::vector<std::vector<Constraint>> sets;
  for (std::size_t i = 0; i < nf.guarded.size(); ++i) {
    Constraint c = conj(conj(nf.c0, nf.guarded[i].hyp), nf.guarded[i].concl);
    std::vector<Constraint> si;
    try {
      si = implied_equations(nf.prefix, c, res.vars, res.vars);
    } catch (const Unsatisfiable&) {
      throw MeaninglessOrIllTyped(i, conj(nf.guarded[i].hyp, nf.guarded[i].concl));
    }
    if (!si.front().empty()) si.insert(si.begin(), Constraint{});
    if (si.size() > budget.max_candidates) {
      si.resize(budget.max_candidates);
      res.incomplete = true;
    }
    sets.push_back(std::move(si));
  }

  std::set<std::string> seen;
  std::size_t leaves = 0;
  const std::size_t max_leaves = budget.max_candidates * 16;
  Constraint acc = nf.c0;
  auto dfs = [&](auto& self, std::size_t k) -> bool {
    if (k == sets.size()) {
      if (++leaves > max_leaves) {
        res.incomplete = true;
        return false;
      }
      auto psi = mgu_mixed(nf.prefix, acc);
      if (!psi) return true;
      std::string key = solution_key(*psi, res.vars);
      if (!seen.insert(key).second) return true;
      if (!is_solution(nf, *psi, res.vars)) return true;
      res.solutions.push_back(psi->restrict_to(VarSet(res.vars.begin(), res.vars.end())));
      if (res.solutions.size() >= budget.max_solutions) {
        res.incomplete = true;
        return false;
      }
      return true;
    }
    for (const auto& s : sets[k]) {
      std::size_t mark = acc.size();
      acc.insert(acc.end(), s.begin(), s.end());
      bool go = s.empty() || satisfiable(nf.prefix, acc) ? self(self, k + 1) : true;
      acc.resize(mark);
      if (!go) return false;
    }
    return true;
  };
  dfs(dfs, 0);
  return res;
}

}  // namespace grdt
