#include "grdt/known.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "grdt/enumerate.hpp"

namespace grdt {

namespace {

// Variables and nullary constructors of t.
void leaves(const Type& t, std::set<Type>& out) {
  if (t.is_var() || t.args().empty()) {
    out.insert(t);
    return;
  }
  for (const auto& a : t.args()) leaves(a, out);
}

struct State {
  Substitution theta;
  std::vector<Type> asserted;
};

class CaseSplit {
 public:
  CaseSplit(const NormalForm& nf, const Constraint& u, bool with_entries) : nf_(nf) {
    for (const auto& v : free_vars(u)) base_.asserted.push_back(Type::var(v));
    for (const auto& k : nf.known) {
      if (k.bare())
        base_.asserted.push_back(k.subject);
      else if (with_entries)
        entries_.push_back(&k);
    }
    auto theta = mgu_flexible(conj(u, nf.c0), nf.prefix);
    if (theta) {
      base_.theta = *theta;
      consistent_ = true;
    }
  }

  bool consistent() const { return consistent_; }
  const Substitution& base() const { return base_.theta; }

  /// Clears flags of candidates that some model leaves unknown.
  void run(const std::vector<Type>& candidates, std::vector<bool>& entailed) {
    if (!consistent_) return;
    cands_ = &candidates;
    flags_ = &entailed;
    State s = base_;
    dfs(0, s);
  }

 private:
  bool known(const State& s, const Type& t) const {
    std::set<Type> have, need;
    for (const auto& a : s.asserted) leaves(s.theta.apply(a), have);
    leaves(s.theta.apply(t), need);
    return std::includes(have.begin(), have.end(), need.begin(), need.end());
  }

  bool all_known(const State& s) const {
    for (std::size_t i = 0; i < cands_->size(); ++i) {
      if ((*flags_)[i] && !known(s, (*cands_)[i])) return false;
    }
    return true;
  }

  void dfs(std::size_t k, State& s) {
    if (all_known(s)) return;
    if (k == entries_.size()) {
      for (std::size_t i = 0; i < cands_->size(); ++i) {
        if ((*flags_)[i] && !known(s, (*cands_)[i])) (*flags_)[i] = false;
      }
      return;
    }
    const KnownEntry& e = *entries_[k];
    if (!known(s, e.subject)) {
      auto r = mgu_flexible(s.theta.apply(*e.alt), nf_.prefix);
      if (r) {
        State next{r->compose_after(s.theta), s.asserted};
        dfs(k + 1, next);
        if (std::none_of(flags_->begin(), flags_->end(), [](bool b) { return b; })) return;
      }
    }
    s.asserted.push_back(e.subject);
    dfs(k + 1, s);
    s.asserted.pop_back();
  }

  const NormalForm& nf_;
  State base_;
  std::vector<const KnownEntry*> entries_;
  bool consistent_ = false;
  const std::vector<Type>* cands_ = nullptr;
  std::vector<bool>* flags_ = nullptr;
};

// One variable per θ-class, excluding variables local to a disjunction.
std::vector<Type> candidates(const NormalForm& nf, const Constraint& u, const Substitution& theta) {
  VarSet locals;
  for (const auto& k : nf.known) locals.insert(k.locals.begin(), k.locals.end());
  VarSet vs = nf.matrix_vars();
  free_vars(u, vs);
  for (const auto& k : nf.known) {
    if (k.alt) {
      for (const auto& v : free_vars(*k.alt)) {
        if (locals.count(v)) vs.erase(v);
      }
    }
  }
  std::vector<std::string> ordered(vs.begin(), vs.end());
  std::sort(ordered.begin(), ordered.end(), name_less);
  std::vector<Type> out;
  std::set<Type> images;
  for (const auto& v : ordered) {
    if (locals.count(v)) continue;
    Type img = theta.apply(Type::var(v));
    if (!images.insert(img).second) continue;
    out.push_back(img.is_var() ? img : Type::var(v));
  }
  return out;
}

std::vector<Type> entailed_among(const NormalForm& nf, const Constraint& u, const std::vector<Type>& cands,
                                 bool with_entries) {
  CaseSplit split(nf, u, with_entries);
  std::vector<bool> flags(cands.size(), true);
  split.run(cands, flags);
  std::vector<Type> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (flags[i]) out.push_back(cands[i]);
  }
  return out;
}

}  // namespace

bool entails_known(const NormalForm& nf, const Constraint& u, const Type& subject) {
  return !entailed_among(nf, u, {subject}, true).empty();
}

std::vector<Type> known_set(const NormalForm& nf, const Constraint& u) {
  CaseSplit split(nf, u, true);
  return entailed_among(nf, u, candidates(nf, u, split.base()), true);
}

std::optional<Constraint> min_unsat_subset(const Prefix& prefix, const Constraint& c) {
  if (satisfiable(prefix, c)) return std::nullopt;
  Constraint core = c;
  for (std::size_t i = 0; i < core.size();) {
    Constraint without = core;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (!satisfiable(prefix, without))
      core = std::move(without);
    else
      ++i;
  }
  return core;
}

std::optional<Constraint> failure_core(const NormalForm& nf, const SolveResult& s) {
  if (s) return std::nullopt;
  auto theta = mgu_mixed(nf.prefix, nf.c0);
  if (!theta) return min_unsat_subset(nf.prefix, nf.c0);
  Constraint es;
  for (const auto& e : s.branch_equations) {
    for (const auto& eq : theta->apply(e)) {
      if (eq.lhs != eq.rhs) es.push_back(eq);
    }
  }
  if (auto core = min_unsat_subset(nf.prefix, es)) return core;
  return min_unsat_subset(nf.prefix, s.combined);
}

Diagnosis criteria_check(const NormalForm& nf, const Constraint& u, const Namer& name) {
  Diagnosis d;
  CaseSplit split(nf, u, false);
  std::vector<Type> cands = candidates(nf, u, split.base());
  std::vector<Type> plain = entailed_among(nf, u, cands, false);
  std::vector<Type> rest;
  for (const auto& c : cands) {
    if (std::find(plain.begin(), plain.end(), c) == plain.end()) rest.push_back(c);
  }
  d.required_known = entailed_among(nf, u, rest, true);
  d.known_sets_agree = d.required_known.empty();

  NormalForm with_u = nf.without_known();
  with_u.c0 = conj(u, nf.c0);
  SolveResult s = solve(with_u);
  d.satisfiable = static_cast<bool>(s);
  if (!s) {
    d.min_unsat = failure_core(with_u, s);
    try {
      d.satisfiable = !build_solutions(with_u).solutions.empty();
    } catch (const std::exception&) {
      d.satisfiable = false;
    }
  }
  d.criteria_satisfied = d.known_sets_agree && d.satisfiable;

  if (!d.criteria_satisfied) {
    Namer show = name ? name : [](const Type& t) { return to_string(t); };
    std::set<std::string> in_core;
    if (d.min_unsat) {
      for (const auto& v : free_vars(*d.min_unsat)) in_core.insert(show(Type::var(v)));
    }
    std::vector<Type> order;
    for (const auto& t : d.required_known) {
      if (in_core.count(show(t))) order.push_back(t);
    }
    for (const auto& t : d.required_known) {
      if (std::find(order.begin(), order.end(), t) == order.end()) order.push_back(t);
    }
    for (const auto& t : order) d.suggestions.push_back("annotate the type " + show(t));
    if (order.empty() && d.min_unsat) {
      for (const auto& v : free_vars(*d.min_unsat)) d.suggestions.push_back("annotate the type " + show(Type::var(v)));
    }
  }
  return d;
}

}  // namespace grdt
