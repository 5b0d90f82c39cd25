#include "grdt/unify.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace grdt {

std::string to_string(FailKind k) {
  switch (k) {
    case FailKind::OccursCheck:
      return "occurs-check";
    case FailKind::Clash:
      return "clash";
    case FailKind::ScopeViolation:
      return "scope-violation";
  }
  return "?";
}

std::string Failure::describe() const {
  std::string out = to_string(kind) + ": " + to_string(lhs) + " vs " + to_string(rhs);
  out += " (from " + to_string(equation) + ")";
  return out;
}

bool name_less(const std::string& a, const std::string& b) {
  auto num = [](const std::string& s) -> long long {
    auto pos = s.rfind('%');
    if (pos == std::string::npos) return -1;
    try {
      return std::stoll(s.substr(pos + 1));
    } catch (...) {
      return -1;
    }
  };
  long long na = num(a), nb = num(b);
  if (na != nb) {
    if (na < 0) return false;
    if (nb < 0) return true;
    return na < nb;
  }
  return a < b;
}

namespace {

struct Item {
  Type lhs, rhs;
  std::size_t source;
};

// Shared worker. In rigid mode universals cannot be bound and levels are
// enforced; in flexible mode everything is a variable and `level` only
// orients variable-variable bindings.
class Unifier {
 public:
  Unifier(const Prefix& prefix, bool rigid) : prefix_(prefix), rigid_(rigid) {}

  UnifyResult run(const Constraint& c) {
    UnifyResult res;
    std::deque<Item> work;
    for (std::size_t i = 0; i < c.size(); ++i) work.push_back({c[i].lhs, c[i].rhs, i});
    while (!work.empty()) {
      Item it = std::move(work.front());
      work.pop_front();
      Type l = sigma_.apply(it.lhs);
      Type r = sigma_.apply(it.rhs);
      if (l == r) continue;
      auto fail = [&](FailKind k) {
        res.failure = {k, c[it.source], l, r, 0};
        return res;
      };
      if (l.is_con() && r.is_con()) {
        if (l.name() != r.name() || l.args().size() != r.args().size()) return fail(FailKind::Clash);
        for (std::size_t i = 0; i < l.args().size(); ++i) work.push_back({l.args()[i], r.args()[i], it.source});
        continue;
      }
      if (l.is_var() && r.is_var()) {
        auto k = bind_vars(l.name(), r.name());
        if (k) return fail(*k);
        continue;
      }
      if (!l.is_var()) std::swap(l, r);
      if (auto k = bind_term(l.name(), r)) return fail(*k);
    }
    res.subst = sigma_;
    return res;
  }

 private:
  int level(const std::string& v) {
    auto it = level_.find(v);
    if (it != level_.end()) return it->second;
    int p = prefix_.position(v);
    level_[v] = p;
    return p;
  }

  bool universal(const std::string& v) const { return rigid_ && prefix_.is_universal(v); }

  // true when a should be bound in preference to b
  bool later(const std::string& a, const std::string& b) {
    int la = level(a), lb = level(b);
    if (la != lb) return la > lb;
    return name_less(b, a);
  }

  std::optional<FailKind> bind_vars(const std::string& a, const std::string& b) {
    bool ua = universal(a), ub = universal(b);
    if (ua && ub) return FailKind::Clash;
    if (ua || ub) {
      const std::string& u = ua ? a : b;
      const std::string& x = ua ? b : a;
      if (level(u) >= level(x)) return FailKind::ScopeViolation;
      sigma_.bind(x, Type::var(u));
      return std::nullopt;
    }
    if (later(a, b)) {
      sigma_.bind(a, Type::var(b));
    } else {
      sigma_.bind(b, Type::var(a));
    }
    return std::nullopt;
  }

  std::optional<FailKind> bind_term(const std::string& x, const Type& t) {
    if (universal(x)) return FailKind::Clash;
    if (t.contains_var(x)) return FailKind::OccursCheck;
    VarSet vs = free_vars(t);
    if (rigid_) {
      int lx = level(x);
      for (const auto& v : vs) {
        if (universal(v) && level(v) >= lx) return FailKind::ScopeViolation;
      }
      for (const auto& v : vs) {
        if (!universal(v)) level_[v] = std::min(level(v), lx);
      }
    }
    sigma_.bind(x, t);
    return std::nullopt;
  }

  const Prefix& prefix_;
  bool rigid_;
  Substitution sigma_;
  std::map<std::string, int> level_;
};

}  // namespace

UnifyResult mgu_mixed(const Prefix& prefix, const Constraint& c) { return Unifier(prefix, true).run(c); }

UnifyResult mgu_flexible(const Constraint& c, const Prefix& order) { return Unifier(order, false).run(c); }

bool satisfiable(const Prefix& prefix, const Constraint& c) { return static_cast<bool>(mgu_mixed(prefix, c)); }

namespace {

// Variables of Ci that occur nowhere else in the normal form and are
// existentially quantified.
VarSet branch_locals(const NormalForm& nf, std::size_t i) {
  VarSet elsewhere;
  free_vars(nf.c0, elsewhere);
  for (std::size_t j = 0; j < nf.guarded.size(); ++j) {
    free_vars(nf.guarded[j].hyp, elsewhere);
    if (j != i) free_vars(nf.guarded[j].concl, elsewhere);
  }
  VarSet locals;
  for (const auto& v : free_vars(nf.guarded[i].concl)) {
    if (!elsewhere.count(v) && nf.prefix.binds(v) && !nf.prefix.is_universal(v)) locals.insert(v);
  }
  return locals;
}

Constraint project_solved(const Constraint& e, const VarSet& locals, const Prefix& order) {
  auto theta = mgu_flexible(e, order);
  if (!theta) return e;
  Constraint out;
  for (const auto& [v, img] : theta->bindings()) {
    if (!locals.count(v)) out.push_back({Type::var(v), img});
  }
  return out;
}

// step2(hyp, concl) returns φi(concl) or nothing when hyp has no unifier
template <typename Step2>
SolveResult three_steps(const Prefix& prefix, const Constraint& c0, const std::vector<Guarded>& guarded,
                        const std::vector<VarSet>& locals, Step2 step2) {
  SolveResult res;
  auto phi = mgu_mixed(prefix, c0);
  if (!phi) {
    res.failure = phi.failure;
    res.failure.step = 1;
    res.combined = c0;
    return res;
  }
  Constraint combined = c0;
  for (std::size_t i = 0; i < guarded.size(); ++i) {
    Constraint e;
    if (auto ei = step2(phi->apply(guarded[i].hyp), phi->apply(guarded[i].concl))) {
      e = project_solved(*ei, locals[i], prefix);
    }
    res.branch_equations.push_back(e);
    combined.insert(combined.end(), e.begin(), e.end());
  }
  res.combined = combined;
  auto psi = mgu_mixed(prefix, combined);
  if (!psi) {
    res.failure = psi.failure;
    res.failure.step = 3;
    return res;
  }
  res.subst = *psi;
  return res;
}

}  // namespace

SolveResult solve(const NormalForm& nf) {
  std::vector<VarSet> locals;
  for (std::size_t i = 0; i < nf.guarded.size(); ++i) locals.push_back(branch_locals(nf, i));
  return three_steps(nf.prefix, nf.c0, nf.guarded, locals,
                     [&](const Constraint& d, const Constraint& c) -> std::optional<Constraint> {
                       auto phi_i = mgu_flexible(d, nf.prefix);
                       if (!phi_i) return std::nullopt;
                       return phi_i->apply(c);
                     });
}

Skolemized skolemize(const NormalForm& nf) {
  Skolemized out;
  Substitution s;
  std::vector<Type> deps;
  for (const auto& b : nf.prefix.blocks()) {
    for (const auto& v : b.vars) {
      if (b.quant == Quant::Exists) {
        deps.push_back(Type::var(v));
      } else {
        Type sk = Type::con("#" + v, deps);
        out.skolems.emplace(v, sk);
        s.set(v, sk);
      }
    }
  }
  out.c0 = s.apply(nf.c0);
  for (const auto& g : nf.guarded) out.guarded.push_back({s.apply(g.hyp), s.apply(g.concl)});
  return out;
}

namespace {

// Skolem terms as variables named after their head, and back.
Type skolems_to_vars(const Type& t) {
  if (t.is_skolem()) return Type::var(t.name());
  if (t.args().empty()) return t;
  std::vector<Type> args;
  for (const auto& a : t.args()) args.push_back(skolems_to_vars(a));
  return Type::con(t.name(), std::move(args));
}

Constraint skolems_to_vars(const Constraint& c) {
  Constraint out;
  for (const auto& e : c) out.push_back({skolems_to_vars(e.lhs), skolems_to_vars(e.rhs)});
  return out;
}

}  // namespace

SolveResult solve_skolemized(const Skolemized& sk) {
  Substitution back;
  for (const auto& [v, term] : sk.skolems) back.set(term.name(), term);
  NormalForm flat;
  flat.c0 = sk.c0;
  flat.guarded = sk.guarded;
  std::vector<std::string> all;
  for (const auto& v : flat.matrix_vars()) all.push_back(v);
  flat.prefix.append(Quant::Exists, all);
  std::vector<VarSet> locals;
  for (std::size_t i = 0; i < sk.guarded.size(); ++i) locals.push_back(branch_locals(flat, i));
  return three_steps(Prefix{}, sk.c0, sk.guarded, locals,
                     [&](const Constraint& d, const Constraint& c) -> std::optional<Constraint> {
                       auto phi_i = mgu_flexible(skolems_to_vars(d));
                       if (!phi_i) return std::nullopt;
                       return back.apply(phi_i->apply(skolems_to_vars(c)));
                     });
}

bool entails_eq(const Prefix& prefix, const Constraint& c, const Constraint& e) {
  auto phi = mgu_mixed(prefix, c);
  if (!phi) throw Unsatisfiable("constraint has no unifier under the prefix: " + phi.failure.describe());
  return std::all_of(e.begin(), e.end(), [&](const Equation& eq) { return phi->apply(eq.lhs) == phi->apply(eq.rhs); });
}

bool entails_projected(const Constraint& c1, const Constraint& c2, const VarSet& vars) {
  auto theta = mgu_flexible(c1);
  if (!theta) return true;
  std::map<std::string, std::string> ren;
  std::vector<std::string> ys;
  std::size_t n = 0;
  for (const auto& v : free_vars(c2)) {
    if (!vars.count(v)) {
      ren[v] = "$y" + std::to_string(n++);
      ys.push_back(ren[v]);
    }
  }
  Constraint goal = theta->apply(rename(c2, ren));
  std::vector<std::string> xs;
  for (const auto& v : free_vars(goal)) {
    if (!ren.count(v) && std::find(ys.begin(), ys.end(), v) == ys.end()) xs.push_back(v);
  }
  Prefix q;
  q.append(Quant::Forall, xs);
  q.append(Quant::Exists, ys);
  return satisfiable(q, goal);
}

bool equiv_wrt(const Constraint& c1, const Constraint& c2, const VarSet& vars) {
  return entails_projected(c1, c2, vars) && entails_projected(c2, c1, vars);
}

}  // namespace grdt
