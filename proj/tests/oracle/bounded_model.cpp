#include "oracle/bounded_model.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

std::vector<Type> universe(int depth, const std::vector<Type>& extra_leaves) {
  std::vector<Type> level{Type::int_type(), Type::bool_type()};
  level.insert(level.end(), extra_leaves.begin(), extra_leaves.end());
  std::vector<Type> all = level;
  for (int d = 2; d <= depth; ++d) {
    std::vector<Type> next = all;
    for (const auto& l : all) {
      for (const auto& r : all) {
        next.push_back(Type::arrow(l, r));
        next.push_back(Type::pair(l, r));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    all = std::move(next);
  }
  return all;
}

Type ground(const Type& t, const Assignment& a) {
  if (t.is_var()) {
    auto it = a.find(t.name());
    return it == a.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Type> args;
  for (const auto& x : t.args()) args.push_back(ground(x, a));
  return Type::con(t.name(), std::move(args));
}

bool holds(const Constraint& c, const Assignment& a) {
  return std::all_of(c.begin(), c.end(), [&](const grdt::Equation& e) { return ground(e.lhs, a) == ground(e.rhs, a); });
}

namespace {

bool quantified(const std::vector<std::string>& vars, std::size_t k, bool all, const Formula& body, Assignment& a,
                const std::vector<Type>& u) {
  if (k == vars.size()) return eval(body, a, u);
  auto saved = a.find(vars[k]) == a.end() ? std::nullopt : std::optional<Type>(a[vars[k]]);
  bool result = all;
  for (const auto& t : u) {
    a[vars[k]] = t;
    bool r = quantified(vars, k + 1, all, body, a, u);
    if (r != all) {
      result = r;
      break;
    }
  }
  if (saved)
    a[vars[k]] = *saved;
  else
    a.erase(vars[k]);
  return result;
}

}  // namespace

bool eval(const Formula& f, Assignment& a, const std::vector<Type>& u) {
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Eq: return ground(f.lhs(), a) == ground(f.rhs(), a);
    case Formula::Kind::Known: return false;
    case Formula::Kind::And:
      return std::all_of(f.parts().begin(), f.parts().end(), [&](const Formula& p) { return eval(p, a, u); });
    case Formula::Kind::Or: return eval(f.parts()[0], a, u) || eval(f.parts()[1], a, u);
    case Formula::Kind::Implies: return !holds(f.hyp(), a) || eval(f.body(), a, u);
    case Formula::Kind::Forall: return quantified(f.vars(), 0, true, f.body(), a, u);
    case Formula::Kind::Exists: return quantified(f.vars(), 0, false, f.body(), a, u);
  }
  return false;
}

Type universal_constant(const std::string& v) { return Type::con("U_" + v); }

std::vector<Assignment> prefix_solutions(const grdt::Prefix& q, const Constraint& c, int depth) {
  // quantification order: free variables first, then the prefix
  std::vector<std::pair<std::string, bool>> order;  // (var, universal)
  grdt::VarSet bound = q.vars();
  std::vector<std::string> free;
  for (const auto& v : grdt::free_vars(c)) {
    if (!bound.count(v)) free.push_back(v);
  }
  for (const auto& v : free) order.emplace_back(v, false);
  for (const auto& b : q.blocks()) {
    for (const auto& v : b.vars) order.emplace_back(v, b.quant == grdt::Quant::Forall);
  }
  Assignment a;
  std::vector<Type> constants;
  std::vector<Assignment> out;
  std::map<std::size_t, std::vector<Type>> cache;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) {
      if (holds(c, a)) {
        Assignment ex;
        for (const auto& [v, uni] : order) {
          if (!uni) ex[v] = a[v];
        }
        out.push_back(ex);
      }
      return;
    }
    const auto& [v, uni] = order[k];
    if (uni) {
      a[v] = universal_constant(v);
      constants.push_back(a[v]);
      go(k + 1);
      constants.pop_back();
      return;
    }
    auto it = cache.find(constants.size());
    if (it == cache.end()) it = cache.emplace(constants.size(), universe(depth, constants)).first;
    for (const auto& t : it->second) {
      a[v] = t;
      go(k + 1);
    }
    a.erase(v);
  };
  go(0);
  return out;
}

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

bool instance_of(const Assignment& a, const grdt::Substitution& s, const std::vector<std::string>& vars) {
  std::map<std::string, Type> theta;
  for (const auto& v : vars) {
    auto it = a.find(v);
    if (it == a.end()) continue;
    if (!match(s.apply(Type::var(v)), it->second, theta)) return false;
  }
  return true;
}

}  // namespace oracle
