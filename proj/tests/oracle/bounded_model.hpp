#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grdt/formula.hpp"
#include "grdt/types.hpp"

namespace oracle {

using grdt::Constraint;
using grdt::Formula;
using grdt::Type;
using Assignment = std::map<std::string, Type>;

/// Ground types of depth ≤ depth (leaves have depth 1) over Int, Bool,
/// the extra leaves, arrows and pairs.
std::vector<Type> universe(int depth, const std::vector<Type>& extra_leaves = {});

Type ground(const Type& t, const Assignment& a);
bool holds(const Constraint& c, const Assignment& a);

/// Truth of f under a, quantifiers ranging over u. Known-atoms are false.
bool eval(const Formula& f, Assignment& a, const std::vector<Type>& u);

/// Every assignment of vars to elements of u.
template <typename F>
void for_each_assignment(const std::vector<std::string>& vars, const std::vector<Type>& u, Assignment& a, F&& f,
                         std::size_t k = 0) {
  if (k == vars.size()) {
    f(a);
    return;
  }
  for (const auto& t : u) {
    a[vars[k]] = t;
    for_each_assignment(vars, u, a, f, k + 1);
  }
  a.erase(vars[k]);
}

/// Solutions of Q.c found by enumeration: universals are distinct fresh
/// constants, each existential (and free variable) ranges over the depth
/// bounded universe built from the constants of universals quantified
/// before it. Returns the satisfying assignments of the existentials.
std::vector<Assignment> prefix_solutions(const grdt::Prefix& q, const Constraint& c, int depth);

/// The constant standing for universal v.
Type universal_constant(const std::string& v);

/// Whether the ground assignment is an instance of s on vars: a single θ
/// with a(v) = θ(s(v)) for all v.
bool instance_of(const Assignment& a, const grdt::Substitution& s, const std::vector<std::string>& vars);

}  // namespace oracle
