#include <doctest.h>

#include <set>

#include "grdt/enumerate.hpp"
#include "support.hpp"

using namespace grdt;

namespace {

Type v(const char* n) { return Type::var(n); }
Type arr(Type a, Type b) { return Type::arrow(std::move(a), std::move(b)); }
const Type Int = Type::int_type();
const Type Bool = Type::bool_type();

// h = \x -> \y -> case x of I z -> z + y; B z -> z && y
NormalForm example_h() {
  NormalForm nf;
  nf.c0 = {{v("t"), arr(Type::con("Erk", {v("a")}), arr(v("ty"), v("tr")))}};
  nf.guarded.push_back({{{v("a"), Int}}, {{v("ty"), Int}, {v("tr"), Int}}});
  nf.guarded.push_back({{{v("a"), Bool}}, {{v("ty"), Bool}, {v("tr"), Bool}}});
  return nf;
}

std::set<std::set<std::string>> as_sets(const std::vector<Constraint>& s) {
  std::set<std::set<std::string>> out;
  for (const auto& c : s) {
    std::set<std::string> eqs;
    for (const auto& e : c) eqs.insert(to_string(e));
    out.insert(eqs);
  }
  return out;
}

std::vector<Constraint> branch_sets(const NormalForm& nf, std::size_t i) {
  Constraint c = conj(conj(nf.c0, nf.guarded[i].hyp), nf.guarded[i].concl);
  return implied_equations(nf.prefix, c, {"ty", "tr"}, {"a"});
}

}  // namespace

TEST_CASE("implied equation sets of the first branch") {
  auto s1 = branch_sets(example_h(), 0);
  CHECK(s1.size() == 8);
  CHECK(as_sets(s1) == std::set<std::set<std::string>>{{"ty=Int"},
                                                        {"ty=a"},
                                                        {"tr=Int"},
                                                        {"tr=a"},
                                                        {"ty=Int", "tr=Int"},
                                                        {"ty=Int", "tr=a"},
                                                        {"ty=a", "tr=Int"},
                                                        {"ty=a", "tr=a"}});
}

TEST_CASE("implied equation sets of the second branch") {
  auto s2 = branch_sets(example_h(), 1);
  CHECK(s2.size() == 8);
  CHECK(as_sets(s2) == std::set<std::set<std::string>>{{"ty=Bool"},
                                                        {"ty=a"},
                                                        {"tr=Bool"},
                                                        {"tr=a"},
                                                        {"ty=Bool", "tr=Bool"},
                                                        {"ty=Bool", "tr=a"},
                                                        {"ty=a", "tr=Bool"},
                                                        {"ty=a", "tr=a"}});
}

TEST_CASE("every implied set is entailed") {
  NormalForm nf = example_h();
  for (std::size_t i = 0; i < 2; ++i) {
    Constraint c = conj(conj(nf.c0, nf.guarded[i].hyp), nf.guarded[i].concl);
    for (const auto& s : branch_sets(nf, i)) CHECK(entails_eq({}, c, s));
  }
}

TEST_CASE("True implies only the empty set") {
  auto s = implied_equations({}, {}, {"a"}, {"a"});
  REQUIRE(s.size() == 1);
  CHECK(s[0].empty());
}

TEST_CASE("unsatisfiable input is rejected") {
  CHECK_THROWS_AS(implied_equations({}, {{Int, Bool}}, {"a"}, {}), Unsatisfiable);
}

TEST_CASE("right-hand sides generalize the solved image") {
  auto s = implied_equations({}, {{v("x"), arr(Int, Int)}, {v("y"), Int}}, {"x"}, {"y"});
  std::set<std::string> rhs;
  for (const auto& c : s) {
    REQUIRE(c.size() == 1);
    rhs.insert(to_string(c[0].rhs));
  }
  CHECK(rhs == std::set<std::string>{"Int -> Int", "Int -> y", "y -> Int", "y -> y"});
}

TEST_CASE("a later left-hand variable is not a right-hand side") {
  auto s = implied_equations({}, {{v("x"), v("y")}}, {"x", "y"}, {"x", "y"});
  CHECK(as_sets(s) == std::set<std::set<std::string>>{{"y=x"}});
}

TEST_CASE("building solutions for the branching example") {
  NormalForm nf = example_h();
  BuildResult r = build_solutions(nf, std::vector<std::string>{"a", "ty", "tr"});
  CHECK_FALSE(r.incomplete);
  bool found = false;
  for (const auto& psi : r.solutions) {
    CHECK(is_solution(nf, psi, r.vars));
    if (psi.apply(v("ty")) == v("a") && psi.apply(v("tr")) == v("a")) found = true;
  }
  CHECK(found);
}

TEST_CASE("interface variables follow the solved type") {
  NormalForm nf = example_h();
  CHECK(interface_vars(nf, v("t")) == std::vector<std::string>{"a", "ty", "tr"});
}

TEST_CASE("without implications the only solution is the mgu of C0") {
  NormalForm nf;
  nf.c0 = {{v("x"), arr(v("y"), Int)}};
  BuildResult r = build_solutions(nf, std::vector<std::string>{"x", "y"});
  REQUIRE(r.solutions.size() == 1);
  CHECK(r.solutions[0].apply(v("x")) == arr(v("y"), Int));
}

TEST_CASE("a branch that can never be taken is reported") {
  NormalForm nf = example_h();
  nf.guarded.push_back({{{v("a"), Int}}, {{v("a"), Bool}}});
  try {
    build_solutions(nf);
    FAIL("expected MeaninglessOrIllTyped");
  } catch (const MeaninglessOrIllTyped& e) {
    CHECK(e.branch == 2);
  }
}

TEST_CASE("budgets mark truncated enumeration") {
  Budget b;
  b.max_solutions = 1;
  BuildResult r = build_solutions(example_h(), std::vector<std::string>{"a", "ty", "tr"}, b);
  CHECK(r.solutions.size() == 1);
  CHECK(r.incomplete);
}

TEST_CASE("is_solution quantifies the variables left free") {
  NormalForm nf = example_h();
  Substitution good;
  good.bind("ty", v("a"));
  good.bind("tr", v("a"));
  std::vector<std::string> vars{"a", "ty", "tr"};
  CHECK(is_solution(nf, good, vars));
  // t is determined by C0 but universal when it is part of the interface
  CHECK_FALSE(is_solution(nf, good));
  Substitution bad;
  bad.bind("ty", Int);
  CHECK_FALSE(is_solution(nf, bad, vars));
}
