#include <doctest.h>

#include <random>

#include "grdt/principal.hpp"
#include "support.hpp"

using namespace grdt;

namespace {

Type v(const char* n) { return Type::var(n); }
Type arr(Type a, Type b) { return Type::arrow(std::move(a), std::move(b)); }
Type erk(Type a) { return Type::con("Erk", {std::move(a)}); }
const Type Int = Type::int_type();
const Type Bool = Type::bool_type();

Substitution single(const char* x, Type t) {
  Substitution s;
  s.bind(x, std::move(t));
  return s;
}

// f x y = case x of I z -> y + z
NormalForm example_f() {
  NormalForm nf;
  nf.c0 = {{v("t"), arr(erk(v("a")), arr(v("ty"), v("tr")))}};
  nf.guarded.push_back({{{v("a"), Int}}, {{v("ty"), Int}, {v("tr"), Int}}});
  return nf;
}

NormalForm example_h() {
  NormalForm nf = example_f();
  nf.guarded.push_back({{{v("a"), Bool}}, {{v("ty"), Bool}, {v("tr"), Bool}}});
  return nf;
}

Substitution with_t(const Substitution& s) {
  Substitution out = s;
  out.set("t", s.apply(arr(erk(v("a")), arr(v("ty"), v("tr")))));
  return out;
}

}  // namespace

TEST_CASE("more general by matching") {
  auto general = single("t", arr(erk(v("a")), arr(v("a"), v("a"))));
  auto inst = single("t", arr(erk(Int), arr(Int, Int)));
  CHECK(more_general(general, inst, {"t"}));
  CHECK_FALSE(more_general(inst, general, {"t"}));
  auto mixed = single("t", arr(erk(v("a")), arr(Int, Int)));
  CHECK_FALSE(more_general(mixed, general, {"t"}));
  CHECK_FALSE(more_general(general, mixed, {"t"}));
}

TEST_CASE("the matcher is shared across variables") {
  Substitution psi;
  psi.bind("x", v("a"));
  psi.bind("y", v("a"));
  Substitution phi;
  phi.bind("x", Int);
  phi.bind("y", Bool);
  CHECK_FALSE(more_general(psi, phi, {"x", "y"}));
  CHECK(more_general(phi, phi, {"x", "y"}));
  CHECK(more_general(psi, phi, {"x"}));
}

TEST_CASE("more_general is a preorder") {
  std::mt19937 rng(11);
  const std::vector<Type> leaves{Int, Bool, v("p"), v("q"), v("r")};
  auto term = [&](int depth, auto& self) -> Type {
    if (depth == 0 || rng() % 3 == 0) return leaves[rng() % leaves.size()];
    Type l = self(depth - 1, self), r = self(depth - 1, self);
    return rng() % 2 ? arr(l, r) : Type::pair(l, r);
  };
  const std::vector<std::string> vars{"x", "y"};
  auto random_subst = [&] {
    Substitution s;
    for (const auto& x : vars) s.set(x, term(2, term));
    return s;
  };
  for (int i = 0; i < 300; ++i) {
    Substitution a = random_subst();
    CHECK(more_general(a, a, vars));
    // θ∘a is an instance of a
    Substitution theta;
    for (const char* w : {"p", "q", "r"}) {
      if (rng() % 2) theta.set(w, term(1, term));
    }
    Substitution b;
    for (const auto& x : vars) b.set(x, theta.apply(a.apply(Type::var(x))));
    CHECK(more_general(a, b, vars));
    Substitution c;
    Substitution theta2;
    theta2.set("p", term(1, term));
    for (const auto& x : vars) c.set(x, theta2.apply(b.apply(Type::var(x))));
    if (more_general(a, b, vars) && more_general(b, c, vars)) CHECK(more_general(a, c, vars));
  }
}

TEST_CASE("necessary criteria reject a meaningless type") {
  NormalForm nf = example_f();
  auto bad = single("t", arr(erk(arr(Int, Int)), arr(v("b"), v("c"))));
  CHECK_FALSE(necessary_criteria(nf, bad));
  Substitution fine;
  fine.bind("ty", Int);
  fine.bind("tr", Int);
  CHECK(necessary_criteria(nf, with_t(fine)));
}

TEST_CASE("necessary criteria hold for the mgu without implications") {
  NormalForm nf;
  nf.c0 = {{v("x"), arr(v("y"), Int)}};
  CHECK(necessary_criteria(nf, *mgu_mixed({}, nf.c0)));
}

TEST_CASE("a single branch has incomparable solutions") {
  PrincipalResult r = principal_type(example_f(), std::vector<std::string>{"a", "ty", "tr"});
  CHECK(r.verdict == PrincipalResult::Verdict::NoPrincipal);
  std::vector<std::string> types;
  for (const auto& c : r.candidates) types.push_back(scheme_string(c.apply(arr(erk(v("a")), arr(v("ty"), v("tr"))))));
  std::sort(types.begin(), types.end());
  CHECK(types == std::vector<std::string>{"forall a. Erk a -> Int -> Int", "forall a. Erk a -> Int -> a",
                                          "forall a. Erk a -> a -> Int", "forall a. Erk a -> a -> a"});
}

TEST_CASE("two branches have a principal solution") {
  NormalForm nf = example_h();
  PrincipalResult r = principal_type(nf, std::vector<std::string>{"a", "ty", "tr"});
  REQUIRE(r.verdict == PrincipalResult::Verdict::Principal);
  REQUIRE(r.principal);
  CHECK(scheme_string(r.principal->apply(arr(erk(v("a")), arr(v("ty"), v("tr"))))) == "forall a. Erk a -> a -> a");
  CHECK(necessary_criteria(nf, with_t(*r.principal)));
  for (const auto& s : r.solutions) CHECK(more_general(*r.principal, s, r.vars));
}

TEST_CASE("truncated enumeration is unknown") {
  Budget b;
  b.max_solutions = 1;
  PrincipalResult r = principal_type(example_f(), std::vector<std::string>{"a", "ty", "tr"}, b);
  CHECK(r.verdict == PrincipalResult::Verdict::Unknown);
}

TEST_CASE("verdict names") {
  CHECK(to_string(PrincipalResult::Verdict::Principal) == "principal");
  CHECK(to_string(PrincipalResult::Verdict::NoPrincipal) == "no-principal");
}
