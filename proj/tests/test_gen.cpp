#include <doctest.h>

#include "grdt/formula.hpp"
#include "grdt/gen.hpp"
#include "support.hpp"

using namespace grdt;
using support::fixture;
using support::generate;
using support::solved_type;

namespace {

bool has_known(const Formula& f) {
  if (f.kind() == Formula::Kind::Known) return true;
  for (const auto& p : f.parts()) {
    if (has_known(p)) return true;
  }
  if (f.kind() == Formula::Kind::Implies || f.kind() == Formula::Kind::Forall || f.kind() == Formula::Kind::Exists)
    return has_known(f.body());
  return false;
}

}  // namespace

TEST_CASE("single-branch case solves to the expected type") {
  auto l = fixture("erk_plus.grdt");
  CHECK(solved_type(generate(l, l.body("f"))) == "forall a. Erk a -> Int -> Int");
}

TEST_CASE("the generated formula has one guarded implication per alternative") {
  auto l = fixture("erk_branches.grdt");
  auto g = generate(l, l.body("f"));
  CHECK(g.nf.guarded.size() == 2);
  auto s = solve(g.nf);
  REQUIRE_FALSE(s);
  CHECK(s.failure.step == 3);
}

TEST_CASE("plain recursion on size fails on a rigid pair") {
  auto l = fixture("size.grdt");
  auto g = generate(l, l.rec("size"));
  auto s = solve(g.nf);
  REQUIRE_FALSE(s);
  CHECK(s.failure.kind == FailKind::Clash);
  CHECK((s.failure.lhs.is_pair() || s.failure.rhs.is_pair()));
}

TEST_CASE("initial guess puts the data type on scrutinized arguments") {
  auto l = fixture("size.grdt");
  FreshSupply fresh;
  Scheme g = guess_initial(l.env, "size", l.body("size"), std::nullopt, fresh);
  CHECK(scheme_string(g) == "forall a b. R a -> b");
}

TEST_CASE("Rec-Guess infers size") {
  auto l = fixture("size.grdt");
  FreshSupply fresh;
  RecGuessResult r = rec_guess(l.env, "size", l.body("size"), std::nullopt, 5, fresh);
  CHECK(scheme_string(r.scheme) == "forall a. R a -> Int");
  CHECK(r.iterations >= 1);
}

TEST_CASE("Rec-Guess under a partial annotation") {
  auto l = fixture("size_partial.grdt");
  const auto& rec = l.rec("size");
  FreshSupply fresh;
  RecGuessResult r = rec_guess(l.env, "size", *rec.kids[0], rec.annot, 5, fresh);
  CHECK(scheme_string(r.scheme) == "forall a. R a -> Int");
}

TEST_CASE("Rec-Guess reports unsolvable first constraints") {
  auto l = fixture("erk_branches.grdt");
  FreshSupply fresh;
  try {
    rec_guess(l.env, "f", l.body("f"), std::nullopt, 5, fresh);
    FAIL("expected a failure");
  } catch (const GenError& e) {
    CHECK(e.kind == GenError::Kind::SolveFailed);
    CHECK(e.normal_form.has_value());
  }
}

TEST_CASE("closed annotations check recursive functions") {
  auto l = fixture("eval.grdt");
  auto g = generate(l, l.rec("eval"));
  CHECK(solve(g.nf));
  auto w = fixture("eval_wrong.grdt");
  CHECK_FALSE(solve(generate(w, w.rec("eval")).nf));
}

TEST_CASE("each constructor use is a fresh instance") {
  Program p = desugar(parse_program("data Box a = MkBox a\nf = (MkBox 1, MkBox True)\n"));
  Environment env = constructor_env(p);
  FreshSupply fresh;
  GenResult g = gen_constraints(env, *p.find("f")->bodies[0], fresh);
  SolveResult s = solve(normalize(g.formula));
  REQUIRE(s);
  CHECK(to_string(s.subst->apply(g.type)) == "(Box Int, Box Bool)");
}

TEST_CASE("pattern inference binds existentials and guards") {
  auto l = fixture("size.grdt");
  FreshSupply fresh;
  Generator gen(l.env, fresh);
  PatternInfo p = gen.infer_pattern(Pattern::con("RProd", {Pattern::var("x"), Pattern::var("y")}));
  CHECK(p.existentials.size() == 2);
  CHECK(p.guard.size() == 1);
  REQUIRE(p.bindings.size() == 2);
  CHECK(p.bindings[0].first == "x");
  CHECK(p.type.name() == "R");
}

TEST_CASE("known mode adds known-disjunctions") {
  auto l = fixture("erk_bool.grdt");
  FreshSupply fresh;
  GenResult g = gen_constraints_known(l.env, l.body("h"), fresh);
  CHECK(has_known(g.formula));
  CHECK_FALSE(has_known(erase_known(g.formula)));
  NormalForm nf = normalize(g.formula);
  CHECK_FALSE(nf.known.empty());
}

TEST_CASE("known mode rejects annotations and nested case") {
  Program p = desugar(parse_program(
      "data Erk a = (a=Int) => I a | (a=Bool) => B a\n"
      "f = \\x -> (x :: forall a. a -> a)\n"
      "g = \\x -> \\y -> case x of I z -> case y of I w -> z\n"));
  Environment env = constructor_env(p);
  FreshSupply fresh;
  try {
    gen_constraints_known(env, *p.find("f")->bodies[0]->kids[0], fresh);
    FAIL("expected an error");
  } catch (const GenError& e) {
    CHECK(e.kind == GenError::Kind::AnnotationPresent);
  }
  try {
    gen_constraints_known(env, *p.find("g")->bodies[0]->kids[0], fresh);
    FAIL("expected an error");
  } catch (const GenError& e) {
    CHECK(e.kind == GenError::Kind::NestedCase);
  }
}

TEST_CASE("unbound identifiers are reported") {
  Program p = desugar(parse_program("f = \\x -> g x\n"));
  Environment env = constructor_env(p);
  FreshSupply fresh;
  try {
    gen_constraints(env, *p.find("f")->bodies[0]->kids[0], fresh);
    FAIL("expected an error");
  } catch (const GenError& e) {
    CHECK(e.kind == GenError::Kind::UnboundVariable);
  }
}

TEST_CASE("primitives instantiate their schemes") {
  auto l = fixture("erk_scrutinee.grdt");
  CHECK(l.env.primitives.count("h3"));
  CHECK(solved_type(generate(l, l.body("f"))) == "forall a. Erk a -> Erk a -> (Bool, Int)");
}
