#include <doctest.h>

#include "grdt/syntax.hpp"

using namespace grdt;

namespace {

const char* kErk = "data Erk a = (a=Int) => I a | (a=Bool) => B a\n";

}  // namespace

TEST_CASE("data declarations carry guards and existentials") {
  Program p = parse_program(
      "data R a = (a=Int) => RInt | forall b c. (a=(b,c)) => RProd (R b) (R c)\n"
      "size RInt = 1\n");
  REQUIRE(p.gadts.size() == 1);
  const auto& d = p.gadts[0];
  CHECK(d.params == std::vector<std::string>{"a"});
  REQUIRE(d.constructors.size() == 2);
  CHECK(d.constructors[0].fields.empty());
  CHECK_FALSE(d.constructors[0].arg());
  const auto& prod = d.constructors[1];
  CHECK(prod.existentials == std::vector<std::string>{"b", "c"});
  CHECK(to_string(prod.guard) == "a=(b, c)");
  REQUIRE(prod.arg());
  CHECK(to_string(*prod.arg()) == "(R b, R c)");
}

TEST_CASE("signatures attach to their functions") {
  Program p = parse_program(std::string(kErk) + "f :: Erk a -> a\nf (I z) = z\nf (B z) = z\n");
  const FunctionDef* f = p.find("f");
  REQUIRE(f);
  REQUIRE(f->annot);
  CHECK(f->annot->kind == Annotation::Kind::Closed);
  CHECK(f->params.size() == 2);
  CHECK(scheme_string(f->annot->scheme) == "forall a. Erk a -> a");
}

TEST_CASE("partial signatures keep holes") {
  Program p = parse_program(
      "data R a = (a=Int) => RInt\nsize :: R a -> _\nsize RInt = 1\n");
  const FunctionDef* f = p.find("size");
  REQUIRE(f->annot);
  CHECK(f->annot->kind == Annotation::Kind::Partial);
  CHECK(f->annot->shape.contains_hole());
}

TEST_CASE("explicit forall signatures") {
  Program p = parse_program(std::string(kErk) + "g :: forall a. Erk a -> Int -> Int\ng x y = y\n");
  CHECK(scheme_string(p.find("g")->annot->scheme) == "forall a. Erk a -> Int -> Int");
}

TEST_CASE("expressions: operators, lambdas, pairs, case and annotations") {
  Program p = parse_program(
      "data Box a = MkBox a\n"
      "f = \\x y -> case x of MkBox z -> (z + 1 > y, True && False)\n"
      "g = (\\x -> x :: forall a. a -> a)\n");
  CHECK(pretty(*p.find("f")->bodies[0]) ==
        "\\x -> \\y -> case x of { MkBox z -> ((z + 1) > y, True && False) }");
  CHECK(p.find("g")->bodies[0]->kind == Expr::Kind::Annot);
}

TEST_CASE("layout: case alternatives on following lines") {
  Program p = parse_program(std::string(kErk) +
                            "f x = case x of\n"
                            "  I z -> z + 1\n"
                            "  B z -> 0\n"
                            "g = 1\n");
  CHECK(p.find("f")->bodies[0]->clauses.size() == 2);
  CHECK(p.find("g"));
}

TEST_CASE("desugar turns clauses into rec and case") {
  Program p = desugar(parse_program(std::string(kErk) + "f (I z) y = y\nf (B z) y = y\n"));
  const FunctionDef* f = p.find("f");
  REQUIRE(f->bodies.size() == 1);
  const Expr& e = *f->bodies[0];
  CHECK(e.kind == Expr::Kind::Rec);
  CHECK(pretty(e).find("case") != std::string::npos);
  CHECK(f->params[0].empty());
}

TEST_CASE("desugar wraps single clauses in rec over a lambda") {
  Program p = desugar(parse_program("id x = x\n"));
  const Expr& e = *p.find("id")->bodies[0];
  REQUIRE(e.kind == Expr::Kind::Rec);
  CHECK(e.kids[0]->kind == Expr::Kind::Lam);
}

TEST_CASE("constructor environment builds curried schemes") {
  Environment env = constructor_env(parse_program(std::string(kErk) + "f x = x\n"));
  const ConInfo* i = env.constructor("I");
  REQUIRE(i);
  CHECK(i->gadt == "Erk");
  CHECK(to_string(i->scheme.context) == "a=Int");
  CHECK(to_string(i->scheme.body) == "a -> Erk a");
  CHECK(env.primitives.count("+"));
  CHECK(env.is_gadt("Erk"));
}

TEST_CASE("constraints parse as comma-separated equations") {
  CHECK(parse_constraint("").empty());
  Constraint c = parse_constraint("t1 = a, b = (Int, Bool -> c)");
  REQUIRE(c.size() == 2);
  CHECK(to_string(c[1]) == "b=(Int, Bool -> c)");
}

TEST_CASE("parse errors carry locations") {
  try {
    parse_program("f x = x +\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc.line >= 1);
  }
  CHECK_THROWS_AS(parse_program("f x = $\n"), ParseError);
  CHECK_THROWS_AS(parse_program("f :: Int\n"), ParseError);
  CHECK_THROWS_AS(parse_program("f = K\n"), ParseError);
  CHECK_THROWS_AS(parse_program("data T a = A | B\ndata T b = C\nf = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_program("data T a = A\ndata U a = A\nf = 1\n"), DuplicateConstructor);
  CHECK_THROWS_AS(parse_program("f x = x\ng = 1\nf y = y\n"), ParseError);
}

TEST_CASE("arity errors") {
  CHECK_THROWS_AS(parse_program(std::string(kErk) + "f :: Erk -> Int\nf x = 1\n"), ArityError);
  CHECK_THROWS_AS(parse_program(std::string(kErk) + "f (I a b) = 1\n"), ArityError);
  CHECK_THROWS_AS(desugar(parse_program("f x = 1\nf x y = 2\n")), ClauseArityMismatch);
}

TEST_CASE("free identifiers skip bound names and constructors") {
  Program p = parse_program("data Box a = MkBox a\nf = \\x -> MkBox (g x y)\n");
  auto ids = free_identifiers(*p.find("f")->bodies[0]);
  CHECK(ids == std::set<std::string>{"g", "y"});
}
