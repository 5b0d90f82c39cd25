#include <doctest.h>

#include <random>

#include "grdt/known.hpp"
#include "support.hpp"

using namespace grdt;
using support::fixture;
using support::generate;

namespace {

Type v(const char* n) { return Type::var(n); }
const Type Int = Type::int_type();
const Type Bool = Type::bool_type();

support::Generated known_nf(const char* file, const char* f) {
  auto l = fixture(file);
  return generate(l, l.rec(f), GenMode::Known);
}

// The Erk index and the result variable of an `Erk a -> r` function type.
std::pair<Type, Type> erk_vars(const support::Generated& g) {
  auto th = mgu_mixed(g.nf.prefix, g.nf.c0);
  Type t = th->apply(g.type);
  return {t.args()[0].args()[0], t.args()[1]};
}

bool subset_satisfiable_without(const Constraint& c, std::size_t skip) {
  Constraint rest;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != skip) rest.push_back(c[i]);
  }
  return satisfiable({}, rest);
}

}  // namespace

TEST_CASE("conflicting branches need an annotation on the result") {
  auto g = known_nf("erk_branches.grdt", "f");
  auto [a, r] = erk_vars(g);
  Diagnosis d = criteria_check(g.nf, {});
  CHECK_FALSE(d.criteria_satisfied);
  CHECK_FALSE(d.known_sets_agree);
  // solvable once the result is tied to the index
  CHECK(d.satisfiable);
  CHECK(std::find(d.required_known.begin(), d.required_known.end(), r) != d.required_known.end());
  REQUIRE(d.min_unsat);
  REQUIRE(d.min_unsat->size() == 2);
  CHECK(same_equations(*d.min_unsat, {{r, Int}, {r, Bool}}));
  REQUIRE_FALSE(d.suggestions.empty());
  CHECK(d.suggestions.front().find("annotate") == 0);
}

TEST_CASE("assuming the result equals the index satisfies the criteria") {
  auto g = known_nf("erk_branches.grdt", "f");
  auto [a, r] = erk_vars(g);
  Diagnosis d = criteria_check(g.nf, {{r, a}});
  CHECK(d.criteria_satisfied);
  CHECK(d.satisfiable);
  CHECK_FALSE(d.min_unsat);
}

TEST_CASE("a fixed result type needs no known variables") {
  auto g = known_nf("erk_bool.grdt", "h");
  Diagnosis d = criteria_check(g.nf, {});
  CHECK(d.criteria_satisfied);
  CHECK(d.required_known.empty());
  CHECK(d.known_sets_agree);
}

TEST_CASE("the case scrutinee makes its type known") {
  auto g = known_nf("erk_scrutinee.grdt", "f");
  Diagnosis d = criteria_check(g.nf, {});
  CHECK(d.criteria_satisfied);
  auto th = mgu_mixed(g.nf.prefix, g.nf.c0);
  Type t = th->apply(g.type);
  // Erk a -> Erk a -> (Bool, Int): the scrutinee index is known
  CHECK(entails_known(g.nf, {}, t.args()[0]));
}

TEST_CASE("known closes under constructors and equality") {
  NormalForm nf;
  nf.c0 = {{v("c"), v("a")}};
  nf.known.push_back({v("a"), std::nullopt, {}});
  nf.known.push_back({v("b"), std::nullopt, {}});
  CHECK(entails_known(nf, {}, v("c")));
  CHECK(entails_known(nf, {}, Type::arrow(v("a"), v("b"))));
  CHECK(entails_known(nf, {}, Type::pair(v("c"), v("b"))));
  CHECK_FALSE(entails_known(nf, {}, Type::arrow(v("a"), v("d"))));
  CHECK(entails_known(nf, {{v("d"), v("b")}}, Type::arrow(v("a"), v("d"))));
}

TEST_CASE("minimal unsatisfiable subset of a small conflict") {
  Constraint c{{v("a"), Int}, {v("a"), Bool}, {v("b"), Int}};
  auto m = min_unsat_subset({}, c);
  REQUIRE(m);
  CHECK(same_equations(*m, {{v("a"), Int}, {v("a"), Bool}}));
  CHECK_FALSE(min_unsat_subset({}, {{v("a"), Int}, {v("b"), Bool}}));
}

TEST_CASE("minimal unsatisfiable subsets are minimal on random conflicts") {
  std::mt19937 rng(7);
  const std::vector<Type> leaves{Int, Bool, v("x"), v("y"), v("z")};
  auto term = [&](int depth) {
    auto pick = [&] { return leaves[rng() % leaves.size()]; };
    if (depth == 0 || rng() % 2) return pick();
    return rng() % 2 ? Type::arrow(pick(), pick()) : Type::pair(pick(), pick());
  };
  int unsat = 0;
  for (int i = 0; i < 300; ++i) {
    Constraint c;
    std::size_t n = 2 + rng() % 5;
    for (std::size_t k = 0; k < n; ++k) c.push_back({term(1), term(1)});
    auto m = min_unsat_subset({}, c);
    CHECK(m.has_value() == !satisfiable({}, c));
    if (!m) continue;
    ++unsat;
    CHECK_FALSE(satisfiable({}, *m));
    for (const auto& e : *m) CHECK(std::find(c.begin(), c.end(), e) != c.end());
    for (std::size_t k = 0; k < m->size(); ++k) CHECK(subset_satisfiable_without(*m, k));
  }
  CHECK(unsat > 30);
}

TEST_CASE("known entailment is monotone in added equations") {
  for (const auto& [file, f] : std::vector<std::pair<const char*, const char*>>{
           {"erk_branches.grdt", "f"}, {"erk_bool.grdt", "h"}, {"erk_scrutinee.grdt", "f"}}) {
    auto g = known_nf(file, f);
    auto [a, r] = erk_vars(g);
    Constraint u{{r, a}};
    for (const auto& s : known_set(g.nf, {})) {
      if (satisfiable(g.nf.prefix, conj(u, g.nf.c0))) CHECK(entails_known(g.nf, u, s));
    }
  }
}

TEST_CASE("failure core of a failed solve") {
  auto l = fixture("erk_branches.grdt");
  auto g = generate(l, l.body("f"));
  auto s = solve(g.nf);
  REQUIRE_FALSE(s);
  auto core = failure_core(g.nf, s);
  REQUIRE(core);
  CHECK(core->size() == 2);
}
