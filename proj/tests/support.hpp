#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "grdt/gen.hpp"
#include "grdt/syntax.hpp"
#include "grdt/unify.hpp"

namespace support {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(GRDT_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// A desugared program with its constructor environment.
struct Loaded {
  grdt::Program program;
  grdt::Environment env;

  explicit Loaded(const std::string& source)
      : program(grdt::desugar(grdt::parse_program(source))), env(grdt::constructor_env(program)) {}

  /// The body under the `rec` a function desugars to.
  const grdt::Expr& body(const std::string& f) const { return *program.find(f)->bodies[0]->kids[0]; }
  const grdt::Expr& rec(const std::string& f) const { return *program.find(f)->bodies[0]; }
};

inline Loaded fixture(const std::string& name) { return Loaded(read_fixture(name)); }

/// Constraint generation for a function body, normalized.
struct Generated {
  grdt::NormalForm nf;
  grdt::Type type;
};

inline Generated generate(const Loaded& l, const grdt::Expr& e, grdt::GenMode mode = grdt::GenMode::Plain) {
  grdt::FreshSupply fresh;
  grdt::GenResult g = mode == grdt::GenMode::Plain ? grdt::gen_constraints(l.env, e, fresh)
                                                   : grdt::gen_constraints_known(l.env, e, fresh);
  return {grdt::normalize(g.formula), g.type};
}

/// The fully generalized type of a solved generation, or "" on failure.
inline std::string solved_type(const Generated& g) {
  grdt::SolveResult s = grdt::solve(g.nf);
  if (!s) return "";
  return grdt::scheme_string(s.subst->apply(g.type));
}

}  // namespace support
