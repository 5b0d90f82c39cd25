#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grdt/types.hpp"

namespace grdt {

struct Loc {
  int line = 0;
  int col = 0;
};

std::string to_string(const Loc& l);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, Loc loc);
  Loc loc;
};

class ArityError : public std::runtime_error {
 public:
  ArityError(const std::string& msg, Loc loc);
  Loc loc;
};

class ClauseArityMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateConstructor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Pattern {
  enum class Kind : std::uint8_t { Var, Pair, Con };
  Kind kind = Kind::Var;
  std::string name;           // Var: variable, Con: constructor
  std::vector<Pattern> args;  // Pair: 2; Con: one per field
  Loc loc;

  static Pattern var(std::string n, Loc l = {});
  static Pattern pair(Pattern a, Pattern b, Loc l = {});
  static Pattern con(std::string k, std::vector<Pattern> args, Loc l = {});
};

/// Variables bound by p, in order; wildcards are skipped.
void pattern_vars(const Pattern& p, std::vector<std::string>& out);
/// The argument of a constructor pattern as a single pattern: absent for
/// nullary constructors, right-nested pairs for several fields.
std::optional<Pattern> con_argument(const Pattern& p);

inline constexpr std::string_view kWildcard = "_";

struct Annotation {
  enum class Kind : std::uint8_t { Closed, Partial };
  Kind kind = Kind::Closed;
  Scheme scheme;  // Closed
  Type shape;     // Partial, with holes

  static Annotation closed(Scheme s);
  static Annotation partial(Type shape);
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Clause {
  Pattern pat;
  ExprPtr body;
};

struct Expr {
  enum class Kind : std::uint8_t { Var, Con, App, Lam, Case, Rec, Annot, Pair, Int, Bool };
  Kind kind = Kind::Var;
  std::string name;           // Var, Con, Lam binder, Rec name
  std::vector<ExprPtr> kids;  // App: fun,arg  Lam/Rec/Annot: body  Case: scrutinee  Pair: l,r
  std::vector<Clause> clauses;
  std::optional<Annotation> annot;  // Rec, Annot
  long long int_value = 0;
  bool bool_value = false;
  Loc loc;
};

namespace ex {
ExprPtr var(std::string n, Loc l = {});
ExprPtr con(std::string n, Loc l = {});
ExprPtr app(ExprPtr f, ExprPtr a, Loc l = {});
ExprPtr lam(std::string x, ExprPtr body, Loc l = {});
ExprPtr case_of(ExprPtr scrut, std::vector<Clause> clauses, Loc l = {});
ExprPtr rec(std::string f, ExprPtr body, std::optional<Annotation> annot = {}, Loc l = {});
ExprPtr annot(ExprPtr e, Scheme s, Loc l = {});
ExprPtr pair(ExprPtr a, ExprPtr b, Loc l = {});
ExprPtr int_lit(long long v, Loc l = {});
ExprPtr bool_lit(bool v, Loc l = {});
}  // namespace ex

/// K : ∀ā,b̄. D ⇒ t1 → ... → tn → T ā.
struct ConstructorSig {
  std::string name;
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
  Constraint guard;
  std::vector<Type> fields;
  Type result;
  Loc loc;

  /// The pattern argument type: absent for nullary constructors, the
  /// field for unary ones, right-nested pairs otherwise.
  std::optional<Type> arg() const;
};

struct GadtDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<ConstructorSig> constructors;
  Loc loc;
};

/// A top-level function: clauses `f p1 .. pn = e`, plus its signature.
struct FunctionDef {
  std::string name;
  std::vector<std::vector<Pattern>> params;  // one row per clause
  std::vector<ExprPtr> bodies;
  std::optional<Annotation> annot;
  Loc loc;
  Loc annot_loc;
};

struct Program {
  std::vector<GadtDecl> gadts;
  std::vector<std::pair<std::string, Scheme>> primitives;
  std::vector<FunctionDef> functions;

  const FunctionDef* find(const std::string& name) const;
};

Program parse_program(const std::string& source);
/// Comma-separated equations `t1 = t2, ...`; empty input is True.
Constraint parse_constraint(const std::string& source);

/// Multi-clause definitions become `rec f in λx̄. case ...`; afterwards each
/// function has one clause with no parameters.
Program desugar(const Program& p);

struct ConInfo {
  ConstructorSig sig;
  std::string gadt;
  /// Curried scheme used for constructor occurrences in expressions.
  Scheme scheme;
};

struct Environment {
  std::map<std::string, ConInfo> constructors;
  std::map<std::string, Scheme> primitives;
  std::map<std::string, GadtDecl> gadts;

  const ConInfo* constructor(const std::string& k) const;
  bool is_gadt(const std::string& t) const { return gadts.count(t) != 0; }
};

/// Constructor schemes plus primitives; (+), (&&) and (>) are built in.
Environment constructor_env(const Program& p);

std::string pretty(const Type& t);
std::string pretty(const Pattern& p);
std::string pretty(const Expr& e);
std::string pretty(const Program& p);

/// Whether `name` is referenced freely in e.
bool mentions(const Expr& e, const std::string& name);
/// Free program identifiers (variables only, not constructors).
std::set<std::string> free_identifiers(const Expr& e);

}  // namespace grdt
