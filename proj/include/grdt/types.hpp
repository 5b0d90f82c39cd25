#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace grdt {

// Reserved constructor heads. Arrows and pairs are ordinary binary
// constructors so unification treats every head uniformly.
inline constexpr std::string_view kArrow = "->";
inline constexpr std::string_view kPair = ",";
inline constexpr std::string_view kInt = "Int";
inline constexpr std::string_view kBool = "Bool";

struct TypeNode;

/// Immutable, structurally compared type term.
///
/// A term is a variable, a constructor applied to arguments, or a hole
/// (only in partial annotations). Skolem constants are constructors whose
/// name starts with '#'.
class Type {
 public:
  enum class Kind : std::uint8_t { Var, Con, Hole };

  Type();  // Int; present so Type is regular

  static Type var(std::string name);
  static Type con(std::string name, std::vector<Type> args = {});
  static Type arrow(Type dom, Type cod);
  static Type pair(Type left, Type right);
  static Type hole();
  static Type int_type() { return con(std::string(kInt)); }
  static Type bool_type() { return con(std::string(kBool)); }

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_con() const { return kind() == Kind::Con; }
  bool is_hole() const { return kind() == Kind::Hole; }
  bool is_arrow() const;
  bool is_pair() const;
  bool is_skolem() const;

  const std::string& name() const;
  const std::vector<Type>& args() const;

  bool contains_var(std::string_view v) const;
  bool contains_hole() const;
  bool ground() const;
  std::size_t depth() const;

  int compare(const Type& other) const;
  friend bool operator==(const Type& a, const Type& b) { return a.compare(b) == 0; }
  friend bool operator!=(const Type& a, const Type& b) { return a.compare(b) != 0; }
  friend bool operator<(const Type& a, const Type& b) { return a.compare(b) < 0; }

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct TypeNode {
  Type::Kind kind;
  std::string name;
  std::vector<Type> args;
};

using VarSet = std::set<std::string>;

void free_vars(const Type& t, VarSet& out);
VarSet free_vars(const Type& t);
/// Variables in order of first occurrence (left to right), no duplicates.
void ordered_vars(const Type& t, std::vector<std::string>& out);
/// All subterms, including t itself.
void subterms(const Type& t, std::set<Type>& out);

struct Equation {
  Type lhs;
  Type rhs;

  int compare(const Equation& o) const;
  friend bool operator==(const Equation& a, const Equation& b) { return a.compare(b) == 0; }
  friend bool operator<(const Equation& a, const Equation& b) { return a.compare(b) < 0; }
};

/// Conjunction of equations; the empty conjunction is True.
using Constraint = std::vector<Equation>;

void free_vars(const Constraint& c, VarSet& out);
VarSet free_vars(const Constraint& c);
Constraint conj(Constraint a, const Constraint& b);
/// Same equations regardless of order and multiplicity.
bool same_equations(const Constraint& a, const Constraint& b);

/// Canonical orientation: a variable on the left when one side is a
/// variable; between two variables the lexicographically least is on the
/// left.
Equation canonical(Equation e);

/// Idempotent variable-to-type map.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool binds(const std::string& v) const { return map_.count(v) != 0; }
  const Type* lookup(const std::string& v) const;
  const std::map<std::string, Type>& bindings() const { return map_; }

  /// Adds v := t, applying the new binding to existing images so the map
  /// stays idempotent. t must already be normalized by *this and must not
  /// contain v.
  void bind(const std::string& v, const Type& t);
  /// Raw insertion; callers guarantee idempotence.
  void set(const std::string& v, const Type& t) { map_[v] = t; }

  Type apply(const Type& t) const;
  Equation apply(const Equation& e) const;
  Constraint apply(const Constraint& c) const;

  /// (*this) after `inner`: x ↦ this(inner(x)).
  Substitution compose_after(const Substitution& inner) const;
  Substitution restrict_to(const VarSet& vars) const;
  bool is_idempotent() const;

  friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

 private:
  std::map<std::string, Type> map_;
};

/// E_ψ: one equation a = ψ(a) per binding.
Constraint to_equations(const Substitution& s);

/// Generates globally fresh variable names of the form `<hint>%<n>`.
/// The counter is explicit so independent runs can use disjoint ranges.
class FreshSupply {
 public:
  explicit FreshSupply(std::uint64_t start = 1) : next_(start) {}
  std::string name(std::string_view hint = "t");
  Type var(std::string_view hint = "t") { return Type::var(name(hint)); }
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

/// Strips the `%n` suffix of generated names.
std::string base_name(std::string_view v);

/// Renames variables (not constructors).
Type rename(const Type& t, const std::map<std::string, std::string>& m);
Constraint rename(const Constraint& c, const std::map<std::string, std::string>& m);

std::string to_string(const Type& t);
std::string to_string(const Equation& e);
std::string to_string(const Constraint& c);
std::string to_string(const Substitution& s);
std::ostream& operator<<(std::ostream& os, const Type& t);
std::ostream& operator<<(std::ostream& os, const Equation& e);

/// Closed type scheme ∀bound. context ⇒ body.
struct Scheme {
  std::vector<std::string> bound;
  Constraint context;
  Type body;
};

/// Renames the bound variables of `s` with fresh names.
struct Instance {
  Constraint context;
  Type type;
  std::map<std::string, std::string> renaming;
};
Instance instantiate(const Scheme& s, FreshSupply& fresh);

/// Generalizes `t` over all its variables (in order of occurrence).
Scheme generalize_all(const Type& t);

/// Prints a type with variables renamed a, b, c, ... in order of first
/// occurrence, prefixed by `forall` when it has variables.
std::string scheme_string(const Type& t);
std::string scheme_string(const Scheme& s);
/// Alpha-equivalence of two types viewed as fully generalized schemes.
bool alpha_equivalent(const Type& a, const Type& b);

}  // namespace grdt
