#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grdt/types.hpp"

namespace grdt {

struct FormulaNode;

/// The enriched constraint language produced by constraint generation:
/// equations closed under conjunction, implication with simple
/// hypotheses, disjunction with a known-atom, and quantifiers.
class Formula {
 public:
  enum class Kind : std::uint8_t { True, Eq, And, Implies, Or, Forall, Exists, Known };

  Formula();  // True

  static Formula truth() { return Formula(); }
  static Formula eq(Type lhs, Type rhs);
  static Formula eqs(const Constraint& c);
  static Formula conj(std::vector<Formula> parts);
  static Formula implies(Constraint hyp, Formula concl);
  static Formula disj(Formula left, Formula right);
  static Formula forall(std::vector<std::string> vars, Formula body);
  static Formula exists(std::vector<std::string> vars, Formula body);
  static Formula known(Type subject);

  Kind kind() const;
  /// Eq: both sides. Known: lhs is the subject.
  const Type& lhs() const;
  const Type& rhs() const;
  /// And: conjuncts. Or: {left, right}.
  const std::vector<Formula>& parts() const;
  /// Implies: hypothesis.
  const Constraint& hyp() const;
  /// Forall/Exists: bound variables.
  const std::vector<std::string>& vars() const;
  /// Implies/Forall/Exists: the body.
  const Formula& body() const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Formula::Kind kind = Formula::Kind::True;
  Type lhs, rhs;
  std::vector<Formula> parts;
  Constraint hyp;
  std::vector<std::string> vars;
  std::vector<Formula> body;  // 0 or 1 element
};

void free_vars(const Formula& f, VarSet& out);
VarSet free_vars(const Formula& f);
/// Applies s to the free occurrences of variables in f.
Formula apply(const Substitution& s, const Formula& f);
/// Renames every bound variable of f to a fresh name.
Formula rename_bound(const Formula& f, FreshSupply& fresh);
/// Replaces every known-atom by True (used to compare both generation modes).
Formula erase_known(const Formula& f);
std::string to_string(const Formula& f);

enum class Quant : std::uint8_t { Forall, Exists };

struct QuantBlock {
  Quant quant;
  std::vector<std::string> vars;
};

/// Mixed quantifier prefix ∀ā1.∃b̄1...; variables not in the prefix are
/// free and behave as outermost existentials.
class Prefix {
 public:
  Prefix() = default;
  explicit Prefix(std::vector<QuantBlock> blocks);

  const std::vector<QuantBlock>& blocks() const { return blocks_; }
  bool empty() const { return blocks_.empty(); }

  /// Appends a block, fusing it with the last block when the quantifiers
  /// agree. Empty blocks are dropped.
  void append(Quant q, const std::vector<std::string>& vars);
  void append(const Prefix& other);

  bool binds(const std::string& v) const;
  bool is_universal(const std::string& v) const;
  /// Position of v in quantification order; -1 for free variables.
  int position(const std::string& v) const;
  VarSet vars() const;
  VarSet universals() const;

 private:
  std::vector<QuantBlock> blocks_;
};

std::string to_string(const Prefix& p);

struct Guarded {
  Constraint hyp;
  Constraint concl;
};

/// known(subject) ∨ ∃locals.alt. A bare known-atom has no alternative.
struct KnownEntry {
  Type subject;
  std::optional<Constraint> alt;
  std::vector<std::string> locals;

  bool bare() const { return !alt.has_value(); }
};

/// Q. C0 ∧ (D1 ⟹ C1) ∧ ... ∧ (Dn ⟹ Cn) ∧ K
struct NormalForm {
  Prefix prefix;
  Constraint c0;
  std::vector<Guarded> guarded;
  std::vector<KnownEntry> known;

  /// Variables occurring in the matrix that the prefix does not bind.
  VarSet free_vars() const;
  /// Every variable occurring in the matrix.
  VarSet matrix_vars() const;
  Formula to_formula() const;
  NormalForm without_known() const;
};

std::string to_string(const NormalForm& nf);

class NotNormalizable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rewrites a generated formula to prefix form using
///   (F1 ⟹ Qa.F2) ↔ Qa.(F1 ⟹ F2),
///   (Qa.F1) ∧ (Qb.F2) ↔ Qa,b.(F1 ∧ F2),
///   C1 ⟹ (C2 ⟹ C3) ↔ (C1 ∧ C2) ⟹ C3,
///   (F1 ∨ F2) ∧ (F1 ∨ F3) ↔ F1 ∨ (F2 ∧ F3),
///   (F1 ∨ ∃a.F2) ↔ ∃a.(F1 ∨ F2).
/// Bound variables must be unique. The conclusion of an implication is
/// also copied into the hypotheses of the implications nested under it
/// (C1 ⟹ C2 ∧ (D ⟹ C3) becomes (C1 ⟹ C2) ∧ (C1 ∧ C2 ∧ D ⟹ C3)).
NormalForm normalize(const Formula& f);

}  // namespace grdt
