#include "grdt/formula.hpp"

#include <algorithm>
#include <sstream>

namespace grdt {

namespace {

const std::vector<Formula> kNoParts;

std::shared_ptr<FormulaNode> node(Formula::Kind k) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = k;
  return n;
}

}  // namespace

// The default constructor yields True; a shared node keeps it cheap.
Formula::Formula() {
  static const auto kTrue = std::shared_ptr<const FormulaNode>(node(Kind::True));
  node_ = kTrue;
}

Formula Formula::eq(Type lhs, Type rhs) {
  auto n = node(Kind::Eq);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::eqs(const Constraint& c) {
  std::vector<Formula> parts;
  for (const auto& e : c) parts.push_back(eq(e.lhs, e.rhs));
  return conj(std::move(parts));
}

Formula Formula::conj(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  for (auto& p : parts) {
    if (p.kind() == Kind::True) continue;
    if (p.kind() == Kind::And) {
      flat.insert(flat.end(), p.parts().begin(), p.parts().end());
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  auto n = node(Kind::And);
  n->parts = std::move(flat);
  return Formula(std::move(n));
}

Formula Formula::implies(Constraint hyp, Formula concl) {
  auto n = node(Kind::Implies);
  n->hyp = std::move(hyp);
  n->body.push_back(std::move(concl));
  return Formula(std::move(n));
}

Formula Formula::disj(Formula left, Formula right) {
  auto n = node(Kind::Or);
  n->parts = {std::move(left), std::move(right)};
  return Formula(std::move(n));
}

Formula Formula::forall(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  auto n = node(Kind::Forall);
  n->vars = std::move(vars);
  n->body.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) return body;
  auto n = node(Kind::Exists);
  n->vars = std::move(vars);
  n->body.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula Formula::known(Type subject) {
  auto n = node(Kind::Known);
  n->lhs = std::move(subject);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Type& Formula::lhs() const { return node_->lhs; }
const Type& Formula::rhs() const { return node_->rhs; }
const std::vector<Formula>& Formula::parts() const { return node_->parts; }
const Constraint& Formula::hyp() const { return node_->hyp; }
const std::vector<std::string>& Formula::vars() const { return node_->vars; }
const Formula& Formula::body() const { return node_->body.front(); }

void free_vars(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return;
    case Formula::Kind::Eq:
      free_vars(f.lhs(), out);
      free_vars(f.rhs(), out);
      return;
    case Formula::Kind::Known:
      free_vars(f.lhs(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& p : f.parts()) free_vars(p, out);
      return;
    case Formula::Kind::Implies:
      free_vars(f.hyp(), out);
      free_vars(f.body(), out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      VarSet inner;
      free_vars(f.body(), inner);
      for (const auto& v : f.vars()) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

VarSet free_vars(const Formula& f) {
  VarSet s;
  free_vars(f, s);
  return s;
}

Formula apply(const Substitution& s, const Formula& f) {
  if (s.empty()) return f;
  switch (f.kind()) {
    case Formula::Kind::True:
      return f;
    case Formula::Kind::Eq:
      return Formula::eq(s.apply(f.lhs()), s.apply(f.rhs()));
    case Formula::Kind::Known:
      return Formula::known(s.apply(f.lhs()));
    case Formula::Kind::And: {
      std::vector<Formula> parts;
      for (const auto& p : f.parts()) parts.push_back(apply(s, p));
      return Formula::conj(std::move(parts));
    }
    case Formula::Kind::Or:
      return Formula::disj(apply(s, f.parts()[0]), apply(s, f.parts()[1]));
    case Formula::Kind::Implies:
      return Formula::implies(s.apply(f.hyp()), apply(s, f.body()));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Substitution inner;
      for (const auto& [v, img] : s.bindings()) {
        if (std::find(f.vars().begin(), f.vars().end(), v) == f.vars().end()) inner.set(v, img);
      }
      auto body = apply(inner, f.body());
      return f.kind() == Formula::Kind::Forall ? Formula::forall(f.vars(), body)
                                               : Formula::exists(f.vars(), body);
    }
  }
  return f;
}

namespace {

Formula rename_bound_in(const Formula& f, const std::map<std::string, std::string>& m,
                        FreshSupply& fresh) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return f;
    case Formula::Kind::Eq:
      return Formula::eq(rename(f.lhs(), m), rename(f.rhs(), m));
    case Formula::Kind::Known:
      return Formula::known(rename(f.lhs(), m));
    case Formula::Kind::And: {
      std::vector<Formula> parts;
      for (const auto& p : f.parts()) parts.push_back(rename_bound_in(p, m, fresh));
      return Formula::conj(std::move(parts));
    }
    case Formula::Kind::Or:
      return Formula::disj(rename_bound_in(f.parts()[0], m, fresh), rename_bound_in(f.parts()[1], m, fresh));
    case Formula::Kind::Implies:
      return Formula::implies(rename(f.hyp(), m), rename_bound_in(f.body(), m, fresh));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      auto inner = m;
      std::vector<std::string> vars;
      for (const auto& v : f.vars()) {
        vars.push_back(fresh.name(v));
        inner[v] = vars.back();
      }
      auto body = rename_bound_in(f.body(), inner, fresh);
      return f.kind() == Formula::Kind::Forall ? Formula::forall(std::move(vars), body)
                                               : Formula::exists(std::move(vars), body);
    }
  }
  return f;
}

}  // namespace

Formula rename_bound(const Formula& f, FreshSupply& fresh) { return rename_bound_in(f, {}, fresh); }

Formula erase_known(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Known:
      return Formula::truth();
    case Formula::Kind::And: {
      std::vector<Formula> parts;
      for (const auto& p : f.parts()) parts.push_back(erase_known(p));
      return Formula::conj(std::move(parts));
    }
    case Formula::Kind::Or: {
      auto l = erase_known(f.parts()[0]);
      auto r = erase_known(f.parts()[1]);
      if (l.kind() == Formula::Kind::True || r.kind() == Formula::Kind::True) return Formula::truth();
      return Formula::disj(l, r);
    }
    case Formula::Kind::Implies:
      return Formula::implies(f.hyp(), erase_known(f.body()));
    case Formula::Kind::Forall:
      return Formula::forall(f.vars(), erase_known(f.body()));
    case Formula::Kind::Exists:
      return Formula::exists(f.vars(), erase_known(f.body()));
    default:
      return f;
  }
}

namespace {

std::string join_vars(const std::vector<std::string>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? " " : "") + vs[i];
  return out;
}

void print(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      os << "True";
      return;
    case Formula::Kind::Eq:
      os << to_string(f.lhs()) << "=" << to_string(f.rhs());
      return;
    case Formula::Kind::Known:
      os << "known(" << to_string(f.lhs()) << ")";
      return;
    case Formula::Kind::And:
      for (std::size_t i = 0; i < f.parts().size(); ++i) {
        if (i) os << ", ";
        const auto& p = f.parts()[i];
        bool paren = p.kind() == Formula::Kind::Implies || p.kind() == Formula::Kind::Or;
        if (paren) os << '(';
        print(os, p);
        if (paren) os << ')';
      }
      return;
    case Formula::Kind::Or:
      print(os, f.parts()[0]);
      os << " \\/ (";
      print(os, f.parts()[1]);
      os << ')';
      return;
    case Formula::Kind::Implies:
      os << to_string(f.hyp()) << " => ";
      if (f.body().kind() == Formula::Kind::And) os << '(';
      print(os, f.body());
      if (f.body().kind() == Formula::Kind::And) os << ')';
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f.kind() == Formula::Kind::Forall ? "forall " : "exists ") << join_vars(f.vars()) << ".(";
      print(os, f.body());
      os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

Prefix::Prefix(std::vector<QuantBlock> blocks) {
  for (auto& b : blocks) append(b.quant, b.vars);
}

void Prefix::append(Quant q, const std::vector<std::string>& vars) {
  if (vars.empty()) return;
  if (!blocks_.empty() && blocks_.back().quant == q) {
    auto& last = blocks_.back().vars;
    last.insert(last.end(), vars.begin(), vars.end());
  } else {
    blocks_.push_back({q, vars});
  }
}

void Prefix::append(const Prefix& other) {
  for (const auto& b : other.blocks_) append(b.quant, b.vars);
}

bool Prefix::binds(const std::string& v) const { return position(v) >= 0; }

bool Prefix::is_universal(const std::string& v) const {
  for (const auto& b : blocks_) {
    if (std::find(b.vars.begin(), b.vars.end(), v) != b.vars.end()) return b.quant == Quant::Forall;
  }
  return false;
}

int Prefix::position(const std::string& v) const {
  int pos = 0;
  for (const auto& b : blocks_) {
    for (const auto& x : b.vars) {
      if (x == v) return pos;
      ++pos;
    }
  }
  return -1;
}

VarSet Prefix::vars() const {
  VarSet s;
  for (const auto& b : blocks_) s.insert(b.vars.begin(), b.vars.end());
  return s;
}

VarSet Prefix::universals() const {
  VarSet s;
  for (const auto& b : blocks_) {
    if (b.quant == Quant::Forall) s.insert(b.vars.begin(), b.vars.end());
  }
  return s;
}

std::string to_string(const Prefix& p) {
  std::string out;
  for (const auto& b : p.blocks()) {
    out += (b.quant == Quant::Forall ? "forall " : "exists ") + join_vars(b.vars) + ". ";
  }
  return out;
}

VarSet NormalForm::matrix_vars() const {
  VarSet s;
  grdt::free_vars(c0, s);
  for (const auto& g : guarded) {
    grdt::free_vars(g.hyp, s);
    grdt::free_vars(g.concl, s);
  }
  for (const auto& k : known) {
    grdt::free_vars(k.subject, s);
    if (k.alt) grdt::free_vars(*k.alt, s);
  }
  return s;
}

VarSet NormalForm::free_vars() const {
  VarSet s = matrix_vars();
  for (const auto& v : prefix.vars()) s.erase(v);
  return s;
}

Formula NormalForm::to_formula() const {
  std::vector<Formula> parts{Formula::eqs(c0)};
  for (const auto& g : guarded) parts.push_back(Formula::implies(g.hyp, Formula::eqs(g.concl)));
  for (const auto& k : known) {
    if (k.bare())
      parts.push_back(Formula::known(k.subject));
    else
      parts.push_back(Formula::disj(Formula::known(k.subject), Formula::eqs(*k.alt)));
  }
  Formula body = Formula::conj(std::move(parts));
  for (auto it = prefix.blocks().rbegin(); it != prefix.blocks().rend(); ++it) {
    body = it->quant == Quant::Forall ? Formula::forall(it->vars, body) : Formula::exists(it->vars, body);
  }
  return body;
}

NormalForm NormalForm::without_known() const {
  NormalForm out = *this;
  out.known.clear();
  return out;
}

std::string to_string(const NormalForm& nf) {
  std::vector<std::string> parts;
  if (!nf.c0.empty()) parts.push_back(to_string(nf.c0));
  for (const auto& g : nf.guarded) parts.push_back("(" + to_string(g.hyp) + " => " + to_string(g.concl) + ")");
  for (const auto& k : nf.known) {
    if (k.bare())
      parts.push_back("known(" + to_string(k.subject) + ")");
    else
      parts.push_back("(known(" + to_string(k.subject) + ") \\/ (" + to_string(*k.alt) + "))");
  }
  std::string body;
  for (std::size_t i = 0; i < parts.size(); ++i) body += (i ? ", " : "") + parts[i];
  if (body.empty()) body = "True";
  return to_string(nf.prefix) + body;
}

namespace {

void merge_into(NormalForm& acc, NormalForm part) {
  acc.prefix.append(part.prefix);
  acc.c0.insert(acc.c0.end(), part.c0.begin(), part.c0.end());
  for (auto& g : part.guarded) acc.guarded.push_back(std::move(g));
  for (auto& k : part.known) acc.known.push_back(std::move(k));
}

NormalForm norm(const Formula& f) {
  NormalForm out;
  switch (f.kind()) {
    case Formula::Kind::True:
      return out;
    case Formula::Kind::Eq:
      out.c0.push_back({f.lhs(), f.rhs()});
      return out;
    case Formula::Kind::Known:
      out.known.push_back({f.lhs(), std::nullopt, {}});
      return out;
    case Formula::Kind::And:
      for (const auto& p : f.parts()) merge_into(out, norm(p));
      return out;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      out.prefix.append(f.kind() == Formula::Kind::Forall ? Quant::Forall : Quant::Exists, f.vars());
      merge_into(out, norm(f.body()));
      return out;
    }
    case Formula::Kind::Implies: {
      NormalForm inner = norm(f.body());
      if (!inner.known.empty()) throw NotNormalizable("known-atom under an implication: " + to_string(f));
      out.prefix = inner.prefix;
      if (!inner.c0.empty()) out.guarded.push_back({f.hyp(), inner.c0});
      for (auto& g : inner.guarded) {
        out.guarded.push_back({conj(conj(f.hyp(), inner.c0), g.hyp), std::move(g.concl)});
      }
      return out;
    }
    case Formula::Kind::Or: {
      const Formula& left = f.parts()[0];
      if (left.kind() != Formula::Kind::Known) throw NotNormalizable("disjunction without a known-atom: " + to_string(f));
      NormalForm right = norm(f.parts()[1]);
      if (!right.guarded.empty() || !right.known.empty())
        throw NotNormalizable("disjunction alternative is not a conjunction of equations: " + to_string(f));
      KnownEntry entry{left.lhs(), right.c0, {}};
      for (const auto& b : right.prefix.blocks()) {
        if (b.quant != Quant::Exists) throw NotNormalizable("universal under a disjunction: " + to_string(f));
        entry.locals.insert(entry.locals.end(), b.vars.begin(), b.vars.end());
      }
      out.prefix = right.prefix;
      out.known.push_back(std::move(entry));
      return out;
    }
  }
  return out;
}

}  // namespace

NormalForm normalize(const Formula& f) {
  NormalForm nf = norm(f);
  // (F1 ∨ F2) ∧ (F1 ∨ F3) ↔ F1 ∨ (F2 ∧ F3); a bare atom absorbs the entry.
  std::vector<KnownEntry> merged;
  for (auto& k : nf.known) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const KnownEntry& m) { return m.subject == k.subject; });
    if (it == merged.end()) {
      merged.push_back(std::move(k));
      continue;
    }
    if (it->bare()) continue;
    if (k.bare()) {
      *it = std::move(k);
      continue;
    }
    it->alt->insert(it->alt->end(), k.alt->begin(), k.alt->end());
    it->locals.insert(it->locals.end(), k.locals.begin(), k.locals.end());
  }
  nf.known = std::move(merged);
  return nf;
}

}  // namespace grdt
