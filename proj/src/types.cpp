#include "grdt/types.hpp"

#include <algorithm>
#include <sstream>

namespace grdt {

namespace {

const std::vector<Type> kNoArgs;

std::shared_ptr<const TypeNode> make_node(Type::Kind k, std::string name, std::vector<Type> args) {
  return std::make_shared<const TypeNode>(TypeNode{k, std::move(name), std::move(args)});
}

}  // namespace

Type::Type() : node_(make_node(Kind::Con, std::string(kInt), {})) {}

Type Type::var(std::string name) { return Type(make_node(Kind::Var, std::move(name), {})); }

Type Type::con(std::string name, std::vector<Type> args) {
  return Type(make_node(Kind::Con, std::move(name), std::move(args)));
}

Type Type::arrow(Type dom, Type cod) { return con(std::string(kArrow), {std::move(dom), std::move(cod)}); }

Type Type::pair(Type left, Type right) { return con(std::string(kPair), {std::move(left), std::move(right)}); }

Type Type::hole() { return Type(make_node(Kind::Hole, "_", {})); }

Type::Kind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const std::vector<Type>& Type::args() const { return node_->args; }

bool Type::is_arrow() const { return is_con() && name() == kArrow && args().size() == 2; }
bool Type::is_pair() const { return is_con() && name() == kPair && args().size() == 2; }
bool Type::is_skolem() const { return is_con() && !name().empty() && name()[0] == '#'; }

bool Type::contains_var(std::string_view v) const {
  if (is_var()) return name() == v;
  return std::any_of(args().begin(), args().end(), [&](const Type& a) { return a.contains_var(v); });
}

bool Type::contains_hole() const {
  if (is_hole()) return true;
  return std::any_of(args().begin(), args().end(), [](const Type& a) { return a.contains_hole(); });
}

bool Type::ground() const {
  if (!is_con()) return false;
  return std::all_of(args().begin(), args().end(), [](const Type& a) { return a.ground(); });
}

std::size_t Type::depth() const {
  std::size_t d = 0;
  for (const auto& a : args()) d = std::max(d, a.depth() + 1);
  return d;
}

int Type::compare(const Type& other) const {
  if (node_ == other.node_) return 0;
  if (kind() != other.kind()) return kind() < other.kind() ? -1 : 1;
  if (int c = name().compare(other.name()); c != 0) return c < 0 ? -1 : 1;
  const auto& xs = args();
  const auto& ys = other.args();
  if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (int c = xs[i].compare(ys[i]); c != 0) return c;
  }
  return 0;
}

void free_vars(const Type& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) free_vars(a, out);
}

VarSet free_vars(const Type& t) {
  VarSet s;
  free_vars(t, s);
  return s;
}

void ordered_vars(const Type& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) ordered_vars(a, out);
}

void subterms(const Type& t, std::set<Type>& out) {
  out.insert(t);
  for (const auto& a : t.args()) subterms(a, out);
}

int Equation::compare(const Equation& o) const {
  if (int c = lhs.compare(o.lhs); c != 0) return c;
  return rhs.compare(o.rhs);
}

void free_vars(const Constraint& c, VarSet& out) {
  for (const auto& e : c) {
    free_vars(e.lhs, out);
    free_vars(e.rhs, out);
  }
}

VarSet free_vars(const Constraint& c) {
  VarSet s;
  free_vars(c, s);
  return s;
}

Constraint conj(Constraint a, const Constraint& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool same_equations(const Constraint& a, const Constraint& b) {
  std::set<Equation> sa, sb;
  for (const auto& e : a) sa.insert(canonical(e));
  for (const auto& e : b) sb.insert(canonical(e));
  return sa == sb;
}

Equation canonical(Equation e) {
  if (e.lhs.is_var() && e.rhs.is_var()) {
    if (e.rhs.name() < e.lhs.name()) std::swap(e.lhs, e.rhs);
  } else if (!e.lhs.is_var() && e.rhs.is_var()) {
    std::swap(e.lhs, e.rhs);
  }
  return e;
}

const Type* Substitution::lookup(const std::string& v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& v, const Type& t) {
  Substitution single;
  single.map_.emplace(v, t);
  for (auto& [k, img] : map_) img = single.apply(img);
  map_[v] = t;
}

Type Substitution::apply(const Type& t) const {
  if (map_.empty()) return t;
  if (t.is_var()) {
    const Type* img = lookup(t.name());
    return img ? *img : t;
  }
  if (t.args().empty()) return t;
  std::vector<Type> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || args.back() != a;
  }
  if (!changed) return t;
  return t.is_con() ? Type::con(t.name(), std::move(args)) : t;
}

Equation Substitution::apply(const Equation& e) const { return {apply(e.lhs), apply(e.rhs)}; }

Constraint Substitution::apply(const Constraint& c) const {
  Constraint out;
  out.reserve(c.size());
  for (const auto& e : c) out.push_back(apply(e));
  return out;
}

Substitution Substitution::compose_after(const Substitution& inner) const {
  Substitution out;
  for (const auto& [v, img] : inner.map_) out.map_[v] = apply(img);
  for (const auto& [v, img] : map_) {
    if (!out.map_.count(v)) out.map_[v] = img;
  }
  // drop trivial bindings v ↦ v
  for (auto it = out.map_.begin(); it != out.map_.end();) {
    if (it->second.is_var() && it->second.name() == it->first)
      it = out.map_.erase(it);
    else
      ++it;
  }
  return out;
}

Substitution Substitution::restrict_to(const VarSet& vars) const {
  Substitution out;
  for (const auto& [v, img] : map_) {
    if (vars.count(v)) out.map_[v] = img;
  }
  return out;
}

bool Substitution::is_idempotent() const {
  for (const auto& [v, img] : map_) {
    if (apply(img) != img) return false;
  }
  return true;
}

Constraint to_equations(const Substitution& s) {
  Constraint c;
  for (const auto& [v, img] : s.bindings()) c.push_back({Type::var(v), img});
  return c;
}

std::string FreshSupply::name(std::string_view hint) {
  std::string h = base_name(hint);
  if (h.empty()) h = "t";
  return h + "%" + std::to_string(next_++);
}

std::string base_name(std::string_view v) {
  auto pos = v.find('%');
  return std::string(pos == std::string_view::npos ? v : v.substr(0, pos));
}

Type rename(const Type& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : Type::var(it->second);
  }
  if (t.args().empty()) return t;
  std::vector<Type> args;
  for (const auto& a : t.args()) args.push_back(rename(a, m));
  return Type::con(t.name(), std::move(args));
}

Constraint rename(const Constraint& c, const std::map<std::string, std::string>& m) {
  Constraint out;
  for (const auto& e : c) out.push_back({rename(e.lhs, m), rename(e.rhs, m)});
  return out;
}

namespace {

// precedence: 0 = top, 1 = left of arrow, 2 = constructor argument
void print(std::ostream& os, const Type& t, int prec) {
  switch (t.kind()) {
    case Type::Kind::Var:
      os << t.name();
      return;
    case Type::Kind::Hole:
      os << '_';
      return;
    case Type::Kind::Con:
      break;
  }
  if (t.is_arrow()) {
    if (prec > 0) os << '(';
    print(os, t.args()[0], 1);
    os << " -> ";
    print(os, t.args()[1], 0);
    if (prec > 0) os << ')';
    return;
  }
  if (t.is_pair()) {
    os << '(';
    print(os, t.args()[0], 0);
    os << ", ";
    print(os, t.args()[1], 0);
    os << ')';
    return;
  }
  if (t.args().empty()) {
    os << t.name();
    return;
  }
  if (prec > 1) os << '(';
  os << t.name();
  for (const auto& a : t.args()) {
    os << ' ';
    print(os, a, 2);
  }
  if (prec > 1) os << ')';
}

}  // namespace

std::string to_string(const Type& t) {
  std::ostringstream os;
  print(os, t, 0);
  return os.str();
}

std::string to_string(const Equation& e) { return to_string(e.lhs) + "=" + to_string(e.rhs); }

std::string to_string(const Constraint& c) {
  if (c.empty()) return "True";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c[i]);
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& [v, img] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " := " + to_string(img);
  }
  return out + "]";
}

std::ostream& operator<<(std::ostream& os, const Type& t) { return os << to_string(t); }
std::ostream& operator<<(std::ostream& os, const Equation& e) { return os << to_string(e); }

Instance instantiate(const Scheme& s, FreshSupply& fresh) {
  Instance inst;
  for (const auto& b : s.bound) inst.renaming[b] = fresh.name(b);
  inst.context = rename(s.context, inst.renaming);
  inst.type = rename(s.body, inst.renaming);
  return inst;
}

Scheme generalize_all(const Type& t) {
  Scheme s;
  ordered_vars(t, s.bound);
  s.body = t;
  return s;
}

namespace {

std::string letter_name(std::size_t i) {
  std::string n(1, static_cast<char>('a' + i % 26));
  if (i >= 26) n += std::to_string(i / 26);
  return n;
}

}  // namespace

std::string scheme_string(const Type& t) {
  std::vector<std::string> vars;
  ordered_vars(t, vars);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = letter_name(i);
  std::string out;
  if (!vars.empty()) {
    out = "forall";
    for (const auto& v : vars) out += " " + m[v];
    out += ". ";
  }
  return out + to_string(rename(t, m));
}

std::string scheme_string(const Scheme& s) {
  if (s.context.empty()) return scheme_string(s.body);
  std::vector<std::string> vars;
  ordered_vars(s.body, vars);
  for (const auto& e : s.context) {
    ordered_vars(e.lhs, vars);
    ordered_vars(e.rhs, vars);
  }
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = letter_name(i);
  std::string out = "forall";
  for (const auto& v : vars) out += " " + m[v];
  return out + ". (" + to_string(rename(s.context, m)) + ") => " + to_string(rename(s.body, m));
}

bool alpha_equivalent(const Type& a, const Type& b) {
  std::vector<std::string> va, vb;
  ordered_vars(a, va);
  ordered_vars(b, vb);
  if (va.size() != vb.size()) return false;
  std::map<std::string, std::string> ma, mb;
  for (std::size_t i = 0; i < va.size(); ++i) {
    ma[va[i]] = "#" + std::to_string(i);
    mb[vb[i]] = "#" + std::to_string(i);
  }
  return rename(a, ma) == rename(b, mb);
}

}  // namespace grdt
