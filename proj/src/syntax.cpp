#include <algorithm>

#include "grdt/syntax.hpp"

namespace grdt {

Pattern Pattern::var(std::string n, Loc l) { return {Kind::Var, std::move(n), {}, l}; }

Pattern Pattern::pair(Pattern a, Pattern b, Loc l) { return {Kind::Pair, "", {std::move(a), std::move(b)}, l}; }

Pattern Pattern::con(std::string k, std::vector<Pattern> args, Loc l) {
  return {Kind::Con, std::move(k), std::move(args), l};
}

void pattern_vars(const Pattern& p, std::vector<std::string>& out) {
  if (p.kind == Pattern::Kind::Var) {
    if (p.name != kWildcard) out.push_back(p.name);
    return;
  }
  for (const auto& a : p.args) pattern_vars(a, out);
}

std::optional<Pattern> con_argument(const Pattern& p) {
  if (p.args.empty()) return std::nullopt;
  Pattern out = p.args.back();
  for (std::size_t i = p.args.size() - 1; i-- > 0;) out = Pattern::pair(p.args[i], out, p.args[i].loc);
  return out;
}

Annotation Annotation::closed(Scheme s) {
  Annotation a;
  a.kind = Kind::Closed;
  a.scheme = std::move(s);
  return a;
}

Annotation Annotation::partial(Type shape) {
  Annotation a;
  a.kind = Kind::Partial;
  a.shape = std::move(shape);
  return a;
}

namespace ex {

namespace {
std::shared_ptr<Expr> node(Expr::Kind k, Loc l) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->loc = l;
  return e;
}
}  // namespace

ExprPtr var(std::string n, Loc l) {
  auto e = node(Expr::Kind::Var, l);
  e->name = std::move(n);
  return e;
}

ExprPtr con(std::string n, Loc l) {
  auto e = node(Expr::Kind::Con, l);
  e->name = std::move(n);
  return e;
}

ExprPtr app(ExprPtr f, ExprPtr a, Loc l) {
  auto e = node(Expr::Kind::App, l);
  e->kids = {std::move(f), std::move(a)};
  return e;
}

ExprPtr lam(std::string x, ExprPtr body, Loc l) {
  auto e = node(Expr::Kind::Lam, l);
  e->name = std::move(x);
  e->kids = {std::move(body)};
  return e;
}

ExprPtr case_of(ExprPtr scrut, std::vector<Clause> clauses, Loc l) {
  auto e = node(Expr::Kind::Case, l);
  e->kids = {std::move(scrut)};
  e->clauses = std::move(clauses);
  return e;
}

ExprPtr rec(std::string f, ExprPtr body, std::optional<Annotation> annot, Loc l) {
  auto e = node(Expr::Kind::Rec, l);
  e->name = std::move(f);
  e->kids = {std::move(body)};
  e->annot = std::move(annot);
  return e;
}

ExprPtr annot(ExprPtr inner, Scheme s, Loc l) {
  auto e = node(Expr::Kind::Annot, l);
  e->kids = {std::move(inner)};
  e->annot = Annotation::closed(std::move(s));
  return e;
}

ExprPtr pair(ExprPtr a, ExprPtr b, Loc l) {
  auto e = node(Expr::Kind::Pair, l);
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr int_lit(long long v, Loc l) {
  auto e = node(Expr::Kind::Int, l);
  e->int_value = v;
  return e;
}

ExprPtr bool_lit(bool v, Loc l) {
  auto e = node(Expr::Kind::Bool, l);
  e->bool_value = v;
  return e;
}

}  // namespace ex

std::optional<Type> ConstructorSig::arg() const {
  if (fields.empty()) return std::nullopt;
  Type out = fields.back();
  for (std::size_t i = fields.size() - 1; i-- > 0;) out = Type::pair(fields[i], out);
  return out;
}

const FunctionDef* Program::find(const std::string& name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

void collect_free(const Expr& e, std::multiset<std::string>& bound, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      if (!bound.count(e.name)) out.insert(e.name);
      return;
    case Expr::Kind::Lam:
    case Expr::Kind::Rec: {
      auto it = bound.insert(e.name);
      collect_free(*e.kids[0], bound, out);
      bound.erase(it);
      return;
    }
    case Expr::Kind::Case: {
      collect_free(*e.kids[0], bound, out);
      for (const auto& c : e.clauses) {
        std::vector<std::string> vs;
        pattern_vars(c.pat, vs);
        std::vector<std::multiset<std::string>::iterator> its;
        for (const auto& v : vs) its.push_back(bound.insert(v));
        collect_free(*c.body, bound, out);
        for (auto it : its) bound.erase(it);
      }
      return;
    }
    default:
      for (const auto& k : e.kids) collect_free(*k, bound, out);
  }
}

void all_identifiers(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var || e.kind == Expr::Kind::Lam || e.kind == Expr::Kind::Rec) out.insert(e.name);
  for (const auto& k : e.kids) all_identifiers(*k, out);
  for (const auto& c : e.clauses) {
    std::vector<std::string> vs;
    pattern_vars(c.pat, vs);
    out.insert(vs.begin(), vs.end());
    all_identifiers(*c.body, out);
  }
}

}  // namespace

std::set<std::string> free_identifiers(const Expr& e) {
  std::set<std::string> out;
  std::multiset<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

bool mentions(const Expr& e, const std::string& name) { return free_identifiers(e).count(name) != 0; }

Program desugar(const Program& p) {
  Program out = p;
  for (auto& f : out.functions) {
    const std::size_t n = f.params.front().size();
    for (const auto& row : f.params) {
      if (row.size() != n)
        throw ClauseArityMismatch("clauses of '" + f.name + "' take " + std::to_string(n) + " and " +
                                  std::to_string(row.size()) + " arguments");
    }
    ExprPtr body;
    if (f.params.size() == 1 && n == 0) {
      body = f.bodies.front();
      if (body->kind == Expr::Kind::Rec && body->name == f.name) continue;
    } else if (f.params.size() == 1 && std::all_of(f.params[0].begin(), f.params[0].end(), [](const Pattern& q) {
                 return q.kind == Pattern::Kind::Var;
               })) {
      body = f.bodies.front();
      for (std::size_t i = n; i-- > 0;) body = ex::lam(f.params[0][i].name, body, f.params[0][i].loc);
    } else if (n == 0) {
      throw ClauseArityMismatch("'" + f.name + "' is defined more than once without arguments");
    } else {
      std::set<std::string> used{f.name};
      for (const auto& b : f.bodies) all_identifiers(*b, used);
      for (const auto& row : f.params) {
        std::vector<std::string> vs;
        for (const auto& q : row) pattern_vars(q, vs);
        used.insert(vs.begin(), vs.end());
      }
      std::vector<std::string> args;
      for (std::size_t k = 1; args.size() < n; ++k) {
        std::string x = "x" + std::to_string(k);
        if (!used.count(x)) args.push_back(x);
      }
      Loc at = f.loc;
      ExprPtr scrut = ex::var(args.back(), at);
      for (std::size_t i = n - 1; i-- > 0;) scrut = ex::pair(ex::var(args[i], at), scrut, at);
      std::vector<Clause> clauses;
      for (std::size_t r = 0; r < f.params.size(); ++r) {
        const auto& row = f.params[r];
        Pattern pat = row.back();
        for (std::size_t i = n - 1; i-- > 0;) pat = Pattern::pair(row[i], pat, row[i].loc);
        clauses.push_back({pat, f.bodies[r]});
      }
      body = ex::case_of(scrut, std::move(clauses), at);
      for (std::size_t i = n; i-- > 0;) body = ex::lam(args[i], body, at);
    }
    f.params = {{}};
    f.bodies = {ex::rec(f.name, body, f.annot, f.loc)};
  }
  return out;
}

const ConInfo* Environment::constructor(const std::string& k) const {
  auto it = constructors.find(k);
  return it == constructors.end() ? nullptr : &it->second;
}

Environment constructor_env(const Program& p) {
  Environment env;
  Type i = Type::int_type(), b = Type::bool_type();
  env.primitives["+"] = {{}, {}, Type::arrow(i, Type::arrow(i, i))};
  env.primitives["&&"] = {{}, {}, Type::arrow(b, Type::arrow(b, b))};
  env.primitives[">"] = {{}, {}, Type::arrow(i, Type::arrow(i, b))};
  for (const auto& [name, s] : p.primitives) env.primitives[name] = s;
  for (const auto& d : p.gadts) {
    env.gadts[d.name] = d;
    for (const auto& k : d.constructors) {
      ConInfo info;
      info.sig = k;
      info.gadt = d.name;
      info.scheme.bound = k.universals;
      info.scheme.bound.insert(info.scheme.bound.end(), k.existentials.begin(), k.existentials.end());
      info.scheme.context = k.guard;
      Type body = k.result;
      for (std::size_t j = k.fields.size(); j-- > 0;) body = Type::arrow(k.fields[j], body);
      info.scheme.body = body;
      if (!env.constructors.emplace(k.name, info).second)
        throw DuplicateConstructor("constructor '" + k.name + "' is declared twice");
    }
  }
  return env;
}

// ---- pretty printing ----

namespace {

std::string atype(const Type& t) {
  if (t.is_arrow() || (t.is_con() && !t.is_pair() && !t.args().empty())) return "(" + to_string(t) + ")";
  return to_string(t);
}

std::string equations(const Constraint& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c[i].lhs) + "=" + to_string(c[i].rhs);
  }
  return out + ")";
}

std::string scheme_text(const Scheme& s) {
  std::string out;
  VarSet mentioned = free_vars(s.body);
  free_vars(s.context, mentioned);
  std::vector<std::string> extra;
  for (const auto& v : s.bound) {
    if (!mentioned.count(v)) extra.push_back(v);
  }
  if (!extra.empty()) {
    out = "forall";
    for (const auto& v : s.bound) out += " " + v;
    out += ". ";
  }
  if (!s.context.empty()) out += equations(s.context) + " => ";
  return out + to_string(s.body);
}

std::string annotation_text(const Annotation& a) {
  return a.kind == Annotation::Kind::Closed ? scheme_text(a.scheme) : to_string(a.shape);
}

std::string apat(const Pattern& p) {
  if (p.kind == Pattern::Kind::Con && !p.args.empty()) return "(" + pretty(p) + ")";
  return pretty(p);
}

bool is_operator(const std::string& n) { return n == "+" || n == "&&" || n == ">"; }

enum class Ctx { Top, Fun, Arg };

std::string print(const Expr& e, Ctx ctx) {
  auto wrap = [&](const std::string& s, bool need) { return need ? "(" + s + ")" : s; };
  switch (e.kind) {
    case Expr::Kind::Var:
      return is_operator(e.name) ? "(" + e.name + ")" : e.name;
    case Expr::Kind::Con:
      return e.name;
    case Expr::Kind::Int:
      return std::to_string(e.int_value);
    case Expr::Kind::Bool:
      return e.bool_value ? "True" : "False";
    case Expr::Kind::Pair:
      return "(" + print(*e.kids[0], Ctx::Top) + ", " + print(*e.kids[1], Ctx::Top) + ")";
    case Expr::Kind::Annot:
      return "(" + print(*e.kids[0], Ctx::Top) + " :: " + scheme_text(e.annot->scheme) + ")";
    case Expr::Kind::Lam:
      return wrap("\\" + e.name + " -> " + print(*e.kids[0], Ctx::Top), ctx != Ctx::Top);
    case Expr::Kind::Rec:
      return wrap("rec " + e.name + " in " + print(*e.kids[0], Ctx::Top), ctx != Ctx::Top);
    case Expr::Kind::Case: {
      std::string s = "case " + print(*e.kids[0], Ctx::Top) + " of { ";
      for (std::size_t i = 0; i < e.clauses.size(); ++i) {
        if (i) s += "; ";
        s += pretty(e.clauses[i].pat) + " -> " + print(*e.clauses[i].body, Ctx::Top);
      }
      return wrap(s + " }", ctx != Ctx::Top);
    }
    case Expr::Kind::App: {
      const Expr& f = *e.kids[0];
      if (f.kind == Expr::Kind::App && f.kids[0]->kind == Expr::Kind::Var && is_operator(f.kids[0]->name)) {
        std::string s = print(*f.kids[1], Ctx::Arg) + " " + f.kids[0]->name + " " + print(*e.kids[1], Ctx::Arg);
        return wrap(s, ctx != Ctx::Top);
      }
      return wrap(print(f, Ctx::Fun) + " " + print(*e.kids[1], Ctx::Arg), ctx == Ctx::Arg);
    }
  }
  return "?";
}

}  // namespace

std::string pretty(const Type& t) { return to_string(t); }

std::string pretty(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Var:
      return p.name;
    case Pattern::Kind::Pair:
      return "(" + pretty(p.args[0]) + ", " + pretty(p.args[1]) + ")";
    case Pattern::Kind::Con: {
      std::string s = p.name;
      for (const auto& a : p.args) s += " " + apat(a);
      return s;
    }
  }
  return "?";
}

std::string pretty(const Expr& e) { return print(e, Ctx::Top); }

std::string pretty(const Program& p) {
  std::string out;
  for (const auto& d : p.gadts) {
    out += "data " + d.name;
    for (const auto& v : d.params) out += " " + v;
    out += " =";
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      const auto& k = d.constructors[i];
      out += i ? "\n  | " : " ";
      if (!k.existentials.empty()) {
        out += "forall";
        for (const auto& b : k.existentials) out += " " + b;
        out += ". ";
      }
      if (!k.guard.empty()) out += equations(k.guard) + " => ";
      out += k.name;
      for (const auto& f : k.fields) out += " " + atype(f);
    }
    out += "\n";
  }
  for (const auto& [name, s] : p.primitives) {
    out += "primitive " + (is_operator(name) ? "(" + name + ")" : name) + " :: " + scheme_text(s) + "\n";
  }
  for (const auto& f : p.functions) {
    if (f.annot) out += f.name + " :: " + annotation_text(*f.annot) + "\n";
    for (std::size_t r = 0; r < f.params.size(); ++r) {
      out += f.name;
      for (const auto& q : f.params[r]) out += " " + apat(q);
      out += " = " + pretty(*f.bodies[r]) + "\n";
    }
  }
  return out;
}

}  // namespace grdt
