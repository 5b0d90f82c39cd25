#include <algorithm>
#include <cctype>
#include <set>

#include "grdt/syntax.hpp"

namespace grdt {

std::string to_string(const Loc& l) { return std::to_string(l.line) + ":" + std::to_string(l.col); }

ParseError::ParseError(const std::string& msg, Loc l)
    : std::runtime_error(to_string(l) + ": " + msg), loc(l) {}

ArityError::ArityError(const std::string& msg, Loc l)
    : std::runtime_error(to_string(l) + ": " + msg), loc(l) {}

namespace {

enum class Tk : std::uint8_t { Ident, ConId, Int, Sym, End };

struct Token {
  Tk kind = Tk::End;
  std::string text;
  Loc loc;
  bool first_on_line = false;
};

const char* const kSymbols[] = {"->", "=>", "::", "&&", "=", "|", "\\", "(", ")", ",",
                                ";",  "{",  "}",  "_",  "+", ">", "."};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  bool first = true;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        first = true;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    if (src.compare(i, 2, "--") == 0) {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    t.first_on_line = first;
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tk::ConId : Tk::Ident;
      t.text = src.substr(start, j - start);
      bump(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tk::Int;
      t.text = src.substr(start, j - start);
      bump(j - i);
    } else {
      bool found = false;
      for (const char* s : kSymbols) {
        std::size_t n = std::char_traits<char>::length(s);
        if (src.compare(i, n, s) == 0) {
          t.kind = Tk::Sym;
          t.text = s;
          bump(n);
          found = true;
          break;
        }
      }
      if (!found) throw ParseError(std::string("unexpected character '") + c + "'", t.loc);
    }
    first = false;
    out.push_back(std::move(t));
  }
  Token end;
  end.loc = {line, col};
  end.first_on_line = true;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"data", "forall", "case", "of", "primitive", "rec", "in"};

int op_prec(const std::string& op) {
  if (op == "&&") return 3;
  if (op == ">") return 4;
  if (op == "+") return 6;
  return -1;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    std::vector<std::pair<std::string, std::pair<Annotation, Loc>>> sigs;
    while (raw().kind != Tk::End) {
      if (raw().kind == Tk::Sym && raw().text == ";") {
        ++pos_;
        continue;
      }
      const Token& head = raw();
      ctx_.assign({head.loc.col});
      decl_start_ = pos_;
      if (is_kw("data")) {
        p.gadts.push_back(data_decl());
      } else if (is_kw("primitive")) {
        advance();
        std::string name = binder_name();
        expect("::");
        auto ann = sig_type();
        if (ann.kind == Annotation::Kind::Partial) throw ParseError("primitive types must be complete", head.loc);
        p.primitives.emplace_back(name, ann.scheme);
      } else if (head.kind == Tk::Ident && !kKeywords.count(head.text) && peek_raw(1).text == "::") {
        std::string name = advance().text;
        advance();
        sigs.push_back({name, {sig_type(), head.loc}});
      } else if (head.kind == Tk::Ident && !kKeywords.count(head.text)) {
        clause(p);
      } else {
        throw ParseError("expected a declaration, found '" + describe(head) + "'", head.loc);
      }
      if (cur().kind != Tk::End) throw ParseError("unexpected '" + describe(cur()) + "'", cur().loc);
    }
    for (auto& [name, ann] : sigs) {
      auto it = std::find_if(p.functions.begin(), p.functions.end(), [&](const FunctionDef& f) { return f.name == name; });
      if (it == p.functions.end()) throw ParseError("signature for '" + name + "' lacks a definition", ann.second);
      if (it->annot) throw ParseError("duplicate signature for '" + name + "'", ann.second);
      it->annot = ann.first;
      it->annot_loc = ann.second;
    }
    return p;
  }

  Constraint equations() {
    ctx_.assign({0});
    decl_start_ = pos_;
    Constraint c;
    if (cur().kind == Tk::End) return c;
    c.push_back(equation());
    while (accept(",")) c.push_back(equation());
    if (cur().kind != Tk::End) throw ParseError("unexpected '" + describe(cur()) + "'", cur().loc);
    return c;
  }

 private:
  // ---- token access with layout ----
  const Token& raw() const { return toks_[pos_]; }
  const Token& peek_raw(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

  bool stopped() const {
    const Token& t = raw();
    return t.kind != Tk::End && pos_ != decl_start_ && t.first_on_line && t.loc.col <= ctx_.back();
  }

  const Token& cur() const {
    if (stopped()) {
      end_.loc = raw().loc;
      return end_;
    }
    return raw();
  }

  const Token& advance() {
    if (cur().kind == Tk::End) throw ParseError("unexpected end of declaration", cur().loc);
    return toks_[pos_++];
  }

  bool is_sym(const char* s) const { return cur().kind == Tk::Sym && cur().text == s; }
  bool is_kw(const char* s) const { return cur().kind == Tk::Ident && cur().text == s; }

  bool accept(const char* s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }

  static std::string describe(const Token& t) { return t.kind == Tk::End ? "end of declaration" : t.text; }

  void expect(const char* s) {
    if (!accept(s)) throw ParseError(std::string("expected '") + s + "', found '" + describe(cur()) + "'", cur().loc);
  }

  void expect_kw(const char* s) {
    if (!is_kw(s)) throw ParseError(std::string("expected '") + s + "', found '" + describe(cur()) + "'", cur().loc);
    ++pos_;
  }

  std::string ident() {
    if (cur().kind != Tk::Ident || kKeywords.count(cur().text))
      throw ParseError("expected an identifier, found '" + describe(cur()) + "'", cur().loc);
    return advance().text;
  }

  std::string con_id() {
    if (cur().kind != Tk::ConId) throw ParseError("expected a constructor, found '" + describe(cur()) + "'", cur().loc);
    return advance().text;
  }

  // name or (op)
  std::string binder_name() {
    if (accept("(")) {
      if (cur().kind != Tk::Sym || op_prec(cur().text) < 0) throw ParseError("expected an operator", cur().loc);
      std::string op = advance().text;
      expect(")");
      return op;
    }
    return ident();
  }

  // ---- types ----
  Type type() {
    Type dom = btype();
    if (accept("->")) return Type::arrow(dom, type());
    return dom;
  }

  bool starts_atype() const {
    const Token& t = cur();
    if (t.kind == Tk::ConId) return true;
    if (t.kind == Tk::Ident) return !kKeywords.count(t.text);
    return t.kind == Tk::Sym && (t.text == "(" || t.text == "_");
  }

  Type btype() {
    if (cur().kind == Tk::ConId) {
      std::string name = advance().text;
      std::vector<Type> args;
      while (starts_atype()) args.push_back(atype());
      return Type::con(name, std::move(args));
    }
    return atype();
  }

  Type atype() {
    const Token& t = cur();
    if (t.kind == Tk::ConId) return Type::con(advance().text);
    if (t.kind == Tk::Ident && !kKeywords.count(t.text)) return Type::var(advance().text);
    if (accept("_")) return Type::hole();
    if (accept("(")) {
      std::vector<Type> parts{type()};
      while (accept(",")) parts.push_back(type());
      expect(")");
      return nest_pairs(parts);
    }
    throw ParseError("expected a type, found '" + describe(t) + "'", t.loc);
  }

  static Type nest_pairs(const std::vector<Type>& parts) {
    Type out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) out = Type::pair(parts[i], out);
    return out;
  }

  Equation equation() {
    Type l = type();
    expect("=");
    return {l, type()};
  }

  Constraint context() {
    Constraint c;
    if (accept("(")) {
      if (accept(")")) return c;
      c.push_back(equation());
      while (accept(",")) c.push_back(equation());
      expect(")");
    } else {
      c.push_back(equation());
    }
    return c;
  }

  // context followed by =>, or nothing
  std::optional<Constraint> try_context() {
    std::size_t save = pos_;
    try {
      Constraint c = context();
      if (accept("=>")) return c;
    } catch (const ParseError&) {
    }
    pos_ = save;
    return std::nullopt;
  }

  std::vector<std::string> forall_vars() {
    std::vector<std::string> vs;
    if (!is_kw("forall")) return vs;
    ++pos_;
    while (cur().kind == Tk::Ident && !kKeywords.count(cur().text)) vs.push_back(advance().text);
    expect(".");
    return vs;
  }

  Annotation sig_type() {
    Loc at = cur().loc;
    auto declared = forall_vars();
    Constraint ctx = try_context().value_or(Constraint{});
    Type body = type();
    if (body.contains_hole()) {
      if (!ctx.empty() || !declared.empty())
        throw ParseError("partial annotations take no context or quantifier", at);
      return Annotation::partial(body);
    }
    Scheme s;
    ordered_vars(body, s.bound);
    for (const auto& e : ctx) {
      ordered_vars(e.lhs, s.bound);
      ordered_vars(e.rhs, s.bound);
    }
    for (const auto& v : declared) {
      if (std::find(s.bound.begin(), s.bound.end(), v) == s.bound.end()) s.bound.push_back(v);
    }
    s.context = ctx;
    s.body = body;
    return Annotation::closed(s);
  }

  // ---- declarations ----
  GadtDecl data_decl() {
    GadtDecl d;
    d.loc = cur().loc;
    expect_kw("data");
    d.name = con_id();
    while (cur().kind == Tk::Ident && !kKeywords.count(cur().text)) {
      std::string v = advance().text;
      if (std::find(d.params.begin(), d.params.end(), v) != d.params.end())
        throw ParseError("duplicate type parameter '" + v + "'", d.loc);
      d.params.push_back(v);
    }
    std::vector<Type> param_types;
    for (const auto& v : d.params) param_types.push_back(Type::var(v));
    expect("=");
    do {
      ConstructorSig k;
      k.loc = cur().loc;
      k.universals = d.params;
      k.existentials = forall_vars();
      for (const auto& b : k.existentials) {
        if (std::find(d.params.begin(), d.params.end(), b) != d.params.end())
          throw ParseError("existential '" + b + "' shadows a type parameter", k.loc);
      }
      k.guard = try_context().value_or(Constraint{});
      k.name = con_id();
      while (starts_atype()) k.fields.push_back(atype());
      k.result = Type::con(d.name, param_types);
      VarSet allowed(d.params.begin(), d.params.end());
      allowed.insert(k.existentials.begin(), k.existentials.end());
      VarSet used = free_vars(k.guard);
      for (const auto& f : k.fields) {
        if (f.contains_hole()) throw ParseError("holes are not allowed in constructor fields", k.loc);
        free_vars(f, used);
      }
      for (const auto& v : used) {
        if (!allowed.count(v)) throw ParseError("type variable '" + v + "' is not bound in '" + k.name + "'", k.loc);
      }
      d.constructors.push_back(std::move(k));
    } while (accept("|"));
    return d;
  }

  void clause(Program& p) {
    Loc at = cur().loc;
    std::string name = ident();
    std::vector<Pattern> pats;
    while (!is_sym("=")) pats.push_back(apat());
    expect("=");
    ExprPtr body = expr();
    auto it = std::find_if(p.functions.begin(), p.functions.end(), [&](const FunctionDef& f) { return f.name == name; });
    if (it == p.functions.end()) {
      FunctionDef f;
      f.name = name;
      f.loc = at;
      p.functions.push_back(f);
      it = std::prev(p.functions.end());
    } else if (&*it != &p.functions.back()) {
      throw ParseError("clauses of '" + name + "' are not contiguous", at);
    }
    it->params.push_back(std::move(pats));
    it->bodies.push_back(std::move(body));
  }

  // ---- patterns ----
  bool starts_apat() const {
    const Token& t = cur();
    if (t.kind == Tk::ConId) return true;
    if (t.kind == Tk::Ident) return !kKeywords.count(t.text);
    return t.kind == Tk::Sym && (t.text == "(" || t.text == "_");
  }

  Pattern pat() {
    if (cur().kind == Tk::ConId) {
      Loc at = cur().loc;
      std::string k = advance().text;
      std::vector<Pattern> args;
      while (starts_apat()) args.push_back(apat());
      return Pattern::con(k, std::move(args), at);
    }
    return apat();
  }

  Pattern apat() {
    Loc at = cur().loc;
    if (cur().kind == Tk::ConId) return Pattern::con(advance().text, {}, at);
    if (accept("_")) return Pattern::var(std::string(kWildcard), at);
    if (accept("(")) {
      std::vector<Pattern> parts{pat()};
      while (accept(",")) parts.push_back(pat());
      expect(")");
      Pattern out = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) out = Pattern::pair(parts[i], out, at);
      return out;
    }
    return Pattern::var(ident(), at);
  }

  // ---- expressions ----
  ExprPtr expr() {
    Loc at = cur().loc;
    if (accept("\\")) {
      std::vector<std::string> xs{ident()};
      while (!is_sym("->")) xs.push_back(ident());
      expect("->");
      ExprPtr body = expr();
      for (std::size_t i = xs.size(); i-- > 0;) body = ex::lam(xs[i], body, at);
      return body;
    }
    if (is_kw("case")) {
      ++pos_;
      ExprPtr scrut = expr();
      expect_kw("of");
      return ex::case_of(scrut, alternatives(), at);
    }
    if (is_kw("rec")) {
      ++pos_;
      std::string f = ident();
      expect_kw("in");
      return ex::rec(f, expr(), std::nullopt, at);
    }
    return op_expr(0);
  }

  std::vector<Clause> alternatives() {
    std::vector<Clause> alts;
    if (accept("{")) {
      ctx_.push_back(0);
      do {
        if (is_sym("}")) break;
        alts.push_back(alternative());
      } while (accept(";"));
      ctx_.pop_back();
      expect("}");
    } else {
      if (cur().kind == Tk::End) throw ParseError("expected case alternatives", cur().loc);
      int col = cur().loc.col;
      ctx_.push_back(col);
      alts.push_back(alternative());
      while (true) {
        if (accept(";")) {
          alts.push_back(alternative());
          continue;
        }
        ctx_.pop_back();
        bool more = cur().kind != Tk::End && raw().first_on_line && raw().loc.col == col;
        ctx_.push_back(col);
        if (!more) break;
        alts.push_back(alternative());
      }
      ctx_.pop_back();
    }
    if (alts.empty()) throw ParseError("case needs at least one alternative", cur().loc);
    return alts;
  }

  // The first token of an alternative may sit on the layout column.
  Clause alternative() {
    int col = ctx_.back();
    ctx_.back() = col - 1;
    Pattern p = pat();
    ctx_.back() = col;
    expect("->");
    return {p, expr()};
  }

  ExprPtr op_expr(int min_prec) {
    ExprPtr lhs = app_expr();
    while (cur().kind == Tk::Sym && op_prec(cur().text) >= min_prec) {
      Loc at = cur().loc;
      std::string op = advance().text;
      int prec = op_prec(op);
      ExprPtr rhs = op_expr(op == "&&" ? prec : prec + 1);
      lhs = ex::app(ex::app(ex::var(op, at), lhs, at), rhs, at);
      if (op == ">" && cur().kind == Tk::Sym && cur().text == ">")
        throw ParseError("'>' is non-associative", cur().loc);
    }
    return lhs;
  }

  bool starts_aexp() const {
    const Token& t = cur();
    if (t.kind == Tk::ConId || t.kind == Tk::Int) return true;
    if (t.kind == Tk::Ident) return !kKeywords.count(t.text);
    return t.kind == Tk::Sym && t.text == "(";
  }

  ExprPtr app_expr() {
    Loc at = cur().loc;
    ExprPtr f = aexp();
    while (starts_aexp()) f = ex::app(f, aexp(), at);
    return f;
  }

  ExprPtr aexp() {
    const Token& t = cur();
    Loc at = t.loc;
    if (t.kind == Tk::Int) return ex::int_lit(std::stoll(advance().text), at);
    if (t.kind == Tk::ConId) {
      std::string k = advance().text;
      if (k == "True" || k == "False") return ex::bool_lit(k == "True", at);
      return ex::con(k, at);
    }
    if (t.kind == Tk::Ident && !kKeywords.count(t.text)) return ex::var(advance().text, at);
    if (accept("(")) {
      ctx_.push_back(0);
      if (cur().kind == Tk::Sym && op_prec(cur().text) >= 0 && peek_raw(1).text == ")") {
        std::string op = advance().text;
        advance();
        ctx_.pop_back();
        return ex::var(op, at);
      }
      std::vector<ExprPtr> parts{expr()};
      if (accept("::")) {
        Loc sig_at = cur().loc;
        Annotation ann = sig_type();
        if (ann.kind == Annotation::Kind::Partial)
          throw ParseError("partial annotations are only allowed on top-level signatures", sig_at);
        parts.back() = ex::annot(parts.back(), ann.scheme, at);
      } else {
        while (accept(",")) parts.push_back(expr());
      }
      ctx_.pop_back();
      expect(")");
      ExprPtr out = parts.back();
      for (std::size_t i = parts.size() - 1; i-- > 0;) out = ex::pair(parts[i], out, at);
      return out;
    }
    throw ParseError("expected an expression, found '" + describe(t) + "'", at);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t decl_start_ = 0;
  std::vector<int> ctx_{0};
  mutable Token end_;
};

void check_type(const Type& t, const std::map<std::string, std::size_t>& arity, Loc at) {
  if (t.is_con() && !t.is_arrow() && !t.is_pair()) {
    auto it = arity.find(t.name());
    if (it == arity.end()) throw ParseError("unknown type constructor '" + t.name() + "'", at);
    if (it->second != t.args().size())
      throw ArityError("type constructor '" + t.name() + "' expects " + std::to_string(it->second) +
                           " argument(s), got " + std::to_string(t.args().size()),
                       at);
  }
  for (const auto& a : t.args()) check_type(a, arity, at);
}

void check_constraint(const Constraint& c, const std::map<std::string, std::size_t>& arity, Loc at) {
  for (const auto& e : c) {
    check_type(e.lhs, arity, at);
    check_type(e.rhs, arity, at);
  }
}

struct Checker {
  std::map<std::string, std::size_t> type_arity;
  std::map<std::string, std::size_t> con_fields;

  void pattern(const Pattern& p, std::set<std::string>& seen) const {
    switch (p.kind) {
      case Pattern::Kind::Var:
        if (p.name != kWildcard && !seen.insert(p.name).second)
          throw ParseError("pattern variable '" + p.name + "' bound twice", p.loc);
        return;
      case Pattern::Kind::Pair:
        for (const auto& a : p.args) pattern(a, seen);
        return;
      case Pattern::Kind::Con: {
        auto it = con_fields.find(p.name);
        if (it == con_fields.end()) throw ParseError("unknown constructor '" + p.name + "'", p.loc);
        if (it->second != p.args.size())
          throw ArityError("constructor '" + p.name + "' expects " + std::to_string(it->second) +
                               " argument(s) in a pattern, got " + std::to_string(p.args.size()),
                           p.loc);
        for (const auto& a : p.args) pattern(a, seen);
        return;
      }
    }
  }

  void expr(const Expr& e) const {
    if (e.kind == Expr::Kind::Con && !con_fields.count(e.name))
      throw ParseError("unknown constructor '" + e.name + "'", e.loc);
    if (e.kind == Expr::Kind::Annot) {
      check_constraint(e.annot->scheme.context, type_arity, e.loc);
      check_type(e.annot->scheme.body, type_arity, e.loc);
    }
    for (const auto& k : e.kids) expr(*k);
    for (const auto& c : e.clauses) {
      std::set<std::string> seen;
      pattern(c.pat, seen);
      expr(*c.body);
    }
  }
};

}  // namespace

Constraint parse_constraint(const std::string& source) { return Parser(source).equations(); }

Program parse_program(const std::string& source) {
  Program p = Parser(source).program();
  Checker chk;
  chk.type_arity = {{std::string(kInt), 0}, {std::string(kBool), 0}};
  for (const auto& d : p.gadts) {
    if (!chk.type_arity.emplace(d.name, d.params.size()).second)
      throw ParseError("duplicate data type '" + d.name + "'", d.loc);
  }
  for (const auto& d : p.gadts) {
    for (const auto& k : d.constructors) {
      if (!chk.con_fields.emplace(k.name, k.fields.size()).second)
        throw DuplicateConstructor("constructor '" + k.name + "' is declared twice");
      check_constraint(k.guard, chk.type_arity, k.loc);
      for (const auto& f : k.fields) check_type(f, chk.type_arity, k.loc);
    }
  }
  for (const auto& [name, s] : p.primitives) {
    check_constraint(s.context, chk.type_arity, {});
    check_type(s.body, chk.type_arity, {});
  }
  for (const auto& f : p.functions) {
    if (f.annot) {
      const Annotation& a = *f.annot;
      if (a.kind == Annotation::Kind::Closed) {
        check_constraint(a.scheme.context, chk.type_arity, f.annot_loc);
        check_type(a.scheme.body, chk.type_arity, f.annot_loc);
      } else {
        check_type(a.shape, chk.type_arity, f.annot_loc);
      }
    }
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      std::set<std::string> seen;
      for (const auto& q : f.params[i]) chk.pattern(q, seen);
      chk.expr(*f.bodies[i]);
    }
  }
  return p;
}

}  // namespace grdt
