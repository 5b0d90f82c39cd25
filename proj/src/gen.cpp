#include "grdt/gen.hpp"

#include <algorithm>

namespace grdt {

GenError::GenError(Kind k, const std::string& msg, Loc l)
    : std::runtime_error(l.line ? to_string(l) + ": " + msg : msg), kind(k), loc(l) {}

std::string to_string(GenError::Kind k) {
  switch (k) {
    case GenError::Kind::UnboundVariable:
      return "unbound-variable";
    case GenError::Kind::UnboundConstructor:
      return "unbound-constructor";
    case GenError::Kind::PatternUnifyFail:
      return "pattern-unify-fail";
    case GenError::Kind::NestedCase:
      return "nested-case";
    case GenError::Kind::AnnotationPresent:
      return "annotation-present";
    case GenError::Kind::GuessExhausted:
      return "guess-exhausted";
    case GenError::Kind::SolveFailed:
      return "solve-failed";
  }
  return "?";
}

VarSet free_vars(const Context& g) {
  VarSet out;
  for (const auto& [name, a] : g) {
    VarSet vs = free_vars(a.scheme.body);
    free_vars(a.scheme.context, vs);
    for (const auto& b : a.scheme.bound) vs.erase(b);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

namespace {

Scheme mono(const Type& t) { return {{}, {}, t}; }

std::vector<std::string> minus(const VarSet& a, const VarSet& b) {
  std::vector<std::string> out;
  for (const auto& v : a) {
    if (!b.count(v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), name_less);
  return out;
}

bool has_con_pattern(const Pattern& p) {
  if (p.kind == Pattern::Kind::Con) return true;
  return std::any_of(p.args.begin(), p.args.end(), has_con_pattern);
}

}  // namespace

Generator::Generator(const Environment& env, FreshSupply& fresh, GenMode mode)
    : env_(env), fresh_(fresh), mode_(mode) {}

Type Generator::fresh(std::string_view hint, std::string what, Loc loc) {
  Type t = fresh_.var(hint);
  origins_[t.name()] = {std::move(what), loc};
  return t;
}

GenResult Generator::instance(const Scheme& s, const std::string& what, Loc loc) {
  Instance inst = instantiate(s, fresh_);
  for (const auto& [from, to] : inst.renaming) origins_[to] = {"instance of '" + from + "' in " + what, loc};
  Type r = fresh("t", "type of " + what, loc);
  std::vector<Formula> parts{Formula::eqs(inst.context), Formula::eq(r, inst.type)};
  return {Formula::conj(std::move(parts)), r};
}

PatternInfo Generator::infer_pattern(const Pattern& p) {
  PatternInfo out;
  switch (p.kind) {
    case Pattern::Kind::Var: {
      out.type = fresh("t", p.name == kWildcard ? "wildcard pattern" : "pattern variable '" + p.name + "'", p.loc);
      if (p.name != kWildcard) out.bindings.push_back({p.name, out.type});
      return out;
    }
    case Pattern::Kind::Pair: {
      PatternInfo l = infer_pattern(p.args[0]);
      PatternInfo r = infer_pattern(p.args[1]);
      out.existentials = l.existentials;
      out.existentials.insert(out.existentials.end(), r.existentials.begin(), r.existentials.end());
      out.guard = conj(l.guard, r.guard);
      out.bindings = l.bindings;
      out.bindings.insert(out.bindings.end(), r.bindings.begin(), r.bindings.end());
      out.type = Type::pair(l.type, r.type);
      return out;
    }
    case Pattern::Kind::Con:
      break;
  }
  const ConInfo* info = env_.constructor(p.name);
  if (!info) throw GenError(GenError::Kind::UnboundConstructor, "unknown constructor '" + p.name + "'", p.loc);
  const ConstructorSig& k = info->sig;
  std::map<std::string, std::string> ren;
  for (const auto& a : k.universals) {
    ren[a] = fresh_.name(a);
    origins_[ren[a]] = {"index '" + a + "' of " + info->gadt + " in pattern " + p.name, p.loc};
  }
  std::vector<std::string> exs;
  for (const auto& b : k.existentials) {
    ren[b] = fresh_.name(b);
    origins_[ren[b]] = {"existential '" + b + "' of pattern " + p.name, p.loc};
    exs.push_back(ren[b]);
  }
  Constraint d = rename(k.guard, ren);
  Type result = rename(k.result, ren);
  auto arg = con_argument(p);
  if (!arg) {
    out.existentials = exs;
    out.guard = d;
    out.type = result;
    return out;
  }
  Type field = rename(*k.arg(), ren);
  PatternInfo sub = infer_pattern(*arg);
  Prefix order;
  std::vector<std::string> outer, inner;
  ordered_vars(field, outer);
  for (const auto& v : free_vars(sub.type)) {
    if (std::find(outer.begin(), outer.end(), v) == outer.end()) inner.push_back(v);
  }
  order.append(Quant::Exists, outer);
  order.append(Quant::Exists, inner);
  auto phi = mgu_flexible({{sub.type, field}}, order);
  if (!phi) {
    throw GenError(GenError::Kind::PatternUnifyFail,
                   "pattern argument of " + p.name + " has type " + to_string(sub.type) + ", expected " +
                       to_string(field),
                   p.loc);
  }
  for (const auto& b : sub.existentials) {
    if (!phi->binds(b)) out.existentials.push_back(b);
  }
  for (const auto& b : exs) {
    if (!phi->binds(b)) out.existentials.push_back(b);
  }
  out.guard = conj(phi->apply(sub.guard), phi->apply(d));
  for (const auto& [x, t] : sub.bindings) out.bindings.push_back({x, phi->apply(t)});
  out.type = phi->apply(result);
  return out;
}

GenResult Generator::generate(const Expr& e, const Context& g) { return gen(e, g, 0); }

GenResult Generator::gen(const Expr& e, const Context& g, int depth) {
  switch (e.kind) {
    case Expr::Kind::Var: {
      auto it = g.find(e.name);
      if (it != g.end()) return instance(it->second.scheme, "'" + e.name + "'", e.loc);
      auto prim = env_.primitives.find(e.name);
      if (prim != env_.primitives.end()) return instance(prim->second, "'" + e.name + "'", e.loc);
      throw GenError(GenError::Kind::UnboundVariable, "unbound variable '" + e.name + "'", e.loc);
    }
    case Expr::Kind::Con: {
      const ConInfo* info = env_.constructor(e.name);
      if (!info) throw GenError(GenError::Kind::UnboundConstructor, "unknown constructor '" + e.name + "'", e.loc);
      return instance(info->scheme, "constructor " + e.name, e.loc);
    }
    case Expr::Kind::Int:
    case Expr::Kind::Bool: {
      bool is_int = e.kind == Expr::Kind::Int;
      Type r = fresh("t", is_int ? "literal " + std::to_string(e.int_value) : (e.bool_value ? "True" : "False"), e.loc);
      return {Formula::eq(r, is_int ? Type::int_type() : Type::bool_type()), r};
    }
    case Expr::Kind::App: {
      GenResult f = gen(*e.kids[0], g, depth);
      GenResult a = gen(*e.kids[1], g, depth);
      Type t = fresh("t", "result of application", e.loc);
      return {Formula::conj({f.formula, a.formula, Formula::eq(f.type, Type::arrow(a.type, t))}), t};
    }
    case Expr::Kind::Lam: {
      Type a = fresh("t", "argument '" + e.name + "'", e.loc);
      Context g2 = g;
      g2[e.name] = {mono(a), true};
      GenResult body = gen(*e.kids[0], g2, depth);
      return {body.formula, Type::arrow(a, body.type)};
    }
    case Expr::Kind::Pair: {
      GenResult l = gen(*e.kids[0], g, depth);
      GenResult r = gen(*e.kids[1], g, depth);
      Type t = fresh("t", "pair", e.loc);
      return {Formula::conj({l.formula, r.formula, Formula::eq(t, Type::pair(l.type, r.type))}), t};
    }
    case Expr::Kind::Case: {
      if (mode_ == GenMode::Known && depth > 0)
        throw GenError(GenError::Kind::NestedCase,
                       "nested case expression; lift it into a separate top-level function", e.loc);
      Type t1 = fresh("t", "type of case alternatives", e.loc);
      Type t2 = fresh("t", "result of case", e.loc);
      GenResult scrut = gen(*e.kids[0], g, depth + 1);
      std::vector<Formula> parts{scrut.formula, Formula::eq(t1, Type::arrow(scrut.type, t2))};
      for (const auto& c : e.clauses) {
        GenResult ci = gen_clause(c, g, depth + 1);
        parts.push_back(ci.formula);
        parts.push_back(Formula::eq(t1, ci.type));
      }
      if (mode_ == GenMode::Known && e.kids[0]->kind == Expr::Kind::Var) {
        auto it = g.find(e.kids[0]->name);
        bool matched = std::any_of(e.clauses.begin(), e.clauses.end(), [](const Clause& c) { return has_con_pattern(c.pat); });
        if (it != g.end() && it->second.lambda_bound && matched) parts.push_back(Formula::known(it->second.scheme.body));
      }
      return {Formula::conj(std::move(parts)), t2};
    }
    case Expr::Kind::Rec: {
      if (e.annot && e.annot->kind == Annotation::Kind::Closed) {
        if (mode_ == GenMode::Known)
          throw GenError(GenError::Kind::AnnotationPresent, "'" + e.name + "' carries a type annotation", e.loc);
        Context g2 = g;
        g2[e.name] = {e.annot->scheme, false};
        return annotated(*e.kids[0], e.annot->scheme, g2, depth, e.loc);
      }
      if (e.annot && mode_ == GenMode::Known)
        throw GenError(GenError::Kind::AnnotationPresent, "'" + e.name + "' carries a partial annotation", e.loc);
      Type t1 = fresh("t", "type of '" + e.name + "'", e.loc);
      Context g2 = g;
      g2[e.name] = {mono(t1), false};
      GenResult body = gen(*e.kids[0], g2, depth);
      return {Formula::conj({body.formula, Formula::eq(t1, body.type)}), t1};
    }
    case Expr::Kind::Annot:
      if (mode_ == GenMode::Known)
        throw GenError(GenError::Kind::AnnotationPresent, "expression carries a type annotation", e.loc);
      return annotated(*e.kids[0], e.annot->scheme, g, depth, e.loc);
  }
  throw GenError(GenError::Kind::UnboundVariable, "unsupported expression", e.loc);
}

GenResult Generator::annotated(const Expr& e, const Scheme& s, const Context& g, int depth, Loc loc) {
  GenResult inner = gen(e, g, depth);
  std::map<std::string, std::string> ren;
  std::vector<std::string> as;
  for (const auto& a : s.bound) {
    ren[a] = fresh_.name(a);
    origins_[ren[a]] = {"annotation variable '" + a + "'", loc};
    as.push_back(ren[a]);
  }
  Constraint hyp = rename(s.context, ren);
  hyp.push_back({rename(s.body, ren), inner.type});
  VarSet keep = free_vars(g);
  free_vars(inner.type, keep);
  Formula body = Formula::exists(minus(free_vars(inner.formula), keep), inner.formula);
  return {Formula::forall(as, Formula::implies(hyp, body)), inner.type};
}

GenResult Generator::gen_clause(const Clause& c, const Context& g, int depth) {
  PatternInfo pi = infer_pattern(c.pat);
  Context g2 = g;
  for (const auto& [x, t] : pi.bindings) g2[x] = {mono(t), false};
  GenResult body = gen(*c.body, g2, depth);
  Type t = fresh("t", "type of alternative " + pretty(c.pat), c.pat.loc);

  VarSet gamma = free_vars(g);
  VarSet keep = gamma;
  keep.insert(pi.existentials.begin(), pi.existentials.end());
  free_vars(body.type, keep);
  free_vars(pi.type, keep);
  free_vars(pi.guard, keep);
  for (const auto& [x, tx] : pi.bindings) free_vars(tx, keep);
  Formula inner = Formula::exists(minus(free_vars(body.formula), keep), body.formula);
  Formula guarded = pi.guard.empty() ? inner : Formula::implies(pi.guard, inner);
  Formula f = Formula::forall(pi.existentials,
                              Formula::conj({guarded, Formula::eq(t, Type::arrow(pi.type, body.type))}));
  if (mode_ != GenMode::Known) return {f, t};

  std::vector<Formula> parts{f};
  VarSet fe_vars = free_vars(body.formula);
  std::vector<std::string> subjects(fe_vars.begin(), fe_vars.end());
  std::sort(subjects.begin(), subjects.end(), name_less);
  VarSet local = fe_vars;
  free_vars(pi.guard, local);
  Formula both = Formula::conj({Formula::eqs(pi.guard), body.formula});
  for (const auto& a : subjects) {
    VarSet kept{a};
    kept.insert(pi.existentials.begin(), pi.existentials.end());
    Formula alt = rename_bound(Formula::exists(minus(local, kept), both), fresh_);
    parts.push_back(Formula::disj(Formula::known(Type::var(a)), alt));
  }
  return {Formula::conj(std::move(parts)), t};
}

GenResult gen_constraints(const Environment& env, const Expr& e, FreshSupply& fresh, const Context& g) {
  Generator gen(env, fresh);
  return gen.generate(e, g);
}

GenResult gen_constraints_known(const Environment& env, const Expr& e, FreshSupply& fresh, const Context& g) {
  Generator gen(env, fresh, GenMode::Known);
  return gen.generate(e, g);
}

// ---- Rec-Guess ----

namespace {

Type fill_holes(const Type& t, FreshSupply& fresh) {
  if (t.is_hole()) return fresh.var("h");
  if (t.args().empty()) return t;
  std::vector<Type> args;
  for (const auto& a : t.args()) args.push_back(fill_holes(a, fresh));
  return Type::con(t.name(), std::move(args));
}

// Data type whose constructors the patterns for component `idx` of an
// n-tuple scrutinee mention.
std::optional<std::string> scrutinized_type(const Environment& env, const Pattern& p, std::size_t idx, std::size_t n) {
  const Pattern* q = &p;
  for (std::size_t i = 0; i < idx; ++i) {
    if (q->kind != Pattern::Kind::Pair) return std::nullopt;
    q = &q->args[1];
  }
  if (idx + 1 < n) {
    if (q->kind != Pattern::Kind::Pair) return std::nullopt;
    q = &q->args[0];
  }
  if (q->kind != Pattern::Kind::Con) return std::nullopt;
  const ConInfo* info = env.constructor(q->name);
  if (!info) return std::nullopt;
  return info->gadt;
}

void find_scrutinized(const Environment& env, const Expr& e, const std::vector<std::string>& args,
                      std::map<std::string, std::string>& out) {
  if (e.kind == Expr::Kind::Case) {
    std::vector<const Expr*> comps;
    const Expr* s = e.kids[0].get();
    while (s->kind == Expr::Kind::Pair) {
      comps.push_back(s->kids[0].get());
      s = s->kids[1].get();
    }
    comps.push_back(s);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i]->kind != Expr::Kind::Var) continue;
      const std::string& x = comps[i]->name;
      if (std::find(args.begin(), args.end(), x) == args.end() || out.count(x)) continue;
      for (const auto& c : e.clauses) {
        if (auto t = scrutinized_type(env, c.pat, i, comps.size())) {
          out[x] = *t;
          break;
        }
      }
    }
  }
  for (const auto& k : e.kids) find_scrutinized(env, *k, args, out);
  for (const auto& c : e.clauses) find_scrutinized(env, *c.body, args, out);
}

}  // namespace

Scheme guess_initial(const Environment& env, const std::string& f, const Expr& body,
                     const std::optional<Annotation>& annot, FreshSupply& fresh) {
  (void)f;
  if (annot && annot->kind == Annotation::Kind::Partial) return generalize_all(fill_holes(annot->shape, fresh));
  if (annot && annot->kind == Annotation::Kind::Closed) return annot->scheme;
  std::vector<std::string> args;
  const Expr* e = &body;
  while (e->kind == Expr::Kind::Lam) {
    args.push_back(e->name);
    e = e->kids[0].get();
  }
  if (args.empty()) return generalize_all(fresh.var("a"));
  std::map<std::string, std::string> heads;
  find_scrutinized(env, *e, args, heads);
  Type t = fresh.var("b");
  for (std::size_t i = args.size(); i-- > 0;) {
    Type dom;
    auto it = heads.find(args[i]);
    if (it != heads.end()) {
      std::vector<Type> params;
      for (const auto& p : env.gadts.at(it->second).params) params.push_back(fresh.var(p));
      dom = Type::con(it->second, std::move(params));
    } else {
      dom = fresh.var("a");
    }
    t = Type::arrow(dom, t);
  }
  return generalize_all(t);
}

GuessedConstraint guess_constraint(const Environment& env, const std::string& f, const Expr& body,
                                   const std::optional<Annotation>& annot, FreshSupply& fresh, const Context& g,
                                   std::map<std::string, VarOrigin>* origins) {
  Scheme sigma = guess_initial(env, f, body, annot, fresh);
  Generator gen(env, fresh);
  Context g1 = g;
  g1[f] = {sigma, false};
  GenResult r = gen.generate(body, g1);
  if (origins) origins->insert(gen.origins().begin(), gen.origins().end());
  return {r.formula, r.type, sigma};
}

RecGuessResult rec_guess(const Environment& env, const std::string& f, const Expr& body,
                         const std::optional<Annotation>& annot, int max_iter, FreshSupply& fresh, const Context& g,
                         std::map<std::string, VarOrigin>* origins) {
  RecGuessResult res;
  Scheme sigma = guess_initial(env, f, body, annot, fresh);
  std::optional<SolveResult> last;
  std::optional<NormalForm> last_nf;
  for (int iter = 1; iter <= std::max(1, max_iter); ++iter) {
    Generator gen(env, fresh);
    Context g1 = g;
    g1[f] = {sigma, false};
    GenResult first = gen.generate(body, g1);
    if (origins) origins->insert(gen.origins().begin(), gen.origins().end());
    NormalForm nf = normalize(first.formula);
    SolveResult psi = solve(nf);
    if (!psi) {
      GenError err(GenError::Kind::SolveFailed,
                   "constraints of '" + f + "' have no solution under the guess " + scheme_string(sigma), body.loc);
      err.solve = psi;
      err.normal_form = nf;
      throw err;
    }
    VarSet gamma_vars;
    for (const auto& v : free_vars(g)) free_vars(psi.subst->apply(Type::var(v)), gamma_vars);
    Type t2 = psi.subst->apply(first.type);
    std::vector<std::string> as;
    ordered_vars(t2, as);
    as.erase(std::remove_if(as.begin(), as.end(), [&](const std::string& v) { return gamma_vars.count(v) != 0; }),
             as.end());
    Scheme candidate{as, {}, t2};

    Context g2;
    for (const auto& [x, a] : g) {
      VarSet dom;
      for (const auto& [v, img] : psi.subst->bindings()) {
        if (std::find(a.scheme.bound.begin(), a.scheme.bound.end(), v) == a.scheme.bound.end()) dom.insert(v);
      }
      Substitution outside = psi.subst->restrict_to(dom);
      g2[x] = {{a.scheme.bound, outside.apply(a.scheme.context), outside.apply(a.scheme.body)}, a.lambda_bound};
    }
    g2[f] = {candidate, false};
    Generator regen(env, fresh);
    GenResult second = regen.generate(body, g2);
    if (origins) origins->insert(regen.origins().begin(), regen.origins().end());

    std::map<std::string, std::string> ren;
    std::vector<std::string> fresh_as;
    for (const auto& a : as) {
      ren[a] = fresh.name(a);
      fresh_as.push_back(ren[a]);
    }
    VarSet keep = free_vars(g2);
    free_vars(second.type, keep);
    Formula inner = Formula::exists(minus(free_vars(second.formula), keep), second.formula);
    Formula check = Formula::forall(fresh_as, Formula::implies({{rename(t2, ren), second.type}}, inner));
    Formula combined = Formula::conj({first.formula, check});
    NormalForm nf2 = normalize(combined);
    SolveResult verified = solve(nf2);
    res.iterations = iter;
    if (verified) {
      res.formula = combined;
      res.type = first.type;
      res.scheme = candidate;
      res.first = first.formula;
      res.guess = sigma;
      return res;
    }
    last = verified;
    last_nf = nf2;
    sigma = candidate;
  }
  GenError err(GenError::Kind::GuessExhausted,
               "could not verify a type for '" + f + "' after " + std::to_string(max_iter) + " iteration(s)", body.loc);
  err.solve = last;
  err.normal_form = last_nf;
  throw err;
}

}  // namespace grdt
