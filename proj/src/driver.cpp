#include "grdt/driver.hpp"

#include <algorithm>
#include <sstream>

#include "grdt/gen.hpp"
#include "grdt/known.hpp"
#include "grdt/principal.hpp"

namespace grdt {

using json = nlohmann::ordered_json;

std::string to_string(Command c) {
  switch (c) {
    case Command::Infer: return "infer";
    case Command::Check: return "check";
    case Command::Diagnose: return "diagnose";
    case Command::Principal: return "principal";
  }
  return "infer";
}

// ---- display names ----

DisplayNames::DisplayNames(const Environment& env, Substitution theta, const Type& t)
    : env_(env), theta_(std::move(theta)) {
  assign(theta_.apply(t), false);
}

void DisplayNames::assign(const Type& t, bool under_data) {
  if (t.is_var()) {
    if (names_.count(t.name())) return;
    std::string n;
    if (under_data) {
      do {
        int k = letters_++;
        n = std::string(1, static_cast<char>('a' + k % 26));
        if (k >= 26) n += std::to_string(k / 26);
      } while (n == "t");
    } else {
      n = next_plain();
    }
    names_[t.name()] = n;
    back_[n] = t.name();
    return;
  }
  bool data = t.is_con() && !t.is_arrow() && !t.is_pair();
  for (const auto& a : t.args()) assign(a, data);
}

std::string DisplayNames::next_plain() { return "t" + std::to_string(++plain_); }

std::string DisplayNames::var(const std::string& v) {
  auto it = names_.find(v);
  if (it != names_.end()) return it->second;
  std::string n = next_plain();
  names_[v] = n;
  back_[n] = v;
  return n;
}

Type DisplayNames::show_type(const Type& t) {
  Type u = theta_.apply(t);
  std::map<std::string, std::string> ren;
  for (const auto& v : free_vars(u)) ren[v] = "";
  std::vector<std::string> order;
  ordered_vars(u, order);
  for (const auto& v : order) ren[v] = var(v);
  return rename(u, ren);
}

std::string DisplayNames::show(const Equation& e) { return show(e.lhs) + "=" + show(e.rhs); }

std::string DisplayNames::show(const Constraint& c) {
  if (c.empty()) return "True";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + show(c[i]);
  return out;
}

std::optional<std::string> DisplayNames::internal(const std::string& display) const {
  auto it = back_.find(display);
  if (it == back_.end()) return std::nullopt;
  return it->second;
}

// ---- report rendering ----

namespace {

Exit combine(Exit a, Exit b) {
  auto rank = [](Exit e) {
    switch (e) {
      case Exit::Ok: return 0;
      case Exit::NeedsAnnotation: return 1;
      case Exit::TypeError: return 2;
      case Exit::Usage: return 3;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

}  // namespace

std::string Report::human() const {
  std::ostringstream os;
  for (const auto& b : bindings) {
    for (const auto& l : b.lines) os << l << "\n";
  }
  return os.str();
}

json Report::json() const {
  nlohmann::ordered_json out;
  out["schema"] = 1;
  out["command"] = to_string(command);
  out["file"] = file;
  out["exit_code"] = static_cast<int>(exit);
  out["bindings"] = json::array();
  for (const auto& b : bindings) {
    nlohmann::ordered_json j;
    j["name"] = b.name;
    j["line"] = b.loc.line;
    j["column"] = b.loc.col;
    j["status"] = b.status;
    j["exit_code"] = static_cast<int>(b.exit);
    if (b.type) j["type"] = *b.type;
    for (const auto& [k, v] : b.detail.items()) j[k] = v;
    j["lines"] = b.lines;
    out["bindings"].push_back(std::move(j));
  }
  return out;
}

// ---- pipeline ----

namespace {

std::string describe(const Failure& f, DisplayNames& n) {
  return to_string(f.kind) + ": " + n.show(f.lhs) + " vs " + n.show(f.rhs) + " (from " + n.show(f.equation) + ")";
}

Substitution solved_c0(const NormalForm& nf) {
  if (auto t = mgu_mixed(nf.prefix, nf.c0)) return *t;
  if (auto t = mgu_flexible(nf.c0, nf.prefix)) return *t;
  return {};
}

json string_list(const std::vector<std::string>& xs) { return json(xs); }

class Runner {
 public:
  Runner(const Environment& env, const Options& opts) : env_(env), opts_(opts) {}

  BindingReport binding(Command cmd, const FunctionDef& f) {
    const Expr& rec = *f.bodies[0];
    BindingReport rep;
    rep.name = f.name;
    rep.loc = f.loc;
    std::optional<Scheme> scheme;
    switch (cmd) {
      case Command::Infer: scheme = infer(f, rec, rep); break;
      case Command::Check: scheme = check(f, rec, rep); break;
      case Command::Diagnose: scheme = diagnose(f, rec, rep); break;
      case Command::Principal: scheme = principal(f, rec, rep); break;
    }
    if (scheme) gamma_[f.name] = {*scheme, false};
    return rep;
  }

 private:
  static bool recursive(const Expr& rec) { return mentions(*rec.kids[0], rec.name); }
  static bool closed_annot(const FunctionDef& f) {
    return f.annot && f.annot->kind == Annotation::Kind::Closed;
  }

  void fail(BindingReport& rep, Exit e, const std::string& status, const std::string& headline) {
    rep.exit = e;
    rep.status = status;
    rep.lines.push_back(rep.name + ": " + headline);
  }

  void ok(BindingReport& rep, const std::string& type, const std::string& suffix = "") {
    rep.exit = Exit::Ok;
    rep.status = "ok";
    rep.type = type;
    rep.lines.push_back(rep.name + " : " + type + suffix);
  }

  // Failure of a solve, with its minimal unsatisfiable subset.
  void solve_failure(BindingReport& rep, const NormalForm& nf, const SolveResult& s, DisplayNames& names) {
    fail(rep, Exit::TypeError, "type-error", "type error at " + to_string(rep.loc));
    std::string why = describe(s.failure, names);
    rep.lines.push_back("  " + why);
    rep.detail["error"] = {{"kind", to_string(s.failure.kind)}, {"step", s.failure.step}, {"message", why}};
    if (auto core = failure_core(nf, s)) {
      rep.lines.push_back("  minimal unsatisfiable subset: " + names.show(*core));
      json eqs = json::array();
      for (const auto& e : *core) eqs.push_back(names.show(e));
      rep.detail["min_unsat"] = eqs;
    }
  }

  void gen_failure(BindingReport& rep, const GenError& e) {
    if (e.solve && e.normal_form) {
      DisplayNames names(env_, solved_c0(*e.normal_form), Type::int_type());
      solve_failure(rep, *e.normal_form, *e.solve, names);
      rep.lines.push_back("  " + std::string(e.what()));
      rep.detail["error"]["context"] = e.what();
      return;
    }
    fail(rep, Exit::TypeError, "type-error", "type error at " + to_string(e.loc));
    rep.lines.push_back("  " + std::string(e.what()));
    rep.detail["error"] = {{"kind", to_string(e.kind)}, {"message", e.what()}};
  }

  // The guard of an alternative stated on the variables of the binding's type.
  static std::string guard_summary(const NormalForm& nf, const Guarded& g, const Type& t, DisplayNames& names) {
    auto rho = mgu_flexible(conj(nf.c0, g.hyp), nf.prefix);
    if (!rho) return names.show(g.hyp);
    Constraint shown;
    for (const auto& v : free_vars(names.theta().apply(t))) {
      Type image = rho->apply(Type::var(v));
      if (image != Type::var(v)) shown.push_back({Type::var(v), image});
    }
    return shown.empty() ? "True" : names.show(shown);
  }

  // Closed annotation checked through the annotation rule.
  bool check_annotated(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    FreshSupply fresh;
    Generator gen(env_, fresh);
    GenResult g = gen.generate(rec, gamma_);
    NormalForm nf = normalize(g.formula);
    SolveResult s = solve(nf);
    if (s) {
      ok(rep, scheme_string(f.annot->scheme));
      return true;
    }
    DisplayNames names(env_, solved_c0(nf), g.type);
    solve_failure(rep, nf, s, names);
    for (std::size_t i = 0; i < s.branch_equations.size(); ++i) {
      const auto& e = s.branch_equations[i];
      if (std::find(e.begin(), e.end(), s.failure.equation) == e.end()) continue;
      std::string guard = guard_summary(nf, nf.guarded[i], g.type, names);
      rep.lines.push_back("  failing alternative: under " + guard);
      rep.detail["failing_guard"] = guard;
      break;
    }
    return false;
  }

  std::optional<Scheme> infer(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    if (closed_annot(f)) {
      if (check_annotated(f, rec, rep)) return f.annot->scheme;
      return std::nullopt;
    }
    FreshSupply fresh;
    if ((recursive(rec) || f.annot) && !opts_.naive) {
      try {
        RecGuessResult r = rec_guess(env_, rec.name, *rec.kids[0], rec.annot, opts_.max_iter, fresh, gamma_);
        ok(rep, scheme_string(r.scheme));
        rep.detail["guess"] = scheme_string(r.guess);
        rep.detail["iterations"] = r.iterations;
        return r.scheme;
      } catch (const GenError& e) {
        gen_failure(rep, e);
        suggest(f, rec, rep);
        return std::nullopt;
      }
    }
    try {
      Generator gen(env_, fresh);
      GenResult g = gen.generate(rec, gamma_);
      NormalForm nf = normalize(g.formula);
      SolveResult s = solve(nf);
      if (s) {
        Scheme sc = generalize_all(s.subst->apply(g.type));
        ok(rep, scheme_string(sc));
        return sc;
      }
      DisplayNames names(env_, solved_c0(nf), g.type);
      solve_failure(rep, nf, s, names);
      suggest(f, rec, rep);
    } catch (const GenError& e) {
      gen_failure(rep, e);
    }
    return std::nullopt;
  }

  void suggest(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    if (!opts_.suggest || f.annot) return;
    BindingReport diag;
    diag.name = rep.name;
    diag.loc = rep.loc;
    try {
      diagnose(f, rec, diag);
    } catch (const UsageError& e) {
      rep.lines.push_back("  no suggestion: " + std::string(e.what()));
      return;
    }
    for (std::size_t i = 1; i < diag.lines.size(); ++i) {
      if (diag.lines[i].rfind("  minimal", 0) != 0) rep.lines.push_back(diag.lines[i]);
    }
    rep.detail["diagnosis"] = diag.detail["diagnosis"];
    if (diag.exit == Exit::NeedsAnnotation) {
      rep.exit = Exit::NeedsAnnotation;
      rep.status = "needs-annotation";
    }
  }

  std::optional<Scheme> check(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    if (closed_annot(f)) {
      if (check_annotated(f, rec, rep)) {
        rep.lines.back() += " (annotation admitted)";
        return f.annot->scheme;
      }
      return std::nullopt;
    }
    auto s = infer(f, rec, rep);
    if (!rep.lines.empty() && rep.exit == Exit::Ok) rep.lines.front() += " (no annotation; inferred)";
    rep.detail["annotated"] = false;
    return s;
  }

  std::optional<Scheme> diagnose(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    if (f.annot) throw UsageError(to_string(f.annot_loc) + ": '" + f.name + "' carries a type annotation; diagnose needs unannotated bindings");
    FreshSupply fresh;
    Generator gen(env_, fresh, GenMode::Known);
    GenResult g;
    try {
      g = gen.generate(rec, gamma_);
    } catch (const GenError& e) {
      if (e.kind == GenError::Kind::NestedCase || e.kind == GenError::Kind::AnnotationPresent)
        throw UsageError(to_string(e.loc) + ": " + e.what());
      gen_failure(rep, e);
      return std::nullopt;
    }
    NormalForm nf = normalize(g.formula);
    DisplayNames names(env_, solved_c0(nf), g.type);

    Constraint u;
    try {
      u = parse_constraint(opts_.assume);
    } catch (const ParseError& e) {
      throw UsageError("--assume: " + std::string(e.what()));
    }
    std::map<std::string, std::string> ren;
    for (const auto& v : free_vars(u)) ren[v] = names.internal(v).value_or(v);
    u = rename(u, ren);

    Diagnosis d = criteria_check(nf, u, [&](const Type& t) { return names.show(t); });
    json dj;
    dj["criteria_satisfied"] = d.criteria_satisfied;
    dj["known_sets_agree"] = d.known_sets_agree;
    dj["satisfiable"] = d.satisfiable;
    std::vector<std::string> req;
    for (const auto& t : d.required_known) req.push_back(names.show(t));
    dj["required_known"] = string_list(req);
    if (d.min_unsat) {
      json eqs = json::array();
      for (const auto& e : *d.min_unsat) eqs.push_back(names.show(e));
      dj["min_unsat"] = eqs;
    }
    dj["suggestions"] = string_list(d.suggestions);
    if (!u.empty()) dj["assume"] = names.show(u);

    std::optional<Scheme> scheme;
    if (d.criteria_satisfied) {
      NormalForm with_u = nf.without_known();
      with_u.c0 = conj(u, nf.c0);
      if (SolveResult s = solve(with_u)) {
        scheme = generalize_all(s.subst->apply(g.type));
      } else {
        try {
          PrincipalResult pr = principal_type(with_u, interface_vars(with_u, g.type), opts_.budget);
          Substitution th = solved_c0(with_u);
          if (!pr.candidates.empty()) scheme = generalize_all(pr.candidates.front().apply(th.apply(g.type)));
        } catch (const MeaninglessOrIllTyped&) {
        }
      }
      rep.exit = Exit::Ok;
      rep.status = "ok";
      std::string head = rep.name + ": criteria satisfied";
      if (scheme) {
        rep.type = scheme_string(*scheme);
        head += "; " + rep.name + " : " + *rep.type;
      }
      rep.lines.push_back(head);
    } else {
      rep.exit = Exit::NeedsAnnotation;
      rep.status = "needs-annotation";
      rep.lines.push_back(rep.name + ": criteria not satisfied");
      if (!d.satisfiable) rep.lines.push_back("  constraints are unsatisfiable");
    }
    if (!u.empty()) rep.lines.push_back("  assuming: " + names.show(u));
    if (!req.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < req.size(); ++i) joined += (i ? ", " : "") + req[i];
      rep.lines.push_back("  must be known: " + joined);
    }
    if (d.min_unsat) rep.lines.push_back("  minimal unsatisfiable subset: " + names.show(*d.min_unsat));
    json where = json::array();
    for (const auto& s : d.suggestions) rep.lines.push_back("  suggestion: " + s);
    for (const auto& t : d.required_known) {
      if (!t.is_var()) continue;
      auto it = gen.origins().find(t.name());
      if (it == gen.origins().end()) continue;
      std::string line = names.show(t) + " is the " + it->second.what + " at " + to_string(it->second.loc);
      rep.lines.push_back("  " + line);
      where.push_back({{"type", names.show(t)}, {"origin", it->second.what}, {"line", it->second.loc.line},
                       {"column", it->second.loc.col}});
    }
    dj["locations"] = where;
    rep.detail["diagnosis"] = dj;
    return scheme;
  }

  std::optional<Scheme> principal(const FunctionDef& f, const Expr& rec, BindingReport& rep) {
    FreshSupply fresh;
    Formula formula;
    Type t;
    try {
      if ((recursive(rec) || f.annot) && !(opts_.naive && !closed_annot(f))) {
        GuessedConstraint gc = guess_constraint(env_, rec.name, *rec.kids[0], rec.annot, fresh, gamma_);
        formula = gc.formula;
        t = gc.type;
        rep.detail["guess"] = scheme_string(gc.guess);
      } else {
        GenResult g = Generator(env_, fresh).generate(rec, gamma_);
        formula = g.formula;
        t = g.type;
      }
    } catch (const GenError& e) {
      gen_failure(rep, e);
      return std::nullopt;
    }
    NormalForm nf = normalize(formula);
    Substitution theta = solved_c0(nf);
    DisplayNames names(env_, theta, t);
    if (!mgu_mixed(nf.prefix, nf.c0)) {
      solve_failure(rep, nf, solve(nf), names);
      return std::nullopt;
    }
    PrincipalResult pr;
    try {
      pr = principal_type(nf, interface_vars(nf, t), opts_.budget);
    } catch (const MeaninglessOrIllTyped& e) {
      fail(rep, Exit::TypeError, "meaningless-or-ill-typed",
           "alternative " + std::to_string(e.branch + 1) + " can never be taken, or the binding is ill-typed");
      rep.lines.push_back("  unsatisfiable: " + names.show(e.equations));
      rep.detail["error"] = {{"kind", "MeaninglessOrIllTyped"},
                             {"alternative", e.branch + 1},
                             {"equations", names.show(e.equations)}};
      return std::nullopt;
    }
    Type shape = theta.apply(t);
    auto show = [&](const Substitution& s) { return scheme_string(s.apply(shape)); };
    std::vector<std::string> cands;
    for (const auto& c : pr.candidates) cands.push_back(show(c));
    std::string joined;
    for (std::size_t i = 0; i < cands.size(); ++i) joined += (i ? ", " : "") + cands[i];
    rep.detail["verdict"] = to_string(pr.verdict);
    rep.detail["candidates"] = string_list(cands);
    rep.detail["solutions"] = pr.solutions.size();

    switch (pr.verdict) {
      case PrincipalResult::Verdict::Principal: {
        ok(rep, show(*pr.principal));
        rep.lines.back() = rep.name + ": principal: " + *rep.type;
        return generalize_all(pr.principal->apply(shape));
      }
      case PrincipalResult::Verdict::NoPrincipal:
        if (cands.empty()) {
          fail(rep, Exit::TypeError, "type-error", "no solution");
        } else {
          fail(rep, Exit::NeedsAnnotation, "no-principal", "no principal type; candidates: " + joined);
        }
        break;
      case PrincipalResult::Verdict::NotPrincipalWitness:
        fail(rep, Exit::NeedsAnnotation, "not-principal",
             "not principal: " + show(*pr.principal) + " (" + pr.reason + ")");
        rep.detail["witness"] = show(*pr.principal);
        rep.detail["reason"] = pr.reason;
        break;
      case PrincipalResult::Verdict::Unknown:
        fail(rep, Exit::NeedsAnnotation, "unknown",
             "unknown: enumeration budget exhausted" + (cands.empty() ? std::string() : "; candidates so far: " + joined));
        break;
    }
    if (closed_annot(f)) return f.annot->scheme;
    return std::nullopt;
  }

  const Environment& env_;
  const Options& opts_;
  Context gamma_;
};

}  // namespace

Report run(Command cmd, const std::string& source, const std::string& file, const Options& opts) {
  Program prog;
  try {
    prog = desugar(parse_program(source));
  } catch (const ParseError& e) {
    throw UsageError(file + ":" + to_string(e.loc) + ": " + e.what());
  } catch (const ArityError& e) {
    throw UsageError(file + ":" + to_string(e.loc) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(file + ": " + e.what());
  }
  Environment env = constructor_env(prog);
  Report report;
  report.command = cmd;
  report.file = file;
  Runner runner(env, opts);
  for (const auto& f : prog.functions) {
    report.bindings.push_back(runner.binding(cmd, f));
    report.exit = combine(report.exit, report.bindings.back().exit);
  }
  return report;
}

}  // namespace grdt
