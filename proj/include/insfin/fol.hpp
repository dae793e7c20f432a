#pragma once

// Unsorted first-order logic over finite structures: syntax, evaluation,
// prenex normal form, homomorphisms and substructures.

#include "common.hpp"
#include "fincat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace insfin::fol {

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

struct FolSignature {
  std::vector<Symbol> functions;
  std::vector<Symbol> relations;

  int function_index(const std::string& n) const {
    for (std::size_t i = 0; i < functions.size(); ++i)
      if (functions[i].name == n) return static_cast<int>(i);
    return -1;
  }
  int relation_index(const std::string& n) const {
    for (std::size_t i = 0; i < relations.size(); ++i)
      if (relations[i].name == n) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const FolSignature&) const = default;
};

inline bool looks_like_variable(const std::string& n) {
  return n.size() > 1 && n[0] == 'x' &&
         std::all_of(n.begin() + 1, n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline Report validate_signature(const FolSignature& s) {
  Report rep;
  std::set<std::string> seen;
  auto check = [&](const Symbol& sym) {
    if (sym.name.empty() || looks_like_variable(sym.name)) rep.structural(sym.name, "symbol name is empty or a variable name");
    if (sym.arity < 0) rep.structural(sym.name, "negative arity");
    if (!seen.insert(sym.name).second) rep.structural(sym.name, "duplicate symbol");
  };
  for (const auto& f : s.functions) check(f);
  for (const auto& r : s.relations) check(r);
  return rep;
}

// ---------------------------------------------------------------------------
// Syntax

/// Variable x_var, or symbol fn applied to args. The symbol table is supplied by the caller.
struct Term {
  int var = -1;
  int fn = -1;
  std::vector<Term> args;

  static Term variable(int v) { return {v, -1, {}}; }
  static Term apply(int f, std::vector<Term> a) { return {-1, f, std::move(a)}; }
  bool is_var() const { return var >= 0; }

  friend bool operator==(const Term& a, const Term& b) { return a.var == b.var && a.fn == b.fn && a.args == b.args; }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.var != b.var) return a.var < b.var;
    if (a.fn != b.fn) return a.fn < b.fn;
    return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
  }
};

/// eq: equality (≈ in FOL, ≐ over multialgebras); incl: t > t′ (multialgebras only).
enum class Op { eq, rel, incl, neg, conj, disj, exists, forall };

struct Formula {
  Op op = Op::eq;
  int sym = -1;
  int var = -1;
  std::vector<Term> terms;
  std::vector<Formula> sub;

  bool is_atom() const { return op == Op::eq || op == Op::rel || op == Op::incl; }
  bool is_quantifier() const { return op == Op::exists || op == Op::forall; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.op == b.op && a.sym == b.sym && a.var == b.var && a.terms == b.terms && a.sub == b.sub;
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    if (a.op != b.op) return a.op < b.op;
    if (a.sym != b.sym) return a.sym < b.sym;
    if (a.var != b.var) return a.var < b.var;
    if (a.terms != b.terms)
      return std::lexicographical_compare(a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end());
    return std::lexicographical_compare(a.sub.begin(), a.sub.end(), b.sub.begin(), b.sub.end());
  }
};

inline Formula equals(Term a, Term b) { return {Op::eq, -1, -1, {std::move(a), std::move(b)}, {}}; }
inline Formula relation(int r, std::vector<Term> args) { return {Op::rel, r, -1, std::move(args), {}}; }
inline Formula includes(Term a, Term b) { return {Op::incl, -1, -1, {std::move(a), std::move(b)}, {}}; }
inline Formula negate(Formula a) { return {Op::neg, -1, -1, {}, {std::move(a)}}; }
inline Formula conj(Formula a, Formula b) { return {Op::conj, -1, -1, {}, {std::move(a), std::move(b)}}; }
inline Formula disj(Formula a, Formula b) { return {Op::disj, -1, -1, {}, {std::move(a), std::move(b)}}; }
inline Formula implies(Formula a, Formula b) { return disj(negate(std::move(a)), std::move(b)); }
inline Formula exists(int v, Formula a) { return {Op::exists, -1, v, {}, {std::move(a)}}; }
inline Formula forall(int v, Formula a) { return {Op::forall, -1, v, {}, {std::move(a)}}; }

/// Symbol names used for printing and parsing; term symbols are indexed like Term::fn.
struct Vocabulary {
  std::vector<Symbol> terms;
  std::vector<Symbol> relations;
  std::string eq = "≈";
  bool inclusion = false;
};

inline Vocabulary vocabulary(const FolSignature& s) { return {s.functions, s.relations, "≈", false}; }

inline std::string show(const Vocabulary& voc, const Term& t) {
  if (t.is_var()) return "x" + std::to_string(t.var);
  std::string out = voc.terms.at(t.fn).name;
  if (t.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? "," : "") + show(voc, t.args[i]);
  return out + ")";
}

namespace detail {
inline bool greedy(const Formula& f) {
  if (f.is_quantifier()) return true;
  if (f.op == Op::neg) return greedy(f.sub[0]);
  return false;
}
}  // namespace detail

/// Quantifier scope extends to the right; binary connectives are always parenthesized.
inline std::string show(const Vocabulary& voc, const Formula& f) {
  switch (f.op) {
    case Op::eq: return show(voc, f.terms[0]) + " " + voc.eq + " " + show(voc, f.terms[1]);
    case Op::incl: return show(voc, f.terms[0]) + " > " + show(voc, f.terms[1]);
    case Op::rel: {
      std::string out = voc.relations.at(f.sym).name;
      if (f.terms.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) out += (i ? "," : "") + show(voc, f.terms[i]);
      return out + ")";
    }
    case Op::neg: {
      const Formula& a = f.sub[0];
      if (a.op == Op::eq || a.op == Op::incl) return "¬(" + show(voc, a) + ")";
      return "¬" + show(voc, a);
    }
    case Op::conj:
    case Op::disj: {
      std::string left = show(voc, f.sub[0]);
      if (detail::greedy(f.sub[0])) left = "(" + left + ")";
      return "(" + left + (f.op == Op::conj ? " ∧ " : " ∨ ") + show(voc, f.sub[1]) + ")";
    }
    case Op::exists: return "∃x" + std::to_string(f.var) + "." + show(voc, f.sub[0]);
    case Op::forall: return "∀x" + std::to_string(f.var) + "." + show(voc, f.sub[0]);
  }
  return "?";
}

inline std::string show(const FolSignature& s, const Formula& f) { return show(vocabulary(s), f); }
inline std::string show(const FolSignature& s, const Term& t) { return show(vocabulary(s), t); }

/// Parses show's output. ASCII alternatives: ~ & | -> exists forall, and = for the equality sign.
inline Formula parse(const Vocabulary& voc, const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw StructuralError("formula '" + text + "' at " + std::to_string(pos) + ": " + why);
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto eat = [&](const std::string& tok) {
    skip();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  };
  auto expect = [&](const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  };
  auto ident = [&]() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
    if (start == pos) fail("expected an identifier");
    return text.substr(start, pos - start);
  };
  auto lookup = [](const std::vector<Symbol>& syms, const std::string& n) {
    for (std::size_t i = 0; i < syms.size(); ++i)
      if (syms[i].name == n) return static_cast<int>(i);
    return -1;
  };
  auto variable_number = [&](const std::string& n) {
    if (!looks_like_variable(n)) fail("'" + n + "' is not a variable");
    return std::stoi(n.substr(1));
  };

  std::function<Term()> term = [&]() -> Term {
    std::string n = ident();
    int f = lookup(voc.terms, n);
    if (f < 0) return Term::variable(variable_number(n));
    std::vector<Term> args;
    if (voc.terms[f].arity > 0) {
      expect("(");
      for (int i = 0; i < voc.terms[f].arity; ++i) {
        if (i) expect(",");
        args.push_back(term());
      }
      expect(")");
    }
    return Term::apply(f, std::move(args));
  };

  std::function<Formula()> formula;
  std::function<Formula()> unary = [&]() -> Formula {
    if (eat("¬") || eat("~")) return negate(unary());
    for (auto [tok, q] : {std::pair<std::string, Op>{"∃", Op::exists}, {"exists", Op::exists}, {"∀", Op::forall},
                          {"forall", Op::forall}}) {
      if (eat(tok)) {
        int v = variable_number(ident());
        eat(".");
        Formula body = formula();
        return q == Op::exists ? exists(v, std::move(body)) : forall(v, std::move(body));
      }
    }
    if (eat("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    skip();
    std::size_t save = pos;
    std::string n = ident();
    int r = lookup(voc.relations, n);
    if (r >= 0) {
      std::vector<Term> args;
      if (voc.relations[r].arity > 0) {
        expect("(");
        for (int i = 0; i < voc.relations[r].arity; ++i) {
          if (i) expect(",");
          args.push_back(term());
        }
        expect(")");
      }
      return relation(r, std::move(args));
    }
    pos = save;
    Term a = term();
    if (eat(voc.eq) || eat("=") || eat("≈") || eat("≐")) return equals(a, term());
    if (voc.inclusion && eat(">")) return includes(a, term());
    fail("expected an atom");
    return {};
  };
  std::function<Formula()> conjunction = [&]() -> Formula {
    Formula f = unary();
    while (eat("∧") || eat("&")) f = conj(std::move(f), unary());
    return f;
  };
  std::function<Formula()> disjunction = [&]() -> Formula {
    Formula f = conjunction();
    while (eat("∨") || eat("|")) f = disj(std::move(f), conjunction());
    return f;
  };
  formula = [&]() -> Formula {
    Formula f = disjunction();
    if (eat("→") || eat("->")) return implies(std::move(f), formula());
    return f;
  };

  Formula f = formula();
  skip();
  if (pos != text.size()) fail("trailing input");
  return f;
}

inline Formula parse(const FolSignature& s, const std::string& text) { return parse(vocabulary(s), text); }

inline void term_vars(const Term& t, std::set<int>& out) {
  if (t.is_var()) out.insert(t.var);
  for (const auto& a : t.args) term_vars(a, out);
}

inline std::set<int> free_vars(const Formula& f) {
  std::set<int> out;
  if (f.is_atom()) {
    for (const auto& t : f.terms) term_vars(t, out);
    return out;
  }
  for (const auto& s : f.sub) {
    auto inner = free_vars(s);
    out.insert(inner.begin(), inner.end());
  }
  if (f.is_quantifier()) out.erase(f.var);
  return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

inline int max_var(const Term& t) {
  int m = t.var;
  for (const auto& a : t.args) m = std::max(m, max_var(a));
  return m;
}

inline int max_var(const Formula& f) {
  int m = f.is_quantifier() ? f.var : -1;
  for (const auto& t : f.terms) m = std::max(m, max_var(t));
  for (const auto& s : f.sub) m = std::max(m, max_var(s));
  return m;
}

inline int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& s : f.sub) d = std::max(d, quantifier_depth(s));
  return f.is_quantifier() ? d + 1 : d;
}

inline bool quantifier_free(const Formula& f) { return quantifier_depth(f) == 0; }

inline Term substitute(const Term& t, int v, const Term& by) {
  if (t.is_var()) return t.var == v ? by : t;
  Term out = t;
  for (auto& a : out.args) a = substitute(a, v, by);
  return out;
}

/// φ[x_v := by]. Throws if a variable of `by` would be captured.
inline Formula substitute(const Formula& f, int v, const Term& by) {
  Formula out = f;
  if (f.is_atom()) {
    for (auto& t : out.terms) t = substitute(t, v, by);
    return out;
  }
  if (f.is_quantifier()) {
    if (f.var == v) return out;
    std::set<int> bv;
    term_vars(by, bv);
    if (bv.count(f.var) && free_vars(f.sub[0]).count(v))
      throw StructuralError("substitution would capture x" + std::to_string(f.var));
  }
  for (auto& s : out.sub) s = substitute(s, v, by);
  return out;
}

/// Renames variables by `ren` (free and bound alike); unmapped variables stay.
inline Term rename(const Term& t, const std::map<int, int>& ren) {
  if (t.is_var()) {
    auto it = ren.find(t.var);
    return it == ren.end() ? t : Term::variable(it->second);
  }
  Term out = t;
  for (auto& a : out.args) a = rename(a, ren);
  return out;
}

// ---------------------------------------------------------------------------
// Structures

/// Tables are indexed in mixed radix over the carrier, first argument most significant.
struct FolModel {
  std::vector<std::string> carrier;
  std::vector<std::vector<int>> functions;
  std::vector<Subset> relations;

  std::size_t size() const { return carrier.size(); }
  bool operator==(const FolModel&) const = default;
};

inline std::size_t power(std::size_t n, int k) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) out *= n;
  return out;
}

inline std::size_t tuple_index(std::size_t n, const std::vector<int>& args) {
  std::size_t idx = 0;
  for (int a : args) idx = idx * n + static_cast<std::size_t>(a);
  return idx;
}

inline std::vector<int> tuple_at(std::size_t n, int arity, std::size_t idx) {
  std::vector<int> out(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(idx % n);
    idx /= n;
  }
  return out;
}

inline std::string show_tuple(const std::vector<std::string>& names, const std::vector<int>& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + names.at(static_cast<std::size_t>(t[i]));
  return out + ")";
}

inline std::vector<std::string> numbered_carrier(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

inline Report validate_model(const FolSignature& s, const FolModel& m) {
  Report rep;
  const std::size_t n = m.size();
  if (n == 0) rep.structural("carrier", "empty carrier");
  if (m.functions.size() != s.functions.size()) rep.structural("functions", "one table per function symbol");
  if (m.relations.size() != s.relations.size()) rep.structural("relations", "one table per relation symbol");
  if (!rep.ok()) return rep;
  for (std::size_t f = 0; f < s.functions.size(); ++f) {
    if (m.functions[f].size() != power(n, s.functions[f].arity)) rep.structural(s.functions[f].name, "table is not total");
    for (int v : m.functions[f])
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        rep.structural(s.functions[f].name, "value outside the carrier");
        break;
      }
  }
  for (std::size_t r = 0; r < s.relations.size(); ++r)
    if (m.relations[r].size() != power(n, s.relations[r].arity)) rep.structural(s.relations[r].name, "table is not total");
  return rep;
}

inline int apply_function(const FolModel& m, int f, const std::vector<int>& args) {
  return m.functions[static_cast<std::size_t>(f)][tuple_index(m.size(), args)];
}

inline bool holds_relation(const FolModel& m, int r, const std::vector<int>& args) {
  return m.relations[static_cast<std::size_t>(r)].test(tuple_index(m.size(), args));
}

/// env[v] is the value of x_v, or -1 when unbound.
inline int eval_term(const FolModel& m, const Term& t, const std::vector<int>& env) {
  if (t.is_var()) {
    if (static_cast<std::size_t>(t.var) >= env.size() || env[static_cast<std::size_t>(t.var)] < 0)
      throw StructuralError("unbound variable x" + std::to_string(t.var));
    return env[static_cast<std::size_t>(t.var)];
  }
  std::vector<int> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(eval_term(m, a, env));
  return apply_function(m, t.fn, args);
}

inline bool fol_eval(const FolModel& m, const Formula& f, std::vector<int>& env) {
  switch (f.op) {
    case Op::eq: return eval_term(m, f.terms[0], env) == eval_term(m, f.terms[1], env);
    case Op::rel: {
      std::vector<int> args;
      args.reserve(f.terms.size());
      for (const auto& t : f.terms) args.push_back(eval_term(m, t, env));
      return holds_relation(m, f.sym, args);
    }
    case Op::incl: throw StructuralError("inclusion atom in a first-order formula");
    case Op::neg: return !fol_eval(m, f.sub[0], env);
    case Op::conj: return fol_eval(m, f.sub[0], env) && fol_eval(m, f.sub[1], env);
    case Op::disj: return fol_eval(m, f.sub[0], env) || fol_eval(m, f.sub[1], env);
    case Op::exists:
    case Op::forall: {
      const auto v = static_cast<std::size_t>(f.var);
      if (env.size() <= v) env.resize(v + 1, -1);
      const int saved = env[v];
      const bool want = f.op == Op::exists;
      bool result = !want;
      for (std::size_t a = 0; a < m.size(); ++a) {
        env[v] = static_cast<int>(a);
        if (fol_eval(m, f.sub[0], env) == want) {
          result = want;
          break;
        }
      }
      env[v] = saved;
      return result;
    }
  }
  return false;
}

inline bool fol_eval(const FolModel& m, const Formula& f, const std::vector<int>& env) {
  std::vector<int> e = env;
  e.resize(std::max<std::size_t>(e.size(), static_cast<std::size_t>(max_var(f) + 1)), -1);
  return fol_eval(m, f, e);
}

/// Truth of a sentence.
inline bool satisfies(const FolModel& m, const Formula& f) {
  std::vector<int> env(static_cast<std::size_t>(max_var(f) + 1), -1);
  return fol_eval(m, f, env);
}

/// Calls fn for every structure of the signature on carrier {0..n-1}.
inline void for_each_model(const FolSignature& s, std::size_t n, Guard& guard, const std::function<void(const FolModel&)>& fn) {
  FolModel m;
  m.carrier = numbered_carrier(n);
  double total = 1;
  for (const auto& f : s.functions) {
    m.functions.emplace_back(power(n, f.arity), 0);
    total *= std::pow(static_cast<double>(n), static_cast<double>(power(n, f.arity)));
  }
  for (const auto& r : s.relations) {
    m.relations.emplace_back(power(n, r.arity));
    total *= std::pow(2.0, static_cast<double>(power(n, r.arity)));
  }
  if (total > static_cast<double>(guard.limit() - guard.used())) throw Refusal("models > " + std::to_string(guard.limit()));
  guard.tick(static_cast<std::uint64_t>(total));
  // Odometer over all function cells, then all relation bitsets.
  std::function<void(std::size_t)> rel_step = [&](std::size_t r) {
    if (r == m.relations.size()) {
      fn(m);
      return;
    }
    const std::size_t cells = m.relations[r].size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
      m.relations[r] = Subset(cells, bits);
      rel_step(r + 1);
    }
  };
  std::function<void(std::size_t, std::size_t)> fn_step = [&](std::size_t f, std::size_t cell) {
    if (f == m.functions.size()) {
      rel_step(0);
      return;
    }
    if (cell == m.functions[f].size()) {
      fn_step(f + 1, 0);
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      m.functions[f][cell] = static_cast<int>(v);
      fn_step(f, cell + 1);
    }
  };
  fn_step(0, 0);
}

/// Function-preserving and relation-preserving map.
inline Report validate_homomorphism(const FolSignature& s, const Function& h, const FolModel& a, const FolModel& b) {
  Report rep;
  if (h.size() != a.size()) {
    rep.structural("h", "not total on the source carrier");
    return rep;
  }
  for (int v : h)
    if (v < 0 || static_cast<std::size_t>(v) >= b.size()) {
      rep.structural("h", "value outside the target carrier");
      return rep;
    }
  for (std::size_t f = 0; f < s.functions.size(); ++f)
    for (std::size_t i = 0; i < a.functions[f].size(); ++i) {
      auto args = tuple_at(a.size(), s.functions[f].arity, i);
      std::vector<int> mapped;
      for (int x : args) mapped.push_back(h[static_cast<std::size_t>(x)]);
      if (h[static_cast<std::size_t>(a.functions[f][i])] != apply_function(b, static_cast<int>(f), mapped))
        rep.violation("(" + s.functions[f].name + ", " + show_tuple(a.carrier, args) + ")", "h preserves the function");
    }
  for (std::size_t r = 0; r < s.relations.size(); ++r)
    for (std::size_t i = 0; i < a.relations[r].size(); ++i) {
      if (!a.relations[r].test(i)) continue;
      auto args = tuple_at(a.size(), s.relations[r].arity, i);
      std::vector<int> mapped;
      for (int x : args) mapped.push_back(h[static_cast<std::size_t>(x)]);
      if (!holds_relation(b, static_cast<int>(r), mapped))
        rep.violation("(" + s.relations[r].name + ", " + show_tuple(a.carrier, args) + ")", "h preserves the relation");
    }
  return rep;
}

inline bool closed_under_functions(const FolSignature& s, const FolModel& m, const Subset& x) {
  for (std::size_t f = 0; f < m.functions.size(); ++f) {
    const std::size_t cells = m.functions[f].size();
    const int arity = s.functions[f].arity;
    for (std::size_t i = 0; i < cells; ++i) {
      auto args = tuple_at(m.size(), arity, i);
      bool inside = std::all_of(args.begin(), args.end(), [&](int a) { return x.test(static_cast<std::size_t>(a)); });
      if (inside && !x.test(static_cast<std::size_t>(m.functions[f][i]))) return false;
    }
  }
  return true;
}

/// The substructure on a nonempty closed subset X, with its inclusion into m.
struct Substructure {
  FolModel model;
  Function inclusion;
};

inline Substructure substructure(const FolSignature& s, const FolModel& m, const Subset& x) {
  if (x.none()) throw StructuralError("substructure on the empty set");
  if (!closed_under_functions(s, m, x)) throw StructuralError("subset not closed under the functions");
  Substructure out;
  out.inclusion = subset_indices(x);
  std::vector<int> pos(m.size(), -1);
  for (std::size_t i = 0; i < out.inclusion.size(); ++i) {
    pos[static_cast<std::size_t>(out.inclusion[i])] = static_cast<int>(i);
    out.model.carrier.push_back(m.carrier[static_cast<std::size_t>(out.inclusion[i])]);
  }
  const std::size_t k = out.inclusion.size();
  for (std::size_t f = 0; f < s.functions.size(); ++f) {
    std::vector<int> table(power(k, s.functions[f].arity));
    for (std::size_t i = 0; i < table.size(); ++i) {
      auto args = tuple_at(k, s.functions[f].arity, i);
      for (auto& a : args) a = out.inclusion[static_cast<std::size_t>(a)];
      table[i] = pos[static_cast<std::size_t>(apply_function(m, static_cast<int>(f), args))];
    }
    out.model.functions.push_back(std::move(table));
  }
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    Subset table(power(k, s.relations[r].arity));
    for (std::size_t i = 0; i < table.size(); ++i) {
      auto args = tuple_at(k, s.relations[r].arity, i);
      for (auto& a : args) a = out.inclusion[static_cast<std::size_t>(a)];
      if (holds_relation(m, static_cast<int>(r), args)) table.set(i);
    }
    out.model.relations.push_back(std::move(table));
  }
  return out;
}

/// Signature morphism given by symbol positions; used here for inclusions.
struct SigMorphism {
  std::vector<int> functions;
  std::vector<int> relations;
  bool operator==(const SigMorphism&) const = default;
};

inline SigMorphism inclusion_morphism(const FolSignature& small, const FolSignature& big) {
  SigMorphism out;
  for (const auto& f : small.functions) {
    int i = big.function_index(f.name);
    if (i < 0 || big.functions[static_cast<std::size_t>(i)].arity != f.arity)
      throw StructuralError("signature inclusion misses " + f.name);
    out.functions.push_back(i);
  }
  for (const auto& r : small.relations) {
    int i = big.relation_index(r.name);
    if (i < 0 || big.relations[static_cast<std::size_t>(i)].arity != r.arity)
      throw StructuralError("signature inclusion misses " + r.name);
    out.relations.push_back(i);
  }
  return out;
}

inline FolModel reduct(const FolModel& m, const SigMorphism& tau) {
  FolModel out;
  out.carrier = m.carrier;
  for (int f : tau.functions) out.functions.push_back(m.functions.at(static_cast<std::size_t>(f)));
  for (int r : tau.relations) out.relations.push_back(m.relations.at(static_cast<std::size_t>(r)));
  return out;
}

inline Term translate(const SigMorphism& tau, const Term& t) {
  if (t.is_var()) return t;
  Term out = Term::apply(tau.functions.at(static_cast<std::size_t>(t.fn)), {});
  for (const auto& a : t.args) out.args.push_back(translate(tau, a));
  return out;
}

inline Formula translate(const SigMorphism& tau, const Formula& f) {
  Formula out = f;
  if (f.op == Op::rel) out.sym = tau.relations.at(static_cast<std::size_t>(f.sym));
  for (auto& t : out.terms) t = translate(tau, t);
  for (auto& s : out.sub) s = translate(tau, s);
  return out;
}

// ---------------------------------------------------------------------------
// Normal forms

/// Negation pushed to atoms; ∧/∨ and ∃/∀ dualized.
inline Formula nnf(const Formula& f, bool positive = true) {
  switch (f.op) {
    case Op::eq:
    case Op::rel:
    case Op::incl: return positive ? f : negate(f);
    case Op::neg: return nnf(f.sub[0], !positive);
    case Op::conj:
    case Op::disj: {
      const bool is_conj = (f.op == Op::conj) == positive;
      Formula a = nnf(f.sub[0], positive), b = nnf(f.sub[1], positive);
      return is_conj ? conj(std::move(a), std::move(b)) : disj(std::move(a), std::move(b));
    }
    case Op::exists:
    case Op::forall: {
      const bool is_ex = (f.op == Op::exists) == positive;
      Formula body = nnf(f.sub[0], positive);
      return is_ex ? exists(f.var, std::move(body)) : forall(f.var, std::move(body));
    }
  }
  return f;
}

namespace detail {

inline Formula rename_bound(const Formula& f, std::map<int, int> ren, int& next) {
  if (f.is_atom()) {
    Formula out = f;
    for (auto& t : out.terms) t = rename(t, ren);
    return out;
  }
  Formula out = f;
  if (f.is_quantifier()) {
    ren[f.var] = next;
    out.var = next++;
  }
  for (auto& s : out.sub) s = rename_bound(s, ren, next);
  return out;
}

inline Formula pull(const Formula& f, std::vector<std::pair<Op, int>>& prefix) {
  if (f.is_quantifier()) {
    prefix.emplace_back(f.op, f.var);
    return pull(f.sub[0], prefix);
  }
  if (f.op == Op::conj || f.op == Op::disj) {
    Formula a = pull(f.sub[0], prefix);
    Formula b = pull(f.sub[1], prefix);
    return f.op == Op::conj ? conj(std::move(a), std::move(b)) : disj(std::move(a), std::move(b));
  }
  return f;
}

}  // namespace detail

/// Prenex negation normal form. Free variables are kept; bound variables are renumbered in prefix
/// order to the smallest indices not free in f, so every quantifier binds a distinct variable.
inline Formula prenex_nnf(const Formula& f) {
  const auto free = free_vars(f);
  int next = max_var(f) + 1;
  Formula distinct = detail::rename_bound(nnf(f), {}, next);
  std::vector<std::pair<Op, int>> prefix;
  Formula matrix = detail::pull(distinct, prefix);
  std::map<int, int> ren;
  int v = 0;
  for (const auto& q : prefix) {
    while (free.count(v)) ++v;
    ren[q.second] = v++;
  }
  matrix = detail::rename_bound(matrix, ren, next);  // matrix is quantifier-free: pure renaming
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->first == Op::exists ? exists(ren[it->second], std::move(out)) : forall(ren[it->second], std::move(out));
  return out;
}

inline bool is_prenex_nnf(const Formula& f) {
  const Formula* cur = &f;
  while (cur->is_quantifier()) cur = &cur->sub[0];
  std::function<bool(const Formula&)> qf_nnf = [&](const Formula& g) -> bool {
    if (g.is_atom()) return true;
    if (g.op == Op::neg) return g.sub[0].is_atom();
    if (g.op == Op::conj || g.op == Op::disj) return qf_nnf(g.sub[0]) && qf_nnf(g.sub[1]);
    return false;
  };
  return qf_nnf(*cur);
}

// ---------------------------------------------------------------------------
// Bounded sentence universes

/// Terms of function depth ≤ 1 over x0..x_{k-1}.
inline std::vector<Term> shallow_terms(const FolSignature& s, int k) {
  std::vector<Term> out;
  for (int v = 0; v < k; ++v) out.push_back(Term::variable(v));
  std::vector<Term> vars = out;
  for (std::size_t f = 0; f < s.functions.size(); ++f) {
    const int a = s.functions[f].arity;
    for (std::size_t i = 0; i < power(static_cast<std::size_t>(k), a); ++i) {
      std::vector<Term> args;
      for (int x : tuple_at(static_cast<std::size_t>(k), a, i)) args.push_back(vars[static_cast<std::size_t>(x)]);
      out.push_back(Term::apply(static_cast<int>(f), std::move(args)));
    }
  }
  return out;
}

/// Sentences Q x0 … Q x_{k-1}. M for 1 ≤ k ≤ depth, where the matrix M is a literal or a conjunction
/// of two literals over shallow terms and mentions x_{k-1}; each sentence is followed by its negation.
inline std::vector<Formula> quantifier_depth_universe(const FolSignature& s, int depth, Guard& guard) {
  std::vector<Formula> out;
  for (int k = 1; k <= depth; ++k) {
    auto terms = shallow_terms(s, k);
    std::vector<Formula> atoms;
    for (std::size_t r = 0; r < s.relations.size(); ++r) {
      const int a = s.relations[r].arity;
      for (std::size_t i = 0; i < power(terms.size(), a); ++i) {
        std::vector<Term> args;
        for (int x : tuple_at(terms.size(), a, i)) args.push_back(terms[static_cast<std::size_t>(x)]);
        atoms.push_back(relation(static_cast<int>(r), std::move(args)));
      }
    }
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j) atoms.push_back(equals(terms[i], terms[j]));
    std::vector<Formula> lits;
    for (const auto& a : atoms) {
      lits.push_back(a);
      lits.push_back(negate(a));
    }
    std::vector<Formula> matrices = lits;
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j)
        if (!(lits[i] == negate(lits[j]) || lits[j] == negate(lits[i]))) matrices.push_back(conj(lits[i], lits[j]));
    for (const auto& mat : matrices) {
      if (!free_vars(mat).count(k - 1)) continue;
      for (std::size_t q = 0; q < (std::size_t{1} << k); ++q) {
        guard.tick(2);
        Formula f = mat;
        for (int v = k - 1; v >= 0; --v) f = (q >> v) & 1 ? forall(v, std::move(f)) : exists(v, std::move(f));
        out.push_back(f);
        out.push_back(negate(f));
      }
    }
  }
  return out;
}

/// The positions of universe sentences true in m.
inline std::vector<bool> bounded_theory(const FolModel& m, const std::vector<Formula>& universe) {
  std::vector<bool> out;
  out.reserve(universe.size());
  for (const auto& f : universe) out.push_back(satisfies(m, f));
  return out;
}

}  // namespace insfin::fol
