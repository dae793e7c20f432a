#pragma once

#include "insfin/instcore.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace insfin::prop {

struct Connective {
  std::string symbol;
  int arity = 0;
  bool operator==(const Connective&) const = default;
};

struct PropSignature {
  std::vector<Connective> connectives;

  int index(const std::string& sym) const {
    for (std::size_t i = 0; i < connectives.size(); ++i)
      if (connectives[i].symbol == sym) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const PropSignature&) const = default;
};

inline Report validate_signature(const PropSignature& s) {
  Report rep;
  std::set<std::string> seen;
  for (const auto& c : s.connectives) {
    if (c.arity < 0) rep.structural(c.symbol, "negative arity");
    if (c.symbol.empty() || !seen.insert(c.symbol).second) rep.structural(c.symbol, "connective symbols distinct");
    if (c.symbol[0] == 'x' || c.symbol == "(" || c.symbol == ")" || c.symbol == ",")
      rep.structural(c.symbol, "symbol clashes with formula syntax");
  }
  return rep;
}

/// Variable (op = -1, var = i) or a connective applied to arguments.
struct Formula {
  int op = -1;
  int var = 0;
  std::vector<Formula> args;

  static Formula variable(int i) { return {-1, i, {}}; }
  static Formula apply(int op, std::vector<Formula> args) { return {op, 0, std::move(args)}; }
  bool is_var() const { return op < 0; }

  int depth() const {
    int d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return is_var() ? 0 : d + 1;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.op == b.op && a.var == b.var && a.args == b.args;
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    if (a.op != b.op) return a.op < b.op;
    if (a.var != b.var) return a.var < b.var;
    return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
  }
};

inline std::string show(const PropSignature& s, const Formula& f) {
  if (f.is_var()) return "x" + std::to_string(f.var);
  const Connective& c = s.connectives.at(f.op);
  if (c.arity == 0) return c.symbol;
  if (c.arity == 1) return c.symbol + show(s, f.args[0]);
  if (c.arity == 2) return "(" + show(s, f.args[0]) + c.symbol + show(s, f.args[1]) + ")";
  std::string out = c.symbol + "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) out += (i ? "," : "") + show(s, f.args[i]);
  return out + ")";
}

/// Parses the syntax produced by show.
inline Formula parse(const PropSignature& s, const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> Formula {
    throw StructuralError("formula '" + text + "' at " + std::to_string(pos) + ": " + why);
  };
  auto symbol_here = [&]() -> int {
    int best = -1;
    std::size_t len = 0;
    for (std::size_t i = 0; i < s.connectives.size(); ++i) {
      const auto& sym = s.connectives[i].symbol;
      if (sym.size() > len && text.compare(pos, sym.size(), sym) == 0) {
        best = static_cast<int>(i);
        len = sym.size();
      }
    }
    return best;
  };
  auto skip = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  std::function<Formula()> term = [&]() -> Formula {
    skip();
    if (pos >= text.size()) return fail("unexpected end");
    if (text[pos] == 'x' && pos + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[pos + 1]))) {
      ++pos;
      int v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) v = v * 10 + (text[pos++] - '0');
      return Formula::variable(v);
    }
    if (text[pos] == '(') {
      ++pos;
      Formula a = term();
      skip();
      int op = symbol_here();
      if (op < 0 || s.connectives[op].arity != 2) return fail("expected a binary connective");
      pos += s.connectives[op].symbol.size();
      Formula b = term();
      skip();
      if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
      ++pos;
      return Formula::apply(op, {a, b});
    }
    int op = symbol_here();
    if (op < 0) return fail("unknown symbol");
    pos += s.connectives[op].symbol.size();
    const int n = s.connectives[op].arity;
    if (n == 0) return Formula::apply(op, {});
    if (n == 1) return Formula::apply(op, {term()});
    skip();
    if (pos >= text.size() || text[pos] != '(') return fail("expected '('");
    ++pos;
    std::vector<Formula> args;
    for (int i = 0; i < n; ++i) {
      if (i) {
        skip();
        if (pos >= text.size() || text[pos] != ',') return fail("expected ','");
        ++pos;
      }
      args.push_back(term());
    }
    skip();
    if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
    ++pos;
    return Formula::apply(op, std::move(args));
  };
  Formula f = term();
  skip();
  if (pos != text.size()) fail("trailing input");
  return f;
}

/// All formulas of depth ≤ k over x0..x_{n-1}, by depth, then connective, then arguments.
inline std::vector<Formula> universe(const PropSignature& s, int n_vars, int k, Guard& guard) {
  std::vector<Formula> out;
  std::set<Formula> seen;
  for (int i = 0; i < n_vars; ++i) {
    out.push_back(Formula::variable(i));
    seen.insert(out.back());
  }
  for (int d = 1; d <= k; ++d) {
    const std::vector<Formula> prev = out;
    for (std::size_t c = 0; c < s.connectives.size(); ++c) {
      const int n = s.connectives[c].arity;
      std::vector<std::size_t> idx(n, 0);
      if (n > 0 && prev.empty()) continue;
      while (true) {
        guard.tick();
        std::vector<Formula> args;
        for (int i = 0; i < n; ++i) args.push_back(prev[idx[i]]);
        Formula f = Formula::apply(static_cast<int>(c), std::move(args));
        if (seen.insert(f).second) out.push_back(std::move(f));
        int i = n - 1;
        while (i >= 0 && ++idx[i] == prev.size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return out;
}

inline int variable_bound(const Formula& f) {
  if (f.is_var()) return f.var + 1;
  int m = 0;
  for (const auto& a : f.args) m = std::max(m, variable_bound(a));
  return m;
}

/// Simultaneous substitution of xi by args[i].
inline Formula substitute(const Formula& f, const std::vector<Formula>& args) {
  if (f.is_var()) return args.at(f.var);
  Formula out{f.op, 0, {}};
  for (const auto& a : f.args) out.args.push_back(substitute(a, args));
  return out;
}

/// Per source connective c of arity n, a target formula over x0..x_{n-1}.
struct FlexMorphism {
  std::vector<Formula> targets;
  bool operator==(const FlexMorphism&) const = default;
};

inline Formula translate(const FlexMorphism& f, const Formula& phi) {
  if (phi.is_var()) return phi;
  std::vector<Formula> args;
  for (const auto& a : phi.args) args.push_back(translate(f, a));
  return substitute(f.targets.at(phi.op), args);
}

inline FlexMorphism identity_flex(const PropSignature& s) {
  FlexMorphism f;
  for (std::size_t c = 0; c < s.connectives.size(); ++c) {
    std::vector<Formula> vars;
    for (int i = 0; i < s.connectives[c].arity; ++i) vars.push_back(Formula::variable(i));
    f.targets.push_back(Formula::apply(static_cast<int>(c), vars));
  }
  return f;
}

/// g ∘ f.
inline FlexMorphism compose(const FlexMorphism& g, const FlexMorphism& f) {
  FlexMorphism out;
  for (const auto& t : f.targets) out.targets.push_back(translate(g, t));
  return out;
}

/// Strict morphisms send each connective to a single connective applied to x0..x_{n-1} in order.
inline bool is_strict(const FlexMorphism& f, const PropSignature& src) {
  for (std::size_t c = 0; c < f.targets.size(); ++c) {
    const Formula& t = f.targets[c];
    if (t.is_var() || static_cast<int>(t.args.size()) != src.connectives[c].arity) return false;
    for (std::size_t i = 0; i < t.args.size(); ++i)
      if (!t.args[i].is_var() || t.args[i].var != static_cast<int>(i)) return false;
  }
  return true;
}

inline Report validate_flex(const FlexMorphism& f, const PropSignature& src, const PropSignature& dst) {
  Report rep;
  if (f.targets.size() != src.connectives.size()) {
    rep.structural("flex morphism", "one target per connective");
    return rep;
  }
  std::function<bool(const Formula&)> well_formed = [&](const Formula& t) {
    if (t.is_var()) return t.var >= 0;
    if (t.op < 0 || t.op >= static_cast<int>(dst.connectives.size())) return false;
    if (static_cast<int>(t.args.size()) != dst.connectives[t.op].arity) return false;
    return std::all_of(t.args.begin(), t.args.end(), well_formed);
  };
  for (std::size_t c = 0; c < f.targets.size(); ++c) {
    if (!well_formed(f.targets[c])) rep.structural(src.connectives[c].symbol, "target not a formula of the target signature");
    else if (variable_bound(f.targets[c]) > src.connectives[c].arity)
      rep.structural(src.connectives[c].symbol, "target uses a variable beyond the arity");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Matrices and consequence

/// A finite algebra with designated values; ops[c] is indexed in mixed radix, first argument most significant.
struct Matrix {
  std::vector<std::string> carrier;
  std::vector<std::vector<int>> ops;
  Subset designated;

  bool operator==(const Matrix& o) const {
    return carrier == o.carrier && ops == o.ops && designated == o.designated;
  }
};

inline Report validate_matrix(const Matrix& m, const PropSignature& s) {
  Report rep;
  const std::size_t n = m.carrier.size();
  if (m.designated.size() != n) rep.structural("designated", "not a subset of the carrier");
  if (m.ops.size() != s.connectives.size()) {
    rep.structural("ops", "one table per connective");
    return rep;
  }
  for (std::size_t c = 0; c < m.ops.size(); ++c) {
    std::size_t want = 1;
    for (int i = 0; i < s.connectives[c].arity; ++i) want *= n;
    if (m.ops[c].size() != want) rep.structural(s.connectives[c].symbol, "operation table is not total");
    for (int v : m.ops[c])
      if (v < 0 || static_cast<std::size_t>(v) >= n) rep.structural(s.connectives[c].symbol, "value outside the carrier");
  }
  return rep;
}

inline int apply_op(const Matrix& m, int c, const std::vector<int>& args) {
  std::size_t idx = 0;
  for (int a : args) idx = idx * m.carrier.size() + a;
  return m.ops[c][idx];
}

inline int eval(const Matrix& m, const Formula& f, const std::vector<int>& v) {
  if (f.is_var()) return v.at(f.var);
  std::vector<int> args;
  for (const auto& a : f.args) args.push_back(eval(m, a, v));
  return apply_op(m, f.op, args);
}

inline void for_each_valuation(std::size_t carrier, int n_vars, const std::function<void(const std::vector<int>&)>& fn) {
  if (carrier == 0 && n_vars > 0) return;
  std::vector<int> v(n_vars, 0);
  while (true) {
    fn(v);
    int i = n_vars - 1;
    while (i >= 0 && ++v[i] == static_cast<int>(carrier)) v[i--] = 0;
    if (i < 0) break;
  }
}

struct Logic {
  std::string name;
  PropSignature signature;
  std::vector<Matrix> semantics;
  int n_vars = 2;
  int depth = 2;
};

inline Report validate_logic(const Logic& l) {
  Report rep = validate_signature(l.signature);
  if (l.semantics.empty()) rep.structural(l.name, "semantics nonempty");
  for (std::size_t i = 0; i < l.semantics.size(); ++i)
    rep.merge(validate_matrix(l.semantics[i], l.signature), l.name + " matrix " + std::to_string(i));
  if (l.n_vars < 0 || l.depth < 0) rep.structural(l.name, "bounds nonnegative");
  return rep;
}

/// Γ ⊢ φ: every matrix and valuation designating all of Γ designates φ.
inline bool consequence(const Logic& l, const std::vector<Formula>& gamma, const Formula& phi) {
  bool ok = true;
  for (const auto& m : l.semantics)
    for_each_valuation(m.carrier.size(), l.n_vars, [&](const std::vector<int>& v) {
      if (!ok) return;
      for (const auto& g : gamma)
        if (!m.designated.test(eval(m, g, v))) return;
      if (!m.designated.test(eval(m, phi, v))) ok = false;
    });
  return ok;
}

/// Bounded universe with, per (matrix, valuation), the set of designated formulas.
struct BoundedLogic {
  Logic logic;
  std::vector<Formula> forms;
  std::vector<std::string> names;
  std::vector<Subset> rows;

  int index(const Formula& f) const {
    auto it = std::find(forms.begin(), forms.end(), f);
    return it == forms.end() ? -1 : static_cast<int>(it - forms.begin());
  }
  ClosureOp closure() const { return ClosureOp::generated(forms.size(), rows); }
};

inline Subset designated_row(const Matrix& m, const std::vector<Formula>& forms, const std::vector<int>& v,
                             const Subset& filter) {
  Subset row(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i)
    if (filter.test(eval(m, forms[i], v))) row.set(i);
  return row;
}

inline BoundedLogic bound(const Logic& l, Guard& guard) {
  Report r = validate_logic(l);
  if (!r.ok()) throw StructuralError("logic " + l.name + ": " + r.items.front().location + ": " + r.items.front().law);
  BoundedLogic b{l, universe(l.signature, l.n_vars, l.depth, guard), {}, {}};
  for (const auto& f : b.forms) b.names.push_back(show(l.signature, f));
  std::set<Subset> rows;
  for (const auto& m : l.semantics)
    for_each_valuation(m.carrier.size(), l.n_vars, [&](const std::vector<int>& v) {
      guard.tick(b.forms.size());
      rows.insert(designated_row(m, b.forms, v, m.designated));
    });
  b.rows.assign(rows.begin(), rows.end());
  return b;
}

struct FilterWitness {
  std::vector<Formula> gamma;
  Formula phi;
  std::vector<int> valuation;
};

/// F is an l-filter of M on the bounded universe: for each valuation v the designated set
/// T_v = {ψ : v(ψ) ∈ F} is closed under the logic's consequence.
inline std::optional<FilterWitness> lfilter_witness(const BoundedLogic& b, const Matrix& algebra, const Subset& F) {
  ClosureOp c = b.closure();
  std::optional<FilterWitness> out;
  for_each_valuation(algebra.carrier.size(), b.logic.n_vars, [&](const std::vector<int>& v) {
    if (out) return;
    Subset t = designated_row(algebra, b.forms, v, F);
    Subset ct = c.close(t);
    if (ct.is_subset_of(t)) return;
    const int phi = static_cast<int>((ct - t).find_first());
    // prefer a small premise set
    std::vector<int> in_t = subset_indices(t);
    std::vector<Formula> gamma;
    const std::size_t n = b.forms.size();
    bool found = c.close(Subset(n)).test(phi);
    for (std::size_t i = 0; !found && i < in_t.size(); ++i)
      if (c.close(subset_of_indices(n, {in_t[i]})).test(phi)) {
        gamma = {b.forms[in_t[i]]};
        found = true;
      }
    for (std::size_t i = 0; !found && i < in_t.size(); ++i)
      for (std::size_t j = i + 1; !found && j < in_t.size(); ++j)
        if (c.close(subset_of_indices(n, {in_t[i], in_t[j]})).test(phi)) {
          gamma = {b.forms[in_t[i]], b.forms[in_t[j]]};
          found = true;
        }
    if (!found)
      for (int i : in_t) gamma.push_back(b.forms[i]);
    out = FilterWitness{gamma, b.forms[phi], v};
  });
  return out;
}

inline bool is_lfilter(const BoundedLogic& b, const Matrix& algebra, const Subset& F) {
  return !lfilter_witness(b, algebra, F).has_value();
}

inline bool is_lfilter(const Logic& l, const Matrix& algebra, const Subset& F) {
  Guard g;
  return is_lfilter(bound(l, g), algebra, F);
}

// ---------------------------------------------------------------------------
// Categories of logics

struct FlexArrow {
  std::string name;
  int src = 0;
  int dst = 0;
  FlexMorphism map;
};

struct LogicCategory {
  std::vector<BoundedLogic> logics;
  CatRef sig;
  std::vector<FlexMorphism> maps;  // per arrow of sig
};

/// Closes the given arrows under composition; arrows with equal data are identified.
inline LogicCategory logic_category(const std::vector<Logic>& logics, const std::vector<FlexArrow>& arrows,
                                    Guard& guard) {
  LogicCategory out;
  for (const auto& l : logics) out.logics.push_back(bound(l, guard));
  std::vector<FlexArrow> all;
  for (std::size_t i = 0; i < logics.size(); ++i)
    all.push_back({"id_" + logics[i].name, static_cast<int>(i), static_cast<int>(i), identity_flex(logics[i].signature)});
  auto find = [&](int s, int d, const FlexMorphism& m) {
    for (std::size_t k = 0; k < all.size(); ++k)
      if (all[k].src == s && all[k].dst == d && all[k].map == m) return static_cast<int>(k);
    return -1;
  };
  for (const auto& a : arrows) {
    if (a.src < 0 || a.dst < 0 || a.src >= static_cast<int>(logics.size()) || a.dst >= static_cast<int>(logics.size()))
      throw StructuralError("arrow " + a.name + ": unknown logic");
    Report r = validate_flex(a.map, logics[a.src].signature, logics[a.dst].signature);
    if (!r.ok()) throw StructuralError("arrow " + a.name + ": " + r.items.front().location + ": " + r.items.front().law);
    if (find(a.src, a.dst, a.map) < 0) all.push_back(a);
  }
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = all.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (all[i].dst == all[j].src) {
          guard.tick();
          FlexMorphism c = compose(all[j].map, all[i].map);
          if (find(all[i].src, all[j].dst, c) < 0) {
            all.push_back({all[j].name + "." + all[i].name, all[i].src, all[j].dst, c});
            changed = true;
          }
        }
  }
  CategoryBuilder b;
  for (const auto& l : logics) b.object(l.name);
  for (const auto& a : all) b.arrow(a.name, logics[a.src].name, logics[a.dst].name);
  for (std::size_t i = 0; i < logics.size(); ++i) b.identity(logics[i].name, all[i].name);
  for (const auto& f : all)
    for (const auto& g : all)
      if (f.dst == g.src) b.compose(g.name, f.name, all[find(f.src, g.dst, compose(g.map, f.map))].name);
  out.sig = share(b.build());
  out.maps.resize(out.sig->n_arr());
  for (const auto& a : all) out.maps[out.sig->arrow_index(a.name)] = a.map;
  return out;
}

/// Sen(f) on the bounded universes; a translation leaving the target universe is an error.
inline Function sentence_map(const LogicCategory& lc, int arrow) {
  const FinCat& S = *lc.sig;
  const BoundedLogic& from = lc.logics[S.src(arrow)];
  const BoundedLogic& to = lc.logics[S.dst(arrow)];
  Function fn;
  for (const auto& f : from.forms) {
    int i = to.index(translate(lc.maps[arrow], f));
    if (i < 0)
      throw StructuralError("arrow " + S.arrows[arrow].id + ": translation of " + from.names[fn.size()] +
                            " leaves the bounded universe");
    fn.push_back(i);
  }
  return fn;
}

/// J_f over the finite category of logics: Sen(l) the bounded universe, C_l(Γ) = {φ : Γ ⊢_l φ}.
inline PiInstitution build_Jf(const std::vector<Logic>& logics, const std::vector<FlexArrow>& arrows, Guard& guard) {
  LogicCategory lc = logic_category(logics, arrows, guard);
  const FinCat& S = *lc.sig;
  PiInstitution J{lc.sig, SetFunctor{lc.sig, {}, {}, Variance::covariant}, {}};
  for (const auto& b : lc.logics) {
    J.sen.carriers.push_back(b.names);
    J.closures.push_back(b.closure());
  }
  for (int h = 0; h < S.n_arr(); ++h) J.sen.fmap.push_back(sentence_map(lc, h));
  for (int h = 0; h < S.n_arr(); ++h) {
    auto v = translation_violations(J.closures[S.src(h)], J.closures[S.dst(h)], J.sen.fmap[h]);
    if (!v.empty())
      throw StructuralError("arrow " + S.arrows[h].id + " is not a translation: " +
                            show_subset(v.front().gamma, J.sen.carriers[S.src(h)]) + " |- " +
                            J.sen.carriers[S.src(h)][v.front().phi]);
  }
  return J;
}

// ---------------------------------------------------------------------------
// Matrix institution

struct MatrixModel {
  Matrix algebra;  // designated values of the algebra are ignored
  Subset filter;
};

/// f*(M'): each source connective c is interpreted by the term f(c) evaluated in M'.
inline Matrix reduct(const FlexMorphism& f, const PropSignature& src, const Matrix& target) {
  Matrix out{target.carrier, {}, target.designated};
  for (std::size_t c = 0; c < src.connectives.size(); ++c) {
    const int n = src.connectives[c].arity;
    std::vector<int> table;
    for_each_valuation(target.carrier.size(), n, [&](const std::vector<int>& v) {
      table.push_back(eval(target, f.targets[c], v));
    });
    out.ops.push_back(table);
  }
  return out;
}

/// Strict homomorphisms h : M → N with h^{-1}[F_N] = F_M.
inline std::vector<Function> matrix_homs(const PropSignature& s, const MatrixModel& a, const MatrixModel& b, Guard& guard) {
  std::vector<Function> out;
  for_each_function(a.algebra.carrier.size(), b.algebra.carrier.size(), [&](const Function& h) {
    guard.tick();
    if (preimage(h, b.filter) != a.filter) return true;
    for (std::size_t c = 0; c < s.connectives.size(); ++c) {
      bool ok = true;
      for_each_valuation(a.algebra.carrier.size(), s.connectives[c].arity, [&](const std::vector<int>& v) {
        if (!ok) return;
        std::vector<int> hv;
        for (int x : v) hv.push_back(h[x]);
        ok = h[apply_op(a.algebra, static_cast<int>(c), v)] == apply_op(b.algebra, static_cast<int>(c), hv);
      });
      if (!ok) return true;
    }
    out.push_back(h);
    return true;
  });
  return out;
}

struct MatrixSentence {
  Subset gamma;  // over the bounded universe
  int phi = 0;
};

inline std::string show_sentence(const BoundedLogic& b, const MatrixSentence& s) {
  return show_subset(s.gamma, b.names) + " |- " + b.names[s.phi];
}

struct MatrixInstitution {
  Institution institution;
  LogicCategory logics;
  std::vector<std::vector<MatrixSentence>> sentences;
  std::vector<std::vector<MatrixModel>> pools;  // after closing under reducts
};

/// Sentences ⟨Γ, φ⟩ with |Γ| ≤ max_premises; models the pool entries and their reducts with strict
/// matrix homomorphisms between them.
inline MatrixInstitution build_matrix_institution(const std::vector<Logic>& logics, const std::vector<FlexArrow>& arrows,
                                                  const std::vector<std::vector<MatrixModel>>& pool,
                                                  std::size_t max_premises, Guard& guard) {
  MatrixInstitution out{{}, logic_category(logics, arrows, guard), {}, pool};
  const LogicCategory& lc = out.logics;
  const FinCat& S = *lc.sig;
  if (pool.size() != logics.size()) throw StructuralError("one model pool per logic");
  for (std::size_t l = 0; l < logics.size(); ++l)
    for (std::size_t i = 0; i < pool[l].size(); ++i) {
      const auto& m = pool[l][i];
      Report r = validate_matrix(m.algebra, logics[l].signature);
      if (!r.ok() || m.filter.size() != m.algebra.carrier.size())
        throw StructuralError("pool entry " + logics[l].name + "#" + std::to_string(i) + " is not a matrix");
      if (!is_lfilter(lc.logics[l], m.algebra, m.filter))
        throw StructuralError("pool entry " + logics[l].name + "#" + std::to_string(i) + " is not an l-filter");
    }
  // close pools under reducts
  auto same_model = [](const MatrixModel& a, const MatrixModel& b) {
    return a.algebra.carrier == b.algebra.carrier && a.algebra.ops == b.algebra.ops && a.filter == b.filter;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (int h = 0; h < S.n_arr(); ++h) {
      const int a = S.src(h), b = S.dst(h);
      for (std::size_t i = 0; i < out.pools[b].size(); ++i) {
        MatrixModel r{reduct(lc.maps[h], logics[a].signature, out.pools[b][i].algebra), out.pools[b][i].filter};
        bool present = false;
        for (const auto& m : out.pools[a]) present |= same_model(m, r);
        if (!present) {
          out.pools[a].push_back(r);
          changed = true;
        }
      }
    }
  }
  Institution& I = out.institution;
  I.sig = lc.sig;
  I.sen = SetFunctor{lc.sig, {}, {}, Variance::covariant};
  for (std::size_t l = 0; l < logics.size(); ++l) {
    const BoundedLogic& b = lc.logics[l];
    const std::size_t n = b.forms.size();
    std::vector<MatrixSentence> sens;
    std::vector<Subset> gammas{Subset(n)};
    if (max_premises >= 1)
      for (std::size_t i = 0; i < n; ++i) gammas.push_back(subset_of_indices(n, {static_cast<int>(i)}));
    if (max_premises >= 2)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) gammas.push_back(subset_of_indices(n, {static_cast<int>(i), static_cast<int>(j)}));
    if (max_premises > 2) throw Refusal("premise bound above 2");
    for (const auto& g : gammas)
      for (std::size_t p = 0; p < n; ++p) sens.push_back({g, static_cast<int>(p)});
    std::vector<std::string> names;
    for (const auto& s : sens) names.push_back(show_sentence(b, s));
    guard.tick(sens.size());
    I.sen.carriers.push_back(names);
    out.sentences.push_back(std::move(sens));

    // models and their satisfaction rows
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < out.pools[l].size(); ++i) ids.push_back(logics[l].name + "#" + std::to_string(i));
    CategoryBuilder mb;
    for (const auto& id : ids) mb.object(id);
    std::vector<std::vector<std::vector<Function>>> homs(out.pools[l].size());
    for (std::size_t i = 0; i < out.pools[l].size(); ++i)
      for (std::size_t j = 0; j < out.pools[l].size(); ++j) {
        homs[i].push_back(matrix_homs(logics[l].signature, out.pools[l][i], out.pools[l][j], guard));
        for (std::size_t k = 0; k < homs[i][j].size(); ++k)
          mb.arrow("h" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k), ids[i], ids[j]);
      }
    auto hom_id = [&](std::size_t i, std::size_t j, const Function& h) {
      auto& v = homs[i][j];
      return "h" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(std::find(v.begin(), v.end(), h) - v.begin());
    };
    for (std::size_t i = 0; i < out.pools[l].size(); ++i)
      mb.identity(ids[i], hom_id(i, i, identity_function(out.pools[l][i].algebra.carrier.size())));
    for (std::size_t i = 0; i < homs.size(); ++i)
      for (std::size_t j = 0; j < homs.size(); ++j)
        for (std::size_t k = 0; k < homs.size(); ++k)
          for (const auto& f : homs[i][j])
            for (const auto& g : homs[j][k]) mb.compose(hom_id(j, k, g), hom_id(i, j, f), hom_id(i, k, compose_fn(g, f)));
    I.mod.push_back(share(mb.build()));
    std::vector<Subset> rows;
    for (const auto& m : out.pools[l]) {
      Subset row(out.sentences[l].size());
      std::vector<Subset> tv;
      for_each_valuation(m.algebra.carrier.size(), logics[l].n_vars,
                         [&](const std::vector<int>& v) { tv.push_back(designated_row(m.algebra, b.forms, v, m.filter)); });
      for (std::size_t s = 0; s < out.sentences[l].size(); ++s) {
        const auto& sen = out.sentences[l][s];
        bool sat = true;
        for (const auto& t : tv)
          if (sen.gamma.is_subset_of(t) && !t.test(sen.phi)) sat = false;
        if (sat) row.set(s);
      }
      rows.push_back(row);
    }
    I.sat.push_back(rows);
  }
  for (int h = 0; h < S.n_arr(); ++h) {
    const int a = S.src(h), b = S.dst(h);
    Function forms = sentence_map(lc, h);
    Function fn;
    for (const auto& s : out.sentences[a]) {
      MatrixSentence t{Subset(lc.logics[b].forms.size()), forms[s.phi]};
      for (int g : subset_indices(s.gamma)) t.gamma.set(forms[g]);
      const auto& v = out.sentences[b];
      auto it = std::find_if(v.begin(), v.end(), [&](const MatrixSentence& x) { return x.gamma == t.gamma && x.phi == t.phi; });
      fn.push_back(static_cast<int>(it - v.begin()));
    }
    I.sen.fmap.push_back(fn);
    // Mod(h) : Mod(b) → Mod(a), ⟨M', F'⟩ ↦ ⟨f*(M'), F'⟩, homomorphisms unchanged
    Functor F{I.mod[b], I.mod[a], {}, {}, Variance::covariant};
    for (std::size_t i = 0; i < out.pools[b].size(); ++i) {
      MatrixModel r{reduct(lc.maps[h], logics[a].signature, out.pools[b][i].algebra), out.pools[b][i].filter};
      for (std::size_t k = 0; k < out.pools[a].size(); ++k)
        if (same_model(out.pools[a][k], r)) {
          F.omap.push_back(static_cast<int>(k));
          break;
        }
    }
    for (const auto& ar : I.mod[b]->arrows) {
      // decode h<i>_<j>_<k>
      std::size_t u1 = ar.id.find('_'), u2 = ar.id.rfind('_');
      int i = std::stoi(ar.id.substr(1, u1 - 1)), j = std::stoi(ar.id.substr(u1 + 1, u2 - u1 - 1));
      int k = std::stoi(ar.id.substr(u2 + 1));
      const Function hfun = matrix_homs(logics[b].signature, out.pools[b][i], out.pools[b][j], guard).at(k);
      auto hs = matrix_homs(logics[a].signature, out.pools[a][F.omap[i]], out.pools[a][F.omap[j]], guard);
      auto it = std::find(hs.begin(), hs.end(), hfun);
      if (it == hs.end()) throw StructuralError("reduct does not preserve a matrix homomorphism");
      F.amap.push_back(I.mod[a]->arrow_index("h" + std::to_string(F.omap[i]) + "_" + std::to_string(F.omap[j]) + "_" +
                                             std::to_string(it - hs.begin())));
    }
    I.mod_map.push_back(F);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

inline PropSignature classical_signature() { return {{{"¬", 1}, {"∧", 2}}}; }

/// Two-element Boolean matrix over ¬, ∧ with 1 designated.
inline Matrix b2() { return {{"0", "1"}, {{1, 0}, {0, 0, 0, 1}}, subset_of_indices(2, {1})}; }

inline Logic classical_logic(int n_vars = 2, int depth = 2) { return {"CPL", classical_signature(), {b2()}, n_vars, depth}; }

/// The ∧-fragment, sound and complete for the two-element semilattice.
inline Logic conjunction_logic(int n_vars = 2, int depth = 2) {
  return {"AND", {{{"∧", 2}}}, {{{"0", "1"}, {{0, 0, 0, 1}}, subset_of_indices(2, {1})}}, n_vars, depth};
}

/// AND → CPL sending ∧ to ∧.
inline FlexArrow conjunction_inclusion() { return {"inc", 0, 1, {{Formula::apply(1, {Formula::variable(0), Formula::variable(1)})}}}; }

}  // namespace insfin::prop
