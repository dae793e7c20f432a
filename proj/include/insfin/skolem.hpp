#pragma once

// Skolem expansions over bounded sentence universes, model skolemization and
// hulls, the multialgebra-to-FOL morphism with flattening, and the transport
// of skolemization along that morphism.

#include "common.hpp"
#include "fol.hpp"
#include "multialg.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace insfin::sk {

using fol::FolModel;
using fol::FolSignature;
using fol::Formula;
using fol::Op;
using fol::Term;

struct SkolemFn {
  std::string name;
  std::vector<int> free_vars;  // arguments, in increasing order
  int var = -1;                // the existential variable y
  Formula body;                // ψ(x̄, y)
  Formula existential;         // ∃y ψ
  std::string key;             // canonical form of ∃y ψ
};

struct SkolemData {
  FolSignature base_sig;
  FolSignature skolem_sig;  // base functions first, then one per SkolemFn
  std::vector<SkolemFn> fns;
  std::vector<Formula> theory;  // theory[j] is the axiom of fns[j]
  fol::SigMorphism tau;
  std::vector<Formula> universe;

  int function_of(std::size_t j) const { return static_cast<int>(base_sig.functions.size() + j); }
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Free variables become x0.. in increasing order, bound variables continue in traversal order.
inline std::string canonical_key(const FolSignature& s, const Formula& f) {
  std::map<int, int> ren;
  int next = 0;
  for (int v : fol::free_vars(f)) ren[v] = next++;
  return fol::show(s, fol::detail::rename_bound(f, ren, next));
}

/// One function symbol per ∃ position of each prenex-normalized universe sentence; identical
/// canonical forms share a symbol.
inline SkolemData skolemize(const FolSignature& sig, const std::vector<Formula>& universe, Guard& guard) {
  if (!fol::validate_signature(sig).ok()) throw StructuralError("skolemize: invalid signature");
  SkolemData sd;
  sd.base_sig = sig;
  sd.skolem_sig = sig;
  sd.universe = universe;
  sd.tau = fol::inclusion_morphism(sig, sig);
  std::map<std::string, std::size_t> by_key;
  std::set<std::string> names;
  for (const auto& f : sig.functions) names.insert(f.name);
  for (const auto& r : sig.relations) names.insert(r.name);
  for (const auto& phi : universe) {
    guard.tick();
    if (!fol::is_sentence(phi)) throw StructuralError("skolemize: universe entry is not a sentence: " + fol::show(sig, phi));
    const Formula p = fol::prenex_nnf(phi);
    for (const Formula* cur = &p; cur->is_quantifier(); cur = &cur->sub[0]) {
      if (cur->op != Op::exists) continue;
      const std::string key = canonical_key(sig, *cur);
      if (by_key.count(key)) continue;
      guard.tick();
      SkolemFn fn;
      fn.key = key;
      fn.var = cur->var;
      fn.body = cur->sub[0];
      fn.existential = *cur;
      for (int v : fol::free_vars(*cur)) fn.free_vars.push_back(v);
      char buf[32];
      std::snprintf(buf, sizeof buf, "F_%08llx", static_cast<unsigned long long>(fnv1a(key) & 0xffffffffull));
      fn.name = buf;
      for (int k = 2; names.count(fn.name); ++k) fn.name = std::string(buf) + "_" + std::to_string(k);
      names.insert(fn.name);

      std::vector<Term> args;
      for (int v : fn.free_vars) args.push_back(Term::variable(v));
      const int index = static_cast<int>(sd.skolem_sig.functions.size());
      Formula axiom = fol::implies(fn.existential, fol::substitute(fn.body, fn.var, Term::apply(index, args)));
      for (auto it = fn.free_vars.rbegin(); it != fn.free_vars.rend(); ++it) axiom = fol::forall(*it, std::move(axiom));

      sd.skolem_sig.functions.push_back({fn.name, static_cast<int>(fn.free_vars.size())});
      sd.theory.push_back(std::move(axiom));
      by_key[key] = sd.fns.size();
      sd.fns.push_back(std::move(fn));
    }
  }
  return sd;
}

/// Each skolem function picks the least witness, or the least element when there is none.
inline FolModel skolemize_model(const FolModel& m, const SkolemData& sd) {
  if (m.size() == 0) throw Refusal("empty carrier: no witness to choose");
  if (!fol::validate_model(sd.base_sig, m).ok()) throw StructuralError("skolemize_model: model does not match the base signature");
  FolModel out = m;
  const std::size_t n = m.size();
  for (const auto& fn : sd.fns) {
    const int arity = static_cast<int>(fn.free_vars.size());
    std::vector<int> table(fol::power(n, arity), 0);
    std::vector<int> env(static_cast<std::size_t>(std::max(fol::max_var(fn.body), fn.var) + 1), -1);
    for (std::size_t c = 0; c < table.size(); ++c) {
      const auto args = fol::tuple_at(n, arity, c);
      for (int i = 0; i < arity; ++i) env[static_cast<std::size_t>(fn.free_vars[static_cast<std::size_t>(i)])] = args[static_cast<std::size_t>(i)];
      for (std::size_t y = 0; y < n; ++y) {
        env[static_cast<std::size_t>(fn.var)] = static_cast<int>(y);
        if (fol::fol_eval(m, fn.body, env)) {
          table[c] = static_cast<int>(y);
          break;
        }
      }
    }
    out.functions.push_back(std::move(table));
  }
  return out;
}

/// Violations name the skolem function whose axiom fails.
inline Report check_theory(const FolModel& ms, const SkolemData& sd) {
  Report rep;
  for (std::size_t j = 0; j < sd.theory.size(); ++j)
    if (!fol::satisfies(ms, sd.theory[j])) rep.violation(sd.fns[j].name, "skolem axiom", {fol::show(sd.skolem_sig, sd.theory[j])});
  return rep;
}

inline bool satisfies_theory(const FolModel& ms, const SkolemData& sd) {
  for (const auto& ax : sd.theory)
    if (!fol::satisfies(ms, ax)) return false;
  return true;
}

/// Closure of `seed` under every function of the signature.
inline Subset function_closure(const FolSignature& s, const FolModel& m, Subset seed) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < s.functions.size(); ++f) {
      const int arity = s.functions[f].arity;
      for (std::size_t c = 0; c < m.functions[f].size(); ++c) {
        const auto args = fol::tuple_at(m.size(), arity, c);
        bool inside = true;
        for (int a : args) inside = inside && seed.test(static_cast<std::size_t>(a));
        const auto v = static_cast<std::size_t>(m.functions[f][c]);
        if (inside && !seed.test(v)) {
          seed.set(v);
          changed = true;
        }
      }
    }
  }
  return seed;
}

/// Smallest substructure containing X (the least element when X is empty).
inline fol::Substructure skolem_hull(const SkolemData& sd, const FolModel& ms, const Subset& x) {
  if (ms.size() == 0) throw StructuralError("skolem_hull: empty carrier");
  Subset seed = x;
  if (seed.none()) seed.set(0);
  return fol::substructure(sd.skolem_sig, ms, function_closure(sd.skolem_sig, ms, seed));
}

/// Nonempty subsets closed under the functions.
inline std::vector<Subset> closed_subsets(const FolSignature& s, const FolModel& m) {
  if (m.size() > 20) throw Refusal("closed subsets of a carrier > 20");
  std::vector<Subset> out;
  for_each_subset(m.size(), [&](const Subset& x) {
    if (x.any() && fol::closed_under_functions(s, m, x)) out.push_back(x);
  });
  return out;
}

inline std::vector<std::string> theory_difference(const FolSignature& s, const std::vector<Formula>& universe,
                                                  const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < universe.size() && out.size() < 3; ++i)
    if (a[i] != b[i]) out.push_back(fol::show(s, universe[i]));
  return out;
}

struct AxiomCounts {
  std::size_t models = 0;
  std::size_t inclusion_pairs = 0;
  std::size_t hulls = 0;
};

/// Brute-forces the skolemization axioms over all base models with carriers 1..max_size:
/// skolemized models reduct to their input and satisfy the theory; skolemization inclusions
/// M′ ⊆ N′ give equal bounded theories; hulls keep the bounded theory.
inline Report check_skolem_axioms(const SkolemData& sd, std::size_t max_size, Guard& guard, AxiomCounts* counts = nullptr) {
  Report rep;
  AxiomCounts local;
  for (std::size_t n = 1; n <= max_size; ++n) {
    fol::for_each_model(sd.base_sig, n, guard, [&](const FolModel& m) {
      ++local.models;
      const FolModel ms = skolemize_model(m, sd);
      const std::string loc = "model " + std::to_string(local.models);
      if (fol::reduct(ms, sd.tau) != m) rep.violation(loc, "reduct of the skolemization is the model");
      rep.merge(check_theory(ms, sd), loc);
      const auto theory = fol::bounded_theory(m, sd.universe);
      for (const auto& x : closed_subsets(sd.skolem_sig, ms)) {
        guard.tick();
        const auto sub = fol::substructure(sd.skolem_sig, ms, x);
        if (!satisfies_theory(sub.model, sd)) continue;
        ++local.inclusion_pairs;
        const auto t = fol::bounded_theory(fol::reduct(sub.model, sd.tau), sd.universe);
        if (t != theory)
          rep.violation(loc + " ⊇ " + show_subset(x, ms.carrier), "skolemization inclusions preserve the bounded theory",
                        theory_difference(sd.base_sig, sd.universe, t, theory));
      }
      for_each_subset(n, [&](const Subset& x) {
        ++local.hulls;
        const auto hull = skolem_hull(sd, ms, x);
        const auto t = fol::bounded_theory(fol::reduct(hull.model, sd.tau), sd.universe);
        if (t != theory)
          rep.violation(loc + " hull of " + show_subset(x, ms.carrier), "skolem hull preserves the bounded theory",
                        theory_difference(sd.base_sig, sd.universe, t, theory));
      });
    });
  }
  if (counts) *counts = local;
  return rep;
}

/// One unary relation R and one unary function f.
inline FolSignature test_signature() { return {{{"f", 1}}, {{"R", 1}}}; }

// ---------------------------------------------------------------------------
// Multialgebra formulas

inline fol::Vocabulary ma_vocabulary(const ma::MASignature& s) { return {s.symbols(), {}, "≐", true}; }

inline std::string show(const ma::MASignature& s, const Formula& f) { return fol::show(ma_vocabulary(s), f); }
inline Formula parse(const ma::MASignature& s, const std::string& text) { return fol::parse(ma_vocabulary(s), text); }

inline bool is_strict_term(const ma::MASignature& s, const Term& t) {
  if (t.is_var()) return true;
  if (s.is_multi(static_cast<std::size_t>(t.fn))) return false;
  for (const auto& a : t.args)
    if (!is_strict_term(s, a)) return false;
  return true;
}

inline Report validate_ma_formula(const ma::MASignature& s, const Formula& f) {
  Report rep;
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (t.is_var()) return;
    if (t.fn < 0 || static_cast<std::size_t>(t.fn) >= s.size()) {
      rep.structural("term", "unknown symbol");
      return;
    }
    if (static_cast<int>(t.args.size()) != s.symbol(static_cast<std::size_t>(t.fn)).arity)
      rep.structural(s.symbol(static_cast<std::size_t>(t.fn)).name, "arity mismatch");
    for (const auto& a : t.args) term(a);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.op == Op::rel) rep.structural("atom", "relation atom in a multialgebra formula");
    for (const auto& t : g.terms) term(t);
    for (const auto& x : g.sub) walk(x);
  };
  walk(f);
  return rep;
}

/// Union semantics; variables denote singletons.
inline Subset ma_denote(const ma::MASignature& s, const ma::Multialgebra& a, const Term& t, const std::vector<int>& env) {
  if (t.is_var()) {
    if (static_cast<std::size_t>(t.var) >= env.size() || env[static_cast<std::size_t>(t.var)] < 0)
      throw StructuralError("unbound variable x" + std::to_string(t.var));
    return subset_of_indices(a.size(), {env[static_cast<std::size_t>(t.var)]});
  }
  std::vector<Subset> args;
  for (const auto& x : t.args) args.push_back(ma_denote(s, a, x, env));
  const auto op = static_cast<std::size_t>(t.fn);
  return ma::union_apply(a, op, s.symbol(op).arity, args);
}

/// t > t′ holds when the denotation of t′ is contained in that of t; t ≐ t′ when both denote the same singleton.
inline bool ma_eval(const ma::MASignature& s, const ma::Multialgebra& a, const Formula& f, std::vector<int>& env) {
  switch (f.op) {
    case Op::eq: {
      const Subset l = ma_denote(s, a, f.terms[0], env), r = ma_denote(s, a, f.terms[1], env);
      return l.count() == 1 && l == r;
    }
    case Op::incl: return ma_denote(s, a, f.terms[1], env).is_subset_of(ma_denote(s, a, f.terms[0], env));
    case Op::rel: throw StructuralError("relation atom in a multialgebra formula");
    case Op::neg: return !ma_eval(s, a, f.sub[0], env);
    case Op::conj: return ma_eval(s, a, f.sub[0], env) && ma_eval(s, a, f.sub[1], env);
    case Op::disj: return ma_eval(s, a, f.sub[0], env) || ma_eval(s, a, f.sub[1], env);
    case Op::exists:
    case Op::forall: {
      const auto v = static_cast<std::size_t>(f.var);
      if (env.size() <= v) env.resize(v + 1, -1);
      const int saved = env[v];
      const bool want = f.op == Op::exists;
      bool result = !want;
      for (std::size_t x = 0; x < a.size(); ++x) {
        env[v] = static_cast<int>(x);
        if (ma_eval(s, a, f.sub[0], env) == want) {
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

inline bool ma_satisfies(const ma::MASignature& s, const ma::Multialgebra& a, const Formula& f) {
  std::vector<int> env(static_cast<std::size_t>(fol::max_var(f) + 1), -1);
  return ma_eval(s, a, f, env);
}

// ---------------------------------------------------------------------------
// The morphism from multialgebras to first-order logic

inline FolSignature ma_phi(const ma::MASignature& s) { return ma::fol_signature(s); }

/// FOL function i is strict symbol i, so terms carry over unchanged.
inline Formula ma_alpha(const ma::MASignature& s, const Formula& f) {
  if (f.op == Op::rel) {
    const int n = static_cast<int>(f.terms.size()) - 1;
    std::vector<Term> args(f.terms.begin(), f.terms.begin() + n);
    return fol::includes(Term::apply(static_cast<int>(s.strict_ops.size()) + f.sym, std::move(args)), f.terms.back());
  }
  if (f.op == Op::incl) throw StructuralError("inclusion atom in a first-order formula");
  Formula out = f;
  for (auto& x : out.sub) x = ma_alpha(s, x);
  return out;
}

inline fol::FolModel ma_beta(const ma::MASignature& s, const ma::Multialgebra& a) { return ma::ma_to_fol_structure(s, a); }

inline ma::Multialgebra ma_beta_inverse(const ma::MASignature& s, const FolModel& m, ma::Mode mode = ma::Mode::wide) {
  return ma::fol_to_multialgebra(s, m, mode);
}

/// The FOL formula whose α-image is f, when f has the image shape: equalities between strict
/// terms and inclusions m(t̄) > t with strict t̄, t.
inline std::optional<Formula> alpha_preimage(const ma::MASignature& s, const Formula& f) {
  if (f.op == Op::eq) {
    if (!is_strict_term(s, f.terms[0]) || !is_strict_term(s, f.terms[1])) return std::nullopt;
    return f;
  }
  if (f.op == Op::incl) {
    const Term& head = f.terms[0];
    if (head.is_var() || !s.is_multi(static_cast<std::size_t>(head.fn)) || !is_strict_term(s, f.terms[1])) return std::nullopt;
    for (const auto& a : head.args)
      if (!is_strict_term(s, a)) return std::nullopt;
    std::vector<Term> args = head.args;
    args.push_back(f.terms[1]);
    return fol::relation(head.fn - static_cast<int>(s.strict_ops.size()), std::move(args));
  }
  if (f.op == Op::rel) return std::nullopt;
  Formula out = f;
  for (auto& x : out.sub) {
    auto pre = alpha_preimage(s, x);
    if (!pre) return std::nullopt;
    x = *pre;
  }
  return out;
}

namespace detail {

/// w ∈ ⟦t⟧ for a strict term w, with multi symbols only at the head of inclusion atoms.
inline Formula member(const ma::MASignature& s, const Term& t, const Term& w, int& next) {
  if (is_strict_term(s, t)) return fol::equals(t, w);
  bool flat_args = true;
  for (const auto& a : t.args) flat_args = flat_args && is_strict_term(s, a);
  if (flat_args) return fol::includes(t, w);
  Term head = t;
  std::vector<std::pair<int, Term>> extracted;
  for (auto& a : head.args)
    if (!is_strict_term(s, a)) {
      const int z = next++;
      extracted.emplace_back(z, a);
      a = Term::variable(z);
    }
  Formula body = member(s, head, w, next);
  for (auto it = extracted.rbegin(); it != extracted.rend(); ++it) body = fol::conj(member(s, it->second, Term::variable(it->first), next), std::move(body));
  for (auto it = extracted.rbegin(); it != extracted.rend(); ++it) body = fol::exists(it->first, std::move(body));
  return body;
}

/// ⟦t⟧ = {w} for a strict term w.
inline Formula singleton_of(const ma::MASignature& s, const Term& t, const Term& w, int& next) {
  const int u = next++;
  Formula only = fol::forall(u, fol::implies(member(s, t, Term::variable(u), next), fol::equals(Term::variable(u), w)));
  return fol::conj(member(s, t, w, next), std::move(only));
}

inline Formula flatten(const ma::MASignature& s, const Formula& f, int& next) {
  switch (f.op) {
    case Op::incl: {
      const Term& big = f.terms[0];
      const Term& small = f.terms[1];
      if (is_strict_term(s, small)) return member(s, big, small, next);
      const int w = next++;
      return fol::forall(w, fol::implies(member(s, small, Term::variable(w), next), member(s, big, Term::variable(w), next)));
    }
    case Op::eq: {
      const Term& l = f.terms[0];
      const Term& r = f.terms[1];
      const bool ls = is_strict_term(s, l), rs = is_strict_term(s, r);
      if (ls && rs) return f;
      if (ls) return singleton_of(s, r, l, next);
      if (rs) return singleton_of(s, l, r, next);
      const int z = next++;
      return fol::exists(z, fol::conj(singleton_of(s, l, Term::variable(z), next), singleton_of(s, r, Term::variable(z), next)));
    }
    case Op::rel: throw StructuralError("relation atom in a multialgebra formula");
    default: {
      Formula out = f;
      for (auto& x : out.sub) x = flatten(s, x, next);
      return out;
    }
  }
}

}  // namespace detail

/// Extracts nested multi-symbol occurrences into fresh quantified variables. Membership of a
/// point uses the ∃ pattern; inclusion of a non-point and singleton equality add a ∀ clause.
inline Formula flatten(const ma::MASignature& s, const Formula& f) {
  int next = fol::max_var(f) + 1;
  return detail::flatten(s, f, next);
}

/// Terms with at most `depth` nested symbols over x0..x_{k-1}.
inline std::vector<Term> ma_terms(const ma::MASignature& s, int k, int depth) {
  std::vector<Term> out;
  for (int v = 0; v < k; ++v) out.push_back(Term::variable(v));
  std::size_t begin = 0;
  for (int d = 1; d <= depth; ++d) {
    const std::size_t end = out.size();
    std::vector<Term> layer;
    for (std::size_t op = 0; op < s.size(); ++op) {
      const int arity = s.symbol(op).arity;
      for (std::size_t c = 0; c < fol::power(end, arity); ++c) {
        const auto pick = fol::tuple_at(end, arity, c);
        bool fresh = arity == 0 ? d == 1 : false;
        for (int p : pick) fresh = fresh || static_cast<std::size_t>(p) >= begin;
        if (!fresh) continue;
        std::vector<Term> args;
        for (int p : pick) args.push_back(out[static_cast<std::size_t>(p)]);
        layer.push_back(Term::apply(static_cast<int>(op), std::move(args)));
      }
    }
    begin = end;
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

/// Q x0 … Q x_{k-1}. A for single atoms A over terms of nesting ≤ term_depth, mentioning x_{k-1};
/// each followed by its negation.
inline std::vector<Formula> ma_sentence_universe(const ma::MASignature& s, int term_depth, int qdepth, Guard& guard) {
  std::vector<Formula> out;
  for (int k = 1; k <= qdepth; ++k) {
    const auto terms = ma_terms(s, k, term_depth);
    std::vector<Formula> atoms;
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = 0; j < terms.size(); ++j) {
        if (i == j) continue;
        atoms.push_back(fol::includes(terms[i], terms[j]));
        if (i < j) atoms.push_back(fol::equals(terms[i], terms[j]));
      }
    for (const auto& a : atoms) {
      if (!fol::free_vars(a).count(k - 1)) continue;
      for (std::size_t q = 0; q < (std::size_t{1} << k); ++q) {
        guard.tick(2);
        Formula f = a;
        for (int v = k - 1; v >= 0; --v) f = (q >> v) & 1 ? fol::forall(v, std::move(f)) : fol::exists(v, std::move(f));
        out.push_back(f);
        out.push_back(fol::negate(f));
      }
    }
  }
  return out;
}

/// All multialgebras with carriers 1..max_size.
inline std::vector<ma::Multialgebra> ma_grid(const ma::MASignature& s, std::size_t max_size, ma::Mode mode, Guard& guard) {
  std::vector<ma::Multialgebra> out;
  for (std::size_t n = 1; n <= max_size; ++n) ma::for_each_multialgebra(s, n, mode, guard, [&](const ma::Multialgebra& a) { out.push_back(a); });
  return out;
}

/// ma_eval(A, α(ψ)) = fol_eval(β(A), ψ) over the grid.
inline Report check_compatibility(const ma::MASignature& s, const std::vector<ma::Multialgebra>& grid,
                                  const std::vector<Formula>& fol_universe) {
  Report rep;
  const auto phi = ma_phi(s);
  for (const auto& psi : fol_universe) {
    const Formula a = ma_alpha(s, psi);
    for (std::size_t g = 0; g < grid.size(); ++g)
      if (ma_satisfies(s, grid[g], a) != fol::satisfies(ma_beta(s, grid[g]), psi)) {
        rep.violation("(A" + std::to_string(g) + ", " + fol::show(phi, psi) + ")", "satisfaction condition");
        break;
      }
  }
  return rep;
}

/// flatten lands in the α-image shape and preserves ma_eval over the grid.
inline Report check_flatten(const ma::MASignature& s, const std::vector<ma::Multialgebra>& grid, const std::vector<Formula>& universe,
                            const std::string& law = "flatten preserves satisfaction") {
  Report rep;
  for (const auto& f : universe) {
    const Formula flat = flatten(s, f);
    if (!alpha_preimage(s, flat)) {
      rep.violation(show(s, f), law, {"not in the image of alpha: " + show(s, flat)});
      continue;
    }
    for (std::size_t g = 0; g < grid.size(); ++g)
      if (ma_satisfies(s, grid[g], f) != ma_satisfies(s, grid[g], flat)) {
        rep.violation(show(s, f), law, {"A" + std::to_string(g), show(s, flat)});
        break;
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Transport of skolemization

struct Transfer {
  ma::MASignature base;
  ma::MASignature extended;        // Σ̌: strict symbols added for the skolem functions
  SkolemData fol;                  // skolemization of φ(Σ)
  fol::SigMorphism iso;            // i : φ(Σ̌) → (φΣ)_S
  std::vector<int> tau;            // τ′ : Σ → Σ̌ on symbol positions
  std::vector<Formula> theory;     // over Σ̌
  std::vector<Formula> universe;   // α-image of the FOL universe, over Σ
  ma::Mode mode = ma::Mode::wide;
  Report report;
  std::size_t grid_size = 0;
  std::size_t inclusion_pairs = 0;
};

inline ma::Multialgebra ma_reduct(const ma::Multialgebra& a, const std::vector<int>& tau) {
  ma::Multialgebra out;
  out.carrier = a.carrier;
  out.mode = a.mode;
  for (int i : tau) out.ops.push_back(a.ops.at(static_cast<std::size_t>(i)));
  return out;
}

/// β⁻¹_Σ̌ ∘ Mod(i) ∘ skolemize_model ∘ β_Σ.
inline ma::Multialgebra transported_skolemization(const Transfer& t, const ma::Multialgebra& a) {
  const FolModel ms = skolemize_model(ma_beta(t.base, a), t.fol);
  return ma_beta_inverse(t.extended, fol::reduct(ms, t.iso), a.mode);
}

/// Substructures transported along β: strict-closed subsets with multi values cut down to the subset.
inline std::optional<ma::Multialgebra> transported_substructure(const ma::MASignature& s, const ma::Multialgebra& a, const Subset& x) {
  const auto sig = ma_phi(s);
  const FolModel m = ma_beta(s, a);
  if (x.none() || !fol::closed_under_functions(sig, m, x)) return std::nullopt;
  try {
    return ma_beta_inverse(s, fol::substructure(sig, m, x).model, a.mode);
  } catch (const StructuralError&) {
    return std::nullopt;  // a narrow-mode value became empty
  }
}

namespace detail {

/// Laws checked by transfer_skolemization, by name.
inline const char* kFullyFaithful = "phi is fully faithful";
inline const char* kIso = "phi(extended signature) is isomorphic to the skolem expansion";
inline const char* kTau = "phi(tau') = i^-1 . tau";
inline const char* kBetaIso = "each beta_Sigma is an isomorphism";
inline const char* kSurjective = "alpha is semantically surjective";

inline std::vector<std::vector<int>> ma_sig_morphisms(const ma::MASignature& a, const ma::MASignature& b, Guard& guard) {
  std::vector<std::vector<int>> cand(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (a.is_multi(i) == b.is_multi(j) && a.symbol(i).arity == b.symbol(j).arity) cand[i].push_back(static_cast<int>(j));
  std::vector<std::vector<int>> out;
  std::vector<int> pick(a.size());
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == a.size()) {
      guard.tick();
      out.push_back(pick);
      return;
    }
    for (int j : cand[i]) {
      pick[i] = j;
      step(i + 1);
    }
  };
  step(0);
  return out;
}

inline std::vector<fol::SigMorphism> fol_sig_morphisms(const FolSignature& a, const FolSignature& b, Guard& guard) {
  std::vector<std::vector<int>> fc(a.functions.size()), rc(a.relations.size());
  for (std::size_t i = 0; i < a.functions.size(); ++i)
    for (std::size_t j = 0; j < b.functions.size(); ++j)
      if (a.functions[i].arity == b.functions[j].arity) fc[i].push_back(static_cast<int>(j));
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    for (std::size_t j = 0; j < b.relations.size(); ++j)
      if (a.relations[i].arity == b.relations[j].arity) rc[i].push_back(static_cast<int>(j));
  std::vector<fol::SigMorphism> out;
  fol::SigMorphism pick{std::vector<int>(a.functions.size()), std::vector<int>(a.relations.size())};
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == fc.size() + rc.size()) {
      guard.tick();
      out.push_back(pick);
      return;
    }
    const bool fn = i < fc.size();
    for (int j : fn ? fc[i] : rc[i - fc.size()]) {
      (fn ? pick.functions[i] : pick.relations[i - fc.size()]) = j;
      step(i + 1);
    }
  };
  step(0);
  return out;
}

inline fol::SigMorphism phi_of(const ma::MASignature& a, const ma::MASignature& b, const std::vector<int>& m) {
  fol::SigMorphism out;
  for (std::size_t i = 0; i < a.strict_ops.size(); ++i) out.functions.push_back(m[i]);
  for (std::size_t j = 0; j < a.multi_ops.size(); ++j)
    out.relations.push_back(m[a.strict_ops.size() + j] - static_cast<int>(b.strict_ops.size()));
  return out;
}

}  // namespace detail

/// Transports the skolemization of φ(Σ) to multialgebras and checks the hypotheses and the three
/// skolemization axioms on all multialgebras with carriers ≤ max_size. `tests` are extra
/// multialgebra sentences used for semantic surjectivity of α.
inline Transfer transfer_skolemization(const ma::MASignature& s, const std::vector<Formula>& fol_universe, ma::Mode mode,
                                       const std::vector<Formula>& tests, std::size_t max_size, Guard& guard) {
  if (!ma::validate_signature(s).ok()) throw StructuralError("transfer_skolemization: invalid signature");
  Transfer t;
  t.base = s;
  t.mode = mode;
  const FolSignature phi = ma_phi(s);
  t.fol = skolemize(phi, fol_universe, guard);

  t.extended = s;
  for (std::size_t j = 0; j < t.fol.fns.size(); ++j) t.extended.strict_ops.push_back(t.fol.skolem_sig.functions[phi.functions.size() + j]);
  const std::size_t added = t.fol.fns.size();
  for (std::size_t i = 0; i < s.size(); ++i) t.tau.push_back(static_cast<int>(s.is_multi(i) ? i + added : i));
  for (const auto& f : fol_universe) t.universe.push_back(ma_alpha(s, f));

  const FolSignature phi_ext = ma_phi(t.extended);
  Report& rep = t.report;

  // i and its inverse, by symbol names; S_Σ̌ is the α-image of S_φΣ renamed along i⁻¹.
  try {
    t.iso = fol::inclusion_morphism(phi_ext, t.fol.skolem_sig);
    const auto back = fol::inclusion_morphism(t.fol.skolem_sig, phi_ext);
    if (phi_ext.functions.size() != t.fol.skolem_sig.functions.size() || phi_ext.relations.size() != t.fol.skolem_sig.relations.size())
      rep.violation("i", detail::kIso, {"symbol counts differ"});
    const auto phi_tau = detail::phi_of(s, t.extended, t.tau);
    fol::SigMorphism composite;
    for (int f : t.fol.tau.functions) composite.functions.push_back(back.functions[static_cast<std::size_t>(f)]);
    for (int r : t.fol.tau.relations) composite.relations.push_back(back.relations[static_cast<std::size_t>(r)]);
    if (!(phi_tau == composite)) rep.violation("tau'", detail::kTau);
    for (const auto& ax : t.fol.theory) t.theory.push_back(ma_alpha(t.extended, fol::translate(back, ax)));
  } catch (const StructuralError& e) {
    rep.violation("i", detail::kIso, {e.what()});
    return t;
  }

  // φ is a bijection on Hom(Σ, Σ̌).
  {
    const auto mas = detail::ma_sig_morphisms(s, t.extended, guard);
    const auto fols = detail::fol_sig_morphisms(phi, phi_ext, guard);
    std::set<std::pair<std::vector<int>, std::vector<int>>> images;
    for (const auto& m : mas) {
      const auto p = detail::phi_of(s, t.extended, m);
      images.insert({p.functions, p.relations});
    }
    if (images.size() != mas.size()) rep.violation("Hom(Sigma, extended)", detail::kFullyFaithful, {"not faithful"});
    if (images.size() != fols.size()) rep.violation("Hom(Sigma, extended)", detail::kFullyFaithful, {"not full"});
  }

  // β_Σ is a bijection on carriers ≤ max_size.
  const auto grid = ma_grid(s, max_size, mode, guard);
  t.grid_size = grid.size();
  for (const auto& a : grid)
    if (ma_beta_inverse(s, ma_beta(s, a), mode) != a) {
      rep.violation(show_subset(full_subset(a.size()), a.carrier), detail::kBetaIso, {"beta is not injective"});
      break;
    }
  for (std::size_t n = 1; n <= max_size; ++n) {
    bool reported = false;
    fol::for_each_model(phi, n, guard, [&](const FolModel& m) {
      if (reported) return;
      try {
        ma_beta_inverse(s, m, mode);
      } catch (const StructuralError& e) {
        rep.violation("carrier size " + std::to_string(n), detail::kBetaIso, {std::string("no preimage: ") + e.what()});
        reported = true;
      }
    });
  }

  // α is semantically surjective on the test sentences.
  rep.merge(check_flatten(s, grid, tests, detail::kSurjective));

  // The three skolemization axioms, transported.
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& a = grid[g];
    const std::string loc = "A" + std::to_string(g);
    const ma::Multialgebra ext = transported_skolemization(t, a);
    if (ma_reduct(ext, t.tau) != a) rep.violation(loc, "reduct of the skolemization is the multialgebra");
    for (std::size_t j = 0; j < t.theory.size(); ++j)
      if (!ma_satisfies(t.extended, ext, t.theory[j])) rep.violation(loc + "/" + t.fol.fns[j].name, "skolem axiom");
    std::vector<bool> theory;
    for (const auto& f : t.universe) theory.push_back(ma_satisfies(s, a, f));
    for_each_subset(a.size(), [&](const Subset& x) {
      guard.tick();
      const auto sub = transported_substructure(t.extended, ext, x);
      if (!sub) return;
      bool skolemization = true;
      for (const auto& ax : t.theory) skolemization = skolemization && ma_satisfies(t.extended, *sub, ax);
      if (!skolemization) return;
      ++t.inclusion_pairs;
      std::vector<bool> st;
      const auto r = ma_reduct(*sub, t.tau);
      for (const auto& f : t.universe) st.push_back(ma_satisfies(s, r, f));
      if (st != theory) rep.violation(loc + " ⊇ " + show_subset(x, a.carrier), "skolemization inclusions preserve the bounded theory");
    });
    const FolModel ext_fol = ma_beta(t.extended, ext);
    for_each_subset(a.size(), [&](const Subset& x) {
      Subset seed = x;
      if (seed.none()) seed.set(0);
      const auto hull = transported_substructure(t.extended, ext, function_closure(phi_ext, ext_fol, seed));
      if (!hull) return;
      std::vector<bool> st;
      const auto r = ma_reduct(*hull, t.tau);
      for (const auto& f : t.universe) st.push_back(ma_satisfies(s, r, f));
      if (st != theory) rep.violation(loc + " hull of " + show_subset(x, a.carrier), "skolem hull preserves the bounded theory");
    });
  }
  return t;
}

}  // namespace insfin::sk
