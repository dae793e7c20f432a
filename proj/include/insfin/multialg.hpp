#pragma once

// Finite multialgebras: operations return sets of elements. Strict symbols are
// singleton-valued; in narrow mode multi symbols are nonempty-valued, in wide
// mode they may return the empty set.

#include "common.hpp"
#include "fincat.hpp"
#include "fol.hpp"
#include "proplogic.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace insfin::ma {

using fol::Symbol;

/// Symbols are indexed strict first, then multi.
struct MASignature {
  std::vector<Symbol> strict_ops;
  std::vector<Symbol> multi_ops;

  std::size_t size() const { return strict_ops.size() + multi_ops.size(); }
  bool is_multi(std::size_t i) const { return i >= strict_ops.size(); }
  const Symbol& symbol(std::size_t i) const {
    return i < strict_ops.size() ? strict_ops[i] : multi_ops.at(i - strict_ops.size());
  }
  int index(const std::string& name) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (symbol(i).name == name) return static_cast<int>(i);
    return -1;
  }
  std::vector<Symbol> symbols() const {
    std::vector<Symbol> out = strict_ops;
    out.insert(out.end(), multi_ops.begin(), multi_ops.end());
    return out;
  }
  bool operator==(const MASignature&) const = default;
};

enum class Mode { narrow, wide };

inline const char* to_string(Mode m) { return m == Mode::narrow ? "narrow" : "wide"; }

/// ops[σ][tuple] is a subset of the carrier; tuples in mixed radix, first argument most significant.
struct Multialgebra {
  std::vector<std::string> carrier;
  std::vector<std::vector<Subset>> ops;
  Mode mode = Mode::narrow;

  std::size_t size() const { return carrier.size(); }
  bool operator==(const Multialgebra&) const = default;
};

inline Report validate_signature(const MASignature& s) {
  Report rep;
  std::set<std::string> seen;
  for (const auto& sym : s.symbols()) {
    if (sym.name.empty() || fol::looks_like_variable(sym.name)) rep.structural(sym.name, "symbol name is empty or a variable name");
    if (sym.arity < 0) rep.structural(sym.name, "negative arity");
    if (!seen.insert(sym.name).second) rep.structural(sym.name, "duplicate symbol");
  }
  return rep;
}

inline std::string op_loc(const MASignature& s, std::size_t op, const std::vector<std::string>& names, std::size_t cell) {
  const auto args = fol::tuple_at(names.size(), s.symbol(op).arity, cell);
  return "(" + s.symbol(op).name + ", " + fol::show_tuple(names, args) + ")";
}

inline Report validate_multialgebra(const MASignature& s, const Multialgebra& a) {
  Report rep = validate_signature(s);
  if (!rep.ok()) return rep;
  const std::size_t n = a.size();
  if (n == 0) rep.structural("carrier", "empty carrier");
  if (a.ops.size() != s.size()) {
    rep.structural("ops", "one table per symbol");
    return rep;
  }
  for (std::size_t op = 0; op < s.size(); ++op) {
    if (a.ops[op].size() != fol::power(n, s.symbol(op).arity)) {
      rep.structural(s.symbol(op).name, "table is not total");
      continue;
    }
    for (std::size_t c = 0; c < a.ops[op].size(); ++c) {
      const Subset& v = a.ops[op][c];
      if (v.size() != n) {
        rep.structural(op_loc(s, op, a.carrier, c), "value is not a subset of the carrier");
        continue;
      }
      if (!s.is_multi(op) && v.count() != 1) rep.structural(op_loc(s, op, a.carrier, c), "strict value is not a singleton");
      if (s.is_multi(op) && a.mode == Mode::narrow && v.none())
        rep.structural(op_loc(s, op, a.carrier, c), "empty value in narrow mode");
    }
  }
  return rep;
}

inline const Subset& value(const Multialgebra& a, std::size_t op, const std::vector<int>& args) {
  return a.ops[op][fol::tuple_index(a.size(), args)];
}

/// h[σ^A(ā)] ⊆ σ^B(h ā) for every symbol and tuple.
inline Report validate_ma_morphism(const MASignature& s, const Function& h, const Multialgebra& a, const Multialgebra& b) {
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
  for (std::size_t op = 0; op < s.size(); ++op)
    for (std::size_t c = 0; c < a.ops[op].size(); ++c) {
      auto args = fol::tuple_at(a.size(), s.symbol(op).arity, c);
      std::vector<int> mapped;
      for (int x : args) mapped.push_back(h[static_cast<std::size_t>(x)]);
      const Subset img = image(h, a.ops[op][c], b.size());
      const Subset& target = value(b, op, mapped);
      if (!img.is_subset_of(target))
        rep.violation(op_loc(s, op, a.carrier, c), "h[σ(ā)] ⊆ σ(h(ā))",
                      {"h[σ(ā)] = " + show_subset(img, b.carrier), "σ(h(ā)) = " + show_subset(target, b.carrier)});
    }
  return rep;
}

inline std::vector<Function> ma_morphisms(const MASignature& s, const Multialgebra& a, const Multialgebra& b, Guard& guard) {
  std::vector<Function> out;
  Function h(a.size(), 0);
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == h.size()) {
      guard.tick();
      if (validate_ma_morphism(s, h, a, b).ok()) out.push_back(h);
      return;
    }
    for (std::size_t v = 0; v < b.size(); ++v) {
      h[i] = static_cast<int>(v);
      step(i + 1);
    }
  };
  step(0);
  return out;
}

/// Every multialgebra of the signature on carrier {0..n-1} in the given mode.
inline void for_each_multialgebra(const MASignature& s, std::size_t n, Mode mode, Guard& guard,
                                  const std::function<void(const Multialgebra&)>& fn) {
  Multialgebra a;
  a.carrier = fol::numbered_carrier(n);
  a.mode = mode;
  std::vector<std::vector<Subset>> choices(s.size());
  double total = 1;
  for (std::size_t op = 0; op < s.size(); ++op) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Subset v(n, bits);
      if (!s.is_multi(op) && v.count() != 1) continue;
      if (s.is_multi(op) && mode == Mode::narrow && v.none()) continue;
      choices[op].push_back(v);
    }
    a.ops.emplace_back(fol::power(n, s.symbol(op).arity), Subset(n));
    total *= std::pow(static_cast<double>(choices[op].size()), static_cast<double>(a.ops[op].size()));
  }
  if (total > static_cast<double>(guard.limit() - guard.used()))
    throw Refusal("multialgebras > " + std::to_string(guard.limit()));
  guard.tick(static_cast<std::uint64_t>(total));
  std::function<void(std::size_t, std::size_t)> step = [&](std::size_t op, std::size_t cell) {
    if (op == s.size()) {
      fn(a);
      return;
    }
    if (cell == a.ops[op].size()) {
      step(op + 1, 0);
      return;
    }
    for (const auto& v : choices[op]) {
      a.ops[op][cell] = v;
      step(op, cell + 1);
    }
  };
  step(0, 0);
}

// ---------------------------------------------------------------------------
// Ordinary algebras, the powerset algebra and the s/p functors

/// An algebra interpreting every symbol of the signature as a function.
struct Algebra {
  std::vector<std::string> carrier;
  std::vector<std::vector<int>> ops;

  std::size_t size() const { return carrier.size(); }
  bool operator==(const Algebra&) const = default;
};

inline Algebra from_matrix(const prop::Matrix& m) { return {m.carrier, m.ops}; }

inline Report validate_algebra(const MASignature& s, const Algebra& g) {
  Report rep;
  if (g.ops.size() != s.size()) {
    rep.structural("ops", "one table per symbol");
    return rep;
  }
  for (std::size_t op = 0; op < s.size(); ++op) {
    if (g.ops[op].size() != fol::power(g.size(), s.symbol(op).arity)) rep.structural(s.symbol(op).name, "table is not total");
    for (int v : g.ops[op])
      if (v < 0 || static_cast<std::size_t>(v) >= g.size()) {
        rep.structural(s.symbol(op).name, "value outside the carrier");
        break;
      }
  }
  return rep;
}

inline Report validate_algebra_hom(const MASignature& s, const Function& h, const Algebra& a, const Algebra& b) {
  Report rep;
  if (h.size() != a.size()) {
    rep.structural("h", "not total on the source carrier");
    return rep;
  }
  for (std::size_t op = 0; op < s.size(); ++op)
    for (std::size_t c = 0; c < a.ops[op].size(); ++c) {
      auto args = fol::tuple_at(a.size(), s.symbol(op).arity, c);
      std::vector<int> mapped;
      for (int x : args) mapped.push_back(h[static_cast<std::size_t>(x)]);
      if (h[static_cast<std::size_t>(a.ops[op][c])] != b.ops[op][fol::tuple_index(b.size(), mapped)])
        rep.violation(op_loc(s, op, a.carrier, c), "h(σ(ā)) = σ(h(ā))");
    }
  return rep;
}

/// Nonempty subsets of an n-element carrier are numbered by their bit pattern minus one.
inline std::size_t subset_code(const Subset& x) { return static_cast<std::size_t>(x.to_ulong()) - 1; }

inline Subset subset_of_code(std::size_t n, std::size_t code) { return Subset(n, code + 1); }

/// σ^{𝒫*}(A_0, …) = ⋃ σ^A(a_0, …) over a_i ∈ A_i.
inline Subset union_apply(const Multialgebra& a, std::size_t op, int arity, const std::vector<Subset>& args) {
  Subset out(a.size());
  std::vector<std::vector<int>> members;
  for (const auto& x : args) members.push_back(subset_indices(x));
  std::vector<int> pick(static_cast<std::size_t>(arity));
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == members.size()) {
      out |= value(a, op, pick);
      return;
    }
    for (int m : members[i]) {
      pick[i] = m;
      step(i + 1);
    }
  };
  step(0);
  return out;
}

/// The ordinary algebra on nonempty subsets given by the union formula.
inline Algebra powerset_algebra(const MASignature& s, const Multialgebra& a) {
  if (!validate_multialgebra(s, a).ok()) throw StructuralError("powerset_algebra: invalid multialgebra");
  const std::size_t n = a.size();
  if (n > 16) throw Refusal("powerset carrier > 2^16");
  for (const auto& table : a.ops)
    for (const auto& v : table)
      if (v.none()) throw Refusal("empty operation value (wide mode) leaves the nonempty subsets");
  const std::size_t m = (std::size_t{1} << n) - 1;
  Algebra p;
  for (std::size_t c = 0; c < m; ++c) p.carrier.push_back(show_subset(subset_of_code(n, c), a.carrier));
  for (std::size_t op = 0; op < s.size(); ++op) {
    const int arity = s.symbol(op).arity;
    std::vector<int> table(fol::power(m, arity));
    for (std::size_t c = 0; c < table.size(); ++c) {
      std::vector<Subset> args;
      for (int x : fol::tuple_at(m, arity, c)) args.push_back(subset_of_code(n, static_cast<std::size_t>(x)));
      table[c] = static_cast<int>(subset_code(union_apply(a, op, arity, args)));
    }
    p.ops.push_back(std::move(table));
  }
  return p;
}

inline Algebra p_project(const MASignature& s, const Multialgebra& a) { return powerset_algebra(s, a); }

/// p on morphisms: the direct-image map between the powerset carriers.
inline Function p_map(const Function& h, const Multialgebra& a, const Multialgebra& b) {
  const std::size_t m = (std::size_t{1} << a.size()) - 1;
  Function out(m);
  for (std::size_t c = 0; c < m; ++c)
    out[c] = static_cast<int>(subset_code(image(h, subset_of_code(a.size(), c), b.size())));
  return out;
}

/// h[σ^A(ā)] = σ^B(h ā) everywhere.
inline bool is_strong_morphism(const MASignature& s, const Function& h, const Multialgebra& a, const Multialgebra& b) {
  for (std::size_t op = 0; op < s.size(); ++op)
    for (std::size_t c = 0; c < a.ops[op].size(); ++c) {
      std::vector<int> mapped;
      for (int x : fol::tuple_at(a.size(), s.symbol(op).arity, c)) mapped.push_back(h[static_cast<std::size_t>(x)]);
      if (image(h, a.ops[op][c], b.size()) != value(b, op, mapped)) return false;
    }
  return true;
}

/// The lax law h[σ^{𝒫*}(X̄)] ⊆ σ^{𝒫*}(h[X̄]) that p(h) satisfies for every morphism h.
inline Report validate_lax_p_map(const MASignature& s, const Function& h, const Multialgebra& a, const Multialgebra& b) {
  Report rep;
  const Algebra pa = powerset_algebra(s, a), pb = powerset_algebra(s, b);
  const Function ph = p_map(h, a, b);
  for (std::size_t op = 0; op < s.size(); ++op)
    for (std::size_t c = 0; c < pa.ops[op].size(); ++c) {
      std::vector<int> mapped;
      for (int x : fol::tuple_at(pa.size(), s.symbol(op).arity, c)) mapped.push_back(ph[static_cast<std::size_t>(x)]);
      const Subset lhs = subset_of_code(b.size(), static_cast<std::size_t>(ph[static_cast<std::size_t>(pa.ops[op][c])]));
      const Subset rhs = subset_of_code(b.size(), static_cast<std::size_t>(pb.ops[op][fol::tuple_index(pb.size(), mapped)]));
      if (!lhs.is_subset_of(rhs)) rep.violation(op_loc(s, op, pa.carrier, c), "h[σ(X̄)] ⊆ σ(h[X̄])");
    }
  return rep;
}

/// s wraps each operation with singleton formation.
inline Multialgebra s_embed(const MASignature& s, const Algebra& g) {
  if (!validate_algebra(s, g).ok()) throw StructuralError("s_embed: invalid algebra");
  Multialgebra out;
  out.carrier = g.carrier;
  out.mode = Mode::narrow;
  for (const auto& table : g.ops) {
    std::vector<Subset> vals;
    for (int v : table) vals.push_back(subset_of_indices(g.size(), {v}));
    out.ops.push_back(std::move(vals));
  }
  return out;
}

/// The singleton component s_A : A → (s∘p)(A), a ↦ {a}.
inline Function singleton_map(const Multialgebra& a) {
  Function out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(static_cast<int>((std::size_t{1} << i) - 1));
  return out;
}

/// s_B ∘ h = p(h) ∘ s_A.
inline Report check_singleton_naturality(const Function& h, const Multialgebra& a, const Multialgebra& b) {
  Report rep;
  const Function sa = singleton_map(a), sb = singleton_map(b), ph = p_map(h, a, b);
  for (std::size_t x = 0; x < a.size(); ++x)
    if (sb[static_cast<std::size_t>(h[x])] != ph[static_cast<std::size_t>(sa[x])])
      rep.violation(a.carrier[x], "naturality of the singleton map");
  return rep;
}

/// σ^{𝒫*}({a_0}, …) = σ^A(a_0, …) for every symbol and tuple.
inline Report check_singleton_law(const MASignature& s, const Multialgebra& a) {
  Report rep;
  const Algebra p = powerset_algebra(s, a);
  const Function sa = singleton_map(a);
  const std::size_t m = p.size();
  for (std::size_t op = 0; op < s.size(); ++op)
    for (std::size_t c = 0; c < a.ops[op].size(); ++c) {
      std::vector<int> lifted;
      for (int x : fol::tuple_at(a.size(), s.symbol(op).arity, c)) lifted.push_back(sa[static_cast<std::size_t>(x)]);
      const int got = p.ops[op][fol::tuple_index(m, lifted)];
      if (subset_of_code(a.size(), static_cast<std::size_t>(got)) != a.ops[op][c])
        rep.violation(op_loc(s, op, a.carrier, c), "singleton law");
    }
  return rep;
}

// ---------------------------------------------------------------------------
// First-order translation L(Σ)

inline std::string relation_name(const std::string& multi) { return "r_" + multi; }

/// Strict n-ary symbols become n-ary functions; multi n-ary symbols become (n+1)-ary relations.
inline fol::FolSignature fol_signature(const MASignature& s) {
  fol::FolSignature out;
  out.functions = s.strict_ops;
  for (const auto& m : s.multi_ops) out.relations.push_back({relation_name(m.name), m.arity + 1});
  return out;
}

inline fol::FolModel ma_to_fol_structure(const MASignature& s, const Multialgebra& a) {
  if (!validate_multialgebra(s, a).ok()) throw StructuralError("ma_to_fol_structure: invalid multialgebra");
  fol::FolModel out;
  out.carrier = a.carrier;
  const std::size_t n = a.size();
  for (std::size_t op = 0; op < s.strict_ops.size(); ++op) {
    std::vector<int> table;
    for (const auto& v : a.ops[op]) table.push_back(static_cast<int>(v.find_first()));
    out.functions.push_back(std::move(table));
  }
  for (std::size_t j = 0; j < s.multi_ops.size(); ++j) {
    const std::size_t op = s.strict_ops.size() + j;
    Subset rel(fol::power(n, s.multi_ops[j].arity + 1));
    for (std::size_t c = 0; c < a.ops[op].size(); ++c)
      for (int y : subset_indices(a.ops[op][c])) rel.set(c * n + static_cast<std::size_t>(y));
    out.relations.push_back(std::move(rel));
  }
  return out;
}

/// m_r(x̄) := {y : r(x̄, y)}. Narrow mode requires every fiber to be nonempty.
inline Multialgebra fol_to_multialgebra(const MASignature& s, const fol::FolModel& m, Mode mode) {
  const auto sig = fol_signature(s);
  if (!fol::validate_model(sig, m).ok()) throw StructuralError("fol_to_multialgebra: invalid structure");
  Multialgebra out;
  out.carrier = m.carrier;
  out.mode = mode;
  const std::size_t n = m.size();
  for (const auto& table : m.functions) {
    std::vector<Subset> vals;
    for (int v : table) vals.push_back(subset_of_indices(n, {v}));
    out.ops.push_back(std::move(vals));
  }
  for (std::size_t j = 0; j < s.multi_ops.size(); ++j) {
    std::vector<Subset> vals(fol::power(n, s.multi_ops[j].arity), Subset(n));
    for (std::size_t c = 0; c < vals.size(); ++c) {
      for (std::size_t y = 0; y < n; ++y)
        if (m.relations[j].test(c * n + y)) vals[c].set(y);
      if (mode == Mode::narrow && vals[c].none())
        throw StructuralError("empty fiber of " + sig.relations[j].name + " in narrow mode");
    }
    out.ops.push_back(std::move(vals));
  }
  return out;
}

/// ∀x_0 ⋯ ∀x_{n-1} ∃x_n r_m(x_0, …, x_n) for each multi symbol m.
inline std::vector<fol::Formula> totality_sentences(const MASignature& s) {
  std::vector<fol::Formula> out;
  for (std::size_t j = 0; j < s.multi_ops.size(); ++j) {
    const int n = s.multi_ops[j].arity;
    std::vector<fol::Term> args;
    for (int v = 0; v <= n; ++v) args.push_back(fol::Term::variable(v));
    fol::Formula f = fol::exists(n, fol::relation(static_cast<int>(j), args));
    for (int v = n - 1; v >= 0; --v) f = fol::forall(v, std::move(f));
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

/// One unary multi symbol m.
inline MASignature unary_multi_signature() { return {{}, {{"m", 1}}}; }

/// One unary strict symbol f and one unary multi symbol m.
inline MASignature strict_and_multi_signature() { return {{{"f", 1}}, {{"m", 1}}}; }

/// A = {a,b} with m(a) = {a,b}, m(b) = {b}.
inline Multialgebra fixture_a() {
  return {{"a", "b"}, {{subset_of_indices(2, {0, 1}), subset_of_indices(2, {1})}}, Mode::narrow};
}

/// B = {b} with m(b) = {b}.
inline Multialgebra fixture_b() { return {{"b"}, {{subset_of_indices(1, {0})}}, Mode::narrow}; }

}  // namespace insfin::ma
