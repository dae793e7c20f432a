#pragma once

#include "insfin/generate.hpp"
#include "insfin/instcore.hpp"
#include "insfin/proplogic.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace insfin::fp {

using prop::Matrix;
using prop::PropSignature;

// ---------------------------------------------------------------------------
// Diagrams of algebras

/// Finite category of Σ-algebras. algebras[o] sits at object o of cat, maps[f] is the carrier
/// function of arrow f. The designated set of each Matrix is ignored.
struct AlgDiagram {
  PropSignature sig;
  CatRef cat;
  std::vector<Matrix> algebras;
  std::vector<Function> maps;

  std::size_t size(int o) const { return algebras[o].carrier.size(); }
};

inline bool is_homomorphism(const PropSignature& s, const Matrix& a, const Matrix& b, const Function& h) {
  for (std::size_t c = 0; c < s.connectives.size(); ++c) {
    bool ok = true;
    prop::for_each_valuation(a.carrier.size(), s.connectives[c].arity, [&](const std::vector<int>& v) {
      if (!ok) return;
      std::vector<int> hv;
      for (int x : v) hv.push_back(h[x]);
      ok = h[prop::apply_op(a, static_cast<int>(c), v)] == prop::apply_op(b, static_cast<int>(c), hv);
    });
    if (!ok) return false;
  }
  return true;
}

inline std::vector<Function> homomorphisms(const PropSignature& s, const Matrix& a, const Matrix& b, Guard& guard) {
  std::vector<Function> out;
  for_each_function(a.carrier.size(), b.carrier.size(), [&](const Function& h) {
    guard.tick();
    if (is_homomorphism(s, a, b, h)) out.push_back(h);
    return true;
  });
  return out;
}

inline Report validate_alg_diagram(const AlgDiagram& d) {
  Report rep;
  const FinCat& C = *d.cat;
  if (static_cast<int>(d.algebras.size()) != C.n_obj() || static_cast<int>(d.maps.size()) != C.n_arr()) {
    rep.structural("diagram", "table sizes");
    return rep;
  }
  for (int o = 0; o < C.n_obj(); ++o) rep.merge(prop::validate_matrix(d.algebras[o], d.sig), C.objects[o]);
  if (!rep.ok()) return rep;
  for (int f = 0; f < C.n_arr(); ++f) {
    const Function& h = d.maps[f];
    bool shape = h.size() == d.size(C.src(f)) &&
                 std::all_of(h.begin(), h.end(), [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < d.size(C.dst(f)); });
    if (!shape) rep.structural(C.arrows[f].id, "carrier function shape");
  }
  if (!rep.ok()) return rep;
  for (int f = 0; f < C.n_arr(); ++f) {
    if (C.is_identity(f) && d.maps[f] != identity_function(d.size(C.src(f))))
      rep.violation(C.arrows[f].id, "identity arrow is not the identity function");
    if (!is_homomorphism(d.sig, d.algebras[C.src(f)], d.algebras[C.dst(f)], d.maps[f]))
      rep.violation(C.arrows[f].id, "not a homomorphism");
    for (int g = 0; g < C.n_arr(); ++g)
      if (C.dst(f) == C.src(g) && C.compose(g, f) >= 0 && d.maps[C.compose(g, f)] != compose_fn(d.maps[g], d.maps[f]))
        rep.violation("(" + C.arrows[g].id + ", " + C.arrows[f].id + ")", "composite function");
  }
  return rep;
}

/// Full subcategory on the named algebras with every homomorphism; arrows "h<i>_<j>_<k>".
inline AlgDiagram full_diagram(const PropSignature& s, const std::vector<std::pair<std::string, Matrix>>& algebras,
                               Guard& guard) {
  const std::size_t n = algebras.size();
  std::vector<std::vector<std::vector<Function>>> homs(n, std::vector<std::vector<Function>>(n));
  CategoryBuilder b;
  auto hid = [](std::size_t i, std::size_t j, std::size_t k) {
    return "h" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
  };
  for (const auto& a : algebras) b.object(a.first);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      homs[i][j] = homomorphisms(s, algebras[i].second, algebras[j].second, guard);
      for (std::size_t k = 0; k < homs[i][j].size(); ++k) b.arrow(hid(i, j, k), algebras[i].first, algebras[j].first);
    }
  auto index_of = [&](std::size_t i, std::size_t j, const Function& h) {
    return static_cast<std::size_t>(std::find(homs[i][j].begin(), homs[i][j].end(), h) - homs[i][j].begin());
  };
  for (std::size_t i = 0; i < n; ++i)
    b.identity(algebras[i].first, hid(i, i, index_of(i, i, identity_function(algebras[i].second.carrier.size()))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t p = 0; p < homs[i][j].size(); ++p)
          for (std::size_t q = 0; q < homs[j][k].size(); ++q)
            b.compose(hid(j, k, q), hid(i, j, p), hid(i, k, index_of(i, k, compose_fn(homs[j][k][q], homs[i][j][p]))));
  AlgDiagram d{s, share(b.build()), {}, {}};
  const FinCat& C = *d.cat;
  d.algebras.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.algebras[C.object_index(algebras[i].first)] = algebras[i].second;
  for (const auto& ar : C.arrows) {
    // ids are h<i>_<j>_<k> with positions in the input list
    int i = 0, j = 0, k = 0;
    std::sscanf(ar.id.c_str(), "h%d_%d_%d", &i, &j, &k);
    d.maps.push_back(homs[i][j][k]);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Finite lattices

struct FinLattice {
  std::vector<std::string> elements;
  std::vector<std::vector<bool>> leq;

  std::size_t size() const { return elements.size(); }

  /// Greatest lower bound, if one exists.
  std::optional<int> meet(int a, int b) const {
    std::optional<int> best;
    for (std::size_t c = 0; c < size(); ++c)
      if (leq[c][a] && leq[c][b] && (!best || leq[*best][c])) best = static_cast<int>(c);
    if (best)
      for (std::size_t c = 0; c < size(); ++c)
        if (leq[c][a] && leq[c][b] && !leq[c][*best]) return std::nullopt;
    return best;
  }
  std::optional<int> join(int a, int b) const {
    std::optional<int> best;
    for (std::size_t c = 0; c < size(); ++c)
      if (leq[a][c] && leq[b][c] && (!best || leq[c][*best])) best = static_cast<int>(c);
    if (best)
      for (std::size_t c = 0; c < size(); ++c)
        if (leq[a][c] && leq[b][c] && !leq[*best][c]) return std::nullopt;
    return best;
  }
  int top() const {
    for (std::size_t c = 0; c < size(); ++c) {
      bool all = true;
      for (std::size_t x = 0; x < size(); ++x) all = all && leq[x][c];
      if (all) return static_cast<int>(c);
    }
    return -1;
  }
  int bottom() const {
    for (std::size_t c = 0; c < size(); ++c) {
      bool all = true;
      for (std::size_t x = 0; x < size(); ++x) all = all && leq[c][x];
      if (all) return static_cast<int>(c);
    }
    return -1;
  }

  /// Family of subsets ordered by inclusion, elements rendered with `names`.
  static FinLattice of_subsets(const std::vector<Subset>& family, const std::vector<std::string>& names) {
    FinLattice l;
    for (const auto& s : family) l.elements.push_back(show_subset(s, names));
    l.leq.assign(family.size(), std::vector<bool>(family.size()));
    for (std::size_t a = 0; a < family.size(); ++a)
      for (std::size_t b = 0; b < family.size(); ++b) l.leq[a][b] = family[a].is_subset_of(family[b]);
    return l;
  }

  bool operator==(const FinLattice&) const = default;
};

inline Report validate_lattice(const FinLattice& l) {
  Report rep;
  const std::size_t n = l.size();
  if (l.leq.size() != n || std::any_of(l.leq.begin(), l.leq.end(), [&](const auto& r) { return r.size() != n; })) {
    rep.structural("order", "table size");
    return rep;
  }
  if (n == 0) {
    rep.structural("carrier", "empty lattice");
    return rep;
  }
  std::set<std::string> names(l.elements.begin(), l.elements.end());
  if (names.size() != n) rep.structural("carrier", "duplicate element names");
  for (std::size_t a = 0; a < n; ++a) {
    if (!l.leq[a][a]) rep.structural(l.elements[a], "reflexivity");
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && l.leq[a][b] && l.leq[b][a]) rep.structural(l.elements[a] + ", " + l.elements[b], "antisymmetry");
      for (std::size_t c = 0; c < n; ++c)
        if (l.leq[a][b] && l.leq[b][c] && !l.leq[a][c]) rep.structural(l.elements[a] + ", " + l.elements[c], "transitivity");
      if (!l.meet(a, b) || !l.join(a, b)) rep.structural(l.elements[a] + ", " + l.elements[b], "meet or join missing");
    }
  }
  return rep;
}

/// Thin category of the lattice order; element e is object object_index(elements[e]).
inline CatRef poset_category(const FinLattice& l) {
  return share(preorder_category(l.elements, [&](int a, int b) { return static_cast<bool>(l.leq[a][b]); }));
}

/// Monotone map between lattices, as a functor between their order categories.
inline Functor monotone_functor(const FinLattice& a, const CatRef& ca, const FinLattice& b, const CatRef& cb,
                                const Function& map) {
  Functor F{ca, cb, std::vector<int>(a.size()), {}, Variance::covariant};
  for (std::size_t e = 0; e < a.size(); ++e) F.omap[ca->object_index(a.elements[e])] = cb->object_index(b.elements[map[e]]);
  for (const auto& ar : ca->arrows) F.amap.push_back(cb->hom(F.omap[ar.src], F.omap[ar.dst]).at(0));
  return F;
}

inline bool is_monotone(const FinLattice& a, const FinLattice& b, const Function& f) {
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a.leq[x][y] && !b.leq[f[x]][f[y]]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Filter pairs

/// F is contravariant: Fmap[f] for f : M → N maps F(N) → F(M). i[M][t] ⊆ |M|.
struct FilterPairFin {
  AlgDiagram base;
  std::vector<FinLattice> F;
  std::vector<Function> Fmap;
  std::vector<std::vector<Subset>> i;
  bool finitary = true;
};

inline std::string pair_loc(const std::string& a, const std::string& b) { return "(" + a + ", " + b + ")"; }

inline Report validate_fp(const FilterPairFin& fp) {
  return guarded([&] {
    Report rep = validate_alg_diagram(fp.base);
    if (!rep.ok()) return rep;
    const FinCat& C = *fp.base.cat;
    if (static_cast<int>(fp.F.size()) != C.n_obj() || static_cast<int>(fp.Fmap.size()) != C.n_arr() ||
        static_cast<int>(fp.i.size()) != C.n_obj()) {
      rep.structural("filter pair", "table sizes");
      return rep;
    }
    for (int o = 0; o < C.n_obj(); ++o) {
      rep.merge(validate_lattice(fp.F[o]), C.objects[o]);
      if (fp.i[o].size() != fp.F[o].size()) rep.structural(C.objects[o], "i component size");
      for (const auto& s : fp.i[o])
        if (s.size() != fp.base.size(o)) rep.structural(C.objects[o], "i image not a subset of the carrier");
    }
    if (!rep.ok()) return rep;
    for (int f = 0; f < C.n_arr(); ++f) {
      const Function& m = fp.Fmap[f];
      const int M = C.src(f), N = C.dst(f);
      bool shape = m.size() == fp.F[N].size() &&
                   std::all_of(m.begin(), m.end(), [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < fp.F[M].size(); });
      if (!shape) rep.structural(C.arrows[f].id, "F(f) shape");
      else if (!is_monotone(fp.F[N], fp.F[M], m)) rep.structural(C.arrows[f].id, "F(f) not monotone");
    }
    for (int o = 0; o < C.n_obj(); ++o)
      for (std::size_t a = 0; a < fp.F[o].size(); ++a)
        for (std::size_t b = 0; b < fp.F[o].size(); ++b)
          if (fp.F[o].leq[a][b] && !fp.i[o][a].is_subset_of(fp.i[o][b]))
            rep.structural(pair_loc(C.objects[o], fp.F[o].elements[a]), "i not monotone");
    if (!rep.ok()) return rep;

    for (int f = 0; f < C.n_arr(); ++f) {
      const int M = C.src(f), N = C.dst(f);
      if (C.is_identity(f) && fp.Fmap[f] != identity_function(fp.F[M].size()))
        rep.violation(C.arrows[f].id, "F(id) is not the identity");
      for (int g = 0; g < C.n_arr(); ++g)
        if (C.dst(f) == C.src(g) && C.compose(g, f) >= 0 && fp.Fmap[C.compose(g, f)] != compose_fn(fp.Fmap[f], fp.Fmap[g]))
          rep.violation(pair_loc(C.arrows[g].id, C.arrows[f].id), "F(g.f) = F(f).F(g)");
      const FinLattice& LN = fp.F[N];
      for (std::size_t a = 0; a < LN.size(); ++a)
        for (std::size_t b = 0; b < LN.size(); ++b) {
          const int ab = *LN.meet(a, b);
          const int fab = *fp.F[M].meet(fp.Fmap[f][a], fp.Fmap[f][b]);
          if (fp.Fmap[f][ab] != fab)
            rep.violation(pair_loc(C.arrows[f].id, "{" + LN.elements[a] + "," + LN.elements[b] + "}"), "F(f) preserves meets");
        }
      if (fp.Fmap[f][LN.top()] != fp.F[M].top()) rep.violation(pair_loc(C.arrows[f].id, "{}"), "F(f) preserves meets");
      for (std::size_t t = 0; t < LN.size(); ++t)
        if (fp.i[M][fp.Fmap[f][t]] != preimage(fp.base.maps[f], fp.i[N][t]))
          rep.violation(pair_loc(C.arrows[f].id, LN.elements[t]), "naturality of i");
    }
    if (fp.finitary)
      for (int o = 0; o < C.n_obj(); ++o) {
        const FinLattice& L = fp.F[o];
        if (fp.i[o][L.top()] != full_subset(fp.base.size(o))) rep.violation(pair_loc(C.objects[o], "{}"), "i preserves infima");
        for (std::size_t a = 0; a < L.size(); ++a)
          for (std::size_t b = a + 1; b < L.size(); ++b)
            if (fp.i[o][*L.meet(a, b)] != (fp.i[o][a] & fp.i[o][b]))
              rep.violation(pair_loc(C.objects[o], "{" + L.elements[a] + "," + L.elements[b] + "}"), "i preserves infima");
      }
    return rep;
  });
}

/// (H, j) : (F, i) → (F', i'), H : base' → base, j[M'] : F'(M') → F(H M').
struct FpMorphism {
  Functor H;
  std::vector<Function> j;

  bool operator==(const FpMorphism&) const = default;
};

inline FpMorphism identity_fp_morphism(const FilterPairFin& fp) {
  FpMorphism m{identity_functor(fp.base.cat), {}};
  for (const auto& l : fp.F) m.j.push_back(identity_function(l.size()));
  return m;
}

/// (H', j') • (H, j) = (H ∘ H', j • j') with (j • j')_{M''} = j_{H'(M'')} ∘ j'_{M''}.
inline FpMorphism compose(const FpMorphism& second, const FpMorphism& first) {
  FpMorphism out{compose(first.H, second.H), {}};
  for (std::size_t m = 0; m < second.j.size(); ++m) out.j.push_back(compose_fn(first.j[second.H.omap[m]], second.j[m]));
  return out;
}

inline Report validate_fp_morphism(const FpMorphism& m, const FilterPairFin& src, const FilterPairFin& dst) {
  return guarded([&] {
    Report rep;
    const FinCat& Cd = *dst.base.cat;
    if (!same_cat(m.H.src, dst.base.cat) || !same_cat(m.H.dst, src.base.cat) || m.H.variance != Variance::covariant) {
      rep.structural("H", "functor has wrong endpoints");
      return rep;
    }
    rep.merge(validate_functor(m.H), "H");
    if (!rep.ok()) return rep;
    // H must act on structures over the same carriers for the triangle to typecheck
    for (int o = 0; o < Cd.n_obj(); ++o)
      if (dst.base.size(o) != src.base.size(m.H.omap[o])) rep.structural(Cd.objects[o], "H changes the carrier");
    for (int f = 0; f < Cd.n_arr(); ++f)
      if (rep.ok() && dst.base.maps[f] != src.base.maps[m.H.amap[f]]) rep.structural(Cd.arrows[f].id, "H changes the underlying function");
    if (m.j.size() != static_cast<std::size_t>(Cd.n_obj())) rep.structural("j", "component table size");
    if (!rep.ok()) return rep;
    for (int o = 0; o < Cd.n_obj(); ++o) {
      const FinLattice& from = dst.F[o];
      const FinLattice& to = src.F[m.H.omap[o]];
      const Function& jj = m.j[o];
      bool shape = jj.size() == from.size() &&
                   std::all_of(jj.begin(), jj.end(), [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < to.size(); });
      if (!shape) rep.structural(Cd.objects[o], "j component shape");
      else if (!is_monotone(from, to, jj)) rep.structural(Cd.objects[o], "j component not monotone");
    }
    if (!rep.ok()) return rep;
    for (int f = 0; f < Cd.n_arr(); ++f) {
      const int M = Cd.src(f), N = Cd.dst(f);
      if (compose_fn(src.Fmap[m.H.amap[f]], m.j[N]) != compose_fn(m.j[M], dst.Fmap[f]))
        rep.violation(Cd.arrows[f].id, "naturality of j");
    }
    for (int o = 0; o < Cd.n_obj(); ++o) {
      const int Ho = m.H.omap[o];
      for (std::size_t t = 0; t < dst.F[o].size(); ++t)
        if (src.i[Ho][m.j[o][t]] != dst.i[o][t])
          rep.violation(pair_loc(Cd.objects[o], dst.F[o].elements[t]), "filter pair triangle",
                        {show_subset(src.i[Ho][m.j[o][t]], src.base.algebras[Ho].carrier),
                         show_subset(dst.i[o][t], dst.base.algebras[o].carrier)});
    }
    return rep;
  });
}

// ---------------------------------------------------------------------------
// Induced institution and π-institution

/// Sig = base, Sen = carriers, Mod(M) = F(M) as an order category, t ⊨ m iff m ∈ i_M(t).
inline Institution fp_institution(const FilterPairFin& fp) {
  const FinCat& C = *fp.base.cat;
  Institution I{fp.base.cat, SetFunctor{fp.base.cat, {}, fp.base.maps, Variance::covariant}, {}, {}, {}};
  for (int o = 0; o < C.n_obj(); ++o) {
    I.sen.carriers.push_back(fp.base.algebras[o].carrier);
    I.mod.push_back(poset_category(fp.F[o]));
    std::vector<Subset> sat(fp.F[o].size());
    for (std::size_t t = 0; t < fp.F[o].size(); ++t) sat[I.mod[o]->object_index(fp.F[o].elements[t])] = fp.i[o][t];
    I.sat.push_back(sat);
  }
  for (int f = 0; f < C.n_arr(); ++f) {
    const int M = C.src(f), N = C.dst(f);
    I.mod_map.push_back(monotone_functor(fp.F[N], I.mod[N], fp.F[M], I.mod[M], fp.Fmap[f]));
  }
  return I;
}

/// C_M(X) = i_M(t_X), t_X the meet of {t : X ⊆ i_M(t)}.
inline PiInstitution fp_pi(const FilterPairFin& fp, Guard& guard) {
  if (!fp.finitary) throw Refusal("fp_pi needs the infima-preservation flag");
  const FinCat& C = *fp.base.cat;
  PiInstitution J{fp.base.cat, SetFunctor{fp.base.cat, {}, fp.base.maps, Variance::covariant}, {}};
  for (int o = 0; o < C.n_obj(); ++o) {
    const FinLattice& L = fp.F[o];
    const std::size_t n = fp.base.size(o);
    J.sen.carriers.push_back(fp.base.algebras[o].carrier);
    std::vector<Subset> closed;
    guard.tick(std::uint64_t{1} << std::min<std::size_t>(n, 40));
    for_each_subset(n, [&](const Subset& X) {
      int t = L.top();
      for (std::size_t u = 0; u < L.size(); ++u)
        if (X.is_subset_of(fp.i[o][u])) t = *L.meet(t, static_cast<int>(u));
      closed.push_back(fp.i[o][t]);
    });
    J.closures.push_back(ClosureOp::from_family(n, closed));
  }
  return J;
}

/// D(H, j) = (H, Id, j) : I_{(F', i')} → I_{(F, i)}, an institution morphism.
inline InsMap fp_map_to_institution_map(const FpMorphism& m, const FilterPairFin& src, const FilterPairFin& dst) {
  Institution Is = fp_institution(src), Id = fp_institution(dst);
  InsMap out{MapKind::ins_morphism, m.H, {}, {}};
  out.phi.src = Id.sig;
  out.phi.dst = Is.sig;
  const FinCat& Cd = *dst.base.cat;
  for (int o = 0; o < Cd.n_obj(); ++o) {
    out.alpha.push_back(identity_function(dst.base.size(o)));
    const int Ho = m.H.omap[o];
    out.beta.push_back(monotone_functor(dst.F[o], Id.mod[o], src.F[Ho], Is.mod[Ho], m.j[o]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logics and filter pairs

/// Closure systems per object with i = inclusion and F(f) = f^{-1}; throws if a family is not preimage closed.
inline FilterPairFin inclusion_pair(const AlgDiagram& d, std::vector<std::vector<Subset>> families) {
  const FinCat& C = *d.cat;
  FilterPairFin fp{d, {}, {}, {}, true};
  for (int o = 0; o < C.n_obj(); ++o) {
    std::sort(families[o].begin(), families[o].end());
    families[o].erase(std::unique(families[o].begin(), families[o].end()), families[o].end());
    fp.F.push_back(FinLattice::of_subsets(families[o], d.algebras[o].carrier));
    fp.i.push_back(families[o]);
  }
  for (int f = 0; f < C.n_arr(); ++f) {
    const auto& into = fp.i[C.src(f)];
    Function m;
    for (const auto& t : fp.i[C.dst(f)]) {
      auto it = std::find(into.begin(), into.end(), preimage(d.maps[f], t));
      if (it == into.end()) throw StructuralError("inclusion_pair: " + C.arrows[f].id + ": preimage outside the family");
      m.push_back(static_cast<int>(it - into.begin()));
    }
    fp.Fmap.push_back(m);
  }
  return fp;
}

/// F(M) = bounded l-filters of M ordered by ⊆, i = inclusion, F(h) = h^{-1}.
inline FilterPairFin logic_to_fp(const prop::Logic& l, const AlgDiagram& diagram, Guard& guard) {
  if (!(l.signature == diagram.sig)) throw StructuralError("logic_to_fp: diagram is over another signature");
  prop::BoundedLogic b = prop::bound(l, guard);
  const FinCat& C = *diagram.cat;
  std::vector<std::vector<Subset>> families;
  for (int o = 0; o < C.n_obj(); ++o) {
    const std::size_t n = diagram.size(o);
    guard.tick(std::uint64_t{1} << std::min<std::size_t>(n, 40));
    std::vector<Subset> family;
    for_each_subset(n, [&](const Subset& s) {
      if (prop::is_lfilter(b, diagram.algebras[o], s)) family.push_back(s);
    });
    for (std::size_t a = 0; a < family.size(); ++a)
      for (std::size_t c = a + 1; c < family.size(); ++c)
        if (std::find(family.begin(), family.end(), family[a] & family[c]) == family.end())
          throw Refusal("bounded l-filters of " + C.objects[o] + " not closed under intersection: " +
                        show_subset(family[a], diagram.algebras[o].carrier) + ", " +
                        show_subset(family[c], diagram.algebras[o].carrier));
    families.push_back(family);
  }
  try {
    return inclusion_pair(diagram, families);
  } catch (const StructuralError& e) {
    throw StructuralError(std::string("logic_to_fp: ") + e.what());
  }
}

/// The factorization (Id, j^G) : (Fi, ι) → (G, i^G) with j^G_M(t) = i^G_M(t) read as an element of Fi(M).
inline FpMorphism counit_morphism(const FilterPairFin& fi, const FilterPairFin& G) {
  FpMorphism m{identity_functor(G.base.cat), {}};
  m.H.src = G.base.cat;
  m.H.dst = fi.base.cat;
  const FinCat& C = *G.base.cat;
  for (int o = 0; o < C.n_obj(); ++o) {
    Function jj;
    for (const auto& s : G.i[o]) {
      auto it = std::find(fi.i[o].begin(), fi.i[o].end(), s);
      if (it == fi.i[o].end())
        throw StructuralError("counit: " + show_subset(s, G.base.algebras[o].carrier) + " is not a filter at " + C.objects[o]);
      jj.push_back(static_cast<int>(it - fi.i[o].begin()));
    }
    m.j.push_back(jj);
  }
  return m;
}

/// Consequence induced on one object's carrier: Γ ⊢ a iff every t with Γ ⊆ i(t) has a ∈ i(t).
struct FpConsequence {
  std::vector<std::string> elements;
  std::vector<Subset> theories;  // the sets i(t)

  bool entails(const Subset& gamma, int a) const {
    for (const auto& th : theories)
      if (gamma.is_subset_of(th) && !th.test(a)) return false;
    return true;
  }
  Subset close(const Subset& gamma) const {
    Subset out(elements.size());
    for (std::size_t a = 0; a < elements.size(); ++a)
      if (entails(gamma, static_cast<int>(a))) out.set(a);
    return out;
  }
};

/// Reflexive, monotone and idempotent over all subsets; the failing set if not.
inline std::optional<Subset> tarskian_violation(const FpConsequence& c) {
  const std::size_t n = c.elements.size();
  std::optional<Subset> bad;
  std::vector<Subset> closure;
  for_each_subset(n, [&](const Subset& X) { closure.push_back(c.close(X)); });
  for_each_subset(n, [&](const Subset& X) {
    if (bad) return;
    const Subset& cx = closure[X.to_ulong()];
    if (!X.is_subset_of(cx) || closure[cx.to_ulong()] != cx) bad = X;
    for (std::size_t a = 0; !bad && a < n; ++a) {
      Subset Y = X;
      Y.set(a);
      if (!cx.is_subset_of(closure[Y.to_ulong()])) bad = X;
    }
  });
  return bad;
}

inline FpConsequence fp_to_logic(const FilterPairFin& fp, int syntactic_object) {
  if (syntactic_object < 0 || syntactic_object >= fp.base.cat->n_obj()) throw StructuralError("fp_to_logic: unknown object");
  if (fp.base.size(syntactic_object) > 16) throw Refusal("fp_to_logic: carrier > 16");
  FpConsequence c{fp.base.algebras[syntactic_object].carrier, fp.i[syntactic_object]};
  if (auto bad = tarskian_violation(c)) throw StructuralError("fp_to_logic: not Tarskian at " + show_subset(*bad, c.elements));
  return c;
}

/// Formulas read through generators v (variables → carrier elements): Γ ⊢ φ iff v[Γ] ⊢ v(φ).
inline bool fp_entails(const FpConsequence& c, const Matrix& algebra, const std::vector<int>& generators,
                       const std::vector<prop::Formula>& gamma, const prop::Formula& phi) {
  Subset g(c.elements.size());
  for (const auto& x : gamma) g.set(prop::eval(algebra, x, generators));
  return c.entails(g, prop::eval(algebra, phi, generators));
}

// ---------------------------------------------------------------------------
// Fixtures and generators

/// Free Boolean algebra over {¬, ∧} on n ≤ 2 generators: elements are truth tables over 2^n rows.
/// Returns the algebra and the generator elements.
inline std::pair<Matrix, std::vector<int>> free_boolean_algebra(int n) {
  if (n < 0 || n > 2) throw StructuralError("free_boolean_algebra: n ≤ 2");
  const int rows = 1 << n, size = 1 << rows;
  Matrix m;
  for (int e = 0; e < size; ++e) {
    std::string name;
    for (int r = 0; r < rows; ++r) name += (e >> r & 1) ? '1' : '0';
    m.carrier.push_back(name);
  }
  std::vector<int> neg, conj;
  for (int e = 0; e < size; ++e) neg.push_back(~e & (size - 1));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) conj.push_back(a & b);
  m.ops = {neg, conj};
  m.designated = Subset(size);
  std::vector<int> gens;
  for (int g = 0; g < n; ++g) {
    int e = 0;
    for (int r = 0; r < rows; ++r)
      if (r >> g & 1) e |= 1 << r;
    gens.push_back(e);
  }
  return {m, gens};
}

/// Single-object diagram {B2, id}.
inline AlgDiagram b2_diagram() {
  Guard g;
  return full_diagram(prop::classical_signature(), {{"B2", prop::b2()}}, g);
}

/// Classical logic bounded so that its filters on B2 are exactly {1} and {0,1}.
inline prop::Logic classical_for_filters() { return prop::classical_logic(1, 3); }

/// The filter pair of classical logic over {B2, id}.
inline FilterPairFin fi_of_classical() {
  Guard g;
  return logic_to_fp(classical_for_filters(), b2_diagram(), g);
}

/// Constant one-point lattice with i(⊤) = M.
inline FilterPairFin constant_top(const AlgDiagram& d) {
  FilterPairFin fp{d, {}, {}, {}, true};
  for (int o = 0; o < d.cat->n_obj(); ++o) {
    fp.F.push_back(FinLattice{{"T"}, {{true}}});
    fp.i.push_back({full_subset(d.size(o))});
  }
  fp.Fmap.assign(d.cat->n_arr(), Function{0});
  return fp;
}

/// Random closure systems on each object, saturated under preimages.
inline FilterPairFin random_fp(gen::Rng& rng, const AlgDiagram& d) {
  const FinCat& C = *d.cat;
  SetFunctor sen{d.cat, {}, d.maps, Variance::covariant};
  std::vector<std::vector<Subset>> seeds(C.n_obj());
  for (int o = 0; o < C.n_obj(); ++o) {
    sen.carriers.push_back(d.algebras[o].carrier);
    const int k = gen::uniform(rng, 0, 3);
    for (int s = 0; s < k; ++s) seeds[o].push_back(gen::random_subset(rng, d.size(o)));
  }
  std::vector<std::vector<Subset>> families;
  for (const auto& c : gen::saturate_closures(sen, seeds)) families.push_back(c.closed);
  return inclusion_pair(d, families);
}

/// Random algebras over one unary operation, all homomorphisms between them.
inline AlgDiagram random_unary_diagram(gen::Rng& rng, int max_obj = 2, int max_carrier = 3) {
  PropSignature s{{{"s", 1}}};
  std::vector<std::pair<std::string, Matrix>> algs;
  const int n = gen::uniform(rng, 1, max_obj);
  for (int o = 0; o < n; ++o) {
    Matrix m;
    const int k = gen::uniform(rng, 1, max_carrier);
    for (int e = 0; e < k; ++e) m.carrier.push_back(std::string(1, static_cast<char>('a' + e)) + std::to_string(o));
    std::vector<int> op;
    for (int e = 0; e < k; ++e) op.push_back(gen::uniform(rng, 0, k - 1));
    m.ops = {op};
    m.designated = Subset(k);
    algs.push_back({"A" + std::to_string(o), m});
  }
  Guard g;
  return full_diagram(s, algs, g);
}

}  // namespace insfin::fp
