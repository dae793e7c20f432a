#pragma once

#include "insfin/fincat.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace insfin {

/// A Cat-valued functor on a finite base, possibly with coherence cells.
///
/// contravariant: transport[f] : fiber(dst f) → fiber(src f),
///   coh_comp[(f, g)] : F(f)∘F(g) ⇒ F(g∘f) for f: c → d, g: d → e.
/// covariant: transport[f] : fiber(src f) → fiber(dst f),
///   coh_comp[(f, g)] : F(g)∘F(f) ⇒ F(g∘f).
/// coh_id[c] : 1 ⇒ F(id_c). Empty coherence tables mean the functor is strict.
struct IndexedCat {
  CatRef base;
  std::vector<CatRef> fibers;
  std::vector<Functor> transport;
  Variance variance = Variance::contravariant;
  std::vector<NatTrans> coh_id;
  std::map<std::pair<int, int>, NatTrans> coh_comp;

  bool strict() const { return coh_id.empty() && coh_comp.empty(); }
  int fiber_of(int f, bool source_side) const {
    // the fiber a transport reads from (source_side) or writes to
    const bool co = variance == Variance::covariant;
    return (co == source_side) ? base->src(f) : base->dst(f);
  }
};

struct GrothCat {
  CatRef total;
  Functor projection;
  std::vector<std::pair<int, int>> object_pair;  // total object → (c, x)
  std::map<std::pair<int, int>, int> object_of;  // (c, x) → total object
  std::vector<std::array<int, 4>> arrow_cell;     // total arrow → (f, φ, x, y)
};

inline std::string groth_object_id(const IndexedCat& ix, int c, int x) {
  return "(" + ix.base->objects[c] + ", " + ix.fibers[c]->objects[x] + ")";
}

/// Arrow ids name the base arrow, the fiber arrow and the endpoint objects the fiber arrow leaves implicit.
inline std::string groth_arrow_id(const IndexedCat& ix, int f, int fiber, int phi, int x, int y) {
  const FinCat& B = *ix.base;
  return "(" + B.arrows[f].id + ", " + ix.fibers[fiber]->arrows[phi].id + " | " +
         ix.fibers[B.src(f)]->objects[x] + " -> " + ix.fibers[B.dst(f)]->objects[y] + ")";
}

inline Report validate_indexed(const IndexedCat& ix) {
  Report rep;
  const FinCat& B = *ix.base;
  if (static_cast<int>(ix.fibers.size()) != B.n_obj() || static_cast<int>(ix.transport.size()) != B.n_arr()) {
    rep.structural("indexed", "fiber or transport table size");
    return rep;
  }
  for (int c = 0; c < B.n_obj(); ++c) rep.merge(validate_category(*ix.fibers[c]), "fiber(" + B.objects[c] + ")");
  for (int f = 0; f < B.n_arr(); ++f) {
    const Functor& T = ix.transport[f];
    if (!same_cat(T.src, ix.fibers[ix.fiber_of(f, true)]) || !same_cat(T.dst, ix.fibers[ix.fiber_of(f, false)])) {
      rep.structural(B.arrows[f].id, "transport between wrong fibers");
      continue;
    }
    rep.merge(validate_functor(T), "F(" + B.arrows[f].id + ")");
  }
  if (!rep.ok()) return rep;

  const bool co = ix.variance == Variance::covariant;
  if (ix.strict()) {
    for (int c = 0; c < B.n_obj(); ++c)
      if (!(ix.transport[B.identity[c]] == identity_functor(ix.fibers[c])))
        rep.violation(B.objects[c], "strict identity", {B.arrows[B.identity[c]].id});
    for (int f = 0; f < B.n_arr(); ++f)
      for (int g = 0; g < B.n_arr(); ++g) {
        if (B.dst(f) != B.src(g)) continue;
        Functor lhs = co ? compose(ix.transport[g], ix.transport[f]) : compose(ix.transport[f], ix.transport[g]);
        if (!(lhs == ix.transport[B.compose(g, f)]))
          rep.violation("(" + B.arrows[g].id + ", " + B.arrows[f].id + ")", "strict composition",
                        {B.arrows[g].id, B.arrows[f].id});
      }
    return rep;
  }
  if (static_cast<int>(ix.coh_id.size()) != B.n_obj()) {
    rep.structural("coh_id", "coherence table size");
    return rep;
  }
  auto check_cell = [&](const NatTrans& t, const Functor& from, const Functor& to, const std::string& where) {
    if (!(t.src == from) || !(t.dst == to)) {
      rep.structural(where, "coherence cell has wrong boundary");
      return;
    }
    Report r = validate_nat_trans(t);
    rep.merge(r, where);
    if (!r.ok()) return;
    for (int comp : t.components)
      if (!t.src.dst->inverse(comp)) rep.structural(where, "coherence cell not invertible", {t.src.dst->arrows[comp].id});
  };
  for (int c = 0; c < B.n_obj(); ++c)
    check_cell(ix.coh_id[c], identity_functor(ix.fibers[c]), ix.transport[B.identity[c]], "alpha^" + B.objects[c]);
  for (int f = 0; f < B.n_arr(); ++f)
    for (int g = 0; g < B.n_arr(); ++g) {
      if (B.dst(f) != B.src(g)) continue;
      std::string where = "alpha^{" + B.arrows[f].id + "," + B.arrows[g].id + "}";
      auto it = ix.coh_comp.find({f, g});
      if (it == ix.coh_comp.end()) {
        rep.structural(where, "missing coherence cell");
        continue;
      }
      Functor from = co ? compose(ix.transport[g], ix.transport[f]) : compose(ix.transport[f], ix.transport[g]);
      check_cell(it->second, from, ix.transport[B.compose(g, f)], where);
    }
  return rep;
}

namespace detail {

inline int coh_id_at(const IndexedCat& ix, int c, int x) {
  return ix.strict() ? ix.fibers[c]->identity[x] : ix.coh_id[c].components[x];
}

/// Component of α^{f,g} at the object it is indexed by (z for contravariant, x for covariant).
inline int coh_comp_at(const IndexedCat& ix, int f, int g, int obj) {
  if (ix.strict()) {
    const int fib = ix.variance == Variance::covariant ? ix.base->dst(g) : ix.base->src(f);
    const Functor& T = ix.transport[ix.base->compose(g, f)];
    return ix.fibers[fib]->identity[T.omap[obj]];
  }
  return ix.coh_comp.at({f, g}).components[obj];
}

inline int inv(const FinCat& c, int a) {
  auto i = c.inverse(a);
  if (!i) throw StructuralError("coherence cell not invertible at " + c.arrows[a].id);
  return *i;
}

}  // namespace detail

inline GrothCat groth(const IndexedCat& ix) {
  Report v = validate_indexed(ix);
  if (!v.ok()) throw StructuralError("invalid indexed category: " + v.items.front().location + " " + v.items.front().law);
  const FinCat& B = *ix.base;
  const bool co = ix.variance == Variance::covariant;

  struct Cell {
    int f, phi, x, y;
  };
  std::vector<Cell> cells;
  std::map<std::tuple<int, int, int, int>, std::string> ids;
  CategoryBuilder b;
  for (int c = 0; c < B.n_obj(); ++c)
    for (int x = 0; x < ix.fibers[c]->n_obj(); ++x) b.object(groth_object_id(ix, c, x));
  for (int f = 0; f < B.n_arr(); ++f) {
    const int c = B.src(f), d = B.dst(f);
    const Functor& T = ix.transport[f];
    const int fib = co ? d : c;
    for (int x = 0; x < ix.fibers[c]->n_obj(); ++x)
      for (int y = 0; y < ix.fibers[d]->n_obj(); ++y) {
        // contravariant: φ : x → F(f)(y) in F(c); covariant: φ : F(f)(x) → y in F(d)
        auto hom = co ? ix.fibers[d]->hom(T.omap[x], y) : ix.fibers[c]->hom(x, T.omap[y]);
        for (int phi : hom) {
          std::string id = groth_arrow_id(ix, f, fib, phi, x, y);
          b.arrow(id, groth_object_id(ix, c, x), groth_object_id(ix, d, y));
          ids[{f, phi, x, y}] = id;
          cells.push_back({f, phi, x, y});
        }
      }
  }
  for (int c = 0; c < B.n_obj(); ++c)
    for (int x = 0; x < ix.fibers[c]->n_obj(); ++x) {
      int a = detail::coh_id_at(ix, c, x);
      if (co) a = detail::inv(*ix.fibers[c], a);
      b.identity(groth_object_id(ix, c, x), ids.at({B.identity[c], a, x, x}));
    }
  for (const auto& p : cells)
    for (const auto& q : cells) {
      // q ∘ p with p = (f, φ): (c, x) → (d, y) and q = (g, ψ): (d, y) → (e, z)
      if (B.dst(p.f) != B.src(q.f) || p.y != q.x) continue;
      const int f = p.f, g = q.f, gf = B.compose(g, f);
      const int c = B.src(f), e = B.dst(g);
      int chi;
      if (!co) {
        const FinCat& Fc = *ix.fibers[c];
        int lifted = ix.transport[f].amap[q.phi];
        chi = Fc.compose(detail::coh_comp_at(ix, f, g, q.y), Fc.compose(lifted, p.phi));
      } else {
        const FinCat& Fe = *ix.fibers[e];
        int pushed = ix.transport[g].amap[p.phi];
        int a_inv = detail::inv(Fe, detail::coh_comp_at(ix, f, g, p.x));
        chi = Fe.compose(q.phi, Fe.compose(pushed, a_inv));
      }
      auto it = ids.find({gf, chi, p.x, q.y});
      if (it == ids.end()) throw StructuralError("groth: composite outside the total category");
      b.compose(ids.at({g, q.phi, q.x, q.y}), ids.at({f, p.phi, p.x, p.y}), it->second);
    }

  GrothCat out;
  out.total = share(b.build(false));
  const FinCat& T = *out.total;
  out.projection = Functor{out.total, ix.base, std::vector<int>(T.n_obj()), std::vector<int>(T.n_arr()),
                           Variance::covariant};
  for (int c = 0; c < B.n_obj(); ++c)
    for (int x = 0; x < ix.fibers[c]->n_obj(); ++x) {
      int o = T.object_index(groth_object_id(ix, c, x));
      out.object_of[{c, x}] = o;
      out.projection.omap[o] = c;
    }
  out.object_pair.resize(T.n_obj());
  for (const auto& [cx, o] : out.object_of) out.object_pair[o] = cx;
  out.arrow_cell.resize(T.n_arr());
  for (const auto& [key, id] : ids) {
    const int a = T.arrow_index(id);
    out.projection.amap[a] = std::get<0>(key);
    out.arrow_cell[a] = {std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key)};
  }
  return out;
}

/// Pseudonatural η : F ⇒ G. contravariant: gamma[f] : η_c∘F(f) ⇒ G(f)∘η_d;
/// covariant: gamma[f] : η_d∘F(f) ⇒ G(f)∘η_c. Empty gamma means strict naturality.
struct PseudoNat {
  std::vector<Functor> components;
  std::vector<NatTrans> gamma;
};

inline Report validate_pseudo_nat(const IndexedCat& F, const IndexedCat& G, const PseudoNat& eta) {
  Report rep;
  const FinCat& B = *F.base;
  if (!same_cat(F.base, G.base) || F.variance != G.variance) {
    rep.structural("eta", "indexed categories differ in base or variance");
    return rep;
  }
  if (static_cast<int>(eta.components.size()) != B.n_obj()) {
    rep.structural("eta", "component table size");
    return rep;
  }
  for (int c = 0; c < B.n_obj(); ++c) {
    const Functor& e = eta.components[c];
    if (!same_cat(e.src, F.fibers[c]) || !same_cat(e.dst, G.fibers[c])) {
      rep.structural(B.objects[c], "component fiber mismatch");
      continue;
    }
    rep.merge(validate_functor(e), "eta(" + B.objects[c] + ")");
  }
  if (!rep.ok()) return rep;
  const bool co = F.variance == Variance::covariant;
  for (int f = 0; f < B.n_arr(); ++f) {
    const int c = B.src(f), d = B.dst(f);
    Functor lhs = co ? compose(eta.components[d], F.transport[f]) : compose(eta.components[c], F.transport[f]);
    Functor rhs = co ? compose(G.transport[f], eta.components[c]) : compose(G.transport[f], eta.components[d]);
    if (eta.gamma.empty()) {
      if (!(lhs == rhs)) rep.violation(B.arrows[f].id, "strict naturality", {B.arrows[f].id});
      continue;
    }
    const NatTrans& g = eta.gamma.at(f);
    if (!(g.src == lhs) || !(g.dst == rhs)) {
      rep.structural(B.arrows[f].id, "gamma cell has wrong boundary");
      continue;
    }
    rep.merge(validate_nat_trans(g), "gamma^" + B.arrows[f].id);
  }
  return rep;
}

namespace detail {

inline int gamma_at(const IndexedCat& G, const PseudoNat& eta, int f, int obj, const Functor& rhs) {
  if (eta.gamma.empty()) {
    const int fib = G.variance == Variance::covariant ? G.base->dst(f) : G.base->src(f);
    return G.fibers[fib]->identity[rhs.omap[obj]];
  }
  return eta.gamma[f].components[obj];
}

}  // namespace detail

/// η♯ : F♯ → G♯.
inline Functor groth_map(const IndexedCat& F, const GrothCat& Ft, const IndexedCat& G, const GrothCat& Gt,
                         const PseudoNat& eta) {
  Report v = validate_pseudo_nat(F, G, eta);
  if (!v.ok()) throw StructuralError("invalid pseudonatural transformation: " + v.items.front().location);
  const FinCat& B = *F.base;
  const FinCat& TF = *Ft.total;
  const FinCat& TG = *Gt.total;
  const bool co = F.variance == Variance::covariant;
  Functor out{Ft.total, Gt.total, std::vector<int>(TF.n_obj()), std::vector<int>(TF.n_arr()), Variance::covariant};
  for (int o = 0; o < TF.n_obj(); ++o) {
    auto [c, x] = Ft.object_pair[o];
    out.omap[o] = Gt.object_of.at({c, eta.components[c].omap[x]});
  }
  for (int a = 0; a < TF.n_arr(); ++a) {
    const auto [f, phi, x, y] = Ft.arrow_cell[a];
    const int c = B.src(f), d = B.dst(f);
    const int ex = eta.components[c].omap[x], ey = eta.components[d].omap[y];
    const int fib = co ? d : c;
    int chi;
    if (!co) {
      Functor rhs = compose(G.transport[f], eta.components[d]);
      int gam = detail::gamma_at(G, eta, f, y, rhs);
      chi = G.fibers[c]->compose(gam, eta.components[c].amap[phi]);
    } else {
      Functor rhs = compose(G.transport[f], eta.components[c]);
      int gam_inv = detail::inv(*G.fibers[d], detail::gamma_at(G, eta, f, x, rhs));
      chi = G.fibers[d]->compose(eta.components[d].amap[phi], gam_inv);
    }
    int target = TG.arrow_index(groth_arrow_id(G, f, fib, chi, ex, ey));
    if (target < 0) throw StructuralError("groth_map: image arrow missing");
    out.amap[a] = target;
  }
  return out;
}

/// Modification μ : η ⇛ χ, one natural transformation η_c ⇒ χ_c per base object.
struct Modification {
  PseudoNat source;
  PseudoNat target;
  std::vector<NatTrans> components;
};

/// μ♯ : η♯ ⇒ χ♯.
inline NatTrans groth_2cell(const IndexedCat& F, const GrothCat& Ft, const IndexedCat& G, const GrothCat& Gt,
                            const Modification& mu) {
  const FinCat& B = *F.base;
  if (static_cast<int>(mu.components.size()) != B.n_obj()) throw StructuralError("modification: component table size");
  for (int c = 0; c < B.n_obj(); ++c) {
    const NatTrans& m = mu.components[c];
    if (!(m.src == mu.source.components[c]) || !(m.dst == mu.target.components[c]))
      throw StructuralError("modification: component boundary at " + B.objects[c]);
  }
  Functor eta = groth_map(F, Ft, G, Gt, mu.source);
  Functor chi = groth_map(F, Ft, G, Gt, mu.target);
  const bool co = F.variance == Variance::covariant;
  NatTrans out{eta, chi, {}};
  const FinCat& TF = *Ft.total;
  const FinCat& TG = *Gt.total;
  for (int o = 0; o < TF.n_obj(); ++o) {
    auto [c, x] = Ft.object_pair[o];
    const FinCat& Gc = *G.fibers[c];
    const int ex = mu.source.components[c].omap[x], cx = mu.target.components[c].omap[x];
    const int m = mu.components[c].components[x];
    int beta = detail::coh_id_at(G, c, co ? ex : cx);
    int phi = co ? Gc.compose(m, detail::inv(Gc, beta)) : Gc.compose(beta, m);
    int a = TG.arrow_index(groth_arrow_id(G, B.identity[c], c, phi, ex, cx));
    if (a < 0) throw StructuralError("groth_2cell: component arrow missing");
    out.components.push_back(a);
  }
  return out;
}

}  // namespace insfin
