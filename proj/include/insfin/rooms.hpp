#pragma once

#include "insfin/groth.hpp"
#include "insfin/instcore.hpp"

#include <map>
#include <string>
#include <vector>

namespace insfin {

/// ⟨S, M, (R_m)⟩ with rows[m] = {s : R_m(s) = 1}.
struct Room {
  std::vector<std::string> sentences;
  CatRef models;
  std::vector<Subset> rows;

  bool operator==(const Room& o) const {
    return sentences == o.sentences && same_cat(models, o.models) && rows == o.rows;
  }
};

/// (σ, μ) : r → r' with σ : S' → S and μ : M → M'.
struct RoomMorphism {
  Function sigma;
  Functor mu;

  bool operator==(const RoomMorphism&) const = default;
};

struct PiRoom {
  std::vector<std::string> sentences;
  ClosureOp closure;

  bool operator==(const PiRoom&) const = default;
};

/// σ : ⟨S, C⟩ → ⟨S', C'⟩ is a function S' → S.
using PiRoomMorphism = Function;

/// strict: σ*∘C = C'∘σ*.  lax: C'∘σ* ⊆ σ*∘C, which is the structurality condition.
enum class PiRoomLaw { strict, lax };

inline Report validate_room(const Room& r) {
  Report rep;
  if (!r.models) {
    rep.structural("room", "missing model category");
    return rep;
  }
  rep.merge(validate_category(*r.models), "models");
  if (static_cast<int>(r.rows.size()) != r.models->n_obj()) rep.structural("rows", "row table size");
  for (const auto& row : r.rows)
    if (row.size() != r.sentences.size()) rep.structural("rows", "row width");
  return rep;
}

inline Report validate_room_morphism(const RoomMorphism& f, const Room& src, const Room& dst) {
  Report rep;
  if (f.sigma.size() != dst.sentences.size()) rep.structural("sigma", "domain is not S'");
  for (int v : f.sigma)
    if (v < 0 || static_cast<std::size_t>(v) >= src.sentences.size()) rep.structural("sigma", "value outside S");
  if (!same_cat(f.mu.src, src.models) || !same_cat(f.mu.dst, dst.models)) rep.structural("mu", "wrong endpoints");
  if (!rep.ok()) return rep;
  rep.merge(validate_functor(f.mu), "mu");
  if (!rep.ok()) return rep;
  for (int m = 0; m < src.models->n_obj(); ++m)
    for (std::size_t s = 0; s < dst.sentences.size(); ++s)
      if (dst.rows[f.mu.omap[m]].test(s) != src.rows[m].test(f.sigma[s]))
        rep.violation("(" + src.models->objects[m] + ", " + dst.sentences[s] + ")", "room rows equation",
                      {src.models->objects[m], dst.sentences[s]});
  return rep;
}

inline Report validate_piroom_morphism(const PiRoomMorphism& sigma, const PiRoom& src, const PiRoom& dst,
                                       PiRoomLaw law = PiRoomLaw::strict) {
  Report rep;
  if (sigma.size() != dst.sentences.size()) rep.structural("sigma", "domain is not S'");
  for (int v : sigma)
    if (v < 0 || static_cast<std::size_t>(v) >= src.sentences.size()) rep.structural("sigma", "value outside S");
  if (!rep.ok()) return rep;
  for_each_subset(src.sentences.size(), [&](const Subset& x) {
    Subset lhs = preimage(sigma, src.closure.close(x));
    Subset rhs = dst.closure.close(preimage(sigma, x));
    bool ok = law == PiRoomLaw::strict ? lhs == rhs : rhs.is_subset_of(lhs);
    if (!ok)
      rep.violation(show_subset(x, src.sentences), law == PiRoomLaw::strict ? "pi-room equation" : "pi-room inclusion",
                    {show_subset(lhs, dst.sentences), show_subset(rhs, dst.sentences)});
  });
  return rep;
}

/// g ∘ f in the room category: (σ', μ') ∘ (σ, μ) = (σ ∘ σ', μ' ∘ μ).
inline RoomMorphism compose(const RoomMorphism& g, const RoomMorphism& f) {
  return {compose_fn(f.sigma, g.sigma), compose(g.mu, f.mu)};
}

inline RoomMorphism identity_room_morphism(const Room& r) {
  return {identity_function(r.sentences.size()), identity_functor(r.models)};
}

inline std::vector<RoomMorphism> enumerate_room_morphisms(const Room& src, const Room& dst, Guard& guard) {
  std::vector<RoomMorphism> out;
  auto mus = enumerate_functors(src.models, dst.models, guard);
  for_each_function(dst.sentences.size(), src.sentences.size(), [&](const Function& sigma) {
    guard.tick();
    for (const auto& mu : mus) {
      bool ok = true;
      for (int m = 0; m < src.models->n_obj() && ok; ++m)
        ok = preimage(sigma, src.rows[m]) == dst.rows[mu.omap[m]];
      if (ok) out.push_back({sigma, mu});
    }
    return true;
  });
  return out;
}

inline std::vector<PiRoomMorphism> enumerate_piroom_morphisms(const PiRoom& src, const PiRoom& dst, PiRoomLaw law,
                                                              Guard& guard) {
  std::vector<PiRoomMorphism> out;
  for_each_function(dst.sentences.size(), src.sentences.size(), [&](const Function& sigma) {
    guard.tick(std::size_t{1} << src.sentences.size());
    if (validate_piroom_morphism(sigma, src, dst, law).ok()) out.push_back(sigma);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// 𝓕 and 𝒢

/// C^r(S') = {s : R_m(s) = 1 for every m with R_m(S') ⊆ {1}}.
inline PiRoom room_F(const Room& r) { return {r.sentences, ClosureOp::generated(r.sentences.size(), r.rows)}; }

inline PiRoomMorphism room_F(const RoomMorphism& f) { return f.sigma; }

enum class GMode { closed_sets, powerset };

/// Models are the closed sets (or all subsets) in a codiscrete category; rows are characteristic functions.
inline Room room_G(const PiRoom& p, GMode mode = GMode::closed_sets) {
  std::vector<Subset> family;
  if (mode == GMode::powerset) for_each_subset(p.sentences.size(), [&](const Subset& s) { family.push_back(s); });
  else family = p.closure.closed;
  std::vector<std::string> ids;
  for (const auto& t : family) ids.push_back(show_subset(t, p.sentences));
  Room r{p.sentences, share(codiscrete_category(ids)), std::vector<Subset>(family.size())};
  for (const auto& t : family) r.rows[r.models->object_index(show_subset(t, p.sentences))] = t;
  return r;
}

/// 𝒢(σ) = (σ, σ*), σ* taking preimages between the model categories of room_G(src) and room_G(dst).
inline RoomMorphism room_G(const PiRoomMorphism& sigma, const Room& gsrc, const Room& gdst) {
  std::vector<int> omap;
  for (const auto& t : gsrc.rows) {
    Subset p = preimage(sigma, t);
    int o = gdst.models->object_index(show_subset(p, gdst.sentences));
    if (o < 0) throw StructuralError("room_G: preimage of a model is not a model of the target");
    omap.push_back(o);
  }
  return {sigma, codiscrete_functor(gsrc.models, gdst.models, std::move(omap))};
}

// ---------------------------------------------------------------------------
// Diagrams over a signature category (contravariant)

/// maps[h] : rooms[dst h] → rooms[src h].
struct RoomDiagram {
  CatRef sig;
  std::vector<Room> rooms;
  std::vector<RoomMorphism> maps;

  bool operator==(const RoomDiagram& o) const {
    return same_cat(sig, o.sig) && rooms == o.rooms && maps == o.maps;
  }
};

struct PiRoomDiagram {
  CatRef sig;
  std::vector<PiRoom> rooms;
  std::vector<PiRoomMorphism> maps;

  bool operator==(const PiRoomDiagram& o) const {
    return same_cat(sig, o.sig) && rooms == o.rooms && maps == o.maps;
  }
};

inline Report validate_room_diagram(const RoomDiagram& d) {
  Report rep;
  const FinCat& S = *d.sig;
  if (static_cast<int>(d.rooms.size()) != S.n_obj() || static_cast<int>(d.maps.size()) != S.n_arr()) {
    rep.structural("diagram", "room or map table size");
    return rep;
  }
  for (int c = 0; c < S.n_obj(); ++c) rep.merge(validate_room(d.rooms[c]), S.objects[c]);
  if (!rep.ok()) return rep;
  for (int h = 0; h < S.n_arr(); ++h) {
    Report r = validate_room_morphism(d.maps[h], d.rooms[S.dst(h)], d.rooms[S.src(h)]);
    for (auto& it : r.items) it.witnesses.insert(it.witnesses.begin(), S.arrows[h].id);
    rep.merge(r, S.arrows[h].id);
  }
  if (!rep.ok()) return rep;
  for (int c = 0; c < S.n_obj(); ++c)
    if (!(d.maps[S.identity[c]] == identity_room_morphism(d.rooms[c])))
      rep.violation(S.objects[c], "diagram preserves identities", {S.arrows[S.identity[c]].id});
  for (int g = 0; g < S.n_arr(); ++g)
    for (int f = 0; f < S.n_arr(); ++f)
      if (S.dst(f) == S.src(g) && !(d.maps[S.compose(g, f)] == compose(d.maps[f], d.maps[g])))
        rep.violation("(" + S.arrows[g].id + ", " + S.arrows[f].id + ")", "diagram preserves composition",
                      {S.arrows[g].id, S.arrows[f].id});
  return rep;
}

inline Report validate_piroom_diagram(const PiRoomDiagram& d, PiRoomLaw law = PiRoomLaw::lax) {
  Report rep;
  const FinCat& S = *d.sig;
  if (static_cast<int>(d.rooms.size()) != S.n_obj() || static_cast<int>(d.maps.size()) != S.n_arr()) {
    rep.structural("diagram", "room or map table size");
    return rep;
  }
  for (int c = 0; c < S.n_obj(); ++c)
    if (!d.rooms[c].closure.valid() || d.rooms[c].closure.ground != d.rooms[c].sentences.size())
      rep.structural(S.objects[c], "closure family not intersection-closed");
  if (!rep.ok()) return rep;
  for (int h = 0; h < S.n_arr(); ++h) {
    Report r = validate_piroom_morphism(d.maps[h], d.rooms[S.dst(h)], d.rooms[S.src(h)], law);
    for (auto& it : r.items) it.witnesses.insert(it.witnesses.begin(), S.arrows[h].id);
    rep.merge(r, S.arrows[h].id);
  }
  if (!rep.ok()) return rep;
  for (int c = 0; c < S.n_obj(); ++c)
    if (d.maps[S.identity[c]] != identity_function(d.rooms[c].sentences.size()))
      rep.violation(S.objects[c], "diagram preserves identities", {S.arrows[S.identity[c]].id});
  for (int g = 0; g < S.n_arr(); ++g)
    for (int f = 0; f < S.n_arr(); ++f)
      if (S.dst(f) == S.src(g) && d.maps[S.compose(g, f)] != compose_fn(d.maps[g], d.maps[f]))
        rep.violation("(" + S.arrows[g].id + ", " + S.arrows[f].id + ")", "diagram preserves composition",
                      {S.arrows[g].id, S.arrows[f].id});
  return rep;
}

inline RoomDiagram encode(const Institution& I) {
  RoomDiagram d{I.sig, {}, {}};
  for (int s = 0; s < I.sig->n_obj(); ++s) d.rooms.push_back({I.sen.carriers[s], I.mod[s], I.sat[s]});
  for (int h = 0; h < I.sig->n_arr(); ++h) d.maps.push_back({I.sen.fmap[h], I.mod_map[h]});
  return d;
}

inline PiRoomDiagram encode(const PiInstitution& J) {
  PiRoomDiagram d{J.sig, {}, {}};
  for (int s = 0; s < J.sig->n_obj(); ++s) d.rooms.push_back({J.sen.carriers[s], J.closures[s]});
  for (int h = 0; h < J.sig->n_arr(); ++h) d.maps.push_back(J.sen.fmap[h]);
  return d;
}

/// Inverse of encode; an invalid arrow image is rejected naming that arrow.
inline Institution decode(const RoomDiagram& d) {
  Report r = validate_room_diagram(d);
  if (!r.ok()) throw StructuralError("decode: " + r.items.front().location + ": " + r.items.front().law);
  Institution I{d.sig, SetFunctor{d.sig, {}, {}, Variance::covariant}, {}, {}, {}};
  for (const auto& room : d.rooms) {
    I.sen.carriers.push_back(room.sentences);
    I.mod.push_back(room.models);
    I.sat.push_back(room.rows);
  }
  for (const auto& m : d.maps) {
    I.sen.fmap.push_back(m.sigma);
    I.mod_map.push_back(m.mu);
  }
  return I;
}

inline PiInstitution decode(const PiRoomDiagram& d, PiRoomLaw law = PiRoomLaw::lax) {
  Report r = validate_piroom_diagram(d, law);
  if (!r.ok()) throw StructuralError("decode: " + r.items.front().location + ": " + r.items.front().law);
  PiInstitution J{d.sig, SetFunctor{d.sig, {}, {}, Variance::covariant}, {}};
  for (const auto& room : d.rooms) {
    J.sen.carriers.push_back(room.sentences);
    J.closures.push_back(room.closure);
  }
  J.sen.fmap = d.maps;
  return J;
}

/// 𝓕 applied at every signature.
inline PiRoomDiagram apply_F(const RoomDiagram& d) {
  PiRoomDiagram out{d.sig, {}, {}};
  for (const auto& r : d.rooms) out.rooms.push_back(room_F(r));
  for (const auto& m : d.maps) out.maps.push_back(room_F(m));
  return out;
}

/// 𝒢 applied at every signature.
inline RoomDiagram apply_G(const PiRoomDiagram& d, GMode mode = GMode::closed_sets) {
  RoomDiagram out{d.sig, {}, {}};
  for (const auto& p : d.rooms) out.rooms.push_back(room_G(p, mode));
  const FinCat& S = *d.sig;
  for (int h = 0; h < S.n_arr(); ++h) out.maps.push_back(room_G(d.maps[h], out.rooms[S.dst(h)], out.rooms[S.src(h)]));
  return out;
}

// ---------------------------------------------------------------------------
// Institutional (co)realization, fiberwise over a finite base of signature functors

/// A natural transformation between room diagrams over one signature category.
struct RoomNat {
  std::vector<RoomMorphism> components;
  bool operator==(const RoomNat&) const = default;
};

inline std::vector<RoomNat> enumerate_room_nats(const RoomDiagram& D, const RoomDiagram& E, Guard& guard) {
  const FinCat& S = *D.sig;
  std::vector<std::vector<RoomMorphism>> cands(S.n_obj());
  for (int c = 0; c < S.n_obj(); ++c) cands[c] = enumerate_room_morphisms(D.rooms[c], E.rooms[c], guard);
  std::vector<RoomNat> out;
  RoomNat cur{std::vector<RoomMorphism>(S.n_obj())};
  std::function<void(int)> rec = [&](int c) {
    guard.tick();
    if (c == S.n_obj()) {
      out.push_back(cur);
      return;
    }
    for (const auto& m : cands[c]) {
      cur.components[c] = m;
      bool ok = true;
      for (int h = 0; h < S.n_arr() && ok; ++h) {
        const int a = S.src(h), b = S.dst(h);
        if (std::max(a, b) != c) continue;
        // D(h) : D(b) → D(a); naturality η_a ∘ D(h) = E(h) ∘ η_b
        ok = compose(cur.components[a], D.maps[h]) == compose(E.maps[h], cur.components[b]);
      }
      if (ok) rec(c + 1);
    }
  };
  rec(0);
  return out;
}

/// D ∘ Φ^op, a diagram over Φ.src.
inline RoomDiagram precompose(const RoomDiagram& D, const Functor& phi) {
  RoomDiagram out{phi.src, {}, {}};
  for (int x : phi.omap) out.rooms.push_back(D.rooms[x]);
  for (int a : phi.amap) out.maps.push_back(D.maps[a]);
  return out;
}

struct Realization {
  CatRef base;                                 // signature categories and the supplied functors
  std::vector<CatRef> sigs;                    // base object → signature category
  std::vector<Functor> functors;               // base arrow → functor
  std::vector<std::vector<RoomDiagram>> diagrams;  // fiber objects
  IndexedCat indexed;
  GrothCat total;
};

/// Builds the fiberwise Grothendieck category: the base holds the given signature categories and the
/// composition closure of the supplied functors; each fiber holds the encodings and all their reindexings.
inline Realization build_realization(const std::vector<Institution>& inss, const std::vector<Functor>& supplied,
                                     bool covariant, Guard& guard) {
  Realization R;
  auto sig_index = [&](const CatRef& c) {
    for (std::size_t i = 0; i < R.sigs.size(); ++i)
      if (same_cat(R.sigs[i], c)) return static_cast<int>(i);
    R.sigs.push_back(c);
    return static_cast<int>(R.sigs.size()) - 1;
  };
  for (const auto& I : inss) sig_index(I.sig);
  std::vector<Functor> arrows;
  for (std::size_t i = 0; i < R.sigs.size(); ++i) arrows.push_back(identity_functor(R.sigs[i]));
  const std::size_t n_sigs = R.sigs.size();
  auto add = [&](const Functor& F) {
    if (sig_index(F.src) >= static_cast<int>(n_sigs) || sig_index(F.dst) >= static_cast<int>(n_sigs))
      throw StructuralError("realization: functor between unknown signature categories");
    for (const auto& a : arrows)
      if (a == F) return false;
    arrows.push_back(F);
    return true;
  };
  for (const auto& F : supplied) add(F);
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = arrows.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (same_cat(arrows[i].dst, arrows[j].src)) {
          guard.tick();
          changed |= add(compose(arrows[j], arrows[i]));
        }
  }
  // base category
  CategoryBuilder b;
  auto oid = [](std::size_t i) { return "Sig" + std::to_string(i); };
  auto aid = [&](std::size_t k) { return k < n_sigs ? "id_" + oid(k) : "Phi" + std::to_string(k); };
  auto idx = [&](const CatRef& c) {
    for (std::size_t i = 0; i < R.sigs.size(); ++i)
      if (same_cat(R.sigs[i], c)) return i;
    return std::size_t{0};
  };
  for (std::size_t i = 0; i < R.sigs.size(); ++i) b.object(oid(i));
  for (std::size_t k = 0; k < arrows.size(); ++k) b.arrow(aid(k), oid(idx(arrows[k].src)), oid(idx(arrows[k].dst)));
  for (std::size_t i = 0; i < arrows.size(); ++i)
    for (std::size_t j = 0; j < arrows.size(); ++j)
      if (same_cat(arrows[i].dst, arrows[j].src)) {
        Functor c = compose(arrows[j], arrows[i]);
        for (std::size_t k = 0; k < arrows.size(); ++k)
          if (arrows[k] == c) b.compose(aid(j), aid(i), aid(k));
      }
  FinCat base = b.build();
  R.functors.resize(base.n_arr());
  for (std::size_t k = 0; k < arrows.size(); ++k) R.functors[base.arrow_index(aid(k))] = arrows[k];

  // fibers: encodings closed under reindexing
  R.diagrams.assign(R.sigs.size(), {});
  for (const auto& I : inss) {
    auto& v = R.diagrams[idx(I.sig)];
    RoomDiagram d = encode(I);
    if (std::find(v.begin(), v.end(), d) == v.end()) v.push_back(d);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int a = 0; a < base.n_arr(); ++a) {
      const int c = base.src(a), e = base.dst(a);
      for (std::size_t k = 0; k < R.diagrams[e].size(); ++k) {
        RoomDiagram p = precompose(R.diagrams[e][k], R.functors[a]);
        auto& v = R.diagrams[c];
        if (std::find(v.begin(), v.end(), p) == v.end()) {
          v.push_back(p);
          changed = true;
        }
      }
    }
  }
  std::vector<std::vector<std::vector<std::vector<RoomNat>>>> nats(R.sigs.size());
  std::vector<CatRef> fibers;
  for (std::size_t c = 0; c < R.sigs.size(); ++c) {
    const auto& ds = R.diagrams[c];
    CategoryBuilder fb;
    auto did = [](std::size_t i) { return "D" + std::to_string(i); };
    auto nid = [](std::size_t i, std::size_t j, std::size_t k) {
      return "eta" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
    };
    nats[c].assign(ds.size(), std::vector<std::vector<RoomNat>>(ds.size()));
    for (std::size_t i = 0; i < ds.size(); ++i) fb.object(did(i));
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j) {
        nats[c][i][j] = enumerate_room_nats(ds[i], ds[j], guard);
        for (std::size_t k = 0; k < nats[c][i][j].size(); ++k) fb.arrow(nid(i, j, k), did(i), did(j));
      }
    for (std::size_t i = 0; i < ds.size(); ++i) {
      RoomNat id;
      for (const auto& r : ds[i].rooms) id.components.push_back(identity_room_morphism(r));
      const auto& v = nats[c][i][i];
      fb.identity(did(i), nid(i, i, std::find(v.begin(), v.end(), id) - v.begin()));
    }
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j)
        for (std::size_t k = 0; k < ds.size(); ++k)
          for (std::size_t p = 0; p < nats[c][i][j].size(); ++p)
            for (std::size_t q = 0; q < nats[c][j][k].size(); ++q) {
              guard.tick();
              RoomNat comp;
              for (std::size_t s = 0; s < ds[i].rooms.size(); ++s)
                comp.components.push_back(
                    compose(nats[c][j][k][q].components[s], nats[c][i][j][p].components[s]));
              const auto& v = nats[c][i][k];
              auto it = std::find(v.begin(), v.end(), comp);
              if (it == v.end()) throw StructuralError("realization: composite natural transformation missing");
              fb.compose(nid(j, k, q), nid(i, j, p), nid(i, k, it - v.begin()));
            }
    fibers.push_back(share(fb.build()));
  }
  // transports: precomposition with Φ^op, from the fiber over Φ.dst to the fiber over Φ.src
  FinCat used_base = covariant ? opposite(base) : base;
  R.base = share(used_base);
  IndexedCat ix{R.base, fibers, {}, covariant ? Variance::covariant : Variance::contravariant, {}, {}};
  for (int a = 0; a < base.n_arr(); ++a) {
    const int c = base.src(a), e = base.dst(a);
    const Functor& phi = R.functors[a];
    Functor T{fibers[e], fibers[c], {}, {}, Variance::covariant};
    for (const auto& d : R.diagrams[e]) {
      RoomDiagram p = precompose(d, phi);
      T.omap.push_back(static_cast<int>(std::find(R.diagrams[c].begin(), R.diagrams[c].end(), p) -
                                        R.diagrams[c].begin()));
    }
    const FinCat& Fe = *fibers[e];
    for (const auto& ar : Fe.arrows) {
      // arrow ids are eta<i>_<j>_<k>
      int i = ar.src, j = ar.dst;
      int k = 0;
      for (std::size_t t = 0; t < nats[e][i][j].size(); ++t)
        if (ar.id == "eta" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(t)) k = static_cast<int>(t);
      RoomNat w;
      for (int x : phi.omap) w.components.push_back(nats[e][i][j][k].components[x]);
      const auto& v = nats[c][T.omap[i]][T.omap[j]];
      int kk = static_cast<int>(std::find(v.begin(), v.end(), w) - v.begin());
      T.amap.push_back(fibers[c]->arrow_index("eta" + std::to_string(T.omap[i]) + "_" + std::to_string(T.omap[j]) +
                                              "_" + std::to_string(kk)));
    }
    ix.transport.push_back(T);
  }
  R.indexed = ix;
  R.total = groth(R.indexed);
  return R;
}

/// Compares institution (co)morphisms i1 → i2 along the supplied functors with arrows of the realization.
/// The bijection sends a total arrow (Φ, η) to ⟨Φ, (σ of η), (μ of η)⟩.
inline Report realization_check(const Institution& i1, const Institution& i2, bool comorphisms,
                                const std::vector<Functor>& supplied, Guard& guard, std::size_t* maps_out = nullptr,
                                std::size_t* arrows_out = nullptr) {
  return guarded([&] {
    Report rep;
    Realization R = build_realization({i1, i2}, supplied, comorphisms, guard);
    const FinCat& T = *R.total.total;
    auto fiber_obj = [&](const Institution& I) {
      for (std::size_t c = 0; c < R.sigs.size(); ++c)
        if (same_cat(R.sigs[c], I.sig)) {
          auto it = std::find(R.diagrams[c].begin(), R.diagrams[c].end(), encode(I));
          return R.total.object_of.at({static_cast<int>(c), static_cast<int>(it - R.diagrams[c].begin())});
        }
      return -1;
    };
    const int o1 = fiber_obj(i1), o2 = fiber_obj(i2);
    // morphisms: arrows o1 → o2; comorphisms: arrows o2 → o1 of the covariant total (the outer op)
    const int from = comorphisms ? o2 : o1, to = comorphisms ? o1 : o2;
    std::vector<InsMap> via_rooms;
    for (int a : T.hom(from, to)) {
      const auto [f, phi, x, y] = R.total.arrow_cell[a];
      const Functor& Phi = R.functors[f];
      const int fib = comorphisms ? R.indexed.base->dst(f) : R.indexed.base->src(f);
      // recover η from the fiber arrow id
      const FinCat& Fb = *R.indexed.fibers[fib];
      const std::string& id = Fb.arrows[phi].id;
      std::size_t u1 = id.find('_'), u2 = id.rfind('_');
      int i = std::stoi(id.substr(3, u1 - 3)), j = std::stoi(id.substr(u1 + 1, u2 - u1 - 1));
      int k = std::stoi(id.substr(u2 + 1));
      const RoomDiagram& Di = R.diagrams[fib][i];
      const RoomDiagram& Dj = R.diagrams[fib][j];
      std::vector<RoomNat> nts = enumerate_room_nats(Di, Dj, guard);
      const RoomNat& eta = nts.at(k);
      InsMap m{comorphisms ? MapKind::ins_comorphism : MapKind::ins_morphism, Phi, {}, {}};
      for (const auto& c : eta.components) {
        m.alpha.push_back(c.sigma);
        m.beta.push_back(c.mu);
      }
      via_rooms.push_back(m);
    }
    std::vector<InsMap> direct;
    for (const auto& m : enumerate_ins_maps(comorphisms ? MapKind::ins_comorphism : MapKind::ins_morphism, i1, i2, guard))
      for (const auto& F : R.functors)
        if (F == m.phi) {
          direct.push_back(m);
          break;
        }
    if (maps_out) *maps_out = direct.size();
    if (arrows_out) *arrows_out = via_rooms.size();
    if (direct.size() != via_rooms.size())
      rep.violation("realization", "hom-set cardinality",
                    {std::to_string(direct.size()), std::to_string(via_rooms.size())});
    for (const auto& m : via_rooms) {
      if (!validate_map(m, i1, i2).ok()) rep.violation("realization", "image is not a valid map");
      if (std::count(direct.begin(), direct.end(), m) != 1) rep.violation("realization", "image not among enumerated maps");
    }
    for (std::size_t a = 0; a < via_rooms.size(); ++a)
      for (std::size_t b = a + 1; b < via_rooms.size(); ++b)
        if (via_rooms[a] == via_rooms[b]) rep.violation("realization", "bijection not injective");
    return rep;
  });
}

/// Institution with no sentences and one model per signature; its encoding is constant at the terminal room.
inline Institution terminal_room_institution(const CatRef& sig) {
  CatRef one = share(terminal_category("m"));
  Institution I{sig, SetFunctor{sig, std::vector<std::vector<std::string>>(sig->n_obj()), {}, Variance::covariant},
                std::vector<CatRef>(sig->n_obj(), one), {}, std::vector<std::vector<Subset>>(sig->n_obj(), {Subset(0)})};
  for (int h = 0; h < sig->n_arr(); ++h) {
    I.sen.fmap.push_back({});
    I.mod_map.push_back(identity_functor(one));
  }
  return I;
}

/// Objects of ins(C) over an index category A (functors A^op → C) against objects of Diag_mor(C^op) over A
/// (functors A → C^op), matched by F ↦ F^op.
inline Report diagram_shape_check(const CatRef& A, const CatRef& C, Guard& guard, std::size_t* count = nullptr) {
  Report rep;
  CatRef Aop = share(opposite(*A));
  CatRef Cop = share(opposite(*C));
  auto lhs = enumerate_functors(Aop, C, guard);
  auto rhs = enumerate_functors(A, Cop, guard);
  if (count) *count = lhs.size();
  if (lhs.size() != rhs.size())
    rep.violation("diagrams", "object count", {std::to_string(lhs.size()), std::to_string(rhs.size())});
  for (const auto& F : lhs) {
    Functor Fop{A, Cop, F.omap, F.amap, Variance::covariant};
    if (std::find(rhs.begin(), rhs.end(), Fop) == rhs.end()) rep.violation("diagrams", "F^op missing");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Room-level adjunction between 𝓕 and 𝒢

/// Model categories with at most two objects used for the exhaustive room grid.
inline std::vector<CatRef> small_model_categories() {
  CategoryBuilder z2;
  z2.object("*").arrow("1", "*", "*").arrow("t", "*", "*").identity("*", "1");
  z2.compose("t", "t", "1");
  CategoryBuilder pair;
  pair.object("0").object("1").arrow("f", "0", "1").arrow("g", "0", "1");
  return {share(CategoryBuilder().build()),
          share(terminal_category("m")),
          share(idempotent_monoid("m")),
          share(z2.build()),
          share(discrete_category({"m1", "m2"})),
          share(arrow_category()),
          share(codiscrete_category({"m1", "m2"})),
          share(pair.build())};
}

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

/// Every room with at most max_s sentences over the small model categories.
inline std::vector<Room> all_small_rooms(std::size_t max_s) {
  std::vector<Room> out;
  auto cats = small_model_categories();
  for (std::size_t n = 0; n <= max_s; ++n)
    for (const auto& M : cats) {
      const int k = M->n_obj();
      std::vector<Subset> all;
      for_each_subset(n, [&](const Subset& s) { all.push_back(s); });
      std::vector<std::size_t> pick(k, 0);
      while (true) {
        Room r{letters(n), M, {}};
        for (int m = 0; m < k; ++m) r.rows.push_back(all[pick[m]]);
        out.push_back(r);
        int i = 0;
        while (i < k && ++pick[i] == all.size()) pick[i++] = 0;
        if (i == k) break;
      }
    }
  return out;
}

/// Every closure system (Moore family) on at most max_s sentences.
inline std::vector<PiRoom> all_small_pirooms(std::size_t max_s) {
  std::vector<PiRoom> out;
  for (std::size_t n = 0; n <= max_s; ++n) {
    std::vector<Subset> all;
    for_each_subset(n, [&](const Subset& s) { all.push_back(s); });
    const Subset full = full_subset(n);
    std::vector<Subset> rest;
    for (const auto& s : all)
      if (s != full) rest.push_back(s);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
      std::vector<Subset> fam{full};
      for (std::size_t i = 0; i < rest.size(); ++i)
        if (mask >> i & 1) fam.push_back(rest[i]);
      ClosureOp c = ClosureOp::from_family(n, fam);
      if (c.valid()) out.push_back({letters(n), c});
    }
  }
  return out;
}

/// 𝓕 ⊣ 𝒢: Hom_π(𝓕 r, p) ≅ Hom_Room(r, 𝒢 p), transposes σ ↦ (σ, preimage of rows) and (σ, μ) ↦ σ.
inline HomBijection room_F_left_of_G(const Room& r, const PiRoom& p, PiRoomLaw law, Guard& guard) {
  const PiRoom Fr = room_F(r);
  const Room Gp = room_G(p);
  auto lhs = enumerate_piroom_morphisms(Fr, p, law, guard);
  auto rhs = enumerate_room_morphisms(r, Gp, guard);
  std::function<std::optional<RoomMorphism>(const PiRoomMorphism&)> right =
      [&](const PiRoomMorphism& s) -> std::optional<RoomMorphism> {
    std::vector<int> omap;
    for (const auto& row : r.rows) {
      int o = Gp.models->object_index(show_subset(preimage(s, row), Gp.sentences));
      if (o < 0) return std::nullopt;
      omap.push_back(o);
    }
    return RoomMorphism{s, codiscrete_functor(r.models, Gp.models, omap)};
  };
  std::function<std::optional<PiRoomMorphism>(const RoomMorphism&)> left =
      [](const RoomMorphism& m) -> std::optional<PiRoomMorphism> { return m.sigma; };
  return hom_bijection<PiRoomMorphism, RoomMorphism>(lhs, rhs, right, left, "F -| G (rooms)");
}

/// 𝒢 ⊣ 𝓕: Hom_Room(𝒢 p, r) ≅ Hom_π(p, 𝓕 r). The forward transpose keeps σ; the backward one takes the
/// unique room morphism over σ when there is exactly one.
inline HomBijection room_G_left_of_F(const PiRoom& p, const Room& r, PiRoomLaw law, Guard& guard) {
  const Room Gp = room_G(p);
  const PiRoom Fr = room_F(r);
  auto lhs = enumerate_room_morphisms(Gp, r, guard);
  auto rhs = enumerate_piroom_morphisms(p, Fr, law, guard);
  std::function<std::optional<PiRoomMorphism>(const RoomMorphism&)> right =
      [](const RoomMorphism& m) -> std::optional<PiRoomMorphism> { return m.sigma; };
  std::function<std::optional<RoomMorphism>(const PiRoomMorphism&)> left =
      [&](const PiRoomMorphism& s) -> std::optional<RoomMorphism> {
    std::optional<RoomMorphism> found;
    for (const auto& m : lhs)
      if (m.sigma == s) {
        if (found) return std::nullopt;
        found = m;
      }
    return found;
  };
  return hom_bijection<RoomMorphism, PiRoomMorphism>(lhs, rhs, right, left, "G -| F (rooms)");
}

struct GridResult {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  std::string first_failure;
  Report report;
};

/// Runs one of the two hom-set checks over every (room, π-room) pair of the small grid.
inline GridResult room_adjunction_grid(bool g_left, std::size_t max_s, PiRoomLaw law, Guard& guard) {
  GridResult g;
  g.report = guarded([&] {
    Report rep;
    auto rooms = all_small_rooms(max_s);
    auto pis = all_small_pirooms(max_s);
    for (const auto& r : rooms)
      for (const auto& p : pis) {
        ++g.pairs;
        HomBijection h = g_left ? room_G_left_of_F(p, r, law, guard) : room_F_left_of_G(r, p, law, guard);
        if (!h.report.ok()) {
          if (g.failures++ == 0) {
            g.first_failure = "room rows " + std::to_string(r.rows.size()) + " over |S|=" +
                              std::to_string(r.sentences.size()) + ", pi-room |S|=" + std::to_string(p.sentences.size()) +
                              " with " + std::to_string(p.closure.closed.size()) + " closed sets: " +
                              std::to_string(h.left) + " vs " + std::to_string(h.right);
            rep.violation(g_left ? "G -| F (rooms)" : "F -| G (rooms)", "hom-set bijection", {g.first_failure});
          }
        }
      }
    return rep;
  });
  return g;
}

}  // namespace insfin
