#pragma once

#include "insfin/adjunction.hpp"
#include "insfin/fincat.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace insfin {

/// Closure operator stored as its family of closed sets (sorted, duplicate free).
struct ClosureOp {
  std::size_t ground = 0;
  std::vector<Subset> closed;

  static ClosureOp from_family(std::size_t ground, std::vector<Subset> family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return {ground, std::move(family)};
  }

  /// Intersection closure of the generators, together with the ground set.
  static ClosureOp generated(std::size_t ground, const std::vector<Subset>& gens) {
    std::set<Subset> fam{full_subset(ground)};
    for (const auto& g : gens) {
      std::vector<Subset> add;
      for (const auto& s : fam) add.push_back(s & g);
      fam.insert(add.begin(), add.end());
    }
    return {ground, std::vector<Subset>(fam.begin(), fam.end())};
  }

  static ClosureOp discrete(std::size_t ground) {
    std::vector<Subset> all;
    for_each_subset(ground, [&](const Subset& s) { all.push_back(s); });
    return from_family(ground, all);
  }
  static ClosureOp codiscrete(std::size_t ground) { return {ground, {full_subset(ground)}}; }

  bool is_closed(const Subset& s) const { return std::binary_search(closed.begin(), closed.end(), s); }

  Subset close(const Subset& x) const {
    Subset out = full_subset(ground);
    for (const auto& c : closed)
      if (x.is_subset_of(c)) out &= c;
    return out;
  }

  bool valid() const {
    for (const auto& c : closed)
      if (c.size() != ground) return false;
    if (!is_closed(full_subset(ground))) return false;
    for (std::size_t i = 0; i < closed.size(); ++i)
      for (std::size_t j = i + 1; j < closed.size(); ++j)
        if (!is_closed(closed[i] & closed[j])) return false;
    return true;
  }

  bool operator==(const ClosureOp&) const = default;
};

struct Institution {
  CatRef sig;
  SetFunctor sen;
  std::vector<CatRef> mod;
  std::vector<Functor> mod_map;          // h: Σ → Σ' gives mod[Σ'] → mod[Σ]
  std::vector<std::vector<Subset>> sat;  // sat[Σ][m] = sentences satisfied by m

  bool operator==(const Institution& o) const {
    if (!same_cat(sig, o.sig) || !(sen == o.sen) || mod.size() != o.mod.size()) return false;
    for (std::size_t i = 0; i < mod.size(); ++i)
      if (!same_cat(mod[i], o.mod[i])) return false;
    return mod_map == o.mod_map && sat == o.sat;
  }
};

struct PiInstitution {
  CatRef sig;
  SetFunctor sen;
  std::vector<ClosureOp> closures;

  bool operator==(const PiInstitution& o) const {
    return same_cat(sig, o.sig) && sen == o.sen && closures == o.closures;
  }
};

// ---------------------------------------------------------------------------
// Validators

inline std::string show_sentences(const SetFunctor& sen, int sigma, const Subset& s) {
  return show_subset(s, sen.carriers[sigma]);
}

inline Report validate_institution(const Institution& I) {
  Report rep;
  const FinCat& S = *I.sig;
  if (!same_cat(I.sen.src, I.sig)) rep.structural("sen", "sentence functor not over sig");
  if (static_cast<int>(I.mod.size()) != S.n_obj()) rep.structural("mod", "model category table size");
  if (static_cast<int>(I.mod_map.size()) != S.n_arr()) rep.structural("mod_map", "model functor table size");
  if (static_cast<int>(I.sat.size()) != S.n_obj()) rep.structural("sat", "satisfaction table size");
  if (!rep.ok()) return rep;
  rep.merge(validate_set_functor(I.sen), "sen");
  for (int s = 0; s < S.n_obj(); ++s) {
    Report c = validate_category(*I.mod[s]);
    rep.merge(c, "mod(" + S.objects[s] + ")");
    if (static_cast<int>(I.sat[s].size()) != I.mod[s]->n_obj()) {
      rep.structural(S.objects[s], "sat row missing");
      continue;
    }
    for (const auto& row : I.sat[s])
      if (row.size() != I.sen.size(s)) rep.structural(S.objects[s], "sat column missing");
  }
  for (int h = 0; h < S.n_arr(); ++h) {
    const Functor& M = I.mod_map[h];
    if (!same_cat(M.src, I.mod[S.dst(h)]) || !same_cat(M.dst, I.mod[S.src(h)]) ||
        M.variance != Variance::covariant) {
      rep.structural(S.arrows[h].id, "Mod(h) has wrong endpoints");
      continue;
    }
    rep.merge(validate_functor(M), "Mod(" + S.arrows[h].id + ")");
  }
  if (!rep.ok()) return rep;

  for (int s = 0; s < S.n_obj(); ++s)
    if (!(I.mod_map[S.identity[s]] == identity_functor(I.mod[s])))
      rep.violation(S.objects[s], "Mod preserves identities", {S.arrows[S.identity[s]].id});
  for (int g = 0; g < S.n_arr(); ++g)
    for (int f = 0; f < S.n_arr(); ++f)
      if (S.dst(f) == S.src(g) && !(I.mod_map[S.compose(g, f)] == compose(I.mod_map[f], I.mod_map[g])))
        rep.violation("(" + S.arrows[g].id + ", " + S.arrows[f].id + ")", "Mod preserves composition",
                      {S.arrows[g].id, S.arrows[f].id});

  for (int h = 0; h < S.n_arr(); ++h) {
    const int a = S.src(h), b = S.dst(h);
    const Functor& M = I.mod_map[h];
    const Function& sh = I.sen.fmap[h];
    for (int m = 0; m < I.mod[b]->n_obj(); ++m)
      for (std::size_t phi = 0; phi < I.sen.size(a); ++phi) {
        bool lhs = I.sat[b][m].test(static_cast<std::size_t>(sh[phi]));
        bool rhs = I.sat[a][M.omap[m]].test(phi);
        if (lhs != rhs) {
          const std::string& hn = S.arrows[h].id;
          const std::string& mn = I.mod[b]->objects[m];
          const std::string& pn = I.sen.carriers[a][phi];
          rep.violation("(" + hn + ", " + mn + ", " + pn + ")", "satisfaction condition", {hn, mn, pn});
        }
      }
  }
  return rep;
}

struct TranslationViolation {
  Subset gamma;  // premises in the domain
  int phi;       // domain sentence in C(Γ) whose image escapes the target closure
};

/// Pairs (Γ, φ) with φ ∈ dom.C(Γ) and fn(φ) ∉ cod.C(fn[Γ]).
/// Small grounds are enumerated subset by subset; larger ones use the equivalent test that
/// preimages of closed sets are closed, which yields one witness per offending closed set.
inline std::vector<TranslationViolation> translation_violations(const ClosureOp& dom, const ClosureOp& cod,
                                                                 const Function& fn) {
  std::vector<TranslationViolation> out;
  if (dom.ground <= 12) {
    for_each_subset(dom.ground, [&](const Subset& g) {
      Subset cg = dom.close(g);
      Subset target = cod.close(image(fn, g, cod.ground));
      for (int phi : subset_indices(cg))
        if (!target.test(static_cast<std::size_t>(fn[phi]))) out.push_back({g, phi});
    });
    return out;
  }
  for (const auto& t : cod.closed) {
    Subset p = preimage(fn, t);
    if (dom.is_closed(p)) continue;
    Subset extra = dom.close(p) - p;
    for (int phi : subset_indices(extra)) out.push_back({p, phi});
  }
  return out;
}

inline Report validate_pi(const PiInstitution& J) {
  Report rep;
  const FinCat& S = *J.sig;
  if (!same_cat(J.sen.src, J.sig)) rep.structural("sen", "sentence functor not over sig");
  if (static_cast<int>(J.closures.size()) != S.n_obj()) rep.structural("closures", "closure table size");
  if (!rep.ok()) return rep;
  rep.merge(validate_set_functor(J.sen), "sen");
  for (int s = 0; s < S.n_obj(); ++s) {
    if (J.closures[s].ground != J.sen.size(s)) rep.structural(S.objects[s], "closure ground size");
    else if (!J.closures[s].valid()) rep.structural(S.objects[s], "closure family not intersection-closed");
  }
  if (!rep.ok()) return rep;
  for (int f = 0; f < S.n_arr(); ++f) {
    const int a = S.src(f), b = S.dst(f);
    for (const auto& v : translation_violations(J.closures[a], J.closures[b], J.sen.fmap[f])) {
      std::string g = show_sentences(J.sen, a, v.gamma);
      const std::string& img = J.sen.carriers[b][J.sen.fmap[f][v.phi]];
      rep.violation("(" + S.arrows[f].id + ", " + g + ", " + img + ")", "structurality",
                    {S.arrows[f].id, g, J.sen.carriers[a][v.phi], img});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Galois connection, F and G

enum class Side { sentences, models };

inline Subset galois(const Institution& I, int sigma, Side side, const Subset& x) {
  const auto& rows = I.sat[sigma];
  if (side == Side::sentences) {
    Subset out(rows.size());
    for (std::size_t m = 0; m < rows.size(); ++m)
      if (x.is_subset_of(rows[m])) out.set(m);
    return out;
  }
  Subset out = full_subset(I.sen.size(sigma));
  for (auto m = x.find_first(); m != Subset::npos; m = x.find_next(m)) out &= rows[m];
  return out;
}

/// F on objects: closures Γ ↦ Γ**.
inline PiInstitution derive_pi(const Institution& I) {
  PiInstitution J{I.sig, I.sen, {}};
  for (int s = 0; s < I.sig->n_obj(); ++s) J.closures.push_back(ClosureOp::generated(I.sen.size(s), I.sat[s]));
  return J;
}

/// Object index of the closed set `t` inside a model category built by derive_institution.
inline int closed_set_object(const FinCat& mod, const SetFunctor& sen, int sigma, const Subset& t) {
  return mod.object_index(show_sentences(sen, sigma, t));
}

inline Functor codiscrete_functor(const CatRef& src, const CatRef& dst, std::vector<int> omap) {
  Functor F{src, dst, std::move(omap), {}, Variance::covariant};
  for (const auto& a : src->arrows) F.amap.push_back(dst->hom(F.omap[a.src], F.omap[a.dst]).at(0));
  return F;
}

/// G on objects: models are the closed sets in a codiscrete category, ⊨ is membership.
inline Institution derive_institution(const PiInstitution& J) {
  const FinCat& S = *J.sig;
  Institution I{J.sig, J.sen, {}, {}, {}};
  for (int s = 0; s < S.n_obj(); ++s) {
    std::vector<std::string> ids;
    for (const auto& t : J.closures[s].closed) ids.push_back(show_sentences(J.sen, s, t));
    CatRef m = share(codiscrete_category(ids));
    std::vector<Subset> rows(m->n_obj());
    for (const auto& t : J.closures[s].closed) rows[closed_set_object(*m, J.sen, s, t)] = t;
    I.mod.push_back(m);
    I.sat.push_back(std::move(rows));
  }
  for (int h = 0; h < S.n_arr(); ++h) {
    const int a = S.src(h), b = S.dst(h);
    std::vector<int> omap;
    for (const auto& t : I.sat[b]) {
      Subset p = preimage(J.sen.fmap[h], t);
      int o = closed_set_object(*I.mod[a], J.sen, a, p);
      if (o < 0 || !(I.sat[a][o] == p))
        throw StructuralError("Sen(" + S.arrows[h].id + ")^-1 of a closed set is not closed");
      omap.push_back(o);
    }
    I.mod_map.push_back(codiscrete_functor(I.mod[b], I.mod[a], std::move(omap)));
  }
  return I;
}

// ---------------------------------------------------------------------------
// Morphisms and comorphisms

enum class MapKind { ins_morphism, ins_comorphism, pi_morphism, pi_comorphism };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::ins_morphism: return "ins_morphism";
    case MapKind::ins_comorphism: return "ins_comorphism";
    case MapKind::pi_morphism: return "pi_morphism";
    case MapKind::pi_comorphism: return "pi_comorphism";
  }
  return "?";
}

inline bool is_co(MapKind k) { return k == MapKind::ins_comorphism || k == MapKind::pi_comorphism; }
inline bool is_pi(MapKind k) { return k == MapKind::pi_morphism || k == MapKind::pi_comorphism; }

/// alpha[Σ]: morphisms Sen'(ΦΣ) → Sen(Σ), comorphisms Sen(Σ) → Sen'(φΣ).
/// beta[Σ]: morphisms Mod(Σ) → Mod'(ΦΣ), comorphisms Mod'(φΣ) → Mod(Σ); empty for π kinds.
struct InsMap {
  MapKind kind = MapKind::pi_comorphism;
  Functor phi;
  std::vector<Function> alpha;
  std::vector<Functor> beta;

  bool operator==(const InsMap&) const = default;
};

namespace detail {

/// Functor, α shape and α naturality; shared by all four kinds.
inline Report validate_map_frame(const InsMap& m, const CatRef& ssig, const SetFunctor& ssen, const CatRef& dsig,
                                 const SetFunctor& dsen) {
  Report rep;
  if (!same_cat(m.phi.src, ssig) || !same_cat(m.phi.dst, dsig) || m.phi.variance != Variance::covariant) {
    rep.structural("phi", "signature functor has wrong endpoints");
    return rep;
  }
  rep.merge(validate_functor(m.phi), "phi");
  if (!rep.ok()) return rep;
  const FinCat& S = *ssig;
  if (static_cast<int>(m.alpha.size()) != S.n_obj()) {
    rep.structural("alpha", "component table size");
    return rep;
  }
  const bool co = is_co(m.kind);
  for (int s = 0; s < S.n_obj(); ++s) {
    std::size_t here = ssen.size(s), there = dsen.size(m.phi.omap[s]);
    std::size_t want_dom = co ? here : there, want_cod = co ? there : here;
    bool dom_ok = m.alpha[s].size() == want_dom;
    bool cod_ok = std::all_of(m.alpha[s].begin(), m.alpha[s].end(),
                              [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < want_cod; });
    if (dom_ok && cod_ok) continue;
    bool reversed = m.alpha[s].size() == want_cod &&
                    std::all_of(m.alpha[s].begin(), m.alpha[s].end(),
                                [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < want_dom; });
    rep.structural(S.objects[s], reversed ? "direction mismatch" : "alpha component shape");
  }
  if (!rep.ok()) return rep;
  SetFunctor pulled = precompose(dsen, m.phi);
  Report nat = co ? validate_set_nat(ssen, pulled, m.alpha) : validate_set_nat(pulled, ssen, m.alpha);
  for (auto& it : nat.items) it.law = "alpha " + it.law;
  rep.merge(nat);
  return rep;
}

}  // namespace detail

inline Report validate_map(const InsMap& m, const Institution& src, const Institution& dst) {
  return guarded([&] {
    Report rep;
    if (is_pi(m.kind)) {
      rep.structural("kind", std::string(to_string(m.kind)) + " between institutions");
      return rep;
    }
    rep = detail::validate_map_frame(m, src.sig, src.sen, dst.sig, dst.sen);
    if (rep.status() == Status::structural_error) return rep;
    const FinCat& S = *src.sig;
    const bool co = is_co(m.kind);
    if (static_cast<int>(m.beta.size()) != S.n_obj()) {
      rep.structural("beta", "component table size");
      return rep;
    }
    for (int s = 0; s < S.n_obj(); ++s) {
      const CatRef& here = src.mod[s];
      const CatRef& there = dst.mod[m.phi.omap[s]];
      const Functor& b = m.beta[s];
      if (!same_cat(b.src, co ? there : here) || !same_cat(b.dst, co ? here : there)) {
        rep.structural(S.objects[s], "beta component has wrong endpoints");
        continue;
      }
      rep.merge(validate_functor(b), "beta(" + S.objects[s] + ")");
    }
    if (!rep.ok()) return rep;
    for (int f = 0; f < S.n_arr(); ++f) {
      const int a = S.src(f), b = S.dst(f);
      const Functor& Mf = src.mod_map[f];
      const Functor& Mpf = dst.mod_map[m.phi.amap[f]];
      bool ok = co ? compose(Mf, m.beta[b]) == compose(m.beta[a], Mpf)
                   : compose(Mpf, m.beta[b]) == compose(m.beta[a], Mf);
      if (!ok) rep.violation(S.arrows[f].id, "beta naturality", {S.arrows[f].id});
    }
    for (int s = 0; s < S.n_obj(); ++s) {
      const int t = m.phi.omap[s];
      const Function& al = m.alpha[s];
      const Functor& be = m.beta[s];
      if (co) {
        for (int mp = 0; mp < dst.mod[t]->n_obj(); ++mp)
          for (std::size_t phi = 0; phi < src.sen.size(s); ++phi)
            if (dst.sat[t][mp].test(al[phi]) != src.sat[s][be.omap[mp]].test(phi))
              rep.violation(S.objects[s], "satisfaction condition",
                            {dst.mod[t]->objects[mp], src.sen.carriers[s][phi]});
      } else {
        for (int mm = 0; mm < src.mod[s]->n_obj(); ++mm)
          for (std::size_t phi = 0; phi < dst.sen.size(t); ++phi)
            if (src.sat[s][mm].test(al[phi]) != dst.sat[t][be.omap[mm]].test(phi))
              rep.violation(S.objects[s], "satisfaction condition",
                            {src.mod[s]->objects[mm], dst.sen.carriers[t][phi]});
      }
    }
    return rep;
  });
}

inline Report validate_map(const InsMap& m, const PiInstitution& src, const PiInstitution& dst) {
  return guarded([&] {
    Report rep;
    if (!is_pi(m.kind)) {
      rep.structural("kind", std::string(to_string(m.kind)) + " between pi-institutions");
      return rep;
    }
    rep = detail::validate_map_frame(m, src.sig, src.sen, dst.sig, dst.sen);
    if (rep.status() == Status::structural_error) return rep;
    const FinCat& S = *src.sig;
    const bool co = is_co(m.kind);
    for (int s = 0; s < S.n_obj(); ++s) {
      const int t = m.phi.omap[s];
      const ClosureOp& dom = co ? src.closures[s] : dst.closures[t];
      const ClosureOp& cod = co ? dst.closures[t] : src.closures[s];
      const SetFunctor& dsen = co ? src.sen : dst.sen;
      const int dsig = co ? s : t;
      for (const auto& v : translation_violations(dom, cod, m.alpha[s]))
        rep.violation(S.objects[s], "consequence preservation",
                      {show_sentences(dsen, dsig, v.gamma), dsen.carriers[dsig][v.phi]});
    }
    return rep;
  });
}

/// m2 ∘ m1 for maps of the same kind (m1: A → B, m2: B → C).
inline InsMap compose_maps(const InsMap& m2, const InsMap& m1) {
  if (m1.kind != m2.kind) throw StructuralError("composing maps of different kinds");
  InsMap out{m1.kind, compose(m2.phi, m1.phi), {}, {}};
  const bool co = is_co(m1.kind);
  for (std::size_t s = 0; s < m1.alpha.size(); ++s) {
    const int t = m1.phi.omap[s];
    out.alpha.push_back(co ? compose_fn(m2.alpha[t], m1.alpha[s]) : compose_fn(m1.alpha[s], m2.alpha[t]));
    if (!is_pi(m1.kind))
      out.beta.push_back(co ? compose(m1.beta[s], m2.beta[t]) : compose(m2.beta[t], m1.beta[s]));
  }
  return out;
}

inline InsMap identity_map(MapKind kind, const CatRef& sig, const SetFunctor& sen,
                           const std::vector<CatRef>& mods = {}) {
  InsMap m{kind, identity_functor(sig), {}, {}};
  for (int s = 0; s < sig->n_obj(); ++s) {
    m.alpha.push_back(identity_function(sen.size(s)));
    if (!is_pi(kind)) m.beta.push_back(identity_functor(mods.at(s)));
  }
  return m;
}

inline InsMap identity_map(MapKind kind, const Institution& I) { return identity_map(kind, I.sig, I.sen, I.mod); }
inline InsMap identity_map(MapKind kind, const PiInstitution& J) { return identity_map(kind, J.sig, J.sen); }

/// F on maps: drop β.
inline InsMap map_on_derived_F(const InsMap& m) {
  if (is_pi(m.kind)) throw StructuralError("F expects an institution map");
  InsMap out{m.kind == MapKind::ins_morphism ? MapKind::pi_morphism : MapKind::pi_comorphism, m.phi, m.alpha, {}};
  return out;
}

/// G on maps: attach β_Σ(T) = α_Σ^{-1}(T) between the derived institutions G(src), G(dst).
inline InsMap map_on_derived_G(const InsMap& m, const Institution& gsrc, const Institution& gdst) {
  if (!is_pi(m.kind)) throw StructuralError("G expects a pi-institution map");
  const bool co = m.kind == MapKind::pi_comorphism;
  InsMap out{co ? MapKind::ins_comorphism : MapKind::ins_morphism, m.phi, m.alpha, {}};
  for (int s = 0; s < gsrc.sig->n_obj(); ++s) {
    const int t = m.phi.omap[s];
    const Institution& from = co ? gdst : gsrc;
    const Institution& to = co ? gsrc : gdst;
    const int fs = co ? t : s, ts = co ? s : t;
    std::vector<int> omap;
    for (const auto& closed : from.sat[fs]) {
      Subset p = preimage(m.alpha[s], closed);
      int o = closed_set_object(*to.mod[ts], to.sen, ts, p);
      if (o < 0) throw StructuralError("alpha^-1 of a closed set is not closed at " + gsrc.sig->objects[s]);
      omap.push_back(o);
    }
    out.beta.push_back(codiscrete_functor(from.mod[fs], to.mod[ts], std::move(omap)));
  }
  return out;
}

inline InsMap map_on_derived_G(const InsMap& m, const PiInstitution& src, const PiInstitution& dst) {
  return map_on_derived_G(m, derive_institution(src), derive_institution(dst));
}

// ---------------------------------------------------------------------------
// Enumeration of hom-sets

namespace detail {

inline std::vector<std::pair<Functor, std::vector<Function>>> enumerate_frames(MapKind kind, const CatRef& ssig,
                                                                               const SetFunctor& ssen,
                                                                               const CatRef& dsig,
                                                                               const SetFunctor& dsen, Guard& guard) {
  std::vector<std::pair<Functor, std::vector<Function>>> out;
  for (const auto& phi : enumerate_functors(ssig, dsig, guard)) {
    SetFunctor pulled = precompose(dsen, phi);
    auto alphas = is_co(kind) ? enumerate_set_nat(ssen, pulled, guard) : enumerate_set_nat(pulled, ssen, guard);
    for (auto& a : alphas) out.emplace_back(phi, std::move(a));
  }
  return out;
}

}  // namespace detail

inline std::vector<InsMap> enumerate_pi_maps(MapKind kind, const PiInstitution& src, const PiInstitution& dst,
                                             Guard& guard) {
  std::vector<InsMap> out;
  for (auto& [phi, alpha] : detail::enumerate_frames(kind, src.sig, src.sen, dst.sig, dst.sen, guard)) {
    InsMap m{kind, phi, alpha, {}};
    if (validate_map(m, src, dst).ok()) out.push_back(std::move(m));
  }
  return out;
}

inline std::vector<InsMap> enumerate_ins_maps(MapKind kind, const Institution& src, const Institution& dst,
                                              Guard& guard) {
  std::vector<InsMap> out;
  const FinCat& S = *src.sig;
  const bool co = is_co(kind);
  for (auto& [phi, alpha] : detail::enumerate_frames(kind, src.sig, src.sen, dst.sig, dst.sen, guard)) {
    // candidate β components per Σ, already filtered by the satisfaction condition at Σ
    std::vector<std::vector<Functor>> cands(S.n_obj());
    for (int s = 0; s < S.n_obj(); ++s) {
      const int t = phi.omap[s];
      const CatRef& from = co ? dst.mod[t] : src.mod[s];
      const CatRef& to = co ? src.mod[s] : dst.mod[t];
      for (auto& b : enumerate_functors(from, to, guard)) {
        bool ok = true;
        for (int x = 0; x < from->n_obj() && ok; ++x) {
          const Subset& row_from = co ? dst.sat[t][x] : src.sat[s][x];
          const Subset& row_to = co ? src.sat[s][b.omap[x]] : dst.sat[t][b.omap[x]];
          // co: m' ⊨ α(φ) iff β(m') ⊨ φ;  mor: m ⊨ α(φ') iff β(m) ⊨ φ'
          for (std::size_t p = 0; p < alpha[s].size() && ok; ++p) {
            ok = row_from.test(alpha[s][p]) == row_to.test(p);
          }
        }
        if (ok) cands[s].push_back(std::move(b));
      }
    }
    std::vector<Functor> beta(S.n_obj());
    std::function<void(int)> rec = [&](int s) {
      guard.tick();
      if (s == S.n_obj()) {
        InsMap m{kind, phi, alpha, beta};
        if (validate_map(m, src, dst).ok()) out.push_back(std::move(m));
        return;
      }
      for (const auto& b : cands[s]) {
        beta[s] = b;
        bool ok = true;
        for (int f = 0; f < S.n_arr() && ok; ++f) {
          const int a = S.src(f), c = S.dst(f);
          if (std::max(a, c) != s) continue;
          const Functor& Mf = src.mod_map[f];
          const Functor& Mpf = dst.mod_map[phi.amap[f]];
          ok = co ? compose(Mf, beta[c]) == compose(beta[a], Mpf) : compose(Mpf, beta[c]) == compose(beta[a], Mf);
        }
        if (ok) rec(s + 1);
      }
    };
    rec(0);
  }
  return out;
}

/// Hom-set check for the adjunction between G and F in the chosen flavor.
/// Comorphisms: G ⊣ F, Hom_Ins(G J, I) ≅ Hom_π(J, F I).
/// Morphisms:   F ⊣ G, Hom_π(F I, J) ≅ Hom_Ins(I, G J).
/// Both transposes are "drop β" and "attach β(m) = α^{-1}(theory of m)".
inline HomBijection check_gf_adjunction(const PiInstitution& J, const Institution& I, bool comorphisms, Guard& guard) {
  const Institution GJ = derive_institution(J);
  const PiInstitution FI = derive_pi(I);
  // attach β to a π-map whose institution side is I and whose derived side is G J
  auto attach = [&](const InsMap& m) -> std::optional<InsMap> {
    InsMap out{comorphisms ? MapKind::ins_comorphism : MapKind::ins_morphism, m.phi, m.alpha, {}};
    for (int s = 0; s < m.phi.src->n_obj(); ++s) {
      const int t = m.phi.omap[s];
      // co: β_Σ: Mod_I(φΣ) → Mod_GJ(Σ); mor: β_Σ: Mod_I(Σ) → Mod_GJ(ΦΣ)
      const int is = comorphisms ? t : s, js = comorphisms ? s : t;
      std::vector<int> omap;
      for (const auto& row : I.sat[is]) {
        Subset p = preimage(m.alpha[s], row);
        int o = closed_set_object(*GJ.mod[js], GJ.sen, js, p);
        if (o < 0) return std::nullopt;
        omap.push_back(o);
      }
      Functor b{I.mod[is], GJ.mod[js], omap, {}, Variance::covariant};
      for (const auto& a : I.mod[is]->arrows) b.amap.push_back(GJ.mod[js]->hom(omap[a.src], omap[a.dst]).at(0));
      out.beta.push_back(std::move(b));
    }
    return out;
  };
  auto drop = [&](const InsMap& m) -> std::optional<InsMap> { return map_on_derived_F(m); };
  if (comorphisms) {
    auto ins_side = enumerate_ins_maps(MapKind::ins_comorphism, GJ, I, guard);
    auto pi_side = enumerate_pi_maps(MapKind::pi_comorphism, J, FI, guard);
    return hom_bijection<InsMap, InsMap>(ins_side, pi_side, drop, attach, "G -| F (comorphisms)");
  }
  auto pi_side = enumerate_pi_maps(MapKind::pi_morphism, FI, J, guard);
  auto ins_side = enumerate_ins_maps(MapKind::ins_morphism, I, GJ, guard);
  return hom_bijection<InsMap, InsMap>(pi_side, ins_side, attach, drop, "F -| G (morphisms)");
}

}  // namespace insfin
