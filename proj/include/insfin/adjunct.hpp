#pragma once

#include "insfin/adjunction.hpp"
#include "insfin/rooms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace insfin {

// ---------------------------------------------------------------------------
// Category models

/// One finite category, objects and arrows by index.
struct FinCatModel {
  using object = int;
  using arrow = int;
  CatRef cat;

  int identity(int o) const { return cat->identity[o]; }
  int compose(int g, int f) const {
    if (cat->dst(f) != cat->src(g)) throw StructuralError("composite of non-composable arrows");
    return cat->compose(g, f);
  }
  bool equal(int a, int b) const { return a == b; }
  std::string name(int o) const { return cat->objects[o]; }
};

/// Adjunction datum made of fincat functors and natural transformations.
inline AdjunctionDatum<FinCatModel, FinCatModel> fincat_adjunction(const Functor& f, const Functor& g,
                                                                   const NatTrans& unit, const NatTrans& counit) {
  AdjunctionDatum<FinCatModel, FinCatModel> a;
  if (!same_cat(f.src, g.dst) || !same_cat(f.dst, g.src)) throw StructuralError("adjunction functors do not match");
  if (unit.components.size() != static_cast<std::size_t>(f.src->n_obj()) ||
      counit.components.size() != static_cast<std::size_t>(f.dst->n_obj()))
    throw StructuralError("unit or counit has the wrong number of components");
  a.lower = "C";
  a.upper = "D";
  a.left_obj = [f](int x) { return f.omap[x]; };
  a.left_arr = [f](int h) { return f.amap[h]; };
  a.right_obj = [g](int y) { return g.omap[y]; };
  a.right_arr = [g](int h) { return g.amap[h]; };
  a.unit = [unit](int x) { return unit.components[x]; };
  a.counit = [counit](int y) { return counit.components[y]; };
  return a;
}

/// 1 ⊣ 1 on any category model.
template <CategoryModel K>
AdjunctionDatum<K, K> identity_adjunction(const K& k, const std::string& name) {
  AdjunctionDatum<K, K> a;
  a.lower = name;
  a.upper = name;
  a.left_obj = [](const auto& x) { return x; };
  a.left_arr = [](const auto& f) { return f; };
  a.right_obj = [](const auto& x) { return x; };
  a.right_arr = [](const auto& f) { return f; };
  a.unit = [k](const auto& x) { return k.identity(x); };
  a.counit = [k](const auto& x) { return k.identity(x); };
  return a;
}

inline std::vector<int> all_objects(const CatRef& c) {
  std::vector<int> v(c->n_obj());
  for (int i = 0; i < c->n_obj(); ++i) v[i] = i;
  return v;
}

/// CAT restricted to finite categories.
struct CatModel {
  using object = CatRef;
  using arrow = Functor;

  Functor identity(const CatRef& c) const { return identity_functor(c); }
  Functor compose(const Functor& g, const Functor& f) const { return insfin::compose(g, f); }
  bool equal(const Functor& a, const Functor& b) const { return a == b; }
  std::string name(const CatRef& c) const {
    std::string s = "[";
    for (std::size_t i = 0; i < c->objects.size(); ++i) s += (i ? "," : "") + c->objects[i];
    return s + "]";
  }
};

/// πIns_co or πIns_mor.
struct PiModel {
  using object = PiInstitution;
  using arrow = InsMap;
  MapKind kind = MapKind::pi_comorphism;

  InsMap identity(const PiInstitution& j) const { return identity_map(kind, j); }
  InsMap compose(const InsMap& g, const InsMap& f) const { return compose_maps(g, f); }
  bool equal(const InsMap& a, const InsMap& b) const { return a == b; }
  std::string name(const PiInstitution& j) const { return "pi-institution over " + CatModel{}.name(j.sig); }
};

// ---------------------------------------------------------------------------
// ⊤, ⊥ and the forgetful functor to CAT

enum class Extreme { top, bottom };

/// ⊤a: Sen constant {*}, everything closed only at {*}. ⊥a: Sen constant ∅.
inline PiInstitution top_bottom(const CatRef& a, Extreme flavor) {
  const bool top = flavor == Extreme::top;
  PiInstitution J{a, SetFunctor{a, {}, {}, Variance::covariant}, {}};
  for (int x = 0; x < a->n_obj(); ++x) {
    J.sen.carriers.push_back(top ? std::vector<std::string>{"*"} : std::vector<std::string>{});
    J.closures.push_back(ClosureOp::codiscrete(top ? 1 : 0));
  }
  for (int h = 0; h < a->n_arr(); ++h) J.sen.fmap.push_back(top ? Function{0} : Function{});
  return J;
}

inline InsMap top_bottom(const Functor& F, Extreme flavor, MapKind kind = MapKind::pi_comorphism) {
  InsMap m{kind, F, {}, {}};
  for (int x = 0; x < F.src->n_obj(); ++x) m.alpha.push_back(flavor == Extreme::top ? Function{0} : Function{});
  return m;
}

struct Lift {
  InsMap map;
  std::size_t candidates = 0;  // maps over F found by enumeration
};

namespace detail {

inline Lift unique_over(const InsMap& built, const PiInstitution& src, const PiInstitution& dst, Guard& guard) {
  Lift out{built, 0};
  for (const auto& m : enumerate_pi_maps(built.kind, src, dst, guard))
    if (m.phi == built.phi) {
      ++out.candidates;
      if (!(m == built)) throw StructuralError("lift: enumeration found a different map over F");
    }
  return out;
}

}  // namespace detail

/// Comorphisms: F : Sig^J → a gives the unique J → ⊤a over F.
/// Morphisms:   F : a → Sig^J gives the unique ⊤a → J over F.
inline Lift lift_to_top(const PiInstitution& j, const Functor& F, MapKind kind, Guard& guard) {
  if (kind == MapKind::pi_comorphism) {
    if (!same_cat(F.src, j.sig)) throw StructuralError("lift_to_top: F must leave Sig^J");
    PiInstitution top = top_bottom(F.dst, Extreme::top);
    InsMap m{kind, F, {}, {}};
    for (int s = 0; s < j.sig->n_obj(); ++s) m.alpha.push_back(Function(j.sen.size(s), 0));
    return detail::unique_over(m, j, top, guard);
  }
  if (!same_cat(F.dst, j.sig)) throw StructuralError("lift_to_top: F must land in Sig^J");
  PiInstitution top = top_bottom(F.src, Extreme::top);
  InsMap m{kind, F, {}, {}};
  for (int x = 0; x < F.src->n_obj(); ++x) m.alpha.push_back(Function(j.sen.size(F.omap[x]), 0));
  return detail::unique_over(m, top, j, guard);
}

/// Comorphisms: F : a → Sig^J gives the unique ⊥a → J over F (vacuously).
/// Morphisms:   F : Sig^J → a gives the unique J → ⊥a over F.
inline Lift lift_from_bottom(const PiInstitution& j, const Functor& F, MapKind kind, Guard& guard) {
  if (kind == MapKind::pi_comorphism) {
    if (!same_cat(F.dst, j.sig)) throw StructuralError("lift_from_bottom: F must land in Sig^J");
    InsMap m = top_bottom(F, Extreme::bottom, kind);
    return detail::unique_over(m, top_bottom(F.src, Extreme::bottom), j, guard);
  }
  if (!same_cat(F.src, j.sig)) throw StructuralError("lift_from_bottom: F must leave Sig^J");
  InsMap m = top_bottom(F, Extreme::bottom, kind);
  return detail::unique_over(m, j, top_bottom(F.dst, Extreme::bottom), guard);
}

/// ⊥ ⊣ U into πIns_co; unit the identity on a, counit the lift ⊥(Sig^J) → J over the identity.
inline AdjunctionDatum<CatModel, PiModel> bottom_forgetful_co() {
  AdjunctionDatum<CatModel, PiModel> a;
  a.lower = "CAT";
  a.upper = "piIns_co";
  a.left_obj = [](const CatRef& c) { return top_bottom(c, Extreme::bottom); };
  a.left_arr = [](const Functor& F) { return top_bottom(F, Extreme::bottom); };
  a.right_obj = [](const PiInstitution& j) { return j.sig; };
  a.right_arr = [](const InsMap& m) { return m.phi; };
  a.unit = [](const CatRef& c) { return identity_functor(c); };
  a.counit = [](const PiInstitution& j) { return top_bottom(identity_functor(j.sig), Extreme::bottom); };
  return a;
}

/// U ⊣ ⊤ out of πIns_co; unit the lift J → ⊤(Sig^J), counit the identity.
inline AdjunctionDatum<PiModel, CatModel> forgetful_top_co() {
  AdjunctionDatum<PiModel, CatModel> a;
  a.lower = "piIns_co";
  a.upper = "CAT";
  a.left_obj = [](const PiInstitution& j) { return j.sig; };
  a.left_arr = [](const InsMap& m) { return m.phi; };
  a.right_obj = [](const CatRef& c) { return top_bottom(c, Extreme::top); };
  a.right_arr = [](const Functor& F) { return top_bottom(F, Extreme::top); };
  a.unit = [](const PiInstitution& j) {
    InsMap m{MapKind::pi_comorphism, identity_functor(j.sig), {}, {}};
    for (int s = 0; s < j.sig->n_obj(); ++s) m.alpha.push_back(Function(j.sen.size(s), 0));
    return m;
  };
  a.counit = [](const CatRef& c) { return identity_functor(c); };
  return a;
}

/// ⊤ ⊣ U into πIns_mor.
inline AdjunctionDatum<CatModel, PiModel> top_forgetful_mor() {
  AdjunctionDatum<CatModel, PiModel> a;
  a.lower = "CAT";
  a.upper = "piIns_mor";
  a.left_obj = [](const CatRef& c) { return top_bottom(c, Extreme::top); };
  a.left_arr = [](const Functor& F) { return top_bottom(F, Extreme::top, MapKind::pi_morphism); };
  a.right_obj = [](const PiInstitution& j) { return j.sig; };
  a.right_arr = [](const InsMap& m) { return m.phi; };
  a.unit = [](const CatRef& c) { return identity_functor(c); };
  a.counit = [](const PiInstitution& j) {
    InsMap m{MapKind::pi_morphism, identity_functor(j.sig), {}, {}};
    for (int s = 0; s < j.sig->n_obj(); ++s) m.alpha.push_back(Function(j.sen.size(s), 0));
    return m;
  };
  return a;
}

/// U ⊣ ⊥ out of πIns_mor.
inline AdjunctionDatum<PiModel, CatModel> forgetful_bottom_mor() {
  AdjunctionDatum<PiModel, CatModel> a;
  a.lower = "piIns_mor";
  a.upper = "CAT";
  a.left_obj = [](const PiInstitution& j) { return j.sig; };
  a.left_arr = [](const InsMap& m) { return m.phi; };
  a.right_obj = [](const CatRef& c) { return top_bottom(c, Extreme::bottom); };
  a.right_arr = [](const Functor& F) { return top_bottom(F, Extreme::bottom, MapKind::pi_morphism); };
  a.unit = [](const PiInstitution& j) { return top_bottom(identity_functor(j.sig), Extreme::bottom, MapKind::pi_morphism); };
  a.counit = [](const CatRef& c) { return identity_functor(c); };
  return a;
}

// ---------------------------------------------------------------------------
// Diagrams

/// (A, F) with F : A → Set.
struct DiagObject {
  CatRef index;
  SetFunctor diagram;
  bool operator==(const DiagObject& o) const { return same_cat(index, o.index) && diagram == o.diagram; }
};

/// Arrow of Diag_co(Set): (T, α : F ⇒ F' ∘ T).
struct DiagMap {
  Functor T;
  std::vector<Function> alpha;
  bool operator==(const DiagMap&) const = default;
};

inline Report validate_diag(const DiagObject& d) {
  Report rep;
  if (!same_cat(d.index, d.diagram.src)) rep.structural("diagram", "index category mismatch");
  if (!rep.ok()) return rep;
  rep.merge(validate_set_functor(d.diagram));
  return rep;
}

inline Report validate_diag_map(const DiagMap& m, const DiagObject& a, const DiagObject& b) {
  Report rep;
  if (!same_cat(m.T.src, a.index) || !same_cat(m.T.dst, b.index)) {
    rep.structural("T", "wrong endpoints");
    return rep;
  }
  rep.merge(validate_functor(m.T), "T");
  if (!rep.ok()) return rep;
  rep.merge(validate_set_nat(a.diagram, precompose(b.diagram, m.T), m.alpha), "alpha");
  return rep;
}

struct DiagModel {
  using object = DiagObject;
  using arrow = DiagMap;

  DiagMap identity(const DiagObject& d) const {
    DiagMap m{identity_functor(d.index), {}};
    for (int a = 0; a < d.index->n_obj(); ++a) m.alpha.push_back(identity_function(d.diagram.size(a)));
    return m;
  }
  /// (T', α') • (T, α) = (T'T, α'_T ∘ α).
  DiagMap compose(const DiagMap& g, const DiagMap& f) const {
    DiagMap out{insfin::compose(g.T, f.T), {}};
    for (std::size_t a = 0; a < f.alpha.size(); ++a) out.alpha.push_back(compose_fn(g.alpha[f.T.omap[a]], f.alpha[a]));
    return out;
  }
  bool equal(const DiagMap& a, const DiagMap& b) const { return a == b; }
  std::string name(const DiagObject& d) const { return "diagram over " + CatModel{}.name(d.index); }
};

inline std::vector<DiagMap> enumerate_diag_maps(const DiagObject& a, const DiagObject& b, Guard& guard) {
  std::vector<DiagMap> out;
  for (const auto& T : enumerate_functors(a.index, b.index, guard))
    for (auto& alpha : enumerate_set_nat(a.diagram, precompose(b.diagram, T), guard)) out.push_back({T, alpha});
  return out;
}

enum class DiagSide { L, R };

/// L: every subset closed. R: only the full carrier closed.
inline PiInstitution diag_lr(const DiagObject& d, DiagSide flavor) {
  PiInstitution J{d.index, d.diagram, {}};
  for (int a = 0; a < d.index->n_obj(); ++a)
    J.closures.push_back(flavor == DiagSide::L ? ClosureOp::discrete(d.diagram.size(a))
                                               : ClosureOp::codiscrete(d.diagram.size(a)));
  return J;
}

inline DiagObject forget(const PiInstitution& j) { return {j.sig, j.sen}; }
inline DiagMap forget(const InsMap& m) { return {m.phi, m.alpha}; }
inline InsMap equip(const DiagMap& m) { return {MapKind::pi_comorphism, m.T, m.alpha, {}}; }

inline AdjunctionDatum<DiagModel, PiModel> diag_L_forgetful() {
  AdjunctionDatum<DiagModel, PiModel> a;
  a.lower = "Diag_co(Set)";
  a.upper = "piIns_co";
  a.left_obj = [](const DiagObject& d) { return diag_lr(d, DiagSide::L); };
  a.left_arr = [](const DiagMap& m) { return equip(m); };
  a.right_obj = [](const PiInstitution& j) { return forget(j); };
  a.right_arr = [](const InsMap& m) { return forget(m); };
  a.unit = [](const DiagObject& d) { return DiagModel{}.identity(d); };
  a.counit = [](const PiInstitution& j) { return identity_map(MapKind::pi_comorphism, j); };
  return a;
}

inline AdjunctionDatum<PiModel, DiagModel> diag_forgetful_R() {
  AdjunctionDatum<PiModel, DiagModel> a;
  a.lower = "piIns_co";
  a.upper = "Diag_co(Set)";
  a.left_obj = [](const PiInstitution& j) { return forget(j); };
  a.left_arr = [](const InsMap& m) { return forget(m); };
  a.right_obj = [](const DiagObject& d) { return diag_lr(d, DiagSide::R); };
  a.right_arr = [](const DiagMap& m) { return equip(m); };
  a.unit = [](const PiInstitution& j) { return identity_map(MapKind::pi_comorphism, j); };
  a.counit = [](const DiagObject& d) { return DiagModel{}.identity(d); };
  return a;
}

/// Hom_π(L d, J) against Hom_Diag(d, U J), transposes keep (T, α).
inline HomBijection diag_L_bijection(const DiagObject& d, const PiInstitution& j, Guard& guard) {
  auto lhs = enumerate_pi_maps(MapKind::pi_comorphism, diag_lr(d, DiagSide::L), j, guard);
  auto rhs = enumerate_diag_maps(d, forget(j), guard);
  std::function<std::optional<DiagMap>(const InsMap&)> r = [](const InsMap& m) -> std::optional<DiagMap> { return forget(m); };
  std::function<std::optional<InsMap>(const DiagMap&)> l = [](const DiagMap& m) -> std::optional<InsMap> { return equip(m); };
  return hom_bijection<InsMap, DiagMap>(lhs, rhs, r, l, "L -| U");
}

/// Hom_Diag(U J, d) against Hom_π(J, R d).
inline HomBijection diag_R_bijection(const PiInstitution& j, const DiagObject& d, Guard& guard) {
  auto lhs = enumerate_diag_maps(forget(j), d, guard);
  auto rhs = enumerate_pi_maps(MapKind::pi_comorphism, j, diag_lr(d, DiagSide::R), guard);
  std::function<std::optional<InsMap>(const DiagMap&)> r = [](const DiagMap& m) -> std::optional<InsMap> { return equip(m); };
  std::function<std::optional<DiagMap>(const InsMap&)> l = [](const InsMap& m) -> std::optional<DiagMap> { return forget(m); };
  return hom_bijection<DiagMap, InsMap>(lhs, rhs, r, l, "U -| R");
}

// ---------------------------------------------------------------------------
// Diagrams in Set × Set and the adjunctions lifted from the first projection

struct DiagPair {
  CatRef index;
  SetFunctor first;
  SetFunctor second;
  bool operator==(const DiagPair& o) const {
    return same_cat(index, o.index) && first == o.first && second == o.second;
  }
};

struct DiagPairMap {
  Functor T;
  std::vector<Function> alpha1;
  std::vector<Function> alpha2;
  bool operator==(const DiagPairMap&) const = default;
};

struct DiagPairModel {
  using object = DiagPair;
  using arrow = DiagPairMap;

  DiagPairMap identity(const DiagPair& d) const {
    DiagModel m;
    return {identity_functor(d.index), m.identity({d.index, d.first}).alpha, m.identity({d.index, d.second}).alpha};
  }
  DiagPairMap compose(const DiagPairMap& g, const DiagPairMap& f) const {
    DiagModel m;
    DiagMap a = m.compose({g.T, g.alpha1}, {f.T, f.alpha1});
    DiagMap b = m.compose({g.T, g.alpha2}, {f.T, f.alpha2});
    return {a.T, a.alpha, b.alpha};
  }
  bool equal(const DiagPairMap& a, const DiagPairMap& b) const { return a == b; }
  std::string name(const DiagPair& d) const { return "diagram pair over " + CatModel{}.name(d.index); }
};

/// Constant diagram at ∅ or at a singleton {*}.
inline SetFunctor constant_set_functor(const CatRef& index, bool singleton) {
  SetFunctor out{index, {}, {}, Variance::covariant};
  for (int x = 0; x < index->n_obj(); ++x)
    out.carriers.push_back(singleton ? std::vector<std::string>{"*"} : std::vector<std::string>{});
  for (int h = 0; h < index->n_arr(); ++h) out.fmap.push_back(singleton ? Function{0} : Function{});
  return out;
}

inline std::vector<Function> to_constant(const SetFunctor& F, bool singleton) {
  std::vector<Function> out;
  for (std::size_t x = 0; x < F.carriers.size(); ++x) out.push_back(singleton ? Function(F.size(x), 0) : Function{});
  return out;
}

/// Ẽ ⊣ R̃ for E the first projection Set × Set → Set and R(S) = (S, 1).
inline AdjunctionDatum<DiagPairModel, DiagModel> projection_right() {
  AdjunctionDatum<DiagPairModel, DiagModel> a;
  a.lower = "Diag_co(SetxSet)";
  a.upper = "Diag_co(Set)";
  a.left_obj = [](const DiagPair& d) { return DiagObject{d.index, d.first}; };
  a.left_arr = [](const DiagPairMap& m) { return DiagMap{m.T, m.alpha1}; };
  a.right_obj = [](const DiagObject& d) { return DiagPair{d.index, d.diagram, constant_set_functor(d.index, true)}; };
  a.right_arr = [](const DiagMap& m) { return DiagPairMap{m.T, m.alpha, std::vector<Function>(m.alpha.size(), Function{0})}; };
  a.unit = [](const DiagPair& d) {
    return DiagPairMap{identity_functor(d.index), DiagModel{}.identity({d.index, d.first}).alpha,
                       to_constant(d.second, true)};
  };
  a.counit = [](const DiagObject& d) { return DiagModel{}.identity(d); };
  return a;
}

/// L̃ ⊣ Ẽ for E the first projection and L(S) = (S, ∅).
inline AdjunctionDatum<DiagModel, DiagPairModel> projection_left() {
  AdjunctionDatum<DiagModel, DiagPairModel> a;
  a.lower = "Diag_co(Set)";
  a.upper = "Diag_co(SetxSet)";
  a.left_obj = [](const DiagObject& d) { return DiagPair{d.index, d.diagram, constant_set_functor(d.index, false)}; };
  a.left_arr = [](const DiagMap& m) {
    return DiagPairMap{m.T, m.alpha, std::vector<Function>(m.alpha.size())};
  };
  a.right_obj = [](const DiagPair& d) { return DiagObject{d.index, d.first}; };
  a.right_arr = [](const DiagPairMap& m) { return DiagMap{m.T, m.alpha1}; };
  a.unit = [](const DiagObject& d) { return DiagModel{}.identity(d); };
  a.counit = [](const DiagPair& d) {
    return DiagPairMap{identity_functor(d.index), DiagModel{}.identity({d.index, d.first}).alpha,
                       std::vector<Function>(d.index->n_obj())};
  };
  return a;
}

// ---------------------------------------------------------------------------
// Institution-level F/G adjunction in all four stated forms

/// left_is_G: Hom_Ins(G J, I) ≅ Hom_π(J, F I); otherwise Hom_π(F I, J) ≅ Hom_Ins(I, G J).
/// The transposes are "drop β" and "attach β by membership" where the latter is defined; otherwise the
/// backward transpose is the unique institution map with the given frame, if there is one.
inline HomBijection institution_adjunction(const PiInstitution& J, const Institution& I, bool left_is_G,
                                           bool comorphisms, Guard& guard) {
  if (left_is_G == comorphisms) return check_gf_adjunction(J, I, comorphisms, guard);
  const Institution GJ = derive_institution(J);
  const PiInstitution FI = derive_pi(I);
  const MapKind ik = comorphisms ? MapKind::ins_comorphism : MapKind::ins_morphism;
  const MapKind pk = comorphisms ? MapKind::pi_comorphism : MapKind::pi_morphism;
  std::vector<InsMap> ins_side = left_is_G ? enumerate_ins_maps(ik, GJ, I, guard) : enumerate_ins_maps(ik, I, GJ, guard);
  std::vector<InsMap> pi_side = left_is_G ? enumerate_pi_maps(pk, J, FI, guard) : enumerate_pi_maps(pk, FI, J, guard);
  std::function<std::optional<InsMap>(const InsMap&)> drop = [](const InsMap& m) -> std::optional<InsMap> {
    return map_on_derived_F(m);
  };
  std::function<std::optional<InsMap>(const InsMap&)> lift = [&](const InsMap& p) -> std::optional<InsMap> {
    std::optional<InsMap> found;
    for (const auto& m : ins_side)
      if (m.phi == p.phi && m.alpha == p.alpha) {
        if (found) return std::nullopt;
        found = m;
      }
    return found;
  };
  const std::string where = std::string(left_is_G ? "G -| F" : "F -| G") + (comorphisms ? " (comorphisms)" : " (morphisms)");
  if (left_is_G) return hom_bijection<InsMap, InsMap>(ins_side, pi_side, drop, lift, where);
  return hom_bijection<InsMap, InsMap>(pi_side, ins_side, lift, drop, where);
}

// ---------------------------------------------------------------------------
// Realizing a room-level adjunction

enum class RoomAdjunction { F_left_of_G, G_left_of_F, identity };
enum class RealizationKind { ins, coins };

struct Lemma4Result {
  Report room_level;       // hom-set bijection on the room grid
  Report pointwise;        // realization of 𝓕 and 𝒢 agrees with F and G on the fixtures
  Report realized;         // hom-set bijection of the realized adjunction on the fixtures
  std::string realized_form;
  std::size_t pairs = 0;

  Report combined() const {
    Report r;
    r.merge(room_level, "rooms");
    r.merge(pointwise, "pointwise");
    r.merge(realized, "realized");
    return r;
  }
};

/// Realizes a room-level adjunction on fixture pairs. ins keeps the direction of the adjunction,
/// coins reverses it.
inline Lemma4Result lemma4_empirical(RoomAdjunction a, RealizationKind kind, const std::vector<Institution>& inss,
                                     const std::vector<PiInstitution>& pis, std::size_t room_bound, Guard& guard) {
  Lemma4Result out;
  const bool co = kind == RealizationKind::coins;
  if (a == RoomAdjunction::identity) {
    out.room_level = guarded([&] {
      Report rep;
      for (const auto& r : all_small_rooms(std::min<std::size_t>(room_bound, 1)))
        for (const auto& s : all_small_rooms(std::min<std::size_t>(room_bound, 1))) {
          auto v = enumerate_room_morphisms(r, s, guard);
          std::function<std::optional<RoomMorphism>(const RoomMorphism&)> id = [](const RoomMorphism& m) {
            return std::optional<RoomMorphism>(m);
          };
          rep.merge(hom_bijection<RoomMorphism, RoomMorphism>(v, v, id, id, "Id -| Id (rooms)").report);
        }
      return rep;
    });
    out.realized_form = co ? "Id -| Id (comorphisms)" : "Id -| Id (morphisms)";
    out.realized = guarded([&] {
      Report rep;
      const MapKind k = co ? MapKind::ins_comorphism : MapKind::ins_morphism;
      for (const auto& I : inss)
        for (const auto& I2 : inss) {
          ++out.pairs;
          auto v = enumerate_ins_maps(k, I, I2, guard);
          std::function<std::optional<InsMap>(const InsMap&)> id = [](const InsMap& m) { return std::optional<InsMap>(m); };
          rep.merge(hom_bijection<InsMap, InsMap>(v, v, id, id, out.realized_form).report);
        }
      return rep;
    });
    return out;
  }
  const bool room_g_left = a == RoomAdjunction::G_left_of_F;
  GridResult grid = room_adjunction_grid(room_g_left, room_bound, PiRoomLaw::lax, guard);
  out.room_level = grid.report;
  out.pointwise = guarded([&] {
    Report rep;
    for (const auto& I : inss)
      if (!(apply_F(encode(I)) == encode(derive_pi(I)))) rep.violation("F", "realization differs from derive_pi");
    for (const auto& J : pis)
      if (!(decode(apply_G(encode(J))) == derive_institution(J)))
        rep.violation("G", "realization differs from derive_institution");
    return rep;
  });
  // ins keeps L ⊣ R; coins turns it into R ⊣ L
  const bool g_left = co ? !room_g_left : room_g_left;
  out.realized_form = std::string(g_left ? "G -| F" : "F -| G") + (co ? " (comorphisms)" : " (morphisms)");
  out.realized = guarded([&] {
    Report rep;
    for (const auto& J : pis)
      for (const auto& I : inss) {
        ++out.pairs;
        rep.merge(institution_adjunction(J, I, g_left, co, guard).report);
      }
    return rep;
  });
  return out;
}

}  // namespace insfin
