#pragma once

// JSON spec files: one top-level object with "kind", "version" and a kind-specific body.
// Elements are referred to by id everywhere; indices never appear in files.

#include "insfin/filterpair.hpp"
#include "insfin/groth.hpp"
#include "insfin/instcore.hpp"
#include "insfin/multialg.hpp"
#include "insfin/proplogic.hpp"
#include "insfin/rooms.hpp"
#include "insfin/skolem.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace insfin::io {

using Json = nlohmann::json;

inline constexpr int kVersion = 1;

inline const std::vector<std::string>& kinds() {
  static const std::vector<std::string> k{"category",    "functor",      "institution", "pi_institution",
                                          "map",         "room_diagram", "indexed_cat", "logic",
                                          "filter_pair", "multialgebra", "fol_model",   "skolem_job"};
  return k;
}

class SchemaError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// Named categories visible to string references: the file's "categories" plus those of its imports.
struct Context {
  std::filesystem::path dir;
  std::map<std::string, CatRef> categories;
};

namespace detail {

inline const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing \"" + key + "\"");
  return *it;
}

inline const Json* maybe(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<int>();
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  return j;
}

inline const Json& object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  return j;
}

/// A list of distinct ids.
inline std::vector<std::string> ids(const Json& j, const std::string& where) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : array(j, where)) {
    out.push_back(str(e, where));
    if (!seen.insert(out.back()).second) throw SchemaError(where + ": duplicate id \"" + out.back() + "\"");
  }
  return out;
}

inline int lookup(const std::vector<std::string>& names, const std::string& id, const std::string& where) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == id) return static_cast<int>(i);
  throw SchemaError(where + ": unknown id \"" + id + "\"");
}

inline Json subset_json(const Subset& s, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (int i : subset_indices(s)) out.push_back(names[i]);
  return out;
}

inline Subset subset_from(const Json& j, const std::vector<std::string>& names, const std::string& where) {
  Subset s(names.size());
  for (const auto& e : array(j, where)) s.set(lookup(names, str(e, where), where));
  return s;
}

/// {"a": "b", ...} as a total function between two id lists.
inline Json function_json(const Function& f, const std::vector<std::string>& dom, const std::vector<std::string>& cod) {
  Json out = Json::object();
  for (std::size_t i = 0; i < f.size(); ++i) out[dom[i]] = cod[f[i]];
  return out;
}

inline Function function_from(const Json& j, const std::vector<std::string>& dom, const std::vector<std::string>& cod,
                              const std::string& where) {
  Function f(dom.size(), -1);
  for (const auto& [k, v] : object(j, where).items()) f[lookup(dom, k, where)] = lookup(cod, str(v, where), where);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0) throw SchemaError(where + ": no image for \"" + dom[i] + "\"");
  return f;
}

inline std::vector<std::string> arrow_ids(const FinCat& c) {
  std::vector<std::string> out;
  for (const auto& a : c.arrows) out.push_back(a.id);
  return out;
}

inline Json symbols_json(const std::vector<fol::Symbol>& syms) {
  Json out = Json::array();
  for (const auto& s : syms) out.push_back(Json::array({s.name, s.arity}));
  return out;
}

inline std::vector<fol::Symbol> symbols_from(const Json& j, const std::string& where) {
  std::vector<fol::Symbol> out;
  std::set<std::string> seen;
  for (const auto& e : array(j, where)) {
    if (!e.is_array() || e.size() != 2) throw SchemaError(where + ": symbols are [name, arity] pairs");
    out.push_back({str(e[0], where), integer(e[1], where)});
    if (!seen.insert(out.back().name).second) throw SchemaError(where + ": duplicate id \"" + out.back().name + "\"");
  }
  return out;
}

/// Table rows [a1, ..., ak, value]; every tuple exactly once.
template <class Cell, class ReadValue>
std::vector<Cell> table_from(const Json& j, const std::vector<std::string>& carrier, int arity, const std::string& where,
                             ReadValue read_value) {
  const std::size_t n = carrier.size();
  std::vector<std::optional<Cell>> cells(fol::power(n, arity));
  for (const auto& row : array(j, where)) {
    if (!row.is_array() || static_cast<int>(row.size()) != arity + 1)
      throw SchemaError(where + ": rows are [args..., value] with " + std::to_string(arity) + " arguments");
    std::vector<int> args;
    for (int k = 0; k < arity; ++k) args.push_back(lookup(carrier, str(row[k], where), where));
    auto& cell = cells[fol::tuple_index(n, args)];
    if (cell) throw SchemaError(where + ": duplicate row " + fol::show_tuple(carrier, args));
    cell = read_value(row[arity]);
  }
  std::vector<Cell> out;
  for (std::size_t t = 0; t < cells.size(); ++t) {
    if (!cells[t]) throw SchemaError(where + ": table is not total, missing " + fol::show_tuple(carrier, fol::tuple_at(n, arity, t)));
    out.push_back(*cells[t]);
  }
  return out;
}

template <class Cell, class WriteValue>
Json table_json(const std::vector<Cell>& cells, const std::vector<std::string>& carrier, int arity, WriteValue write_value) {
  Json out = Json::array();
  for (std::size_t t = 0; t < cells.size(); ++t) {
    Json row = Json::array();
    for (int a : fol::tuple_at(carrier.size(), arity, t)) row.push_back(carrier[a]);
    row.push_back(write_value(cells[t]));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

inline Json with_header(const std::string& kind, Json body) {
  body["kind"] = kind;
  body["version"] = kVersion;
  return body;
}

// ---------------------------------------------------------------------------
// Categories and functors

inline Json category_body(const FinCat& c) {
  Json j;
  j["objects"] = c.objects;
  j["arrows"] = Json::array();
  for (const auto& a : c.arrows) j["arrows"].push_back({{"id", a.id}, {"src", c.objects[a.src]}, {"dst", c.objects[a.dst]}});
  j["identities"] = Json::object();
  for (int o = 0; o < c.n_obj(); ++o) j["identities"][c.objects[o]] = c.arrows[c.identity[o]].id;
  j["compose"] = Json::array();
  for (int g = 0; g < c.n_arr(); ++g)
    for (int f = 0; f < c.n_arr(); ++f) {
      const int gf = c.compose(g, f);
      if (gf >= 0 && !c.is_identity(g) && !c.is_identity(f))
        j["compose"].push_back(Json::array({c.arrows[g].id, c.arrows[f].id, c.arrows[gf].id}));
    }
  return j;
}

inline CatRef read_category(const Json& j, const Context& ctx, const std::string& where) {
  using namespace detail;
  if (j.is_string()) {
    auto it = ctx.categories.find(j.get<std::string>());
    if (it == ctx.categories.end()) throw SchemaError(where + ": unknown category id \"" + j.get<std::string>() + "\"");
    return it->second;
  }
  CategoryBuilder b;
  for (const auto& o : ids(need(j, "objects", where), where + "/objects")) b.object(o);
  if (auto* arrows = maybe(j, "arrows"))
    for (const auto& a : array(*arrows, where + "/arrows"))
      b.arrow(str(need(a, "id", where + "/arrows"), where), str(need(a, "src", where + "/arrows"), where),
              str(need(a, "dst", where + "/arrows"), where));
  if (auto* idents = maybe(j, "identities"))
    for (const auto& [o, a] : object(*idents, where + "/identities").items()) b.identity(o, str(a, where + "/identities"));
  if (auto* comps = maybe(j, "compose"))
    for (const auto& c : array(*comps, where + "/compose")) {
      if (!c.is_array() || c.size() != 3) throw SchemaError(where + "/compose: entries are [g, f, g∘f]");
      b.compose(str(c[0], where), str(c[1], where), str(c[2], where));
    }
  try {
    return share(b.build());
  } catch (const StructuralError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

inline Json functor_maps(const Functor& F) {
  return {{"objects", detail::function_json(F.omap, F.src->objects, F.dst->objects)},
          {"arrows", detail::function_json(F.amap, detail::arrow_ids(*F.src), detail::arrow_ids(*F.dst))}};
}

/// Missing identity arrows go to the identity of the image object.
inline Functor read_functor_maps(const Json& j, const CatRef& src, const CatRef& dst, Variance v, const std::string& where) {
  using namespace detail;
  Functor F{src, dst, function_from(need(j, "objects", where), src->objects, dst->objects, where + "/objects"), {}, v};
  F.amap.assign(src->n_arr(), -1);
  const auto sa = arrow_ids(*src), da = arrow_ids(*dst);
  if (auto* arrows = maybe(j, "arrows"))
    for (const auto& [k, val] : object(*arrows, where + "/arrows").items())
      F.amap[lookup(sa, k, where + "/arrows")] = lookup(da, str(val, where), where + "/arrows");
  for (int f = 0; f < src->n_arr(); ++f) {
    if (F.amap[f] >= 0) continue;
    if (!src->is_identity(f)) throw SchemaError(where + "/arrows: no image for \"" + sa[f] + "\"");
    F.amap[f] = dst->identity[F.omap[src->src(f)]];
  }
  return F;
}

inline Json functor_body(const Functor& F) {
  Json j = functor_maps(F);
  j["src"] = category_body(*F.src);
  j["dst"] = category_body(*F.dst);
  j["variance"] = F.variance == Variance::covariant ? "covariant" : "contravariant";
  return j;
}

inline Variance read_variance(const Json& j, const std::string& where) {
  const std::string v = detail::str(j, where);
  if (v == "covariant") return Variance::covariant;
  if (v == "contravariant") return Variance::contravariant;
  throw SchemaError(where + ": variance is \"covariant\" or \"contravariant\"");
}

inline Functor read_functor(const Json& j, const Context& ctx) {
  CatRef src = read_category(detail::need(j, "src", "functor"), ctx, "functor/src");
  CatRef dst = read_category(detail::need(j, "dst", "functor"), ctx, "functor/dst");
  Variance v = j.contains("variance") ? read_variance(j["variance"], "functor/variance") : Variance::covariant;
  return read_functor_maps(j, src, dst, v, "functor");
}

// ---------------------------------------------------------------------------
// Sentence functors, institutions, π-institutions

namespace detail {

inline Json sentences_json(const FinCat& sig, const SetFunctor& sen) {
  Json out = Json::object();
  for (int o = 0; o < sig.n_obj(); ++o) out[sig.objects[o]] = sen.carriers[o];
  return out;
}

/// Rows [h, s, image]; unmentioned identity arrows act as identities.
inline Json sentence_maps_json(const FinCat& sig, const SetFunctor& sen) {
  Json out = Json::array();
  for (int f = 0; f < sig.n_arr(); ++f) {
    const bool co = sen.variance == Variance::covariant;
    const int dom = co ? sig.src(f) : sig.dst(f), cod = co ? sig.dst(f) : sig.src(f);
    for (std::size_t s = 0; s < sen.fmap[f].size(); ++s)
      out.push_back(Json::array({sig.arrows[f].id, sen.carriers[dom][s], sen.carriers[cod][sen.fmap[f][s]]}));
  }
  return out;
}

inline SetFunctor read_sentences(const Json& carriers, const Json* maps, const CatRef& sig, Variance v,
                                 const std::string& where) {
  const FinCat& S = *sig;
  SetFunctor sen{sig, std::vector<std::vector<std::string>>(S.n_obj()), std::vector<Function>(S.n_arr()), v};
  std::vector<bool> seen(S.n_obj(), false);
  for (const auto& [k, val] : object(carriers, where).items()) {
    const int o = lookup(S.objects, k, where);
    sen.carriers[o] = ids(val, where + "/" + k);
    seen[o] = true;
  }
  for (int o = 0; o < S.n_obj(); ++o)
    if (!seen[o]) throw SchemaError(where + ": no sentences for \"" + S.objects[o] + "\"");
  const bool co = v == Variance::covariant;
  auto dom = [&](int f) { return co ? S.src(f) : S.dst(f); };
  auto cod = [&](int f) { return co ? S.dst(f) : S.src(f); };
  for (int f = 0; f < S.n_arr(); ++f) sen.fmap[f].assign(sen.carriers[dom(f)].size(), -1);
  const auto arrows = arrow_ids(S);
  if (maps)
    for (const auto& row : array(*maps, where + " maps")) {
      if (!row.is_array() || row.size() != 3) throw SchemaError(where + " maps: rows are [arrow, sentence, image]");
      const int f = lookup(arrows, str(row[0], where), where + " maps");
      int& slot = sen.fmap[f][lookup(sen.carriers[dom(f)], str(row[1], where), where + " maps")];
      const int img = lookup(sen.carriers[cod(f)], str(row[2], where), where + " maps");
      if (slot >= 0 && slot != img) throw SchemaError(where + " maps: two images for " + row[1].get<std::string>());
      slot = img;
    }
  for (int f = 0; f < S.n_arr(); ++f)
    for (std::size_t s = 0; s < sen.fmap[f].size(); ++s) {
      if (sen.fmap[f][s] >= 0) continue;
      if (!S.is_identity(f))
        throw SchemaError(where + " maps: no image of \"" + sen.carriers[dom(f)][s] + "\" under \"" + arrows[f] + "\"");
      sen.fmap[f][s] = static_cast<int>(s);
    }
  return sen;
}

}  // namespace detail

inline Json institution_spec(const Institution& I) {
  const FinCat& S = *I.sig;
  Json j;
  j["sig"] = category_body(S);
  j["sentences"] = detail::sentences_json(S, I.sen);
  j["sentence_maps"] = detail::sentence_maps_json(S, I.sen);
  j["models"] = Json::object();
  for (int o = 0; o < S.n_obj(); ++o) j["models"][S.objects[o]] = category_body(*I.mod[o]);
  j["model_maps"] = Json::object();
  for (int f = 0; f < S.n_arr(); ++f) j["model_maps"][S.arrows[f].id] = functor_maps(I.mod_map[f]);
  j["satisfaction"] = Json::array();
  for (int o = 0; o < S.n_obj(); ++o)
    for (int m = 0; m < I.mod[o]->n_obj(); ++m)
      for (int s : subset_indices(I.sat[o][m]))
        j["satisfaction"].push_back(Json::array({S.objects[o], I.mod[o]->objects[m], I.sen.carriers[o][s]}));
  return with_header("institution", std::move(j));
}

inline Institution read_institution(const Json& j, const Context& ctx) {
  using namespace detail;
  CatRef sig = read_category(need(j, "sig", "institution"), ctx, "institution/sig");
  const FinCat& S = *sig;
  Institution I{sig, read_sentences(need(j, "sentences", "institution"), maybe(j, "sentence_maps"), sig,
                                    Variance::covariant, "institution/sentences"),
                std::vector<CatRef>(S.n_obj()), std::vector<Functor>(S.n_arr()), {}};
  const Json& models = object(need(j, "models", "institution"), "institution/models");
  for (int o = 0; o < S.n_obj(); ++o) {
    if (!models.contains(S.objects[o])) throw SchemaError("institution/models: no models for \"" + S.objects[o] + "\"");
    I.mod[o] = read_category(models[S.objects[o]], ctx, "institution/models/" + S.objects[o]);
  }
  for (const auto& [k, v] : models.items()) lookup(S.objects, k, "institution/models");
  const Json* mm = maybe(j, "model_maps");
  if (mm) object(*mm, "institution/model_maps");
  for (int f = 0; f < S.n_arr(); ++f) {
    const std::string& id = S.arrows[f].id;
    if (mm && mm->contains(id))
      I.mod_map[f] = read_functor_maps((*mm)[id], I.mod[S.dst(f)], I.mod[S.src(f)], Variance::covariant,
                                       "institution/model_maps/" + id);
    else if (S.is_identity(f))
      I.mod_map[f] = identity_functor(I.mod[S.src(f)]);
    else
      throw SchemaError("institution/model_maps: no model reduct for \"" + id + "\"");
  }
  if (mm)
    for (const auto& [k, v] : mm->items()) lookup(arrow_ids(S), k, "institution/model_maps");
  for (int o = 0; o < S.n_obj(); ++o) I.sat.emplace_back(I.mod[o]->n_obj(), Subset(I.sen.size(o)));
  if (auto* sat = maybe(j, "satisfaction"))
    for (const auto& row : array(*sat, "institution/satisfaction")) {
      if (!row.is_array() || row.size() != 3) throw SchemaError("institution/satisfaction: rows are [signature, model, sentence]");
      const int o = lookup(S.objects, str(row[0], ""), "institution/satisfaction");
      const int m = lookup(I.mod[o]->objects, str(row[1], ""), "institution/satisfaction");
      I.sat[o][m].set(lookup(I.sen.carriers[o], str(row[2], ""), "institution/satisfaction"));
    }
  return I;
}

inline Json pi_spec(const PiInstitution& J) {
  const FinCat& S = *J.sig;
  Json j;
  j["sig"] = category_body(S);
  j["sentences"] = detail::sentences_json(S, J.sen);
  j["sentence_maps"] = detail::sentence_maps_json(S, J.sen);
  j["closed_sets"] = Json::object();
  for (int o = 0; o < S.n_obj(); ++o) {
    Json fam = Json::array();
    for (const auto& c : J.closures[o].closed) fam.push_back(detail::subset_json(c, J.sen.carriers[o]));
    j["closed_sets"][S.objects[o]] = fam;
  }
  return with_header("pi_institution", std::move(j));
}

inline PiInstitution read_pi(const Json& j, const Context& ctx) {
  using namespace detail;
  CatRef sig = read_category(need(j, "sig", "pi_institution"), ctx, "pi_institution/sig");
  const FinCat& S = *sig;
  PiInstitution J{sig, read_sentences(need(j, "sentences", "pi_institution"), maybe(j, "sentence_maps"), sig,
                                      Variance::covariant, "pi_institution/sentences"),
                  {}};
  const Json& closed = object(need(j, "closed_sets", "pi_institution"), "pi_institution/closed_sets");
  for (const auto& [k, v] : closed.items()) lookup(S.objects, k, "pi_institution/closed_sets");
  for (int o = 0; o < S.n_obj(); ++o) {
    const std::string where = "pi_institution/closed_sets/" + S.objects[o];
    if (!closed.contains(S.objects[o])) throw SchemaError(where + ": missing");
    std::vector<Subset> fam;
    for (const auto& c : array(closed[S.objects[o]], where)) fam.push_back(subset_from(c, J.sen.carriers[o], where));
    J.closures.push_back(ClosureOp::from_family(J.sen.size(o), fam));
  }
  return J;
}

// ---------------------------------------------------------------------------
// Morphisms and comorphisms

inline MapKind read_map_kind(const std::string& s) {
  for (MapKind k : {MapKind::ins_morphism, MapKind::ins_comorphism, MapKind::pi_morphism, MapKind::pi_comorphism})
    if (s == to_string(k)) return k;
  throw SchemaError("map/map_kind: unknown kind \"" + s + "\"");
}

struct MapSpec {
  InsMap map;
  std::optional<Institution> ins_src, ins_dst;
  std::optional<PiInstitution> pi_src, pi_dst;
};

namespace detail {

inline Json map_body(const InsMap& m, const CatRef& ssig, const SetFunctor& ssen, const SetFunctor& dsen,
                     const std::vector<CatRef>* smod, const std::vector<CatRef>* dmod) {
  Json j;
  j["map_kind"] = to_string(m.kind);
  j["phi"] = functor_maps(m.phi);
  j["alpha"] = Json::object();
  const bool co = is_co(m.kind);
  for (int s = 0; s < ssig->n_obj(); ++s) {
    const int t = m.phi.omap[s];
    const auto& dom = co ? ssen.carriers[s] : dsen.carriers[t];
    const auto& cod = co ? dsen.carriers[t] : ssen.carriers[s];
    j["alpha"][ssig->objects[s]] = function_json(m.alpha[s], dom, cod);
  }
  if (!is_pi(m.kind) && smod && dmod) {
    j["beta"] = Json::object();
    for (int s = 0; s < ssig->n_obj(); ++s) j["beta"][ssig->objects[s]] = functor_maps(m.beta[s]);
  }
  return j;
}

}  // namespace detail

inline Json map_spec(const InsMap& m, const Institution& src, const Institution& dst) {
  Json j = detail::map_body(m, src.sig, src.sen, dst.sen, &src.mod, &dst.mod);
  j["source"] = institution_spec(src);
  j["target"] = institution_spec(dst);
  return with_header("map", std::move(j));
}

inline Json map_spec(const InsMap& m, const PiInstitution& src, const PiInstitution& dst) {
  Json j = detail::map_body(m, src.sig, src.sen, dst.sen, nullptr, nullptr);
  j["source"] = pi_spec(src);
  j["target"] = pi_spec(dst);
  return with_header("map", std::move(j));
}

inline MapSpec read_map(const Json& j, const Context& ctx) {
  using namespace detail;
  MapSpec out;
  InsMap& m = out.map;
  m.kind = read_map_kind(str(need(j, "map_kind", "map"), "map/map_kind"));
  const bool pi = is_pi(m.kind), co = is_co(m.kind);
  const std::string want = pi ? "pi_institution" : "institution";
  for (const char* side : {"source", "target"})
    if (str(need(need(j, side, "map"), "kind", std::string("map/") + side), "kind") != want)
      throw SchemaError(std::string("map/") + side + ": expected kind \"" + want + "\"");
  CatRef ssig, dsig;
  const SetFunctor *ssen, *dsen;
  if (pi) {
    out.pi_src = read_pi(j["source"], ctx);
    out.pi_dst = read_pi(j["target"], ctx);
    ssig = out.pi_src->sig, dsig = out.pi_dst->sig, ssen = &out.pi_src->sen, dsen = &out.pi_dst->sen;
  } else {
    out.ins_src = read_institution(j["source"], ctx);
    out.ins_dst = read_institution(j["target"], ctx);
    ssig = out.ins_src->sig, dsig = out.ins_dst->sig, ssen = &out.ins_src->sen, dsen = &out.ins_dst->sen;
  }
  m.phi = read_functor_maps(need(j, "phi", "map"), ssig, dsig, Variance::covariant, "map/phi");
  const Json& alpha = object(need(j, "alpha", "map"), "map/alpha");
  for (int s = 0; s < ssig->n_obj(); ++s) {
    const std::string& id = ssig->objects[s];
    if (!alpha.contains(id)) throw SchemaError("map/alpha: no component at \"" + id + "\"");
    const int t = m.phi.omap[s];
    const auto& dom = co ? ssen->carriers[s] : dsen->carriers[t];
    const auto& cod = co ? dsen->carriers[t] : ssen->carriers[s];
    m.alpha.push_back(function_from(alpha[id], dom, cod, "map/alpha/" + id));
  }
  if (!pi) {
    const Json& beta = object(need(j, "beta", "map"), "map/beta");
    for (int s = 0; s < ssig->n_obj(); ++s) {
      const std::string& id = ssig->objects[s];
      if (!beta.contains(id)) throw SchemaError("map/beta: no component at \"" + id + "\"");
      const int t = m.phi.omap[s];
      CatRef from = co ? out.ins_dst->mod[t] : out.ins_src->mod[s];
      CatRef to = co ? out.ins_src->mod[s] : out.ins_dst->mod[t];
      m.beta.push_back(read_functor_maps(beta[id], from, to, Variance::covariant, "map/beta/" + id));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Room diagrams

struct RoomDiagramSpec {
  std::optional<RoomDiagram> rooms;
  std::optional<PiRoomDiagram> pi_rooms;
};

inline Json room_diagram_spec(const RoomDiagram& d) {
  const FinCat& S = *d.sig;
  Json j;
  j["room_kind"] = "room";
  j["sig"] = category_body(S);
  j["rooms"] = Json::object();
  for (int o = 0; o < S.n_obj(); ++o) {
    const Room& r = d.rooms[o];
    Json sat = Json::array();
    for (int m = 0; m < r.models->n_obj(); ++m)
      for (int s : subset_indices(r.rows[m])) sat.push_back(Json::array({r.models->objects[m], r.sentences[s]}));
    j["rooms"][S.objects[o]] = {{"sentences", r.sentences}, {"models", category_body(*r.models)}, {"satisfaction", sat}};
  }
  j["maps"] = Json::object();
  for (int f = 0; f < S.n_arr(); ++f) {
    const Room& from = d.rooms[S.dst(f)];
    const Room& to = d.rooms[S.src(f)];
    j["maps"][S.arrows[f].id] = {{"sigma", detail::function_json(d.maps[f].sigma, to.sentences, from.sentences)},
                                 {"mu", functor_maps(d.maps[f].mu)}};
  }
  return with_header("room_diagram", std::move(j));
}

inline Json room_diagram_spec(const PiRoomDiagram& d) {
  const FinCat& S = *d.sig;
  Json j;
  j["room_kind"] = "pi_room";
  j["sig"] = category_body(S);
  j["rooms"] = Json::object();
  for (int o = 0; o < S.n_obj(); ++o) {
    const PiRoom& r = d.rooms[o];
    Json fam = Json::array();
    for (const auto& c : r.closure.closed) fam.push_back(detail::subset_json(c, r.sentences));
    j["rooms"][S.objects[o]] = {{"sentences", r.sentences}, {"closed_sets", fam}};
  }
  j["maps"] = Json::object();
  for (int f = 0; f < S.n_arr(); ++f)
    j["maps"][S.arrows[f].id] = {
        {"sigma", detail::function_json(d.maps[f], d.rooms[S.src(f)].sentences, d.rooms[S.dst(f)].sentences)}};
  return with_header("room_diagram", std::move(j));
}

inline RoomDiagramSpec read_room_diagram(const Json& j, const Context& ctx) {
  using namespace detail;
  const std::string kind = str(need(j, "room_kind", "room_diagram"), "room_diagram/room_kind");
  if (kind != "room" && kind != "pi_room") throw SchemaError("room_diagram/room_kind: \"room\" or \"pi_room\"");
  CatRef sig = read_category(need(j, "sig", "room_diagram"), ctx, "room_diagram/sig");
  const FinCat& S = *sig;
  const Json& rooms = object(need(j, "rooms", "room_diagram"), "room_diagram/rooms");
  const Json& maps = object(need(j, "maps", "room_diagram"), "room_diagram/maps");
  for (const auto& [k, v] : rooms.items()) lookup(S.objects, k, "room_diagram/rooms");
  for (const auto& [k, v] : maps.items()) lookup(arrow_ids(S), k, "room_diagram/maps");
  auto room_at = [&](int o) -> const Json& {
    if (!rooms.contains(S.objects[o])) throw SchemaError("room_diagram/rooms: no room at \"" + S.objects[o] + "\"");
    return rooms[S.objects[o]];
  };
  auto map_at = [&](int f) -> const Json& {
    if (!maps.contains(S.arrows[f].id)) throw SchemaError("room_diagram/maps: no map for \"" + S.arrows[f].id + "\"");
    return maps[S.arrows[f].id];
  };
  RoomDiagramSpec out;
  if (kind == "room") {
    RoomDiagram d{sig, {}, {}};
    for (int o = 0; o < S.n_obj(); ++o) {
      const std::string where = "room_diagram/rooms/" + S.objects[o];
      const Json& r = room_at(o);
      Room room{ids(need(r, "sentences", where), where + "/sentences"), read_category(need(r, "models", where), ctx, where), {}};
      room.rows.assign(room.models->n_obj(), Subset(room.sentences.size()));
      for (const auto& row : array(need(r, "satisfaction", where), where)) {
        if (!row.is_array() || row.size() != 2) throw SchemaError(where + ": satisfaction rows are [model, sentence]");
        room.rows[lookup(room.models->objects, str(row[0], where), where)].set(lookup(room.sentences, str(row[1], where), where));
      }
      d.rooms.push_back(std::move(room));
    }
    for (int f = 0; f < S.n_arr(); ++f) {
      const std::string where = "room_diagram/maps/" + S.arrows[f].id;
      const Room& from = d.rooms[S.dst(f)];
      const Room& to = d.rooms[S.src(f)];
      const Json& m = map_at(f);
      d.maps.push_back({function_from(need(m, "sigma", where), to.sentences, from.sentences, where + "/sigma"),
                        read_functor_maps(need(m, "mu", where), from.models, to.models, Variance::covariant, where + "/mu")});
    }
    out.rooms = std::move(d);
  } else {
    PiRoomDiagram d{sig, {}, {}};
    for (int o = 0; o < S.n_obj(); ++o) {
      const std::string where = "room_diagram/rooms/" + S.objects[o];
      const Json& r = room_at(o);
      PiRoom room{ids(need(r, "sentences", where), where + "/sentences"), {}};
      std::vector<Subset> fam;
      for (const auto& c : array(need(r, "closed_sets", where), where)) fam.push_back(subset_from(c, room.sentences, where));
      room.closure = ClosureOp::from_family(room.sentences.size(), fam);
      d.rooms.push_back(std::move(room));
    }
    for (int f = 0; f < S.n_arr(); ++f) {
      const std::string where = "room_diagram/maps/" + S.arrows[f].id;
      d.maps.push_back(function_from(need(map_at(f), "sigma", where), d.rooms[S.src(f)].sentences,
                                     d.rooms[S.dst(f)].sentences, where + "/sigma"));
    }
    out.pi_rooms = std::move(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Indexed categories

inline Json indexed_spec(const IndexedCat& ix) {
  const FinCat& B = *ix.base;
  Json j;
  j["base"] = category_body(B);
  j["variance"] = ix.variance == Variance::covariant ? "covariant" : "contravariant";
  j["fibers"] = Json::object();
  for (int c = 0; c < B.n_obj(); ++c) j["fibers"][B.objects[c]] = category_body(*ix.fibers[c]);
  j["transport"] = Json::object();
  for (int f = 0; f < B.n_arr(); ++f) j["transport"][B.arrows[f].id] = functor_maps(ix.transport[f]);
  if (!ix.strict()) {
    j["coh_id"] = Json::object();
    for (int c = 0; c < B.n_obj(); ++c) {
      const NatTrans& t = ix.coh_id[c];
      j["coh_id"][B.objects[c]] = detail::function_json(t.components, t.src.src->objects, detail::arrow_ids(*t.src.dst));
    }
    j["coh_comp"] = Json::array();
    for (const auto& [fg, t] : ix.coh_comp)
      j["coh_comp"].push_back(Json::array({B.arrows[fg.first].id, B.arrows[fg.second].id,
                                           detail::function_json(t.components, t.src.src->objects, detail::arrow_ids(*t.src.dst))}));
  }
  return with_header("indexed_cat", std::move(j));
}

inline IndexedCat read_indexed(const Json& j, const Context& ctx) {
  using namespace detail;
  IndexedCat ix;
  ix.base = read_category(need(j, "base", "indexed_cat"), ctx, "indexed_cat/base");
  const FinCat& B = *ix.base;
  ix.variance = j.contains("variance") ? read_variance(j["variance"], "indexed_cat/variance") : Variance::contravariant;
  const Json& fibers = object(need(j, "fibers", "indexed_cat"), "indexed_cat/fibers");
  for (const auto& [k, v] : fibers.items()) lookup(B.objects, k, "indexed_cat/fibers");
  for (int c = 0; c < B.n_obj(); ++c) {
    if (!fibers.contains(B.objects[c])) throw SchemaError("indexed_cat/fibers: no fiber at \"" + B.objects[c] + "\"");
    ix.fibers.push_back(read_category(fibers[B.objects[c]], ctx, "indexed_cat/fibers/" + B.objects[c]));
  }
  const Json* tr = maybe(j, "transport");
  if (tr) {
    object(*tr, "indexed_cat/transport");
    for (const auto& [k, v] : tr->items()) lookup(arrow_ids(B), k, "indexed_cat/transport");
  }
  for (int f = 0; f < B.n_arr(); ++f) {
    const std::string& id = B.arrows[f].id;
    CatRef from = ix.fibers[ix.fiber_of(f, true)], to = ix.fibers[ix.fiber_of(f, false)];
    if (tr && tr->contains(id))
      ix.transport.push_back(read_functor_maps((*tr)[id], from, to, Variance::covariant, "indexed_cat/transport/" + id));
    else if (B.is_identity(f))
      ix.transport.push_back(identity_functor(from));
    else
      throw SchemaError("indexed_cat/transport: no transport for \"" + id + "\"");
  }
  const bool co = ix.variance == Variance::covariant;
  const Json* cid = maybe(j, "coh_id");
  const Json* ccomp = maybe(j, "coh_comp");
  if (!cid && !ccomp) return ix;
  if (!cid || !ccomp) throw SchemaError("indexed_cat: coh_id and coh_comp come together");
  for (int c = 0; c < B.n_obj(); ++c) {
    const std::string where = "indexed_cat/coh_id/" + B.objects[c];
    if (!cid->contains(B.objects[c])) throw SchemaError(where + ": missing");
    Functor from = identity_functor(ix.fibers[c]);
    const Functor& to = ix.transport[B.identity[c]];
    ix.coh_id.push_back({from, to, function_from((*cid)[B.objects[c]], from.src->objects, arrow_ids(*from.dst), where)});
  }
  for (const auto& row : array(*ccomp, "indexed_cat/coh_comp")) {
    if (!row.is_array() || row.size() != 3) throw SchemaError("indexed_cat/coh_comp: rows are [f, g, components]");
    const int f = lookup(arrow_ids(B), str(row[0], ""), "indexed_cat/coh_comp");
    const int g = lookup(arrow_ids(B), str(row[1], ""), "indexed_cat/coh_comp");
    const std::string where = "indexed_cat/coh_comp/(" + B.arrows[f].id + ", " + B.arrows[g].id + ")";
    if (B.dst(f) != B.src(g)) throw SchemaError(where + ": arrows not composable");
    if (ix.coh_comp.count({f, g})) throw SchemaError(where + ": duplicate cell");
    Functor from = co ? compose(ix.transport[g], ix.transport[f]) : compose(ix.transport[f], ix.transport[g]);
    const Functor& to = ix.transport[B.compose(g, f)];
    ix.coh_comp[{f, g}] = {from, to, function_from(row[2], from.src->objects, arrow_ids(*from.dst), where)};
  }
  return ix;
}

// ---------------------------------------------------------------------------
// Propositional logics and filter pairs

namespace detail {

inline Json connectives_json(const prop::PropSignature& s) {
  Json out = Json::array();
  for (const auto& c : s.connectives) out.push_back(Json::array({c.symbol, c.arity}));
  return out;
}

inline prop::PropSignature connectives_from(const Json& j, const std::string& where) {
  prop::PropSignature s;
  for (const auto& sym : symbols_from(j, where)) s.connectives.push_back({sym.name, sym.arity});
  return s;
}

inline Json matrix_json(const prop::PropSignature& s, const prop::Matrix& m) {
  Json j;
  j["carrier"] = m.carrier;
  j["ops"] = Json::object();
  for (std::size_t c = 0; c < s.connectives.size(); ++c)
    j["ops"][s.connectives[c].symbol] =
        table_json(m.ops[c], m.carrier, s.connectives[c].arity, [&](int v) { return m.carrier[v]; });
  j["designated"] = subset_json(m.designated, m.carrier);
  return j;
}

inline prop::Matrix matrix_from(const prop::PropSignature& s, const Json& j, const std::string& where) {
  prop::Matrix m;
  m.carrier = ids(need(j, "carrier", where), where + "/carrier");
  const Json& ops = object(need(j, "ops", where), where + "/ops");
  for (const auto& [k, v] : ops.items())
    if (s.index(k) < 0) throw SchemaError(where + "/ops: unknown connective \"" + k + "\"");
  for (const auto& c : s.connectives) {
    if (!ops.contains(c.symbol)) throw SchemaError(where + "/ops: no table for \"" + c.symbol + "\"");
    m.ops.push_back(table_from<int>(ops[c.symbol], m.carrier, c.arity, where + "/ops/" + c.symbol,
                                    [&](const Json& v) { return lookup(m.carrier, str(v, where), where); }));
  }
  m.designated = j.contains("designated") ? subset_from(j["designated"], m.carrier, where + "/designated")
                                          : Subset(m.carrier.size());
  return m;
}

}  // namespace detail

inline Json logic_spec(const prop::Logic& l) {
  Json j;
  j["name"] = l.name;
  j["connectives"] = detail::connectives_json(l.signature);
  j["matrices"] = Json::array();
  for (const auto& m : l.semantics) j["matrices"].push_back(detail::matrix_json(l.signature, m));
  j["n_vars"] = l.n_vars;
  j["depth"] = l.depth;
  return with_header("logic", std::move(j));
}

inline prop::Logic read_logic(const Json& j, const Context&) {
  using namespace detail;
  prop::Logic l;
  l.name = j.contains("name") ? str(j["name"], "logic/name") : "L";
  l.signature = connectives_from(need(j, "connectives", "logic"), "logic/connectives");
  int k = 0;
  for (const auto& m : array(need(j, "matrices", "logic"), "logic/matrices"))
    l.semantics.push_back(matrix_from(l.signature, m, "logic/matrices/" + std::to_string(k++)));
  l.n_vars = j.contains("n_vars") ? integer(j["n_vars"], "logic/n_vars") : 2;
  l.depth = j.contains("depth") ? integer(j["depth"], "logic/depth") : 2;
  return l;
}

inline Json filter_pair_spec(const fp::FilterPairFin& p) {
  const FinCat& C = *p.base.cat;
  Json j;
  j["connectives"] = detail::connectives_json(p.base.sig);
  j["cat"] = category_body(C);
  j["algebras"] = Json::object();
  for (int o = 0; o < C.n_obj(); ++o) j["algebras"][C.objects[o]] = detail::matrix_json(p.base.sig, p.base.algebras[o]);
  j["maps"] = Json::object();
  for (int f = 0; f < C.n_arr(); ++f)
    j["maps"][C.arrows[f].id] = detail::function_json(p.base.maps[f], p.base.algebras[C.src(f)].carrier,
                                                       p.base.algebras[C.dst(f)].carrier);
  j["lattices"] = Json::object();
  for (int o = 0; o < C.n_obj(); ++o) {
    const auto& L = p.F[o];
    Json leq = Json::array();
    for (std::size_t a = 0; a < L.size(); ++a)
      for (std::size_t b = 0; b < L.size(); ++b)
        if (L.leq[a][b]) leq.push_back(Json::array({L.elements[a], L.elements[b]}));
    j["lattices"][C.objects[o]] = {{"elements", L.elements}, {"leq", leq}};
  }
  j["lattice_maps"] = Json::object();
  for (int f = 0; f < C.n_arr(); ++f)
    j["lattice_maps"][C.arrows[f].id] = detail::function_json(p.Fmap[f], p.F[C.dst(f)].elements, p.F[C.src(f)].elements);
  j["i"] = Json::object();
  for (int o = 0; o < C.n_obj(); ++o) {
    Json comp = Json::object();
    for (std::size_t t = 0; t < p.F[o].size(); ++t)
      comp[p.F[o].elements[t]] = detail::subset_json(p.i[o][t], p.base.algebras[o].carrier);
    j["i"][C.objects[o]] = comp;
  }
  j["finitary"] = p.finitary;
  return with_header("filter_pair", std::move(j));
}

inline fp::FilterPairFin read_filter_pair(const Json& j, const Context& ctx) {
  using namespace detail;
  fp::FilterPairFin p;
  p.base.sig = connectives_from(need(j, "connectives", "filter_pair"), "filter_pair/connectives");
  p.base.cat = read_category(need(j, "cat", "filter_pair"), ctx, "filter_pair/cat");
  const FinCat& C = *p.base.cat;
  auto at = [&](const char* key, const std::string& id) -> const Json& {
    const Json& tbl = object(need(j, key, "filter_pair"), std::string("filter_pair/") + key);
    if (!tbl.contains(id)) throw SchemaError(std::string("filter_pair/") + key + ": missing \"" + id + "\"");
    return tbl[id];
  };
  for (const char* key : {"algebras", "lattices", "i"})
    for (const auto& [k, v] : object(need(j, key, "filter_pair"), key).items()) lookup(C.objects, k, key);
  for (const char* key : {"maps", "lattice_maps"})
    for (const auto& [k, v] : object(need(j, key, "filter_pair"), key).items()) lookup(arrow_ids(C), k, key);
  for (int o = 0; o < C.n_obj(); ++o)
    p.base.algebras.push_back(matrix_from(p.base.sig, at("algebras", C.objects[o]), "filter_pair/algebras/" + C.objects[o]));
  for (int f = 0; f < C.n_arr(); ++f)
    p.base.maps.push_back(function_from(at("maps", C.arrows[f].id), p.base.algebras[C.src(f)].carrier,
                                        p.base.algebras[C.dst(f)].carrier, "filter_pair/maps/" + C.arrows[f].id));
  for (int o = 0; o < C.n_obj(); ++o) {
    const std::string where = "filter_pair/lattices/" + C.objects[o];
    const Json& lj = at("lattices", C.objects[o]);
    fp::FinLattice L;
    L.elements = ids(need(lj, "elements", where), where + "/elements");
    L.leq.assign(L.size(), std::vector<bool>(L.size(), false));
    for (const auto& pr : array(need(lj, "leq", where), where + "/leq")) {
      if (!pr.is_array() || pr.size() != 2) throw SchemaError(where + "/leq: pairs [a, b] with a ≤ b");
      L.leq[lookup(L.elements, str(pr[0], where), where)][lookup(L.elements, str(pr[1], where), where)] = true;
    }
    p.F.push_back(std::move(L));
  }
  for (int f = 0; f < C.n_arr(); ++f)
    p.Fmap.push_back(function_from(at("lattice_maps", C.arrows[f].id), p.F[C.dst(f)].elements, p.F[C.src(f)].elements,
                                   "filter_pair/lattice_maps/" + C.arrows[f].id));
  for (int o = 0; o < C.n_obj(); ++o) {
    const std::string where = "filter_pair/i/" + C.objects[o];
    const Json& comp = object(at("i", C.objects[o]), where);
    std::vector<std::optional<Subset>> row(p.F[o].size());
    for (const auto& [t, sub] : comp.items())
      row[lookup(p.F[o].elements, t, where)] = subset_from(sub, p.base.algebras[o].carrier, where);
    std::vector<Subset> out;
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (!row[t]) throw SchemaError(where + ": no value at \"" + p.F[o].elements[t] + "\"");
      out.push_back(*row[t]);
    }
    p.i.push_back(std::move(out));
  }
  p.finitary = j.contains("finitary") ? j["finitary"].get<bool>() : true;
  return p;
}

// ---------------------------------------------------------------------------
// Multialgebras, first-order models, skolem jobs

struct MultialgebraSpec {
  ma::MASignature sig;
  ma::Multialgebra algebra;
};

inline ma::Mode read_mode(const std::string& s) {
  if (s == "narrow") return ma::Mode::narrow;
  if (s == "wide") return ma::Mode::wide;
  throw SchemaError("mode: \"narrow\" or \"wide\"");
}

inline Json multialgebra_spec(const ma::MASignature& s, const ma::Multialgebra& a) {
  Json j;
  j["strict"] = detail::symbols_json(s.strict_ops);
  j["multi"] = detail::symbols_json(s.multi_ops);
  j["carrier"] = a.carrier;
  j["mode"] = ma::to_string(a.mode);
  j["ops"] = Json::object();
  for (std::size_t op = 0; op < s.size(); ++op)
    j["ops"][s.symbol(op).name] =
        detail::table_json(a.ops[op], a.carrier, s.symbol(op).arity, [&](const Subset& v) { return detail::subset_json(v, a.carrier); });
  return with_header("multialgebra", std::move(j));
}

inline MultialgebraSpec read_multialgebra(const Json& j, const Context&) {
  using namespace detail;
  MultialgebraSpec out;
  out.sig.strict_ops = j.contains("strict") ? symbols_from(j["strict"], "multialgebra/strict") : std::vector<fol::Symbol>{};
  out.sig.multi_ops = j.contains("multi") ? symbols_from(j["multi"], "multialgebra/multi") : std::vector<fol::Symbol>{};
  out.algebra.carrier = ids(need(j, "carrier", "multialgebra"), "multialgebra/carrier");
  out.algebra.mode = j.contains("mode") ? read_mode(str(j["mode"], "multialgebra/mode")) : ma::Mode::narrow;
  const Json& ops = object(need(j, "ops", "multialgebra"), "multialgebra/ops");
  for (const auto& [k, v] : ops.items())
    if (out.sig.index(k) < 0) throw SchemaError("multialgebra/ops: unknown symbol \"" + k + "\"");
  const auto& carrier = out.algebra.carrier;
  for (std::size_t op = 0; op < out.sig.size(); ++op) {
    const auto& sym = out.sig.symbol(op);
    const std::string where = "multialgebra/ops/" + sym.name;
    if (!ops.contains(sym.name)) throw SchemaError(where + ": missing");
    out.algebra.ops.push_back(table_from<Subset>(ops[sym.name], carrier, sym.arity, where,
                                                 [&](const Json& v) { return subset_from(v, carrier, where); }));
  }
  return out;
}

struct FolModelSpec {
  fol::FolSignature sig;
  fol::FolModel model;
};

namespace detail {

inline Json fol_model_body(const fol::FolSignature& s, const fol::FolModel& m) {
  Json j;
  j["functions"] = symbols_json(s.functions);
  j["relations"] = symbols_json(s.relations);
  j["carrier"] = m.carrier;
  j["function_tables"] = Json::object();
  for (std::size_t f = 0; f < s.functions.size(); ++f)
    j["function_tables"][s.functions[f].name] =
        table_json(m.functions[f], m.carrier, s.functions[f].arity, [&](int v) { return m.carrier[v]; });
  j["relation_tables"] = Json::object();
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    Json rows = Json::array();
    for (std::size_t t = 0; t < m.relations[r].size(); ++t)
      if (m.relations[r][t]) {
        Json row = Json::array();
        for (int a : fol::tuple_at(m.size(), s.relations[r].arity, t)) row.push_back(m.carrier[a]);
        rows.push_back(std::move(row));
      }
    j["relation_tables"][s.relations[r].name] = rows;
  }
  return j;
}

inline fol::FolSignature fol_signature_from(const Json& j, const std::string& where) {
  fol::FolSignature s;
  s.functions = j.contains("functions") ? symbols_from(j["functions"], where + "/functions") : std::vector<fol::Symbol>{};
  s.relations = j.contains("relations") ? symbols_from(j["relations"], where + "/relations") : std::vector<fol::Symbol>{};
  return s;
}

inline fol::FolModel fol_model_from(const fol::FolSignature& s, const Json& j, const std::string& where) {
  fol::FolModel m;
  m.carrier = ids(need(j, "carrier", where), where + "/carrier");
  const Json* ft = maybe(j, "function_tables");
  const Json* rt = maybe(j, "relation_tables");
  if (ft)
    for (const auto& [k, v] : object(*ft, where).items())
      if (s.function_index(k) < 0) throw SchemaError(where + "/function_tables: unknown symbol \"" + k + "\"");
  if (rt)
    for (const auto& [k, v] : object(*rt, where).items())
      if (s.relation_index(k) < 0) throw SchemaError(where + "/relation_tables: unknown symbol \"" + k + "\"");
  for (const auto& f : s.functions) {
    const std::string w = where + "/function_tables/" + f.name;
    if (!ft || !ft->contains(f.name)) throw SchemaError(w + ": missing");
    m.functions.push_back(table_from<int>((*ft)[f.name], m.carrier, f.arity, w,
                                          [&](const Json& v) { return lookup(m.carrier, str(v, w), w); }));
  }
  for (const auto& r : s.relations) {
    const std::string w = where + "/relation_tables/" + r.name;
    Subset rel(fol::power(m.size(), r.arity));
    if (rt && rt->contains(r.name))
      for (const auto& row : array((*rt)[r.name], w)) {
        if (!row.is_array() || static_cast<int>(row.size()) != r.arity) throw SchemaError(w + ": tuple of the wrong length");
        std::vector<int> args;
        for (const auto& a : row) args.push_back(lookup(m.carrier, str(a, w), w));
        rel.set(fol::tuple_index(m.size(), args));
      }
    m.relations.push_back(std::move(rel));
  }
  return m;
}

}  // namespace detail

inline Json fol_model_spec(const fol::FolSignature& s, const fol::FolModel& m) {
  return with_header("fol_model", detail::fol_model_body(s, m));
}

inline FolModelSpec read_fol_model(const Json& j, const Context&) {
  FolModelSpec out;
  out.sig = detail::fol_signature_from(j, "fol_model");
  out.model = detail::fol_model_from(out.sig, j, "fol_model");
  return out;
}

/// Skolemization request: a signature, a sentence universe (explicit sentences or a quantifier depth),
/// and optionally a model with a seed set for hull computations.
struct SkolemJob {
  fol::FolSignature sig;
  std::vector<fol::Formula> sentences;
  std::optional<int> depth;
  std::optional<fol::FolModel> model;
  std::vector<std::string> seed;
};

inline Json skolem_job_spec(const SkolemJob& job) {
  Json j;
  j["functions"] = detail::symbols_json(job.sig.functions);
  j["relations"] = detail::symbols_json(job.sig.relations);
  if (job.depth) j["depth"] = *job.depth;
  if (!job.sentences.empty()) {
    j["sentences"] = Json::array();
    for (const auto& f : job.sentences) j["sentences"].push_back(fol::show(job.sig, f));
  }
  if (job.model) {
    Json m = detail::fol_model_body(job.sig, *job.model);
    m.erase("functions");
    m.erase("relations");
    j["model"] = m;
    j["seed"] = job.seed;
  }
  return with_header("skolem_job", std::move(j));
}

inline SkolemJob read_skolem_job(const Json& j, const Context&) {
  using namespace detail;
  SkolemJob job;
  job.sig = fol_signature_from(j, "skolem_job");
  Report r = fol::validate_signature(job.sig);
  if (!r.ok()) throw SchemaError("skolem_job: " + r.items.front().location + ": " + r.items.front().law);
  if (auto* d = maybe(j, "depth")) job.depth = integer(*d, "skolem_job/depth");
  if (auto* ss = maybe(j, "sentences"))
    for (const auto& s : array(*ss, "skolem_job/sentences")) {
      const std::string text = str(s, "skolem_job/sentences");
      try {
        job.sentences.push_back(fol::parse(job.sig, text));
      } catch (const StructuralError& e) {
        throw SchemaError("skolem_job/sentences: " + text + ": " + e.what());
      }
      if (!fol::is_sentence(job.sentences.back())) throw SchemaError("skolem_job/sentences: free variables in " + text);
    }
  if (!job.depth && job.sentences.empty()) throw SchemaError("skolem_job: needs \"sentences\" or \"depth\"");
  if (auto* m = maybe(j, "model")) {
    job.model = fol_model_from(job.sig, *m, "skolem_job/model");
    if (auto* seed = maybe(j, "seed")) {
      job.seed = ids(*seed, "skolem_job/seed");
      for (const auto& e : job.seed) lookup(job.model->carrier, e, "skolem_job/seed");
    }
  }
  return job;
}

// ---------------------------------------------------------------------------
// Files

/// Parses JSON text, rejecting repeated keys inside any object and reporting line and column on syntax errors.
inline Json parse_text(const std::string& text, const std::string& name) {
  std::vector<std::set<std::string>> open;
  std::string duplicate;
  Json::parser_callback_t cb = [&](int, Json::parse_event_t ev, Json& parsed) {
    if (ev == Json::parse_event_t::object_start) open.emplace_back();
    else if (ev == Json::parse_event_t::object_end) open.pop_back();
    else if (ev == Json::parse_event_t::key && duplicate.empty() && !open.back().insert(parsed.get<std::string>()).second)
      duplicate = parsed.get<std::string>();
    return true;
  };
  try {
    Json j = Json::parse(text, cb);
    if (!duplicate.empty()) throw SchemaError(name + ": duplicate id \"" + duplicate + "\"");
    return j;
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    std::string msg = e.what();
    if (auto p = msg.find("column "); p != std::string::npos) msg = msg.substr(msg.find(": ", p) + 2);
    throw SchemaError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

struct SpecFile {
  std::string kind;
  Json doc;
  Context ctx;
};

inline void check_header(const Json& j, const std::string& name) {
  if (!j.is_object()) throw SchemaError(name + ": top level must be an object");
  if (!j.contains("kind")) throw SchemaError(name + ": missing \"kind\"");
  const std::string kind = detail::str(j["kind"], name + "/kind");
  if (std::find(kinds().begin(), kinds().end(), kind) == kinds().end())
    throw SchemaError(name + ": unknown kind \"" + kind + "\"");
  if (!j.contains("version")) throw SchemaError(name + ": missing \"version\"");
  if (detail::integer(j["version"], name + "/version") != kVersion)
    throw SchemaError(name + ": unsupported version " + j["version"].dump());
}

inline SpecFile load_text(const std::string& text, const std::string& name, const std::filesystem::path& dir,
                          std::set<std::string>* visiting = nullptr);

inline void add_categories(const Json& j, Context& ctx, const std::string& name, std::set<std::string>& visiting) {
  using namespace detail;
  if (auto* imports = maybe(j, "imports"))
    for (const auto& p : array(*imports, name + "/imports")) {
      const std::filesystem::path path = ctx.dir / str(p, name + "/imports");
      const std::string key = std::filesystem::weakly_canonical(path).string();
      if (!visiting.insert(key).second) throw SchemaError(name + "/imports: import cycle at " + path.string());
      std::ifstream in(path);
      if (!in) throw SchemaError(name + "/imports: cannot read " + path.string());
      std::stringstream ss;
      ss << in.rdbuf();
      SpecFile sub = load_text(ss.str(), path.string(), path.parent_path(), &visiting);
      visiting.erase(key);
      for (const auto& [id, c] : sub.ctx.categories)
        if (!ctx.categories.emplace(id, c).second) throw SchemaError(name + ": duplicate id \"" + id + "\"");
      if (sub.kind == "category" && sub.doc.contains("id")) {
        const std::string id = str(sub.doc["id"], path.string());
        if (!ctx.categories.emplace(id, read_category(sub.doc, sub.ctx, path.string())).second)
          throw SchemaError(name + ": duplicate id \"" + id + "\"");
      }
    }
  if (auto* cats = maybe(j, "categories"))
    for (const auto& c : array(*cats, name + "/categories")) {
      const std::string id = str(need(c, "id", name + "/categories"), name + "/categories");
      CatRef cat = read_category(c, ctx, name + "/categories/" + id);
      if (!ctx.categories.emplace(id, cat).second) throw SchemaError(name + ": duplicate id \"" + id + "\"");
    }
}

inline SpecFile load_text(const std::string& text, const std::string& name, const std::filesystem::path& dir,
                          std::set<std::string>* visiting) {
  SpecFile f;
  f.doc = parse_text(text, name);
  check_header(f.doc, name);
  f.kind = f.doc["kind"].get<std::string>();
  f.ctx.dir = dir;
  std::set<std::string> local;
  add_categories(f.doc, f.ctx, name, visiting ? *visiting : local);
  return f;
}

inline SpecFile load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string() + ": cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  std::set<std::string> visiting{std::filesystem::weakly_canonical(path).string()};
  return load_text(ss.str(), path.string(), path.parent_path(), &visiting);
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace insfin::io
