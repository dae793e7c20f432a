#pragma once

#include "insfin/common.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace insfin {

struct Arrow {
  std::string id;
  int src = 0;
  int dst = 0;
  bool operator==(const Arrow&) const = default;
};

/// A finite category stored extensionally. comp[g * n_arr() + f] is g∘f, or -1.
struct FinCat {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<int> identity;
  std::vector<int> comp;

  int n_obj() const { return static_cast<int>(objects.size()); }
  int n_arr() const { return static_cast<int>(arrows.size()); }

  int object_index(const std::string& id) const {
    for (int i = 0; i < n_obj(); ++i)
      if (objects[i] == id) return i;
    return -1;
  }
  int arrow_index(const std::string& id) const {
    for (int i = 0; i < n_arr(); ++i)
      if (arrows[i].id == id) return i;
    return -1;
  }
  int compose(int g, int f) const { return comp[static_cast<std::size_t>(g) * arrows.size() + f]; }
  int src(int f) const { return arrows[f].src; }
  int dst(int f) const { return arrows[f].dst; }
  bool is_identity(int f) const { return identity[arrows[f].src] == f; }

  std::vector<int> hom(int a, int b) const {
    std::vector<int> out;
    for (int f = 0; f < n_arr(); ++f)
      if (arrows[f].src == a && arrows[f].dst == b) out.push_back(f);
    return out;
  }
  std::optional<int> inverse(int f) const {
    for (int g : hom(dst(f), src(f)))
      if (compose(g, f) == identity[src(f)] && compose(f, g) == identity[dst(f)]) return g;
    return std::nullopt;
  }

  bool operator==(const FinCat&) const = default;
};

using CatRef = std::shared_ptr<const FinCat>;

inline CatRef share(FinCat c) { return std::make_shared<const FinCat>(std::move(c)); }

/// Collects objects, arrows and composites by id; build() sorts ids and fills identity composites.
class CategoryBuilder {
 public:
  CategoryBuilder& object(std::string id) {
    objects_.push_back(std::move(id));
    return *this;
  }
  CategoryBuilder& arrow(std::string id, std::string src, std::string dst) {
    arrows_.emplace_back(std::move(id), std::move(src), std::move(dst));
    return *this;
  }
  CategoryBuilder& identity(std::string obj, std::string arrow) {
    identities_.emplace_back(std::move(obj), std::move(arrow));
    return *this;
  }
  CategoryBuilder& compose(std::string g, std::string f, std::string gf) {
    comps_.emplace_back(std::move(g), std::move(f), std::move(gf));
    return *this;
  }

  FinCat build(bool fill_identity_comp = true) const {
    FinCat c;
    c.objects = objects_;
    std::sort(c.objects.begin(), c.objects.end());
    for (std::size_t i = 1; i < c.objects.size(); ++i)
      if (c.objects[i] == c.objects[i - 1]) throw StructuralError("duplicate object id: " + c.objects[i]);
    std::map<std::string, int> oidx;
    for (int i = 0; i < c.n_obj(); ++i) oidx[c.objects[i]] = i;
    auto obj = [&](const std::string& id) {
      auto it = oidx.find(id);
      if (it == oidx.end()) throw StructuralError("unknown object id: " + id);
      return it->second;
    };

    std::map<std::string, std::pair<int, int>> arr;
    for (const auto& [id, s, t] : arrows_) {
      if (arr.count(id)) throw StructuralError("duplicate arrow id: " + id);
      arr[id] = {obj(s), obj(t)};
    }
    std::map<int, std::string> ident;
    for (const auto& [o, a] : identities_) {
      int oi = obj(o);
      if (ident.count(oi)) throw StructuralError("duplicate identity for object: " + o);
      ident[oi] = a;
    }
    for (int o = 0; o < c.n_obj(); ++o) {
      if (!ident.count(o)) ident[o] = "id_" + c.objects[o];
      auto it = arr.find(ident[o]);
      if (it == arr.end()) arr[ident[o]] = {o, o};
    }
    for (const auto& [id, st] : arr) c.arrows.push_back({id, st.first, st.second});
    std::map<std::string, int> aidx;
    for (int i = 0; i < c.n_arr(); ++i) aidx[c.arrows[i].id] = i;
    auto ar = [&](const std::string& id) {
      auto it = aidx.find(id);
      if (it == aidx.end()) throw StructuralError("unknown arrow id: " + id);
      return it->second;
    };
    c.identity.resize(c.objects.size());
    for (int o = 0; o < c.n_obj(); ++o) c.identity[o] = ar(ident[o]);

    const std::size_t n = c.arrows.size();
    c.comp.assign(n * n, -1);
    for (const auto& [g, f, gf] : comps_) {
      int gi = ar(g), fi = ar(f), gfi = ar(gf);
      int& slot = c.comp[gi * n + fi];
      if (slot != -1 && slot != gfi) throw StructuralError("conflicting composite for (" + g + ", " + f + ")");
      slot = gfi;
    }
    if (fill_identity_comp) {
      for (int f = 0; f < c.n_arr(); ++f) {
        int& r = c.comp[f * n + c.identity[c.arrows[f].src]];
        if (r == -1) r = f;
        int& l = c.comp[c.identity[c.arrows[f].dst] * n + f];
        if (l == -1) l = f;
      }
    }
    return c;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<std::tuple<std::string, std::string, std::string>> arrows_;
  std::vector<std::pair<std::string, std::string>> identities_;
  std::vector<std::tuple<std::string, std::string, std::string>> comps_;
};

// ---------------------------------------------------------------------------
// Standard small categories

inline FinCat terminal_category(const std::string& obj = "*") { return CategoryBuilder().object(obj).build(); }

inline FinCat discrete_category(const std::vector<std::string>& ids) {
  CategoryBuilder b;
  for (const auto& i : ids) b.object(i);
  return b.build();
}

/// Exactly one arrow "(a,b)" for every ordered pair; identities are "(a,a)".
inline FinCat codiscrete_category(const std::vector<std::string>& ids) {
  CategoryBuilder b;
  auto name = [](const std::string& x, const std::string& y) { return "(" + x + "," + y + ")"; };
  for (const auto& x : ids) {
    b.object(x);
    b.identity(x, name(x, x));
    for (const auto& y : ids) b.arrow(name(x, y), x, y);
  }
  for (const auto& x : ids)
    for (const auto& y : ids)
      for (const auto& z : ids) b.compose(name(y, z), name(x, y), name(x, z));
  return b.build();
}

/// Thin category of a preorder; leq(i, j) over positions in ids.
inline FinCat preorder_category(const std::vector<std::string>& ids,
                                const std::function<bool(int, int)>& leq) {
  CategoryBuilder b;
  auto name = [&](int i, int j) { return ids[i] == ids[j] ? "id_" + ids[i] : ids[i] + "<=" + ids[j]; };
  const int n = static_cast<int>(ids.size());
  for (int i = 0; i < n; ++i) b.object(ids[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && leq(i, j)) b.arrow(name(i, j), ids[i], ids[j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if ((i == j || leq(i, j)) && (j == k || leq(j, k))) b.compose(name(j, k), name(i, j), name(i, k));
  return b.build();
}

/// Free category on an acyclic graph; a path e2 after e1 is named "e2.e1".
inline FinCat free_category(const std::vector<std::string>& objects,
                            const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
  struct Path {
    std::vector<int> edges;  // application order, first edge first
    std::string src, dst;
  };
  std::vector<Path> paths;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    paths.push_back({{e}, std::get<1>(edges[e]), std::get<2>(edges[e])});
  for (std::size_t k = 0; k < paths.size(); ++k) {
    if (paths[k].edges.size() > edges.size()) throw StructuralError("free_category: graph has a cycle");
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
      if (std::get<1>(edges[e]) == paths[k].dst) {
        Path p = paths[k];
        p.edges.push_back(e);
        p.dst = std::get<2>(edges[e]);
        paths.push_back(p);
      }
  }
  auto name = [&](const std::vector<int>& es) {
    std::string s;
    for (auto it = es.rbegin(); it != es.rend(); ++it) s += (s.empty() ? "" : ".") + std::get<0>(edges[*it]);
    return s;
  };
  CategoryBuilder b;
  for (const auto& o : objects) b.object(o);
  for (const auto& p : paths) b.arrow(name(p.edges), p.src, p.dst);
  for (const auto& p : paths)
    for (const auto& q : paths)
      if (p.dst == q.src) {
        std::vector<int> pq = p.edges;
        pq.insert(pq.end(), q.edges.begin(), q.edges.end());
        b.compose(name(q.edges), name(p.edges), name(pq));
      }
  return b.build();
}

/// Two objects "0","1" and one arrow f: 0 → 1.
inline FinCat arrow_category() { return CategoryBuilder().object("0").object("1").arrow("f", "0", "1").build(); }

/// One object with a non-identity idempotent e (e∘e = e).
inline FinCat idempotent_monoid(const std::string& obj = "*") {
  return CategoryBuilder().object(obj).arrow("e", obj, obj).compose("e", "e", "e").build();
}

inline FinCat opposite(const FinCat& c) {
  FinCat o = c;
  for (auto& a : o.arrows) std::swap(a.src, a.dst);
  const std::size_t n = c.arrows.size();
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t f = 0; f < n; ++f) o.comp[g * n + f] = c.comp[f * n + g];
  return o;
}

// ---------------------------------------------------------------------------
// Validation

inline std::string arrow_name(const FinCat& c, int f) {
  return f >= 0 && f < c.n_arr() ? c.arrows[f].id : "#" + std::to_string(f);
}

inline Report validate_category(const FinCat& c) {
  Report rep;
  const int n = c.n_arr();
  if (static_cast<int>(c.identity.size()) != c.n_obj()) rep.structural("identity", "identity table size");
  if (c.comp.size() != static_cast<std::size_t>(n) * n) rep.structural("comp", "composition table size");
  for (const auto& a : c.arrows)
    if (a.src < 0 || a.src >= c.n_obj() || a.dst < 0 || a.dst >= c.n_obj())
      rep.structural(a.id, "unknown object reference");
  for (int i : c.identity)
    if (i < 0 || i >= n) rep.structural("identity", "unknown arrow reference");
  for (int r : c.comp)
    if (r < -1 || r >= n) rep.structural("comp", "unknown arrow reference");
  if (!rep.ok()) return rep;

  for (int o = 0; o < c.n_obj(); ++o) {
    int id = c.identity[o];
    if (c.src(id) != o || c.dst(id) != o) rep.violation(c.objects[o], "identity endpoints", {c.arrows[id].id});
  }
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      bool composable = c.dst(f) == c.src(g);
      int gf = c.compose(g, f);
      std::vector<std::string> w{c.arrows[g].id, c.arrows[f].id};
      if (composable && gf < 0) {
        rep.violation("(" + w[0] + ", " + w[1] + ")", "composition totality", w);
      } else if (!composable && gf >= 0) {
        rep.violation("(" + w[0] + ", " + w[1] + ")", "composition defined on non-composable pair", w);
      } else if (composable && !c.is_identity(g) && !c.is_identity(f) &&
                 (c.src(gf) != c.src(f) || c.dst(gf) != c.dst(g))) {
        rep.violation("(" + w[0] + ", " + w[1] + ")", "composite endpoints", {w[0], w[1], c.arrows[gf].id});
      }
    }
  if (!rep.ok()) return rep;

  for (int f = 0; f < n; ++f) {
    if (c.compose(f, c.identity[c.src(f)]) != f || c.compose(c.identity[c.dst(f)], f) != f)
      rep.violation(c.arrows[f].id, "identity law at " + c.arrows[f].id, {c.arrows[f].id});
  }
  if (!rep.ok()) return rep;
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      if (c.dst(f) != c.src(g)) continue;
      for (int h = 0; h < n; ++h) {
        if (c.dst(g) != c.src(h)) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          rep.violation("(" + c.arrows[h].id + ", " + c.arrows[g].id + ", " + c.arrows[f].id + ")",
                        "associativity", {c.arrows[h].id, c.arrows[g].id, c.arrows[f].id});
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Functors

enum class Variance { covariant, contravariant };

inline Variance combine(Variance a, Variance b) {
  return a == b ? Variance::covariant : Variance::contravariant;
}

inline bool same_cat(const CatRef& a, const CatRef& b) { return a == b || (a && b && *a == *b); }

struct Functor {
  CatRef src;
  CatRef dst;
  std::vector<int> omap;
  std::vector<int> amap;
  Variance variance = Variance::covariant;

  int obj(int x) const { return omap[x]; }
  int arr(int f) const { return amap[f]; }

  bool operator==(const Functor& o) const {
    return variance == o.variance && omap == o.omap && amap == o.amap && same_cat(src, o.src) &&
           same_cat(dst, o.dst);
  }
};

inline Functor identity_functor(const CatRef& c) {
  Functor f{c, c, {}, {}, Variance::covariant};
  for (int i = 0; i < c->n_obj(); ++i) f.omap.push_back(i);
  for (int i = 0; i < c->n_arr(); ++i) f.amap.push_back(i);
  return f;
}

inline Functor constant_functor(const CatRef& src, const CatRef& dst, int obj,
                                Variance v = Variance::covariant) {
  Functor f{src, dst, std::vector<int>(src->n_obj(), obj),
            std::vector<int>(src->n_arr(), dst->identity[obj]), v};
  return f;
}

/// g∘f; requires f.dst to equal g.src.
inline Functor compose(const Functor& g, const Functor& f) {
  if (!same_cat(f.dst, g.src)) throw StructuralError("functor composition: boundary mismatch");
  Functor h{f.src, g.dst, {}, {}, combine(f.variance, g.variance)};
  for (int x : f.omap) h.omap.push_back(g.omap[x]);
  for (int a : f.amap) h.amap.push_back(g.amap[a]);
  return h;
}

inline Report validate_functor(const Functor& F) {
  Report rep;
  if (!F.src || !F.dst) {
    rep.structural("functor", "missing category");
    return rep;
  }
  const FinCat& A = *F.src;
  const FinCat& B = *F.dst;
  if (static_cast<int>(F.omap.size()) != A.n_obj()) rep.structural("omap", "dangling or missing object entries");
  if (static_cast<int>(F.amap.size()) != A.n_arr()) rep.structural("amap", "dangling or missing arrow entries");
  if (!rep.ok()) return rep;
  for (int x = 0; x < A.n_obj(); ++x)
    if (F.omap[x] < 0 || F.omap[x] >= B.n_obj()) rep.structural(A.objects[x], "omap target unknown");
  for (int f = 0; f < A.n_arr(); ++f)
    if (F.amap[f] < 0 || F.amap[f] >= B.n_arr()) rep.structural(A.arrows[f].id, "amap target unknown");
  if (!rep.ok()) return rep;

  const bool co = F.variance == Variance::covariant;
  for (int f = 0; f < A.n_arr(); ++f) {
    int Ff = F.amap[f];
    int want_s = F.omap[co ? A.src(f) : A.dst(f)];
    int want_t = F.omap[co ? A.dst(f) : A.src(f)];
    if (B.src(Ff) != want_s || B.dst(Ff) != want_t)
      rep.violation(A.arrows[f].id, "endpoint mismatch at " + A.arrows[f].id, {A.arrows[f].id, B.arrows[Ff].id});
  }
  if (!rep.ok()) return rep;
  for (int x = 0; x < A.n_obj(); ++x)
    if (F.amap[A.identity[x]] != B.identity[F.omap[x]])
      rep.violation(A.objects[x], "identity preservation", {A.arrows[A.identity[x]].id});
  for (int g = 0; g < A.n_arr(); ++g)
    for (int f = 0; f < A.n_arr(); ++f) {
      if (A.dst(f) != A.src(g)) continue;
      int lhs = F.amap[A.compose(g, f)];
      int rhs = co ? B.compose(F.amap[g], F.amap[f]) : B.compose(F.amap[f], F.amap[g]);
      if (lhs != rhs)
        rep.violation("(" + A.arrows[g].id + ", " + A.arrows[f].id + ")", "composition preservation",
                      {A.arrows[g].id, A.arrows[f].id});
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Natural transformations

struct NatTrans {
  Functor src;
  Functor dst;
  std::vector<int> components;

  bool operator==(const NatTrans&) const = default;
};

inline NatTrans identity_nat(const Functor& F) {
  NatTrans t{F, F, {}};
  for (int x : F.omap) t.components.push_back(F.dst->identity[x]);
  return t;
}

inline Report validate_nat_trans(const NatTrans& t) {
  Report rep;
  const Functor& F = t.src;
  const Functor& G = t.dst;
  if (!same_cat(F.src, G.src) || !same_cat(F.dst, G.dst) || F.variance != G.variance) {
    rep.structural("nat_trans", "functors do not share source, target and variance");
    return rep;
  }
  const FinCat& A = *F.src;
  const FinCat& B = *F.dst;
  if (static_cast<int>(t.components.size()) != A.n_obj()) {
    rep.structural("components", "component table size");
    return rep;
  }
  for (int x = 0; x < A.n_obj(); ++x) {
    int a = t.components[x];
    if (a < 0 || a >= B.n_arr() || B.src(a) != F.omap[x] || B.dst(a) != G.omap[x])
      rep.structural(A.objects[x], "component not in hom(F x, G x)");
  }
  if (!rep.ok()) return rep;
  const bool co = F.variance == Variance::covariant;
  for (int f = 0; f < A.n_arr(); ++f) {
    int a = A.src(f), b = A.dst(f);
    bool ok = co ? B.compose(G.amap[f], t.components[a]) == B.compose(t.components[b], F.amap[f])
                 : B.compose(t.components[a], F.amap[f]) == B.compose(G.amap[f], t.components[b]);
    if (!ok) rep.violation(A.arrows[f].id, "naturality", {A.arrows[f].id});
  }
  return rep;
}

/// Vertical composite beta·alpha.
inline NatTrans vertical(const NatTrans& beta, const NatTrans& alpha) {
  NatTrans t{alpha.src, beta.dst, {}};
  for (std::size_t x = 0; x < alpha.components.size(); ++x)
    t.components.push_back(alpha.src.dst->compose(beta.components[x], alpha.components[x]));
  return t;
}

/// H·alpha : H∘F ⇒ H∘G (H covariant).
inline NatTrans whisker_left(const Functor& H, const NatTrans& alpha) {
  NatTrans t{compose(H, alpha.src), compose(H, alpha.dst), {}};
  for (int c : alpha.components) t.components.push_back(H.amap[c]);
  return t;
}

/// alpha·K : F∘K ⇒ G∘K.
inline NatTrans whisker_right(const NatTrans& alpha, const Functor& K) {
  NatTrans t{compose(alpha.src, K), compose(alpha.dst, K), {}};
  for (int x : K.omap) t.components.push_back(alpha.components[x]);
  return t;
}

// ---------------------------------------------------------------------------
// Set-valued functors

using Function = std::vector<int>;

inline Function identity_function(std::size_t n) {
  Function f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<int>(i);
  return f;
}

/// g∘f
inline Function compose_fn(const Function& g, const Function& f) {
  Function h;
  h.reserve(f.size());
  for (int x : f) h.push_back(g[x]);
  return h;
}

struct SetFunctor {
  CatRef src;
  std::vector<std::vector<std::string>> carriers;
  std::vector<Function> fmap;
  Variance variance = Variance::covariant;

  std::size_t size(int c) const { return carriers[c].size(); }
  int element_index(int c, const std::string& e) const {
    for (std::size_t i = 0; i < carriers[c].size(); ++i)
      if (carriers[c][i] == e) return static_cast<int>(i);
    return -1;
  }

  bool operator==(const SetFunctor& o) const {
    return variance == o.variance && carriers == o.carriers && fmap == o.fmap && same_cat(src, o.src);
  }
};

inline Report validate_set_functor(const SetFunctor& S) {
  Report rep;
  const FinCat& A = *S.src;
  if (static_cast<int>(S.carriers.size()) != A.n_obj()) rep.structural("carriers", "carrier table size");
  if (static_cast<int>(S.fmap.size()) != A.n_arr()) rep.structural("fmap", "function table size");
  if (!rep.ok()) return rep;
  const bool co = S.variance == Variance::covariant;
  for (int f = 0; f < A.n_arr(); ++f) {
    int from = co ? A.src(f) : A.dst(f);
    int to = co ? A.dst(f) : A.src(f);
    if (S.fmap[f].size() != S.size(from)) {
      rep.structural(A.arrows[f].id, "function domain size");
      continue;
    }
    for (int v : S.fmap[f])
      if (v < 0 || v >= static_cast<int>(S.size(to))) rep.structural(A.arrows[f].id, "function value outside carrier");
  }
  if (!rep.ok()) return rep;
  for (int x = 0; x < A.n_obj(); ++x)
    if (S.fmap[A.identity[x]] != identity_function(S.size(x)))
      rep.violation(A.objects[x], "identity preservation", {A.arrows[A.identity[x]].id});
  for (int g = 0; g < A.n_arr(); ++g)
    for (int f = 0; f < A.n_arr(); ++f) {
      if (A.dst(f) != A.src(g)) continue;
      Function rhs = co ? compose_fn(S.fmap[g], S.fmap[f]) : compose_fn(S.fmap[f], S.fmap[g]);
      if (S.fmap[A.compose(g, f)] != rhs)
        rep.violation("(" + A.arrows[g].id + ", " + A.arrows[f].id + ")", "composition preservation",
                      {A.arrows[g].id, A.arrows[f].id});
    }
  return rep;
}

/// S∘phi as a set functor over phi.src.
inline SetFunctor precompose(const SetFunctor& S, const Functor& phi) {
  SetFunctor out{phi.src, {}, {}, combine(S.variance, phi.variance)};
  for (int x : phi.omap) out.carriers.push_back(S.carriers[x]);
  for (int a : phi.amap) out.fmap.push_back(S.fmap[a]);
  return out;
}

/// Checks that alpha: F ⇒ G is a natural family of functions.
inline Report validate_set_nat(const SetFunctor& F, const SetFunctor& G, const std::vector<Function>& alpha) {
  Report rep;
  const FinCat& A = *F.src;
  if (!same_cat(F.src, G.src) || F.variance != G.variance) {
    rep.structural("alpha", "set functors do not share source and variance");
    return rep;
  }
  if (static_cast<int>(alpha.size()) != A.n_obj()) {
    rep.structural("alpha", "component table size");
    return rep;
  }
  for (int x = 0; x < A.n_obj(); ++x) {
    if (alpha[x].size() != F.size(x)) {
      rep.structural(A.objects[x], "component domain size");
      continue;
    }
    for (int v : alpha[x])
      if (v < 0 || v >= static_cast<int>(G.size(x))) rep.structural(A.objects[x], "component value outside carrier");
  }
  if (!rep.ok()) return rep;
  const bool co = F.variance == Variance::covariant;
  for (int f = 0; f < A.n_arr(); ++f) {
    int a = co ? A.src(f) : A.dst(f);
    int b = co ? A.dst(f) : A.src(f);
    if (compose_fn(G.fmap[f], alpha[a]) != compose_fn(alpha[b], F.fmap[f]))
      rep.violation(A.arrows[f].id, "naturality", {A.arrows[f].id});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Enumeration

/// Calls fn for every function {0..n-1} → {0..m-1}, in lexicographic order. Stops if fn returns false.
inline void for_each_function(std::size_t n, std::size_t m, const std::function<bool(const Function&)>& fn) {
  if (n > 0 && m == 0) return;
  Function f(n, 0);
  while (true) {
    if (!fn(f)) return;
    std::size_t i = n;
    while (true) {
      if (i == 0) return;
      --i;
      if (static_cast<std::size_t>(++f[i]) < m) break;
      f[i] = 0;
    }
  }
}

/// All functors a → b of the given variance, in lexicographic order of (omap, amap).
inline std::vector<Functor> enumerate_functors(const CatRef& a, const CatRef& b, Guard& guard,
                                               Variance v = Variance::covariant) {
  const FinCat& A = *a;
  const FinCat& B = *b;
  const bool co = v == Variance::covariant;
  std::vector<Functor> out;
  Functor cur{a, b, std::vector<int>(A.n_obj(), -1), std::vector<int>(A.n_arr(), -1), v};

  // pairs whose check becomes possible once arrow k (the largest index among g, f, g∘f) is set
  std::vector<std::vector<std::pair<int, int>>> checks(A.n_arr());
  for (int g = 0; g < A.n_arr(); ++g)
    for (int f = 0; f < A.n_arr(); ++f)
      if (A.dst(f) == A.src(g)) checks[std::max({g, f, A.compose(g, f)})].emplace_back(g, f);

  std::function<void(int)> arrows = [&](int k) {
    guard.tick();
    if (k == A.n_arr()) {
      out.push_back(cur);
      return;
    }
    int s = cur.omap[co ? A.src(k) : A.dst(k)];
    int t = cur.omap[co ? A.dst(k) : A.src(k)];
    std::vector<int> cands = A.is_identity(k) ? std::vector<int>{B.identity[cur.omap[A.src(k)]]} : B.hom(s, t);
    for (int c : cands) {
      cur.amap[k] = c;
      bool ok = true;
      for (auto [g, f] : checks[k]) {
        int rhs = co ? B.compose(cur.amap[g], cur.amap[f]) : B.compose(cur.amap[f], cur.amap[g]);
        if (cur.amap[A.compose(g, f)] != rhs) {
          ok = false;
          break;
        }
      }
      if (ok) arrows(k + 1);
    }
    cur.amap[k] = -1;
  };
  std::function<void(int)> objects = [&](int x) {
    guard.tick();
    if (x == A.n_obj()) {
      arrows(0);
      return;
    }
    for (int y = 0; y < B.n_obj(); ++y) {
      cur.omap[x] = y;
      objects(x + 1);
    }
  };
  objects(0);
  return out;
}

/// All natural transformations F ⇒ G.
inline std::vector<NatTrans> enumerate_nat_trans(const Functor& F, const Functor& G, Guard& guard) {
  const FinCat& A = *F.src;
  const FinCat& B = *F.dst;
  const bool co = F.variance == Variance::covariant;
  std::vector<NatTrans> out;
  std::vector<int> comp(A.n_obj(), -1);
  std::function<void(int)> rec = [&](int x) {
    guard.tick();
    if (x == A.n_obj()) {
      out.push_back({F, G, comp});
      return;
    }
    for (int c : B.hom(F.omap[x], G.omap[x])) {
      comp[x] = c;
      bool ok = true;
      for (int f = 0; f < A.n_arr() && ok; ++f) {
        int a = A.src(f), b = A.dst(f);
        if (std::max(a, b) != x) continue;
        ok = co ? B.compose(G.amap[f], comp[a]) == B.compose(comp[b], F.amap[f])
                : B.compose(comp[a], F.amap[f]) == B.compose(G.amap[f], comp[b]);
      }
      if (ok) rec(x + 1);
    }
    comp[x] = -1;
  };
  rec(0);
  return out;
}

/// All natural families of functions F ⇒ G between set functors over one category.
inline std::vector<std::vector<Function>> enumerate_set_nat(const SetFunctor& F, const SetFunctor& G, Guard& guard) {
  const FinCat& A = *F.src;
  const bool co = F.variance == Variance::covariant;
  std::vector<std::vector<Function>> out;
  std::vector<Function> alpha(A.n_obj());
  std::function<void(int)> rec = [&](int x) {
    guard.tick();
    if (x == A.n_obj()) {
      out.push_back(alpha);
      return;
    }
    for_each_function(F.size(x), G.size(x), [&](const Function& fn) {
      guard.tick();
      alpha[x] = fn;
      bool ok = true;
      for (int f = 0; f < A.n_arr() && ok; ++f) {
        int a = co ? A.src(f) : A.dst(f);
        int b = co ? A.dst(f) : A.src(f);
        if (std::max(a, b) != x) continue;
        ok = compose_fn(G.fmap[f], alpha[a]) == compose_fn(alpha[b], F.fmap[f]);
      }
      if (ok) rec(x + 1);
      return true;
    });
  };
  rec(0);
  return out;
}

}  // namespace insfin
