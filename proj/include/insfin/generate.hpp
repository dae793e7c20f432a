#pragma once

#include "insfin/groth.hpp"
#include "insfin/instcore.hpp"

#include <random>

namespace insfin::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Subset random_subset(Rng& rng, std::size_t n, double p = 0.5) {
  Subset s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng, p)) s.set(i);
  return s;
}

inline std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random poset on n objects, numbered in a linear extension.
inline FinCat random_poset(Rng& rng, int n, int max_nonid_arrows) {
  for (int attempt = 0;; ++attempt) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) leq[i][j] = coin(rng, 0.5);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (leq[i][k] && leq[k][j]) leq[i][j] = true;
    int count = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) count += leq[i][j];
    if (count > max_nonid_arrows && attempt < 100) continue;
    auto ids = numbered("s", n);
    return preorder_category(ids, [&](int i, int j) { return leq[i][j]; });
  }
}

/// Random small category: a poset, a parallel pair or an idempotent monoid.
inline FinCat random_category(Rng& rng, int max_obj, int max_nonid_arrows) {
  int shape = uniform(rng, 0, 5);
  if (shape == 4 && max_obj >= 2 && max_nonid_arrows >= 2)
    return CategoryBuilder().object("s0").object("s1").arrow("f", "s0", "s1").arrow("g", "s0", "s1").build();
  if (shape == 5 && max_nonid_arrows >= 1) return idempotent_monoid("s0");
  return random_poset(rng, uniform(rng, 1, max_obj), max_nonid_arrows);
}

/// Random covariant Set-valued functor with carriers of size 1..max_carrier.
inline SetFunctor random_set_functor(Rng& rng, const CatRef& sig, int max_carrier, int min_carrier = 1) {
  const FinCat& S = *sig;
  SetFunctor F{sig, {}, std::vector<Function>(S.n_arr()), Variance::covariant};
  for (int o = 0; o < S.n_obj(); ++o) {
    int n = uniform(rng, min_carrier, max_carrier);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(o));
    F.carriers.push_back(names);
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (int f = 0; f < S.n_arr(); ++f) {
      if (S.is_identity(f)) {
        F.fmap[f] = identity_function(F.size(S.src(f)));
        continue;
      }
      Function fn(F.size(S.src(f)));
      for (auto& v : fn) v = uniform(rng, 0, static_cast<int>(F.size(S.dst(f))) - 1);
      F.fmap[f] = fn;
    }
    // composites through an intermediate object are forced
    for (int f = 0; f < S.n_arr(); ++f)
      for (int g = 0; g < S.n_arr(); ++g)
        if (S.dst(f) == S.src(g) && !S.is_identity(f) && !S.is_identity(g) && S.compose(g, f) != f &&
            S.compose(g, f) != g)
          F.fmap[S.compose(g, f)] = compose_fn(F.fmap[g], F.fmap[f]);
    if (validate_set_functor(F).ok()) return F;
  }
  for (int f = 0; f < S.n_arr(); ++f)
    F.fmap[f] = S.is_identity(f) ? identity_function(F.size(S.src(f))) : Function(F.size(S.src(f)), 0);
  return F;
}

/// Smallest families containing the seeds that are closed under intersection and under preimages along Sen.
inline std::vector<ClosureOp> saturate_closures(const SetFunctor& sen, std::vector<std::vector<Subset>> seeds) {
  const FinCat& S = *sen.src;
  std::vector<ClosureOp> cl(S.n_obj());
  while (true) {
    for (int o = 0; o < S.n_obj(); ++o) cl[o] = ClosureOp::generated(sen.size(o), seeds[o]);
    bool changed = false;
    for (int f = 0; f < S.n_arr(); ++f)
      for (const auto& t : cl[S.dst(f)].closed) {
        Subset p = preimage(sen.fmap[f], t);
        if (!cl[S.src(f)].is_closed(p)) {
          seeds[S.src(f)].push_back(p);
          changed = true;
        }
      }
    if (!changed) return cl;
  }
}

inline PiInstitution random_pi(Rng& rng, int max_obj = 3, int max_nonid_arrows = 5, int max_carrier = 4) {
  CatRef sig = share(random_category(rng, max_obj, max_nonid_arrows));
  SetFunctor sen = random_set_functor(rng, sig, max_carrier);
  std::vector<std::vector<Subset>> seeds(sig->n_obj());
  for (int o = 0; o < sig->n_obj(); ++o) {
    int k = uniform(rng, 0, 3);
    for (int i = 0; i < k; ++i) seeds[o].push_back(random_subset(rng, sen.size(o)));
  }
  return {sig, sen, saturate_closures(sen, seeds)};
}

/// Institution whose models are identified with their rows; rows are closed under preimage so Mod is forced.
inline Institution institution_from_rows(const SetFunctor& sen, std::vector<std::vector<Subset>> rows,
                                         bool codiscrete_models = false) {
  const FinCat& S = *sen.src;
  for (bool changed = true; changed;) {
    changed = false;
    for (int f = 0; f < S.n_arr(); ++f)
      for (std::size_t m = 0; m < rows[S.dst(f)].size(); ++m) {
        Subset p = preimage(sen.fmap[f], rows[S.dst(f)][m]);
        auto& r = rows[S.src(f)];
        if (std::find(r.begin(), r.end(), p) == r.end()) {
          r.push_back(p);
          changed = true;
        }
      }
  }
  Institution I{sen.src, sen, {}, {}, {}};
  for (int o = 0; o < S.n_obj(); ++o) {
    std::sort(rows[o].begin(), rows[o].end());
    auto ids = numbered("m" + std::to_string(o) + "_", static_cast<int>(rows[o].size()));
    I.mod.push_back(share(codiscrete_models ? codiscrete_category(ids) : discrete_category(ids)));
    // object order of the category is lexicographic in ids; keep rows aligned with it
    std::vector<Subset> aligned(rows[o].size());
    for (std::size_t m = 0; m < rows[o].size(); ++m) aligned[I.mod[o]->object_index(ids[m])] = rows[o][m];
    I.sat.push_back(aligned);
  }
  for (int f = 0; f < S.n_arr(); ++f) {
    const int a = S.src(f), b = S.dst(f);
    std::vector<int> omap;
    for (const auto& row : I.sat[b]) {
      Subset p = preimage(sen.fmap[f], row);
      omap.push_back(static_cast<int>(std::find(I.sat[a].begin(), I.sat[a].end(), p) - I.sat[a].begin()));
    }
    Functor M{I.mod[b], I.mod[a], omap, {}, Variance::covariant};
    for (const auto& ar : I.mod[b]->arrows) M.amap.push_back(I.mod[a]->hom(omap[ar.src], omap[ar.dst]).at(0));
    I.mod_map.push_back(M);
  }
  return I;
}

inline Institution random_institution(Rng& rng, int max_obj = 2, int max_nonid_arrows = 3, int max_carrier = 3,
                                      int max_models = 2) {
  CatRef sig = share(random_category(rng, max_obj, max_nonid_arrows));
  SetFunctor sen = random_set_functor(rng, sig, max_carrier);
  std::vector<std::vector<Subset>> rows(sig->n_obj());
  for (int o = 0; o < sig->n_obj(); ++o) {
    int k = uniform(rng, 0, max_models);
    for (int i = 0; i < k; ++i) {
      Subset r = random_subset(rng, sen.size(o));
      if (std::find(rows[o].begin(), rows[o].end(), r) == rows[o].end()) rows[o].push_back(r);
    }
  }
  return institution_from_rows(sen, rows, coin(rng));
}

/// One of a few small categories with at most 3 objects.
inline FinCat random_fiber(Rng& rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: return terminal_category("u");
    case 1: return discrete_category({"u", "v"});
    case 2: return CategoryBuilder().object("u").object("v").arrow("t", "u", "v").build();
    case 3: return codiscrete_category({"u", "v"});
    case 4: return idempotent_monoid("u");
    default: return free_category({"u", "v", "w"}, {{"s", "u", "v"}, {"t", "v", "w"}});
  }
}

/// Strict indexed category: non-identity transports are constant at object 0 of their target fiber,
/// or every fiber is one category and every transport is its identity.
inline IndexedCat random_strict_indexed(Rng& rng, Variance v, int max_obj = 3, int max_nonid_arrows = 5) {
  IndexedCat ix;
  ix.base = share(random_category(rng, max_obj, max_nonid_arrows));
  ix.variance = v;
  const FinCat& B = *ix.base;
  const bool uniform_fiber = coin(rng, 0.3);
  CatRef shared = share(random_fiber(rng));
  for (int c = 0; c < B.n_obj(); ++c) ix.fibers.push_back(uniform_fiber ? shared : share(random_fiber(rng)));
  for (int f = 0; f < B.n_arr(); ++f) {
    const CatRef& from = ix.fibers[ix.fiber_of(f, true)];
    const CatRef& to = ix.fibers[ix.fiber_of(f, false)];
    if (B.is_identity(f) || uniform_fiber) ix.transport.push_back(identity_functor(from));
    else ix.transport.push_back(constant_functor(from, to, 0));
  }
  return ix;
}

/// Pseudo indexed category over codiscrete fibers: transports (identities included) have random object maps,
/// and every coherence cell is the unique arrow between its endpoints.
inline IndexedCat random_pseudo_indexed(Rng& rng, Variance v, int max_obj = 3, int max_nonid_arrows = 5) {
  IndexedCat ix;
  ix.base = share(random_category(rng, max_obj, max_nonid_arrows));
  ix.variance = v;
  const FinCat& B = *ix.base;
  for (int c = 0; c < B.n_obj(); ++c) ix.fibers.push_back(share(codiscrete_category(numbered("u", uniform(rng, 1, 3)))));
  auto codiscrete_map = [&](const CatRef& from, const CatRef& to) {
    std::vector<int> om(from->n_obj());
    for (auto& o : om) o = uniform(rng, 0, to->n_obj() - 1);
    Functor F{from, to, om, {}, Variance::covariant};
    for (const auto& a : from->arrows) F.amap.push_back(to->hom(om[a.src], om[a.dst]).at(0));
    return F;
  };
  for (int f = 0; f < B.n_arr(); ++f)
    ix.transport.push_back(codiscrete_map(ix.fibers[ix.fiber_of(f, true)], ix.fibers[ix.fiber_of(f, false)]));
  auto unique_cell = [](const Functor& from, const Functor& to) {
    NatTrans t{from, to, {}};
    for (int o = 0; o < from.src->n_obj(); ++o) t.components.push_back(from.dst->hom(from.omap[o], to.omap[o]).at(0));
    return t;
  };
  const bool co = v == Variance::covariant;
  for (int c = 0; c < B.n_obj(); ++c)
    ix.coh_id.push_back(unique_cell(identity_functor(ix.fibers[c]), ix.transport[B.identity[c]]));
  for (int f = 0; f < B.n_arr(); ++f)
    for (int g = 0; g < B.n_arr(); ++g)
      if (B.dst(f) == B.src(g)) {
        Functor from = co ? compose(ix.transport[g], ix.transport[f]) : compose(ix.transport[f], ix.transport[g]);
        ix.coh_comp[{f, g}] = unique_cell(from, ix.transport[B.compose(g, f)]);
      }
  return ix;
}

inline bool has_nonidentity_cell(const IndexedCat& ix) {
  auto nontrivial = [](const NatTrans& t) {
    for (int c : t.components)
      if (!t.src.dst->is_identity(c)) return true;
    return false;
  };
  for (const auto& t : ix.coh_id)
    if (nontrivial(t)) return true;
  for (const auto& [k, t] : ix.coh_comp)
    if (nontrivial(t)) return true;
  return false;
}

}  // namespace insfin::gen
