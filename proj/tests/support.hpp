#pragma once

#include "insfin/groth.hpp"
#include "insfin/instcore.hpp"

#include <random>

namespace insfin::support {

inline CatRef two_sig_category() {
  return share(CategoryBuilder().object("S1").object("S2").arrow("h", "S1", "S2").build());
}

/// Sig = {S1 -h-> S2}, Sen(S1) = {p}, Sen(S2) = {q, r}, Sen(h)(p) = q,
/// Mod(S2) = {m1, m2}, Mod(S1) = {n1}, n1 |= p, m1 |= q, r, m2 |= q.
inline Institution two_sig() {
  CatRef sig = two_sig_category();
  const int h = sig->arrow_index("h");
  SetFunctor sen{sig, {{"p"}, {"q", "r"}}, std::vector<Function>(sig->n_arr()), Variance::covariant};
  sen.fmap[sig->identity[0]] = {0};
  sen.fmap[sig->identity[1]] = {0, 1};
  sen.fmap[h] = {0};
  CatRef m1 = share(discrete_category({"n1"}));
  CatRef m2 = share(discrete_category({"m1", "m2"}));
  Institution I{sig, sen, {m1, m2}, std::vector<Functor>(sig->n_arr()), {}};
  I.mod_map[sig->identity[0]] = identity_functor(m1);
  I.mod_map[sig->identity[1]] = identity_functor(m2);
  I.mod_map[h] = constant_functor(m2, m1, 0);
  I.sat = {{subset_of_indices(1, {0})}, {subset_of_indices(2, {0, 1}), subset_of_indices(2, {0})}};
  return I;
}

/// Direct reading of the satisfaction condition over every (h, M', phi).
inline std::vector<std::tuple<std::string, std::string, std::string>> satisfaction_oracle(const Institution& I) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  const FinCat& S = *I.sig;
  for (const auto& h : S.arrows) {
    int hi = S.arrow_index(h.id);
    for (int m = 0; m < I.mod[h.dst]->n_obj(); ++m)
      for (std::size_t phi = 0; phi < I.sen.carriers[h.src].size(); ++phi) {
        bool a = I.sat[h.dst][m][I.sen.fmap[hi][phi]];
        bool b = I.sat[h.src][I.mod_map[hi].omap[m]][phi];
        if (a != b) out.emplace_back(h.id, I.mod[h.dst]->objects[m], I.sen.carriers[h.src][phi]);
      }
  }
  return out;
}

/// Γ** computed by scanning the satisfaction table, independent of ClosureOp.
inline Subset galois_closure_oracle(const std::vector<Subset>& rows, std::size_t n, const Subset& gamma) {
  Subset out(n);
  for (std::size_t phi = 0; phi < n; ++phi) {
    bool all = true;
    for (const auto& row : rows) {
      bool sat_gamma = true;
      for (std::size_t g = 0; g < n; ++g)
        if (gamma[g] && !row[g]) sat_gamma = false;
      if (sat_gamma && !row[phi]) all = false;
    }
    if (all) out.set(phi);
  }
  return out;
}

/// Random finite category: a random preorder on n objects (thin, always valid).
inline FinCat random_preorder(std::mt19937_64& rng, int n, double p = 0.4) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i) leq[i][i] = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) leq[i][j] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
  return preorder_category(ids, [&](int i, int j) { return leq[i][j]; });
}

/// Base c0 -f-> c1, fibers {x0, x1} and {y}, F(f) constant at x0.
inline IndexedCat worked_example() {
  CatRef base = share(CategoryBuilder().object("c0").object("c1").arrow("f", "c0", "c1").build());
  CatRef f0 = share(discrete_category({"x0", "x1"}));
  CatRef f1 = share(discrete_category({"y"}));
  IndexedCat ix{base, {f0, f1}, std::vector<Functor>(base->n_arr()), Variance::contravariant, {}, {}};
  ix.transport[base->identity[0]] = identity_functor(f0);
  ix.transport[base->identity[1]] = identity_functor(f1);
  ix.transport[base->arrow_index("f")] = constant_functor(f1, f0, f0->object_index("x0"));
  return ix;
}

// Independent count of total arrows: pairs (f, φ) with φ in the appropriate fiber hom-set.
inline std::size_t count_total_arrows(const IndexedCat& ix) {
  const FinCat& B = *ix.base;
  std::size_t n = 0;
  for (int f = 0; f < B.n_arr(); ++f) {
    const FinCat& Fc = *ix.fibers[B.src(f)];
    const FinCat& Fd = *ix.fibers[B.dst(f)];
    for (int x = 0; x < Fc.n_obj(); ++x)
      for (int y = 0; y < Fd.n_obj(); ++y) {
        if (ix.variance == Variance::contravariant) {
          for (const auto& a : Fc.arrows) n += a.src == x && a.dst == ix.transport[f].omap[y];
        } else {
          for (const auto& a : Fd.arrows) n += a.src == ix.transport[f].omap[x] && a.dst == y;
        }
      }
  }
  return n;
}

}  // namespace insfin::support
