#include "insfin/generate.hpp"
#include "insfin/groth.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace insfin;
using insfin::support::count_total_arrows;
using insfin::support::worked_example;

namespace {

IndexedCat constant_over(const CatRef& base, const CatRef& fiber, Variance v) {
  IndexedCat ix{base, {}, {}, v, {}, {}};
  for (int c = 0; c < base->n_obj(); ++c) ix.fibers.push_back(fiber);
  for (int f = 0; f < base->n_arr(); ++f) ix.transport.push_back(identity_functor(fiber));
  return ix;
}

}  // namespace

TEST(Groth, TerminalBaseGivesFiber) {
  CatRef d = share(free_category({"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}}));
  for (auto v : {Variance::contravariant, Variance::covariant}) {
    GrothCat g = groth(constant_over(share(terminal_category()), d, v));
    EXPECT_EQ(g.total->n_obj(), d->n_obj());
    EXPECT_EQ(g.total->n_arr(), d->n_arr());
    EXPECT_TRUE(validate_category(*g.total).ok());
  }
}

TEST(Groth, TerminalFiberGivesBase) {
  CatRef base = share(free_category({"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}}));
  GrothCat g = groth(constant_over(base, share(terminal_category()), Variance::contravariant));
  EXPECT_EQ(g.total->n_obj(), base->n_obj());
  EXPECT_EQ(g.total->n_arr(), base->n_arr());
  EXPECT_TRUE(validate_functor(g.projection).ok());
}

TEST(Groth, WorkedExample) {
  GrothCat g = groth(worked_example());
  const FinCat& T = *g.total;
  EXPECT_EQ(T.n_obj(), 3);
  int non_identity = 0;
  for (int a = 0; a < T.n_arr(); ++a) non_identity += !T.is_identity(a);
  EXPECT_EQ(non_identity, 1);
  int a = T.arrow_index("(f, id_x0 | x0 -> y)");
  ASSERT_GE(a, 0);
  EXPECT_EQ(T.objects[T.src(a)], "(c0, x0)");
  EXPECT_EQ(T.objects[T.dst(a)], "(c1, y)");
  EXPECT_TRUE(validate_category(T).ok());
}

TEST(Groth, StrictRandomInstancesAreCategories) {
  gen::Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    auto v = trial % 2 ? Variance::covariant : Variance::contravariant;
    IndexedCat ix = gen::random_strict_indexed(rng, v);
    ASSERT_TRUE(validate_indexed(ix).ok());
    GrothCat g = groth(ix);
    EXPECT_TRUE(validate_category(*g.total).ok());
    EXPECT_TRUE(validate_functor(g.projection).ok());
    EXPECT_EQ(static_cast<std::size_t>(g.total->n_arr()), count_total_arrows(ix));
  }
}

TEST(Groth, PseudoRandomInstancesAreCategories) {
  gen::Rng rng(23);
  int nontrivial = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto v = trial % 2 ? Variance::covariant : Variance::contravariant;
    IndexedCat ix = gen::random_pseudo_indexed(rng, v);
    ASSERT_TRUE(validate_indexed(ix).ok());
    nontrivial += gen::has_nonidentity_cell(ix);
    GrothCat g = groth(ix);
    EXPECT_TRUE(validate_category(*g.total).ok());
    EXPECT_TRUE(validate_functor(g.projection).ok());
  }
  EXPECT_GE(nontrivial, 10);
}

TEST(Groth, NonInvertibleCoherenceIsStructural) {
  CatRef base = share(terminal_category("c"));
  CatRef fib = share(arrow_category());
  IndexedCat ix{base, {fib}, {constant_functor(fib, fib, 1)}, Variance::contravariant, {}, {}};
  // α^c : 1 ⇒ F(id) with a non-invertible component f : 0 → 1
  ix.coh_id.push_back(NatTrans{identity_functor(fib), constant_functor(fib, fib, 1),
                               {fib->arrow_index("f"), fib->identity[1]}});
  ix.coh_comp[{0, 0}] = identity_nat(constant_functor(fib, fib, 1));
  EXPECT_EQ(validate_indexed(ix).status(), Status::structural_error);
  EXPECT_THROW(groth(ix), StructuralError);
}

TEST(GrothMap, IdentityTransformation) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    IndexedCat ix = gen::random_strict_indexed(rng, trial % 2 ? Variance::covariant : Variance::contravariant);
    GrothCat g = groth(ix);
    PseudoNat id;
    for (const auto& f : ix.fibers) id.components.push_back(identity_functor(f));
    EXPECT_EQ(groth_map(ix, g, ix, g, id), identity_functor(g.total));
  }
}

TEST(GrothMap, ConstantFibersActPointwise) {
  CatRef base = share(arrow_category());
  CatRef d1 = share(discrete_category({"u", "v"}));
  CatRef d2 = share(arrow_category());
  for (auto v : {Variance::contravariant, Variance::covariant}) {
    IndexedCat F = constant_over(base, d1, v), G = constant_over(base, d2, v);
    GrothCat Ft = groth(F), Gt = groth(G);
    Functor e{d1, d2, {0, 1}, {d2->identity[0], d2->identity[1]}, Variance::covariant};
    PseudoNat eta{{e, e}, {}};
    Functor m = groth_map(F, Ft, G, Gt, eta);
    EXPECT_TRUE(validate_functor(m).ok());
    EXPECT_EQ(compose(Gt.projection, m), Ft.projection);
    for (int a = 0; a < Ft.total->n_arr(); ++a) {
      auto [f, phi, x, y] = Ft.arrow_cell[a];
      auto [f2, phi2, x2, y2] = Gt.arrow_cell[m.amap[a]];
      EXPECT_EQ(f, f2);
      EXPECT_EQ(phi2, e.amap[phi]);
    }
  }
}

TEST(GrothMap, CompositionAndProjection) {
  // strict η, η' between identity-transport indexed categories built from one fiber each
  CatRef base = share(free_category({"a", "b", "c"}, {{"f", "a", "b"}, {"g", "b", "c"}}));
  CatRef A = share(arrow_category());
  CatRef D = share(discrete_category({"u", "v"}));
  CatRef T = share(terminal_category());
  for (auto v : {Variance::contravariant, Variance::covariant}) {
    IndexedCat F = constant_over(base, D, v), G = constant_over(base, A, v), H = constant_over(base, T, v);
    GrothCat Ft = groth(F), Gt = groth(G), Ht = groth(H);
    Functor e{D, A, {1, 0}, {A->identity[1], A->identity[0]}, Variance::covariant};
    Functor e2 = constant_functor(A, T, 0);
    PseudoNat eta{{e, e, e}, {}}, eta2{{e2, e2, e2}, {}}, pasted{{compose(e2, e), compose(e2, e), compose(e2, e)}, {}};
    Functor m1 = groth_map(F, Ft, G, Gt, eta), m2 = groth_map(G, Gt, H, Ht, eta2);
    EXPECT_EQ(compose(m2, m1), groth_map(F, Ft, H, Ht, pasted));
    EXPECT_EQ(compose(Gt.projection, m1), Ft.projection);
    EXPECT_EQ(compose(Ht.projection, m2), Gt.projection);
  }
}

TEST(GrothMap, FiberMismatchIsStructural) {
  CatRef base = share(terminal_category());
  CatRef d1 = share(discrete_category({"u", "v"}));
  IndexedCat F = constant_over(base, d1, Variance::contravariant);
  GrothCat Ft = groth(F);
  PseudoNat bad{{identity_functor(share(terminal_category()))}, {}};
  EXPECT_THROW(groth_map(F, Ft, F, Ft, bad), StructuralError);
}

TEST(Groth2Cell, IdentityModification) {
  CatRef base = share(arrow_category());
  CatRef A = share(arrow_category());
  IndexedCat F = constant_over(base, A, Variance::contravariant);
  GrothCat Ft = groth(F);
  PseudoNat id{{identity_functor(A), identity_functor(A)}, {}};
  Modification mu{id, id, {identity_nat(identity_functor(A)), identity_nat(identity_functor(A))}};
  NatTrans t = groth_2cell(F, Ft, F, Ft, mu);
  EXPECT_EQ(t, identity_nat(identity_functor(Ft.total)));
}

TEST(Groth2Cell, ChosenArrowOverOneObjectBase) {
  CatRef base = share(terminal_category("c"));
  CatRef one = share(terminal_category("u"));
  CatRef A = share(arrow_category());
  for (auto v : {Variance::contravariant, Variance::covariant}) {
    IndexedCat F = constant_over(base, one, v), G = constant_over(base, A, v);
    GrothCat Ft = groth(F), Gt = groth(G);
    PseudoNat eta{{constant_functor(one, A, 0)}, {}}, chi{{constant_functor(one, A, 1)}, {}};
    Modification mu{eta, chi, {NatTrans{eta.components[0], chi.components[0], {A->arrow_index("f")}}}};
    NatTrans t = groth_2cell(F, Ft, G, Gt, mu);
    ASSERT_EQ(t.components.size(), 1u);
    EXPECT_EQ(Gt.total->arrows[t.components[0]].id, "(id_c, f | 0 -> 1)");
    EXPECT_TRUE(validate_nat_trans(t).ok());
  }
}

TEST(Groth2Cell, StrictConstantFiberComponents) {
  CatRef base = share(arrow_category());
  CatRef D = share(discrete_category({"u", "v"}));
  CatRef A = share(arrow_category());
  IndexedCat F = constant_over(base, D, Variance::covariant), G = constant_over(base, A, Variance::covariant);
  GrothCat Ft = groth(F), Gt = groth(G);
  Functor k0 = constant_functor(D, A, 0), k1 = constant_functor(D, A, 1);
  PseudoNat eta{{k0, k0}, {}}, chi{{k1, k1}, {}};
  const int f = A->arrow_index("f");
  NatTrans m{k0, k1, {f, f}};
  NatTrans t = groth_2cell(F, Ft, G, Gt, Modification{eta, chi, {m, m}});
  EXPECT_TRUE(validate_nat_trans(t).ok());
  for (int c : t.components) EXPECT_EQ(Gt.arrow_cell[c][1], f);
}
