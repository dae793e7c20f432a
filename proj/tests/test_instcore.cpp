#include "insfin/generate.hpp"
#include "insfin/instcore.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace insfin;
using insfin::support::two_sig;

namespace {

Subset S(std::size_t n, std::vector<int> idx) { return subset_of_indices(n, idx); }

PiInstitution two_sig_pi_broken() {
  Institution I = two_sig();
  PiInstitution J{I.sig, I.sen, {ClosureOp::from_family(1, {S(1, {0})}), ClosureOp::discrete(2)}};
  return J;
}

}  // namespace

TEST(Institution, TwoSigIsValid) {
  Institution I = two_sig();
  EXPECT_TRUE(validate_institution(I).ok());
  EXPECT_TRUE(support::satisfaction_oracle(I).empty());
}

TEST(Institution, TwoSigBrokenNamesTriple) {
  Institution I = two_sig();
  I.sat[1][1].reset(0);  // m2 no longer satisfies q
  Report r = validate_institution(I);
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].location, "(h, m2, p)");
  EXPECT_EQ(r.items[0].law, "satisfaction condition");
}

TEST(Institution, DiscreteSignaturesAreVacuous) {
  CatRef sig = share(discrete_category({"A", "B"}));
  SetFunctor sen{sig, {{"x"}, {"y", "z"}}, {{0}, {0, 1}}, Variance::covariant};
  auto I = gen::institution_from_rows(sen, {{S(1, {0})}, {S(2, {1}), S(2, {})}});
  EXPECT_TRUE(validate_institution(I).ok());
}

TEST(Institution, ShapeMismatchIsStructural) {
  Institution I = two_sig();
  I.sat[1].pop_back();
  EXPECT_EQ(validate_institution(I).status(), Status::structural_error);
}

TEST(Institution, ValidatorMatchesOracleOnRandomMutations) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Institution I = gen::random_institution(rng);
    ASSERT_TRUE(validate_institution(I).ok());
    // flip one satisfaction bit where possible
    for (int s = 0; s < I.sig->n_obj(); ++s)
      if (!I.sat[s].empty() && I.sen.size(s) > 0) {
        I.sat[s][0].flip(gen::uniform(rng, 0, static_cast<int>(I.sen.size(s)) - 1));
        break;
      }
    auto oracle = support::satisfaction_oracle(I);
    Report r = validate_institution(I);
    EXPECT_EQ(r.items.size(), oracle.size());
  }
}

TEST(PiInstitution, DerivedTwoSigIsValidAndMatchesTable) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  EXPECT_TRUE(validate_pi(J).ok());
  const ClosureOp& c2 = J.closures[1];
  EXPECT_EQ(c2.close(S(2, {0})), S(2, {0}));
  EXPECT_EQ(c2.close(S(2, {1})), S(2, {0, 1}));
  EXPECT_EQ(c2.close(S(2, {})), S(2, {0}));
}

TEST(PiInstitution, StructuralityViolation) {
  Report r = validate_pi(two_sig_pi_broken());
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].location, "(h, {}, q)");
  EXPECT_EQ(r.items[0].law, "structurality");
}

TEST(PiInstitution, NonIntersectionClosedIsStructural) {
  Institution I = two_sig();
  PiInstitution J{I.sig, I.sen, {ClosureOp::discrete(1), ClosureOp{2, {S(2, {0}), S(2, {1}), S(2, {0, 1})}}}};
  EXPECT_EQ(validate_pi(J).status(), Status::structural_error);
}

TEST(PiInstitution, TranslationRoutesAgree) {
  // exhaustive route vs preimage route on random pairs of closures
  gen::Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = gen::uniform(rng, 0, 4), m = gen::uniform(rng, 1, 4);
    std::vector<Subset> g1, g2;
    for (int i = 0; i < 3; ++i) g1.push_back(gen::random_subset(rng, n)), g2.push_back(gen::random_subset(rng, m));
    ClosureOp a = ClosureOp::generated(n, g1), b = ClosureOp::generated(m, g2);
    Function fn(n);
    for (auto& v : fn) v = gen::uniform(rng, 0, static_cast<int>(m) - 1);
    bool exhaustive = translation_violations(a, b, fn).empty();
    bool preimages = true;
    for (const auto& t : b.closed) preimages &= a.is_closed(preimage(fn, t));
    EXPECT_EQ(exhaustive, preimages);
  }
}

TEST(Galois, Examples) {
  Institution I = two_sig();
  EXPECT_EQ(galois(I, 1, Side::sentences, S(2, {1})), S(2, {0}));
  EXPECT_EQ(galois(I, 1, Side::sentences, S(2, {})), S(2, {0, 1}));
  EXPECT_EQ(galois(I, 1, Side::models, S(2, {0})), S(2, {0, 1}));
}

TEST(Galois, ConnectionLawsOnRandomInstitutions) {
  gen::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Institution I = gen::random_institution(rng, 2, 3, 4, 3);
    PiInstitution J = derive_pi(I);
    for (int s = 0; s < I.sig->n_obj(); ++s) {
      const std::size_t n = I.sen.size(s);
      for_each_subset(n, [&](const Subset& x) {
        Subset xs = galois(I, s, Side::sentences, x);
        Subset xss = galois(I, s, Side::models, xs);
        EXPECT_TRUE(x.is_subset_of(xss));
        EXPECT_EQ(galois(I, s, Side::sentences, xss), xs);
        EXPECT_EQ(J.closures[s].close(x), xss);
        EXPECT_EQ(xss, support::galois_closure_oracle(I.sat[s], n, x));
        for_each_subset(n, [&](const Subset& y) {
          if (x.is_subset_of(y)) {
            EXPECT_TRUE(galois(I, s, Side::sentences, y).is_subset_of(xs));
          }
        });
      });
    }
  }
}

TEST(Derive, EmptyModelClassClosesEverything) {
  CatRef sig = share(terminal_category("A"));
  SetFunctor sen{sig, {{"x", "y"}}, {{0, 1}}, Variance::covariant};
  Institution I = gen::institution_from_rows(sen, {{}});
  PiInstitution J = derive_pi(I);
  for_each_subset(2, [&](const Subset& x) { EXPECT_EQ(J.closures[0].close(x), full_subset(2)); });
}

TEST(Derive, MinimalDerivedInstitution) {
  CatRef sig = share(terminal_category("A"));
  SetFunctor sen{sig, {{"a"}}, {{0}}, Variance::covariant};
  PiInstitution J{sig, sen, {ClosureOp::discrete(1)}};
  Institution I = derive_institution(J);
  ASSERT_EQ(I.mod[0]->n_obj(), 2);
  EXPECT_TRUE(validate_institution(I).ok());
  int full = I.mod[0]->object_index("{a}");
  int empty = I.mod[0]->object_index("{}");
  EXPECT_TRUE(I.sat[0][full].test(0));
  EXPECT_FALSE(I.sat[0][empty].test(0));
}

TEST(Derive, RoundTripOnRandomPi) {
  gen::Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    PiInstitution J = gen::random_pi(rng);
    ASSERT_TRUE(validate_pi(J).ok());
    Institution GJ = derive_institution(J);
    EXPECT_TRUE(validate_institution(GJ).ok());
    EXPECT_EQ(derive_pi(GJ), J);
  }
}

TEST(Derive, DerivedPiAlwaysValid) {
  gen::Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) EXPECT_TRUE(validate_pi(derive_pi(gen::random_institution(rng))).ok());
}

TEST(Maps, IdentitiesAreValid) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  EXPECT_TRUE(validate_map(identity_map(MapKind::ins_morphism, I), I, I).ok());
  EXPECT_TRUE(validate_map(identity_map(MapKind::ins_comorphism, I), I, I).ok());
  EXPECT_TRUE(validate_map(identity_map(MapKind::pi_morphism, J), J, J).ok());
  EXPECT_TRUE(validate_map(identity_map(MapKind::pi_comorphism, J), J, J).ok());
}

TEST(Maps, SwappedAlphaBreaksConsequence) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  InsMap m = identity_map(MapKind::pi_comorphism, J);
  m.alpha[1] = {1, 0};
  Report r = validate_map(m, J, J);
  EXPECT_EQ(r.status(), Status::violations);
  bool at_s2 = false;
  for (const auto& it : r.items)
    if (it.law == "consequence preservation" && it.location == "S2") at_s2 = true;
  EXPECT_TRUE(at_s2);
}

TEST(Maps, DirectionMismatchIsStructural) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  CatRef t = share(terminal_category("T"));
  SetFunctor one{t, {{"u", "v"}}, {{0, 1}}, Variance::covariant};
  PiInstitution K{t, one, {ClosureOp::discrete(2)}};
  // comorphism K -> J along T |-> S1 needs alpha: {u,v} -> {p}; supply {p} -> {u,v} instead
  InsMap m{MapKind::pi_comorphism, Functor{t, J.sig, {0}, {J.sig->identity[0]}, Variance::covariant}, {{0}}, {}};
  EXPECT_EQ(validate_map(m, K, J).status(), Status::structural_error);
  EXPECT_EQ(validate_map(m, K, J).items[0].law, "direction mismatch");
}

TEST(Maps, GThenFIsVerbatimAndValid) {
  gen::Rng rng(9);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    PiInstitution A = gen::random_pi(rng, 2, 2, 2), B = gen::random_pi(rng, 2, 2, 2);
    Guard g;
    for (auto kind : {MapKind::pi_morphism, MapKind::pi_comorphism}) {
      for (const auto& m : enumerate_pi_maps(kind, A, B, g)) {
        InsMap gm = map_on_derived_G(m, A, B);
        EXPECT_TRUE(validate_map(gm, derive_institution(A), derive_institution(B)).ok());
        EXPECT_EQ(map_on_derived_F(gm), m);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Maps, FOfValidInstitutionMapsIsValid) {
  gen::Rng rng(4);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Institution A = gen::random_institution(rng, 2, 2, 2, 2), B = gen::random_institution(rng, 2, 2, 2, 2);
    Guard g;
    for (auto kind : {MapKind::ins_morphism, MapKind::ins_comorphism})
      for (const auto& m : enumerate_ins_maps(kind, A, B, g)) {
        ASSERT_TRUE(validate_map(m, A, B).ok());
        EXPECT_TRUE(validate_map(map_on_derived_F(m), derive_pi(A), derive_pi(B)).ok());
        ++checked;
      }
  }
  EXPECT_GT(checked, 10);
}

TEST(Maps, TwoSigIdentityComorphismImage) {
  Institution I = two_sig();
  InsMap m = identity_map(MapKind::ins_comorphism, I);
  EXPECT_TRUE(validate_map(map_on_derived_F(m), derive_pi(I), derive_pi(I)).ok());
  EXPECT_EQ(map_on_derived_F(m), identity_map(MapKind::pi_comorphism, derive_pi(I)));
}

TEST(Maps, CompositionOfValidMapsIsValid) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  Guard g;
  auto ms = enumerate_pi_maps(MapKind::pi_comorphism, J, J, g);
  for (const auto& a : ms)
    for (const auto& b : ms) EXPECT_TRUE(validate_map(compose_maps(b, a), J, J).ok());
  auto is = enumerate_ins_maps(MapKind::ins_morphism, I, I, g);
  for (const auto& a : is)
    for (const auto& b : is) EXPECT_TRUE(validate_map(compose_maps(b, a), I, I).ok());
}

TEST(Adjunction, ComorphismHomSetsAgree) {
  Institution I = two_sig();
  PiInstitution J = derive_pi(I);
  Guard g;
  HomBijection hb = check_gf_adjunction(J, I, true, g);
  EXPECT_TRUE(hb.report.ok());
  EXPECT_EQ(hb.left, hb.right);
  EXPECT_GT(hb.left, 0u);
}

TEST(Adjunction, MorphismHomSetsAgreeForFLeftOfG) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Institution I = gen::random_institution(rng, 2, 2, 2, 2);
    PiInstitution J = gen::random_pi(rng, 2, 2, 2);
    Guard g;
    EXPECT_TRUE(check_gf_adjunction(J, I, false, g).report.ok());
    EXPECT_TRUE(check_gf_adjunction(J, I, true, g).report.ok());
  }
}

TEST(Adjunction, MorphismHomSetsDisagreeForGLeftOfF) {
  // one signature, sentences {a, b}; I has models {a} and {b}; J is the discrete closure
  CatRef sig = share(terminal_category("A"));
  SetFunctor sen{sig, {{"a", "b"}}, {{0, 1}}, Variance::covariant};
  Institution I = gen::institution_from_rows(sen, {{S(2, {0}), S(2, {1})}});
  PiInstitution J{sig, sen, {ClosureOp::discrete(2)}};
  Guard g;
  auto pi_side = enumerate_pi_maps(MapKind::pi_morphism, J, derive_pi(I), g);
  auto ins_side = enumerate_ins_maps(MapKind::ins_morphism, derive_institution(J), I, g);
  EXPECT_NE(pi_side.size(), ins_side.size());
}
