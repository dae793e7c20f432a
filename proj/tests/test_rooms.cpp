#include "insfin/generate.hpp"
#include "insfin/rooms.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace insfin;
using insfin::support::two_sig;

namespace {

Subset S(std::size_t n, std::vector<int> idx) { return subset_of_indices(n, idx); }

// Room morphisms counted by trying every σ, every object map and every arrow map.
std::size_t room_hom_oracle(const Room& a, const Room& b) {
  std::size_t count = 0;
  const FinCat& M = *a.models;
  const FinCat& N = *b.models;
  for_each_function(b.sentences.size(), a.sentences.size(), [&](const Function& sigma) {
    for_each_function(M.n_obj(), N.n_obj(), [&](const Function& om) {
      for_each_function(M.n_arr(), N.n_arr(), [&](const Function& am) {
        Functor mu{a.models, b.models, om, am, Variance::covariant};
        if (!validate_functor(mu).ok()) return true;
        for (int m = 0; m < M.n_obj(); ++m)
          for (std::size_t s = 0; s < b.sentences.size(); ++s)
            if (b.rows[om[m]][s] != a.rows[m][sigma[s]]) return true;
        ++count;
        return true;
      });
      return true;
    });
    return true;
  });
  return count;
}

}  // namespace

TEST(Rooms, StrictLawRejectsNonEmptyClosureOfEmptySet) {
  PiRoom src{{"q"}, ClosureOp::codiscrete(1)};
  PiRoom dst{{"p"}, ClosureOp::discrete(1)};
  Report strict = validate_piroom_morphism({0}, src, dst, PiRoomLaw::strict);
  EXPECT_EQ(strict.status(), Status::violations);
  ASSERT_FALSE(strict.items.empty());
  EXPECT_EQ(strict.items[0].location, "{}");
  EXPECT_TRUE(validate_piroom_morphism({0}, src, dst, PiRoomLaw::lax).ok());
}

TEST(Rooms, LaxLawMatchesStructurality) {
  gen::Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = gen::uniform(rng, 0, 3), m = gen::uniform(rng, 0, 3);
    auto pis_n = all_small_pirooms(n);
    PiRoom a = pis_n[gen::uniform(rng, 0, static_cast<int>(pis_n.size()) - 1)];
    while (a.sentences.size() != n) a = pis_n[gen::uniform(rng, 0, static_cast<int>(pis_n.size()) - 1)];
    auto pis_m = all_small_pirooms(m);
    PiRoom b = pis_m[gen::uniform(rng, 0, static_cast<int>(pis_m.size()) - 1)];
    while (b.sentences.size() != m) b = pis_m[gen::uniform(rng, 0, static_cast<int>(pis_m.size()) - 1)];
    Function sigma(m);
    for (auto& v : sigma) v = n == 0 ? 0 : gen::uniform(rng, 0, static_cast<int>(n) - 1);
    if (n == 0 && m > 0) continue;
    bool preimages_closed = true;
    for (const auto& c : a.closure.closed) preimages_closed &= b.closure.is_closed(preimage(sigma, c));
    EXPECT_EQ(validate_piroom_morphism(sigma, a, b, PiRoomLaw::lax).ok(), preimages_closed);
  }
}

TEST(Rooms, RowEquationViolationNamesModelAndSentence) {
  CatRef one = share(terminal_category("m"));
  Room a{{"x"}, one, {S(1, {0})}};
  Room b{{"y"}, one, {S(1, {})}};
  RoomMorphism f{{0}, identity_functor(one)};
  Report r = validate_room_morphism(f, a, b);
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].location, "(m, y)");
}

TEST(Rooms, EnumerationMatchesOracle) {
  auto rooms = all_small_rooms(2);
  gen::Rng rng(5);
  for (int t = 0; t < 150; ++t) {
    const Room& a = rooms[gen::uniform(rng, 0, static_cast<int>(rooms.size()) - 1)];
    const Room& b = rooms[gen::uniform(rng, 0, static_cast<int>(rooms.size()) - 1)];
    Guard g;
    auto v = enumerate_room_morphisms(a, b, g);
    EXPECT_EQ(v.size(), room_hom_oracle(a, b));
    for (const auto& f : v) EXPECT_TRUE(validate_room_morphism(f, a, b).ok());
  }
}

TEST(Rooms, SmallPiRoomsAreAllMooreFamilies) {
  std::vector<std::size_t> by_size(4, 0);
  for (const auto& p : all_small_pirooms(3)) ++by_size[p.sentences.size()];
  EXPECT_EQ(by_size, (std::vector<std::size_t>{1, 2, 7, 61}));
}

TEST(Rooms, CompositionAndIdentities) {
  auto rooms = all_small_rooms(1);
  Guard g;
  for (std::size_t i = 0; i < rooms.size(); i += 3)
    for (std::size_t j = 0; j < rooms.size(); j += 5)
      for (const auto& f : enumerate_room_morphisms(rooms[i], rooms[j], g)) {
        EXPECT_EQ(compose(f, identity_room_morphism(rooms[i])), f);
        EXPECT_EQ(compose(identity_room_morphism(rooms[j]), f), f);
        for (std::size_t k = 0; k < rooms.size(); k += 7)
          for (const auto& h : enumerate_room_morphisms(rooms[j], rooms[k], g))
            EXPECT_TRUE(validate_room_morphism(compose(h, f), rooms[i], rooms[k]).ok());
      }
}

TEST(Rooms, EncodeDecodeRoundTrip) {
  Institution I = two_sig();
  RoomDiagram d = encode(I);
  EXPECT_TRUE(validate_room_diagram(d).ok());
  EXPECT_EQ(decode(d), I);
  gen::Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    Institution R = gen::random_institution(rng);
    EXPECT_EQ(decode(encode(R)), R);
    PiInstitution J = gen::random_pi(rng);
    EXPECT_EQ(decode(encode(J)), J);
  }
}

TEST(Rooms, DecodeNamesOffendingArrow) {
  Institution I = two_sig();
  RoomDiagram d = encode(I);
  d.rooms[1].rows[1].reset(0);
  try {
    decode(d);
    FAIL() << "expected StructuralError";
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("h"), std::string::npos);
  }
}

TEST(Rooms, FAndGCommuteWithEncoding) {
  gen::Rng rng(17);
  for (int t = 0; t < 40; ++t) {
    Institution I = gen::random_institution(rng);
    EXPECT_EQ(apply_F(encode(I)), encode(derive_pi(I)));
    PiInstitution J = gen::random_pi(rng);
    EXPECT_EQ(decode(apply_G(encode(J))), derive_institution(J));
  }
}

TEST(Rooms, RoomFClosesUnderRows) {
  CatRef two = share(discrete_category({"m1", "m2"}));
  Room r{{"a", "b", "c"}, two, {S(3, {0, 1}), S(3, {1, 2})}};
  PiRoom p = room_F(r);
  EXPECT_EQ(p.closure.close(S(3, {0})), S(3, {0, 1}));
  EXPECT_EQ(p.closure.close(S(3, {0, 2})), S(3, {0, 1, 2}));
  EXPECT_EQ(p.closure.close(S(3, {})), S(3, {1}));
  Room g = room_G(p);
  EXPECT_EQ(g.models->n_obj(), 4);
  EXPECT_EQ(room_G(p, GMode::powerset).models->n_obj(), 8);
}

TEST(Rooms, FLeftOfGHoldsOnSmallGrid) {
  Guard g;
  GridResult r = room_adjunction_grid(false, 2, PiRoomLaw::lax, g);
  EXPECT_GT(r.pairs, 0u);
  EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST(Rooms, GLeftOfFFailsOnDiscretePair) {
  // p discrete on {a, b}; r has models m1 |= a and m2 |= b
  PiRoom p{{"a", "b"}, ClosureOp::discrete(2)};
  Room r{{"a", "b"}, share(discrete_category({"m1", "m2"})), {S(2, {0}), S(2, {1})}};
  Guard g;
  HomBijection h = room_G_left_of_F(p, r, PiRoomLaw::lax, g);
  EXPECT_EQ(h.left, 0u);
  EXPECT_EQ(h.right, 4u);
  EXPECT_FALSE(h.report.ok());
  EXPECT_TRUE(room_F_left_of_G(r, p, PiRoomLaw::lax, g).report.ok());
}

TEST(Realization, TwoSigMorphismsAndComorphisms) {
  Institution I = two_sig();
  for (bool co : {false, true}) {
    Guard g;
    std::size_t maps = 0, arrows = 0;
    Report r = realization_check(I, I, co, {identity_functor(I.sig)}, g, &maps, &arrows);
    EXPECT_TRUE(r.ok()) << (r.items.empty() ? "" : r.items[0].law);
    EXPECT_EQ(maps, arrows);
    EXPECT_GE(maps, 1u);
  }
}

TEST(Realization, RandomPairsAlongAllFunctors) {
  gen::Rng rng(23);
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    Institution a = gen::random_institution(rng, 2, 1, 2, 2);
    Institution b = gen::random_institution(rng, 2, 1, 2, 2);
    if (same_cat(a.sig, b.sig)) continue;
    Guard g;
    auto phis = enumerate_functors(a.sig, b.sig, g);
    for (bool co : {false, true}) {
      std::size_t maps = 0, arrows = 0;
      Report r = realization_check(a, b, co, phis, g, &maps, &arrows);
      EXPECT_TRUE(r.ok()) << (r.items.empty() ? "" : r.items[0].law);
      EXPECT_EQ(maps, arrows);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Realization, TerminalRoomsCountBaseFunctors) {
  CatRef a = share(arrow_category());
  CatRef b = share(preorder_category({"x", "y", "z"}, [](int i, int j) { return i <= j; }));
  Guard g;
  auto phis = enumerate_functors(a, b, g);
  for (bool co : {false, true}) {
    std::size_t maps = 0, arrows = 0;
    Report r = realization_check(terminal_room_institution(a), terminal_room_institution(b), co, phis, g, &maps, &arrows);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(maps, phis.size());
    EXPECT_EQ(arrows, phis.size());
  }
}

TEST(Realization, DiagramShapesMatchUnderOpposite) {
  std::vector<CatRef> cats = {share(arrow_category()), share(idempotent_monoid()),
                              share(codiscrete_category({"u", "v"})), share(discrete_category({"u", "v"}))};
  for (const auto& A : cats)
    for (const auto& C : cats) {
      Guard g;
      std::size_t n = 0;
      EXPECT_TRUE(diagram_shape_check(A, C, g, &n).ok());
      EXPECT_GT(n, 0u);
    }
}
