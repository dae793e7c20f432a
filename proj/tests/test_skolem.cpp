#include "insfin/generate.hpp"
#include "insfin/skolem.hpp"

#include <gtest/gtest.h>

using namespace insfin;
using namespace insfin::sk;
using fol::FolModel;
using fol::FolSignature;

namespace {

const FolSignature kR{{}, {{"R", 1}}};
const FolSignature kRS{{}, {{"R", 1}, {"S", 1}}};
const FolSignature kE{{}, {{"E", 2}}};

FolModel r_model(std::size_t n, std::vector<int> r) { return {fol::numbered_carrier(n), {}, {subset_of_indices(n, r)}}; }

std::vector<FolModel> all_models(const FolSignature& s, std::size_t max_size) {
  Guard g(10'000'000);
  std::vector<FolModel> out;
  for (std::size_t n = 1; n <= max_size; ++n) fol::for_each_model(s, n, g, [&](const FolModel& m) { out.push_back(m); });
  return out;
}

// Evaluation by explicit assignment enumeration: sentences only, no shared env.
bool oracle_eval(const FolModel& m, const fol::Formula& f, std::map<int, int> env) {
  using fol::Op;
  std::function<int(const fol::Term&)> term = [&](const fol::Term& t) -> int {
    if (t.is_var()) return env.at(t.var);
    std::vector<int> a;
    for (const auto& x : t.args) a.push_back(term(x));
    return fol::apply_function(m, t.fn, a);
  };
  switch (f.op) {
    case Op::eq: return term(f.terms[0]) == term(f.terms[1]);
    case Op::rel: {
      std::vector<int> a;
      for (const auto& x : f.terms) a.push_back(term(x));
      return fol::holds_relation(m, f.sym, a);
    }
    case Op::neg: return !oracle_eval(m, f.sub[0], env);
    case Op::conj: return oracle_eval(m, f.sub[0], env) && oracle_eval(m, f.sub[1], env);
    case Op::disj: return oracle_eval(m, f.sub[0], env) || oracle_eval(m, f.sub[1], env);
    case Op::exists:
    case Op::forall: {
      int hits = 0;
      for (std::size_t x = 0; x < m.size(); ++x) {
        auto e = env;
        e[f.var] = static_cast<int>(x);
        hits += oracle_eval(m, f.sub[0], e);
      }
      return f.op == Op::exists ? hits > 0 : hits == static_cast<int>(m.size());
    }
    default: return false;
  }
}

fol::Formula random_formula(gen::Rng& rng, const FolSignature& s, int depth, int vars) {
  using namespace fol;
  auto term = [&]() {
    Term t = Term::variable(gen::uniform(rng, 0, vars - 1));
    if (!s.functions.empty() && gen::coin(rng, 0.3)) t = Term::apply(0, {t});
    return t;
  };
  if (depth == 0 || gen::coin(rng, 0.2)) {
    if (gen::coin(rng, 0.3)) return equals(term(), term());
    const int r = gen::uniform(rng, 0, static_cast<int>(s.relations.size()) - 1);
    std::vector<Term> args;
    for (int i = 0; i < s.relations[static_cast<std::size_t>(r)].arity; ++i) args.push_back(term());
    return relation(r, args);
  }
  switch (gen::uniform(rng, 0, 5)) {
    case 0: return negate(random_formula(rng, s, depth - 1, vars));
    case 1: return conj(random_formula(rng, s, depth - 1, vars), random_formula(rng, s, depth - 1, vars));
    case 2: return disj(random_formula(rng, s, depth - 1, vars), random_formula(rng, s, depth - 1, vars));
    case 3: return implies(random_formula(rng, s, depth - 1, vars), random_formula(rng, s, depth - 1, vars));
    case 4: return exists(gen::uniform(rng, 0, vars - 1), random_formula(rng, s, depth - 1, vars));
    default: return forall(gen::uniform(rng, 0, vars - 1), random_formula(rng, s, depth - 1, vars));
  }
}

fol::Formula close(fol::Formula f) {
  for (int v : fol::free_vars(f)) f = fol::forall(v, std::move(f));
  return f;
}

}  // namespace

TEST(FolEval, StatedExamples) {
  const FolModel m = r_model(2, {1});
  EXPECT_TRUE(fol::satisfies(m, fol::parse(kR, "∃x0.R(x0)")));
  EXPECT_TRUE(fol::fol_eval(m, fol::parse(kR, "x3 ≈ x3"), std::vector<int>{-1, -1, -1, 0}));
  EXPECT_TRUE(fol::satisfies(r_model(2, {}), fol::parse(kR, "¬∃x0.R(x0)")));
  EXPECT_THROW(fol::satisfies(m, fol::parse(kR, "R(x0)")), StructuralError);
}

TEST(FolEval, AgreesWithAssignmentOracle) {
  gen::Rng rng(11);
  const auto models = all_models(test_signature(), 2);
  for (int i = 0; i < 200; ++i) {
    const auto f = close(random_formula(rng, test_signature(), 4, 3));
    for (const auto& m : models) ASSERT_EQ(fol::satisfies(m, f), oracle_eval(m, f, {})) << fol::show(test_signature(), f);
  }
}

TEST(FolSyntax, ParseShowRoundTrip) {
  gen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto f = random_formula(rng, test_signature(), 4, 3);
    const std::string text = fol::show(test_signature(), f);
    EXPECT_EQ(fol::parse(test_signature(), text), f) << text;
  }
  EXPECT_EQ(fol::parse(kR, "exists x0. R(x0) & ~R(x0) -> x0 = x0"),
            fol::exists(0, fol::implies(fol::conj(fol::relation(0, {fol::Term::variable(0)}), fol::negate(fol::relation(0, {fol::Term::variable(0)}))),
                                        fol::equals(fol::Term::variable(0), fol::Term::variable(0)))));
  EXPECT_THROW(fol::parse(kR, "R(x0"), StructuralError);
  EXPECT_THROW(fol::parse(kR, "Q(x0)"), StructuralError);
}

TEST(Prenex, StatedExamples) {
  EXPECT_EQ(fol::show(kR, fol::prenex_nnf(fol::parse(kR, "¬∃x0.R(x0)"))), "∀x0.¬R(x0)");
  const auto atom = fol::parse(kR, "R(x2)");
  EXPECT_EQ(fol::prenex_nnf(atom), atom);
  const auto two = fol::prenex_nnf(fol::parse(kRS, "(∃x0.R(x0) ∧ ∃x1.S(x1))"));
  EXPECT_EQ(fol::quantifier_depth(two), 2);
  EXPECT_TRUE(fol::is_prenex_nnf(two));
  for (const auto& m : all_models(kRS, 3)) EXPECT_EQ(fol::satisfies(m, two), fol::satisfies(m, fol::parse(kRS, "(∃x0.R(x0) ∧ ∃x1.S(x1))")));
}

TEST(Prenex, SharedVariableNamesAreSeparated) {
  const auto f = fol::parse(kR, "(∃x0.R(x0) ∧ ∀x0.¬R(x0))");
  const auto p = fol::prenex_nnf(f);
  EXPECT_EQ(fol::show(kR, p), "∃x0.∀x1.(R(x0) ∧ ¬R(x1))");
}

TEST(Prenex, EquivalentOnAllSmallModels) {
  gen::Rng rng(3);
  const auto models = all_models(test_signature(), 3);
  ASSERT_EQ(models.size(), 2u + 16u + 216u);
  for (int i = 0; i < 150; ++i) {
    const auto f = random_formula(rng, test_signature(), 4, 3);
    const auto p = fol::prenex_nnf(f);
    ASSERT_TRUE(fol::is_prenex_nnf(p)) << fol::show(test_signature(), p);
    ASSERT_EQ(fol::free_vars(p), fol::free_vars(f));
    const auto cf = close(f), cp = close(p);
    for (const auto& m : models) ASSERT_EQ(fol::satisfies(m, cf), fol::satisfies(m, cp)) << fol::show(test_signature(), f);
  }
}

TEST(Skolemize, SingleExistentialGivesAConstant) {
  Guard g;
  const SkolemData sd = skolemize(kR, {fol::parse(kR, "∃x0.R(x0)")}, g);
  ASSERT_EQ(sd.fns.size(), 1u);
  EXPECT_EQ(sd.skolem_sig.functions.size(), 1u);
  EXPECT_EQ(sd.skolem_sig.functions[0].arity, 0);
  const std::string c = sd.fns[0].name;
  EXPECT_EQ(c.substr(0, 2), "F_");
  EXPECT_EQ(fol::show(sd.skolem_sig, sd.theory[0]), "((¬∃x0.R(x0)) ∨ R(" + c + "))");
}

TEST(Skolemize, QuantifierFreeUniverseAddsNothing) {
  Guard g;
  const FolSignature s{{{"c", 0}}, {{"R", 1}}};
  const SkolemData sd = skolemize(s, {fol::parse(s, "R(c)"), fol::parse(s, "¬R(c)")}, g);
  EXPECT_EQ(sd.skolem_sig, s);
  EXPECT_TRUE(sd.theory.empty());
}

TEST(Skolemize, NestedExistentialIsUnary) {
  Guard g;
  const SkolemData sd = skolemize(kE, {fol::parse(kE, "∀x0.∃x1.E(x0,x1)")}, g);
  ASSERT_EQ(sd.fns.size(), 1u);
  EXPECT_EQ(sd.skolem_sig.functions[0].arity, 1);
  const std::string f = sd.fns[0].name;
  EXPECT_EQ(fol::show(sd.skolem_sig, sd.theory[0]), "∀x0.((¬∃x1.E(x0,x1)) ∨ E(x0," + f + "(x0)))");
}

TEST(Skolemize, ArityIsTheNumberOfFreeVariables) {
  Guard g;
  const auto universe = fol::quantifier_depth_universe(test_signature(), 2, g);
  const SkolemData sd = skolemize(test_signature(), universe, g);
  EXPECT_GT(sd.fns.size(), 10u);
  std::set<std::string> names;
  for (std::size_t j = 0; j < sd.fns.size(); ++j) {
    EXPECT_EQ(static_cast<std::size_t>(sd.skolem_sig.functions[static_cast<std::size_t>(sd.function_of(j))].arity),
              fol::free_vars(sd.fns[j].existential).size());
    EXPECT_TRUE(names.insert(sd.fns[j].name).second);
  }
}

TEST(Skolemize, NamesAreDeterministicAndShared) {
  Guard g;
  const auto a = skolemize(kE, {fol::parse(kE, "∀x0.∃x1.E(x0,x1)")}, g);
  const auto b = skolemize(kE, {fol::parse(kE, "∀x5.∃x7.E(x5,x7)"), fol::parse(kE, "¬∃x0.∀x1.¬E(x0,x1)")}, g);
  ASSERT_EQ(b.fns.size(), 1u);  // both normalize to the same ∃-subformula
  EXPECT_EQ(a.fns[0].name, b.fns[0].name);
}

TEST(Skolemize, OversizedUniverseIsRefused) {
  Guard big;
  const auto universe = fol::quantifier_depth_universe(test_signature(), 2, big);
  Guard g(5);
  EXPECT_THROW(skolemize(test_signature(), universe, g), Refusal);
}

TEST(SkolemizeModel, LeastWitness) {
  Guard g;
  const SkolemData sd = skolemize(kR, {fol::parse(kR, "∃x0.R(x0)")}, g);
  const FolModel with = skolemize_model(r_model(2, {1}), sd);
  EXPECT_EQ(with.functions[0], std::vector<int>{1});
  const FolModel none = skolemize_model(r_model(2, {}), sd);
  EXPECT_EQ(none.functions[0], std::vector<int>{0});
  EXPECT_TRUE(check_theory(none, sd).ok());
  EXPECT_THROW(skolemize_model(FolModel{{}, {}, {Subset()}}, sd), Refusal);
}

TEST(SkolemizeModel, ReductRoundTripAndTheoryOnRandomModels) {
  Guard g;
  const auto universe = fol::quantifier_depth_universe(test_signature(), 2, g);
  const SkolemData sd = skolemize(test_signature(), universe, g);
  gen::Rng rng(50);
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = static_cast<std::size_t>(gen::uniform(rng, 1, 4));
    FolModel m{fol::numbered_carrier(n), {{}}, {gen::random_subset(rng, n)}};
    for (std::size_t x = 0; x < n; ++x) m.functions[0].push_back(gen::uniform(rng, 0, static_cast<int>(n) - 1));
    const FolModel ms = skolemize_model(m, sd);
    EXPECT_EQ(fol::reduct(ms, sd.tau), m);
    EXPECT_TRUE(check_theory(ms, sd).ok());
  }
}

TEST(SkolemizeModel, WitnessesAreLeastAccordingToOracle) {
  Guard g;
  const SkolemData sd = skolemize(kE, {fol::parse(kE, "∀x0.∃x1.E(x0,x1)")}, g);
  for (const auto& m : all_models(kE, 3)) {
    const FolModel ms = skolemize_model(m, sd);
    for (std::size_t x = 0; x < m.size(); ++x) {
      int want = 0;
      for (std::size_t y = m.size(); y-- > 0;)
        if (m.relations[0].test(x * m.size() + y)) want = static_cast<int>(y);
      EXPECT_EQ(ms.functions[0][x], want);
    }
  }
}

TEST(SkolemHull, StatedExamples) {
  Guard g;
  const SkolemData sd = skolemize(kR, {fol::parse(kR, "∃x0.R(x0)")}, g);
  const FolModel ms = skolemize_model(r_model(3, {1}), sd);  // c = 1
  EXPECT_EQ(skolem_hull(sd, ms, Subset(3)).inclusion, (Function{0, 1}));
  EXPECT_EQ(skolem_hull(sd, ms, full_subset(3)).model, ms);

  SkolemData idsd;
  idsd.base_sig = idsd.skolem_sig = FolSignature{{{"f", 1}}, {}};
  const FolModel id{fol::numbered_carrier(3), {{0, 1, 2}}, {}};
  EXPECT_EQ(skolem_hull(idsd, id, subset_of_indices(3, {2})).inclusion, (Function{2}));
  const FolModel succ{fol::numbered_carrier(3), {{1, 2, 2}}, {}};
  EXPECT_EQ(skolem_hull(idsd, succ, subset_of_indices(3, {0})).inclusion, (Function{0, 1, 2}));
}

TEST(BoundedTheory, StatedExamples) {
  const std::vector<fol::Formula> u{fol::parse(kR, "∃x0.R(x0)"), fol::parse(kR, "¬∃x0.R(x0)")};
  EXPECT_EQ(fol::bounded_theory(r_model(2, {1}), u), (std::vector<bool>{true, false}));
  EXPECT_TRUE(fol::bounded_theory(r_model(2, {1}), {}).empty());
}

TEST(SkolemAxioms, HoldOnTestSignatureUpToSizeThree) {
  Guard g(100'000'000);
  const auto universe = fol::quantifier_depth_universe(test_signature(), 2, g);
  const SkolemData sd = skolemize(test_signature(), universe, g);
  AxiomCounts counts;
  const Report r = check_skolem_axioms(sd, 3, g, &counts);
  EXPECT_TRUE(r.ok()) << (r.items.empty() ? "" : r.items[0].location + " " + r.items[0].law);
  EXPECT_EQ(counts.models, 234u);
  EXPECT_GT(counts.inclusion_pairs, counts.models);
  EXPECT_EQ(counts.hulls, 2u * 2 + 16u * 4 + 216u * 8);
}

TEST(SkolemAxioms, UnskolemizedUniverseIsCaught) {
  // ∀x R(x) has no ∃ position, so a hull can miss a counter-witness.
  Guard g;
  const SkolemData sd = skolemize(kR, {fol::parse(kR, "∀x0.R(x0)")}, g);
  const Report r = check_skolem_axioms(sd, 2, g);
  EXPECT_TRUE(r.has_law("skolem hull preserves the bounded theory"));
  EXPECT_TRUE(r.has_law("skolemization inclusions preserve the bounded theory"));
}

// ---------------------------------------------------------------------------
// Multialgebras

namespace {

const ma::MASignature kFM = ma::strict_and_multi_signature();
const ma::MASignature kFGM{{{"f", 1}, {"g", 1}}, {{"m", 1}}};

std::vector<ma::Multialgebra> ma_grid2(const ma::MASignature& s, ma::Mode mode = ma::Mode::wide) {
  Guard g(1'000'000);
  return ma_grid(s, 2, mode, g);
}

}  // namespace

TEST(MaEval, StatedExamples) {
  const auto s = ma::unary_multi_signature();
  const auto a = ma::fixture_a();
  EXPECT_TRUE(ma_satisfies(s, a, parse(s, "∃x0.∃x1.(m(x0) > x1 ∧ (x0 ≐ x0 ∧ ¬(x0 ≐ x1)))")));
  std::vector<int> env{0, 1};
  EXPECT_TRUE(ma_eval(s, a, parse(s, "m(x0) > x1"), env));
  env = {1, 0};
  EXPECT_FALSE(ma_eval(s, a, parse(s, "m(x0) > x1"), env));
  EXPECT_TRUE(ma_eval(s, a, parse(s, "x0 ≐ x0"), env));
  EXPECT_FALSE(ma_eval(s, a, parse(s, "m(x1) ≐ m(x1)"), env));  // m(a) is not a singleton
  EXPECT_TRUE(ma_eval(s, a, parse(s, "m(x1) > m(x0)"), env));   // {a,b} ⊇ {b}
  EXPECT_THROW(ma_satisfies(s, a, parse(s, "m(x0) > x1")), StructuralError);
}

TEST(MaFol, AlphaBetaExamples) {
  const auto s = ma::unary_multi_signature();
  const auto phi = ma_phi(s);
  EXPECT_EQ(show(s, ma_alpha(s, fol::parse(phi, "r_m(x0,x1)"))), "m(x0) > x1");
  EXPECT_EQ(ma_beta(s, ma::fixture_a()).relations[0], subset_of_indices(4, {0, 1, 3}));
  for (const auto& a : ma_grid2(s)) EXPECT_EQ(ma_beta_inverse(s, ma_beta(s, a)), a);
  for (const auto& a : ma_grid2(kFM)) EXPECT_EQ(ma_beta_inverse(kFM, ma_beta(kFM, a)), a);
}

TEST(MaFol, CompatibilityOnGrid) {
  Guard g(10'000'000);
  for (const auto& s : {ma::unary_multi_signature(), kFM}) {
    const auto universe = fol::quantifier_depth_universe(ma_phi(s), 2, g);
    const Report r = check_compatibility(s, ma_grid2(s), universe);
    EXPECT_TRUE(r.ok()) << r.items.size();
  }
}

TEST(Flatten, FootnotePatternForInclusion) {
  EXPECT_EQ(show(kFGM, flatten(kFGM, parse(kFGM, "f(m(x0)) > g(x1)"))), "∃x2.(m(x0) > x2 ∧ f(x2) ≐ g(x1))");
  EXPECT_EQ(show(kFGM, flatten(kFGM, parse(kFGM, "f(x0) > g(x1)"))), "f(x0) ≐ g(x1)");
  const auto flat = parse(kFGM, "∀x0.∃x1.(m(f(x0)) > x1 ∧ ¬(g(x1) ≐ x0))");
  EXPECT_EQ(flatten(kFGM, flat), flat);
}

TEST(Flatten, ExistentialFormIsWrongForSingletonEquality) {
  // ∃z(m(x) > z ∧ f(z) ≐ y) holds as soon as one element of m(x) maps to y; f(m(x)) ≐ y needs all of them.
  const auto lhs = parse(kFM, "f(m(x0)) ≐ x1");
  const auto exist_form = parse(kFM, "∃x2.(m(x0) > x2 ∧ f(x2) ≐ x1)");
  const auto flat = flatten(kFM, lhs);
  ASSERT_TRUE(alpha_preimage(kFM, flat).has_value());
  int disagreements = 0;
  for (const auto& a : ma_grid2(kFM))
    for (int x = 0; x < static_cast<int>(a.size()); ++x)
      for (int y = 0; y < static_cast<int>(a.size()); ++y) {
        std::vector<int> env{x, y, -1, -1, -1, -1};
        const bool truth = ma_eval(kFM, a, lhs, env);
        EXPECT_EQ(ma_eval(kFM, a, flat, env), truth);
        disagreements += ma_eval(kFM, a, exist_form, env) != truth;
      }
  EXPECT_GT(disagreements, 0);
}

TEST(Flatten, SemanticsPreservingOnGrid) {
  Guard g(10'000'000);
  for (const auto& s : {ma::unary_multi_signature(), kFM}) {
    const auto universe = ma_sentence_universe(s, 2, 2, g);
    EXPECT_GT(universe.size(), 100u);
    for (auto mode : {ma::Mode::narrow, ma::Mode::wide}) {
      const Report r = check_flatten(s, ma_grid2(s, mode), universe);
      EXPECT_TRUE(r.ok()) << (r.items.empty() ? "" : r.items[0].location + " " + r.items[0].witnesses[0]);
    }
  }
}

TEST(Transfer, LeastElementOfM) {
  const auto s = ma::unary_multi_signature();
  const auto phi = ma_phi(s);
  Guard g(100'000'000);
  const auto total = fol::parse(phi, "∀x0.∃x1.r_m(x0,x1)");
  const Transfer t = transfer_skolemization(s, {total, fol::negate(total)}, ma::Mode::wide, {}, 2, g);
  EXPECT_TRUE(t.report.ok()) << (t.report.items.empty() ? "" : t.report.items[0].location + " " + t.report.items[0].law);
  ASSERT_EQ(t.extended.strict_ops.size(), 2u);
  ASSERT_EQ(t.theory.size(), 2u);
  std::size_t unary = 0;
  while (unary < 2 && t.extended.strict_ops[unary].arity != 1) ++unary;
  ASSERT_LT(unary, 2u);
  const std::string f = t.extended.strict_ops[unary].name;
  std::vector<std::string> shown;
  for (const auto& ax : t.theory) shown.push_back(show(t.extended, ax));
  EXPECT_NE(std::find(shown.begin(), shown.end(), "∀x0.((¬∃x1.m(x0) > x1) ∨ m(x0) > " + f + "(x0))"), shown.end());
  for (const auto& a : ma_grid2(s)) {
    const auto ext = transported_skolemization(t, a);
    const std::size_t op = t.extended.index(f);
    for (std::size_t x = 0; x < a.size(); ++x) {
      const auto& mx = a.ops[0][x];
      const std::size_t want = mx.none() ? 0 : mx.find_first();
      EXPECT_EQ(ext.ops[op][x], subset_of_indices(a.size(), {static_cast<int>(want)}));
    }
  }
}

// A universe that is not closed under negation can break the inclusion axiom.
TEST(Transfer, OneSidedUniverseBreaksInclusion) {
  const auto s = ma::unary_multi_signature();
  Guard g(100'000'000);
  const Transfer t = transfer_skolemization(s, {fol::parse(ma_phi(s), "∀x0.∃x1.r_m(x0,x1)")}, ma::Mode::wide, {}, 2, g);
  EXPECT_TRUE(t.report.has_law("skolemization inclusions preserve the bounded theory"));
}

TEST(Transfer, QuantifierFreeUniverseIsTrivial) {
  const ma::MASignature s{{{"c", 0}}, {{"m", 1}}};
  const auto phi = ma_phi(s);
  Guard g(100'000'000);
  const Transfer t = transfer_skolemization(s, {fol::parse(phi, "r_m(c,c)"), fol::parse(phi, "¬r_m(c,c)")}, ma::Mode::wide, {}, 2, g);
  EXPECT_TRUE(t.report.ok());
  EXPECT_EQ(t.extended, s);
  EXPECT_TRUE(t.theory.empty());
  EXPECT_EQ(show(s, t.universe[0]), "m(c) > c");
}

TEST(Transfer, FullUniverseOnGridAndFixtureHull) {
  const auto s = ma::unary_multi_signature();
  Guard g(500'000'000);
  const auto universe = fol::quantifier_depth_universe(ma_phi(s), 2, g);
  const auto tests = ma_sentence_universe(s, 2, 1, g);
  const Transfer t = transfer_skolemization(s, universe, ma::Mode::wide, tests, 2, g);
  EXPECT_TRUE(t.report.ok()) << (t.report.items.empty() ? "" : t.report.items[0].location + " " + t.report.items[0].law);
  EXPECT_EQ(t.grid_size, 2u + 16u);
  EXPECT_GT(t.inclusion_pairs, 0u);
  EXPECT_EQ(t.extended.multi_ops, s.multi_ops);
  EXPECT_EQ(t.extended.strict_ops.size(), t.fol.fns.size());

  ma::Multialgebra a = ma::fixture_a();
  a.mode = ma::Mode::wide;
  const auto ext = transported_skolemization(t, a);
  const auto ext_fol = ma_beta(t.extended, ext);
  for (int seed = 0; seed < 2; ++seed) {
    const Subset closure = function_closure(ma_phi(t.extended), ext_fol, subset_of_indices(2, {seed}));
    const auto hull = transported_substructure(t.extended, ext, closure);
    ASSERT_TRUE(hull.has_value());
    std::vector<bool> want, got;
    for (const auto& f : t.universe) {
      want.push_back(ma_satisfies(s, a, f));
      got.push_back(ma_satisfies(s, ma_reduct(*hull, t.tau), f));
    }
    EXPECT_EQ(got, want);
  }
}

TEST(Transfer, NarrowModeBreaksBetaIsomorphism) {
  const auto s = ma::unary_multi_signature();
  Guard g(100'000'000);
  const Transfer t = transfer_skolemization(s, {fol::parse(ma_phi(s), "∀x0.∃x1.r_m(x0,x1)")}, ma::Mode::narrow, {}, 2, g);
  EXPECT_EQ(t.report.status(), Status::violations);
  EXPECT_TRUE(t.report.has_law("each beta_Sigma is an isomorphism"));
  EXPECT_FALSE(t.report.has_law("phi is fully faithful"));
}
