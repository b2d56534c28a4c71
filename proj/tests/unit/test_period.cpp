#include <gtest/gtest.h>

#include <random>

#include "ncp/period.hpp"

using namespace ncp;

namespace {

std::shared_ptr<const HochschildContext> context(const std::string& name, int w = 6) {
  return std::make_shared<const HochschildContext>(algebra_from_name(name), w);
}

std::vector<Cochain> two_cocycles(const HochschildContext& ctx) {
  std::vector<Cochain> out;
  for (const auto& k : rref(cochain_differential_matrix(ctx, 2)).kernel_basis)
    out.push_back(cochain_from_vector(ctx, 2, k));
  return out;
}

MCElement first_order(const Cochain& c, const Rational& s = Rational(1)) {
  ArtinLocalRing dual = ring_from_name("dual");
  return MCElement{dual, ring_multiple(dual, 1, c.scaled(s))};
}

const SparseMatrix* block(const PeriodClass& p, int from, int to) {
  for (const auto& b : p.blocks)
    if (b.from_degree == from && b.to_degree == to) return &b.matrix;
  return nullptr;
}

}  // namespace

TEST(FirstOrderPeriods, DualNumbersBlocks) {
  // HH_2 is spanned by x⊗[x|x], and the contraction with x·x ↦ 1 sends it
  // to x·1 = x, the second HH_0 basis vector; HH_{n+2} -> HH_n is 1 for n ≥ 1.
  FirstOrderPeriods p = first_order_period_matrix(build_truncated_polynomial_algebra(2), 0, 4);
  ASSERT_EQ(p.classes.size(), 1u);
  const PeriodClass& c = p.classes[0];
  for (const auto& b : c.blocks) EXPECT_EQ(b.t_exponent, -1);
  ASSERT_NE(block(c, 2, 0), nullptr);
  EXPECT_EQ(*block(c, 2, 0), SparseMatrix::from_dense({{Rational(0)}, {Rational(1)}}));
  EXPECT_EQ(*block(c, 3, 1), SparseMatrix::from_dense({{Rational(1)}}));
  EXPECT_EQ(*block(c, 4, 2), SparseMatrix::from_dense({{Rational(1)}}));
  EXPECT_FALSE(c.is_zero());
}

TEST(FirstOrderPeriods, BlocksSitAtMinusOne) {
  for (const char* name : {"trunc_poly:2", "trunc_poly:3", "path:a2", "matrix:2"}) {
    FirstOrderPeriods p = first_order_period_matrix(algebra_from_name(name), 0, 4);
    for (const auto& c : p.classes)
      for (const auto& b : c.blocks) {
        EXPECT_EQ(b.t_exponent, -1) << name;
        EXPECT_EQ(b.to_degree, b.from_degree - 2) << name;
      }
  }
}

TEST(FirstOrderPeriods, CoboundaryHasZeroPeriod) {
  auto ctx = context("trunc_poly:3");
  HomologyData hd = homology_data(ctx, 0, 4);
  SparseMatrix d1 = cochain_differential_matrix(*ctx, 1);
  for (int c = 0; c < d1.cols(); ++c)
    EXPECT_TRUE(period_class(hd, cochain_from_vector(*ctx, 2, d1.column(c))).is_zero());
}

TEST(Torelli, Ranks) {
  TorelliReport d = torelli_rank(build_truncated_polynomial_algebra(2), 0, 4);
  EXPECT_EQ(d.hh2_dim, 1);
  EXPECT_EQ(d.rank, 1);
  EXPECT_TRUE(d.injective);
  TorelliReport t = torelli_rank(build_truncated_polynomial_algebra(3), 0, 4);
  EXPECT_EQ(t.hh2_dim, 2);
  EXPECT_EQ(t.rank, 2);
  for (const char* name : {"Q", "path:a2", "matrix:2"}) {
    TorelliReport r = torelli_rank(algebra_from_name(name), 0, 4);
    EXPECT_EQ(r.hh2_dim, 0);
    EXPECT_TRUE(r.injective);
    EXPECT_NE(r.str().find("vacuous"), std::string::npos);
  }
}

TEST(VanDenBergh, PointAndMatrixAreIsomorphisms) {
  for (const char* name : {"Q", "matrix:2"}) {
    VdbReport r = vdb_duality_check(algebra_from_name(name), 0, {Rational(1)}, 0, 2);
    EXPECT_TRUE(r.all_iso()) << name << "\n" << r.str();
    EXPECT_EQ(r.degrees.at(0).rank, 1);
  }
}

TEST(VanDenBergh, DualNumbersAreNotCalabiYau) {
  // HH^0 = D is 2-dimensional while HH_1 is 1-dimensional.
  VdbReport r = vdb_duality_check(build_truncated_polynomial_algebra(2), 1, {Rational(1)}, 0, 1);
  EXPECT_FALSE(r.all_iso());
  EXPECT_EQ(r.degrees.at(0).cohomology_dim, 2);
  EXPECT_EQ(r.degrees.at(0).homology_dim, 1);
}

TEST(VanDenBergh, Errors) {
  EXPECT_THROW(vdb_duality_check(algebra_from_name("Q"), 0, {Rational(1)}, 0, 9), DegreeOutOfComputedRange);
  EXPECT_THROW(vdb_duality_check(algebra_from_name("Q"), 0, {Rational(1), Rational(0)}, 0, 1), std::invalid_argument);
}

TEST(Griffiths, FirstOrderClassesAreTransversal) {
  GriffithsReport g = griffiths_transversality_check(build_truncated_polynomial_algebra(2), 0, 4);
  EXPECT_TRUE(g.transversal);
  EXPECT_TRUE(g.formal);  // D does not degenerate at E1
  GriffithsReport p = griffiths_transversality_check(algebra_from_name("path:a2"), 0, 4);
  EXPECT_TRUE(p.transversal);
  EXPECT_FALSE(p.formal);
}

TEST(Griffiths, ArityOneClassViolates) {
  // x d/dx on Q[x]/(x^3) maps HH_1 -> HH_0 nontrivially: a shift by one.
  auto ctx = context("trunc_poly:3");
  HomologyData hd = homology_data(ctx, 0, 4);
  Cochain euler = Cochain::basis({1}, 1);
  euler.add({2}, 2, Rational(2));
  PeriodClass c = period_class(hd, euler, "euler");
  EXPECT_FALSE(c.is_zero());
  GriffithsReport g = griffiths_transversality_check({c}, true);
  EXPECT_FALSE(g.transversal);
  EXPECT_FALSE(g.violations.empty());
}

TEST(HomologyData, RejectsRelativeContext) {
  auto rel = std::make_shared<const HochschildContext>(HochschildContext::relative(algebra_from_name("path:a2"), 6));
  EXPECT_THROW(homology_data(rel, 0, 4), std::invalid_argument);
}

TEST(LaurentOps, ExpLogRoundTrip) {
  auto ctx = context("trunc_poly:2");
  ArtinLocalRing e3 = ring_from_name("eps^3");
  OperatorCache oc(*ctx);
  LaurentOp a;
  a.valid = 4;
  a.parts[{-1, 1}] = oc.contraction(Cochain::basis({1, 1}, 0), 0, 4);
  a.parts[{0, 2}] = oc.homotopy(Cochain::basis({1, 1}, 1), 0, 4);
  LaurentOp e = laurent_exp(e3, *ctx, a);
  LaurentOp back = laurent_log(e3, *ctx, e);
  LaurentOp diff = back.restricted(2);
  diff.axpy(Rational(-1), a.restricted(2));
  EXPECT_TRUE(diff.is_zero()) << describe_nonzero(e3, diff);
}

TEST(SolveCommutator, RecoversPlantedSolution) {
  auto ctx = context("trunc_poly:3", 7);
  ArtinLocalRing q = ring_from_name("dual");
  const int top = 5;
  LaurentOp d = periodic_differential(*ctx, q, top);
  OperatorCache oc(*ctx);
  LaurentOp x;
  x.valid = top;
  x.parts[{-1, 0}] = oc.contraction(Cochain::basis({1, 2}, 0), 0, top);
  LaurentOp w = laurent_compose(q, d, x);
  w.axpy(Rational(-1), laurent_compose(q, x, d));
  ASSERT_FALSE(w.is_zero());
  LaurentOp y;
  ASSERT_TRUE(solve_commutator(*ctx, w, 0, 0, -1, -1, -1, 0, y));
  LaurentOp check = laurent_compose(q, d, y);
  check.axpy(Rational(-1), laurent_compose(q, y, d));
  check.axpy(Rational(-1), w);
  EXPECT_TRUE(check.restricted(w.valid).is_zero()) << describe_nonzero(q, check);
}

TEST(Trivialization, EveryFirstOrderDeformationOfFiveAlgebras) {
  for (const char* name : {"Q", "trunc_poly:2", "trunc_poly:3", "path:a2", "matrix:2"}) {
    auto ctx = context(name);
    OperatorCache oc(*ctx);
    for (const auto& c : two_cocycles(*ctx)) {
      MCElement x = first_order(c);
      Trivialization t = trivialize_periodic(*ctx, x, {-6, 6});
      ASSERT_TRUE(t.found) << name << " " << t.witness;
      EXPECT_TRUE(t.verified) << name;
      // Negative part of the ε coefficient against -(1/t) I_x.
      LaurentOp neg = t.a.component(1);
      for (auto it = neg.parts.begin(); it != neg.parts.end();)
        it = it->first.first >= 0 ? neg.parts.erase(it) : std::next(it);
      LaurentOp seed;
      seed.valid = t.top;
      seed.parts[{-1, 0}] = oc.contraction(c, 0, t.top);
      neg.axpy(Rational(1), seed);
      if (!neg.is_zero()) {
        LaurentOp h;
        EXPECT_TRUE(solve_commutator(*ctx, neg, 1, 1, -6, -1, -6, 0, h)) << name;
      }
    }
  }
}

TEST(Trivialization, SeedsOnDualNumbersAndCubic) {
  auto d = context("trunc_poly:2");
  Trivialization td = trivialize_periodic(*d, first_order(Cochain::basis({1, 1}, 0)), {-6, 6});
  ASSERT_EQ(td.steps.size(), 1u);
  EXPECT_TRUE(td.steps[0].bare_seed_closes);
  auto c = context("trunc_poly:3");
  for (const auto& rep : first_order_period_matrix(homology_data(c, 0, 4)).hh2_reps) {
    Trivialization t = trivialize_periodic(*c, first_order(rep), {-6, 6});
    ASSERT_TRUE(t.found);
    EXPECT_FALSE(t.steps[0].bare_seed_closes);
    EXPECT_TRUE(t.steps[0].homotopy_seed_closes);
  }
}

TEST(Trivialization, HigherOrderOverEpsCubed) {
  auto ctx = context("trunc_poly:3");
  ArtinLocalRing e3 = ring_from_name("eps^3");
  for (const auto& rep : first_order_period_matrix(homology_data(ctx, 0, 4)).hh2_reps) {
    LiftResult r = lift_order_by_order(*ctx, first_order(rep), e3);
    ASSERT_TRUE(r.lifted);
    Trivialization t = trivialize_periodic(*ctx, r.lift, {-6, 6});
    EXPECT_TRUE(t.found) << t.witness;
    EXPECT_TRUE(t.verified);
  }
}

TEST(Trivialization, RejectsNonMaurerCartan) {
  auto ctx = context("trunc_poly:3");
  EXPECT_THROW(trivialize_periodic(*ctx, first_order(Cochain::basis({1, 2}, 0))), NotMaurerCartan);
}

TEST(Ptd, NegativeBlocksMatchPeriodMatrix) {
  for (const char* name : {"trunc_poly:2", "trunc_poly:3"}) {
    auto ctx = context(name);
    HomologyData hd = homology_data(ctx, 0, 4);
    FirstOrderPeriods fp = first_order_period_matrix(hd);
    for (size_t j = 0; j < fp.hh2_reps.size(); ++j) {
      PTD p = period_map_artin(*ctx, first_order(fp.hh2_reps[j]), {-6, 6});
      EXPECT_TRUE(p.reduction_trivial);
      auto nb = ptd_negative_blocks(hd, p);
      ASSERT_EQ(nb.size(), 1u);
      ASSERT_EQ(nb[0].blocks.size(), fp.classes[j].blocks.size());
      for (size_t b = 0; b < nb[0].blocks.size(); ++b)
        EXPECT_EQ(nb[0].blocks[b].matrix, fp.classes[j].blocks[b].matrix) << name;
    }
  }
}

TEST(Ptd, GaugeEquivalentDeformationsAreIsomorphic) {
  auto ctx = context("trunc_poly:2");
  Cochain f = Cochain::basis({1, 1}, 0);
  PTD p = period_map_artin(*ctx, first_order(f), {-6, 6});
  EXPECT_TRUE(ptd_isomorphic(*ctx, p, p).isomorphic);
  // f + ∂h with h(x) = 1.
  Cochain g = f;
  g.add({1, 1}, 1, Rational(2));
  PtdIsoResult r = ptd_isomorphic(*ctx, p, period_map_artin(*ctx, first_order(g), {-6, 6}));
  EXPECT_TRUE(r.isomorphic) << r.witness;
}

TEST(Ptd, DistinctClassesAreNotIsomorphic) {
  auto ctx = context("trunc_poly:2");
  Cochain f = Cochain::basis({1, 1}, 0);
  PTD p = period_map_artin(*ctx, first_order(f), {-6, 6});
  for (const Rational& s : {Rational(2), Rational(0), Rational(-1)}) {
    PtdIsoResult r = ptd_isomorphic(*ctx, p, period_map_artin(*ctx, first_order(f, s), {-6, 6}));
    EXPECT_FALSE(r.isomorphic);
    EXPECT_EQ(r.failed_level, 1);
    EXPECT_FALSE(r.witness.empty());
  }
}

TEST(Ptd, CubicClassesSeparate) {
  auto ctx = context("trunc_poly:3");
  auto reps = first_order_period_matrix(homology_data(ctx, 0, 4)).hh2_reps;
  ASSERT_EQ(reps.size(), 2u);
  PTD a = period_map_artin(*ctx, first_order(reps[0]), {-6, 6});
  PTD b = period_map_artin(*ctx, first_order(reps[1]), {-6, 6});
  EXPECT_FALSE(ptd_isomorphic(*ctx, a, b).isomorphic);
  EXPECT_TRUE(ptd_isomorphic(*ctx, b, b).isomorphic);
}
