#include <gtest/gtest.h>

#include <random>

#include "ncp/deform.hpp"

using namespace ncp;

namespace {

// D = Q[x]/(x^2), context basis {1, x}.
struct DualNumbersFixture : ::testing::Test {
  HochschildContext ctx{build_truncated_polynomial_algebra(2), 6};
  ArtinLocalRing dual = ring_from_name("dual");
  ArtinLocalRing e3 = ring_from_name("eps^3");
  // x·x ↦ 1, the class spanning HH^2.
  Cochain f = Cochain::basis({1, 1}, 0);
  // h(x) = 1.
  Cochain h = Cochain::basis({1}, 0);
};

std::vector<Cochain> two_cocycles(const HochschildContext& ctx) {
  std::vector<Cochain> out;
  for (const auto& k : rref(cochain_differential_matrix(ctx, 2)).kernel_basis)
    out.push_back(cochain_from_vector(ctx, 2, k));
  return out;
}

Cochain random_combination(const std::vector<Cochain>& basis, std::mt19937& rng) {
  std::uniform_int_distribution<int> u(-3, 3);
  Cochain c;
  for (const auto& b : basis) c.axpy(Rational(u(rng)), b);
  return c;
}

SparseMatrix truncation_map(const ArtinLocalRing& from, const ArtinLocalRing& to) {
  SparseMatrix m(to.dim(), from.dim());
  for (int i = 0; i < to.dim(); ++i) m.set(i, i, Rational(1));
  return m;
}

}  // namespace

TEST_F(DualNumbersFixture, ResidualOfZeroAndOfCocycles) {
  EXPECT_TRUE(mc_residual(ctx, MCElement{dual, RCochain(2)}).is_zero());
  for (const auto& c : two_cocycles(ctx))
    EXPECT_TRUE(mc_residual(ctx, MCElement{dual, ring_multiple(dual, 1, c)}).is_zero());
}

TEST(MaurerCartan, NonCocycleHasResidual) {
  HochschildContext ctx(build_truncated_polynomial_algebra(3), 5);
  ArtinLocalRing dual = ring_from_name("dual");
  // g(x, x^2) = 1 has ∂g(x,x,x) = 1.
  MCElement x{dual, ring_multiple(dual, 1, Cochain::basis({1, 2}, 0))};
  EXPECT_FALSE(is_maurer_cartan(ctx, x));
  EXPECT_THROW(deform_algebra(ctx, x), NotMaurerCartan);
  EXPECT_THROW(gauge_equivalent(ctx, x, x), NotMaurerCartan);
}

TEST_F(DualNumbersFixture, SecondOrderEquationOverEpsCubed) {
  // For φ normalized of arity 2 on D, [φ,φ](x,x,x) = 2(φ(φ(x,x),x) - φ(x,φ(x,x)))
  // and both terms equal b·φ(x,x) where b is the x-coefficient of φ(x,x):
  // the hand-solved second-order correction is 0.
  Cochain phi = f;
  phi.add({1, 1}, 1, Rational(-2));
  for (const Cochain& c : {f, phi}) {
    MCElement x{e3, ring_multiple(e3, 1, c)};
    EXPECT_TRUE(mc_residual(ctx, x).is_zero());
    LiftResult r = lift_order_by_order(ctx, MCElement{dual, ring_multiple(dual, 1, c)}, e3);
    ASSERT_TRUE(r.lifted);
    EXPECT_EQ(r.level, 2);
    EXPECT_EQ(r.lift.value, x.value);
    EXPECT_TRUE(r.obstruction.empty());
  }
}

TEST_F(DualNumbersFixture, GaugeByZeroIsIdentity) {
  MCElement x{dual, ring_multiple(dual, 1, f)};
  EXPECT_EQ(gauge_act(ctx, GaugeElement{dual, RCochain(2)}, x).value, x.value);
}

TEST_F(DualNumbersFixture, FirstOrderGaugeIsTranslationByBoundary) {
  // e^{εh}·(εf) = εf - ε∂h with ∂h(x,x) = x h(x) - h(x^2) + h(x) x = 2x.
  MCElement x{dual, ring_multiple(dual, 1, f)};
  MCElement y = gauge_act(ctx, GaugeElement{dual, ring_multiple(dual, 1, h)}, x);
  Cochain expect = f;
  expect.add({1, 1}, 1, Rational(-2));
  EXPECT_EQ(y.value, ring_multiple(dual, 1, expect));
  GaugeSearch s = gauge_equivalent(ctx, x, y);
  ASSERT_TRUE(s.alpha.has_value());
  EXPECT_EQ(gauge_act(ctx, *s.alpha, x).value, y.value);
}

TEST_F(DualNumbersFixture, SelfEquivalenceAcceptsZero) {
  MCElement x{dual, ring_multiple(dual, 1, f)};
  GaugeSearch s = gauge_equivalent(ctx, x, x);
  ASSERT_TRUE(s.alpha.has_value());
  EXPECT_EQ(gauge_act(ctx, *s.alpha, x).value, x.value);
}

TEST_F(DualNumbersFixture, NonBoundaryDifferenceIsNotEquivalent) {
  GaugeSearch s = gauge_equivalent(ctx, MCElement{dual, RCochain(2)}, MCElement{dual, ring_multiple(dual, 1, f)});
  EXPECT_FALSE(s.alpha.has_value());
  EXPECT_EQ(s.failed_level, 1);
  EXPECT_FALSE(s.detail.empty());
}

TEST_F(DualNumbersFixture, GaugePreservesMaurerCartanOverEpsCubed) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int it = 0; it < 20; ++it) {
    GaugeElement al{e3, RCochain(3)};
    MCElement x{e3, RCochain(3)};
    for (int k = 1; k < 3; ++k) {
      al.value.comps[static_cast<size_t>(k)].add({1}, 0, Rational(u(rng)));
      al.value.comps[static_cast<size_t>(k)].add({1}, 1, Rational(u(rng)));
      x.value.comps[static_cast<size_t>(k)].add({1, 1}, 0, Rational(u(rng)));
      x.value.comps[static_cast<size_t>(k)].add({1, 1}, 1, Rational(u(rng)));
    }
    ASSERT_TRUE(is_maurer_cartan(ctx, x));
    MCElement y = gauge_act(ctx, al, x);
    EXPECT_TRUE(mc_residual(ctx, y).is_zero());
    GaugeSearch s = gauge_equivalent(ctx, x, y);
    ASSERT_TRUE(s.alpha.has_value());
    EXPECT_EQ(gauge_act(ctx, *s.alpha, x).value, y.value);
  }
}

TEST_F(DualNumbersFixture, DeformationHasExpectedStructureConstants) {
  // Q[x, ε]/(x^2 - ε, ε^2): vectors of A⊗R use a + 2k.
  AlgebraOverArtin a = deform_algebra(ctx, MCElement{dual, ring_multiple(dual, 1, f)});
  const SparseVec one = SparseVec::unit(0), x = SparseVec::unit(1), eps = SparseVec::unit(2);
  EXPECT_EQ(a.multiply(one, one), one);
  EXPECT_EQ(a.multiply(one, x), x);
  EXPECT_EQ(a.multiply(x, one), x);
  EXPECT_EQ(a.multiply(x, x), eps);
  EXPECT_EQ(a.multiply(x, eps), SparseVec::unit(3));
  EXPECT_TRUE(validate_curved_ainf(ctx, a).valid());
  EXPECT_EQ(a.reduction.mult, ctx.algebra().mult);
}

TEST_F(DualNumbersFixture, TrivialDeformationIsTensorProduct) {
  AlgebraOverArtin a = deform_algebra(ctx, MCElement{dual, RCochain(2)});
  EXPECT_TRUE(a.multiply(SparseVec::unit(1), SparseVec::unit(1)).empty());
  EXPECT_TRUE(validate_curved_ainf(ctx, a).valid());
}

TEST_F(DualNumbersFixture, RandomFirstOrderDeformationsValidate) {
  std::mt19937 rng(5);
  auto basis = two_cocycles(ctx);
  for (int it = 0; it < 20; ++it) {
    MCElement x{dual, ring_multiple(dual, 1, random_combination(basis, rng))};
    AlgebraOverArtin a = deform_algebra(ctx, x);
    EXPECT_TRUE(validate_curved_ainf(ctx, a).valid()) << validate_curved_ainf(ctx, a).str();
    EXPECT_EQ(mc_from_deformation(ctx, a).value, x.value);
  }
}

TEST_F(DualNumbersFixture, ProductsRoundTrip) {
  std::vector<std::vector<SparseVec>> prod(2, std::vector<SparseVec>(2));
  prod[0][0] = SparseVec::unit(0);
  prod[0][1] = prod[1][0] = SparseVec::unit(1);
  prod[1][1] = SparseVec::unit(2);
  AlgebraOverArtin a = deformation_from_products(ctx, dual, prod);
  EXPECT_EQ(mc_from_deformation(ctx, a).value, ring_multiple(dual, 1, f));
}

TEST_F(DualNumbersFixture, BrokenStructureIsRejected) {
  AlgebraOverArtin a = deform_algebra(ctx, MCElement{dual, ring_multiple(dual, 1, f)});
  // x·x = 1 modulo ε no longer reduces to D.
  a.structure.comps[0].add({1, 1}, 0, Rational(1));
  EXPECT_FALSE(validate_curved_ainf(ctx, a).valid());
  EXPECT_THROW(mc_from_deformation(ctx, a), NotMaurerCartan);
}

TEST_F(DualNumbersFixture, GaugeCommutesWithConjugation) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> u(-3, 3);
  auto basis = two_cocycles(ctx);
  for (int it = 0; it < 20; ++it) {
    MCElement x{dual, ring_multiple(dual, 1, random_combination(basis, rng))};
    Cochain a1;
    a1.add({1}, 0, Rational(u(rng)));
    a1.add({1}, 1, Rational(u(rng)));
    GaugeElement al{dual, ring_multiple(dual, 1, a1)};
    std::string w;
    EXPECT_TRUE(same_structure_constants(deform_algebra(ctx, gauge_act(ctx, al, x)),
                                         conjugate_structure(ctx, deform_algebra(ctx, x), al), 3, &w))
        << w;
  }
}

TEST_F(DualNumbersFixture, DeformedMixedComplex) {
  DeformedMixedComplex zero(ctx, MCElement{dual, RCochain(2)}, 5);
  EXPECT_TRUE(zero.lie_part().is_zero());
  MCElement x{dual, ring_multiple(dual, 1, f)};
  DeformedMixedComplex dm(ctx, x, 5);
  std::string w;
  EXPECT_TRUE(dm.square_zero(&w)) << w;
  EXPECT_TRUE(dm.connes_anticommutes(&w)) << w;
  EXPECT_TRUE(dm.reduces_to_undeformed());
  EXPECT_FALSE(dm.lie_part().is_zero());
}

TEST_F(DualNumbersFixture, ConjugationIdentityOverEpsCubed) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> u(-2, 2);
  for (int it = 0; it < 5; ++it) {
    GaugeElement al{e3, RCochain(3)};
    MCElement x{e3, RCochain(3)};
    for (int k = 1; k < 3; ++k) {
      al.value.comps[static_cast<size_t>(k)].add({1}, 0, Rational(u(rng)));
      x.value.comps[static_cast<size_t>(k)].add({1, 1}, static_cast<int>(it % 2), Rational(u(rng)));
    }
    std::string w;
    EXPECT_TRUE(conjugation_identity(ctx, al, x, 4, &w)) << w;
    EXPECT_TRUE(DeformedMixedComplex(ctx, x, 5).square_zero(&w)) << w;
  }
}

TEST_F(DualNumbersFixture, BaseChangeCommutesWithOperations) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> u(-3, 3);
  SparseMatrix down = truncation_map(e3, dual);
  for (int it = 0; it < 5; ++it) {
    GaugeElement al{e3, RCochain(3)};
    MCElement x{e3, RCochain(3)};
    for (int k = 1; k < 3; ++k) {
      al.value.comps[static_cast<size_t>(k)].add({1}, u(rng) > 0 ? 0 : 1, Rational(u(rng)));
      x.value.comps[static_cast<size_t>(k)].add({1, 1}, 0, Rational(u(rng)));
    }
    EXPECT_EQ(base_change(gauge_act(ctx, al, x), dual, down).value,
              gauge_act(ctx, base_change(al, dual, down), base_change(x, dual, down)).value);
    EXPECT_EQ(map_coefficients(mc_residual(ctx, x), down, 2), mc_residual(ctx, base_change(x, dual, down)));
  }
}

TEST_F(DualNumbersFixture, LiftOfZeroIsZero) {
  LiftResult r = lift_order_by_order(ctx, MCElement{dual, RCochain(2)}, e3);
  ASSERT_TRUE(r.lifted);
  EXPECT_TRUE(r.lift.value.is_zero());
}

TEST(Lifting, SmoothExamplesLiftToFourthOrder) {
  for (const char* name : {"path:a2", "matrix:2"}) {
    HochschildContext ctx(algebra_from_name(name), 5);
    ArtinLocalRing dual = ring_from_name("dual"), e4 = ring_from_name("eps^4");
    EXPECT_EQ(hochschild_cohomology(ctx, 3, 3).dims.at(3), 0) << name;
    for (const auto& c : two_cocycles(ctx)) {
      MCElement m{dual, ring_multiple(dual, 1, c)};
      for (int step = 0; step < 2; ++step) {
        LiftResult r = lift_order_by_order(ctx, m, e4);
        ASSERT_TRUE(r.lifted) << name;
        for (const auto& [k, coords] : r.obstruction)
          for (const auto& v : coords) EXPECT_EQ(v, Rational(0));
        m = r.lift;
      }
      EXPECT_EQ(m.base.dim(), 4);
      EXPECT_TRUE(is_maurer_cartan(ctx, m)) << name;
      // HH^2 = 0: every first-order element is gauge trivial.
      EXPECT_TRUE(gauge_equivalent(ctx, MCElement{dual, RCochain(2)}, MCElement{dual, ring_multiple(dual, 1, c)})
                      .alpha.has_value())
          << name;
    }
  }
}
