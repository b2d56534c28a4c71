#include <gtest/gtest.h>

#include <random>

#include "ncp/calculus.hpp"

using namespace ncp;

namespace {

const std::vector<std::string> kFive{"Q", "trunc_poly:2", "trunc_poly:3", "path:a2", "matrix:2"};

int shifted_degree(const HochschildContext& ctx, const Cochain& c) {
  const auto& [w, v] = *c.terms.begin();
  return ctx.term_degree(w, v.e.front().first);
}

// Slot-by-slot application of an arity-one map (degree-0 algebras).
Chain slotwise(const HochschildContext& ctx, const Cochain& p, int a0, const Word& bar) {
  Chain out;
  const int n = static_cast<int>(bar.size());
  Word full{a0};
  full.insert(full.end(), bar.begin(), bar.end());
  for (int i = 0; i <= n; ++i) {
    auto it = p.terms.find(Word{full[static_cast<size_t>(i)]});
    if (it == p.terms.end()) continue;
    for (const auto& [k, c] : it->second.e) {
      Word w = full;
      w[static_cast<size_t>(i)] = k;
      if (i > 0 && !ctx.space().is_bar_letter(k)) continue;
      out.add(n, ctx.space().index(w[0], w.data() + 1, n), c);
    }
  }
  return out;
}

bool is_coboundary(const HochschildContext& ctx, int n, const Cochain& c) {
  if (c.is_zero()) return true;
  if (n == 0) return false;
  SparseVec x;
  return solve(cochain_differential_matrix(ctx, n - 1), cochain_to_vector(ctx, n, c), x);
}

bool is_boundary(const HochschildContext& ctx, int n, const SparseVec& z) {
  if (z.empty()) return true;
  SparseVec x;
  return solve(boundary_matrix(ctx, n + 1), z, x);
}

std::vector<Cochain> cohomology_reps(const HochschildContext& ctx, int n) {
  std::vector<Cochain> out;
  GradedDims hh = hochschild_cohomology(ctx, n, n);
  for (const auto& r : hh.reps.at(n)) out.push_back(cochain_from_vector(ctx, n, r));
  return out;
}

}  // namespace

TEST(Bracket, UnitCochainIsCentral) {
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 4);
    for (const auto& p : basis_cochains(ctx, 0, 2))
      EXPECT_TRUE(gerstenhaber_bracket(ctx, p, unit_cochain()).is_zero()) << name << " " << format_cochain(ctx, p);
  }
}

TEST(Bracket, JacobiOnBasisCochains) {
  for (const char* name : {"trunc_poly:2", "trunc_poly:3"}) {
    HochschildContext ctx(algebra_from_name(name), 4);
    auto basis = basis_cochains(ctx, 0, 2);
    for (const auto& p : basis)
      for (const auto& q : basis)
        for (const auto& r : basis) {
          const int dp = shifted_degree(ctx, p), dq = shifted_degree(ctx, q);
          Cochain lhs = gerstenhaber_bracket(ctx, p, gerstenhaber_bracket(ctx, q, r));
          Cochain rhs = gerstenhaber_bracket(ctx, gerstenhaber_bracket(ctx, p, q), r);
          rhs.axpy(Rational((dp * dq) % 2 ? -1 : 1), gerstenhaber_bracket(ctx, q, gerstenhaber_bracket(ctx, p, r)));
          ASSERT_EQ(lhs, rhs) << format_cochain(ctx, p) << " " << format_cochain(ctx, q) << " " << format_cochain(ctx, r);
        }
  }
}

TEST(Bracket, AntisymmetryOnBasisCochains) {
  HochschildContext ctx(algebra_from_name("matrix:2"), 4);
  auto basis = basis_cochains(ctx, 0, 2);
  for (const auto& p : basis)
    for (const auto& q : basis) {
      const int dp = shifted_degree(ctx, p), dq = shifted_degree(ctx, q);
      Cochain s = gerstenhaber_bracket(ctx, p, q);
      s.axpy(Rational((dp * dq) % 2 ? -1 : 1), gerstenhaber_bracket(ctx, q, p));
      ASSERT_TRUE(s.is_zero());
    }
}

TEST(Cup, UnitCochainIsTwoSidedUnit) {
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 4);
    for (const auto& p : basis_cochains(ctx, 0, 2)) {
      EXPECT_EQ(cup_product(ctx, unit_cochain(), p), p) << name;
      EXPECT_EQ(cup_product(ctx, p, unit_cochain()), p) << name;
    }
  }
}

TEST(Cup, ArityZeroValues) {
  HochschildContext d(build_truncated_polynomial_algebra(2), 4);
  Cochain x = Cochain::basis({}, 1);
  EXPECT_TRUE(cup_product(d, x, x).is_zero());
  HochschildContext t(build_truncated_polynomial_algebra(3), 4);
  EXPECT_EQ(cup_product(t, x, x), Cochain::basis({}, 2));
}

TEST(Cup, GradedCommutativeOnCohomologyOfDualNumbers) {
  HochschildContext ctx(build_truncated_polynomial_algebra(2), 5);
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; p + q <= 2; ++q)
      for (const auto& a : cohomology_reps(ctx, p))
        for (const auto& b : cohomology_reps(ctx, q)) {
          Cochain c = cup_product(ctx, a, b);
          c.axpy(Rational((p * q) % 2 ? 1 : -1), cup_product(ctx, b, a));
          EXPECT_TRUE(is_coboundary(ctx, p + q, c)) << p << " " << q;
        }
}

TEST(LieAction, StructureCochainIsBoundary) {
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 5);
    for (int n = 0; n <= 4; ++n)
      for (int c = 0; c < ctx.space().dim(n); ++c) {
        Chain x = Chain::single(n, c);
        ASSERT_EQ(lie_action(ctx, ctx.structure(), x), hochschild_boundary(ctx, x)) << name;
      }
  }
}

TEST(LieAction, UnitCochainActsByZero) {
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 5);
    for (int n = 0; n <= 3; ++n)
      for (int c = 0; c < ctx.space().dim(n); ++c)
        EXPECT_TRUE(lie_action(ctx, unit_cochain(), Chain::single(n, c)).is_zero()) << name;
  }
}

TEST(LieAction, ArityOneMatchesSlotwiseExpansion) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> v(-2, 2);
  for (const char* name : {"trunc_poly:2", "trunc_poly:3", "matrix:2"}) {
    HochschildContext ctx(algebra_from_name(name), 5);
    for (int it = 0; it < 3; ++it) {
      Cochain p;
      for (const auto& b : basis_cochains(ctx, 1, 1)) p.axpy(Rational(v(rng)), b);
      for (int n = 0; n <= 3; ++n)
        for (int c = 0; c < ctx.space().dim(n); ++c) {
          int a0;
          Word bar;
          ctx.space().word(n, c, a0, bar);
          ASSERT_EQ(lie_action(ctx, p, Chain::single(n, c)), slotwise(ctx, p, a0, bar)) << name;
        }
    }
  }
}

TEST(LieAction, EulerDerivationCountsDegree) {
  // x d/dx on Q[x]/(x^3) scales a word by its total x-degree.
  HochschildContext ctx(build_truncated_polynomial_algebra(3), 4);
  Cochain p = Cochain::basis({1}, 1);
  p.add({2}, 2, Rational(2));
  EXPECT_EQ(lie_action(ctx, p, make_chain(ctx, 0, {1})), make_chain(ctx, 0, {1}));
  EXPECT_EQ(lie_action(ctx, p, make_chain(ctx, 2, {2, 1})), make_chain(ctx, 2, {2, 1}, Rational(5)));
}

TEST(Contraction, UnitCochainIsIdentity) {
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 4);
    for (int n = 0; n <= 3; ++n)
      for (int c = 0; c < ctx.space().dim(n); ++c) {
        Chain x = Chain::single(n, c);
        EXPECT_EQ(contraction(ctx, unit_cochain(), x), x);
      }
  }
}

TEST(Contraction, CompositionIsCupUpToSign) {
  HochschildContext ctx(build_truncated_polynomial_algebra(2), 5);
  auto basis = basis_cochains(ctx, 0, 2);
  int checked = 0;
  for (const auto& p : basis)
    for (const auto& q : basis) {
      if (p.max_arity() + q.max_arity() > 2) continue;
      Cochain pq = cup_product(ctx, p, q);
      int sign = 0;  // one sign per pair
      for (int n = 0; n <= 4; ++n)
        for (int c = 0; c < ctx.space().dim(n); ++c) {
          Chain x = Chain::single(n, c);
          Chain lhs = contraction(ctx, p, contraction(ctx, q, x));
          Chain rhs = contraction(ctx, pq, x);
          if (lhs.is_zero() && rhs.is_zero()) continue;
          ++checked;
          Chain neg;
          neg.axpy(Rational(-1), rhs);
          const int s = lhs == rhs ? 1 : (lhs == neg ? -1 : 0);
          ASSERT_NE(s, 0) << format_cochain(ctx, p) << " " << format_cochain(ctx, q);
          if (sign == 0) sign = s;
          ASSERT_EQ(s, sign);
        }
    }
  EXPECT_GT(checked, 20);
}

TEST(Contraction, CommuteOnHomologyOfDualNumbers) {
  HochschildContext ctx(build_truncated_polynomial_algebra(2), 6);
  GradedDims hh = hochschild_homology(ctx, 0, 4);
  int checked = 0;
  for (int p = 1; p <= 2; ++p)
    for (int q = 1; q <= 2; ++q)
      for (const auto& a : cohomology_reps(ctx, p))
        for (const auto& b : cohomology_reps(ctx, q))
          for (int n = p + q; n <= 4; ++n)
            for (const auto& z : hh.reps.at(n)) {
              Chain c;
              c.parts[n] = z;
              Chain d = contraction(ctx, a, contraction(ctx, b, c));
              d.axpy(Rational((p * q) % 2 ? 1 : -1), contraction(ctx, b, contraction(ctx, a, c)));
              const int m = n - p - q;
              ++checked;
              EXPECT_TRUE(is_boundary(ctx, m, d.parts.count(m) ? d.parts.at(m) : SparseVec())) << p << q << n;
            }
  EXPECT_GT(checked, 4);
}

TEST(CartanHomotopy, IdentitiesOnCocycles) {
  // [B, I_x] + [∂, S_x] = -L_x and [B, S_x] = 0 for 2-cocycles x.
  for (const auto& name : kFive) {
    HochschildContext ctx(algebra_from_name(name), 6);
    OperatorCache oc(ctx);
    const int top = 4;
    WeightOp B = oc.connes(0, top + 1), bd = oc.boundary(0, top + 1);
    for (const auto& k : rref(cochain_differential_matrix(ctx, 2)).kernel_basis) {
      Cochain x = cochain_from_vector(ctx, 2, k);
      WeightOp I = oc.contraction(x, 0, top + 1), S = oc.homotopy(x, 0, top), L = oc.lie(x, 0, top);
      WeightOp lhs = compose(B, I);
      lhs.axpy(Rational(-1), compose(I, B));
      lhs.axpy(Rational(1), compose(bd, S));
      lhs.axpy(Rational(-1), compose(S, bd));
      lhs.axpy(Rational(1), L);
      EXPECT_TRUE(lhs.restricted(0, top - 1).is_zero()) << name << " " << format_cochain(ctx, x);
      WeightOp bs = compose(B, S);
      bs.axpy(Rational(-1), compose(S, B));
      EXPECT_TRUE(bs.restricted(0, top - 1).is_zero()) << name;
    }
  }
}

TEST(LieDagger, HoldsExactlyForDualNumbersAndPath) {
  for (const char* name : {"trunc_poly:2", "path:a2"}) {
    auto reps = verify_lie_dagger(algebra_from_name(name), LieDaggerBounds{3, 4});
    ASSERT_FALSE(reps.empty());
    for (const auto& r : reps) EXPECT_EQ(r.status, AxiomStatus::holds_exactly) << name << " " << r.id << " " << r.witness;
  }
}

TEST(LieDagger, CorruptedWrapSignIsCaught) {
  OperatorOptions bad;
  bad.corrupt_wrap_sign = true;
  auto reps = verify_lie_dagger(algebra_from_name("trunc_poly:2"), LieDaggerBounds{3, 4}, bad);
  bool failed = false;
  for (const auto& r : reps)
    if (r.status == AxiomStatus::fails) {
      failed = true;
      EXPECT_FALSE(r.witness.empty()) << r.id;
    }
  EXPECT_TRUE(failed);
}

TEST(CalculusDefect, DualNumbersClassification) {
  auto reps = calculus_defect(build_truncated_polynomial_algebra(2), CalculusBounds{2, 3, -1});
  std::map<std::string, AxiomStatus> st;
  for (const auto& r : reps) {
    st[r.id] = r.status;
    EXPECT_NE(r.status, AxiomStatus::fails) << r.id << " " << r.witness;
  }
  EXPECT_EQ(st.at("cartan"), AxiomStatus::holds_on_homology);
  EXPECT_EQ(st.at("contraction_composition"), AxiomStatus::holds_exactly);
  EXPECT_EQ(st.at("gerstenhaber_leibniz"), AxiomStatus::holds_on_homology);
  EXPECT_EQ(st.at("gerstenhaber_jacobi"), AxiomStatus::holds_exactly);
}

TEST(CalculusDefect, MatrixAlgebraHasNoFailures) {
  for (const auto& r : calculus_defect(build_matrix_algebra(2), CalculusBounds{2, 2, 1}))
    EXPECT_NE(r.status, AxiomStatus::fails) << r.id << " " << r.witness;
}
