#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ncp/hochschild.hpp"

namespace ncp {

enum class AxiomStatus { holds_exactly, holds_on_homology, fails };
const char* status_name(AxiomStatus s);

struct AxiomReport {
  std::string id;
  AxiomStatus status = AxiomStatus::holds_exactly;
  std::string witness;  // set whenever status == fails
  std::string detail;
};

// [p,q] = p∘q - (-1)^{(|p|-1)(|q|-1)} q∘p on normalized cochains.
Cochain gerstenhaber_bracket(const HochschildContext& ctx, const Cochain& p, const Cochain& q, int max_arity = -1);

// (P∪Q)[u|v] = (-1)^{|P| + |Q|'ε(u) + |P(u)|} P(u)·Q(v), where ε(u) is the
// shifted degree of the word u and |Q|' = |Q| - 1. The global (-1)^{|P|}
// makes the unit cochain a two-sided unit.
Cochain cup_product(const HochschildContext& ctx, const Cochain& p, const Cochain& q, int max_arity = -1);

// Linear operator on chains given by blocks (source weight, target weight).
struct WeightOp {
  std::map<std::pair<int, int>, SparseMatrix> blocks;

  void axpy(const Rational& c, const WeightOp& o);
  bool is_zero() const;
  // Blocks with source weight in [lo, hi].
  WeightOp restricted(int lo, int hi) const;
  // Applies to a chain; weights without a block map to zero.
  Chain apply(const Chain& c) const;
};
// a∘b
WeightOp compose(const WeightOp& a, const WeightOp& b);

// Caches operator matrices of single-term cochains so that the operator of
// any cochain is a linear combination of cached blocks.
class OperatorCache {
 public:
  explicit OperatorCache(const HochschildContext& ctx, OperatorOptions opt = {});
  const HochschildContext& context() const { return *ctx_; }
  // Sources in [lo, hi]; targets above the bar bound raise BarBoundExceeded.
  WeightOp lie(const Cochain& p, int lo, int hi);
  WeightOp contraction(const Cochain& p, int lo, int hi);
  WeightOp homotopy(const Cochain& p, int lo, int hi);
  WeightOp boundary(int lo, int hi);
  WeightOp connes(int lo, int hi);

 private:
  const SparseMatrix& term_matrix(OpKind kind, const Word& w, int out, int src, int dst);
  WeightOp build(OpKind kind, const Cochain& p, int lo, int hi, int shift_base);
  const HochschildContext* ctx_;
  OperatorOptions opt_;
  std::map<std::tuple<int, Word, int, int>, SparseMatrix> cache_;
};

// All normalized single-term cochains (word over non-unit letters -> basis
// element) with arity in [lo, hi].
std::vector<Cochain> basis_cochains(const HochschildContext& ctx, int lo, int hi);

struct LieDaggerBounds {
  int max_arity = 3;
  int max_weight = 4;
};

// Checks on all pairs of basis cochains up to the arity bound and all basis
// chains up to the weight bound:
//   lie_bracket:   L_{[P,Q]} = L_P L_Q - (-1)^{|P|'|Q|'} L_Q L_P
//   lie_boundary:  ∂ L_P - (-1)^{|P|'} L_P ∂ = L_{∂P}
//   lie_connes:    B L_P - (-1)^{|P|'} L_P B = 0
// plus the mixed-complex relations ∂² = 0, B² = 0, ∂B + B∂ = 0.
std::vector<AxiomReport> verify_lie_dagger(const DgAlgebra& a, const LieDaggerBounds& bounds,
                                           const OperatorOptions& opt = {});

struct CalculusBounds {
  int max_cochain_degree = 2;  // HH^k for k <= this
  int max_chain_degree = 3;    // HH_n for n <= this
  // Chain-level exactness is tested on basis cochains up to this arity
  // (-1: same as max_cochain_degree).
  int chain_level_arity = -1;
};

// Classifies each calculus relation as exact at chain level, exact on
// (co)homology (every defect is a (co)boundary) or failing. Requires an
// algebra concentrated in degree 0.
std::vector<AxiomReport> calculus_defect(const DgAlgebra& a, const CalculusBounds& bounds);

}  // namespace ncp
