#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncp/calculus.hpp"
#include "ncp/coeff.hpp"
#include "ncp/hochschild.hpp"

namespace ncp {

class NotMaurerCartan : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cochain with coefficients in an artin ring: comps[k] is the coefficient
// cochain of ring basis element k. Cochains are written in the basis of the
// Hochschild context they are used with.
struct RCochain {
  std::vector<Cochain> comps;

  RCochain() = default;
  explicit RCochain(int ring_dim) : comps(static_cast<size_t>(ring_dim)) {}
  int ring_dim() const { return static_cast<int>(comps.size()); }
  bool is_zero() const;
  void axpy(const Rational& c, const RCochain& o);
  // Multiplies every coefficient by the ring element r.
  RCochain times(const ArtinLocalRing& ring, const RingElement& r) const;
  // True when every component outside the maximal ideal vanishes.
  bool in_maximal_ideal() const { return comps.empty() || comps[0].is_zero(); }
  // Lowest ring level carrying a nonzero component (-1 when zero).
  int lowest_level(const ArtinLocalRing& ring) const;
  friend bool operator==(const RCochain& a, const RCochain& b) { return a.comps == b.comps; }
  friend bool operator!=(const RCochain& a, const RCochain& b) { return !(a == b); }
};

struct MCElement {
  ArtinLocalRing base;
  RCochain value;  // shifted degree 1, coefficients in the maximal ideal
};

struct GaugeElement {
  ArtinLocalRing base;
  RCochain value;  // shifted degree 0, coefficients in the maximal ideal
};

// ε-linear shorthand: the element r ⊗ c for ring basis element k.
RCochain ring_multiple(const ArtinLocalRing& ring, int k, const Cochain& c);

std::string format_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x);

// R-bilinear extension of the bracket: [x,y]_k = Σ c^k_{ij} [x_i, y_j].
RCochain r_bracket(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x, const RCochain& y,
                   bool normalized = true, int max_arity = -1);
RCochain r_differential(const HochschildContext& ctx, const RCochain& x, int max_arity = -1);

// ∂x + ½[x,x].
RCochain mc_residual(const HochschildContext& ctx, const MCElement& x, int max_arity = -1);
bool is_maurer_cartan(const HochschildContext& ctx, const MCElement& x, int max_arity = -1);

// e^{ad α}(x) - Φ(ad α)(∂α), Φ(z) = (e^z - 1)/z, summed until the terms
// vanish (ad α is nilpotent since α has coefficients in m_R).
MCElement gauge_act(const HochschildContext& ctx, const GaugeElement& alpha, const MCElement& x, int max_arity = -1);

struct GaugeSearch {
  std::optional<GaugeElement> alpha;
  int failed_level = 0;  // filtration step that had no solution
  std::string detail;
};

// Searches for α with e^α • x = y, one m-adic step at a time. At step k the
// correction β in m^k enters linearly as -∂β, so each step is a linear
// solve. The earlier steps are fixed by deterministic choices; a failure is
// certified for those choices only (see README). Requires an algebra
// concentrated in degree 0.
GaugeSearch gauge_equivalent(const HochschildContext& ctx, const MCElement& x, const MCElement& y);

// (A ⊗ R, b ⊗ 1 + x) with R-multilinear operations.
struct AlgebraOverArtin {
  ArtinLocalRing base;
  DgAlgebra reduction;  // the context's algebra (unit-adapted basis)
  RCochain structure;

  int dim() const { return reduction.dim(); }
  // Vectors of A ⊗ R use index a + dim() * k.
  int total_dim() const { return dim() * base.dim(); }
  // Value of the structure map on inputs from A ⊗ R.
  SparseVec operation(const std::vector<SparseVec>& inputs) const;
  // Product u·v read off the arity-2 structure map (degree-0 algebras).
  SparseVec multiply(const SparseVec& u, const SparseVec& v) const;
};

AlgebraOverArtin deform_algebra(const HochschildContext& ctx, const MCElement& x, int max_arity = -1);

// Square-zero coderivation (computed on all words, unit included), unit
// condition, reduction mod m_R and the maximal-ideal condition on the
// deformation part.
ValidationReport validate_curved_ainf(const HochschildContext& ctx, const AlgebraOverArtin& a);

// Inverse of deform_algebra: validates, then returns structure - b ⊗ 1.
MCElement mc_from_deformation(const HochschildContext& ctx, const AlgebraOverArtin& a);

// Deformation from R-valued structure constants of a degree-0 algebra:
// products[i][j] is e_i·e_j as a vector in A ⊗ R (context basis).
AlgebraOverArtin deformation_from_products(const HochschildContext& ctx, const ArtinLocalRing& ring,
                                           const std::vector<std::vector<SparseVec>>& products);

// R-linear map A⊗R -> A⊗R given by a ring-valued family of linear maps.
SparseMatrix r_linear_map(const ArtinLocalRing& ring, const std::vector<SparseMatrix>& comps);
// e^N for a nilpotent matrix.
SparseMatrix nilpotent_exp(const SparseMatrix& n);

// Transports the structure by φ = e^α where α is an arity-one gauge
// element: μ'(u_1..u_l) = φ μ(φ^{-1} u_1, ..., φ^{-1} u_l).
AlgebraOverArtin conjugate_structure(const HochschildContext& ctx, const AlgebraOverArtin& a,
                                     const GaugeElement& alpha);
// Equality of all structure constants up to the given arity, with a
// witness word on mismatch.
bool same_structure_constants(const AlgebraOverArtin& a, const AlgebraOverArtin& b, int max_arity,
                              std::string* witness = nullptr);

// Operators on C_•(A) ⊗ R: ops[k] is the coefficient of ring basis
// element k. Chain vectors use index c + dim(C_n) * k within weight n.
struct RWeightOp {
  std::vector<WeightOp> comps;

  explicit RWeightOp(int ring_dim = 0) : comps(static_cast<size_t>(ring_dim)) {}
  bool is_zero() const;
  void axpy(const Rational& c, const RWeightOp& o);
  RWeightOp restricted(int lo, int hi) const;
};
RWeightOp r_compose(const ArtinLocalRing& ring, const RWeightOp& a, const RWeightOp& b);
// exp of an operator with coefficients in m_R, with the identity on
// weights 0..top.
RWeightOp r_exp(const ArtinLocalRing& ring, const HochschildContext& ctx, const RWeightOp& a, int top);
// Flattened matrix of one block (source, target) over A ⊗ R.
SparseMatrix r_block_matrix(const ArtinLocalRing& ring, const HochschildContext& ctx, const RWeightOp& op, int src,
                            int dst);

class DeformedMixedComplex {
 public:
  // Sources in [0, top]; top defaults to the context bound minus one.
  DeformedMixedComplex(const HochschildContext& ctx, const MCElement& x, int top = -1);

  const ArtinLocalRing& base() const { return ring_; }
  int top() const { return top_; }
  const RWeightOp& differential() const { return diff_; }  // ∂ ⊗ 1 + L_x
  const RWeightOp& connes() const { return connes_; }      // B ⊗ 1
  const RWeightOp& lie_part() const { return lie_; }       // L_x

  // (∂ + L_x)² on sources whose images stay in range.
  bool square_zero(std::string* witness = nullptr) const;
  // B L_x + L_x B = 0.
  bool connes_anticommutes(std::string* witness = nullptr) const;
  // Component 0 is the undeformed ∂.
  bool reduces_to_undeformed() const;

 private:
  const HochschildContext* ctx_;
  ArtinLocalRing ring_;
  int top_;
  RWeightOp diff_, connes_, lie_;
};

DeformedMixedComplex deformed_mixed_complex(const HochschildContext& ctx, const MCElement& x, int top = -1);

// Checks e^{L_α} (∂ + L_x) e^{-L_α} = ∂ + L_y for y = e^α • x.
bool conjugation_identity(const HochschildContext& ctx, const GaugeElement& alpha, const MCElement& x, int top,
                          std::string* witness = nullptr);

struct LiftResult {
  bool lifted = false;
  MCElement lift;  // over the target ring when lifted
  int level = 0;   // the new filtration step
  // Coordinates of the obstruction class -½[x,x]_k in the chosen HH³
  // basis, one vector per ring basis element of the new level.
  std::vector<std::pair<int, std::vector<Rational>>> obstruction;
  std::vector<SparseVec> hh3_basis;  // representatives (arity-3 cochain vectors)
};

// Lifts an MC element over target/m^n to target/m^{n+1}, where n is the
// nilpotency order of x_low's ring. The correction at level n solves
// ∂y = -½[x,x]_n; the solve is deterministic. Requires an algebra
// concentrated in degree 0 and target/m^n matching x_low.base.
LiftResult lift_order_by_order(const HochschildContext& ctx, const MCElement& x_low, const ArtinLocalRing& target);

// Pushes coefficients along a ring map given as a matrix (rows indexed by
// the basis of the target ring).
RCochain map_coefficients(const RCochain& x, const SparseMatrix& ring_map, int target_dim);
MCElement base_change(const MCElement& x, const ArtinLocalRing& target, const SparseMatrix& ring_map);
GaugeElement base_change(const GaugeElement& a, const ArtinLocalRing& target, const SparseMatrix& ring_map);

// Embeds an MC element into a ring whose truncation is x.base (ring
// elements are matched by label).
MCElement embed_into(const MCElement& x, const ArtinLocalRing& target);

}  // namespace ncp
