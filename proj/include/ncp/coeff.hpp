#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ncp/exactlin.hpp"

namespace ncp {

class InvalidRing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RingElement = std::vector<Rational>;

// Finite-dimensional commutative local Q-algebra with residue field Q.
// Basis element 0 is the unit, the rest span the maximal ideal, and the
// basis is adapted to the m-adic filtration: every power m^k is spanned by
// the basis elements of level >= k.
class ArtinLocalRing {
 public:
  ArtinLocalRing() = default;
  // table[i][j] = product of basis elements i and j. Throws InvalidRing.
  ArtinLocalRing(std::string name, std::vector<std::string> labels, std::vector<std::vector<SparseVec>> table);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const SparseVec& product(int i, int j) const { return table_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  int nilpotency_order() const { return nil_order_; }
  // Largest k with basis element i in m^k (0 for the unit).
  int level(int i) const { return level_[static_cast<size_t>(i)]; }
  int max_level() const { return nil_order_ - 1; }
  std::vector<int> maximal_ideal() const;

  RingElement zero() const { return RingElement(static_cast<size_t>(dim())); }
  RingElement one() const;
  RingElement basis(int i) const;
  RingElement mul(const RingElement& a, const RingElement& b) const;
  RingElement add(const RingElement& a, const RingElement& b) const;
  RingElement scale(const Rational& c, const RingElement& a) const;
  // Reduction R -> Q.
  Rational residue(const RingElement& a) const { return a[0]; }
  std::string format(const RingElement& a) const;

  // m ⊇ m^2 ⊇ ... ⊇ 0 as basis-index sets (first entry m, last entry empty).
  std::vector<std::vector<int>> m_adic_filtration() const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<std::vector<SparseVec>> table_;
  std::vector<int> level_;
  int nil_order_ = 1;
};

// Q[e1..es]/(monomials of total degree >= order), graded-lex monomial basis.
ArtinLocalRing build_truncated_poly(int num_vars, int order);

// R/m^n, keeping basis elements of level < n.
ArtinLocalRing truncate_ring(const ArtinLocalRing& r, int n);

// Fiber product R x_{R'} R over a surjection pi: R -> R' given as a matrix
// (rows indexed by the basis of R'). Basis: (e_i, e_i) for each basis
// element of R, then (0, k_j) for a basis k_j of ker pi.
ArtinLocalRing fiber_product(const ArtinLocalRing& r, const ArtinLocalRing& rq, const SparseMatrix& pi);

// "dual", "eps^n", "eps2x2".
ArtinLocalRing ring_from_name(const std::string& name);

// Text format:
//   ring <name>
//   basis <label0> <label1> ...      (label0 is the unit)
//   mul <i> <j> <k> <rational>       (e_i e_j has coefficient c on e_k)
// Products with the unit are implied.
ArtinLocalRing parse_ring_table(const std::string& text);

}  // namespace ncp
