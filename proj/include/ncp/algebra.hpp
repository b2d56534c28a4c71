#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncp/exactlin.hpp"

namespace ncp {

class CyclicQuiver : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite-dimensional graded algebra with differential, given by structure
// constants on a labeled basis.
struct DgAlgebra {
  std::string name;
  std::vector<std::string> labels;
  std::vector<int> degree;
  std::vector<std::vector<SparseVec>> mult;  // mult[i][j] = e_i * e_j
  std::vector<SparseVec> diff;               // diff[i] = d(e_i)
  SparseVec unit;

  // Optional complete set of orthogonal idempotents among the basis, with
  // every basis element b satisfying b = e_{left[b]} b e_{right[b]}. Used
  // by the relative mixed complex.
  std::vector<int> idempotents;
  std::vector<int> left;   // position in `idempotents`
  std::vector<int> right;  // position in `idempotents`

  int dim() const { return static_cast<int>(labels.size()); }
  bool has_idempotents() const { return !idempotents.empty(); }
  bool concentrated_in_degree_zero() const;
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
  SparseVec differential(const SparseVec& a) const;
  std::string format(const SparseVec& v) const;
};

struct Violation {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  std::string str() const;
};

ValidationReport validate_dg_algebra(const DgAlgebra& a);

// Paths in an acyclic quiver; product p*q is the concatenation "p then q"
// when the target of p is the source of q.
DgAlgebra build_path_algebra(int vertices, const std::vector<std::pair<int, int>>& arrows,
                             const std::string& name = "path");
DgAlgebra build_truncated_polynomial_algebra(int n);
DgAlgebra build_matrix_algebra(int n);

// Same algebra in a basis whose element 0 is the unit: if the unit is not
// already a basis vector, the first basis element with nonzero unit
// coefficient is replaced by the unit. Idempotent metadata is dropped
// unless the basis is unchanged.
struct UnitAdapted {
  DgAlgebra algebra;
  SparseMatrix to_original;    // columns: new basis in old coordinates
  SparseMatrix from_original;  // columns: old basis in new coordinates
};
UnitAdapted unit_adapted(const DgAlgebra& a);

// Builders by short name: "trunc_poly:n", "matrix:n", "path:a2" (•→•),
// "path:kronecker", "path:an" (linear A_n quiver), "Q".
DgAlgebra algebra_from_name(const std::string& name);

}  // namespace ncp
