#pragma once

#include <map>
#include <stdexcept>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "ncp/rational.hpp"

namespace ncp {

// Sparse vector: entries sorted by index, no stored zeros.
struct SparseVec {
  std::vector<std::pair<int, Rational>> e;

  bool empty() const { return e.empty(); }
  size_t size() const { return e.size(); }
  Rational get(int i) const;
  // Adds c * w to this vector.
  void axpy(const Rational& c, const SparseVec& w);
  void add_entry(int i, const Rational& c);  // accumulate into one coordinate
  void scale(const Rational& c);
  int leading() const { return e.empty() ? -1 : e.front().first; }
  static SparseVec unit(int i) {
    SparseVec v;
    v.e.emplace_back(i, Rational(1));
    return v;
  }
  static SparseVec from_dense(const std::vector<Rational>& d);
  std::vector<Rational> to_dense(int n) const;
  friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.e == b.e; }
  friend bool operator!=(const SparseVec& a, const SparseVec& b) { return !(a == b); }
};

// Builds a SparseVec from unsorted (index, value) pairs, merging duplicates.
SparseVec make_sparse(std::vector<std::pair<int, Rational>> entries);

// Scratch accumulator with O(1) random access used inside eliminations.
class DenseAccumulator {
 public:
  explicit DenseAccumulator(int n = 0) { resize(n); }
  void resize(int n);
  void add(int i, const Rational& c);
  void axpy(const Rational& c, const SparseVec& w);
  SparseVec extract();  // returns contents and clears
 private:
  std::vector<Rational> val_;
  std::vector<char> used_;
  std::vector<int> touched_;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_(static_cast<size_t>(cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void set(int r, int c, const Rational& v);
  void add(int r, int c, const Rational& v);
  Rational get(int r, int c) const;
  const SparseVec& column(int c) const { return col_[static_cast<size_t>(c)]; }
  void set_column(int c, SparseVec v);
  size_t nnz() const;
  bool is_zero() const { return nnz() == 0; }

  SparseVec apply(const SparseVec& v) const;
  SparseMatrix transpose() const;
  std::vector<SparseVec> row_vectors() const;
  // Entries in (row, col) order.
  std::vector<std::tuple<int, int, Rational>> entries() const;

  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
  SparseMatrix scaled(const Rational& c) const;
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<SparseVec> col_;
};

struct RrefResult {
  int rank = 0;
  std::vector<SparseVec> kernel_basis;  // vectors of length cols
  std::vector<int> pivot_columns;       // ascending
  std::vector<SparseVec> reduced_rows;  // row i has leading entry 1 at pivot_columns[i]
};

// Reduced row echelon form. Rows are processed in index order and the pivot
// of a row is its first nonzero column. Matrices smaller than 64x64 use a
// dense elimination path; the result is identical.
RrefResult rref(const SparseMatrix& m);

int rank(const SparseMatrix& m);

// Fully reduced echelon basis of a subspace, built incrementally. Each basis
// vector has coefficient 1 at its pivot and every other basis vector is zero
// there, so the coordinate of a member along basis vector k is its entry at
// pivot k. Optional tags record a linear combination carried alongside each
// inserted vector (used for preimages).
class EchelonBasis {
 public:
  explicit EchelonBasis(int ambient = 0, int tag_dim = 0) : ambient_(ambient), tag_dim_(tag_dim) {}

  int ambient() const { return ambient_; }
  int size() const { return static_cast<int>(vecs_.size()); }
  const std::vector<SparseVec>& vectors() const { return vecs_; }
  const std::vector<int>& pivots() const { return pivots_; }
  const std::vector<SparseVec>& tags() const { return tags_; }

  // Reduces v against the basis. If tag_out is given it receives
  // tag - sum coeff_k tag_k for the supplied tag.
  SparseVec reduce(const SparseVec& v, const SparseVec* tag = nullptr, SparseVec* tag_out = nullptr) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  // Returns true if v was independent and has been added.
  bool insert(const SparseVec& v, const SparseVec& tag = SparseVec());
  // Coordinates of a member of the span along the basis vectors.
  std::vector<Rational> coordinates(const SparseVec& v) const;
  int index_of_pivot(int col) const;

 private:
  int ambient_;
  int tag_dim_;
  std::vector<SparseVec> vecs_;
  std::vector<SparseVec> tags_;
  std::vector<int> pivots_;
  std::map<int, int> pivot_pos_;
};

class CompositionNonzero : public std::runtime_error {
 public:
  CompositionNonzero() : std::runtime_error("CompositionNonzero: d_out * d_in != 0") {}
};

struct SubquotientBasis {
  int ambient_dim = 0;
  std::vector<SparseVec> cycle_basis;
  std::vector<SparseVec> boundary_basis;
  std::vector<SparseVec> homology_reps;
};

// Homology at the middle spot of  . --d_in--> V --d_out--> .
SubquotientBasis homology_at(const SparseMatrix& d_in, const SparseMatrix& d_out);

// Expresses cycles in the homology basis of a SubquotientBasis.
class HomologyCoordinates {
 public:
  HomologyCoordinates() = default;
  explicit HomologyCoordinates(const SubquotientBasis& sq);
  int dim() const { return static_cast<int>(reps_.size()); }
  // Class of a cycle as coordinates along homology_reps; throws if z is
  // not in cycles (detected as a residual outside boundaries + reps).
  std::vector<Rational> class_of(const SparseVec& z) const;
  bool is_boundary(const SparseVec& z) const { return boundaries_.contains(z); }
  const std::vector<SparseVec>& reps() const { return reps_; }

 private:
  EchelonBasis boundaries_;
  EchelonBasis full_;  // boundaries followed by reps, tags = homology coordinates
  std::vector<SparseVec> reps_;
};

// Solves m x = rhs; returns false if inconsistent. The particular solution
// has zeros at all free columns.
bool solve(const SparseMatrix& m, const SparseVec& rhs, SparseVec& x);

std::string to_string(const SparseVec& v);

}  // namespace ncp
