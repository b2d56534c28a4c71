#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncp/hochschild.hpp"

namespace ncp {

class NotStabilized : public std::runtime_error {
 public:
  NotStabilized(int degree, const std::string& what)
      : std::runtime_error("NotStabilized(" + std::to_string(degree) + "): " + what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

// Range of allowed t-exponents.
struct TWindow {
  int lo = -6;
  int hi = 6;
  std::string str() const { return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]"; }
};

// (C_•, ∂, B) for an algebra concentrated in degree 0, with cached
// matrices. Algebras with idempotent data use the complex relative to the
// idempotents (same homology, far smaller); all others use the normalized
// complex.
class MixedComplex {
 public:
  MixedComplex(const DgAlgebra& a, int max_weight);
  explicit MixedComplex(std::shared_ptr<const HochschildContext> ctx);

  const HochschildContext& context() const { return *ctx_; }
  int max_weight() const { return ctx_->max_weight(); }
  int dim(int m) const;
  const SparseMatrix& boundary(int m) const;  // C_m -> C_{m-1}
  const SparseMatrix& connes(int m) const;    // C_m -> C_{m+1}

 private:
  std::shared_ptr<const HochschildContext> ctx_;
  mutable std::map<int, SparseMatrix> bd_;
  mutable std::map<int, SparseMatrix> cn_;
};

// Total complex in homological degree n: ⊕_{lo<=r<=hi} t^r C_{n+2r} with
// differential ∂ + tB; the t^{hi+1} part is dropped (quotient) and r < lo
// is absent (subcomplex).
class TruncatedLaurentComplex {
 public:
  struct Component {
    int r;
    int m;
    int offset;
  };
  TruncatedLaurentComplex(const MixedComplex& mc, TWindow w) : mc_(&mc), w_(w) {}

  TWindow window() const { return w_; }
  const MixedComplex& mixed() const { return *mc_; }
  std::vector<Component> components(int n) const;
  int dim(int n) const;
  SparseMatrix differential(int n) const;  // T_n -> T_{n-1}

 private:
  const MixedComplex* mc_;
  TWindow w_;
};

// Chain map T[from] -> T[to] keeping the t-components present in both;
// requires from.lo >= to.lo and from.hi >= to.hi.
SparseMatrix window_map(const MixedComplex& mc, TWindow from, TWindow to, int n);

// Largest bar weight any of the functions below touches for the given
// degree range and window.
int required_bar_weight(int deg_hi, TWindow w);

// Stable dimensions: the image of H_n(T[lo,hi+1]) -> H_n(T[lo-1,hi])
// (with the fixed end of each variant kept fixed); the window is declared
// stable when the enlarged window gives the same dims, otherwise
// NotStabilized is thrown.
GradedDims negative_cyclic_homology(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w = {});
std::pair<int, int> periodic_cyclic_homology(const DgAlgebra& a, TWindow w = {});
GradedDims cyclic_homology(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w = {});

struct LesDegree {
  int n = 0;
  int hn = 0, hp = 0, hc_shifted = 0;  // HN_n, HP_n, HC_{n-2}
  bool exact = true;
  std::string note;
};

struct LesReport {
  std::vector<LesDegree> degrees;
  bool exact() const;
  std::string str() const;
};

// Exactness of ... -> HN_n -> HP_n -> HC_{n-2} -> HN_{n-1} -> ... on the
// stable images, with the maps computed from the short exact sequence
// t^0 C[[t]] -> C((t)) -> C((t))/C[[t]] at chain level.
LesReport sbi_check(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w = {});

struct SpectralReport {
  TWindow window;
  int deg_lo = 0, deg_hi = 1;
  std::map<std::pair<int, int>, int> e1;        // (column i, total degree n) -> dim HH_{n+2i}
  std::map<std::pair<int, int>, int> d1_rank;   // rank of d1 out of (i, n)
  std::map<std::pair<int, int>, int> e2;
  std::map<int, int> abutment;                  // stable HP_n
  std::map<std::pair<int, int>, int> filtration;  // (i, n) -> dim F^i HP_n
  bool degenerate_at_e1 = false;
  std::string str() const;
};

// Spectral sequence of the t-adic filtration F^i = ∏_{r>=i} t^r C on
// C((t)) truncated to the window: E1 = HH, d1 induced by B.
SpectralReport hodge_spectral_sequence(const DgAlgebra& a, TWindow w = {}, int deg_lo = 0, int deg_hi = 1);

}  // namespace ncp
