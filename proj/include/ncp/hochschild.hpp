#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncp/algebra.hpp"
#include "ncp/exactlin.hpp"

namespace ncp {

class BarBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ArityBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotNormalized : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Word = std::vector<int>;

// Multilinear map on the bar construction. terms[u] is the value on the
// input word u = [u_1|...|u_l], an element of A in the basis of the
// algebra it is used with (stored as the value of the shifted map).
struct Cochain {
  std::map<Word, SparseVec> terms;

  bool is_zero() const { return terms.empty(); }
  int max_arity() const;
  std::set<int> arities() const;
  void add(const Word& w, int out, const Rational& c);
  void axpy(const Rational& c, const Cochain& o);
  Cochain scaled(const Rational& c) const;
  // Keeps only terms of the given arity.
  Cochain arity_part(int l) const;
  static Cochain basis(const Word& w, int out) {
    Cochain c;
    c.add(w, out, Rational(1));
    return c;
  }
  friend bool operator==(const Cochain& a, const Cochain& b) { return a.terms == b.terms; }
  friend bool operator!=(const Cochain& a, const Cochain& b) { return !(a == b); }
};

// Chains: bar weight n -> coefficient vector in the chain space of weight n.
struct Chain {
  std::map<int, SparseVec> parts;

  bool is_zero() const;
  void axpy(const Rational& c, const Chain& o);
  void add(int weight, int index, const Rational& c);
  int max_weight() const;
  static Chain single(int weight, int index) {
    Chain c;
    c.add(weight, index, Rational(1));
    return c;
  }
  friend bool operator==(const Chain& a, const Chain& b);
  friend bool operator!=(const Chain& a, const Chain& b) { return !(a == b); }
};

// Indexing of the words a0 ⊗ [a1|...|an] spanning the chain space.
// Normalized mode: a0 any basis element, a_i non-unit basis elements
// (the unit must be basis element 0). Relative mode: words are cyclically
// composable with respect to the idempotent decomposition and the a_i run
// over non-idempotent basis elements.
class ChainSpace {
 public:
  enum class Mode { normalized, relative };
  ChainSpace() = default;
  ChainSpace(const DgAlgebra& a, Mode mode, int max_weight);

  Mode mode() const { return mode_; }
  int max_weight() const { return max_weight_; }
  int dim(int n) const;
  // -1 if the word is not in the space.
  int index(int a0, const int* bar, int n) const;
  void word(int n, int idx, int& a0, Word& bar) const;
  bool is_bar_letter(int k) const { return bar_letter_[static_cast<size_t>(k)] != 0; }
  std::string format_word(const DgAlgebra& a, int n, int idx) const;

 private:
  Mode mode_ = Mode::normalized;
  int max_weight_ = 0;
  int d_ = 0;
  std::vector<char> bar_letter_;
  std::vector<int> bar_pos_;  // basis index -> digit among bar letters
  std::vector<int> letters_;  // digit -> basis index
  // relative mode
  std::vector<std::vector<std::pair<int, Word>>> words_;
  std::vector<std::map<std::pair<int, Word>, int>> lookup_;
};

// Algebra plus the data every Hochschild operation needs: the unit-adapted
// basis, the structure cochain b (arity 1: differential, arity 2:
// b[a|c] = (-1)^{|a|} ac, stored over all words including the unit) and
// the normalized chain space.
class HochschildContext {
 public:
  explicit HochschildContext(const DgAlgebra& a, int max_weight = 8);
  // Relative context on the original (non-adapted) basis; requires
  // idempotent metadata and an algebra concentrated in degree 0.
  static HochschildContext relative(const DgAlgebra& a, int max_weight);

  const DgAlgebra& algebra() const { return alg_; }
  const DgAlgebra& original() const { return orig_; }
  const UnitAdapted& adapted() const { return adapted_; }
  const ChainSpace& space() const { return space_; }
  const Cochain& structure() const { return b_; }
  int dim() const { return alg_.dim(); }
  int deg(int i) const { return alg_.degree[static_cast<size_t>(i)]; }
  bool is_relative() const { return space_.mode() == ChainSpace::Mode::relative; }
  int max_weight() const { return space_.max_weight(); }
  // Shifted degree of the term (u -> out).
  int term_degree(const Word& u, int out) const;
  // Total cohomological degree of a chain word.
  int chain_degree(int a0, const Word& bar) const;

 private:
  HochschildContext() = default;
  DgAlgebra orig_;
  UnitAdapted adapted_;
  DgAlgebra alg_;
  Cochain b_;
  ChainSpace space_;
};

// Fast lookup of cochain terms by input word.
class CochainIndex {
 public:
  CochainIndex() = default;
  CochainIndex(const Cochain& c, int dim);
  const SparseVec* find(const int* w, int l) const;
  const std::vector<int>& arities() const { return arities_; }

 private:
  uint64_t key(const int* w, int l) const;
  int d_ = 1;
  std::unordered_map<uint64_t, const SparseVec*> map_;
  std::vector<int> arities_;
  const Cochain* src_ = nullptr;
};

struct OperatorOptions {
  bool corrupt_wrap_sign = false;  // mutation testing only
};

using WordSink = std::function<void(int a0, const Word& bar, const Rational& c)>;

// Word-level operators. Outputs are emitted as raw words; callers map them
// into a chain space.
void lie_action_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar, const WordSink& out,
                     const OperatorOptions& opt = {});
void connes_B_word(const HochschildContext& ctx, int a0, const Word& bar, const WordSink& out);
void contraction_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar,
                      const WordSink& out);
// Homotopy operator S_P: for each cyclic rotation 1 ⊗ [a_i..a_n | a0 | a_1..a_{i-1}]
// (signed as in B), P is applied to a window of consecutive letters after
// a0. On normalized chains [B, I_P] + [∂, S_P] = -L_P + (terms in ∂P) and
// [B, S_P] = 0.
void homotopy_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar, const WordSink& out);

// Chain-level operators. Weights above the context bound raise
// BarBoundExceeded.
Chain hochschild_boundary(const HochschildContext& ctx, const Chain& c);
Chain connes_B(const HochschildContext& ctx, const Chain& c);
Chain lie_action(const HochschildContext& ctx, const Cochain& p, const Chain& c, const OperatorOptions& opt = {});
Chain contraction(const HochschildContext& ctx, const Cochain& p, const Chain& c);
Chain homotopy(const HochschildContext& ctx, const Cochain& p, const Chain& c);

enum class OpKind { lie, boundary, connes, contraction, homotopy };
// Matrix of an operator from weight `src` to weight `dst`; terms landing in
// other weights are ignored.
SparseMatrix operator_matrix(const HochschildContext& ctx, OpKind kind, const Cochain* p, int src, int dst,
                             const OperatorOptions& opt = {});
SparseMatrix boundary_matrix(const HochschildContext& ctx, int n);  // C_n -> C_{n-1}
SparseMatrix connes_matrix(const HochschildContext& ctx, int n);    // C_n -> C_{n+1}

// Chain word for (a0; bar) in the context's space; throws NotNormalized.
Chain make_chain(const HochschildContext& ctx, int a0, const Word& bar, const Rational& c = Rational(1));
std::string format_chain(const HochschildContext& ctx, const Chain& c);

// Brace P∘Q = sum over slots of ±P[..|Q(..)|..]; the sign is
// (-1)^{|Q|' (shifted degrees of the inputs before the slot)}.
// With normalized = true input words containing the unit are dropped.
Cochain brace(const HochschildContext& ctx, const Cochain& p, const Cochain& q, bool normalized = true,
              int max_arity = -1);
// [P,Q] = P∘Q - (-1)^{|P|'|Q|'} Q∘P on shifted degrees.
Cochain bracket(const HochschildContext& ctx, const Cochain& p, const Cochain& q, bool normalized = true,
                int max_arity = -1);
// ∂f = [b,f].
Cochain cochain_differential(const HochschildContext& ctx, const Cochain& f, int max_arity = -1);
// Splits a cochain into parts of constant shifted degree.
std::map<int, Cochain> homogeneous_parts(const HochschildContext& ctx, const Cochain& c);
bool is_normalized(const Cochain& c);
Cochain unit_cochain();
std::string format_cochain(const HochschildContext& ctx, const Cochain& c);

// Normalized cochains of arity n: index = out + dim * (word code over the
// non-unit letters).
int cochain_dim(const HochschildContext& ctx, int n);
Cochain cochain_from_vector(const HochschildContext& ctx, int n, const SparseVec& v);
SparseVec cochain_to_vector(const HochschildContext& ctx, int n, const Cochain& c);
SparseMatrix cochain_differential_matrix(const HochschildContext& ctx, int n);  // C^n -> C^{n+1}

struct GradedDims {
  std::map<int, int> dims;
  std::map<int, std::vector<SparseVec>> reps;
  std::map<int, SubquotientBasis> spaces;
  std::string str(int lo, int hi) const;
};

// Requires an algebra concentrated in degree 0; degree n uses weights
// n-1, n, n+1.
GradedDims hochschild_homology(const HochschildContext& ctx, int lo, int hi);
GradedDims hochschild_cohomology(const HochschildContext& ctx, int lo, int hi, int arity_bound = -1);

}  // namespace ncp
