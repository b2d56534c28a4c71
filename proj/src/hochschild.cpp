#include "ncp/hochschild.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ncp {

namespace {

inline Rational sgn(long e) { return (e & 1) ? Rational(-1) : Rational(1); }

}  // namespace

// ------------------------------------------------------------------ Cochain

int Cochain::max_arity() const {
  int m = -1;
  for (const auto& [w, v] : terms) m = std::max(m, static_cast<int>(w.size()));
  return m;
}

std::set<int> Cochain::arities() const {
  std::set<int> s;
  for (const auto& [w, v] : terms) s.insert(static_cast<int>(w.size()));
  return s;
}

void Cochain::add(const Word& w, int out, const Rational& c) {
  if (c.is_zero()) return;
  auto& v = terms[w];
  v.add_entry(out, c);
  if (v.empty()) terms.erase(w);
}

void Cochain::axpy(const Rational& c, const Cochain& o) {
  if (c.is_zero()) return;
  for (const auto& [w, v] : o.terms) {
    auto& t = terms[w];
    t.axpy(c, v);
    if (t.empty()) terms.erase(w);
  }
}

Cochain Cochain::scaled(const Rational& c) const {
  Cochain r;
  r.axpy(c, *this);
  return r;
}

Cochain Cochain::arity_part(int l) const {
  Cochain r;
  for (const auto& [w, v] : terms)
    if (static_cast<int>(w.size()) == l) r.terms[w] = v;
  return r;
}

bool is_normalized(const Cochain& c) {
  for (const auto& [w, v] : c.terms)
    if (std::find(w.begin(), w.end(), 0) != w.end()) return false;
  return true;
}

Cochain unit_cochain() { return Cochain::basis({}, 0); }

// -------------------------------------------------------------------- Chain

bool Chain::is_zero() const {
  for (const auto& [n, v] : parts)
    if (!v.empty()) return false;
  return true;
}

void Chain::axpy(const Rational& c, const Chain& o) {
  for (const auto& [n, v] : o.parts) {
    auto& t = parts[n];
    t.axpy(c, v);
    if (t.empty()) parts.erase(n);
  }
}

void Chain::add(int weight, int index, const Rational& c) {
  auto& t = parts[weight];
  t.add_entry(index, c);
  if (t.empty()) parts.erase(weight);
}

int Chain::max_weight() const {
  int m = -1;
  for (const auto& [n, v] : parts)
    if (!v.empty()) m = std::max(m, n);
  return m;
}

bool operator==(const Chain& a, const Chain& b) {
  Chain d = a;
  d.axpy(Rational(-1), b);
  return d.is_zero();
}

// --------------------------------------------------------------- ChainSpace

ChainSpace::ChainSpace(const DgAlgebra& a, Mode mode, int max_weight)
    : mode_(mode), max_weight_(max_weight), d_(a.dim()) {
  bar_letter_.assign(static_cast<size_t>(d_), 0);
  bar_pos_.assign(static_cast<size_t>(d_), -1);
  if (mode == Mode::normalized) {
    for (int k = 1; k < d_; ++k) bar_letter_[static_cast<size_t>(k)] = 1;
  } else {
    if (!a.has_idempotents()) throw std::invalid_argument("relative chain space needs idempotent data");
    for (int k = 0; k < d_; ++k) bar_letter_[static_cast<size_t>(k)] = 1;
    for (int e : a.idempotents) bar_letter_[static_cast<size_t>(e)] = 0;
  }
  for (int k = 0; k < d_; ++k)
    if (bar_letter_[static_cast<size_t>(k)]) {
      bar_pos_[static_cast<size_t>(k)] = static_cast<int>(letters_.size());
      letters_.push_back(k);
    }
  if (mode == Mode::relative) {
    words_.resize(static_cast<size_t>(max_weight) + 1);
    lookup_.resize(static_cast<size_t>(max_weight) + 1);
    const auto& L = a.left;
    const auto& R = a.right;
    // Open composable bar words by weight, then close with a0.
    std::vector<Word> open{Word{}};
    for (int n = 0; n <= max_weight; ++n) {
      for (const auto& w : open)
        for (int a0 = 0; a0 < d_; ++a0) {
          bool ok = w.empty() ? L[static_cast<size_t>(a0)] == R[static_cast<size_t>(a0)]
                              : R[static_cast<size_t>(a0)] == L[static_cast<size_t>(w.front())] &&
                                    R[static_cast<size_t>(w.back())] == L[static_cast<size_t>(a0)];
          if (!ok) continue;
          lookup_[static_cast<size_t>(n)][{a0, w}] = static_cast<int>(words_[static_cast<size_t>(n)].size());
          words_[static_cast<size_t>(n)].push_back({a0, w});
        }
      std::vector<Word> next;
      for (const auto& w : open)
        for (int k : letters_)
          if (w.empty() || R[static_cast<size_t>(w.back())] == L[static_cast<size_t>(k)]) {
            Word x = w;
            x.push_back(k);
            next.push_back(x);
          }
      open = std::move(next);
    }
  }
}

int ChainSpace::dim(int n) const {
  if (n < 0) return 0;
  if (mode_ == Mode::relative) {
    if (n > max_weight_) throw BarBoundExceeded("weight " + std::to_string(n) + " above bar bound");
    return static_cast<int>(words_[static_cast<size_t>(n)].size());
  }
  long long v = d_;
  const long long l = static_cast<long long>(letters_.size());
  for (int i = 0; i < n; ++i) {
    v *= l;
    if (v > std::numeric_limits<int>::max()) throw BarBoundExceeded("chain space too large");
  }
  return static_cast<int>(v);
}

int ChainSpace::index(int a0, const int* bar, int n) const {
  if (mode_ == Mode::relative) {
    if (n > max_weight_) throw BarBoundExceeded("weight " + std::to_string(n) + " above bar bound");
    auto& lk = lookup_[static_cast<size_t>(n)];
    auto it = lk.find({a0, Word(bar, bar + n)});
    return it == lk.end() ? -1 : it->second;
  }
  long long idx = a0;
  const long long l = static_cast<long long>(letters_.size());
  for (int i = 0; i < n; ++i) {
    int p = bar_pos_[static_cast<size_t>(bar[i])];
    if (p < 0) return -1;
    idx = idx * l + p;
  }
  return static_cast<int>(idx);
}

void ChainSpace::word(int n, int idx, int& a0, Word& bar) const {
  if (mode_ == Mode::relative) {
    const auto& w = words_[static_cast<size_t>(n)][static_cast<size_t>(idx)];
    a0 = w.first;
    bar = w.second;
    return;
  }
  const int l = static_cast<int>(letters_.size());
  bar.assign(static_cast<size_t>(n), 0);
  for (int i = n - 1; i >= 0; --i) {
    bar[static_cast<size_t>(i)] = letters_[static_cast<size_t>(idx % l)];
    idx /= l;
  }
  a0 = idx;
}

std::string ChainSpace::format_word(const DgAlgebra& a, int n, int idx) const {
  int a0;
  Word bar;
  word(n, idx, a0, bar);
  std::string s = a.labels[static_cast<size_t>(a0)] + "⊗[";
  for (size_t i = 0; i < bar.size(); ++i) {
    if (i) s += "|";
    s += a.labels[static_cast<size_t>(bar[i])];
  }
  return s + "]";
}

// ------------------------------------------------------- HochschildContext

namespace {

Cochain structure_cochain(const DgAlgebra& a) {
  Cochain b;
  for (int i = 0; i < a.dim(); ++i) {
    if (!a.diff[static_cast<size_t>(i)].empty()) b.terms[{i}] = a.diff[static_cast<size_t>(i)];
    for (int j = 0; j < a.dim(); ++j) {
      const SparseVec& m = a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (m.empty()) continue;
      SparseVec v = m;
      v.scale(sgn(a.degree[static_cast<size_t>(i)]));
      b.terms[{i, j}] = v;
    }
  }
  return b;
}

}  // namespace

HochschildContext::HochschildContext(const DgAlgebra& a, int max_weight) : orig_(a) {
  if (a.dim() == 0) throw std::invalid_argument("zero algebra rejected: a unit is required");
  adapted_ = unit_adapted(a);
  alg_ = adapted_.algebra;
  b_ = structure_cochain(alg_);
  space_ = ChainSpace(alg_, ChainSpace::Mode::normalized, max_weight);
}

HochschildContext HochschildContext::relative(const DgAlgebra& a, int max_weight) {
  if (!a.concentrated_in_degree_zero()) throw std::invalid_argument("relative complex needs a degree-0 algebra");
  HochschildContext c;
  c.orig_ = a;
  c.adapted_ = unit_adapted(a);
  c.alg_ = a;
  c.b_ = structure_cochain(a);
  c.space_ = ChainSpace(a, ChainSpace::Mode::relative, max_weight);
  return c;
}

int HochschildContext::term_degree(const Word& u, int out) const {
  int d = deg(out) - 1;
  for (int x : u) d -= deg(x) - 1;
  return d;
}

int HochschildContext::chain_degree(int a0, const Word& bar) const {
  int d = deg(a0);
  for (int x : bar) d += deg(x) - 1;
  return d;
}

// -------------------------------------------------------------- CochainIndex

CochainIndex::CochainIndex(const Cochain& c, int dim) : d_(dim), src_(&c) {
  std::set<int> ar;
  for (const auto& [w, v] : c.terms) {
    map_[key(w.data(), static_cast<int>(w.size()))] = &v;
    ar.insert(static_cast<int>(w.size()));
  }
  arities_.assign(ar.begin(), ar.end());
}

uint64_t CochainIndex::key(const int* w, int l) const {
  uint64_t k = 0;
  for (int i = 0; i < l; ++i) k = k * static_cast<uint64_t>(d_ + 1) + static_cast<uint64_t>(w[i] + 1);
  return k;
}

const SparseVec* CochainIndex::find(const int* w, int l) const {
  auto it = map_.find(key(w, l));
  return it == map_.end() ? nullptr : it->second;
}

// ------------------------------------------------------- word-level operators

void lie_action_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar, const WordSink& out,
                     const OperatorOptions& opt) {
  const int n = static_cast<int>(bar.size());
  std::vector<long> eps(static_cast<size_t>(n) + 1, 0);
  for (int j = 1; j <= n; ++j) eps[static_cast<size_t>(j)] = eps[static_cast<size_t>(j) - 1] + ctx.deg(bar[static_cast<size_t>(j) - 1]) - 1;
  auto mu = [&](int j) { return static_cast<long>(ctx.deg(a0)) - 1 + eps[static_cast<size_t>(j)]; };
  const ChainSpace& sp = ctx.space();
  Word w;
  std::vector<int> buf;
  for (int l : p.arities()) {
    // Interior insertions a0 ⊗ [a1..aj | P(a_{j+1}..a_{j+l}) | ...].
    for (int j = 0; j + l <= n; ++j) {
      const SparseVec* v = p.find(bar.data() + j, l);
      if (!v) continue;
      long in_deg = eps[static_cast<size_t>(j + l)] - eps[static_cast<size_t>(j)];
      for (const auto& [k, c] : v->e) {
        if (!sp.is_bar_letter(k)) continue;
        long pdeg = ctx.deg(k) - 1 - in_deg;
        w.assign(bar.begin(), bar.begin() + j);
        w.push_back(k);
        w.insert(w.end(), bar.begin() + j + l, bar.end());
        out(a0, w, sgn(pdeg * mu(j)) * c);
      }
    }
    // Wrap-around terms P(a_{i+1}..a_n | a0 | a1..a_j) ⊗ [a_{j+1}..a_i].
    if (l < 1 || l > n + 1) continue;
    for (int i = std::max(0, n + 1 - l); i <= n; ++i) {
      int j = l - 1 - n + i;
      buf.assign(bar.begin() + i, bar.end());
      buf.push_back(a0);
      buf.insert(buf.end(), bar.begin(), bar.begin() + j);
      const SparseVec* v = p.find(buf.data(), l);
      if (!v) continue;
      long e = opt.corrupt_wrap_sign ? mu(i) * mu(n) : mu(i) * (mu(n) - mu(i));
      Rational s = sgn(e);
      w.assign(bar.begin() + j, bar.begin() + i);
      for (const auto& [k, c] : v->e) out(k, w, s * c);
    }
  }
}

void connes_B_word(const HochschildContext& ctx, int a0, const Word& bar, const WordSink& out) {
  const ChainSpace& sp = ctx.space();
  if (!sp.is_bar_letter(a0)) return;
  const int n = static_cast<int>(bar.size());
  std::vector<long> eps(static_cast<size_t>(n) + 1, 0);
  for (int j = 1; j <= n; ++j) eps[static_cast<size_t>(j)] = eps[static_cast<size_t>(j) - 1] + ctx.deg(bar[static_cast<size_t>(j) - 1]) - 1;
  auto mu = [&](int j) { return static_cast<long>(ctx.deg(a0)) - 1 + eps[static_cast<size_t>(j)]; };
  const DgAlgebra& a = ctx.algebra();
  Word w;
  for (int i = 1; i <= n + 1; ++i) {
    // [a_i..a_n | a0 | a_1..a_{i-1}]
    w.assign(bar.begin() + (i - 1), bar.end());
    w.push_back(a0);
    w.insert(w.end(), bar.begin(), bar.begin() + (i - 1));
    int unit = 0;
    if (ctx.is_relative()) unit = a.idempotents[static_cast<size_t>(a.left[static_cast<size_t>(w.front())])];
    out(unit, w, sgn(mu(i - 1) * (mu(n) - mu(i - 1))));
  }
}

void contraction_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar,
                      const WordSink& out) {
  if (ctx.is_relative()) throw std::invalid_argument("contraction is only defined on the normalized complex");
  const int n = static_cast<int>(bar.size());
  const DgAlgebra& a = ctx.algebra();
  Word w;
  Word u;
  for (int l : p.arities()) {
    if (l > n) continue;
    const SparseVec* v = p.find(bar.data(), l);
    if (!v) continue;
    u.assign(bar.begin(), bar.begin() + l);
    w.assign(bar.begin() + l, bar.end());
    for (const auto& [k, c] : v->e) {
      long pdeg = ctx.term_degree(u, k) + 1;
      Rational s = sgn(pdeg * ctx.deg(a0)) * c;
      for (const auto& [m, x] : a.mult[static_cast<size_t>(a0)][static_cast<size_t>(k)].e) out(m, w, s * x);
    }
  }
}

void homotopy_word(const HochschildContext& ctx, const CochainIndex& p, int a0, const Word& bar, const WordSink& out) {
  if (ctx.is_relative()) throw std::invalid_argument("homotopy operator is only defined on the normalized complex");
  const ChainSpace& sp = ctx.space();
  if (!sp.is_bar_letter(a0)) return;
  const int n = static_cast<int>(bar.size());
  std::vector<long> eps(static_cast<size_t>(n) + 1, 0);
  for (int j = 1; j <= n; ++j) eps[static_cast<size_t>(j)] = eps[static_cast<size_t>(j) - 1] + ctx.deg(bar[static_cast<size_t>(j) - 1]) - 1;
  auto mu = [&](int j) { return static_cast<long>(ctx.deg(a0)) - 1 + eps[static_cast<size_t>(j)]; };
  Word w, r;
  for (int i = 1; i <= n + 1; ++i) {
    w.assign(bar.begin() + (i - 1), bar.end());
    const int pos0 = static_cast<int>(w.size());
    w.push_back(a0);
    w.insert(w.end(), bar.begin(), bar.begin() + (i - 1));
    const Rational rot = -sgn(mu(i - 1) * (mu(n) - mu(i - 1)));
    const int len = static_cast<int>(w.size());
    long prefix = 0;
    for (int q = 0; q <= pos0; ++q) prefix += ctx.deg(w[static_cast<size_t>(q)]) - 1;
    for (int l : p.arities()) {
      long pre = prefix;
      for (int q = pos0 + 1; q + l <= len; ++q) {
        if (q > pos0 + 1) pre += ctx.deg(w[static_cast<size_t>(q) - 1]) - 1;
        const SparseVec* v = p.find(w.data() + q, l);
        if (!v) continue;
        long in_deg = 0;
        for (int t = q; t < q + l; ++t) in_deg += ctx.deg(w[static_cast<size_t>(t)]) - 1;
        for (const auto& [k, c] : v->e) {
          if (!sp.is_bar_letter(k)) continue;
          long pdeg = ctx.deg(k) - 1 - in_deg;
          r.assign(w.begin(), w.begin() + q);
          r.push_back(k);
          r.insert(r.end(), w.begin() + q + l, w.end());
          out(0, r, rot * sgn(pdeg * pre) * c);
        }
      }
    }
  }
}

// ------------------------------------------------------ chain-level wrappers

namespace {

template <class F>
Chain apply_words(const HochschildContext& ctx, const Chain& c, F&& op) {
  const ChainSpace& sp = ctx.space();
  Chain res;
  std::map<int, DenseAccumulator> acc;
  int a0;
  Word bar;
  for (const auto& [n, v] : c.parts) {
    if (n > sp.max_weight()) throw BarBoundExceeded("input weight " + std::to_string(n) + " above bar bound");
    for (const auto& [idx, x] : v.e) {
      sp.word(n, idx, a0, bar);
      const Rational coeff = x;
      op(a0, bar, [&](int b0, const Word& w, const Rational& y) {
        int m = static_cast<int>(w.size());
        if (m > sp.max_weight()) throw BarBoundExceeded("output weight " + std::to_string(m) + " above bar bound");
        int j = sp.index(b0, w.data(), m);
        if (j < 0) throw NotNormalized("operator produced a word outside the chain space");
        auto it = acc.find(m);
        if (it == acc.end()) it = acc.emplace(m, DenseAccumulator(sp.dim(m))).first;
        it->second.add(j, coeff * y);
      });
    }
  }
  for (auto& [m, a] : acc) {
    SparseVec v = a.extract();
    if (!v.empty()) res.parts[m] = std::move(v);
  }
  return res;
}

}  // namespace

Chain hochschild_boundary(const HochschildContext& ctx, const Chain& c) {
  CochainIndex idx(ctx.structure(), ctx.dim());
  return apply_words(ctx, c, [&](int a0, const Word& bar, const WordSink& out) { lie_action_word(ctx, idx, a0, bar, out); });
}

Chain connes_B(const HochschildContext& ctx, const Chain& c) {
  return apply_words(ctx, c, [&](int a0, const Word& bar, const WordSink& out) { connes_B_word(ctx, a0, bar, out); });
}

Chain lie_action(const HochschildContext& ctx, const Cochain& p, const Chain& c, const OperatorOptions& opt) {
  CochainIndex idx(p, ctx.dim());
  return apply_words(ctx, c,
                     [&](int a0, const Word& bar, const WordSink& out) { lie_action_word(ctx, idx, a0, bar, out, opt); });
}

Chain contraction(const HochschildContext& ctx, const Cochain& p, const Chain& c) {
  CochainIndex idx(p, ctx.dim());
  return apply_words(ctx, c, [&](int a0, const Word& bar, const WordSink& out) { contraction_word(ctx, idx, a0, bar, out); });
}

Chain homotopy(const HochschildContext& ctx, const Cochain& p, const Chain& c) {
  CochainIndex idx(p, ctx.dim());
  return apply_words(ctx, c, [&](int a0, const Word& bar, const WordSink& out) { homotopy_word(ctx, idx, a0, bar, out); });
}

SparseMatrix operator_matrix(const HochschildContext& ctx, OpKind kind, const Cochain* p, int src, int dst,
                             const OperatorOptions& opt) {
  const ChainSpace& sp = ctx.space();
  if (src > sp.max_weight() || dst > sp.max_weight()) throw BarBoundExceeded("operator matrix above bar bound");
  const int rows = sp.dim(dst), cols = sp.dim(src);
  SparseMatrix m(rows, cols);
  if (rows == 0 || cols == 0) return m;
  CochainIndex idx;
  if (kind == OpKind::boundary)
    idx = CochainIndex(ctx.structure(), ctx.dim());
  else if (p)
    idx = CochainIndex(*p, ctx.dim());
  DenseAccumulator acc(rows);
  int a0;
  Word bar;
  bool any = false;
  WordSink sink = [&](int b0, const Word& w, const Rational& y) {
    if (static_cast<int>(w.size()) != dst) return;
    int j = sp.index(b0, w.data(), dst);
    if (j < 0) throw NotNormalized("operator produced a word outside the chain space");
    acc.add(j, y);
    any = true;
  };
  for (int c = 0; c < cols; ++c) {
    sp.word(src, c, a0, bar);
    any = false;
    switch (kind) {
      case OpKind::lie:
      case OpKind::boundary:
        lie_action_word(ctx, idx, a0, bar, sink, opt);
        break;
      case OpKind::connes:
        connes_B_word(ctx, a0, bar, sink);
        break;
      case OpKind::contraction:
        contraction_word(ctx, idx, a0, bar, sink);
        break;
      case OpKind::homotopy:
        homotopy_word(ctx, idx, a0, bar, sink);
        break;
    }
    if (any) m.set_column(c, acc.extract());
  }
  return m;
}

SparseMatrix boundary_matrix(const HochschildContext& ctx, int n) {
  if (n <= 0) return SparseMatrix(0, ctx.space().dim(std::max(n, 0)));
  return operator_matrix(ctx, OpKind::boundary, nullptr, n, n - 1);
}

SparseMatrix connes_matrix(const HochschildContext& ctx, int n) {
  return operator_matrix(ctx, OpKind::connes, nullptr, n, n + 1);
}

Chain make_chain(const HochschildContext& ctx, int a0, const Word& bar, const Rational& c) {
  int n = static_cast<int>(bar.size());
  if (n > ctx.max_weight()) throw BarBoundExceeded("chain weight above bar bound");
  int j = ctx.space().index(a0, bar.data(), n);
  if (j < 0) throw NotNormalized("word is not in the chain space (unit in a bar slot?)");
  Chain ch;
  ch.add(n, j, c);
  return ch;
}

std::string format_chain(const HochschildContext& ctx, const Chain& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, v] : c.parts)
    for (const auto& [idx, x] : v.e) {
      if (!first) os << " + ";
      first = false;
      if (!x.is_one()) os << x << "*";
      os << ctx.space().format_word(ctx.algebra(), n, idx);
    }
  if (first) os << "0";
  return os.str();
}

// --------------------------------------------------------------- cochains

std::map<int, Cochain> homogeneous_parts(const HochschildContext& ctx, const Cochain& c) {
  std::map<int, Cochain> out;
  for (const auto& [w, v] : c.terms)
    for (const auto& [k, x] : v.e) out[ctx.term_degree(w, k)].add(w, k, x);
  return out;
}

Cochain brace(const HochschildContext& ctx, const Cochain& p, const Cochain& q, bool normalized, int max_arity) {
  struct QTerm {
    const Word* in;
    Rational c;
    long deg;
  };
  std::vector<std::vector<QTerm>> by_out(static_cast<size_t>(ctx.dim()));
  for (const auto& [v, w] : q.terms)
    for (const auto& [k, c] : w.e) by_out[static_cast<size_t>(k)].push_back({&v, c, ctx.term_degree(v, k)});
  std::map<Word, SparseVec> acc;
  Word res;
  for (const auto& [u, o] : p.terms) {
    long eps = 0;
    for (size_t s = 0; s < u.size(); ++s) {
      for (const auto& qt : by_out[static_cast<size_t>(u[s])]) {
        res.assign(u.begin(), u.begin() + static_cast<long>(s));
        res.insert(res.end(), qt.in->begin(), qt.in->end());
        res.insert(res.end(), u.begin() + static_cast<long>(s) + 1, u.end());
        if (normalized && std::find(res.begin(), res.end(), 0) != res.end()) continue;
        if (max_arity >= 0 && static_cast<int>(res.size()) > max_arity)
          throw ArityBoundExceeded("brace produced arity " + std::to_string(res.size()));
        acc[res].axpy(sgn(qt.deg * eps) * qt.c, o);
      }
      eps += ctx.deg(u[s]) - 1;
    }
  }
  Cochain r;
  for (auto& [w, v] : acc)
    if (!v.empty()) r.terms.emplace(w, std::move(v));
  return r;
}

Cochain bracket(const HochschildContext& ctx, const Cochain& p, const Cochain& q, bool normalized, int max_arity) {
  Cochain r;
  auto pp = homogeneous_parts(ctx, p);
  auto qp = homogeneous_parts(ctx, q);
  for (const auto& [dp, a] : pp)
    for (const auto& [dq, b] : qp) {
      r.axpy(Rational(1), brace(ctx, a, b, normalized, max_arity));
      r.axpy(-sgn(static_cast<long>(dp) * dq), brace(ctx, b, a, normalized, max_arity));
    }
  return r;
}

Cochain cochain_differential(const HochschildContext& ctx, const Cochain& f, int max_arity) {
  return bracket(ctx, ctx.structure(), f, true, max_arity);
}

std::string format_cochain(const HochschildContext& ctx, const Cochain& c) {
  std::ostringstream os;
  bool first = true;
  const auto& lab = ctx.algebra().labels;
  for (const auto& [w, v] : c.terms) {
    if (!first) os << " + ";
    first = false;
    os << "[";
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) os << "|";
      os << lab[static_cast<size_t>(w[i])];
    }
    os << "]->(" << ctx.algebra().format(v) << ")";
  }
  if (first) os << "0";
  return os.str();
}

int cochain_dim(const HochschildContext& ctx, int n) {
  long long v = ctx.dim();
  for (int i = 0; i < n; ++i) {
    v *= ctx.dim() - 1;
    if (v > std::numeric_limits<int>::max()) throw ArityBoundExceeded("cochain space too large");
  }
  return static_cast<int>(v);
}

Cochain cochain_from_vector(const HochschildContext& ctx, int n, const SparseVec& v) {
  const int d = ctx.dim();
  Cochain c;
  Word w(static_cast<size_t>(n));
  for (const auto& [idx, x] : v.e) {
    int out = idx % d;
    int code = idx / d;
    for (int i = n - 1; i >= 0; --i) {
      w[static_cast<size_t>(i)] = code % (d - 1) + 1;
      code /= d - 1;
    }
    c.add(w, out, x);
  }
  return c;
}

SparseVec cochain_to_vector(const HochschildContext& ctx, int n, const Cochain& c) {
  const int d = ctx.dim();
  std::vector<std::pair<int, Rational>> e;
  for (const auto& [w, v] : c.terms) {
    if (static_cast<int>(w.size()) != n) continue;
    long long code = 0;
    for (int x : w) {
      if (x == 0) throw NotNormalized("cochain has a unit input");
      code = code * (d - 1) + (x - 1);
    }
    for (const auto& [k, y] : v.e) e.emplace_back(static_cast<int>(k + d * code), y);
  }
  return make_sparse(std::move(e));
}

SparseMatrix cochain_differential_matrix(const HochschildContext& ctx, int n) {
  const int rows = cochain_dim(ctx, n + 1), cols = cochain_dim(ctx, n);
  SparseMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    Cochain f = cochain_from_vector(ctx, n, SparseVec::unit(c));
    Cochain df = cochain_differential(ctx, f);
    for (const auto& [w, v] : df.terms)
      if (static_cast<int>(w.size()) != n + 1)
        throw std::invalid_argument("cochain differential does not raise arity by one (algebra not in degree 0)");
    m.set_column(c, cochain_to_vector(ctx, n + 1, df));
  }
  return m;
}

std::string GradedDims::str(int lo, int hi) const {
  std::ostringstream os;
  for (int n = lo; n <= hi; ++n) {
    if (n > lo) os << " ";
    auto it = dims.find(n);
    os << (it == dims.end() ? 0 : it->second);
  }
  return os.str();
}

GradedDims hochschild_homology(const HochschildContext& ctx, int lo, int hi) {
  if (!ctx.algebra().concentrated_in_degree_zero())
    throw std::invalid_argument("Hochschild homology needs an algebra concentrated in degree 0");
  if (hi + 1 > ctx.max_weight()) throw BarBoundExceeded("homology up to degree " + std::to_string(hi) + " needs bar bound " + std::to_string(hi + 1));
  GradedDims g;
  for (int n = lo; n <= hi; ++n) {
    if (n < 0) {
      g.dims[n] = 0;
      continue;
    }
    SparseMatrix din = boundary_matrix(ctx, n + 1);
    SparseMatrix dout = n == 0 ? SparseMatrix(0, ctx.space().dim(0)) : boundary_matrix(ctx, n);
    SubquotientBasis sq = homology_at(din, dout);
    g.dims[n] = static_cast<int>(sq.homology_reps.size());
    g.reps[n] = sq.homology_reps;
    g.spaces[n] = std::move(sq);
  }
  return g;
}

GradedDims hochschild_cohomology(const HochschildContext& ctx, int lo, int hi, int arity_bound) {
  if (!ctx.algebra().concentrated_in_degree_zero())
    throw std::invalid_argument("Hochschild cohomology needs an algebra concentrated in degree 0");
  if (ctx.is_relative()) throw std::invalid_argument("Hochschild cohomology uses the normalized complex");
  if (arity_bound >= 0 && arity_bound < hi + 1)
    throw ArityBoundExceeded("arity bound must be at least the top degree plus one");
  GradedDims g;
  for (int n = lo; n <= hi; ++n) {
    if (n < 0) {
      g.dims[n] = 0;
      continue;
    }
    SparseMatrix din = n == 0 ? SparseMatrix(cochain_dim(ctx, 0), 0) : cochain_differential_matrix(ctx, n - 1);
    SparseMatrix dout = cochain_differential_matrix(ctx, n);
    SubquotientBasis sq = homology_at(din, dout);
    g.dims[n] = static_cast<int>(sq.homology_reps.size());
    g.reps[n] = sq.homology_reps;
    g.spaces[n] = std::move(sq);
  }
  return g;
}

}  // namespace ncp
