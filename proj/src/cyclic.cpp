#include "ncp/cyclic.hpp"

#include <sstream>

namespace ncp {

// ------------------------------------------------------------ MixedComplex

namespace {

std::shared_ptr<const HochschildContext> make_context(const DgAlgebra& a, int max_weight) {
  if (!a.concentrated_in_degree_zero()) throw std::invalid_argument("cyclic homology needs an algebra in degree 0");
  if (a.has_idempotents() && a.idempotents.size() > 1)
    return std::make_shared<const HochschildContext>(HochschildContext::relative(a, max_weight));
  return std::make_shared<const HochschildContext>(a, max_weight);
}

}  // namespace

MixedComplex::MixedComplex(const DgAlgebra& a, int max_weight) : ctx_(make_context(a, max_weight)) {}

MixedComplex::MixedComplex(std::shared_ptr<const HochschildContext> ctx) : ctx_(std::move(ctx)) {}

int MixedComplex::dim(int m) const { return m < 0 ? 0 : ctx_->space().dim(m); }

const SparseMatrix& MixedComplex::boundary(int m) const {
  auto it = bd_.find(m);
  if (it != bd_.end()) return it->second;
  SparseMatrix b = m <= 0 ? SparseMatrix(0, dim(m)) : boundary_matrix(*ctx_, m);
  return bd_.emplace(m, std::move(b)).first->second;
}

const SparseMatrix& MixedComplex::connes(int m) const {
  auto it = cn_.find(m);
  if (it != cn_.end()) return it->second;
  return cn_.emplace(m, connes_matrix(*ctx_, m)).first->second;
}

// ------------------------------------------------------ truncated complex

std::vector<TruncatedLaurentComplex::Component> TruncatedLaurentComplex::components(int n) const {
  std::vector<Component> out;
  int off = 0;
  for (int r = w_.lo; r <= w_.hi; ++r) {
    const int m = n + 2 * r;
    if (m < 0) continue;
    if (m > mc_->max_weight())
      throw BarBoundExceeded("window " + w_.str() + " in degree " + std::to_string(n) + " needs bar weight " +
                             std::to_string(m));
    const int d = mc_->dim(m);
    if (d == 0) continue;
    out.push_back({r, m, off});
    off += d;
  }
  return out;
}

int TruncatedLaurentComplex::dim(int n) const {
  int d = 0;
  for (const auto& c : components(n)) d += mc_->dim(c.m);
  return d;
}

SparseMatrix TruncatedLaurentComplex::differential(int n) const {
  auto src = components(n);
  auto dst = components(n - 1);
  SparseMatrix out(dim(n - 1), dim(n));
  std::map<int, const Component*> by_r;
  for (const auto& c : dst) by_r[c.r] = &c;
  for (const auto& c : src) {
    const int cols = mc_->dim(c.m);
    auto it0 = by_r.find(c.r);      // ∂ keeps r
    auto it1 = by_r.find(c.r + 1);  // tB raises r
    for (int j = 0; j < cols; ++j) {
      SparseVec col;
      if (it0 != by_r.end() && c.m >= 1)
        for (const auto& [i, v] : mc_->boundary(c.m).column(j).e) col.e.emplace_back(i + it0->second->offset, v);
      if (it1 != by_r.end())
        for (const auto& [i, v] : mc_->connes(c.m).column(j).e) col.e.emplace_back(i + it1->second->offset, v);
      if (!col.empty()) out.set_column(c.offset + j, make_sparse(std::move(col.e)));
    }
  }
  return out;
}

namespace {

// Coordinate restriction between windows (not necessarily a chain map).
SparseMatrix component_map(const MixedComplex& mc, TWindow from, TWindow to, int n) {
  TruncatedLaurentComplex a(mc, from), b(mc, to);
  auto src = a.components(n);
  auto dst = b.components(n);
  SparseMatrix out(b.dim(n), a.dim(n));
  for (const auto& c : src)
    for (const auto& d : dst)
      if (c.r == d.r)
        for (int j = 0; j < mc.dim(c.m); ++j) out.set(d.offset + j, c.offset + j, Rational(1));
  return out;
}

bool empty_window(TWindow w) { return w.lo > w.hi; }

}  // namespace

SparseMatrix window_map(const MixedComplex& mc, TWindow from, TWindow to, int n) {
  if (from.lo < to.lo || from.hi < to.hi) throw std::invalid_argument("window_map needs from.lo >= to.lo and from.hi >= to.hi");
  return component_map(mc, from, to, n);
}

int required_bar_weight(int deg_hi, TWindow w) { return std::max(deg_hi + 1, deg_hi + 1 + 2 * (w.hi + 2)); }

// ----------------------------------------------------------------- engine

namespace {

class CyclicEngine {
 public:
  struct Spot {
    SubquotientBasis sq;
    HomologyCoordinates hc;
  };

  explicit CyclicEngine(const MixedComplex& mc) : mc_(mc) {}

  const Spot& homology(TWindow w, int n) {
    auto key = std::make_tuple(w.lo, w.hi, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    auto s = std::make_unique<Spot>();
    if (empty_window(w)) {
      s->sq = homology_at(SparseMatrix(0, 0), SparseMatrix(0, 0));
    } else {
      TruncatedLaurentComplex t(mc_, w);
      s->sq = homology_at(t.differential(n + 1), t.differential(n));
    }
    s->hc = HomologyCoordinates(s->sq);
    return *cache_.emplace(key, std::move(s)).first->second;
  }

  // Induced map on homology in class coordinates given a chain-level map
  // (rows: target chain space, cols: source chain space).
  SparseMatrix induced(TWindow from, int n_from, TWindow to, int n_to, const SparseMatrix& chain_map) {
    const Spot& a = homology(from, n_from);
    const Spot& b = homology(to, n_to);
    SparseMatrix m(b.hc.dim(), a.hc.dim());
    for (int j = 0; j < a.hc.dim(); ++j) {
      SparseVec img = chain_map.apply(a.hc.reps()[static_cast<size_t>(j)]);
      m.set_column(j, SparseVec::from_dense(b.hc.class_of(img)));
    }
    return m;
  }

  SparseMatrix window_induced(TWindow from, TWindow to, int n) {
    if (empty_window(from) || empty_window(to)) return SparseMatrix(homology(to, n).hc.dim(), homology(from, n).hc.dim());
    return induced(from, n, to, n, window_map(mc_, from, to, n));
  }

  const MixedComplex& mixed() const { return mc_; }

 private:
  const MixedComplex& mc_;
  std::map<std::tuple<int, int, int>, std::unique_ptr<Spot>> cache_;
};

enum class Variant { negative, periodic, ordinary };

std::pair<TWindow, TWindow> stable_windows(Variant v, TWindow w) {
  switch (v) {
    case Variant::negative:
      return {{0, w.hi + 1}, {0, w.hi}};
    case Variant::periodic:
      return {{w.lo, w.hi + 1}, {w.lo - 1, w.hi}};
    case Variant::ordinary:
      break;
  }
  return {{w.lo, 0}, {w.lo - 1, 0}};
}

int stable_dim(CyclicEngine& e, Variant v, TWindow w, int n) {
  auto [from, to] = stable_windows(v, w);
  return rank(e.window_induced(from, to, n));
}

GradedDims stable_dims(const DgAlgebra& a, Variant v, int deg_lo, int deg_hi, TWindow w) {
  if (v != Variant::negative && w.hi < 0) throw std::invalid_argument("t-window must contain 0");
  if (w.lo > 0) throw std::invalid_argument("t-window must contain 0");
  TWindow big{w.lo - 1, w.hi + 1};
  const int bar = v == Variant::ordinary ? deg_hi + 1 : required_bar_weight(deg_hi, w);
  MixedComplex mc(a, bar);
  CyclicEngine e(mc);
  GradedDims g;
  for (int n = deg_lo; n <= deg_hi; ++n) {
    const int d = stable_dim(e, v, w, n);
    const int d2 = stable_dim(e, v, big, n);
    if (d != d2)
      throw NotStabilized(n, "window " + w.str() + " gives " + std::to_string(d) + ", window " + big.str() + " gives " +
                                 std::to_string(d2));
    g.dims[n] = d;
    auto [from, to] = stable_windows(v, w);
    SparseMatrix chain = empty_window(from) || empty_window(to) ? SparseMatrix() : window_map(mc, from, to, n);
    const auto& reps = e.homology(from, n).hc.reps();
    const auto& coords = e.homology(to, n).hc;
    EchelonBasis cls(coords.dim());
    for (const auto& z : reps) {
      SparseVec img = chain.apply(z);
      if (cls.insert(SparseVec::from_dense(coords.class_of(img)))) g.reps[n].push_back(img);
    }
  }
  return g;
}

}  // namespace

GradedDims negative_cyclic_homology(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w) {
  return stable_dims(a, Variant::negative, deg_lo, deg_hi, w);
}

std::pair<int, int> periodic_cyclic_homology(const DgAlgebra& a, TWindow w) {
  GradedDims g = stable_dims(a, Variant::periodic, 0, 1, w);
  return {g.dims[0], g.dims[1]};
}

GradedDims cyclic_homology(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w) {
  return stable_dims(a, Variant::ordinary, deg_lo, deg_hi, w);
}

// -------------------------------------------------------------------- LES

bool LesReport::exact() const {
  for (const auto& d : degrees)
    if (!d.exact) return false;
  return true;
}

std::string LesReport::str() const {
  std::ostringstream os;
  os << "n\tHN_n\tHP_n\tHC_{n-2}\texact\n";
  for (const auto& d : degrees) {
    os << d.n << "\t" << d.hn << "\t" << d.hp << "\t" << d.hc_shifted << "\t" << (d.exact ? "yes" : "no");
    if (!d.note.empty()) os << "\t" << d.note;
    os << "\n";
  }
  return os.str();
}

namespace {

SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix m(a.rows(), a.cols() + b.cols());
  for (int j = 0; j < a.cols(); ++j) m.set_column(j, a.column(j));
  for (int j = 0; j < b.cols(); ++j) m.set_column(a.cols() + j, b.column(j));
  return m;
}

}  // namespace

LesReport sbi_check(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow w) {
  if (w.lo > -1 || w.hi < 0) throw std::invalid_argument("sbi_check needs a window with lo <= -1 <= 0 <= hi");
  MixedComplex mc(a, required_bar_weight(deg_hi, w));
  CyclicEngine e(mc);
  // Source and target short exact sequences N -> P -> Q.
  const TWindow Ns{0, w.hi + 1}, Nt{0, w.hi};
  const TWindow Ps{w.lo, w.hi + 1}, Pt{w.lo - 1, w.hi};
  const TWindow Qs{w.lo, -1}, Qt{w.lo - 1, -1};

  auto image = [&](TWindow s, TWindow t, int n) { return e.window_induced(s, t, n); };
  auto inc = [&](int n) { return e.induced(Nt, n, Pt, n, window_map(mc, Nt, Pt, n)); };
  auto proj = [&](int n) { return e.induced(Pt, n, Qt, n, window_map(mc, Pt, Qt, n)); };
  auto connecting = [&](int n) {
    // Lift a Q-cycle to P, apply the total differential, read off N.
    TruncatedLaurentComplex P(mc, Pt);
    SparseMatrix chain = component_map(mc, Pt, Nt, n - 1) * P.differential(n) * component_map(mc, Qt, Pt, n);
    return e.induced(Qt, n, Nt, n - 1, chain);
  };

  LesReport rep;
  for (int n = deg_lo; n <= deg_hi; ++n) {
    LesDegree d;
    d.n = n;
    SparseMatrix IN = image(Ns, Nt, n), IP = image(Ps, Pt, n), IQ = image(Qs, Qt, n);
    SparseMatrix INm = image(Ns, Nt, n - 1);
    d.hn = rank(IN);
    d.hp = rank(IP);
    d.hc_shifted = rank(IQ);
    const int dimNm = rank(INm);
    SparseMatrix iN = inc(n) * IN, pP = proj(n) * IP, dQ = connecting(n) * IQ, iNm = inc(n - 1) * INm;
    const int r_i = rank(iN), r_p = rank(pP), r_d = rank(dQ), r_im = rank(iNm);
    std::vector<std::string> bad;
    if (rank(hstack(IP, iN)) != d.hp) bad.push_back("HN image leaves stable HP");
    if (rank(hstack(IQ, pP)) != d.hc_shifted) bad.push_back("HP image leaves stable HC");
    if (rank(hstack(INm, dQ)) != dimNm) bad.push_back("connecting image leaves stable HN");
    if (r_i + r_p != d.hp) bad.push_back("not exact at HP_n");
    if (r_p + r_d != d.hc_shifted) bad.push_back("not exact at HC_{n-2}");
    if (r_d + r_im != dimNm) bad.push_back("not exact at HN_{n-1}");
    d.exact = bad.empty();
    for (size_t k = 0; k < bad.size(); ++k) d.note += (k ? "; " : "") + bad[k];
    rep.degrees.push_back(d);
  }
  return rep;
}

// --------------------------------------------------------- spectral sequence

std::string SpectralReport::str() const {
  std::ostringstream os;
  os << "window " << window.str() << "\n";
  os << "i\tn\tE1\td1\tE2\tF^i\n";
  for (const auto& [k, v] : e1) {
    auto get = [&](const std::map<std::pair<int, int>, int>& m) {
      auto it = m.find(k);
      return it == m.end() ? 0 : it->second;
    };
    os << k.first << "\t" << k.second << "\t" << v << "\t" << get(d1_rank) << "\t" << get(e2) << "\t" << get(filtration)
       << "\n";
  }
  for (const auto& [n, v] : abutment) os << "HP_" << n << " = " << v << "\n";
  os << "degenerate_at_E1 = " << (degenerate_at_e1 ? "true" : "false") << " (window " << window.str() << ")\n";
  return os.str();
}

SpectralReport hodge_spectral_sequence(const DgAlgebra& a, TWindow w, int deg_lo, int deg_hi) {
  SpectralReport rep;
  rep.window = w;
  rep.deg_lo = deg_lo;
  rep.deg_hi = deg_hi;
  GradedDims hp = stable_dims(a, Variant::periodic, deg_lo, deg_hi, w);
  rep.abutment = hp.dims;

  MixedComplex mc(a, required_bar_weight(deg_hi, w));
  CyclicEngine e(mc);
  std::map<int, std::unique_ptr<HomologyCoordinates>> hh;
  std::map<int, SubquotientBasis> hh_sq;
  auto HH = [&](int m) -> const HomologyCoordinates& {
    auto it = hh.find(m);
    if (it != hh.end()) return *it->second;
    SubquotientBasis sq = homology_at(mc.boundary(m + 1), mc.boundary(m));
    auto p = std::make_unique<HomologyCoordinates>(sq);
    hh_sq[m] = std::move(sq);
    return *hh.emplace(m, std::move(p)).first->second;
  };
  std::map<int, int> d1_at;  // rank of B: HH_m -> HH_{m+1}
  auto d1 = [&](int m) {
    auto it = d1_at.find(m);
    if (it != d1_at.end()) return it->second;
    const auto& src = HH(m);
    const auto& dst = HH(m + 1);
    SparseMatrix M(dst.dim(), src.dim());
    for (int j = 0; j < src.dim(); ++j)
      M.set_column(j, SparseVec::from_dense(dst.class_of(mc.connes(m).apply(src.reps()[static_cast<size_t>(j)]))));
    return d1_at[m] = rank(M);
  };

  bool degenerate = true;
  for (int n = deg_lo; n <= deg_hi; ++n) {
    int total = 0;
    for (int i = w.lo; i <= w.hi; ++i) {
      const int m = n + 2 * i;
      if (m < 0) continue;
      const int dim = HH(m).dim();
      rep.e1[{i, n}] = dim;
      total += dim;
      const int out = i + 1 <= w.hi ? d1(m) : 0;
      const int in = i - 1 >= w.lo && m - 1 >= 0 ? d1(m - 1) : 0;
      rep.d1_rank[{i, n}] = out;
      rep.e2[{i, n}] = dim - out - in;
      if (out != 0) degenerate = false;
      rep.filtration[{i, n}] = rank(e.window_induced({i, w.hi + 1}, {w.lo - 1, w.hi}, n));
    }
    if (total != rep.abutment[n]) degenerate = false;
  }
  rep.degenerate_at_e1 = degenerate;
  return rep;
}

}  // namespace ncp
