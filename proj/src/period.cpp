#include "ncp/period.hpp"

#include <climits>
#include <sstream>

namespace ncp {

namespace {

constexpr int kUnbounded = INT_MAX / 4;

int t_exponent_for_arity(int l) { return l % 2 == 0 ? -l / 2 : -(l + 1) / 2; }

std::string matrix_text(const SparseMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      os << m.get(r, c).str();
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

// ----------------------------------------------------------- homology data

int HomologyData::dim(int n) const {
  if (n < 0) return 0;
  auto it = hh.dims.find(n);
  if (it == hh.dims.end()) throw DegreeOutOfComputedRange("HH_" + std::to_string(n) + " was not computed");
  return it->second;
}

std::vector<Rational> HomologyData::class_of(int n, const SparseVec& z) const {
  if (n < 0) return {};
  auto it = coords.find(n);
  if (it == coords.end()) throw DegreeOutOfComputedRange("HH_" + std::to_string(n) + " was not computed");
  return it->second.class_of(z);
}

HomologyData homology_data(std::shared_ptr<const HochschildContext> ctx, int lo, int hi) {
  if (ctx->is_relative()) throw std::invalid_argument("period computations use the normalized complex");
  if (hi + 1 > ctx->max_weight()) throw DegreeOutOfComputedRange("HH_" + std::to_string(hi) + " needs bar weight " + std::to_string(hi + 1));
  HomologyData hd;
  hd.ctx = std::move(ctx);
  hd.lo = std::max(lo, 0);
  hd.hi = hi;
  hd.hh = hochschild_homology(*hd.ctx, hd.lo, hi);
  for (const auto& [n, sq] : hd.hh.spaces) hd.coords.emplace(n, HomologyCoordinates(sq));
  return hd;
}

bool PeriodClass::is_zero() const {
  for (const auto& b : blocks)
    if (!b.matrix.is_zero()) return false;
  return true;
}

PeriodClass period_class(const HomologyData& hd, const Cochain& p, const std::string& label) {
  PeriodClass pc;
  pc.label = label;
  const HochschildContext& ctx = *hd.ctx;
  for (int l : p.arities()) {
    if (l == 0) continue;  // exponent 0: killed by the quotient
    Cochain part = p.arity_part(l);
    for (int i = hd.lo; i <= hd.hi; ++i) {
      const int j = i - l;
      if (j < hd.lo) continue;
      PeriodBlock b;
      b.from_degree = i;
      b.to_degree = j;
      b.t_exponent = t_exponent_for_arity(l);
      b.matrix = SparseMatrix(hd.dim(j), hd.dim(i));
      const auto& reps = hd.hh.reps.at(i);
      for (size_t c = 0; c < reps.size(); ++c) {
        Chain z;
        z.parts[i] = reps[c];
        Chain img = contraction(ctx, part, z);
        auto it = img.parts.find(j);
        if (it == img.parts.end()) continue;
        std::vector<Rational> cls = hd.class_of(j, it->second);
        for (size_t r = 0; r < cls.size(); ++r)
          if (!cls[r].is_zero()) b.matrix.set(static_cast<int>(r), static_cast<int>(c), cls[r]);
      }
      pc.blocks.push_back(std::move(b));
    }
  }
  return pc;
}

std::string FirstOrderPeriods::str() const {
  std::ostringstream os;
  os << "HH dims";
  for (const auto& [n, d] : hh_dims) os << " " << n << ":" << d;
  os << "\nHH^2 dim " << hh2_reps.size() << "\n";
  for (const auto& c : classes) {
    os << c.label << "\n";
    for (const auto& b : c.blocks)
      os << "  HH_" << b.from_degree << " -> HH_" << b.to_degree << " t^" << b.t_exponent << " "
         << matrix_text(b.matrix) << "\n";
  }
  return os.str();
}

FirstOrderPeriods first_order_period_matrix(const HomologyData& hd) {
  const HochschildContext& ctx = *hd.ctx;
  if (!ctx.algebra().concentrated_in_degree_zero())
    throw std::invalid_argument("first_order_period_matrix needs an algebra concentrated in degree 0");
  FirstOrderPeriods fp;
  fp.deg_lo = hd.lo;
  fp.deg_hi = hd.hi;
  fp.hh_dims = hd.hh.dims;
  GradedDims coh = hochschild_cohomology(ctx, 2, 2);
  for (size_t j = 0; j < coh.reps.at(2).size(); ++j) {
    fp.hh2_reps.push_back(cochain_from_vector(ctx, 2, coh.reps.at(2)[j]));
    fp.classes.push_back(period_class(hd, fp.hh2_reps.back(), "P" + std::to_string(j)));
  }
  return fp;
}

FirstOrderPeriods first_order_period_matrix(const DgAlgebra& a, int deg_lo, int deg_hi) {
  auto ctx = std::make_shared<const HochschildContext>(a, deg_hi + 2);
  return first_order_period_matrix(homology_data(ctx, deg_lo, deg_hi));
}

// ---------------------------------------------------------------- Torelli

std::string TorelliReport::str() const {
  std::ostringstream os;
  os << "dim HH²=" << hh2_dim << ", ";
  if (hh2_dim == 0)
    os << "injective (vacuous)";
  else
    os << "rank " << rank << ", " << (injective ? "injective" : "not injective");
  return os.str();
}

TorelliReport torelli_rank(const FirstOrderPeriods& p) {
  TorelliReport r;
  r.hh2_dim = static_cast<int>(p.classes.size());
  if (p.classes.empty()) return r;
  // Flatten each class into one column.
  int rows = 0;
  for (const auto& b : p.classes[0].blocks) rows += b.matrix.rows() * b.matrix.cols();
  SparseMatrix m(rows, r.hh2_dim);
  for (int c = 0; c < r.hh2_dim; ++c) {
    int off = 0;
    for (const auto& b : p.classes[static_cast<size_t>(c)].blocks) {
      for (const auto& [i, j, v] : b.matrix.entries()) m.set(off + i + b.matrix.rows() * j, c, v);
      off += b.matrix.rows() * b.matrix.cols();
    }
  }
  r.rank = rank(m);
  r.injective = r.rank == r.hh2_dim;
  return r;
}

TorelliReport torelli_rank(const DgAlgebra& a, int deg_lo, int deg_hi) {
  return torelli_rank(first_order_period_matrix(a, deg_lo, deg_hi));
}

// ------------------------------------------------------------ VdB duality

bool VdbReport::all_iso() const {
  for (const auto& d : degrees)
    if (!d.iso) return false;
  return true;
}

std::string VdbReport::str() const {
  std::ostringstream os;
  for (const auto& g : degrees)
    os << "s=" << g.s << " HH^" << g.s << "=" << g.cohomology_dim << " HH_" << d - g.s << "=" << g.homology_dim
       << " rank=" << g.rank << " " << (g.iso ? "iso" : "not iso") << "\n";
  return os.str();
}

VdbReport vdb_duality_check(const DgAlgebra& a, int d, const std::vector<Rational>& pi, int s_lo, int s_hi, int bar) {
  if (d < 0 || d + 1 > bar) throw DegreeOutOfComputedRange("HH_" + std::to_string(d) + " is outside bar bound " + std::to_string(bar));
  if (s_lo < 0 || s_hi + 1 > bar || s_lo > s_hi)
    throw DegreeOutOfComputedRange("cohomological degrees outside the computed range");
  if (!a.concentrated_in_degree_zero()) throw std::invalid_argument("vdb_duality_check needs an algebra concentrated in degree 0");
  auto ctx = std::make_shared<const HochschildContext>(a, bar);
  HomologyData hd = homology_data(ctx, 0, d);
  if (static_cast<int>(pi.size()) != hd.dim(d))
    throw std::invalid_argument("pi has " + std::to_string(pi.size()) + " coordinates, HH_" + std::to_string(d) +
                                " has dimension " + std::to_string(hd.dim(d)));
  SparseVec rep;
  for (size_t j = 0; j < pi.size(); ++j) rep.axpy(pi[j], hd.hh.reps.at(d)[j]);
  GradedDims coh = hochschild_cohomology(*ctx, s_lo, s_hi);
  VdbReport out;
  out.d = d;
  for (int s = s_lo; s <= s_hi; ++s) {
    VdbDegree g;
    g.s = s;
    g.cohomology_dim = coh.dims.at(s);
    g.homology_dim = hd.dim(d - s);
    g.matrix = SparseMatrix(g.homology_dim, g.cohomology_dim);
    if (g.homology_dim > 0)
      for (int c = 0; c < g.cohomology_dim; ++c) {
        Cochain p = cochain_from_vector(*ctx, s, coh.reps.at(s)[static_cast<size_t>(c)]);
        Chain z;
        z.parts[d] = rep;
        Chain img = contraction(*ctx, p, z);
        auto it = img.parts.find(d - s);
        if (it == img.parts.end()) continue;
        std::vector<Rational> cls = hd.class_of(d - s, it->second);
        for (size_t r = 0; r < cls.size(); ++r)
          if (!cls[r].is_zero()) g.matrix.set(static_cast<int>(r), c, cls[r]);
      }
    g.rank = rank(g.matrix);
    g.iso = g.homology_dim == g.cohomology_dim && g.rank == g.cohomology_dim;
    out.degrees.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------- Griffiths

std::string GriffithsReport::str() const {
  std::ostringstream os;
  os << (transversal ? "transversal" : "NOT transversal") << (formal ? " (formal: no E1 degeneration verdict)" : "");
  for (const auto& v : violations) os << "\n  " << v;
  return os.str();
}

GriffithsReport griffiths_transversality_check(const std::vector<PeriodClass>& classes, bool degenerate) {
  GriffithsReport r;
  r.formal = !degenerate;
  for (const auto& c : classes)
    for (const auto& b : c.blocks) {
      if (b.matrix.is_zero()) continue;
      if (b.t_exponent != -1 || b.to_degree != b.from_degree - 2) {
        r.transversal = false;
        r.violations.push_back(c.label + ": block HH_" + std::to_string(b.from_degree) + " -> HH_" +
                               std::to_string(b.to_degree) + " at t^" + std::to_string(b.t_exponent));
      }
    }
  return r;
}

GriffithsReport griffiths_transversality_check(const DgAlgebra& a, int deg_lo, int deg_hi, TWindow ss_window) {
  FirstOrderPeriods p = first_order_period_matrix(a, deg_lo, deg_hi);
  bool degenerate = false;
  try {
    degenerate = hodge_spectral_sequence(a, ss_window, 0, 1).degenerate_at_e1;
  } catch (const NotStabilized&) {
    degenerate = false;
  }
  return griffiths_transversality_check(p.classes, degenerate);
}

// --------------------------------------------------------------- LaurentOp

bool LaurentOp::is_zero() const {
  for (const auto& [k, w] : parts)
    if (!w.is_zero()) return false;
  return true;
}

void LaurentOp::axpy(const Rational& c, const LaurentOp& o) {
  if (parts.empty() && valid == 0) valid = kUnbounded;
  valid = std::min(valid, o.valid);
  for (const auto& [k, w] : o.parts) parts[k].axpy(c, w);
  // Blocks past the exact range carry no information.
  for (auto& [k, w] : parts)
    for (auto it = w.blocks.begin(); it != w.blocks.end();)
      it = it->first.first > valid ? w.blocks.erase(it) : std::next(it);
}

LaurentOp LaurentOp::scaled(const Rational& c) const {
  LaurentOp r;
  r.valid = valid;
  r.axpy(c, *this);
  return r;
}

LaurentOp LaurentOp::truncated(const ArtinLocalRing& ring, int max_level) const {
  LaurentOp r;
  r.valid = valid;
  for (const auto& [k, w] : parts)
    if (ring.level(k.second) <= max_level) r.parts.emplace(k, w);
  return r;
}

LaurentOp LaurentOp::component(int k) const {
  LaurentOp r;
  r.valid = valid;
  for (const auto& [key, w] : parts)
    if (key.second == k) r.parts.emplace(std::make_pair(key.first, 0), w);
  return r;
}

LaurentOp LaurentOp::times_basis(int k) const {
  LaurentOp r;
  r.valid = valid;
  for (const auto& [key, w] : parts) {
    if (key.second != 0) throw std::invalid_argument("times_basis: operator already has ring coefficients");
    r.parts.emplace(std::make_pair(key.first, k), w);
  }
  return r;
}

LaurentOp LaurentOp::restricted(int max_source) const {
  LaurentOp r;
  r.valid = std::min(valid, max_source);
  for (const auto& [key, w] : parts) r.parts.emplace(key, w.restricted(0, r.valid));
  return r;
}

int LaurentOp::min_exponent() const {
  int m = INT_MAX;
  for (const auto& [key, w] : parts)
    if (!w.is_zero()) m = std::min(m, key.first);
  return m;
}

int LaurentOp::max_exponent() const {
  int m = INT_MIN;
  for (const auto& [key, w] : parts)
    if (!w.is_zero()) m = std::max(m, key.first);
  return m;
}

int LaurentOp::raise() const {
  int r = 0;
  for (const auto& [key, w] : parts)
    for (const auto& [b, m] : w.blocks)
      if (!m.is_zero()) r = std::max(r, b.second - b.first);
  return r;
}

LaurentOp laurent_compose(const ArtinLocalRing& ring, const LaurentOp& a, const LaurentOp& b) {
  LaurentOp r;
  r.valid = std::min(b.valid, a.valid - b.raise());
  for (const auto& [kb, wb] : b.parts) {
    if (wb.is_zero()) continue;
    WeightOp wb_r = wb.restricted(0, r.valid);
    for (const auto& [ka, wa] : a.parts) {
      if (wa.is_zero()) continue;
      const SparseVec& prod = ring.product(ka.second, kb.second);
      if (prod.empty()) continue;
      WeightOp c = compose(wa, wb_r);
      if (c.is_zero()) continue;
      for (const auto& [k, x] : prod.e) r.parts[{ka.first + kb.first, k}].axpy(x, c);
    }
  }
  return r;
}

LaurentOp laurent_identity(const HochschildContext& ctx, int valid) {
  LaurentOp r;
  r.valid = valid;
  WeightOp& w = r.parts[{0, 0}];
  for (int m = 0; m <= valid; ++m) w.blocks.emplace(std::make_pair(m, m), SparseMatrix::identity(ctx.space().dim(m)));
  return r;
}

LaurentOp laurent_exp(const ArtinLocalRing& ring, const HochschildContext& ctx, const LaurentOp& a) {
  for (const auto& [key, w] : a.parts)
    if (key.second == 0 && !w.is_zero()) throw std::invalid_argument("laurent_exp: operator not in m_R");
  const int valid = std::min(a.valid, ctx.max_weight());
  LaurentOp term = laurent_identity(ctx, valid);
  LaurentOp out = term;
  for (int k = 1; k <= ring.nilpotency_order(); ++k) {
    term = laurent_compose(ring, a, term).scaled(Rational(1, k));
    if (term.is_zero()) break;
    out.axpy(Rational(1), term);
  }
  return out;
}

LaurentOp laurent_log(const ArtinLocalRing& ring, const HochschildContext& ctx, const LaurentOp& u) {
  LaurentOp n = u;
  n.axpy(Rational(-1), laurent_identity(ctx, std::min(u.valid, ctx.max_weight())));
  for (const auto& [key, w] : n.parts)
    if (key.second == 0 && !w.is_zero()) throw std::invalid_argument("laurent_log: operator not unipotent mod m_R");
  LaurentOp out;
  out.valid = n.valid;
  LaurentOp term = n;
  for (int k = 1; k <= ring.nilpotency_order(); ++k) {
    if (term.is_zero()) break;
    out.axpy(Rational(k % 2 == 1 ? 1 : -1, k), term);
    term = laurent_compose(ring, n, term);
  }
  return out;
}

std::string describe_nonzero(const ArtinLocalRing& ring, const LaurentOp& op) {
  for (const auto& [key, w] : op.parts)
    for (const auto& [b, m] : w.blocks)
      if (!m.is_zero()) {
        std::ostringstream os;
        os << "t^" << key.first << " " << ring.labels()[static_cast<size_t>(key.second)] << " weight " << b.first
           << " -> " << b.second;
        return os.str();
      }
  return "";
}

LaurentOp periodic_differential(const HochschildContext& ctx, const ArtinLocalRing& ring, int top) {
  (void)ring;
  OperatorCache oc(ctx);
  LaurentOp d;
  d.valid = top;
  d.parts[{0, 0}] = oc.boundary(0, top);
  d.parts[{1, 0}] = oc.connes(0, top);
  return d;
}

LaurentOp deformed_periodic_differential(const HochschildContext& ctx, const MCElement& x, int top) {
  LaurentOp d = periodic_differential(ctx, x.base, top);
  OperatorCache oc(ctx);
  for (int k = 1; k < x.value.ring_dim(); ++k)
    if (!x.value.comps[static_cast<size_t>(k)].is_zero()) d.parts[{0, k}] = oc.lie(x.value.comps[static_cast<size_t>(k)], 0, top);
  return d;
}

// ------------------------------------------------------- commutator solver

bool solve_commutator(const HochschildContext& ctx, const LaurentOp& w, int parity, int shift, int x_lo, int x_hi,
                      int eq_lo, int eq_hi, LaurentOp& x) {
  for (const auto& [key, part] : w.parts)
    if (key.second != 0 && !part.is_zero()) throw std::invalid_argument("solve_commutator: right side has ring coefficients");
  const ChainSpace& sp = ctx.space();
  const int top = ctx.max_weight();
  const Rational sigma = parity % 2 == 0 ? Rational(-1) : Rational(1);  // coefficient of X D
  std::vector<SparseMatrix> bd(static_cast<size_t>(top) + 1), bdt(static_cast<size_t>(top) + 1);
  std::vector<SparseMatrix> cn(static_cast<size_t>(top) + 1), cnt(static_cast<size_t>(top) + 1);
  for (int m = 1; m <= top; ++m) {
    bd[static_cast<size_t>(m)] = boundary_matrix(ctx, m);
    bdt[static_cast<size_t>(m)] = bd[static_cast<size_t>(m)].transpose();
  }
  for (int m = 0; m < top; ++m) {
    cn[static_cast<size_t>(m)] = connes_matrix(ctx, m);
    cnt[static_cast<size_t>(m)] = cn[static_cast<size_t>(m)].transpose();
  }
  // Unknown blocks X_e(m): C_m -> C_{m+2e+shift}.
  std::map<std::pair<int, int>, int> var_off;
  int nvar = 0;
  for (int e = x_lo; e <= x_hi; ++e)
    for (int m = 0; m <= top; ++m) {
      const int t = m + 2 * e + shift;
      if (t < 0 || t > top) continue;
      var_off[{e, m}] = nvar;
      nvar += sp.dim(t) * sp.dim(m);
    }
  // Equations (e, m): C_m -> C_{m+2e+shift-1}.
  const int eq_top = std::min(w.valid, top - 1);
  std::map<std::pair<int, int>, int> eq_off;
  int neq = 0;
  for (int e = eq_lo; e <= eq_hi; ++e)
    for (int m = 0; m <= eq_top; ++m) {
      const int t = m + 2 * e + shift - 1;
      if (t < 0 || t > top) continue;
      // ∂ X_e(m) needs X_e(m) to exist when it is part of the ansatz.
      if (e >= x_lo && e <= x_hi && t + 1 > top) continue;
      eq_off[{e, m}] = neq;
      neq += sp.dim(t) * sp.dim(m);
    }
  auto eq_row = [&](int e, int m, int r, int c) -> int {
    auto it = eq_off.find({e, m});
    if (it == eq_off.end()) return -1;
    const int t = m + 2 * e + shift - 1;
    return it->second + r + sp.dim(t) * c;
  };
  SparseMatrix sys(neq, nvar);
  for (const auto& [key, off] : var_off) {
    const auto [e, m] = key;
    const int t = m + 2 * e + shift;
    const int rows = sp.dim(t), cols = sp.dim(m);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) {
        std::vector<std::pair<int, Rational>> col;
        // D X: ∂ ∘ X_e(m) lands in equation (e, m); B ∘ X_e(m) in (e+1, m).
        if (t >= 1)
          for (const auto& [r, v] : bd[static_cast<size_t>(t)].column(i).e) {
            int row = eq_row(e, m, r, j);
            if (row >= 0) col.emplace_back(row, v);
          }
        if (t < top)
          for (const auto& [r, v] : cn[static_cast<size_t>(t)].column(i).e) {
            int row = eq_row(e + 1, m, r, j);
            if (row >= 0) col.emplace_back(row, v);
          }
        // X D: X_e(m) ∘ ∂_{m+1} in equation (e, m+1); X_e(m) ∘ B_{m-1} in (e+1, m-1).
        if (m + 1 <= top)
          for (const auto& [c, v] : bdt[static_cast<size_t>(m + 1)].column(j).e) {
            int row = eq_row(e, m + 1, i, c);
            if (row >= 0) col.emplace_back(row, sigma * v);
          }
        if (m >= 1)
          for (const auto& [c, v] : cnt[static_cast<size_t>(m - 1)].column(j).e) {
            int row = eq_row(e + 1, m - 1, i, c);
            if (row >= 0) col.emplace_back(row, sigma * v);
          }
        if (!col.empty()) sys.set_column(off + i + rows * j, make_sparse(std::move(col)));
      }
  }
  std::vector<std::pair<int, Rational>> rhs_e;
  for (const auto& [key, part] : w.parts) {
    if (key.second != 0) continue;
    for (const auto& [b, mat] : part.blocks) {
      const int e = key.first, m = b.first;
      if (b.second != m + 2 * e + shift - 1) throw std::invalid_argument("solve_commutator: right side has the wrong degree");
      if (eq_off.find({e, m}) == eq_off.end()) {
        if (m <= eq_top && !mat.is_zero()) return false;  // outside the allowed exponents
        continue;
      }
      for (const auto& [r, c, v] : mat.entries()) rhs_e.emplace_back(eq_row(e, m, r, c), v);
    }
  }
  SparseVec sol;
  if (!solve(sys, make_sparse(std::move(rhs_e)), sol)) return false;
  x = LaurentOp();
  x.valid = eq_top;
  for (const auto& [key, off] : var_off) {
    const auto [e, m] = key;
    const int t = m + 2 * e + shift;
    const int rows = sp.dim(t), size = rows * sp.dim(m);
    SparseMatrix blk(rows, sp.dim(m));
    auto it = std::lower_bound(sol.e.begin(), sol.e.end(), std::make_pair(off, Rational(0)),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    for (; it != sol.e.end() && it->first < off + size; ++it) blk.set((it->first - off) % rows, (it->first - off) / rows, it->second);
    if (!blk.is_zero()) x.parts[{e, 0}].blocks.emplace(std::make_pair(m, t), std::move(blk));
  }
  return true;
}

// --------------------------------------------------------- trivialization

namespace {

// D X - X D for an even operator X (ring index 0).
LaurentOp even_commutator(const ArtinLocalRing& ring, const LaurentOp& d, const LaurentOp& x) {
  LaurentOp r = laurent_compose(ring, d, x);
  r.axpy(Rational(-1), laurent_compose(ring, x, d));
  return r;
}

LaurentOp conjugate(const ArtinLocalRing& ring, const HochschildContext& ctx, const LaurentOp& a, const LaurentOp& d) {
  if (a.is_zero()) return d;
  return laurent_compose(ring, laurent_exp(ring, ctx, a), laurent_compose(ring, d, laurent_exp(ring, ctx, a.scaled(Rational(-1)))));
}

}  // namespace

std::string Trivialization::str() const {
  std::ostringstream os;
  os << (found ? "trivialization found" : "no trivialization") << " window " << window.str() << " top weight " << top;
  if (found) os << (verified ? ", verified" : ", NOT verified");
  for (const auto& s : steps)
    os << "\n  step " << s.level << " " << s.ring_element << ": bare seed " << (s.bare_seed_closes ? "closes" : "open")
       << ", seed with homotopy " << (s.homotopy_seed_closes ? "closes" : "open")
       << (s.solver_used ? ", corrected by linear solve" : "");
  if (!found) os << "\n  failed at step " << failed_level << ": " << witness;
  return os.str();
}

Trivialization trivialize_periodic(const HochschildContext& ctx, const MCElement& x, TWindow w, int top) {
  if (ctx.is_relative()) throw std::invalid_argument("trivialize_periodic uses the normalized complex");
  if (!is_maurer_cartan(ctx, x)) throw NotMaurerCartan("trivialize_periodic: element is not Maurer-Cartan");
  if (top < 0) top = ctx.max_weight() - 1;
  if (top > ctx.max_weight() - 1) throw BarBoundExceeded("trivialize_periodic: top weight above bar bound");
  const ArtinLocalRing& ring = x.base;
  Trivialization res;
  res.window = w;
  res.top = top;
  const LaurentOp d0 = periodic_differential(ctx, ring, top);
  const LaurentOp dx = deformed_periodic_differential(ctx, x, top);
  OperatorCache oc(ctx);
  LaurentOp a;
  a.valid = top;
  for (int level = 1; level <= ring.max_level(); ++level) {
    LaurentOp err = conjugate(ring, ctx, a, dx);
    err.axpy(Rational(-1), d0);
    err = err.truncated(ring, level);
    for (const auto& [key, part] : err.parts)
      if (ring.level(key.second) < level && !part.is_zero())
        throw std::logic_error("trivialize_periodic: lower filtration step not solved");
    for (int k = 0; k < ring.dim(); ++k) {
      if (ring.level(k) != level) continue;
      LaurentOp wk = err.component(k);
      const Cochain& xk = x.value.comps[static_cast<size_t>(k)];
      TrivializationStep step;
      step.level = level;
      step.ring_element = ring.labels()[static_cast<size_t>(k)];
      LaurentOp seed;
      seed.valid = top;
      if (!xk.is_zero()) seed.parts[{-1, 0}] = oc.contraction(xk, 0, top);
      seed = seed.scaled(Rational(-1));
      LaurentOp rem = wk;
      rem.axpy(Rational(-1), even_commutator(ring, d0, seed));
      step.bare_seed_closes = rem.is_zero();
      if (!xk.is_zero()) {
        LaurentOp s;
        s.valid = top;
        s.parts[{0, 0}] = oc.homotopy(xk, 0, top);
        seed.axpy(Rational(-1), s);
      }
      rem = wk;
      rem.axpy(Rational(-1), even_commutator(ring, d0, seed));
      step.homotopy_seed_closes = rem.is_zero();
      if (!rem.is_zero()) {
        LaurentOp delta;
        if (!solve_commutator(ctx, rem, 0, 0, w.lo, w.hi, w.lo, w.hi + 1, delta)) {
          res.failed_level = level;
          res.witness = "no correction for " + step.ring_element + "; remainder at " + describe_nonzero(ring, rem);
          res.steps.push_back(step);
          return res;
        }
        step.solver_used = true;
        seed.axpy(Rational(1), delta);
      }
      if (!seed.is_zero() && (seed.min_exponent() < w.lo || seed.max_exponent() > w.hi))
        throw NotStabilized(level, "trivialization needs t-exponents outside " + w.str());
      a.axpy(Rational(1), seed.times_basis(k));
      res.steps.push_back(step);
    }
  }
  res.found = true;
  res.a = a;
  LaurentOp check = conjugate(ring, ctx, a, dx);
  check.axpy(Rational(-1), d0);
  res.verified = check.is_zero();
  if (!res.verified) res.witness = describe_nonzero(ring, check);
  return res;
}

PTD period_map_artin(const HochschildContext& ctx, const MCElement& x, TWindow w, int top) {
  PTD p;
  p.base = x.base;
  p.x = x;
  p.window = w;
  p.trivialization = trivialize_periodic(ctx, x, w, top);
  p.top = p.trivialization.top;
  if (!p.trivialization.found) throw NotStabilized(p.trivialization.failed_level, p.trivialization.witness);
  if (!p.trivialization.verified) throw std::logic_error("period_map_artin: trivialization does not verify");
  p.differential = deformed_periodic_differential(ctx, x, p.top);
  LaurentOp d0 = periodic_differential(ctx, x.base, p.top);
  LaurentOp red = p.differential.truncated(x.base, 0);
  red.axpy(Rational(-1), d0);
  p.reduction_trivial = red.is_zero() && p.trivialization.a.truncated(x.base, 0).is_zero();
  return p;
}

std::vector<PeriodClass> ptd_negative_blocks(const HomologyData& hd, const PTD& p) {
  std::vector<PeriodClass> out;
  for (int k = 0; k < p.base.dim(); ++k) {
    if (p.base.level(k) != 1) continue;
    PeriodClass pc;
    pc.label = p.base.labels()[static_cast<size_t>(k)];
    LaurentOp comp = p.trivialization.a.component(k);
    WeightOp neg;
    auto it = comp.parts.find({-1, 0});
    if (it != comp.parts.end()) neg = it->second;
    for (int i = hd.lo; i <= hd.hi; ++i) {
      const int j = i - 2;
      if (j < hd.lo) continue;
      if (i > comp.valid) throw DegreeOutOfComputedRange("trivialization is exact only up to weight " + std::to_string(comp.valid));
      PeriodBlock b;
      b.from_degree = i;
      b.to_degree = j;
      b.t_exponent = -1;
      b.matrix = SparseMatrix(hd.dim(j), hd.dim(i));
      const auto& reps = hd.hh.reps.at(i);
      for (size_t c = 0; c < reps.size(); ++c) {
        auto bt = neg.blocks.find({i, j});
        if (bt == neg.blocks.end()) continue;
        SparseVec img = bt->second.apply(reps[c]);
        img.scale(Rational(-1));
        std::vector<Rational> cls = hd.class_of(j, img);
        for (size_t r = 0; r < cls.size(); ++r)
          if (!cls[r].is_zero()) b.matrix.set(static_cast<int>(r), static_cast<int>(c), cls[r]);
      }
      pc.blocks.push_back(std::move(b));
    }
    out.push_back(std::move(pc));
  }
  return out;
}

PtdIsoResult ptd_isomorphic(const HochschildContext& ctx, const PTD& p, const PTD& q) {
  if (p.base.labels() != q.base.labels()) throw std::invalid_argument("ptd_isomorphic: base rings differ");
  if (p.top != q.top || p.window.lo != q.window.lo || p.window.hi != q.window.hi)
    throw std::invalid_argument("ptd_isomorphic: windows differ");
  const ArtinLocalRing& ring = p.base;
  const LaurentOp d0 = periodic_differential(ctx, ring, p.top);
  const LaurentOp& a1 = p.trivialization.a;
  const LaurentOp& a2 = q.trivialization.a;
  PtdIsoResult res;
  LaurentOp c;
  c.valid = p.top;
  auto eta_of = [&](const LaurentOp& cc) {
    LaurentOp dc = laurent_compose(ring, d0, cc);
    dc.axpy(Rational(1), laurent_compose(ring, cc, d0));
    LaurentOp u = laurent_compose(ring, laurent_exp(ring, ctx, a2.scaled(Rational(-1))),
                                  laurent_compose(ring, laurent_exp(ring, ctx, dc), laurent_exp(ring, ctx, a1)));
    return laurent_log(ring, ctx, u);
  };
  auto negative_part = [](const LaurentOp& op) {
    LaurentOp r;
    r.valid = op.valid;
    for (const auto& [key, w] : op.parts)
      if (key.first < 0) r.parts.emplace(key, w);
    return r;
  };
  for (int level = 1; level <= ring.max_level(); ++level) {
    LaurentOp neg = negative_part(eta_of(c)).truncated(ring, level);
    for (int k = 0; k < ring.dim(); ++k) {
      if (ring.level(k) != level) continue;
      LaurentOp nk = neg.component(k);
      if (nk.is_zero()) continue;
      if (nk.min_exponent() < p.window.lo) {
        res.failed_level = level;
        res.witness = "negative part below the window at " + describe_nonzero(ring, nk);
        return res;
      }
      LaurentOp ck;
      if (!solve_commutator(ctx, nk.scaled(Rational(-1)), 1, 1, p.window.lo, -1, p.window.lo, -1, ck)) {
        res.failed_level = level;
        res.witness = "negative part " + describe_nonzero(ring, nk) + " is not a commutator with ∂ + tB";
        return res;
      }
      c.axpy(Rational(1), ck.times_basis(k));
    }
  }
  LaurentOp eta = eta_of(c);
  LaurentOp neg = negative_part(eta);
  if (!neg.is_zero()) {
    res.failed_level = ring.max_level();
    res.witness = "negative part survives: " + describe_nonzero(ring, neg);
    return res;
  }
  // h = e^η must carry one deformed differential to the other.
  LaurentOp dp = deformed_periodic_differential(ctx, p.x, p.top);
  LaurentOp dq = deformed_periodic_differential(ctx, q.x, p.top);
  LaurentOp lhs = conjugate(ring, ctx, eta, dp);
  lhs.axpy(Rational(-1), dq);
  if (!lhs.is_zero()) {
    res.failed_level = ring.max_level();
    res.witness = "h does not intertwine: " + describe_nonzero(ring, lhs);
    return res;
  }
  res.isomorphic = true;
  res.h_log = eta;
  res.homotopy = c;
  return res;
}

}  // namespace ncp
