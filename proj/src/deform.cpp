#include "ncp/deform.hpp"

#include <sstream>

namespace ncp {

namespace {

void require_same_ring(const ArtinLocalRing& a, const ArtinLocalRing& b, const char* where) {
  if (a.labels() != b.labels() || a.dim() != b.dim()) throw std::invalid_argument(std::string(where) + ": base rings differ");
}

void require_degree_zero(const HochschildContext& ctx, const char* where) {
  if (!ctx.algebra().concentrated_in_degree_zero())
    throw std::invalid_argument(std::string(where) + " needs an algebra concentrated in degree 0");
}

std::string word_text(const DgAlgebra& a, const Word& w) {
  std::string s = "[";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += "|";
    s += a.labels[static_cast<size_t>(w[i])];
  }
  return s + "]";
}

// All words of length l over {0..d-1} in lexicographic order.
std::vector<Word> all_words(int d, int l) {
  std::vector<Word> out;
  Word w(static_cast<size_t>(l), 0);
  while (true) {
    out.push_back(w);
    int i = l - 1;
    while (i >= 0 && w[static_cast<size_t>(i)] == d - 1) w[static_cast<size_t>(i--)] = 0;
    if (i < 0) break;
    ++w[static_cast<size_t>(i)];
  }
  return out;
}

// Arity-one cochain components as d x d matrices (column i = value on e_i).
std::vector<SparseMatrix> arity_one_matrices(const HochschildContext& ctx, const RCochain& a) {
  const int d = ctx.dim();
  std::vector<SparseMatrix> out;
  for (const auto& c : a.comps) {
    SparseMatrix m(d, d);
    for (const auto& [w, v] : c.terms) {
      if (w.size() != 1) throw std::invalid_argument("gauge element has a component of arity " + std::to_string(w.size()));
      m.set_column(w[0], v);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ RCochain

bool RCochain::is_zero() const {
  for (const auto& c : comps)
    if (!c.is_zero()) return false;
  return true;
}

void RCochain::axpy(const Rational& c, const RCochain& o) {
  if (comps.size() < o.comps.size()) comps.resize(o.comps.size());
  for (size_t k = 0; k < o.comps.size(); ++k) comps[k].axpy(c, o.comps[k]);
}

RCochain RCochain::times(const ArtinLocalRing& ring, const RingElement& r) const {
  RCochain out(ring.dim());
  for (int i = 0; i < ring_dim(); ++i) {
    if (comps[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j < ring.dim(); ++j) {
      if (r[static_cast<size_t>(j)].is_zero()) continue;
      for (const auto& [k, c] : ring.product(i, j).e)
        out.comps[static_cast<size_t>(k)].axpy(c * r[static_cast<size_t>(j)], comps[static_cast<size_t>(i)]);
    }
  }
  return out;
}

int RCochain::lowest_level(const ArtinLocalRing& ring) const {
  int best = -1;
  for (int k = 0; k < ring_dim(); ++k)
    if (!comps[static_cast<size_t>(k)].is_zero() && (best < 0 || ring.level(k) < best)) best = ring.level(k);
  return best;
}

RCochain ring_multiple(const ArtinLocalRing& ring, int k, const Cochain& c) {
  RCochain out(ring.dim());
  out.comps[static_cast<size_t>(k)] = c;
  return out;
}

std::string format_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x) {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < x.ring_dim(); ++k) {
    if (x.comps[static_cast<size_t>(k)].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << ring.labels()[static_cast<size_t>(k)] << "*(" << format_cochain(ctx, x.comps[static_cast<size_t>(k)]) << ")";
  }
  return first ? "0" : os.str();
}

RCochain r_bracket(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x, const RCochain& y,
                   bool normalized, int max_arity) {
  RCochain out(ring.dim());
  for (int i = 0; i < x.ring_dim(); ++i) {
    if (x.comps[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j < y.ring_dim(); ++j) {
      if (y.comps[static_cast<size_t>(j)].is_zero()) continue;
      const SparseVec& prod = ring.product(i, j);
      if (prod.empty()) continue;
      Cochain br = bracket(ctx, x.comps[static_cast<size_t>(i)], y.comps[static_cast<size_t>(j)], normalized, max_arity);
      for (const auto& [k, c] : prod.e) out.comps[static_cast<size_t>(k)].axpy(c, br);
    }
  }
  return out;
}

RCochain r_differential(const HochschildContext& ctx, const RCochain& x, int max_arity) {
  RCochain out(x.ring_dim());
  for (int k = 0; k < x.ring_dim(); ++k)
    if (!x.comps[static_cast<size_t>(k)].is_zero())
      out.comps[static_cast<size_t>(k)] = cochain_differential(ctx, x.comps[static_cast<size_t>(k)], max_arity);
  return out;
}

RCochain mc_residual(const HochschildContext& ctx, const MCElement& x, int max_arity) {
  RCochain r = r_differential(ctx, x.value, max_arity);
  r.axpy(Rational(1, 2), r_bracket(ctx, x.base, x.value, x.value, true, max_arity));
  return r;
}

bool is_maurer_cartan(const HochschildContext& ctx, const MCElement& x, int max_arity) {
  return x.value.in_maximal_ideal() && mc_residual(ctx, x, max_arity).is_zero();
}

MCElement gauge_act(const HochschildContext& ctx, const GaugeElement& alpha, const MCElement& x, int max_arity) {
  require_same_ring(alpha.base, x.base, "gauge_act");
  if (!alpha.value.in_maximal_ideal()) throw std::invalid_argument("gauge element must have coefficients in m_R");
  const ArtinLocalRing& ring = x.base;
  const int order = ring.nilpotency_order();
  MCElement out{ring, x.value};
  // e^{ad α} x
  RCochain term = x.value;
  for (int k = 1; k <= order && !term.is_zero(); ++k) {
    term = r_bracket(ctx, ring, alpha.value, term, true, max_arity);
    for (auto& c : term.comps) c = c.scaled(Rational(1, k));
    out.value.axpy(Rational(1), term);
  }
  // - Φ(ad α) ∂α
  term = r_differential(ctx, alpha.value, max_arity);
  out.value.axpy(Rational(-1), term);
  for (int k = 1; k <= order && !term.is_zero(); ++k) {
    term = r_bracket(ctx, ring, alpha.value, term, true, max_arity);
    for (auto& c : term.comps) c = c.scaled(Rational(1, k + 1));
    out.value.axpy(Rational(-1), term);
  }
  return out;
}

GaugeSearch gauge_equivalent(const HochschildContext& ctx, const MCElement& x, const MCElement& y) {
  require_same_ring(x.base, y.base, "gauge_equivalent");
  require_degree_zero(ctx, "gauge_equivalent");
  if (!is_maurer_cartan(ctx, x)) throw NotMaurerCartan("gauge_equivalent: first argument is not Maurer-Cartan");
  if (!is_maurer_cartan(ctx, y)) throw NotMaurerCartan("gauge_equivalent: second argument is not Maurer-Cartan");
  const ArtinLocalRing& ring = x.base;
  GaugeElement alpha{ring, RCochain(ring.dim())};
  const SparseMatrix d1 = cochain_differential_matrix(ctx, 1);
  const std::vector<SparseVec> z1 = rref(d1).kernel_basis;
  const int n1 = cochain_dim(ctx, 1), n2 = cochain_dim(ctx, 2);
  GaugeSearch res;
  auto difference = [&](const GaugeElement& a) {
    RCochain d = gauge_act(ctx, a, x).value;
    d.axpy(Rational(-1), y.value);
    return d;
  };
  for (int level = 1; level <= ring.max_level(); ++level) {
    std::vector<int> here, below;
    for (int k = 0; k < ring.dim(); ++k) {
      if (ring.level(k) == level) here.push_back(k);
      if (ring.level(k) == level - 1 && level > 1) below.push_back(k);
    }
    RCochain diff = difference(alpha);
    for (int k = 0; k < ring.dim(); ++k)
      if (ring.level(k) < level && !diff.comps[static_cast<size_t>(k)].is_zero())
        throw std::logic_error("gauge_equivalent: lower filtration step not solved");
    // Unknowns: β in C^1 at this level (enters as -∂β) and cocycles γ at
    // the previous level (which leave lower levels unchanged and enter the
    // current level linearly).
    auto flatten = [&](const RCochain& c, SparseVec& out) {
      std::vector<std::pair<int, Rational>> e;
      for (size_t h = 0; h < here.size(); ++h) {
        const Cochain& ck = c.comps[static_cast<size_t>(here[h])];
        for (int l : ck.arities())
          if (l != 2) return false;
        for (const auto& [i, v] : cochain_to_vector(ctx, 2, ck).e) e.emplace_back(static_cast<int>(h) * n2 + i, v);
      }
      out = make_sparse(std::move(e));
      return true;
    };
    SparseVec rhs;
    bool ok = flatten(diff, rhs);
    const int nbeta = static_cast<int>(here.size()) * n1;
    const int ngamma = static_cast<int>(below.size() * z1.size());
    SparseMatrix sys(static_cast<int>(here.size()) * n2, nbeta + ngamma);
    for (size_t h = 0; h < here.size(); ++h)
      for (const auto& [r, c, v] : d1.entries()) sys.set(static_cast<int>(h) * n2 + r, static_cast<int>(h) * n1 + c, v);
    for (size_t b = 0; b < below.size() && ok; ++b)
      for (size_t z = 0; z < z1.size() && ok; ++z) {
        GaugeElement trial = alpha;
        trial.value.comps[static_cast<size_t>(below[b])].axpy(Rational(1), cochain_from_vector(ctx, 1, z1[z]));
        RCochain eff = difference(trial);
        eff.axpy(Rational(-1), diff);
        SparseVec col;
        ok = flatten(eff, col);
        col.scale(Rational(-1));
        sys.set_column(nbeta + static_cast<int>(b * z1.size() + z), col);
      }
    SparseVec sol;
    if (ok) ok = solve(sys, rhs, sol);
    if (ok) {
      GaugeElement next = alpha;
      std::vector<SparseVec> parts(here.size());
      for (const auto& [i, v] : sol.e) {
        if (i < nbeta)
          parts[static_cast<size_t>(i / n1)].add_entry(i % n1, v);
        else {
          int j = i - nbeta;
          const size_t b = static_cast<size_t>(j) / z1.size();
          const size_t z = static_cast<size_t>(j) % z1.size();
          next.value.comps[static_cast<size_t>(below[b])].axpy(v, cochain_from_vector(ctx, 1, z1[z]));
        }
      }
      for (size_t h = 0; h < here.size(); ++h)
        next.value.comps[static_cast<size_t>(here[h])].axpy(Rational(1), cochain_from_vector(ctx, 1, parts[h]));
      RCochain check = difference(next);
      for (int k = 0; k < ring.dim() && ok; ++k)
        if (ring.level(k) <= level && !check.comps[static_cast<size_t>(k)].is_zero()) ok = false;
      if (ok) alpha = next;
    }
    if (!ok) {
      res.failed_level = level;
      std::ostringstream why;
      why << "no correction at filtration step " << level << "; difference " << format_rcochain(ctx, ring, diff);
      res.detail = why.str();
      return res;
    }
  }
  if (!difference(alpha).is_zero()) throw std::logic_error("gauge_equivalent: final check failed");
  res.alpha = alpha;
  return res;
}

// --------------------------------------------------------- AlgebraOverArtin

SparseVec AlgebraOverArtin::operation(const std::vector<SparseVec>& inputs) const {
  const int d = dim();
  const int l = static_cast<int>(inputs.size());
  // Split each input into (basis element -> ring element).
  std::vector<std::map<int, RingElement>> split(static_cast<size_t>(l));
  for (int t = 0; t < l; ++t)
    for (const auto& [idx, c] : inputs[static_cast<size_t>(t)].e) {
      auto [it, fresh] = split[static_cast<size_t>(t)].try_emplace(idx % d, base.zero());
      it->second[static_cast<size_t>(idx / d)] += c;
    }
  DenseAccumulator acc(total_dim());
  for (int k = 0; k < structure.ring_dim(); ++k)
    for (const auto& [w, v] : structure.comps[static_cast<size_t>(k)].terms) {
      if (static_cast<int>(w.size()) != l) continue;
      RingElement coef = base.basis(k);
      bool zero = false;
      for (int t = 0; t < l && !zero; ++t) {
        auto it = split[static_cast<size_t>(t)].find(w[static_cast<size_t>(t)]);
        if (it == split[static_cast<size_t>(t)].end()) {
          zero = true;
          break;
        }
        coef = base.mul(coef, it->second);
      }
      if (zero) continue;
      for (int r = 0; r < base.dim(); ++r) {
        if (coef[static_cast<size_t>(r)].is_zero()) continue;
        for (const auto& [a, c] : v.e) acc.add(a + d * r, c * coef[static_cast<size_t>(r)]);
      }
    }
  return acc.extract();
}

SparseVec AlgebraOverArtin::multiply(const SparseVec& u, const SparseVec& v) const {
  if (!reduction.concentrated_in_degree_zero()) throw std::invalid_argument("multiply needs a degree-0 algebra");
  return operation({u, v});
}

AlgebraOverArtin deform_algebra(const HochschildContext& ctx, const MCElement& x, int max_arity) {
  if (!is_maurer_cartan(ctx, x, max_arity)) throw NotMaurerCartan("deform_algebra: element is not Maurer-Cartan");
  AlgebraOverArtin a{x.base, ctx.algebra(), x.value};
  a.structure.comps.resize(static_cast<size_t>(x.base.dim()));
  a.structure.comps[0] = ctx.structure();
  return a;
}

ValidationReport validate_curved_ainf(const HochschildContext& ctx, const AlgebraOverArtin& a) {
  ValidationReport rep;
  if (a.structure.ring_dim() != a.base.dim()) {
    rep.violations.push_back({"shape", "structure has the wrong number of ring components"});
    return rep;
  }
  if (a.structure.comps[0] != ctx.structure())
    rep.violations.push_back({"reduction", "component at the unit of R differs from the undeformed structure"});
  for (int k = 1; k < a.base.dim(); ++k)
    for (const auto& [w, v] : a.structure.comps[static_cast<size_t>(k)].terms)
      if (std::find(w.begin(), w.end(), 0) != w.end()) {
        rep.violations.push_back({"unit", a.base.labels()[static_cast<size_t>(k)] + " component is nonzero on " +
                                              word_text(a.reduction, w)});
        break;
      }
  // s∘s on all words; for a shifted-degree-1 structure this is ½[s,s].
  const ArtinLocalRing& ring = a.base;
  RCochain sq(ring.dim());
  for (int i = 0; i < ring.dim(); ++i)
    for (int j = 0; j < ring.dim(); ++j) {
      const auto& si = a.structure.comps[static_cast<size_t>(i)];
      const auto& sj = a.structure.comps[static_cast<size_t>(j)];
      if (si.is_zero() || sj.is_zero() || ring.product(i, j).empty()) continue;
      Cochain c = brace(ctx, si, sj, false);
      for (const auto& [k, x] : ring.product(i, j).e) sq.comps[static_cast<size_t>(k)].axpy(x, c);
    }
  for (int k = 0; k < ring.dim(); ++k)
    if (!sq.comps[static_cast<size_t>(k)].is_zero()) {
      const auto& [w, v] = *sq.comps[static_cast<size_t>(k)].terms.begin();
      rep.violations.push_back({"square_zero", ring.labels()[static_cast<size_t>(k)] + " component of s∘s on " +
                                                   word_text(a.reduction, w) + " is " + a.reduction.format(v)});
    }
  return rep;
}

MCElement mc_from_deformation(const HochschildContext& ctx, const AlgebraOverArtin& a) {
  ValidationReport rep = validate_curved_ainf(ctx, a);
  if (!rep.valid()) throw NotMaurerCartan("deformation does not validate: " + rep.str());
  MCElement x{a.base, a.structure};
  x.value.comps[0] = Cochain();
  return x;
}

AlgebraOverArtin deformation_from_products(const HochschildContext& ctx, const ArtinLocalRing& ring,
                                           const std::vector<std::vector<SparseVec>>& products) {
  require_degree_zero(ctx, "deformation_from_products");
  const int d = ctx.dim();
  if (static_cast<int>(products.size()) != d) throw std::invalid_argument("product table has the wrong size");
  AlgebraOverArtin a{ring, ctx.algebra(), RCochain(ring.dim())};
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(products[static_cast<size_t>(i)].size()) != d)
      throw std::invalid_argument("product table has the wrong size");
    for (int j = 0; j < d; ++j)
      for (const auto& [idx, c] : products[static_cast<size_t>(i)][static_cast<size_t>(j)].e) {
        if (idx < 0 || idx >= d * ring.dim()) throw std::invalid_argument("product entry out of range");
        a.structure.comps[static_cast<size_t>(idx / d)].add({i, j}, idx % d, c);
      }
  }
  return a;
}

SparseMatrix r_linear_map(const ArtinLocalRing& ring, const std::vector<SparseMatrix>& comps) {
  if (comps.empty()) throw std::invalid_argument("r_linear_map: no components");
  const int d = comps[0].rows();
  const int n = d * ring.dim();
  SparseMatrix out(n, n);
  for (int k = 0; k < static_cast<int>(comps.size()); ++k)
    for (const auto& [r, c, v] : comps[static_cast<size_t>(k)].entries())
      for (int kk = 0; kk < ring.dim(); ++kk)
        for (const auto& [t, x] : ring.product(k, kk).e) out.add(r + d * t, c + d * kk, v * x);
  return out;
}

SparseMatrix nilpotent_exp(const SparseMatrix& n) {
  SparseMatrix out = SparseMatrix::identity(n.rows());
  SparseMatrix term = SparseMatrix::identity(n.rows());
  for (int k = 1; k <= n.rows() + 1; ++k) {
    term = (n * term).scaled(Rational(1, k));
    if (term.is_zero()) return out;
    out = out + term;
  }
  throw std::invalid_argument("nilpotent_exp: matrix is not nilpotent");
}

AlgebraOverArtin conjugate_structure(const HochschildContext& ctx, const AlgebraOverArtin& a,
                                     const GaugeElement& alpha) {
  require_same_ring(a.base, alpha.base, "conjugate_structure");
  if (!alpha.value.in_maximal_ideal()) throw std::invalid_argument("gauge element must have coefficients in m_R");
  const int d = a.dim();
  std::vector<SparseMatrix> comps = arity_one_matrices(ctx, alpha.value);
  SparseMatrix gen = r_linear_map(a.base, comps);
  SparseMatrix phi = nilpotent_exp(gen);
  SparseMatrix phi_inv = nilpotent_exp(gen.scaled(Rational(-1)));
  std::set<int> arities;
  for (const auto& c : a.structure.comps)
    for (int l : c.arities()) arities.insert(l);
  AlgebraOverArtin out{a.base, a.reduction, RCochain(a.base.dim())};
  for (int l : arities)
    for (const Word& w : all_words(d, l)) {
      std::vector<SparseVec> in;
      for (int i : w) in.push_back(phi_inv.column(i));
      SparseVec val = phi.apply(a.operation(in));
      for (const auto& [idx, c] : val.e) out.structure.comps[static_cast<size_t>(idx / d)].add(w, idx % d, c);
    }
  return out;
}

bool same_structure_constants(const AlgebraOverArtin& a, const AlgebraOverArtin& b, int max_arity,
                              std::string* witness) {
  if (a.dim() != b.dim() || a.base.labels() != b.base.labels()) {
    if (witness) *witness = "different shapes";
    return false;
  }
  for (int l = 0; l <= max_arity; ++l)
    for (const Word& w : all_words(a.dim(), l)) {
      std::vector<SparseVec> in;
      for (int i : w) in.push_back(SparseVec::unit(i));
      SparseVec u = a.operation(in), v = b.operation(in);
      if (u != v) {
        if (witness) *witness = word_text(a.reduction, w) + ": " + to_string(u) + " vs " + to_string(v);
        return false;
      }
    }
  return true;
}

// ----------------------------------------------------------------- RWeightOp

bool RWeightOp::is_zero() const {
  for (const auto& c : comps)
    if (!c.is_zero()) return false;
  return true;
}

void RWeightOp::axpy(const Rational& c, const RWeightOp& o) {
  if (comps.size() < o.comps.size()) comps.resize(o.comps.size());
  for (size_t k = 0; k < o.comps.size(); ++k) comps[k].axpy(c, o.comps[k]);
}

RWeightOp RWeightOp::restricted(int lo, int hi) const {
  RWeightOp r(static_cast<int>(comps.size()));
  for (size_t k = 0; k < comps.size(); ++k) r.comps[k] = comps[k].restricted(lo, hi);
  return r;
}

RWeightOp r_compose(const ArtinLocalRing& ring, const RWeightOp& a, const RWeightOp& b) {
  RWeightOp out(ring.dim());
  for (int i = 0; i < static_cast<int>(a.comps.size()); ++i) {
    if (a.comps[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j < static_cast<int>(b.comps.size()); ++j) {
      if (b.comps[static_cast<size_t>(j)].is_zero() || ring.product(i, j).empty()) continue;
      WeightOp c = compose(a.comps[static_cast<size_t>(i)], b.comps[static_cast<size_t>(j)]);
      for (const auto& [k, x] : ring.product(i, j).e) out.comps[static_cast<size_t>(k)].axpy(x, c);
    }
  }
  return out;
}

RWeightOp r_exp(const ArtinLocalRing& ring, const HochschildContext& ctx, const RWeightOp& a, int top) {
  if (!a.comps.empty() && !a.comps[0].is_zero()) throw std::invalid_argument("r_exp: operator not in m_R");
  RWeightOp term(ring.dim());
  for (int w = 0; w <= top; ++w)
    term.comps[0].blocks.emplace(std::make_pair(w, w), SparseMatrix::identity(ctx.space().dim(w)));
  RWeightOp out = term;
  for (int k = 1; k <= ring.nilpotency_order(); ++k) {
    term = r_compose(ring, a, term);
    for (auto& c : term.comps)
      for (auto& [key, m] : c.blocks) m = m.scaled(Rational(1, k));
    if (term.is_zero()) break;
    out.axpy(Rational(1), term);
  }
  return out;
}

SparseMatrix r_block_matrix(const ArtinLocalRing& ring, const HochschildContext& ctx, const RWeightOp& op, int src,
                            int dst) {
  const int ds = ctx.space().dim(src), dd = ctx.space().dim(dst);
  SparseMatrix out(dd * ring.dim(), ds * ring.dim());
  for (int k = 0; k < static_cast<int>(op.comps.size()); ++k) {
    auto it = op.comps[static_cast<size_t>(k)].blocks.find({src, dst});
    if (it == op.comps[static_cast<size_t>(k)].blocks.end()) continue;
    for (const auto& [r, c, v] : it->second.entries())
      for (int kk = 0; kk < ring.dim(); ++kk)
        for (const auto& [t, x] : ring.product(k, kk).e) out.add(r + dd * t, c + ds * kk, v * x);
  }
  return out;
}

// ------------------------------------------------------ DeformedMixedComplex

namespace {

int max_raise(const RWeightOp& op) {
  int r = 0;
  for (const auto& c : op.comps)
    for (const auto& [key, m] : c.blocks) r = std::max(r, key.second - key.first);
  return r;
}

std::string first_block(const ArtinLocalRing& ring, const RWeightOp& op) {
  for (int k = 0; k < static_cast<int>(op.comps.size()); ++k)
    for (const auto& [key, m] : op.comps[static_cast<size_t>(k)].blocks)
      if (!m.is_zero())
        return ring.labels()[static_cast<size_t>(k)] + " component, weight " + std::to_string(key.first) + " -> " +
               std::to_string(key.second);
  return "";
}

RWeightOp lie_operator(OperatorCache& oc, const RCochain& x, int top) {
  RWeightOp out(x.ring_dim());
  for (int k = 0; k < x.ring_dim(); ++k)
    if (!x.comps[static_cast<size_t>(k)].is_zero()) out.comps[static_cast<size_t>(k)] = oc.lie(x.comps[static_cast<size_t>(k)], 0, top);
  return out;
}

}  // namespace

DeformedMixedComplex::DeformedMixedComplex(const HochschildContext& ctx, const MCElement& x, int top)
    : ctx_(&ctx), ring_(x.base), top_(top < 0 ? ctx.max_weight() - 1 : top) {
  if (ctx.is_relative()) throw std::invalid_argument("deformed complexes use the normalized chain space");
  if (top_ > ctx.max_weight() - 1) throw BarBoundExceeded("deformed complex top weight above bar bound");
  if (!is_maurer_cartan(ctx, x)) throw NotMaurerCartan("deformed_mixed_complex: element is not Maurer-Cartan");
  OperatorCache oc(ctx);
  lie_ = lie_operator(oc, x.value, top_);
  diff_ = RWeightOp(ring_.dim());
  diff_.comps[0] = oc.boundary(0, top_);
  diff_.axpy(Rational(1), lie_);
  connes_ = RWeightOp(ring_.dim());
  connes_.comps[0] = oc.connes(0, top_);
}

bool DeformedMixedComplex::square_zero(std::string* witness) const {
  RWeightOp sq = r_compose(ring_, diff_, diff_).restricted(0, top_ - max_raise(diff_));
  if (sq.is_zero()) return true;
  if (witness) *witness = first_block(ring_, sq);
  return false;
}

bool DeformedMixedComplex::connes_anticommutes(std::string* witness) const {
  RWeightOp c = r_compose(ring_, connes_, lie_);
  c.axpy(Rational(1), r_compose(ring_, lie_, connes_));
  c = c.restricted(0, top_ - 1 - max_raise(lie_));
  if (c.is_zero()) return true;
  if (witness) *witness = first_block(ring_, c);
  return false;
}

bool DeformedMixedComplex::reduces_to_undeformed() const {
  OperatorCache oc(*ctx_);
  WeightOp d = diff_.comps[0];
  d.axpy(Rational(-1), oc.boundary(0, top_));
  return d.is_zero();
}

DeformedMixedComplex deformed_mixed_complex(const HochschildContext& ctx, const MCElement& x, int top) {
  return DeformedMixedComplex(ctx, x, top);
}

bool conjugation_identity(const HochschildContext& ctx, const GaugeElement& alpha, const MCElement& x, int top,
                          std::string* witness) {
  MCElement y = gauge_act(ctx, alpha, x);
  DeformedMixedComplex dx(ctx, x, top), dy(ctx, y, top);
  OperatorCache oc(ctx);
  RWeightOp la = lie_operator(oc, alpha.value, dx.top());
  RWeightOp minus = la;
  for (auto& c : minus.comps)
    for (auto& [key, m] : c.blocks) m = m.scaled(Rational(-1));
  const ArtinLocalRing& ring = x.base;
  RWeightOp lhs = r_compose(ring, r_exp(ring, ctx, la, dx.top()),
                            r_compose(ring, dx.differential(), r_exp(ring, ctx, minus, dx.top())));
  lhs.axpy(Rational(-1), dy.differential());
  lhs = lhs.restricted(0, dx.top() - max_raise(dx.differential()) - max_raise(la));
  if (lhs.is_zero()) return true;
  if (witness) *witness = first_block(ring, lhs);
  return false;
}

// ------------------------------------------------------------------- lifting

MCElement embed_into(const MCElement& x, const ArtinLocalRing& target) {
  MCElement out{target, RCochain(target.dim())};
  for (int k = 0; k < x.base.dim(); ++k) {
    if (x.value.comps[static_cast<size_t>(k)].is_zero()) continue;
    const auto& labs = target.labels();
    auto it = std::find(labs.begin(), labs.end(), x.base.labels()[static_cast<size_t>(k)]);
    if (it == labs.end()) throw std::invalid_argument("embed_into: ring label " + x.base.labels()[static_cast<size_t>(k)] + " missing");
    out.value.comps[static_cast<size_t>(it - labs.begin())] = x.value.comps[static_cast<size_t>(k)];
  }
  return out;
}

LiftResult lift_order_by_order(const HochschildContext& ctx, const MCElement& x_low, const ArtinLocalRing& target) {
  require_degree_zero(ctx, "lift_order_by_order");
  const int n = x_low.base.nilpotency_order();
  if (truncate_ring(target, n).labels() != x_low.base.labels())
    throw std::invalid_argument("lift_order_by_order: target/m^n does not match the ring of the element");
  if (target.nilpotency_order() <= n) throw std::invalid_argument("lift_order_by_order: target has no level " + std::to_string(n));
  if (!is_maurer_cartan(ctx, x_low)) throw NotMaurerCartan("lift_order_by_order: element is not Maurer-Cartan");
  ArtinLocalRing next = truncate_ring(target, n + 1);
  LiftResult res;
  res.level = n;
  MCElement x = embed_into(x_low, next);
  RCochain r = mc_residual(ctx, x);
  const SparseMatrix d2 = cochain_differential_matrix(ctx, 2);
  std::optional<HomologyCoordinates> hh3;
  MCElement lifted = x;
  bool all = true;
  for (int k = 0; k < next.dim(); ++k) {
    const Cochain& rk = r.comps[static_cast<size_t>(k)];
    if (next.level(k) != n) {
      if (!rk.is_zero()) throw std::logic_error("lift_order_by_order: residual below the new level");
      continue;
    }
    for (int l : rk.arities())
      if (l != 3) throw std::invalid_argument("lift_order_by_order: residual has arity " + std::to_string(l));
    SparseVec rhs = cochain_to_vector(ctx, 3, rk.scaled(Rational(-1)));
    SparseVec y;
    if (solve(d2, rhs, y)) {
      lifted.value.comps[static_cast<size_t>(k)].axpy(Rational(1), cochain_from_vector(ctx, 2, y));
      continue;
    }
    all = false;
    if (!hh3) {
      GradedDims g = hochschild_cohomology(ctx, 3, 3);
      hh3.emplace(g.spaces.at(3));
      res.hh3_basis = g.reps.at(3);
    }
    res.obstruction.emplace_back(k, hh3->class_of(rhs));
  }
  res.lifted = all;
  if (all) {
    if (!is_maurer_cartan(ctx, lifted)) throw std::logic_error("lift_order_by_order: lift is not Maurer-Cartan");
    res.lift = lifted;
  }
  return res;
}

RCochain map_coefficients(const RCochain& x, const SparseMatrix& ring_map, int target_dim) {
  RCochain out(target_dim);
  for (int k = 0; k < x.ring_dim(); ++k)
    for (const auto& [t, c] : ring_map.column(k).e) out.comps[static_cast<size_t>(t)].axpy(c, x.comps[static_cast<size_t>(k)]);
  return out;
}

MCElement base_change(const MCElement& x, const ArtinLocalRing& target, const SparseMatrix& ring_map) {
  return {target, map_coefficients(x.value, ring_map, target.dim())};
}

GaugeElement base_change(const GaugeElement& a, const ArtinLocalRing& target, const SparseMatrix& ring_map) {
  return {target, map_coefficients(a.value, ring_map, target.dim())};
}

}  // namespace ncp
