#include "ncp/calculus.hpp"

#include <functional>
#include <limits>
#include <sstream>

namespace ncp {

namespace {

inline Rational sgn(long e) { return (e & 1) ? Rational(-1) : Rational(1); }

// Unshifted degree |P| of a homogeneous cochain (0 for the zero cochain).
int degree_of(const HochschildContext& ctx, const Cochain& c) {
  for (const auto& [w, v] : c.terms)
    if (!v.empty()) return ctx.term_degree(w, v.e.front().first) + 1;
  return 0;
}

}  // namespace

const char* status_name(AxiomStatus s) {
  switch (s) {
    case AxiomStatus::holds_exactly:
      return "holds exactly";
    case AxiomStatus::holds_on_homology:
      return "holds on homology";
    case AxiomStatus::fails:
      return "fails";
  }
  return "?";
}

Cochain gerstenhaber_bracket(const HochschildContext& ctx, const Cochain& p, const Cochain& q, int max_arity) {
  return bracket(ctx, p, q, true, max_arity);
}

Cochain cup_product(const HochschildContext& ctx, const Cochain& p, const Cochain& q, int max_arity) {
  const DgAlgebra& a = ctx.algebra();
  std::map<Word, SparseVec> acc;
  Word w;
  for (const auto& [u, o] : p.terms) {
    long eps_u = 0;
    for (int x : u) eps_u += ctx.deg(x) - 1;
    for (const auto& [v, r] : q.terms) {
      w = u;
      w.insert(w.end(), v.begin(), v.end());
      if (max_arity >= 0 && static_cast<int>(w.size()) > max_arity)
        throw ArityBoundExceeded("cup product produced arity " + std::to_string(w.size()));
      auto& t = acc[w];
      for (const auto& [i, ci] : o.e) {
        long pdeg = ctx.term_degree(u, i) + 1;
        for (const auto& [j, cj] : r.e) {
          long qs = ctx.term_degree(v, j);
          t.axpy(sgn(pdeg + qs * eps_u + ctx.deg(i)) * ci * cj, a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        }
      }
    }
  }
  Cochain res;
  for (auto& [k, v] : acc)
    if (!v.empty()) res.terms.emplace(k, std::move(v));
  return res;
}

// ------------------------------------------------------------------ WeightOp

void WeightOp::axpy(const Rational& c, const WeightOp& o) {
  if (c.is_zero()) return;
  for (const auto& [k, m] : o.blocks) {
    auto it = blocks.find(k);
    if (it == blocks.end())
      blocks.emplace(k, m.scaled(c));
    else
      it->second = it->second + m.scaled(c);
  }
}

bool WeightOp::is_zero() const {
  for (const auto& [k, m] : blocks)
    if (!m.is_zero()) return false;
  return true;
}

WeightOp WeightOp::restricted(int lo, int hi) const {
  WeightOp r;
  for (const auto& [k, m] : blocks)
    if (k.first >= lo && k.first <= hi) r.blocks.emplace(k, m);
  return r;
}

Chain WeightOp::apply(const Chain& c) const {
  Chain r;
  for (const auto& [n, v] : c.parts)
    for (auto it = blocks.lower_bound({n, std::numeric_limits<int>::min()}); it != blocks.end() && it->first.first == n;
         ++it) {
      SparseVec y = it->second.apply(v);
      if (y.empty()) continue;
      auto& t = r.parts[it->first.second];
      t.axpy(Rational(1), y);
      if (t.empty()) r.parts.erase(it->first.second);
    }
  return r;
}

WeightOp compose(const WeightOp& a, const WeightOp& b) {
  WeightOp r;
  for (const auto& [kb, mb] : b.blocks) {
    const int mid = kb.second;
    for (auto it = a.blocks.lower_bound({mid, std::numeric_limits<int>::min()});
         it != a.blocks.end() && it->first.first == mid; ++it) {
      std::pair<int, int> key{kb.first, it->first.second};
      SparseMatrix prod = it->second * mb;
      auto jt = r.blocks.find(key);
      if (jt == r.blocks.end())
        r.blocks.emplace(key, std::move(prod));
      else
        jt->second = jt->second + prod;
    }
  }
  return r;
}

// ------------------------------------------------------------ OperatorCache

OperatorCache::OperatorCache(const HochschildContext& ctx, OperatorOptions opt) : ctx_(&ctx), opt_(opt) {}

const SparseMatrix& OperatorCache::term_matrix(OpKind kind, const Word& w, int out, int src, int dst) {
  auto key = std::make_tuple(static_cast<int>(kind), w, out, src);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Cochain c = Cochain::basis(w, out);
  return cache_.emplace(key, operator_matrix(*ctx_, kind, &c, src, dst, opt_)).first->second;
}

WeightOp OperatorCache::build(OpKind kind, const Cochain& p, int lo, int hi, int shift_base) {
  WeightOp r;
  const ChainSpace& sp = ctx_->space();
  for (const auto& [w, v] : p.terms) {
    const int l = static_cast<int>(w.size());
    for (int n = std::max(lo, 0); n <= hi; ++n) {
      const int m = n + shift_base - l;
      if (m < 0) continue;
      if (m > sp.max_weight()) throw BarBoundExceeded("operator target weight " + std::to_string(m) + " above bar bound");
      for (const auto& [k, c] : v.e) {
        const SparseMatrix& t = term_matrix(kind, w, k, n, m);
        if (t.is_zero()) continue;
        auto jt = r.blocks.find({n, m});
        if (jt == r.blocks.end())
          r.blocks.emplace(std::make_pair(n, m), t.scaled(c));
        else
          jt->second = jt->second + t.scaled(c);
      }
    }
  }
  return r;
}

WeightOp OperatorCache::lie(const Cochain& p, int lo, int hi) { return build(OpKind::lie, p, lo, hi, 1); }

WeightOp OperatorCache::contraction(const Cochain& p, int lo, int hi) {
  return build(OpKind::contraction, p, lo, hi, 0);
}

WeightOp OperatorCache::homotopy(const Cochain& p, int lo, int hi) { return build(OpKind::homotopy, p, lo, hi, 2); }

WeightOp OperatorCache::boundary(int lo, int hi) {
  WeightOp r;
  bool has_diff = false;
  for (const auto& d : ctx_->algebra().diff) has_diff = has_diff || !d.empty();
  for (int n = std::max(lo, 0); n <= hi; ++n) {
    if (n >= 1) r.blocks.emplace(std::make_pair(n, n - 1), boundary_matrix(*ctx_, n));
    if (has_diff) r.blocks.emplace(std::make_pair(n, n), operator_matrix(*ctx_, OpKind::boundary, nullptr, n, n));
  }
  return r;
}

WeightOp OperatorCache::connes(int lo, int hi) {
  WeightOp r;
  for (int n = std::max(lo, 0); n <= hi; ++n) r.blocks.emplace(std::make_pair(n, n + 1), connes_matrix(*ctx_, n));
  return r;
}

std::vector<Cochain> basis_cochains(const HochschildContext& ctx, int lo, int hi) {
  std::vector<Cochain> out;
  for (int l = std::max(lo, 0); l <= hi; ++l) {
    const int n = cochain_dim(ctx, l);
    for (int i = 0; i < n; ++i) out.push_back(cochain_from_vector(ctx, l, SparseVec::unit(i)));
  }
  return out;
}

// ------------------------------------------------------------- verifiers

namespace {

std::string op_witness(const HochschildContext& ctx, const WeightOp& diff) {
  for (const auto& [k, m] : diff.blocks) {
    auto es = m.entries();
    if (es.empty()) continue;
    const auto& [r, c, v] = es.front();
    std::ostringstream os;
    os << "on " << ctx.space().format_word(ctx.algebra(), k.first, c) << ": coefficient of "
       << ctx.space().format_word(ctx.algebra(), k.second, r) << " is off by " << v;
    return os.str();
  }
  return "";
}

std::string args_text(const HochschildContext& ctx, const std::vector<const Cochain*>& args) {
  static const char* names[] = {"a", "b", "c", "d"};
  std::string s;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += std::string(names[i % 4]) + " = " + format_cochain(ctx, *args[i]);
  }
  return s;
}

}  // namespace

std::vector<AxiomReport> verify_lie_dagger(const DgAlgebra& a, const LieDaggerBounds& bounds, const OperatorOptions& opt) {
  const int W = bounds.max_weight;
  HochschildContext ctx(a, W + 2);
  OperatorCache cache(ctx, opt);
  std::vector<Cochain> basis = basis_cochains(ctx, 0, bounds.max_arity);
  std::vector<WeightOp> L;
  std::vector<long> pdeg;
  L.reserve(basis.size());
  for (const auto& p : basis) {
    L.push_back(cache.lie(p, 0, W + 1));
    pdeg.push_back(degree_of(ctx, p) - 1);
  }
  WeightOp D = cache.boundary(0, W + 1);
  WeightOp B = cache.connes(0, W + 1);
  WeightOp Dr = D.restricted(0, W), Br = B.restricted(0, W);

  auto report = [](std::string id) {
    AxiomReport r;
    r.id = std::move(id);
    return r;
  };
  auto fail = [&](AxiomReport& r, const std::string& w) {
    if (r.status == AxiomStatus::fails) return;
    r.status = AxiomStatus::fails;
    r.witness = w;
  };

  std::vector<AxiomReport> out;
  {
    AxiomReport r = report("lie_bracket");
    long checked = 0;
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = i; j < basis.size(); ++j) {
        WeightOp lhs = cache.lie(gerstenhaber_bracket(ctx, basis[i], basis[j]), 0, W);
        lhs.axpy(Rational(-1), compose(L[i], L[j].restricted(0, W)));
        lhs.axpy(sgn(pdeg[i] * pdeg[j]), compose(L[j], L[i].restricted(0, W)));
        ++checked;
        if (!lhs.is_zero()) fail(r, args_text(ctx, {&basis[i], &basis[j]}) + "; " + op_witness(ctx, lhs));
      }
    r.detail = std::to_string(checked) + " pairs, weights 0.." + std::to_string(W);
    out.push_back(r);
  }
  {
    AxiomReport r = report("lie_boundary");
    for (size_t i = 0; i < basis.size(); ++i) {
      WeightOp lhs = cache.lie(cochain_differential(ctx, basis[i]), 0, W);
      lhs.axpy(Rational(-1), compose(D, L[i].restricted(0, W)));
      lhs.axpy(sgn(pdeg[i]), compose(L[i], Dr));
      if (!lhs.is_zero()) fail(r, args_text(ctx, {&basis[i]}) + "; " + op_witness(ctx, lhs));
    }
    r.detail = std::to_string(basis.size()) + " cochains, weights 0.." + std::to_string(W);
    out.push_back(r);
  }
  {
    AxiomReport r = report("lie_connes");
    for (size_t i = 0; i < basis.size(); ++i) {
      WeightOp lhs = compose(B, L[i].restricted(0, W));
      lhs.axpy(-sgn(pdeg[i]), compose(L[i], Br));
      if (!lhs.is_zero()) fail(r, args_text(ctx, {&basis[i]}) + "; " + op_witness(ctx, lhs));
    }
    r.detail = std::to_string(basis.size()) + " cochains, weights 0.." + std::to_string(W);
    out.push_back(r);
  }
  {
    AxiomReport r = report("mixed_complex");
    WeightOp dd = compose(D, Dr);
    if (!dd.is_zero()) fail(r, "boundary squared: " + op_witness(ctx, dd));
    WeightOp bb = compose(B, Br);
    if (!bb.is_zero()) fail(r, "B squared: " + op_witness(ctx, bb));
    WeightOp db = compose(D, Br);
    db.axpy(Rational(1), compose(B, Dr));
    if (!db.is_zero()) fail(r, "boundary B + B boundary: " + op_witness(ctx, db));
    r.detail = "weights 0.." + std::to_string(W);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------- calculus_defect

namespace {

using Args = std::vector<const Cochain*>;

class DefectEvaluator {
 public:
  DefectEvaluator(const HochschildContext& ctx, int h, int c, int ca)
      : ctx_(ctx), cache_(ctx), h_(h), basis_(basis_cochains(ctx, 0, ca)) {
    GradedDims coh = hochschild_cohomology(ctx, 0, c);
    for (int k = 0; k <= c; ++k)
      for (const auto& v : coh.reps[k]) cocycles_.push_back(cochain_from_vector(ctx, k, v));
    GradedDims hom = hochschild_homology(ctx, 0, h);
    for (int n = 0; n <= h; ++n)
      for (const auto& v : hom.reps[n]) {
        Chain z;
        z.parts[n] = v;
        cycles_.push_back(z);
      }
  }

  OperatorCache& cache() { return cache_; }
  int top() const { return h_; }
  int deg(const Cochain& c) const { return degree_of(ctx_, c); }

  AxiomReport run_op(const std::string& id, int nargs, const std::function<WeightOp(const Args&)>& defect) {
    AxiomReport r;
    r.id = id;
    long exact_checks = 0;
    std::string chain_witness;
    bool exact = for_tuples(basis_, nargs, [&](const Args& args) {
      ++exact_checks;
      WeightOp d = defect(args).restricted(0, h_);
      if (d.is_zero()) return true;
      chain_witness = args_text(ctx_, args) + "; " + op_witness(ctx_, d);
      return false;
    });
    if (exact) {
      r.detail = "zero on " + std::to_string(exact_checks) + " basis tuples, weights 0.." + std::to_string(h_);
      return r;
    }
    long hom_checks = 0;
    bool ok = for_tuples(cocycles_, nargs, [&](const Args& args) {
      WeightOp d = defect(args).restricted(0, h_);
      for (const auto& z : cycles_) {
        ++hom_checks;
        Chain e = d.apply(z);
        for (const auto& [m, v] : e.parts)
          if (!boundaries(m).contains(v)) {
            r.witness = args_text(ctx_, args) + "; cycle " + format_chain(ctx_, z) + " -> defect " + format_chain(ctx_, e) +
                        " is not a boundary";
            return false;
          }
      }
      return true;
    });
    r.status = ok ? AxiomStatus::holds_on_homology : AxiomStatus::fails;
    r.detail = "chain-level defect: " + chain_witness + "; " + std::to_string(hom_checks) + " homology checks";
    return r;
  }

  AxiomReport run_cochain(const std::string& id, int nargs, const std::function<Cochain(const Args&)>& defect) {
    AxiomReport r;
    r.id = id;
    long exact_checks = 0;
    std::string chain_witness;
    bool exact = for_tuples(basis_, nargs, [&](const Args& args) {
      ++exact_checks;
      Cochain d = defect(args);
      if (d.is_zero()) return true;
      chain_witness = args_text(ctx_, args) + " -> " + format_cochain(ctx_, d);
      return false;
    });
    if (exact) {
      r.detail = "zero on " + std::to_string(exact_checks) + " basis tuples";
      return r;
    }
    long hom_checks = 0;
    bool ok = for_tuples(cocycles_, nargs, [&](const Args& args) {
      ++hom_checks;
      Cochain d = defect(args);
      for (int l : d.arities())
        if (!coboundaries(l).contains(cochain_to_vector(ctx_, l, d.arity_part(l)))) {
          r.witness = args_text(ctx_, args) + " -> defect " + format_cochain(ctx_, d) + " is not a coboundary";
          return false;
        }
      return true;
    });
    r.status = ok ? AxiomStatus::holds_on_homology : AxiomStatus::fails;
    r.detail = "chain-level defect: " + chain_witness + "; " + std::to_string(hom_checks) + " cohomology checks";
    return r;
  }

 private:
  // Calls f on every tuple; stops and returns false at the first false.
  static bool for_tuples(const std::vector<Cochain>& pool, int nargs, const std::function<bool(const Args&)>& f) {
    Args args(static_cast<size_t>(nargs));
    std::function<bool(int)> rec = [&](int k) {
      if (k == nargs) return f(args);
      for (const auto& c : pool) {
        args[static_cast<size_t>(k)] = &c;
        if (!rec(k + 1)) return false;
      }
      return true;
    };
    return rec(0);
  }

  const EchelonBasis& boundaries(int m) {
    auto it = bnd_.find(m);
    if (it != bnd_.end()) return it->second;
    EchelonBasis e(ctx_.space().dim(m));
    SparseMatrix d = boundary_matrix(ctx_, m + 1);
    for (int j = 0; j < d.cols(); ++j) e.insert(d.column(j));
    return bnd_.emplace(m, std::move(e)).first->second;
  }

  const EchelonBasis& coboundaries(int l) {
    auto it = cobnd_.find(l);
    if (it != cobnd_.end()) return it->second;
    EchelonBasis e(cochain_dim(ctx_, l));
    if (l > 0) {
      SparseMatrix d = cochain_differential_matrix(ctx_, l - 1);
      for (int j = 0; j < d.cols(); ++j) e.insert(d.column(j));
    }
    return cobnd_.emplace(l, std::move(e)).first->second;
  }

  const HochschildContext& ctx_;
  OperatorCache cache_;
  int h_;
  std::vector<Cochain> basis_;
  std::vector<Cochain> cocycles_;
  std::vector<Chain> cycles_;
  std::map<int, EchelonBasis> bnd_;
  std::map<int, EchelonBasis> cobnd_;
};

}  // namespace

std::vector<AxiomReport> calculus_defect(const DgAlgebra& a, const CalculusBounds& bounds) {
  if (!a.concentrated_in_degree_zero()) throw std::invalid_argument("calculus_defect needs an algebra in degree 0");
  const int h = bounds.max_chain_degree, c = bounds.max_cochain_degree;
  const int ca = bounds.chain_level_arity < 0 ? c : bounds.chain_level_arity;
  HochschildContext ctx(a, h + 3);
  DefectEvaluator ev(ctx, h, c, ca);
  OperatorCache& oc = ev.cache();
  const int top = h + 2;
  // The calculus operator l_a is L_a twisted by the shifted degree.
  auto L = [&](const Cochain& x) {
    WeightOp r;
    r.axpy(sgn(ev.deg(x) - 1), oc.lie(x, 0, top));
    return r;
  };
  auto I = [&](const Cochain& x) { return oc.contraction(x, 0, top); };
  auto cup = [&](const Cochain& x, const Cochain& y) { return cup_product(ctx, x, y); };
  auto br = [&](const Cochain& x, const Cochain& y) { return gerstenhaber_bracket(ctx, x, y); };
  const WeightOp Bop = oc.connes(0, top);
  auto comp = [&](const WeightOp& outer, const WeightOp& inner) { return compose(outer, inner.restricted(0, h)); };

  std::vector<AxiomReport> out;
  out.push_back(ev.run_cochain("cup_associative", 3, [&](const Args& x) {
    Cochain d = cup(cup(*x[0], *x[1]), *x[2]);
    d.axpy(Rational(-1), cup(*x[0], cup(*x[1], *x[2])));
    return d;
  }));
  out.push_back(ev.run_cochain("cup_graded_commutative", 2, [&](const Args& x) {
    Cochain d = cup(*x[0], *x[1]);
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0])) * ev.deg(*x[1])), cup(*x[1], *x[0]));
    return d;
  }));
  out.push_back(ev.run_cochain("bracket_antisymmetry", 2, [&](const Args& x) {
    Cochain d = br(*x[0], *x[1]);
    d.axpy(sgn(static_cast<long>(ev.deg(*x[0]) - 1) * (ev.deg(*x[1]) - 1)), br(*x[1], *x[0]));
    return d;
  }));
  out.push_back(ev.run_cochain("gerstenhaber_jacobi", 3, [&](const Args& x) {
    Cochain d = br(*x[0], br(*x[1], *x[2]));
    d.axpy(Rational(-1), br(br(*x[0], *x[1]), *x[2]));
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0]) - 1) * (ev.deg(*x[1]) - 1)), br(*x[1], br(*x[0], *x[2])));
    return d;
  }));
  out.push_back(ev.run_cochain("gerstenhaber_leibniz", 3, [&](const Args& x) {
    Cochain d = br(*x[0], cup(*x[1], *x[2]));
    d.axpy(Rational(-1), cup(br(*x[0], *x[1]), *x[2]));
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0]) + 1) * ev.deg(*x[1])), cup(*x[1], br(*x[0], *x[2])));
    return d;
  }));
  out.push_back(ev.run_op("contraction_composition", 2, [&](const Args& x) {
    WeightOp d = comp(I(*x[0]), I(*x[1]));
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0])) * ev.deg(*x[1])), I(cup(*x[1], *x[0])));
    return d;
  }));
  out.push_back(ev.run_op("contraction_module", 2, [&](const Args& x) {
    WeightOp d = I(cup(*x[0], *x[1]));
    d.axpy(Rational(-1), comp(I(*x[0]), I(*x[1])));
    return d;
  }));
  out.push_back(ev.run_op("contraction_commutator", 2, [&](const Args& x) {
    WeightOp d = comp(I(*x[0]), I(*x[1]));
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0])) * ev.deg(*x[1])), comp(I(*x[1]), I(*x[0])));
    return d;
  }));
  out.push_back(ev.run_op("lie_module", 2, [&](const Args& x) {
    WeightOp d = L(br(*x[0], *x[1]));
    d.axpy(Rational(-1), comp(L(*x[0]), L(*x[1])));
    d.axpy(sgn(static_cast<long>(ev.deg(*x[0]) - 1) * (ev.deg(*x[1]) - 1)), comp(L(*x[1]), L(*x[0])));
    return d;
  }));
  out.push_back(ev.run_op("contraction_lie_relation", 2, [&](const Args& x) {
    WeightOp d = comp(I(*x[0]), L(*x[1]));
    d.axpy(-sgn(static_cast<long>(ev.deg(*x[0])) * (ev.deg(*x[1]) - 1)), comp(L(*x[1]), I(*x[0])));
    d.axpy(Rational(-1), I(br(*x[0], *x[1])));
    return d;
  }));
  out.push_back(ev.run_op("lie_cup_relation", 2, [&](const Args& x) {
    WeightOp d = L(cup(*x[0], *x[1]));
    d.axpy(Rational(-1), comp(L(*x[0]), I(*x[1])));
    d.axpy(-sgn(ev.deg(*x[0])), comp(I(*x[0]), L(*x[1])));
    return d;
  }));
  out.push_back(ev.run_op("connes_square", 0, [&](const Args&) { return comp(Bop, Bop); }));
  out.push_back(ev.run_op("cartan", 1, [&](const Args& x) {
    WeightOp d = comp(Bop, I(*x[0]));
    d.axpy(-sgn(ev.deg(*x[0])), comp(I(*x[0]), Bop));
    d.axpy(Rational(-1), L(*x[0]));
    return d;
  }));
  return out;
}

}  // namespace ncp
