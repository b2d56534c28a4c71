#include "ncp/coeff.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ncp {

namespace {

std::string vec_str(const SparseVec& v) { return to_string(v); }

}  // namespace

ArtinLocalRing::ArtinLocalRing(std::string name, std::vector<std::string> labels,
                               std::vector<std::vector<SparseVec>> table)
    : name_(std::move(name)), labels_(std::move(labels)), table_(std::move(table)) {
  const int n = dim();
  if (n == 0) throw InvalidRing("ring has empty basis");
  if (static_cast<int>(table_.size()) != n) throw InvalidRing("multiplication table has wrong size");
  for (const auto& row : table_)
    if (static_cast<int>(row.size()) != n) throw InvalidRing("multiplication table has wrong size");
  for (int i = 0; i < n; ++i) {
    if (product(0, i) != SparseVec::unit(i) || product(i, 0) != SparseVec::unit(i))
      throw InvalidRing("basis element 0 is not a unit (fails at " + labels_[static_cast<size_t>(i)] + ")");
    for (int j = 0; j < n; ++j) {
      for (const auto& [k, c] : product(i, j).e)
        if (k < 0 || k >= n) throw InvalidRing("product index out of range");
      if (product(i, j) != product(j, i))
        throw InvalidRing("not commutative: " + labels_[static_cast<size_t>(i)] + "," + labels_[static_cast<size_t>(j)]);
    }
  }
  auto mulv = [&](const SparseVec& a, const SparseVec& b) {
    SparseVec out;
    for (const auto& [i, x] : a.e)
      for (const auto& [j, y] : b.e) out.axpy(x * y, product(i, j));
    return out;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        SparseVec l = mulv(product(i, j), SparseVec::unit(k));
        SparseVec r = mulv(SparseVec::unit(i), product(j, k));
        if (l != r)
          throw InvalidRing("not associative at (" + labels_[static_cast<size_t>(i)] + "," +
                            labels_[static_cast<size_t>(j)] + "," + labels_[static_cast<size_t>(k)] + ")");
      }
  // The maximal ideal is the span of basis elements 1..n-1; it must be an
  // ideal and nilpotent.
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      if (!product(i, j).get(0).is_zero())
        throw InvalidRing("span of non-unit basis elements is not an ideal (" + vec_str(product(i, j)) + ")");
  // Powers m^k as echelon spans.
  std::vector<EchelonBasis> powers;
  EchelonBasis m1(n);
  for (int i = 1; i < n; ++i) m1.insert(SparseVec::unit(i));
  powers.push_back(m1);
  while (powers.back().size() > 0) {
    if (static_cast<int>(powers.size()) > n + 1) throw InvalidRing("maximal ideal is not nilpotent");
    EchelonBasis next(n);
    for (const auto& v : powers.back().vectors())
      for (int j = 1; j < n; ++j) next.insert(mulv(v, SparseVec::unit(j)));
    if (next.size() == powers.back().size()) throw InvalidRing("maximal ideal is not nilpotent");
    powers.push_back(next);
  }
  nil_order_ = static_cast<int>(powers.size());  // m^{nil_order} = 0
  level_.assign(static_cast<size_t>(n), 0);
  for (size_t k = 0; k < powers.size(); ++k) {
    // Filtration-adapted check: m^{k+1} must be spanned by basis vectors.
    for (const auto& v : powers[k].vectors())
      if (v.size() != 1)
        throw InvalidRing("basis is not adapted to the m-adic filtration (m^" + std::to_string(k + 1) + ")");
    for (int p : powers[k].pivots()) level_[static_cast<size_t>(p)] = static_cast<int>(k) + 1;
  }
}

std::vector<int> ArtinLocalRing::maximal_ideal() const {
  std::vector<int> out;
  for (int i = 1; i < dim(); ++i) out.push_back(i);
  return out;
}

RingElement ArtinLocalRing::one() const { return basis(0); }

RingElement ArtinLocalRing::basis(int i) const {
  RingElement e = zero();
  e[static_cast<size_t>(i)] = Rational(1);
  return e;
}

RingElement ArtinLocalRing::mul(const RingElement& a, const RingElement& b) const {
  RingElement out = zero();
  for (int i = 0; i < dim(); ++i) {
    if (a[static_cast<size_t>(i)].is_zero()) continue;
    for (int j = 0; j < dim(); ++j) {
      if (b[static_cast<size_t>(j)].is_zero()) continue;
      Rational c = a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      for (const auto& [k, x] : product(i, j).e) out[static_cast<size_t>(k)] += c * x;
    }
  }
  return out;
}

RingElement ArtinLocalRing::add(const RingElement& a, const RingElement& b) const {
  RingElement out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

RingElement ArtinLocalRing::scale(const Rational& c, const RingElement& a) const {
  RingElement out = a;
  for (auto& x : out) x *= c;
  return out;
}

std::string ArtinLocalRing::format(const RingElement& a) const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < dim(); ++i) {
    const Rational& c = a[static_cast<size_t>(i)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0)
      os << c;
    else if (c.is_one())
      os << labels_[static_cast<size_t>(i)];
    else
      os << c << "*" << labels_[static_cast<size_t>(i)];
  }
  if (first) os << "0";
  return os.str();
}

std::vector<std::vector<int>> ArtinLocalRing::m_adic_filtration() const {
  std::vector<std::vector<int>> out;
  for (int k = 1; k <= nil_order_; ++k) {
    std::vector<int> s;
    for (int i = 1; i < dim(); ++i)
      if (level(i) >= k) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

ArtinLocalRing build_truncated_poly(int num_vars, int order) {
  if (num_vars < 1 || order < 2) throw InvalidRing("truncated polynomial ring needs num_vars >= 1 and order >= 2");
  // Monomials of total degree < order in graded-lex order.
  std::vector<std::vector<int>> monos;
  for (int deg = 0; deg < order; ++deg) {
    std::vector<std::vector<int>> level;
    std::vector<int> cur(static_cast<size_t>(num_vars), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
      if (var == num_vars - 1) {
        cur[static_cast<size_t>(var)] = left;
        level.push_back(cur);
        return;
      }
      for (int e = left; e >= 0; --e) {
        cur[static_cast<size_t>(var)] = e;
        rec(var + 1, left - e);
      }
    };
    rec(0, deg);
    monos.insert(monos.end(), level.begin(), level.end());
  }
  auto label = [&](const std::vector<int>& m) {
    std::string s;
    for (int v = 0; v < num_vars; ++v) {
      int e = m[static_cast<size_t>(v)];
      if (e == 0) continue;
      if (!s.empty()) s += "*";
      s += num_vars == 1 ? "e" : "e" + std::to_string(v + 1);
      if (e > 1) s += "^" + std::to_string(e);
    }
    return s.empty() ? std::string("1") : s;
  };
  std::vector<std::string> labels;
  for (const auto& m : monos) labels.push_back(label(m));
  const size_t n = monos.size();
  std::vector<std::vector<SparseVec>> table(n, std::vector<SparseVec>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      std::vector<int> p(static_cast<size_t>(num_vars));
      int deg = 0;
      for (int v = 0; v < num_vars; ++v) {
        p[static_cast<size_t>(v)] = monos[i][static_cast<size_t>(v)] + monos[j][static_cast<size_t>(v)];
        deg += p[static_cast<size_t>(v)];
      }
      if (deg >= order) continue;
      auto it = std::find(monos.begin(), monos.end(), p);
      table[i][j] = SparseVec::unit(static_cast<int>(it - monos.begin()));
    }
  std::string name = num_vars == 1 ? "Q[e]/(e^" + std::to_string(order) + ")"
                                   : "Q[e1..e" + std::to_string(num_vars) + "]/(deg>=" + std::to_string(order) + ")";
  return ArtinLocalRing(name, labels, table);
}

ArtinLocalRing truncate_ring(const ArtinLocalRing& r, int n) {
  if (n < 1) throw InvalidRing("truncate_ring: n must be >= 1");
  std::vector<int> keep;
  std::vector<int> pos(static_cast<size_t>(r.dim()), -1);
  for (int i = 0; i < r.dim(); ++i)
    if (r.level(i) < n) {
      pos[static_cast<size_t>(i)] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  std::vector<std::string> labels;
  for (int i : keep) labels.push_back(r.labels()[static_cast<size_t>(i)]);
  std::vector<std::vector<SparseVec>> table(keep.size(), std::vector<SparseVec>(keep.size()));
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b) {
      std::vector<std::pair<int, Rational>> e;
      for (const auto& [k, c] : r.product(keep[a], keep[b]).e)
        if (pos[static_cast<size_t>(k)] >= 0) e.emplace_back(pos[static_cast<size_t>(k)], c);
      table[a][b] = make_sparse(std::move(e));
    }
  return ArtinLocalRing(r.name() + "/m^" + std::to_string(n), labels, table);
}

ArtinLocalRing fiber_product(const ArtinLocalRing& r, const ArtinLocalRing& rq, const SparseMatrix& pi) {
  const int n = r.dim();
  if (pi.cols() != n || pi.rows() != rq.dim()) throw InvalidRing("fiber_product: projection has wrong shape");
  // Check pi is a ring map.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SparseVec lhs = pi.apply(r.product(i, j));
      SparseVec rhs;
      for (const auto& [a, x] : pi.column(i).e)
        for (const auto& [b, y] : pi.column(j).e) rhs.axpy(x * y, rq.product(a, b));
      if (lhs != rhs) throw InvalidRing("fiber_product: projection is not multiplicative");
    }
  if (pi.column(0) != SparseVec::unit(0)) throw InvalidRing("fiber_product: projection is not unital");
  if (rank(pi) != rq.dim()) throw InvalidRing("fiber_product: projection is not surjective");
  std::vector<SparseVec> kern = rref(pi).kernel_basis;
  // Elements are pairs (u, v) in R x R stored as vectors of length 2n.
  std::vector<SparseVec> basis;
  for (int i = 0; i < n; ++i) basis.push_back(make_sparse({{i, Rational(1)}, {n + i, Rational(1)}}));
  for (const auto& k : kern) {
    SparseVec v;
    for (const auto& [i, c] : k.e) v.e.emplace_back(n + i, c);
    basis.push_back(v);
  }
  const int dim = static_cast<int>(basis.size());
  EchelonBasis eb(2 * n, dim);
  for (int k = 0; k < dim; ++k) eb.insert(basis[static_cast<size_t>(k)], SparseVec::unit(k));
  auto mul_pair = [&](const SparseVec& a, const SparseVec& b) {
    SparseVec out;
    for (const auto& [i, x] : a.e)
      for (const auto& [j, y] : b.e) {
        if ((i < n) != (j < n)) continue;
        int off = i < n ? 0 : n;
        for (const auto& [k, c] : r.product(i - off, j - off).e) out.add_entry(k + off, x * y * c);
      }
    return out;
  };
  std::vector<std::vector<SparseVec>> table(static_cast<size_t>(dim), std::vector<SparseVec>(static_cast<size_t>(dim)));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      SparseVec p = mul_pair(basis[static_cast<size_t>(a)], basis[static_cast<size_t>(b)]);
      SparseVec zero, coords;
      SparseVec rest = eb.reduce(p, &zero, &coords);
      if (!rest.empty()) throw InvalidRing("fiber_product: product left the fiber product");
      coords.scale(Rational(-1));
      table[static_cast<size_t>(a)][static_cast<size_t>(b)] = coords;
    }
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("(" + r.labels()[static_cast<size_t>(i)] + "," + r.labels()[static_cast<size_t>(i)] + ")");
  for (size_t k = 0; k < kern.size(); ++k) labels.push_back("(0,k" + std::to_string(k + 1) + ")");
  return ArtinLocalRing(r.name() + " x_" + rq.name() + " " + r.name(), labels, table);
}

ArtinLocalRing ring_from_name(const std::string& name) {
  if (name == "dual") return build_truncated_poly(1, 2);
  if (name == "eps2x2") return build_truncated_poly(2, 2);
  if (name.rfind("eps^", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(4));
    } catch (const std::exception&) {
      throw InvalidRing("bad ring name '" + name + "'");
    }
    return build_truncated_poly(1, n);
  }
  throw InvalidRing("unknown ring name '" + name + "'");
}

ArtinLocalRing parse_ring_table(const std::string& text) {
  std::istringstream in(text);
  std::string line, name = "table";
  std::vector<std::string> labels;
  std::vector<std::tuple<int, int, int, Rational>> entries;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "ring") {
      ls >> name;
    } else if (kw == "basis") {
      std::string l;
      while (ls >> l) labels.push_back(l);
    } else if (kw == "mul") {
      int i, j, k;
      std::string c;
      if (!(ls >> i >> j >> k >> c)) throw InvalidRing("line " + std::to_string(lineno) + ": malformed mul entry");
      entries.emplace_back(i, j, k, Rational::parse(c));
    } else {
      throw InvalidRing("line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  const int n = static_cast<int>(labels.size());
  std::vector<std::vector<SparseVec>> table(static_cast<size_t>(n), std::vector<SparseVec>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    table[0][static_cast<size_t>(i)] = SparseVec::unit(i);
    table[static_cast<size_t>(i)][0] = SparseVec::unit(i);
  }
  for (auto& [i, j, k, c] : entries) {
    if (i <= 0 || j <= 0 || i >= n || j >= n || k < 0 || k >= n) throw InvalidRing("mul entry index out of range");
    table[static_cast<size_t>(i)][static_cast<size_t>(j)].add_entry(k, c);
  }
  return ArtinLocalRing(name, labels, table);
}

}  // namespace ncp
