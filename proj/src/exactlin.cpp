#include "ncp/exactlin.hpp"

#include <algorithm>
#include <sstream>

namespace ncp {

// ---------------------------------------------------------------- SparseVec

Rational SparseVec::get(int i) const {
  auto it = std::lower_bound(e.begin(), e.end(), i, [](const auto& p, int k) { return p.first < k; });
  if (it != e.end() && it->first == i) return it->second;
  return Rational(0);
}

void SparseVec::axpy(const Rational& c, const SparseVec& w) {
  if (c.is_zero() || w.e.empty()) return;
  std::vector<std::pair<int, Rational>> out;
  out.reserve(e.size() + w.e.size());
  size_t i = 0, j = 0;
  while (i < e.size() || j < w.e.size()) {
    if (j == w.e.size() || (i < e.size() && e[i].first < w.e[j].first)) {
      out.push_back(std::move(e[i++]));
    } else if (i == e.size() || w.e[j].first < e[i].first) {
      out.emplace_back(w.e[j].first, c * w.e[j].second);
      ++j;
    } else {
      Rational s = e[i].second + c * w.e[j].second;
      if (!s.is_zero()) out.emplace_back(e[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  e = std::move(out);
}

void SparseVec::add_entry(int i, const Rational& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(e.begin(), e.end(), i, [](const auto& p, int k) { return p.first < k; });
  if (it != e.end() && it->first == i) {
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
  } else {
    e.insert(it, {i, c});
  }
}

void SparseVec::scale(const Rational& c) {
  if (c.is_zero()) {
    e.clear();
    return;
  }
  for (auto& p : e) p.second *= c;
}

SparseVec SparseVec::from_dense(const std::vector<Rational>& d) {
  SparseVec v;
  for (size_t i = 0; i < d.size(); ++i)
    if (!d[i].is_zero()) v.e.emplace_back(static_cast<int>(i), d[i]);
  return v;
}

std::vector<Rational> SparseVec::to_dense(int n) const {
  std::vector<Rational> d(static_cast<size_t>(n));
  for (const auto& [i, c] : e) d[static_cast<size_t>(i)] = c;
  return d;
}

SparseVec make_sparse(std::vector<std::pair<int, Rational>> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec v;
  for (auto& [i, c] : entries) {
    if (!v.e.empty() && v.e.back().first == i) {
      v.e.back().second += c;
      if (v.e.back().second.is_zero()) v.e.pop_back();
    } else if (!c.is_zero()) {
      v.e.emplace_back(i, std::move(c));
    }
  }
  return v;
}

std::string to_string(const SparseVec& v) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [i, c] : v.e) {
    if (!first) os << ", ";
    first = false;
    os << i << ":" << c;
  }
  os << "}";
  return os.str();
}

// --------------------------------------------------------- DenseAccumulator

void DenseAccumulator::resize(int n) {
  val_.assign(static_cast<size_t>(n), Rational(0));
  used_.assign(static_cast<size_t>(n), 0);
  touched_.clear();
}

void DenseAccumulator::add(int i, const Rational& c) {
  auto k = static_cast<size_t>(i);
  if (!used_[k]) {
    used_[k] = 1;
    touched_.push_back(i);
  }
  val_[k] += c;
}

void DenseAccumulator::axpy(const Rational& c, const SparseVec& w) {
  for (const auto& [i, x] : w.e) add(i, c * x);
}

SparseVec DenseAccumulator::extract() {
  std::sort(touched_.begin(), touched_.end());
  SparseVec v;
  v.e.reserve(touched_.size());
  for (int i : touched_) {
    auto k = static_cast<size_t>(i);
    if (!val_[k].is_zero()) v.e.emplace_back(i, val_[k]);
    val_[k] = Rational(0);
    used_[k] = 0;
  }
  touched_.clear();
  return v;
}

// ------------------------------------------------------------- SparseMatrix

void SparseMatrix::set(int r, int c, const Rational& v) {
  auto& col = col_[static_cast<size_t>(c)];
  auto it = std::lower_bound(col.e.begin(), col.e.end(), r, [](const auto& p, int k) { return p.first < k; });
  if (it != col.e.end() && it->first == r) {
    if (v.is_zero())
      col.e.erase(it);
    else
      it->second = v;
  } else if (!v.is_zero()) {
    col.e.insert(it, {r, v});
  }
}

void SparseMatrix::add(int r, int c, const Rational& v) { col_[static_cast<size_t>(c)].add_entry(r, v); }

Rational SparseMatrix::get(int r, int c) const { return col_[static_cast<size_t>(c)].get(r); }

void SparseMatrix::set_column(int c, SparseVec v) { col_[static_cast<size_t>(c)] = std::move(v); }

size_t SparseMatrix::nnz() const {
  size_t n = 0;
  for (const auto& c : col_) n += c.size();
  return n;
}

SparseVec SparseMatrix::apply(const SparseVec& v) const {
  if (v.e.empty()) return {};
  if (v.e.size() == 1) {
    SparseVec r = col_[static_cast<size_t>(v.e[0].first)];
    r.scale(v.e[0].second);
    return r;
  }
  DenseAccumulator acc(rows_);
  for (const auto& [j, c] : v.e) acc.axpy(c, col_[static_cast<size_t>(j)]);
  return acc.extract();
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (int c = 0; c < cols_; ++c)
    for (const auto& [r, v] : col_[static_cast<size_t>(c)].e) t.col_[static_cast<size_t>(r)].e.emplace_back(c, v);
  return t;
}

std::vector<SparseVec> SparseMatrix::row_vectors() const { return transpose().col_; }

std::vector<std::tuple<int, int, Rational>> SparseMatrix::entries() const {
  std::vector<std::tuple<int, int, Rational>> out;
  SparseMatrix t = transpose();
  for (int r = 0; r < rows_; ++r)
    for (const auto& [c, v] : t.col_[static_cast<size_t>(r)].e) out.emplace_back(r, c, v);
  return out;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.col_[static_cast<size_t>(i)] = SparseVec::unit(i);
  return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  SparseMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (!rows[static_cast<size_t>(i)][static_cast<size_t>(j)].is_zero())
        m.col_[static_cast<size_t>(j)].e.emplace_back(i, rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return m;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix product: dimension mismatch");
  SparseMatrix m(a.rows_, b.cols_);
  DenseAccumulator acc(a.rows_);
  for (int c = 0; c < b.cols_; ++c) {
    const auto& bc = b.col_[static_cast<size_t>(c)];
    if (bc.e.empty()) continue;
    for (const auto& [k, v] : bc.e) acc.axpy(v, a.col_[static_cast<size_t>(k)]);
    m.col_[static_cast<size_t>(c)] = acc.extract();
  }
  return m;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("SparseMatrix sum: dimension mismatch");
  SparseMatrix m = a;
  for (int c = 0; c < a.cols_; ++c) m.col_[static_cast<size_t>(c)].axpy(Rational(1), b.col_[static_cast<size_t>(c)]);
  return m;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("SparseMatrix difference: dimension mismatch");
  SparseMatrix m = a;
  for (int c = 0; c < a.cols_; ++c) m.col_[static_cast<size_t>(c)].axpy(Rational(-1), b.col_[static_cast<size_t>(c)]);
  return m;
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const {
  SparseMatrix m = *this;
  for (auto& col : m.col_) col.scale(c);
  return m;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.col_ == b.col_;
}

// --------------------------------------------------------------------- rref

namespace {

RrefResult finish_rref(int cols, std::vector<SparseVec> rows, std::vector<int> piv) {
  std::vector<size_t> order(piv.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return piv[x] < piv[y]; });
  RrefResult res;
  res.rank = static_cast<int>(piv.size());
  for (size_t k : order) {
    res.pivot_columns.push_back(piv[k]);
    res.reduced_rows.push_back(std::move(rows[k]));
  }
  std::vector<char> is_piv(static_cast<size_t>(cols), 0);
  for (int p : res.pivot_columns) is_piv[static_cast<size_t>(p)] = 1;
  // Kernel vector for free column f: e_f - sum_i R_i[f] e_{p_i}.
  std::vector<std::vector<std::pair<int, Rational>>> kern(static_cast<size_t>(cols));
  for (size_t i = 0; i < res.reduced_rows.size(); ++i)
    for (const auto& [c, v] : res.reduced_rows[i].e)
      if (!is_piv[static_cast<size_t>(c)]) kern[static_cast<size_t>(c)].emplace_back(res.pivot_columns[i], -v);
  for (int f = 0; f < cols; ++f) {
    if (is_piv[static_cast<size_t>(f)]) continue;
    auto entries = std::move(kern[static_cast<size_t>(f)]);
    entries.emplace_back(f, Rational(1));
    res.kernel_basis.push_back(make_sparse(std::move(entries)));
  }
  return res;
}

RrefResult rref_dense(const SparseMatrix& m) {
  const int cols = m.cols();
  std::vector<SparseVec> srows = m.row_vectors();
  std::vector<std::vector<Rational>> piv_rows;
  std::vector<int> piv;
  for (const auto& sr : srows) {
    std::vector<Rational> row = sr.to_dense(cols);
    for (size_t k = 0; k < piv.size(); ++k) {
      Rational c = row[static_cast<size_t>(piv[k])];
      if (c.is_zero()) continue;
      for (int j = 0; j < cols; ++j)
        if (!piv_rows[k][static_cast<size_t>(j)].is_zero()) row[static_cast<size_t>(j)] -= c * piv_rows[k][static_cast<size_t>(j)];
    }
    int p = -1;
    for (int j = 0; j < cols; ++j)
      if (!row[static_cast<size_t>(j)].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) continue;
    Rational inv = Rational(1) / row[static_cast<size_t>(p)];
    for (auto& x : row)
      if (!x.is_zero()) x *= inv;
    for (auto& pr : piv_rows) {
      Rational c = pr[static_cast<size_t>(p)];
      if (c.is_zero()) continue;
      for (int j = 0; j < cols; ++j)
        if (!row[static_cast<size_t>(j)].is_zero()) pr[static_cast<size_t>(j)] -= c * row[static_cast<size_t>(j)];
    }
    piv_rows.push_back(std::move(row));
    piv.push_back(p);
  }
  std::vector<SparseVec> rows;
  rows.reserve(piv_rows.size());
  for (auto& r : piv_rows) rows.push_back(SparseVec::from_dense(r));
  return finish_rref(cols, std::move(rows), std::move(piv));
}

RrefResult rref_sparse(const SparseMatrix& m) {
  EchelonBasis eb(m.cols());
  for (const auto& r : m.row_vectors()) eb.insert(r);
  return finish_rref(m.cols(), eb.vectors(), eb.pivots());
}

}  // namespace

RrefResult rref(const SparseMatrix& m) {
  if (m.rows() < 64 && m.cols() < 64) return rref_dense(m);
  return rref_sparse(m);
}

int rank(const SparseMatrix& m) {
  EchelonBasis eb(m.rows());
  for (int c = 0; c < m.cols(); ++c) eb.insert(m.column(c));
  return eb.size();
}

// ------------------------------------------------------------ EchelonBasis

int EchelonBasis::index_of_pivot(int col) const {
  auto it = pivot_pos_.find(col);
  return it == pivot_pos_.end() ? -1 : it->second;
}

SparseVec EchelonBasis::reduce(const SparseVec& v, const SparseVec* tag, SparseVec* tag_out) const {
  std::vector<std::pair<int, Rational>> hits;
  for (const auto& [i, c] : v.e) {
    int k = index_of_pivot(i);
    if (k >= 0) hits.emplace_back(k, c);
  }
  if (tag_out) *tag_out = tag ? *tag : SparseVec();
  if (hits.empty()) return v;
  SparseVec r = v;
  for (const auto& [k, c] : hits) {
    r.axpy(-c, vecs_[static_cast<size_t>(k)]);
    if (tag_out) tag_out->axpy(-c, tags_[static_cast<size_t>(k)]);
  }
  return r;
}

bool EchelonBasis::insert(const SparseVec& v, const SparseVec& tag) {
  SparseVec t;
  SparseVec r = reduce(v, &tag, &t);
  if (r.empty()) return false;
  int p = r.leading();
  Rational inv = Rational(1) / r.e.front().second;
  r.scale(inv);
  t.scale(inv);
  for (size_t k = 0; k < vecs_.size(); ++k) {
    Rational c = vecs_[k].get(p);
    if (c.is_zero()) continue;
    vecs_[k].axpy(-c, r);
    tags_[k].axpy(-c, t);
  }
  pivot_pos_[p] = static_cast<int>(vecs_.size());
  vecs_.push_back(std::move(r));
  tags_.push_back(std::move(t));
  pivots_.push_back(p);
  return true;
}

std::vector<Rational> EchelonBasis::coordinates(const SparseVec& v) const {
  std::vector<Rational> c(vecs_.size());
  for (const auto& [i, x] : v.e) {
    int k = index_of_pivot(i);
    if (k >= 0) c[static_cast<size_t>(k)] = x;
  }
  return c;
}

// ---------------------------------------------------------------- homology

SubquotientBasis homology_at(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  if (d_in.rows() != d_out.cols()) throw std::invalid_argument("homology_at: dimension mismatch");
  if (!(d_out * d_in).is_zero()) throw CompositionNonzero();
  SubquotientBasis sq;
  sq.ambient_dim = d_out.cols();
  sq.cycle_basis = rref(d_out).kernel_basis;
  EchelonBasis eb(sq.ambient_dim);
  for (int c = 0; c < d_in.cols(); ++c) eb.insert(d_in.column(c));
  sq.boundary_basis = eb.vectors();
  for (const auto& z : sq.cycle_basis)
    if (eb.insert(z)) sq.homology_reps.push_back(z);
  return sq;
}

HomologyCoordinates::HomologyCoordinates(const SubquotientBasis& sq)
    : boundaries_(sq.ambient_dim), full_(sq.ambient_dim), reps_(sq.homology_reps) {
  for (const auto& b : sq.boundary_basis) {
    boundaries_.insert(b);
    full_.insert(b);
  }
  for (size_t k = 0; k < reps_.size(); ++k) full_.insert(reps_[k], SparseVec::unit(static_cast<int>(k)));
}

std::vector<Rational> HomologyCoordinates::class_of(const SparseVec& z) const {
  SparseVec zero, t;
  SparseVec r = full_.reduce(z, &zero, &t);
  if (!r.empty()) throw std::invalid_argument("HomologyCoordinates: vector is not a cycle");
  std::vector<Rational> out(reps_.size());
  for (const auto& [i, c] : t.e) out[static_cast<size_t>(i)] = -c;
  return out;
}

bool solve(const SparseMatrix& m, const SparseVec& rhs, SparseVec& x) {
  SparseMatrix aug(m.rows(), m.cols() + 1);
  for (int c = 0; c < m.cols(); ++c) aug.set_column(c, m.column(c));
  aug.set_column(m.cols(), rhs);
  RrefResult r = rref(aug);
  std::vector<std::pair<int, Rational>> sol;
  for (size_t i = 0; i < r.reduced_rows.size(); ++i) {
    if (r.pivot_columns[i] == m.cols()) return false;
    Rational v = r.reduced_rows[i].get(m.cols());
    if (!v.is_zero()) sol.emplace_back(r.pivot_columns[i], v);
  }
  x = make_sparse(std::move(sol));
  return true;
}

}  // namespace ncp
