#include "ncp/algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace ncp {

bool DgAlgebra::concentrated_in_degree_zero() const {
  return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 0; });
}

SparseVec DgAlgebra::multiply(const SparseVec& a, const SparseVec& b) const {
  SparseVec out;
  for (const auto& [i, x] : a.e)
    for (const auto& [j, y] : b.e) out.axpy(x * y, mult[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return out;
}

SparseVec DgAlgebra::differential(const SparseVec& a) const {
  SparseVec out;
  for (const auto& [i, x] : a.e) out.axpy(x, diff[static_cast<size_t>(i)]);
  return out;
}

std::string DgAlgebra::format(const SparseVec& v) const {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v.e) {
    if (!first) os << " + ";
    first = false;
    if (!c.is_one()) os << c << "*";
    os << labels[static_cast<size_t>(i)];
  }
  return os.str();
}

std::string ValidationReport::str() const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) os << v.axiom << ": " << v.witness << "\n";
  return os.str();
}

ValidationReport validate_dg_algebra(const DgAlgebra& a) {
  ValidationReport rep;
  const int n = a.dim();
  auto add = [&](const std::string& ax, const std::string& w) { rep.violations.push_back({ax, w}); };
  if (n == 0) {
    add("nonzero", "zero algebra has no unit");
    return rep;
  }
  if (static_cast<int>(a.degree.size()) != n || static_cast<int>(a.mult.size()) != n ||
      static_cast<int>(a.diff.size()) != n) {
    add("shape", "basis, degree, multiplication and differential sizes disagree");
    return rep;
  }
  for (const auto& row : a.mult)
    if (static_cast<int>(row.size()) != n) {
      add("shape", "multiplication table is not square");
      return rep;
    }
  auto lab = [&](int i) { return a.labels[static_cast<size_t>(i)]; };
  auto in_range = [&](const SparseVec& v) {
    return std::all_of(v.e.begin(), v.e.end(), [&](const auto& p) { return p.first >= 0 && p.first < n; });
  };
  for (int i = 0; i < n; ++i) {
    if (!in_range(a.diff[static_cast<size_t>(i)])) {
      add("shape", "differential entry out of range at " + lab(i));
      return rep;
    }
    for (int j = 0; j < n; ++j)
      if (!in_range(a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)])) {
        add("shape", "product entry out of range at (" + lab(i) + "," + lab(j) + ")");
        return rep;
      }
  }
  if (!in_range(a.unit)) {
    add("shape", "unit entry out of range");
    return rep;
  }
  // Degrees.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      for (const auto& [k, c] : a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)].e)
        if (a.degree[static_cast<size_t>(k)] != a.degree[static_cast<size_t>(i)] + a.degree[static_cast<size_t>(j)])
          add("degree", "(" + lab(i) + "," + lab(j) + ") -> " + lab(k));
    for (const auto& [k, c] : a.diff[static_cast<size_t>(i)].e)
      if (a.degree[static_cast<size_t>(k)] != a.degree[static_cast<size_t>(i)] + 1)
        add("differential degree", lab(i) + " -> " + lab(k));
  }
  // Unit.
  if (a.unit.empty()) add("unit", "no unit given");
  for (const auto& [k, c] : a.unit.e)
    if (a.degree[static_cast<size_t>(k)] != 0) add("unit", "unit has a component in nonzero degree at " + lab(k));
  for (int i = 0; i < n && !a.unit.empty(); ++i) {
    SparseVec e = SparseVec::unit(i);
    if (a.multiply(a.unit, e) != e) add("left unit", "(1," + lab(i) + ")");
    if (a.multiply(e, a.unit) != e) add("right unit", "(" + lab(i) + ",1)");
  }
  if (!a.differential(a.unit).empty()) add("unit cocycle", "d(1) = " + a.format(a.differential(a.unit)));
  // Associativity.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        SparseVec l = a.multiply(a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)], SparseVec::unit(k));
        SparseVec r = a.multiply(SparseVec::unit(i), a.mult[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        if (l != r) add("associativity", "(" + lab(i) + "," + lab(j) + "," + lab(k) + ")");
      }
  // d^2 = 0 and Leibniz.
  for (int i = 0; i < n; ++i) {
    if (!a.differential(a.diff[static_cast<size_t>(i)]).empty()) add("d^2=0", lab(i));
    for (int j = 0; j < n; ++j) {
      SparseVec lhs = a.differential(a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)]);
      SparseVec rhs = a.multiply(a.diff[static_cast<size_t>(i)], SparseVec::unit(j));
      Rational s = a.degree[static_cast<size_t>(i)] % 2 == 0 ? Rational(1) : Rational(-1);
      rhs.axpy(s, a.multiply(SparseVec::unit(i), a.diff[static_cast<size_t>(j)]));
      if (lhs != rhs) add("Leibniz", "(" + lab(i) + "," + lab(j) + ")");
    }
  }
  if (a.has_idempotents()) {
    const int m = static_cast<int>(a.idempotents.size());
    SparseVec sum;
    for (int e : a.idempotents) sum.add_entry(e, Rational(1));
    if (sum != a.unit) add("idempotents", "idempotents do not sum to the unit");
    if (static_cast<int>(a.left.size()) != n || static_cast<int>(a.right.size()) != n) {
      add("idempotents", "missing endpoint data");
    } else {
      for (int i = 0; i < n; ++i) {
        SparseVec e = SparseVec::unit(i);
        for (int k = 0; k < m; ++k) {
          SparseVec ek = SparseVec::unit(a.idempotents[static_cast<size_t>(k)]);
          SparseVec l = a.multiply(ek, e), r = a.multiply(e, ek);
          bool lk = k == a.left[static_cast<size_t>(i)], rk = k == a.right[static_cast<size_t>(i)];
          if (lk ? l != e : !l.empty()) add("idempotents", "left endpoint of " + lab(i));
          if (rk ? r != e : !r.empty()) add("idempotents", "right endpoint of " + lab(i));
        }
      }
    }
  }
  return rep;
}

namespace {

DgAlgebra blank(const std::string& name, std::vector<std::string> labels) {
  DgAlgebra a;
  a.name = name;
  const size_t n = labels.size();
  a.labels = std::move(labels);
  a.degree.assign(n, 0);
  a.mult.assign(n, std::vector<SparseVec>(n));
  a.diff.assign(n, SparseVec());
  return a;
}

}  // namespace

DgAlgebra build_path_algebra(int vertices, const std::vector<std::pair<int, int>>& arrows, const std::string& name) {
  if (vertices < 1) throw std::invalid_argument("quiver needs at least one vertex");
  for (const auto& [s, t] : arrows)
    if (s < 0 || t < 0 || s >= vertices || t >= vertices) throw std::invalid_argument("arrow endpoint out of range");
  // Paths as arrow sequences; trivial paths carry their vertex.
  struct Path {
    int src, tgt;
    std::vector<int> arrows;
  };
  std::vector<Path> paths;
  for (int v = 0; v < vertices; ++v) paths.push_back({v, v, {}});
  std::vector<Path> frontier;
  for (int k = 0; k < static_cast<int>(arrows.size()); ++k)
    frontier.push_back({arrows[static_cast<size_t>(k)].first, arrows[static_cast<size_t>(k)].second, {k}});
  int len = 1;
  while (!frontier.empty()) {
    if (len > vertices) throw CyclicQuiver("quiver has an oriented cycle");
    paths.insert(paths.end(), frontier.begin(), frontier.end());
    std::vector<Path> next;
    for (const auto& p : frontier)
      for (int k = 0; k < static_cast<int>(arrows.size()); ++k)
        if (arrows[static_cast<size_t>(k)].first == p.tgt) {
          Path q = p;
          q.arrows.push_back(k);
          q.tgt = arrows[static_cast<size_t>(k)].second;
          next.push_back(q);
        }
    frontier = std::move(next);
    ++len;
  }
  auto label = [&](const Path& p) {
    if (p.arrows.empty()) return "e" + std::to_string(p.src + 1);
    std::string s;
    for (size_t i = 0; i < p.arrows.size(); ++i) {
      if (i) s += ".";
      s += "a" + std::to_string(p.arrows[i] + 1);
    }
    return s;
  };
  std::vector<std::string> labels;
  for (const auto& p : paths) labels.push_back(label(p));
  DgAlgebra a = blank(name, labels);
  std::map<std::pair<int, std::vector<int>>, int> index;
  for (size_t i = 0; i < paths.size(); ++i) index[{paths[i].src, paths[i].arrows}] = static_cast<int>(i);
  for (size_t i = 0; i < paths.size(); ++i)
    for (size_t j = 0; j < paths.size(); ++j) {
      if (paths[i].tgt != paths[j].src) continue;
      std::vector<int> c = paths[i].arrows;
      c.insert(c.end(), paths[j].arrows.begin(), paths[j].arrows.end());
      a.mult[i][j] = SparseVec::unit(index.at({paths[i].src, c}));
    }
  for (int v = 0; v < vertices; ++v) {
    a.unit.add_entry(v, Rational(1));
    a.idempotents.push_back(v);
  }
  for (const auto& p : paths) {
    a.left.push_back(p.src);
    a.right.push_back(p.tgt);
  }
  return a;
}

DgAlgebra build_truncated_polynomial_algebra(int n) {
  if (n < 2) throw std::invalid_argument("truncated polynomial algebra needs n >= 2");
  std::vector<std::string> labels{"1"};
  for (int k = 1; k < n; ++k) labels.push_back(k == 1 ? "x" : "x^" + std::to_string(k));
  DgAlgebra a = blank("Q[x]/(x^" + std::to_string(n) + ")", labels);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i + j < n) a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)] = SparseVec::unit(i + j);
  a.unit = SparseVec::unit(0);
  return a;
}

DgAlgebra build_matrix_algebra(int n) {
  if (n < 1) throw std::invalid_argument("matrix algebra needs n >= 1");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
  DgAlgebra a = blank("M" + std::to_string(n) + "(Q)", labels);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        a.mult[static_cast<size_t>(idx(i, j))][static_cast<size_t>(idx(j, l))] = SparseVec::unit(idx(i, l));
  for (int i = 0; i < n; ++i) {
    a.unit.add_entry(idx(i, i), Rational(1));
    a.idempotents.push_back(idx(i, i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a.left.push_back(i);
      a.right.push_back(j);
    }
  return a;
}

UnitAdapted unit_adapted(const DgAlgebra& a) {
  const int n = a.dim();
  if (n == 0 || a.unit.empty()) throw std::invalid_argument("algebra has no unit");
  int pivot = a.unit.size() == 1 ? a.unit.e[0].first : a.unit.leading();
  // New basis: unit, then the old basis without the pivot.
  std::vector<SparseVec> nb{a.unit};
  std::vector<int> old_of_new{pivot};
  for (int i = 0; i < n; ++i)
    if (i != pivot) {
      nb.push_back(SparseVec::unit(i));
      old_of_new.push_back(i);
    }
  SparseMatrix to(n, n);
  for (int k = 0; k < n; ++k) to.set_column(k, nb[static_cast<size_t>(k)]);
  // Inverse: old e_i for i != pivot is new basis k; e_pivot = (unit - rest)/c.
  SparseMatrix from(n, n);
  Rational c = a.unit.get(pivot);
  for (int k = 1; k < n; ++k) from.set_column(old_of_new[static_cast<size_t>(k)], SparseVec::unit(k));
  {
    std::vector<std::pair<int, Rational>> e{{0, Rational(1) / c}};
    for (const auto& [i, x] : a.unit.e)
      if (i != pivot) {
        int k = static_cast<int>(std::find(old_of_new.begin(), old_of_new.end(), i) - old_of_new.begin());
        e.emplace_back(k, -x / c);
      }
    from.set_column(pivot, make_sparse(std::move(e)));
  }
  UnitAdapted out;
  DgAlgebra& b = out.algebra;
  b.name = a.name;
  b.labels.push_back(a.unit.size() == 1 && c.is_one() ? a.labels[static_cast<size_t>(pivot)] : "1");
  for (int k = 1; k < n; ++k) b.labels.push_back(a.labels[static_cast<size_t>(old_of_new[static_cast<size_t>(k)])]);
  for (int k = 0; k < n; ++k) b.degree.push_back(a.degree[static_cast<size_t>(old_of_new[static_cast<size_t>(k)])]);
  b.mult.assign(static_cast<size_t>(n), std::vector<SparseVec>(static_cast<size_t>(n)));
  b.diff.assign(static_cast<size_t>(n), SparseVec());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      b.mult[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          from.apply(a.multiply(nb[static_cast<size_t>(i)], nb[static_cast<size_t>(j)]));
    b.diff[static_cast<size_t>(i)] = from.apply(a.differential(nb[static_cast<size_t>(i)]));
  }
  b.unit = SparseVec::unit(0);
  bool unchanged = a.unit.size() == 1 && pivot == 0;
  if (unchanged) {
    b.idempotents = a.idempotents;
    b.left = a.left;
    b.right = a.right;
  }
  out.to_original = to;
  out.from_original = from;
  return out;
}

DgAlgebra algebra_from_name(const std::string& name) {
  auto colon = name.find(':');
  std::string kind = name.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  auto num = [&](const std::string& s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad algebra name '" + name + "'");
    }
  };
  if (name == "Q") return build_path_algebra(1, {}, "Q");
  if (kind == "trunc_poly") return build_truncated_polynomial_algebra(num(arg));
  if (kind == "matrix") return build_matrix_algebra(num(arg));
  if (kind == "path") {
    if (arg == "kronecker") return build_path_algebra(2, {{0, 1}, {0, 1}}, "kronecker");
    if (arg.size() > 1 && arg[0] == 'a') {
      int v = num(arg.substr(1));
      std::vector<std::pair<int, int>> arrows;
      for (int i = 0; i + 1 < v; ++i) arrows.emplace_back(i, i + 1);
      return build_path_algebra(v, arrows, "A" + std::to_string(v));
    }
  }
  throw std::invalid_argument("unknown algebra name '" + name + "'");
}

}  // namespace ncp
