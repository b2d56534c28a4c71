#include "ncp/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ncp/calculus.hpp"
#include "ncp/cyclic.hpp"
#include "ncp/period.hpp"

namespace ncp {

namespace {

using json = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool is_file(const std::string& s) {
  std::error_code ec;
  return !s.empty() && std::filesystem::is_regular_file(s, ec);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

Rational parse_rational(const std::string& s, int line) {
  try {
    return Rational::parse(s);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a rational, got '" + s + "'");
  }
}

DgAlgebra builder_shorthand(const std::vector<std::string>& t, int line) {
  const std::string& kind = t[0];
  if (kind == "trunc_poly" || kind == "matrix") {
    if (t.size() != 2) throw ParseError(line, kind + " takes one argument");
    const int n = parse_int(t[1], line);
    if (n < 1) throw ParseError(line, kind + " needs a positive size");
    return kind == "trunc_poly" ? build_truncated_polynomial_algebra(n) : build_matrix_algebra(n);
  }
  // path_algebra <quiver name> | path_algebra <vertices> <s>><t> ...
  if (t.size() < 2) throw ParseError(line, "path_algebra needs a quiver");
  if (t.size() == 2 && !t[1].empty() && !std::isdigit(static_cast<unsigned char>(t[1][0]))) {
    try {
      return algebra_from_name("path:" + t[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  }
  const int v = parse_int(t[1], line);
  if (v < 1) throw ParseError(line, "path_algebra needs at least one vertex");
  std::vector<std::pair<int, int>> arrows;
  for (size_t i = 2; i < t.size(); ++i) {
    auto gt = t[i].find('>');
    if (gt == std::string::npos) throw ParseError(line, "arrow '" + t[i] + "' is not of the form s>t");
    int s = parse_int(t[i].substr(0, gt), line), e = parse_int(t[i].substr(gt + 1), line);
    if (s < 0 || e < 0 || s >= v || e >= v) throw ParseError(line, "arrow endpoint out of range");
    arrows.emplace_back(s, e);
  }
  try {
    return build_path_algebra(v, arrows);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

void require_valid(const DgAlgebra& a) {
  ValidationReport rep = validate_dg_algebra(a);
  if (!rep.valid()) throw ValidationError(rep.violations[0].axiom, rep.violations[0].witness);
}

std::string rational_list(const std::vector<Rational>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].str();
  return s;
}

json matrix_json(const SparseMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m.get(r, c).str());
    rows.push_back(row);
  }
  return rows;
}

json class_json(const PeriodClass& pc) {
  json blocks = json::array();
  for (const auto& b : pc.blocks)
    blocks.push_back({{"from", b.from_degree}, {"to", b.to_degree}, {"t_exponent", b.t_exponent}, {"matrix", matrix_json(b.matrix)}});
  return {{"label", pc.label}, {"blocks", blocks}};
}

std::string class_text(const PeriodClass& pc) {
  std::ostringstream os;
  os << pc.label << "\n";
  for (const auto& b : pc.blocks) {
    os << "  HH_" << b.from_degree << " -> HH_" << b.to_degree << " t^" << b.t_exponent << " [";
    for (int r = 0; r < b.matrix.rows(); ++r) {
      if (r) os << "; ";
      for (int c = 0; c < b.matrix.cols(); ++c) os << (c ? " " : "") << b.matrix.get(r, c).str();
    }
    os << "]\n";
  }
  return os.str();
}

json dims_json(const GradedDims& g, int lo, int hi) {
  json d = json::array();
  for (int n = lo; n <= hi; ++n) d.push_back(g.dims.count(n) ? g.dims.at(n) : 0);
  return d;
}

std::shared_ptr<const HochschildContext> homology_context(const DgAlgebra& a, int bar) {
  if (a.has_idempotents() && a.concentrated_in_degree_zero())
    return std::make_shared<const HochschildContext>(HochschildContext::relative(a, bar));
  return std::make_shared<const HochschildContext>(a, bar);
}

// First-order classes of HH^2 placed on the first level-one element of the
// ring, lifted to the whole ring.
std::vector<MCElement> lifted_classes(const HochschildContext& ctx, const ArtinLocalRing& ring, std::ostream* log,
                                      json* jlog) {
  std::vector<MCElement> out;
  if (ring.max_level() < 1) return out;
  ArtinLocalRing first = truncate_ring(ring, 2);
  int k1 = -1;
  for (int k = 0; k < first.dim(); ++k)
    if (first.level(k) == 1) {
      k1 = k;
      break;
    }
  GradedDims coh = hochschild_cohomology(ctx, 2, 2);
  for (size_t j = 0; j < coh.reps.at(2).size(); ++j) {
    MCElement m{first, ring_multiple(first, k1, cochain_from_vector(ctx, 2, coh.reps.at(2)[j]))};
    bool ok = true;
    json steps = json::array();
    while (m.base.dim() < ring.dim()) {
      LiftResult r = lift_order_by_order(ctx, m, ring);
      json obs = json::array();
      for (const auto& [k, coords] : r.obstruction) {
        json c = json::array();
        for (const auto& v : coords) c.push_back(v.str());
        obs.push_back({{"ring_element", ring.labels()[static_cast<size_t>(k)]}, {"coordinates", c}});
        if (log)
          *log << "  class " << j << " step " << r.level << " obstruction at " << ring.labels()[static_cast<size_t>(k)]
               << ": (" << rational_list(coords) << ")\n";
      }
      steps.push_back({{"level", r.level}, {"lifted", r.lifted}, {"obstruction", obs}});
      if (!r.lifted) {
        ok = false;
        if (log) *log << "  class " << j << " obstructed at step " << r.level << "\n";
        break;
      }
      m = r.lift;
    }
    if (jlog) jlog->push_back({{"class", j}, {"lifted", ok}, {"steps", steps},
                               {"value", ok ? write_rcochain(ctx, m.base, m.value) : ""}});
    if (ok) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------ parsing

DgAlgebra parse_algebra_file(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::optional<DgAlgebra> shorthand;
  DgAlgebra a;
  std::map<std::string, int> index;
  bool explicit_part = false;
  std::string name;
  struct Product {
    int line;
    std::string i, j, k;
    Rational c;
  };
  struct Diff {
    int line;
    std::string i, k;
    Rational c;
  };
  std::vector<Product> products;
  std::vector<Diff> diffs;
  std::vector<std::pair<int, std::vector<std::string>>> unit_lines;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::vector<std::string> t = tokens(raw);
    if (t.empty()) continue;
    const std::string& key = t[0];
    if (key == "name") {
      if (t.size() < 2) throw ParseError(line, "name needs a value");
      name = t[1];
    } else if (key == "field") {
      if (t.size() != 2 || t[1] != "Q") throw ParseError(line, "field must be Q");
    } else if (key == "trunc_poly" || key == "matrix" || key == "path_algebra") {
      if (shorthand || explicit_part) throw ParseError(line, "builder shorthand must be the only algebra definition");
      shorthand = builder_shorthand(t, line);
    } else if (key == "basis") {
      explicit_part = true;
      for (size_t i = 1; i < t.size(); ++i) {
        std::string lab = t[i];
        int deg = 0;
        auto colon = lab.find(':');
        if (colon != std::string::npos) {
          deg = parse_int(lab.substr(colon + 1), line);
          lab = lab.substr(0, colon);
        }
        if (lab.empty()) throw ParseError(line, "empty basis label");
        if (index.count(lab)) throw ParseError(line, "duplicate basis label '" + lab + "'");
        index[lab] = a.dim();
        a.labels.push_back(lab);
        a.degree.push_back(deg);
      }
    } else if (key == "product") {
      explicit_part = true;
      if (t.size() != 5) throw ParseError(line, "product takes i j k c");
      products.push_back({line, t[1], t[2], t[3], parse_rational(t[4], line)});
    } else if (key == "differential") {
      explicit_part = true;
      if (t.size() != 4) throw ParseError(line, "differential takes i k c");
      diffs.push_back({line, t[1], t[2], parse_rational(t[3], line)});
    } else if (key == "unit") {
      explicit_part = true;
      unit_lines.emplace_back(line, std::vector<std::string>(t.begin() + 1, t.end()));
    } else {
      throw ParseError(line, "unknown directive '" + key + "'");
    }
    if (shorthand && explicit_part) throw ParseError(line, "builder shorthand must be the only algebra definition");
  }
  if (shorthand) {
    if (!name.empty()) shorthand->name = name;
    require_valid(*shorthand);
    return *shorthand;
  }
  if (a.dim() == 0) throw ParseError(line, "no basis given");
  auto lookup = [&](const std::string& lab, int ln) {
    auto it = index.find(lab);
    if (it == index.end()) throw ParseError(ln, "unknown basis label '" + lab + "'");
    return it->second;
  };
  const auto n = static_cast<size_t>(a.dim());
  a.name = name.empty() ? "algebra" : name;
  a.mult.assign(n, std::vector<SparseVec>(n));
  a.diff.assign(n, SparseVec());
  for (const auto& p : products) {
    int i = lookup(p.i, p.line), j = lookup(p.j, p.line), k = lookup(p.k, p.line);
    a.mult[static_cast<size_t>(i)][static_cast<size_t>(j)].axpy(p.c, SparseVec::unit(k));
  }
  for (const auto& d : diffs) {
    int i = lookup(d.i, d.line), k = lookup(d.k, d.line);
    a.diff[static_cast<size_t>(i)].axpy(d.c, SparseVec::unit(k));
  }
  for (const auto& [ln, t] : unit_lines) {
    if (t.size() == 1) {
      a.unit.axpy(Rational(1), SparseVec::unit(lookup(t[0], ln)));
      continue;
    }
    if (t.empty() || t.size() % 2 != 0) throw ParseError(ln, "unit takes a label or label/coefficient pairs");
    for (size_t i = 0; i < t.size(); i += 2)
      a.unit.axpy(parse_rational(t[i + 1], ln), SparseVec::unit(lookup(t[i], ln)));
  }
  require_valid(a);
  return a;
}

DgAlgebra load_algebra(const std::string& source) {
  if (is_file(source)) return parse_algebra_file(read_file(source));
  if (source.find(' ') != std::string::npos || source.find('\n') != std::string::npos) return parse_algebra_file(source);
  DgAlgebra a;
  try {
    a = algebra_from_name(source);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string(e.what()) + " (not a file either)");
  }
  require_valid(a);
  return a;
}

ArtinLocalRing load_ring(const std::string& spec) {
  try {
    if (is_file(spec)) return parse_ring_table(read_file(spec));
    return ring_from_name(spec);
  } catch (const InvalidRing& e) {
    throw ParseError(0, std::string("ring: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, std::string("ring: ") + e.what());
  }
}

RCochain parse_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const std::string& text) {
  std::map<std::string, int> letters, ring_index;
  for (int i = 0; i < ctx.dim(); ++i) letters[ctx.algebra().labels[static_cast<size_t>(i)]] = i;
  for (int k = 0; k < ring.dim(); ++k) ring_index[ring.labels()[static_cast<size_t>(k)]] = k;
  RCochain x(ring.dim());
  std::string flat = text;
  for (char& c : flat)
    if (c == '\n') c = ';';
  int term = 0;
  for (const std::string& raw : split(flat, ';')) {
    const std::string t = trim(raw);
    if (t.empty()) continue;
    ++term;
    std::vector<std::string> f = split(t, '|');
    if (f.size() != 4) throw ParseError(term, "term '" + t + "' needs 4 fields: ring | letters | output | coefficient");
    auto rk = ring_index.find(trim(f[0]));
    if (rk == ring_index.end()) throw ParseError(term, "unknown ring element '" + trim(f[0]) + "'");
    Word w;
    const std::string lets = trim(f[1]);
    if (!lets.empty())
      for (const std::string& l : split(lets, ',')) {
        auto it = letters.find(trim(l));
        if (it == letters.end()) throw ParseError(term, "unknown basis label '" + trim(l) + "'");
        w.push_back(it->second);
      }
    auto out = letters.find(trim(f[2]));
    if (out == letters.end()) throw ParseError(term, "unknown basis label '" + trim(f[2]) + "'");
    x.comps[static_cast<size_t>(rk->second)].add(w, out->second, parse_rational(trim(f[3]), term));
  }
  return x;
}

std::string write_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x) {
  std::string s;
  for (int k = 0; k < x.ring_dim(); ++k)
    for (const auto& [w, v] : x.comps[static_cast<size_t>(k)].terms)
      for (const auto& [out, c] : v.e) {
        if (!s.empty()) s += "; ";
        s += ring.labels()[static_cast<size_t>(k)] + " | ";
        for (size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + ctx.algebra().labels[static_cast<size_t>(w[i])];
        s += " | " + ctx.algebra().labels[static_cast<size_t>(out)] + " | " + c.str();
      }
  return s;
}

// ---------------------------------------------------------------------- run

void check_config(RunConfig& c) {
  static const std::map<std::string, std::vector<std::string>> commands = {
      {"hh", {"", "compute"}},          {"hhc", {"", "compute"}},
      {"cyclic", {""}},                 {"ss", {""}},
      {"calc", {"verify", "defect"}},   {"deform", {"lift", "gauge-check"}},
      {"period", {"matrix", "torelli", "vdb", "ptd"}}};
  auto it = commands.find(c.command);
  if (it == commands.end()) throw ParseError(0, "unknown command '" + c.command + "'");
  if (std::find(it->second.begin(), it->second.end(), c.subcommand) == it->second.end())
    throw ParseError(0, "unknown subcommand '" + c.subcommand + "' for " + c.command);
  if (c.algebra.empty()) throw ParseError(0, "--algebra is required");
  if (!c.degree_range) {
    int hi = 4;
    if (c.command == "ss") hi = 1;
    if (c.command == "calc") hi = 2;
    if (c.command == "deform") hi = 2;
    if (c.command == "period" && c.subcommand == "vdb") hi = c.cy_dimension;
    c.degree_range = std::make_pair(0, hi);
  }
  // HN lives in negative degrees too.
  const int min_lo = c.command == "cyclic" ? -64 : 0;
  if (c.degree_range->first < min_lo || c.degree_range->first > c.degree_range->second)
    throw ParseError(0, c.command == "cyclic" ? "degree range must satisfy lo <= hi"
                                              : "degree range must satisfy 0 <= lo <= hi");
  if (!c.bar_bound) c.bar_bound = c.degree_range->second + 2;
  if (!c.arity_bound) c.arity_bound = c.degree_range->second + 1;
  if (*c.bar_bound < 1 || *c.arity_bound < 1) throw ParseError(0, "bounds must be positive");
  if (c.t_window.lo > c.t_window.hi) throw ParseError(0, "t-window must satisfy lo <= hi");
  if (c.threads < 1) throw ParseError(0, "thread count must be positive");
  if (c.command == "deform" && c.subcommand == "gauge-check" && (c.x_text.empty() || c.y_text.empty()))
    throw ParseError(0, "gauge-check needs --x and --y");
  if (c.command == "period" && c.subcommand == "vdb" && c.fundamental_class.empty())
    throw ParseError(0, "vdb needs --pi");
}

namespace {

int run_checked(const RunConfig& c, std::ostream& out) {
  const DgAlgebra a = load_algebra(c.algebra);
  const int lo = c.degree_range->first, hi = c.degree_range->second;
  const int bar = *c.bar_bound, arity = *c.arity_bound;
  const bool js = c.format == OutputFormat::structured;
  json j = {{"command", c.subcommand.empty() ? c.command : c.command + " " + c.subcommand}, {"algebra", a.name}};
  int code = 0;

  if (c.command == "hh") {
    if (hi + 1 > bar) throw BarBoundExceeded("HH_" + std::to_string(hi) + " needs bar weight " + std::to_string(hi + 1));
    GradedDims g = hochschild_homology(*homology_context(a, bar), lo, hi);
    j["degrees"] = {lo, hi};
    j["dims"] = dims_json(g, lo, hi);
    if (!js) out << "# HH_n, n = " << lo << ".." << hi << "\n" << g.str(lo, hi) << "\n";
  } else if (c.command == "hhc") {
    HochschildContext ctx(a, bar);
    GradedDims g = hochschild_cohomology(ctx, lo, hi, arity);
    j["degrees"] = {lo, hi};
    j["dims"] = dims_json(g, lo, hi);
    if (!js) out << "# HH^n, n = " << lo << ".." << hi << "\n" << g.str(lo, hi) << "\n";
  } else if (c.command == "cyclic") {
    GradedDims hn = negative_cyclic_homology(a, lo, hi, c.t_window);
    GradedDims hc = cyclic_homology(a, lo, hi, c.t_window);
    auto hp = periodic_cyclic_homology(a, c.t_window);
    LesReport les = sbi_check(a, lo, hi, c.t_window);
    j["window"] = {c.t_window.lo, c.t_window.hi};
    j["degrees"] = {lo, hi};
    j["HN"] = dims_json(hn, lo, hi);
    j["HC"] = dims_json(hc, lo, hi);
    j["HP"] = {hp.first, hp.second};
    j["sbi_exact"] = les.exact();
    if (!js) {
      out << "# t-window " << c.t_window.str() << "\n";
      out << "HN " << hn.str(lo, hi) << "\n";
      out << "HC " << hc.str(lo, hi) << "\n";
      out << "HP " << hp.first << " " << hp.second << "\n";
      out << les.str() << (les.str().empty() || les.str().back() == '\n' ? "" : "\n");
    }
    if (!les.exact()) code = 1;
  } else if (c.command == "ss") {
    SpectralReport r = hodge_spectral_sequence(a, c.t_window, lo, hi);
    j["window"] = {c.t_window.lo, c.t_window.hi};
    j["degenerate_at_e1"] = r.degenerate_at_e1;
    json e1 = json::array(), d1 = json::array();
    for (const auto& [k, v] : r.e1) e1.push_back({k.first, k.second, v});
    for (const auto& [k, v] : r.d1_rank) d1.push_back({k.first, k.second, v});
    j["e1"] = e1;
    j["d1_rank"] = d1;
    json ab = json::object();
    for (const auto& [n, v] : r.abutment) ab[std::to_string(n)] = v;
    j["abutment"] = ab;
    if (!js) out << r.str() << (r.str().empty() || r.str().back() == '\n' ? "" : "\n");
  } else if (c.command == "calc") {
    std::vector<AxiomReport> reps;
    if (c.subcommand == "verify") {
      reps = verify_lie_dagger(a, LieDaggerBounds{arity, bar});
    } else {
      CalculusBounds b;
      b.max_cochain_degree = arity - 1;
      b.max_chain_degree = hi;
      reps = calculus_defect(a, b);
    }
    json list = json::array();
    for (const auto& r : reps) {
      list.push_back({{"id", r.id}, {"status", status_name(r.status)}, {"witness", r.witness}, {"detail", r.detail}});
      if (!js) {
        out << r.id << ": " << status_name(r.status);
        if (!r.witness.empty()) out << " (" << r.witness << ")";
        out << "\n";
      }
      if (r.status == AxiomStatus::fails) code = 1;
    }
    j["axioms"] = list;
  } else if (c.command == "deform") {
    HochschildContext ctx(a, bar);
    ArtinLocalRing ring = load_ring(c.ring);
    j["ring"] = ring.name();
    if (c.subcommand == "lift") {
      json log = json::array();
      if (!js) out << "# first-order classes of HH^2 lifted to " << ring.name() << "\n";
      std::vector<MCElement> lifts;
      if (!c.x_text.empty()) {
        ArtinLocalRing first = truncate_ring(ring, 2);
        MCElement m{first, parse_rcochain(ctx, first, c.x_text)};
        if (!is_maurer_cartan(ctx, m)) throw NotMaurerCartan("--x is not Maurer-Cartan over " + first.name());
        json steps = json::array();
        bool ok = true;
        while (m.base.dim() < ring.dim()) {
          LiftResult r = lift_order_by_order(ctx, m, ring);
          steps.push_back({{"level", r.level}, {"lifted", r.lifted}});
          if (!r.lifted) {
            ok = false;
            if (!js) out << "  obstructed at step " << r.level << "\n";
            break;
          }
          m = r.lift;
        }
        log.push_back({{"class", 0}, {"lifted", ok}, {"steps", steps}, {"value", ok ? write_rcochain(ctx, m.base, m.value) : ""}});
        if (ok) lifts.push_back(m);
      } else {
        lifts = lifted_classes(ctx, ring, js ? nullptr : &out, &log);
      }
      for (const auto& l : log)
        if (!js && l["lifted"].get<bool>())
          out << "class " << l["class"].get<int>() << ": " << l["value"].get<std::string>() << "\n";
      if (!js && log.empty()) out << "HH^2 = 0: nothing to lift\n";
      j["classes"] = log;
    } else {
      MCElement x{ring, parse_rcochain(ctx, ring, c.x_text)};
      MCElement y{ring, parse_rcochain(ctx, ring, c.y_text)};
      if (!is_maurer_cartan(ctx, x)) throw NotMaurerCartan("--x is not Maurer-Cartan");
      if (!is_maurer_cartan(ctx, y)) throw NotMaurerCartan("--y is not Maurer-Cartan");
      GaugeSearch g = gauge_equivalent(ctx, x, y);
      j["equivalent"] = g.alpha.has_value();
      j["alpha"] = g.alpha ? write_rcochain(ctx, ring, g.alpha->value) : "";
      j["failed_level"] = g.failed_level;
      j["detail"] = g.detail;
      if (!js) {
        if (g.alpha)
          out << "gauge equivalent\nalpha: " << write_rcochain(ctx, ring, g.alpha->value) << "\n";
        else
          out << "not gauge equivalent (step " << g.failed_level << "): " << g.detail << "\n";
      }
    }
  } else if (c.command == "period") {
    if (c.subcommand == "matrix") {
      FirstOrderPeriods p = first_order_period_matrix(a, lo, hi);
      GriffithsReport gr = griffiths_transversality_check(a, lo, hi);
      json cl = json::array();
      for (const auto& pc : p.classes) cl.push_back(class_json(pc));
      json hd = json::object();
      for (const auto& [n, d] : p.hh_dims) hd[std::to_string(n)] = d;
      j["hh_dims"] = hd;
      j["classes"] = cl;
      j["transversal"] = gr.transversal;
      j["formal"] = gr.formal;
      if (!js) out << p.str() << "griffiths: " << gr.str() << "\n";
    } else if (c.subcommand == "torelli") {
      TorelliReport r = torelli_rank(a, lo, hi);
      j["hh2_dim"] = r.hh2_dim;
      j["rank"] = r.rank;
      j["injective"] = r.injective;
      if (!js) out << r.str() << "\n";
    } else if (c.subcommand == "vdb") {
      VdbReport r = vdb_duality_check(a, c.cy_dimension, c.fundamental_class, lo, hi, bar);
      json ds = json::array();
      for (const auto& g : r.degrees)
        ds.push_back({{"s", g.s}, {"cohomology_dim", g.cohomology_dim}, {"homology_dim", g.homology_dim},
                      {"rank", g.rank}, {"iso", g.iso}, {"matrix", matrix_json(g.matrix)}});
      j["d"] = r.d;
      j["degrees"] = ds;
      j["all_iso"] = r.all_iso();
      if (r.all_iso()) j["torelli_injective"] = torelli_rank(a, 0, std::max(2, hi)).injective;
      if (!js) out << r.str() << (r.all_iso() ? "isomorphism in all computed degrees\n" : "not an isomorphism\n");
    } else {
      auto ctx = std::make_shared<const HochschildContext>(a, bar);
      ArtinLocalRing ring = load_ring(c.ring);
      j["ring"] = ring.name();
      j["window"] = {c.t_window.lo, c.t_window.hi};
      std::vector<MCElement> xs;
      if (!c.x_text.empty())
        xs.push_back(MCElement{ring, parse_rcochain(*ctx, ring, c.x_text)});
      else
        xs = lifted_classes(*ctx, ring, nullptr, nullptr);
      std::vector<PTD> ptds;
      json list = json::array();
      int valid = bar;
      for (size_t i = 0; i < xs.size(); ++i) {
        PTD p = period_map_artin(*ctx, xs[i], c.t_window);
        valid = std::min(valid, p.trivialization.a.valid);
        ptds.push_back(std::move(p));
      }
      const int bhi = std::min(hi, valid);
      if (!js && bhi < hi) out << "# negative blocks shown up to HH_" << bhi << " (exact range of the trivialization)\n";
      HomologyData hd = homology_data(ctx, lo, bhi);
      for (size_t i = 0; i < ptds.size(); ++i) {
        const PTD& p = ptds[i];
        json steps = json::array();
        for (const auto& s : p.trivialization.steps)
          steps.push_back({{"level", s.level}, {"ring_element", s.ring_element}, {"bare_seed_closes", s.bare_seed_closes},
                           {"homotopy_seed_closes", s.homotopy_seed_closes}, {"solver_used", s.solver_used}});
        json blocks = json::array();
        std::string text;
        for (const auto& pc : ptd_negative_blocks(hd, p)) {
          blocks.push_back(class_json(pc));
          text += class_text(pc);
        }
        list.push_back({{"x", write_rcochain(*ctx, ring, p.x.value)}, {"verified", p.trivialization.verified},
                        {"reduction_trivial", p.reduction_trivial}, {"steps", steps}, {"negative_blocks", blocks}});
        if (!js)
          out << "x = " << write_rcochain(*ctx, ring, p.x.value) << "\n" << p.trivialization.str() << "\n" << text;
      }
      if (!js && ptds.empty()) out << "HH^2 = 0: only the trivial deformation\n";
      j["ptds"] = list;
      if (!c.y_text.empty()) {
        if (ptds.size() != 1) throw ParseError(0, "--y needs exactly one deformation given by --x");
        MCElement y{ring, parse_rcochain(*ctx, ring, c.y_text)};
        PTD q = period_map_artin(*ctx, y, c.t_window);
        PtdIsoResult r = ptd_isomorphic(*ctx, ptds[0], q);
        j["isomorphic"] = r.isomorphic;
        j["iso_detail"] = r.witness;
        if (!js) out << (r.isomorphic ? "PTDs isomorphic" : "PTDs not isomorphic: " + r.witness) << "\n";
      }
    }
  }
  if (js) out << j.dump(2) << "\n";
  return code;
}

}  // namespace

int run(RunConfig config, std::ostream& out, std::ostream& err) {
  try {
    check_config(config);
    return run_checked(config, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const NotStabilized& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ncp
