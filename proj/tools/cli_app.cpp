#include "cli_app.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ncp/cli.hpp"

namespace ncp {

namespace {

std::pair<int, int> parse_range(const std::string& s, const std::string& what) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw ParseError(0, what + " must look like lo..hi");
  try {
    size_t p1 = 0, p2 = 0;
    std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    int lo = std::stoi(a, &p1), hi = std::stoi(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::exception&) {
    throw ParseError(0, what + " must look like lo..hi");
  }
}

std::string text_or_file(const std::string& s) {
  if (s.size() > 1 && s[0] == '@') {
    std::ifstream in(s.substr(1));
    if (!in) throw ParseError(0, "cannot read " + s.substr(1));
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  return s;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hochschild, cyclic, deformation and period computations over Q", "ncperiod"};
  app.require_subcommand(1);

  std::string algebra, degree_range, window = "-6..6", ring = "dual", format = "table", pi, x, y;
  int bar = 0, arity = 0, dim = 0;
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--algebra", algebra, "builder name (trunc_poly:2, matrix:2, path:a2, Q), file, or shorthand")
        ->required();
    sub->add_option("--degree-range", degree_range, "lo..hi");
    sub->add_option("--bar", bar, "bar weight bound");
    sub->add_option("--arity", arity, "cochain arity bound");
    sub->add_option("--t-window", window, "lo..hi range of t-exponents");
    sub->add_option("--ring", ring, "base ring: dual, eps^n, eps2x2 or a table file");
    sub->add_option("--format", format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
  };
  struct Leaf {
    CLI::App* app;
    std::string command, subcommand;
  };
  std::vector<Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& command,
                  const std::string& subcommand) {
    CLI::App* s = parent->add_subcommand(name, desc);
    common(s);
    leaves.push_back({s, command, subcommand});
    return s;
  };

  CLI::App* hh = leaf(&app, "hh", "Hochschild homology dimensions", "hh", "");
  hh->add_subcommand("compute", "same as hh")->fallthrough();
  hh->require_subcommand(0, 1);
  CLI::App* hhc = leaf(&app, "hhc", "Hochschild cohomology dimensions", "hhc", "");
  hhc->add_subcommand("compute", "same as hhc")->fallthrough();
  hhc->require_subcommand(0, 1);
  leaf(&app, "cyclic", "negative, periodic and cyclic homology with the SBI check", "cyclic", "");
  leaf(&app, "ss", "t-filtration spectral sequence", "ss", "");
  CLI::App* calc = app.add_subcommand("calc", "calculus identities")->require_subcommand(1);
  leaf(calc, "verify", "Lie action identities at chain level", "calc", "verify");
  leaf(calc, "defect", "calculus relations: exact, on homology, or failing", "calc", "defect");
  CLI::App* deform = app.add_subcommand("deform", "Maurer-Cartan deformations")->require_subcommand(1);
  CLI::App* lift = leaf(deform, "lift", "lift first-order deformations over the ring", "deform", "lift");
  lift->add_option("--x", x, "first-order MC element (terms or @file)");
  CLI::App* gauge = leaf(deform, "gauge-check", "decide gauge equivalence of two MC elements", "deform", "gauge-check");
  gauge->add_option("--x", x, "MC element (terms or @file)")->required();
  gauge->add_option("--y", y, "MC element (terms or @file)")->required();
  CLI::App* period = app.add_subcommand("period", "period mapping")->require_subcommand(1);
  leaf(period, "matrix", "first-order period blocks", "period", "matrix");
  leaf(period, "torelli", "rank of the first-order period map", "period", "torelli");
  CLI::App* vdb = leaf(period, "vdb", "duality map P -> I_P(pi)", "period", "vdb");
  vdb->add_option("--dim", dim, "Calabi-Yau dimension d")->required();
  vdb->add_option("--pi", pi, "coordinates of the class in HH_d, comma separated")->required();
  CLI::App* ptd = leaf(period, "ptd", "periodically trivialized deformations", "period", "ptd");
  ptd->add_option("--x", x, "MC element (terms or @file); default: lifted HH^2 basis");
  ptd->add_option("--y", y, "second MC element to compare with --x");

  std::vector<std::string> argv_store{"ncperiod"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }

  try {
    // The deepest parsed subcommand decides the command.
    const Leaf* chosen = nullptr;
    for (const auto& l : leaves)
      if (l.app->parsed()) chosen = &l;
    if (!chosen) throw ParseError(0, "no command given");
    cfg.command = chosen->command;
    cfg.subcommand = chosen->subcommand;
    cfg.algebra = algebra;
    if (!degree_range.empty()) cfg.degree_range = parse_range(degree_range, "--degree-range");
    if (bar > 0) cfg.bar_bound = bar;
    if (arity > 0) cfg.arity_bound = arity;
    auto w = parse_range(window, "--t-window");
    cfg.t_window = TWindow{w.first, w.second};
    cfg.ring = ring;
    cfg.format = format == "structured" ? OutputFormat::structured : OutputFormat::table;
    cfg.cy_dimension = dim;
    if (!pi.empty())
      for (const auto& part : CLI::detail::split(pi, ',')) {
        try {
          cfg.fundamental_class.push_back(Rational::parse(part));
        } catch (const std::exception&) {
          throw ParseError(0, "--pi entry '" + part + "' is not rational");
        }
      }
    cfg.x_text = text_or_file(x);
    cfg.y_text = text_or_file(y);
    if (const char* t = std::getenv("NCPERIOD_THREADS")) {
      try {
        cfg.threads = std::stoi(t);
      } catch (const std::exception&) {
        throw ParseError(0, "NCPERIOD_THREADS must be a positive integer");
      }
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
  return run(cfg, out, err);
}

}  // namespace ncp
