#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncp/algebra.hpp"
#include "ncp/coeff.hpp"
#include "ncp/cyclic.hpp"
#include "ncp/deform.hpp"

namespace ncp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string axiom, std::string witness)
      : std::runtime_error("validation failed: " + axiom + " (" + witness + ")"),
        axiom_(std::move(axiom)),
        witness_(std::move(witness)) {}
  const std::string& axiom() const { return axiom_; }
  const std::string& witness() const { return witness_; }

 private:
  std::string axiom_;
  std::string witness_;
};

// Algebra description text; see docs/algebra-format.md.
DgAlgebra parse_algebra_file(const std::string& text);

// A builder name ("trunc_poly:2"), a path to a description file, or
// inline shorthand ("trunc_poly 2").
DgAlgebra load_algebra(const std::string& source);

// "dual", "eps^n", "eps2x2" or a path to a ring table file.
ArtinLocalRing load_ring(const std::string& spec);

// MC or gauge element as a sparse coefficient list: terms separated by ';'
// or newlines, each "<ring label> | <letter,letter,...> | <output label> | <rational>".
// Letters and outputs use the labels of the context basis; an empty letter
// list is an arity-0 term.
RCochain parse_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const std::string& text);
std::string write_rcochain(const HochschildContext& ctx, const ArtinLocalRing& ring, const RCochain& x);

enum class OutputFormat { table, structured };

struct RunConfig {
  std::string command;     // "hh", "hhc", "cyclic", "ss", "calc", "deform", "period"
  std::string subcommand;  // "verify", "lift", "torelli", ...
  std::string algebra;
  std::optional<std::pair<int, int>> degree_range;
  std::optional<int> bar_bound;
  std::optional<int> arity_bound;
  TWindow t_window;
  std::string ring = "dual";
  OutputFormat format = OutputFormat::table;
  // period vdb
  int cy_dimension = 0;
  std::vector<Rational> fundamental_class;
  // deform gauge-check, period ptd
  std::string x_text;
  std::string y_text;
  int threads = 1;
};

// Fills defaults and checks bounds; throws ParseError on a bad config.
void check_config(RunConfig& config);

// Runs one command; returns the exit code (0 success, 1 validation failure
// or NotStabilized, 2 parse error). Errors are reported on err.
int run(RunConfig config, std::ostream& out, std::ostream& err);

}  // namespace ncp
