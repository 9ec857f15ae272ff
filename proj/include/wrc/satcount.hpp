#pragma once

// Indicator weights from CNF formulas. For w(x) = [x satisfies F],
//
//   delta(c, w) = n - 2 * min_{x |= F} Hamming(c, x),
//
// a partial MaxSAT problem: hard clauses F, one unit soft clause x_i = c_i of
// weight 1 per variable. Variable v (1-based) true <=> x_{v-1} = +1.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrc/core.hpp"
#include "wrc/rng.hpp"

namespace wrc {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using Clause = std::vector<int>;

class CnfFormula {
 public:
  /// Drops tautological clauses and duplicate literals. Throws on empty
  /// clauses or out-of-range literals.
  CnfFormula(std::size_t num_vars, std::vector<Clause> clauses);

  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  bool satisfied_by(std::span<const Spin> x) const;

 private:
  std::size_t num_vars_;
  std::vector<Clause> clauses_;
};

CnfFormula parse_dimacs(std::string_view text);
CnfFormula read_dimacs_file(const std::filesystem::path& path);

/// Minimises sum_i cost_i(x_i) over satisfying assignments, with
/// non-negative costs. Returns the lexicographically smallest optimum, or
/// nullopt if F is unsatisfiable.
struct SoftAssignment {
  double cost;
  State assignment;
};
std::optional<SoftAssignment> solve_min_cost(const CnfFormula& f, const RealUnaryPerturbation& costs);

struct SatDelta {
  int value;
  State witness;
};

/// nullopt when f is unsatisfiable (delta = -inf, Z = 0).
std::optional<SatDelta> delta_sat(const CnfFormula& f, const PerturbationVector& c);

/// Classic "p wcnf V C top" partial MaxSAT with top = n + 1.
void write_wcnf(std::ostream& out, const CnfFormula& f, const PerturbationVector& c);
void export_wcnf(const CnfFormula& f, const PerturbationVector& c, const std::filesystem::path& path);

class UnknownResultError : public Error {
 public:
  using Error::Error;
};

struct MaxSatOutcome {
  bool unsatisfiable = false;
  std::optional<std::int64_t> optimum_cost;
};

/// Reads the "o <cost>" / "s <status>" solver protocol.
MaxSatOutcome parse_maxsat_result(std::string_view text);

/// Parsed "p wcnf V C top" file; clauses with weight >= top are hard.
struct WcnfInstance {
  std::size_t num_vars = 0;
  std::int64_t top = 0;
  std::vector<Clause> hard;
  std::vector<std::pair<std::int64_t, Clause>> soft;
};

WcnfInstance parse_wcnf(std::string_view text);

/// Solves a WCNF whose soft clauses are all units with the internal
/// branch and bound, answering in the "o"/"s"/"v" solver protocol. Stands in
/// for an external MaxSAT solver.
std::string solve_wcnf_internal(const WcnfInstance& instance);

/// Assignment from "v" lines (either "v 1 -2 3 ..." or "v 0110..."), if any.
std::optional<State> parse_maxsat_model(std::string_view text, std::size_t num_vars);

std::uint64_t brute_force_model_count(const CnfFormula& f);

/// Uniform random k-CNF: distinct variables per clause, random signs.
CnfFormula random_k_cnf(std::size_t num_vars, std::size_t num_clauses, std::size_t k, RandomStream& rng);

/// The indicator weight of a CNF formula, with log2 w_min = log2 w_max = 0.
class CnfWeightModel final : public WeightModel {
 public:
  explicit CnfWeightModel(CnfFormula f) : formula_(std::move(f)) {}

  const CnfFormula& formula() const { return formula_; }
  std::size_t dimension() const override { return formula_.num_vars(); }
  double log2_weight(std::span<const Spin> x) const override;
  /// Throws ZeroWeightError when the formula is unsatisfiable.
  OracleResult maximize(const RealUnaryPerturbation& u) const override;
  std::optional<double> log2_w_min() const override { return 0.0; }
  std::optional<double> log2_w_max() const override { return 0.0; }

 private:
  CnfFormula formula_;
};

}  // namespace wrc
