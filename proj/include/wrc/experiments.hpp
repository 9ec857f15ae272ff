#pragma once

// Batch experiment runners behind the wrcbound CLI. Each runner returns a
// Table that can be written as CSV or JSON; output is a pure function of the
// spec (worker count does not affect it).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wrc/core.hpp"
#include "wrc/satcount.hpp"

namespace wrc {

enum class Mode { spinglass_sweep, sat_bounds, verify };
enum class OutputFormat { csv, json };

struct ExperimentSpec {
  Mode mode = Mode::verify;
  std::uint64_t seed = 2019;
  std::size_t k = 5;
  std::size_t trials = 20;
  std::size_t grid_rows = 7;
  std::size_t grid_cols = 7;
  std::vector<double> couplings = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<std::filesystem::path> cnf_paths;
  std::optional<std::filesystem::path> out;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> maxsat_cmd;
  double alpha = 0.05;
  std::size_t workers = 0;  // 0: hardware concurrency

  /// Throws InvalidParameterError when a mode-specific field is missing.
  void validate() const;
};

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, double>> summary;
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

/// Column order of the spin-glass table.
const std::vector<std::string>& spinglass_columns();
/// Column order of the SAT table.
const std::vector<std::string>& sat_columns();

/// Seed of one (group, trial) cell; group is the coupling or instance index.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t group, std::uint64_t trial);

/// One row per (coupling, trial), then a "summary" row whose last cell is
/// the sandwich fraction; also stored as summary key "sandwich_fraction".
Table run_spinglass_sweep(const ExperimentSpec& spec);

/// One row per CNF instance with means and standard deviations over trials.
Table run_sat_bounds(const ExperimentSpec& spec);

/// Runs fn(i) for i in [0, count) on a worker pool.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// CNF oracle backed by an external partial MaxSAT solver. The command
/// template has "{wcnf}" replaced by the instance path (appended when
/// absent); stdout must follow the "o"/"s" line protocol. Only Rademacher
/// perturbations (u_i = (-c_i, +c_i)) are supported.
class ExternalMaxSatModel final : public WeightModel {
 public:
  ExternalMaxSatModel(CnfFormula f, std::string command_template);

  std::size_t dimension() const override { return formula_.num_vars(); }
  double log2_weight(std::span<const Spin> x) const override;
  OracleResult maximize(const RealUnaryPerturbation& u) const override;
  std::optional<double> log2_w_min() const override { return 0.0; }
  std::optional<double> log2_w_max() const override { return 0.0; }

 private:
  CnfFormula formula_;
  std::string command_;
};

/// Runs a shell command and returns its stdout.
std::string run_command(const std::string& command);

}  // namespace wrc
