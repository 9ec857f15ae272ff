#include "wrc/experiments.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wrc/bounds.hpp"
#include "wrc/exact.hpp"
#include "wrc/gumbel.hpp"
#include "wrc/rng.hpp"
#include "wrc/spinglass.hpp"
#include "wrc/textio.hpp"

#if defined(_WIN32)
#define WRC_POPEN _popen
#define WRC_PCLOSE _pclose
#else
#include <unistd.h>
#define WRC_POPEN popen
#define WRC_PCLOSE pclose
#endif

namespace wrc {
namespace {

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t group, std::uint64_t trial) {
  return splitmix64(splitmix64(seed ^ splitmix64(group)) + trial);
}

void ExperimentSpec::validate() const {
  if (k < 1) throw InvalidParameterError("--k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameterError("alpha must lie in (0, 1)");
  switch (mode) {
    case Mode::spinglass_sweep:
      if (trials < 1) throw InvalidParameterError("--trials must be >= 1");
      if (grid_rows < 1 || grid_cols < 1) throw InvalidParameterError("--grid must be at least 1x1");
      if (couplings.empty()) throw InvalidParameterError("--couplings must list at least one value");
      for (double c : couplings) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidParameterError("coupling values must be >= 0");
      }
      break;
    case Mode::sat_bounds:
      if (trials < 1) throw InvalidParameterError("--trials must be >= 1");
      if (cnf_paths.empty()) throw InvalidParameterError("sat-bounds mode requires at least one --cnf path");
      break;
    case Mode::verify:
      break;
  }
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.summary) summary[key] = json_cell(Cell{value});
  doc["summary"] = std::move(summary);
  out << doc.dump(2) << '\n';
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Spin glass sweep

const std::vector<std::string>& spinglass_columns() {
  static const std::vector<std::string> columns = {
      "coupling", "trial",    "n",        "k",           "delta_bar_ln", "psi_lb_ln", "psi_ub_ln",
      "theta_lb", "theta_ub", "ln_z_exact", "lambda_used", "beta_opt",   "resamples_used", "sandwiched"};
  return columns;
}

Table run_spinglass_sweep(const ExperimentSpec& spec) {
  spec.validate();
  struct Row {
    BoundReport rad;
    GumbelReport gumbel;
    double ln_z;
  };
  const std::size_t total = spec.couplings.size() * spec.trials;
  std::vector<Row> results(total);

  parallel_for(total, spec.workers, [&](std::size_t idx) {
    const std::size_t ci = idx / spec.trials;
    const std::size_t trial = idx % spec.trials;
    const std::uint64_t seed = trial_seed(spec.seed, ci, trial);
    const GridIsingModel model =
        GridIsingModel::generate(spec.grid_rows, spec.grid_cols, spec.couplings[ci], seed);
    Row& r = results[idx];
    r.rad = bound(model, BoundConfig{spec.k, seed, BoundConfig::kDefaultResampleLimit});
    r.gumbel = gumbel_bound(model, GumbelConfig{spec.k, spec.alpha, seed});
    r.ln_z = grid_exact_ln_Z(model);
  });

  Table table;
  table.columns = spinglass_columns();
  std::size_t sandwiched = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Row& r = results[idx];
    const auto ln = r.rad.ln_view();
    const bool inside = ln.psi_lb <= r.ln_z && r.ln_z <= ln.psi_ub;
    sandwiched += inside ? 1 : 0;
    table.rows.push_back({Cell{spec.couplings[idx / spec.trials]},
                          Cell{static_cast<std::int64_t>(idx % spec.trials)},
                          Cell{static_cast<std::int64_t>(r.rad.n)},
                          Cell{static_cast<std::int64_t>(r.rad.k)},
                          Cell{ln.delta_bar},
                          Cell{ln.psi_lb},
                          Cell{ln.psi_ub},
                          Cell{r.gumbel.theta_lb},
                          Cell{r.gumbel.theta_ub},
                          Cell{r.ln_z},
                          opt_cell(r.rad.lambda_used),
                          opt_cell(r.rad.beta_opt),
                          Cell{static_cast<std::int64_t>(r.rad.resamples_used)},
                          Cell{static_cast<std::int64_t>(inside ? 1 : 0)}});
  }
  const double fraction = static_cast<double>(sandwiched) / static_cast<double>(total);
  std::vector<Cell> summary_row(table.columns.size());
  summary_row.front() = Cell{std::string("summary")};
  summary_row.back() = Cell{fraction};
  table.rows.push_back(std::move(summary_row));
  table.summary.emplace_back("sandwich_fraction", fraction);
  return table;
}

// ---------------------------------------------------------------------------
// SAT bounds

const std::vector<std::string>& sat_columns() {
  static const std::vector<std::string> columns = {
      "instance",          "vars",           "clauses",        "status",        "trials",
      "ln_z",              "delta_bar_ln",   "delta_bar_ln_std", "psi_ub_ln",   "psi_ub_ln_std",
      "theta_ub",          "theta_ub_std",   "psi_lb_ln",      "psi_lb_ln_std", "theta_lb",
      "theta_lb_std",      "sandwich_rate"};
  return columns;
}

Table run_sat_bounds(const ExperimentSpec& spec) {
  spec.validate();
  Table table;
  table.columns = sat_columns();

  for (std::size_t inst = 0; inst < spec.cnf_paths.size(); ++inst) {
    const auto& path = spec.cnf_paths[inst];
    const CnfFormula formula = read_dimacs_file(path);
    const std::size_t n = formula.num_vars();
    const auto clause_count = static_cast<std::int64_t>(formula.clauses().size());
    const std::string name = path.stem().string();

    std::optional<double> ln_z;
    bool unsat = false;
    if (n <= 24) {
      const std::uint64_t count = brute_force_model_count(formula);
      unsat = count == 0;
      if (!unsat) ln_z = std::log(static_cast<double>(count));
    }

    std::unique_ptr<WeightModel> rad_model;
    if (spec.maxsat_cmd) {
      rad_model = std::make_unique<ExternalMaxSatModel>(formula, *spec.maxsat_cmd);
    } else {
      rad_model = std::make_unique<CnfWeightModel>(formula);
    }
    // The Gumbel baseline needs real-valued soft weights, which only the
    // internal solver handles.
    const bool gumbel_available = !spec.maxsat_cmd || n <= 24;
    const CnfWeightModel internal(formula);

    std::vector<BoundReport> rad(spec.trials);
    std::vector<GumbelReport> gum(spec.trials);
    if (!unsat) {
      try {
        parallel_for(spec.trials, spec.workers, [&](std::size_t t) {
          const std::uint64_t seed = trial_seed(spec.seed, inst, t);
          rad[t] = bound(*rad_model, BoundConfig{spec.k, seed, BoundConfig::kDefaultResampleLimit});
          if (gumbel_available) gum[t] = gumbel_bound(internal, GumbelConfig{spec.k, spec.alpha, seed});
        });
      } catch (const ZeroWeightError&) {
        unsat = true;
      }
    }

    std::vector<Cell> row = {Cell{name}, Cell{static_cast<std::int64_t>(n)}, Cell{clause_count},
                             Cell{std::string(unsat ? "unsat" : "ok")}, Cell{static_cast<std::int64_t>(spec.trials)},
                             opt_cell(ln_z)};
    if (unsat) {
      row.resize(table.columns.size());
      table.rows.push_back(std::move(row));
      continue;
    }

    std::vector<double> d, ub, lb, tub, tlb;
    std::size_t inside = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const auto ln = rad[t].ln_view();
      d.push_back(ln.delta_bar);
      ub.push_back(ln.psi_ub);
      lb.push_back(ln.psi_lb);
      tub.push_back(gum[t].theta_ub);
      tlb.push_back(gum[t].theta_lb);
      if (ln_z && ln.psi_lb <= *ln_z && *ln_z <= ln.psi_ub) ++inside;
    }
    auto push_moments = [&](const std::vector<double>& xs, bool available) {
      if (!available) {
        row.emplace_back();
        row.emplace_back();
        return;
      }
      const Moments m = moments(xs);
      row.emplace_back(m.mean);
      row.emplace_back(m.stddev);
    };
    push_moments(d, true);
    push_moments(ub, true);
    push_moments(tub, gumbel_available);
    push_moments(lb, true);
    push_moments(tlb, gumbel_available);
    row.push_back(ln_z ? Cell{static_cast<double>(inside) / static_cast<double>(spec.trials)} : Cell{});
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// External solver

std::string run_command(const std::string& command) {
  FILE* pipe = WRC_POPEN(command.c_str(), "r");
  if (!pipe) throw Error("failed to run: " + command);
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  WRC_PCLOSE(pipe);
  return output;
}

ExternalMaxSatModel::ExternalMaxSatModel(CnfFormula f, std::string command_template)
    : formula_(std::move(f)), command_(std::move(command_template)) {
  if (command_.empty()) throw InvalidParameterError("external MaxSAT command is empty");
}

double ExternalMaxSatModel::log2_weight(std::span<const Spin> x) const {
  return formula_.satisfied_by(x) ? 0.0 : -std::numeric_limits<double>::infinity();
}

OracleResult ExternalMaxSatModel::maximize(const RealUnaryPerturbation& u) const {
  const std::size_t n = formula_.num_vars();
  if (u.size() != n) throw InvalidDimensionError("external oracle: perturbation dimension mismatch");
  std::vector<Spin> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double plus = u[i].at_plus;
    if (!((plus == 1.0 || plus == -1.0) && u[i].at_minus == -plus)) {
      throw InvalidParameterError("external oracle supports Rademacher perturbations only");
    }
    c[i] = plus > 0 ? Spin{1} : Spin{-1};
  }
  const PerturbationVector cv(std::move(c));

  static std::atomic<std::uint64_t> counter{0};
#if defined(_WIN32)
  const auto pid = 0;
#else
  const auto pid = static_cast<long>(::getpid());
#endif
  const auto path = std::filesystem::temp_directory_path() /
                    ("wrcbound-" + std::to_string(pid) + "-" + std::to_string(counter++) + ".wcnf");
  export_wcnf(formula_, cv, path);

  std::string cmd = command_;
  const auto slot = cmd.find("{wcnf}");
  if (slot == std::string::npos) {
    cmd += " " + path.string();
  } else {
    cmd.replace(slot, 6, path.string());
  }
  const std::string output = run_command(cmd);
  std::error_code ignored;
  std::filesystem::remove(path, ignored);

  const MaxSatOutcome outcome = parse_maxsat_result(output);
  if (outcome.unsatisfiable) throw ZeroWeightError("external MaxSAT solver reports the formula unsatisfiable");
  const double value = static_cast<double>(static_cast<std::int64_t>(n) - 2 * *outcome.optimum_cost);
  State witness = parse_maxsat_model(output, n).value_or(State{});
  return {value, std::move(witness)};
}

}  // namespace wrc
