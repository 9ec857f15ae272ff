// wrcbound: batch runner for the spin-glass sweep, SAT bound tables and the
// verification battery.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "wrc/experiments.hpp"
#include "wrc/textio.hpp"
#include "wrc/verify.hpp"

namespace {

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw wrc::InvalidParameterError("--grid expects RxC, e.g. 7x7");
  const auto to_size = [&](const std::string& part) {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(part, &pos);
    if (pos != part.size() || v == 0) throw wrc::InvalidParameterError("--grid expects positive integers");
    return static_cast<std::size_t>(v);
  };
  return {to_size(text.substr(0, x)), to_size(text.substr(x + 1))};
}

std::vector<double> parse_couplings(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(wrc::parse_double(item));
  if (out.empty()) throw wrc::InvalidParameterError("--couplings expects a comma-separated list");
  return out;
}

int run_verify(std::uint64_t seed) {
  bool all = true;
  for (const auto& r : wrc::verify::run_all(seed)) {
    const char* verdict = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
    std::cout << verdict << "  [" << r.id << "] " << r.name << ": " << r.detail << "\n";
    all = all && (r.skipped || r.passed);
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Rademacher complexity bounds on log partition functions"};
  wrc::ExperimentSpec spec;

  const std::map<std::string, wrc::Mode> modes{{"spinglass-sweep", wrc::Mode::spinglass_sweep},
                                               {"sat-bounds", wrc::Mode::sat_bounds},
                                               {"verify", wrc::Mode::verify}};
  const std::map<std::string, wrc::OutputFormat> formats{{"csv", wrc::OutputFormat::csv},
                                                         {"json", wrc::OutputFormat::json}};
  std::string grid = "7x7";
  std::string couplings;
  std::string out;
  std::string maxsat_cmd;
  std::vector<std::string> cnf;

  std::string mode_name;
  std::string format_name = "csv";
  app.add_option("--mode", mode_name, "spinglass-sweep | sat-bounds | verify")
      ->required()
      ->check(CLI::IsMember({"spinglass-sweep", "sat-bounds", "verify"}));
  app.add_option("--seed", spec.seed, "Master seed")->capture_default_str();
  app.add_option("--k", spec.k, "Perturbations per estimate")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--trials", spec.trials, "Trials per coupling value or instance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--grid", grid, "Spin-glass grid size RxC")->capture_default_str();
  app.add_option("--couplings", couplings, "Comma-separated coupling strengths (default 0,0.5,...,5)");
  app.add_option("--cnf", cnf, "DIMACS CNF files for sat-bounds");
  app.add_option("--out", out, "Output file (default stdout)");
  app.add_option("--format", format_name, "csv | json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--maxsat-cmd", maxsat_cmd, "External MaxSAT command; {wcnf} is replaced by the instance path");
  app.add_option("--alpha", spec.alpha, "Gumbel slack failure probability")->capture_default_str();
  app.add_option("--workers", spec.workers, "Worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    spec.mode = modes.at(mode_name);
    spec.format = formats.at(format_name);
    const auto [rows, cols] = parse_grid(grid);
    spec.grid_rows = rows;
    spec.grid_cols = cols;
    if (!couplings.empty()) spec.couplings = parse_couplings(couplings);
    for (const auto& p : cnf) spec.cnf_paths.emplace_back(p);
    if (!out.empty()) spec.out = out;
    if (!maxsat_cmd.empty()) spec.maxsat_cmd = maxsat_cmd;
    spec.validate();

    if (spec.mode == wrc::Mode::verify) return run_verify(spec.seed);

    const wrc::Table table =
        spec.mode == wrc::Mode::spinglass_sweep ? wrc::run_spinglass_sweep(spec) : wrc::run_sat_bounds(spec);
    std::ofstream file;
    if (spec.out) {
      file.open(*spec.out);
      if (!file) throw wrc::Error("cannot open output file " + spec.out->string());
    }
    std::ostream& sink = spec.out ? static_cast<std::ostream&>(file) : std::cout;
    if (spec.format == wrc::OutputFormat::json) {
      wrc::write_json(sink, table);
    } else {
      wrc::write_csv(sink, table);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "wrcbound: " << e.what() << "\n";
    return 1;
  }
}
