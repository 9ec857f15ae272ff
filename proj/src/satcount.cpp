#include "wrc/satcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace wrc {

// ---------------------------------------------------------------------------
// Formula

CnfFormula::CnfFormula(std::size_t num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
  if (num_vars == 0) throw InvalidDimensionError("cnf: num_vars must be >= 1");
  clauses_.reserve(clauses.size());
  for (Clause& clause : clauses) {
    if (clause.empty()) throw InvalidParameterError("cnf: empty clause");
    for (int lit : clause) {
      const auto var = static_cast<std::size_t>(std::abs(lit));
      if (lit == 0 || var > num_vars) {
        throw InvalidParameterError("cnf: literal " + std::to_string(lit) + " out of range");
      }
    }
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    const bool tautology = std::any_of(clause.begin(), clause.end(), [&](int lit) {
      return lit > 0 && std::binary_search(clause.begin(), clause.end(), -lit);
    });
    if (!tautology) clauses_.push_back(std::move(clause));
  }
}

bool CnfFormula::satisfied_by(std::span<const Spin> x) const {
  if (x.size() != num_vars_) throw InvalidDimensionError("cnf: assignment dimension mismatch");
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](int lit) {
      const Spin s = x[static_cast<std::size_t>(std::abs(lit)) - 1];
      return lit > 0 ? s > 0 : s < 0;
    });
  });
}

// ---------------------------------------------------------------------------
// DIMACS

CnfFormula parse_dimacs(std::string_view text) {
  std::optional<std::size_t> declared_vars;
  std::size_t declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t line_no = 0;
  std::size_t clause_start_line = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    if (line[first] == 'c') continue;
    if (line[first] == '%') break;

    std::istringstream tokens{std::string(line)};
    if (line[first] == 'p') {
      if (declared_vars) throw ParseError(line_no, "duplicate problem line");
      std::string p, fmt;
      long long v = -1;
      long long c = -1;
      std::string extra;
      if (!(tokens >> p >> fmt >> v >> c) || p != "p" || fmt != "cnf" || v < 1 || c < 0 || (tokens >> extra)) {
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      declared_vars = static_cast<std::size_t>(v);
      declared_clauses = static_cast<std::size_t>(c);
      continue;
    }
    if (!declared_vars) throw ParseError(line_no, "clause data before 'p cnf' header");

    std::string tok;
    while (tokens >> tok) {
      char* tail = nullptr;
      const long long lit = std::strtoll(tok.c_str(), &tail, 10);
      if (tail == tok.c_str() || *tail != '\0') throw ParseError(line_no, "invalid literal '" + tok + "'");
      if (lit == 0) {
        if (current.empty()) throw ParseError(line_no, "empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(std::llabs(lit)) > *declared_vars) {
        throw ParseError(line_no, "literal " + tok + " exceeds declared variable count");
      }
      if (current.empty()) clause_start_line = line_no;
      current.push_back(static_cast<int>(lit));
    }
    if (end == text.size()) break;
  }

  if (!declared_vars) throw ParseError(line_no, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(clause_start_line, "clause not terminated by 0");
  if (clauses.size() != declared_clauses) {
    throw ParseError(line_no, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(clauses.size()));
  }
  return CnfFormula(*declared_vars, std::move(clauses));
}

CnfFormula read_dimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str());
}

// ---------------------------------------------------------------------------
// Branch and bound over satisfying assignments

namespace {

class MinCostSearch {
 public:
  enum class Mode { heuristic, lexicographic };

  MinCostSearch(const CnfFormula& f, const RealUnaryPerturbation& u)
      : f_(f), n_(f.num_vars()), value_(n_, 0), cost_minus_(n_), cost_plus_(n_), occurrences_(n_) {
    for (std::size_t v = 0; v < n_; ++v) {
      const double top = std::max(u[v].at_minus, u[v].at_plus);
      cost_minus_[v] = top - u[v].at_minus;
      cost_plus_[v] = top - u[v].at_plus;
    }
    for (std::size_t ci = 0; ci < f.clauses().size(); ++ci) {
      for (int lit : f.clauses()[ci]) occurrences_[static_cast<std::size_t>(std::abs(lit)) - 1].push_back(ci);
    }
  }

  // Finds the optimum cost with the occurrence heuristic.
  std::optional<double> optimum() {
    mode_ = Mode::heuristic;
    found_ = false;
    best_cost_ = std::numeric_limits<double>::infinity();
    search();
    return found_ ? std::optional<double>(best_cost_) : std::nullopt;
  }

  // Lexicographically first assignment with cost <= target (plus tolerance).
  SoftAssignment first_within(double target) {
    mode_ = Mode::lexicographic;
    found_ = false;
    limit_ = target + 1e-9 * std::max(1.0, std::abs(target));
    search();
    return {best_cost_, best_};
  }

 private:
  double cost_of(std::size_t v, Spin s) const { return s > 0 ? cost_plus_[v] : cost_minus_[v]; }

  bool lit_true(int lit) const {
    const Spin s = value_[static_cast<std::size_t>(std::abs(lit)) - 1];
    return lit > 0 ? s > 0 : s < 0;
  }
  bool lit_free(int lit) const { return value_[static_cast<std::size_t>(std::abs(lit)) - 1] == 0; }

  void assign(std::size_t v, Spin s) {
    value_[v] = s;
    current_ += cost_of(v, s);
    trail_.push_back(v);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const std::size_t v = trail_.back();
      trail_.pop_back();
      current_ -= cost_of(v, value_[v]);
      value_[v] = 0;
    }
  }

  bool pruned() const {
    return mode_ == Mode::heuristic ? current_ >= best_cost_ : current_ > limit_;
  }

  // Unit propagation to fixpoint; false on conflict.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Clause& clause : f_.clauses()) {
        int unit = 0;
        int free_count = 0;
        bool sat = false;
        for (int lit : clause) {
          if (lit_true(lit)) {
            sat = true;
            break;
          }
          if (lit_free(lit)) {
            ++free_count;
            unit = lit;
          }
        }
        if (sat) continue;
        if (free_count == 0) return false;
        if (free_count == 1) {
          assign(static_cast<std::size_t>(std::abs(unit)) - 1, unit > 0 ? Spin{1} : Spin{-1});
          changed = true;
        }
      }
    }
    return true;
  }

  bool clause_open(std::size_t ci) const {
    return std::none_of(f_.clauses()[ci].begin(), f_.clauses()[ci].end(), [&](int lit) { return lit_true(lit); });
  }

  std::optional<std::size_t> choose_variable() const {
    if (mode_ == Mode::lexicographic) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (value_[v] == 0) return v;
      }
      return std::nullopt;
    }
    std::optional<std::size_t> best;
    std::size_t best_count = 0;
    for (std::size_t v = 0; v < n_; ++v) {
      if (value_[v] != 0) continue;
      std::size_t count = 0;
      for (std::size_t ci : occurrences_[v]) count += clause_open(ci) ? 1 : 0;
      if (count > best_count) {
        best_count = count;
        best = v;
      }
    }
    return best;
  }

  void record_completion() {
    State x(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      if (value_[v] != 0) {
        x[v] = value_[v];
      } else {
        x[v] = cost_plus_[v] < cost_minus_[v] ? Spin{1} : Spin{-1};
      }
    }
    found_ = true;
    best_cost_ = current_;
    best_ = std::move(x);
  }

  void search() {
    const std::size_t mark = trail_.size();
    if (!propagate() || pruned()) {
      undo_to(mark);
      return;
    }
    // With no open clause left, every free variable takes its zero-cost value
    // (-1 on ties), which is both optimal and lexicographically first here.
    const bool all_closed = [&] {
      for (std::size_t ci = 0; ci < f_.clauses().size(); ++ci) {
        if (clause_open(ci)) return false;
      }
      return true;
    }();
    if (all_closed) {
      record_completion();
      undo_to(mark);
      return;
    }
    const auto var = choose_variable();
    const std::size_t v = *var;  // an open clause always has a free variable

    Spin first = Spin{-1};
    if (mode_ == Mode::heuristic && cost_plus_[v] < cost_minus_[v]) first = Spin{1};
    for (Spin s : {first, static_cast<Spin>(-first)}) {
      const std::size_t inner = trail_.size();
      assign(v, s);
      search();
      undo_to(inner);
      if (mode_ == Mode::lexicographic && found_) break;
    }
    undo_to(mark);
  }

  const CnfFormula& f_;
  std::size_t n_;
  std::vector<Spin> value_;
  std::vector<double> cost_minus_;
  std::vector<double> cost_plus_;
  std::vector<std::vector<std::size_t>> occurrences_;
  std::vector<std::size_t> trail_;
  double current_ = 0.0;

  Mode mode_ = Mode::heuristic;
  bool found_ = false;
  double best_cost_ = std::numeric_limits<double>::infinity();
  double limit_ = 0.0;
  State best_;
};

}  // namespace

std::optional<SoftAssignment> solve_min_cost(const CnfFormula& f, const RealUnaryPerturbation& u) {
  if (u.size() != f.num_vars()) throw InvalidDimensionError("solve_min_cost: perturbation dimension mismatch");
  MinCostSearch search(f, u);
  const auto best = search.optimum();
  if (!best) return std::nullopt;
  return search.first_within(*best);
}

std::optional<SatDelta> delta_sat(const CnfFormula& f, const PerturbationVector& c) {
  if (c.size() != f.num_vars()) throw InvalidDimensionError("delta_sat: dimension mismatch");
  auto best = solve_min_cost(f, to_unary(c));
  if (!best) return std::nullopt;
  return SatDelta{c.dot(best->assignment), std::move(best->assignment)};
}

// ---------------------------------------------------------------------------
// WCNF export and solver output

void write_wcnf(std::ostream& out, const CnfFormula& f, const PerturbationVector& c) {
  if (c.size() != f.num_vars()) throw InvalidDimensionError("write_wcnf: dimension mismatch");
  const std::size_t n = f.num_vars();
  const std::size_t top = n + 1;
  out << "p wcnf " << n << ' ' << f.clauses().size() + n << ' ' << top << '\n';
  for (const Clause& clause : f.clauses()) {
    out << top;
    for (int lit : clause) out << ' ' << lit;
    out << " 0\n";
  }
  for (std::size_t v = 0; v < n; ++v) {
    const long long var = static_cast<long long>(v) + 1;
    out << "1 " << (c[v] > 0 ? var : -var) << " 0\n";
  }
}

void export_wcnf(const CnfFormula& f, const PerturbationVector& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_wcnf(out, f, c);
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

MaxSatOutcome parse_maxsat_result(std::string_view text) {
  std::optional<std::int64_t> last_cost;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 2 && line[0] == 'o' && line[1] == ' ') {
      char* tail = nullptr;
      const long long cost = std::strtoll(line.c_str() + 2, &tail, 10);
      if (tail == line.c_str() + 2) throw UnknownResultError("malformed cost line: " + line);
      last_cost = cost;
    } else if (line.size() >= 2 && line[0] == 's' && line[1] == ' ') {
      const std::string status = line.substr(2);
      if (status == "OPTIMUM FOUND") {
        if (!last_cost) throw UnknownResultError("optimum reported without an 'o' cost line");
        return {false, last_cost};
      }
      if (status == "UNSATISFIABLE") return {true, std::nullopt};
      throw UnknownResultError("solver status: " + status);
    }
  }
  throw UnknownResultError("solver output has no status line");
}

WcnfInstance parse_wcnf(std::string_view text) {
  WcnfInstance inst;
  bool have_header = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == 'c') continue;
    std::istringstream tokens(line);
    if (line[first] == 'p') {
      std::string p, fmt;
      long long v = -1, c = -1, top = -1;
      if (!(tokens >> p >> fmt >> v >> c >> top) || fmt != "wcnf" || v < 1 || c < 0 || top < 1) {
        throw ParseError(line_no, "malformed header, expected 'p wcnf <vars> <clauses> <top>'");
      }
      inst.num_vars = static_cast<std::size_t>(v);
      inst.top = top;
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause data before 'p wcnf' header");
    long long weight = 0;
    if (!(tokens >> weight) || weight < 1) throw ParseError(line_no, "missing clause weight");
    Clause clause;
    long long lit = 0;
    bool terminated = false;
    while (tokens >> lit) {
      if (lit == 0) {
        terminated = true;
        break;
      }
      if (static_cast<std::size_t>(std::llabs(lit)) > inst.num_vars) throw ParseError(line_no, "literal out of range");
      clause.push_back(static_cast<int>(lit));
    }
    if (!terminated || clause.empty()) throw ParseError(line_no, "clause must be non-empty and 0-terminated");
    if (weight >= inst.top) {
      inst.hard.push_back(std::move(clause));
    } else {
      inst.soft.emplace_back(weight, std::move(clause));
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p wcnf' header");
  return inst;
}

std::string solve_wcnf_internal(const WcnfInstance& inst) {
  std::vector<double> cost_minus(inst.num_vars, 0.0);
  std::vector<double> cost_plus(inst.num_vars, 0.0);
  for (const auto& [weight, clause] : inst.soft) {
    if (clause.size() != 1) throw InvalidParameterError("internal MaxSAT: soft clauses must be units");
    const auto v = static_cast<std::size_t>(std::abs(clause[0])) - 1;
    // A violated unit (x_v) costs its weight when x_v = -1, and vice versa.
    (clause[0] > 0 ? cost_minus[v] : cost_plus[v]) += static_cast<double>(weight);
  }
  std::vector<RealUnaryPerturbation::Pair> u(inst.num_vars);
  for (std::size_t v = 0; v < inst.num_vars; ++v) u[v] = {-cost_minus[v], -cost_plus[v]};

  std::vector<Clause> hard = inst.hard;
  const CnfFormula f(inst.num_vars, std::move(hard));
  const auto best = solve_min_cost(f, RealUnaryPerturbation(std::move(u)));
  if (!best) return "s UNSATISFIABLE\n";

  std::int64_t cost = 0;
  for (const auto& [weight, clause] : inst.soft) {
    const Spin s = best->assignment[static_cast<std::size_t>(std::abs(clause[0])) - 1];
    const bool holds = clause[0] > 0 ? s > 0 : s < 0;
    if (!holds) cost += weight;
  }
  std::ostringstream out;
  out << "o " << cost << "\ns OPTIMUM FOUND\nv";
  for (std::size_t v = 0; v < inst.num_vars; ++v) {
    const long long var = static_cast<long long>(v) + 1;
    out << ' ' << (best->assignment[v] > 0 ? var : -var);
  }
  out << '\n';
  return out.str();
}

std::optional<State> parse_maxsat_model(std::string_view text, std::size_t num_vars) {
  State x(num_vars, Spin{-1});
  bool seen = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() < 2 || line[0] != 'v' || line[1] != ' ') continue;
    seen = true;
    std::istringstream tokens(line.substr(2));
    std::string tok;
    while (tokens >> tok) {
      const bool binary = tok.size() == num_vars && tok.find_first_not_of("01") == std::string::npos &&
                          (num_vars > 1 || tok == "0" || tok == "1");
      if (binary && tok.size() > 1) {
        for (std::size_t v = 0; v < num_vars; ++v) x[v] = tok[v] == '1' ? Spin{1} : Spin{-1};
        continue;
      }
      const long long lit = std::strtoll(tok.c_str(), nullptr, 10);
      if (lit == 0) continue;
      const auto v = static_cast<std::size_t>(std::llabs(lit));
      if (v <= num_vars) x[v - 1] = lit > 0 ? Spin{1} : Spin{-1};
    }
  }
  if (!seen) return std::nullopt;
  return x;
}

CnfFormula random_k_cnf(std::size_t num_vars, std::size_t num_clauses, std::size_t k, RandomStream& rng) {
  if (k == 0 || k > num_vars) throw InvalidParameterError("random_k_cnf: need 1 <= k <= num_vars");
  std::vector<Clause> clauses;
  clauses.reserve(num_clauses);
  for (std::size_t c = 0; c < num_clauses; ++c) {
    Clause clause;
    while (clause.size() < k) {
      const int var = static_cast<int>(rng.next_u64() % num_vars) + 1;
      if (std::any_of(clause.begin(), clause.end(), [&](int lit) { return std::abs(lit) == var; })) continue;
      clause.push_back(rng.spin() > 0 ? var : -var);
    }
    clauses.push_back(std::move(clause));
  }
  return CnfFormula(num_vars, std::move(clauses));
}

std::uint64_t brute_force_model_count(const CnfFormula& f) {
  const std::size_t n = f.num_vars();
  if (n > 24) throw InvalidDimensionError("brute_force_model_count: num_vars must be <= 24");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> masks;
  for (const Clause& clause : f.clauses()) {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
    for (int lit : clause) {
      const std::uint32_t bit = std::uint32_t{1} << (n - static_cast<std::size_t>(std::abs(lit)));
      (lit > 0 ? pos : neg) |= bit;
    }
    masks.emplace_back(pos, neg);
  }
  std::uint64_t count = 0;
  const std::uint32_t total = std::uint32_t{1} << n;
  for (std::uint32_t a = 0; a < total; ++a) {
    bool ok = true;
    for (const auto& [pos, neg] : masks) {
      if (((a & pos) | (~a & neg)) == 0) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
  }
  return count;
}

// ---------------------------------------------------------------------------

double CnfWeightModel::log2_weight(std::span<const Spin> x) const {
  return formula_.satisfied_by(x) ? 0.0 : -std::numeric_limits<double>::infinity();
}

OracleResult CnfWeightModel::maximize(const RealUnaryPerturbation& u) const {
  auto best = solve_min_cost(formula_, u);
  if (!best) throw ZeroWeightError("cnf model: formula is unsatisfiable");
  const double value = u.evaluate(best->assignment);
  return {value, std::move(best->assignment)};
}

}  // namespace wrc
