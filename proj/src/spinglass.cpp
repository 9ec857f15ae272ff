#include "wrc/spinglass.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "wrc/maxflow.hpp"
#include "wrc/rng.hpp"
#include "wrc/textio.hpp"

namespace wrc {
namespace {

std::vector<std::pair<std::size_t, std::size_t>> grid_edges(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(2 * rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(i, i + 1);
      if (r + 1 < rows) edges.emplace_back(i, i + cols);
    }
  }
  return edges;
}

}  // namespace

GridIsingModel::GridIsingModel(std::size_t rows, std::size_t cols, std::vector<double> theta_local,
                               std::vector<Coupling> couplings)
    : rows_(rows), cols_(cols), theta_local_(std::move(theta_local)) {
  if (rows == 0 || cols == 0) throw InvalidDimensionError("grid model: rows and cols must be >= 1");
  if (theta_local_.size() != rows * cols) throw InvalidDimensionError("grid model: expected rows*cols fields");
  for (double t : theta_local_) {
    if (!std::isfinite(t)) throw InvalidParameterError("grid model: fields must be finite");
  }

  std::map<std::pair<std::size_t, std::size_t>, double> given;
  for (const Coupling& cp : couplings) {
    if (!std::isfinite(cp.theta) || cp.theta < 0.0) {
      throw InvalidParameterError("grid model: couplings must be finite and non-negative");
    }
    const auto key = std::minmax(cp.i, cp.j);
    if (!given.emplace(key, cp.theta).second) throw InvalidParameterError("grid model: duplicate coupling");
  }
  const auto edges = grid_edges(rows, cols);
  if (given.size() != edges.size()) throw InvalidParameterError("grid model: couplings must cover the grid edges exactly");
  couplings_.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    auto it = given.find({i, j});
    if (it == given.end()) throw InvalidParameterError("grid model: coupling set is not the 4-neighbour grid");
    couplings_.push_back({i, j, it->second});
  }

  double worst = 0.0;
  for (double t : theta_local_) worst -= std::abs(t);
  for (const Coupling& cp : couplings_) worst -= cp.theta;
  log2_w_min_bound_ = worst / kLn2;
  log2_w_max_ = maximize(RealUnaryPerturbation::zeros(dimension())).value;
}

GridIsingModel GridIsingModel::generate(std::size_t rows, std::size_t cols, double coupling_max,
                                        std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw InvalidDimensionError("generate: rows and cols must be >= 1");
  if (!(coupling_max >= 0.0) || !std::isfinite(coupling_max)) {
    throw InvalidParameterError("generate: coupling_max must be finite and >= 0");
  }
  RandomStream rng = RandomStream::derive(seed, StreamDomain::model, 0);
  std::vector<double> fields(rows * cols);
  for (double& f : fields) f = rng.uniform(-1.0, 1.0);
  std::vector<Coupling> couplings;
  for (const auto& [i, j] : grid_edges(rows, cols)) {
    couplings.push_back({i, j, coupling_max == 0.0 ? 0.0 : rng.uniform(0.0, coupling_max)});
  }
  return GridIsingModel(rows, cols, std::move(fields), std::move(couplings));
}

double GridIsingModel::potential(std::span<const Spin> x) const {
  if (x.size() != dimension()) throw InvalidDimensionError("potential: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += theta_local_[i] * x[i];
  for (const Coupling& cp : couplings_) total += cp.theta * x[cp.i] * x[cp.j];
  return total;
}

// Minimise E(x) = -(sum_i u_i(x_i) + theta(x) / ln 2). A node on the source
// side takes x = +1. Pairwise terms -t x_i x_j (t >= 0) become a symmetric
// arc of capacity 2t, paid when the endpoints disagree. The residual-
// reachable source set is the smallest minimiser, i.e. the lexicographically
// smallest maximiser.
OracleResult GridIsingModel::maximize(const RealUnaryPerturbation& u) const {
  const std::size_t n = dimension();
  if (u.size() != n) throw InvalidDimensionError("map oracle: perturbation dimension mismatch");

  FlowNetwork net(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double field = theta_local_[i] / kLn2;
    const double e_plus = -(u[i].at_plus + field);
    const double e_minus = -(u[i].at_minus - field);
    const double base = std::min(e_plus, e_minus);
    net.add_terminal_arcs(i, e_minus - base, e_plus - base);
  }
  for (const Coupling& cp : couplings_) {
    const double cap = 2.0 * cp.theta / kLn2;
    if (cap > 0.0) net.add_arc(cp.i, cp.j, cap, cap);
  }

  const MaxFlowResult cut = max_flow(net);
  State x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = cut.source_side[i] ? Spin{1} : Spin{-1};
  const double value = u.evaluate(x) + potential(x) / kLn2;
  return {value, std::move(x)};
}

OracleResult map_oracle(const GridIsingModel& model, const RealUnaryPerturbation& u) {
  return model.maximize(u);
}

double log2_w_max(const GridIsingModel& model) { return *model.log2_w_max(); }

double log2_w_min_lower_bound(const GridIsingModel& model) { return *model.log2_w_min(); }

void write_model(std::ostream& out, const GridIsingModel& model) {
  out << model.rows() << ' ' << model.cols() << '\n';
  const auto fields = model.theta_local();
  for (std::size_t r = 0; r < model.rows(); ++r) {
    for (std::size_t c = 0; c < model.cols(); ++c) {
      if (c) out << ' ';
      out << format_double(fields[r * model.cols() + c]);
    }
    out << '\n';
  }
  for (const Coupling& cp : model.couplings()) {
    out << cp.i << ' ' << cp.j << ' ' << format_double(cp.theta) << '\n';
  }
}

GridIsingModel read_model(std::istream& in) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw InvalidParameterError("read_model: missing 'rows cols' header");
  if (rows == 0 || cols == 0) throw InvalidDimensionError("read_model: rows and cols must be >= 1");
  std::vector<double> fields(rows * cols);
  std::string token;
  for (double& f : fields) {
    if (!(in >> token)) throw InvalidParameterError("read_model: truncated field block");
    f = parse_double(token);
  }
  std::vector<Coupling> couplings;
  std::size_t i = 0;
  std::size_t j = 0;
  while (in >> i >> j >> token) couplings.push_back({i, j, parse_double(token)});
  if (!in.eof()) throw InvalidParameterError("read_model: malformed coupling line");
  return GridIsingModel(rows, cols, std::move(fields), std::move(couplings));
}

}  // namespace wrc
