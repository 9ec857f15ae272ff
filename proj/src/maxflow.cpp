#include "wrc/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "wrc/core.hpp"

namespace wrc {

FlowNetwork::FlowNetwork(std::size_t node_count) : node_count_(node_count), adj_(node_count + 2) {}

void FlowNetwork::check_node(std::size_t v) const {
  if (v >= node_count_ + 2) throw InvalidParameterError("flow network: node " + std::to_string(v) + " out of range");
}

void FlowNetwork::add_arc(std::size_t from, std::size_t to, double cap, double rev_cap) {
  check_node(from);
  check_node(to);
  if (from == to) throw InvalidParameterError("flow network: self-loop arcs are not allowed");
  if (!(cap >= 0.0) || !(rev_cap >= 0.0) || !std::isfinite(cap) || !std::isfinite(rev_cap)) {
    throw InvalidParameterError("flow network: capacities must be finite and non-negative");
  }
  const std::size_t fwd_index = adj_[from].size();
  const std::size_t rev_index = adj_[to].size();
  adj_[from].push_back({to, rev_index, cap, cap});
  adj_[to].push_back({from, fwd_index, rev_cap, rev_cap});
}

void FlowNetwork::add_terminal_arcs(std::size_t i, double cap_source, double cap_sink) {
  if (i >= node_count_) throw InvalidParameterError("flow network: terminal arcs need an inner node");
  if (cap_source != 0.0) add_arc(source(), i, cap_source);
  if (cap_sink != 0.0) add_arc(i, sink(), cap_sink);
}

std::vector<FlowNetwork::Arc> FlowNetwork::arcs() const {
  std::vector<Arc> out;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    for (const Edge& e : adj_[v]) {
      if (e.original > 0.0) out.push_back({v, e.to, e.original});
    }
  }
  return out;
}

struct MaxFlowSolver {
  using Edge = FlowNetwork::Edge;

  std::vector<std::vector<Edge>> adj;
  std::size_t s;
  std::size_t t;
  std::vector<int> level;
  std::vector<std::size_t> next_edge;

  explicit MaxFlowSolver(const FlowNetwork& net)
      : adj(net.adj_), s(net.source()), t(net.sink()), level(adj.size()), next_edge(adj.size()) {}

  bool build_levels() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<std::size_t> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (const Edge& e : adj[v]) {
        if (e.cap > FlowNetwork::kCapacityEpsilon && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level[t] >= 0;
  }

  double push(std::size_t v, double limit) {
    if (v == t) return limit;
    for (std::size_t& i = next_edge[v]; i < adj[v].size(); ++i) {
      Edge& e = adj[v][i];
      if (e.cap <= FlowNetwork::kCapacityEpsilon || level[e.to] != level[v] + 1) continue;
      const double pushed = push(e.to, std::min(limit, e.cap));
      if (pushed > 0.0) {
        e.cap -= pushed;
        adj[e.to][e.rev].cap += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  double run() {
    double flow = 0.0;
    while (build_levels()) {
      std::fill(next_edge.begin(), next_edge.end(), 0);
      for (;;) {
        const double pushed = push(s, std::numeric_limits<double>::infinity());
        if (pushed <= 0.0) break;
        flow += pushed;
      }
    }
    return flow;
  }
};

MaxFlowResult max_flow(const FlowNetwork& net) {
  MaxFlowSolver solver(net);
  MaxFlowResult result;
  result.flow_value = solver.run();
  // After the last phase, level[] >= 0 marks residual reachability from s.
  solver.build_levels();
  result.source_side.resize(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) result.source_side[v] = solver.level[v] >= 0;
  return result;
}

double cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side) {
  if (source_side.size() != net.node_count()) throw InvalidParameterError("cut_capacity: label count mismatch");
  auto on_source = [&](std::size_t v) {
    if (v == net.source()) return true;
    if (v == net.sink()) return false;
    return static_cast<bool>(source_side[v]);
  };
  double total = 0.0;
  for (const auto& arc : net.arcs()) {
    if (on_source(arc.from) && !on_source(arc.to)) total += arc.capacity;
  }
  return total;
}

}  // namespace wrc
