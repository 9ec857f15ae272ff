#pragma once

#include <cstddef>
#include <vector>

namespace wrc {

/// Directed flow network over node_count inner nodes plus two implicit
/// terminals. Every arc is stored with its paired reverse arc so the
/// residual graph can be walked in place.
///
/// Solved with shortest augmenting paths in phases (BFS level graph, DFS
/// blocking flow). Residual capacities at or below kCapacityEpsilon are
/// treated as saturated.
class FlowNetwork {
 public:
  static constexpr double kCapacityEpsilon = 1e-12;

  explicit FlowNetwork(std::size_t node_count);

  std::size_t node_count() const { return node_count_; }
  std::size_t source() const { return node_count_; }
  std::size_t sink() const { return node_count_ + 1; }

  /// Arc from -> to with capacity cap and reverse arc to -> from with
  /// capacity rev_cap. Terminals may be used as endpoints.
  void add_arc(std::size_t from, std::size_t to, double cap, double rev_cap = 0.0);

  /// Adds source -> i with cap_source and i -> sink with cap_sink.
  void add_terminal_arcs(std::size_t i, double cap_source, double cap_sink);

  struct Arc {
    std::size_t from;
    std::size_t to;
    double capacity;
  };
  /// Original (non-residual) arcs, in insertion order, zero-capacity
  /// reverse arcs omitted.
  std::vector<Arc> arcs() const;

 private:
  friend struct MaxFlowSolver;

  struct Edge {
    std::size_t to;
    std::size_t rev;  // index of the paired arc in adj_[to]
    double cap;
    double original;
  };

  void check_node(std::size_t v) const;

  std::size_t node_count_;
  std::vector<std::vector<Edge>> adj_;
};

struct MaxFlowResult {
  double flow_value = 0.0;
  /// true = source side; minimal source set (residual-reachable from source).
  std::vector<bool> source_side;
};

/// Exact max flow / min cut. The network is copied; the input is unchanged.
MaxFlowResult max_flow(const FlowNetwork& net);

/// Capacity of the cut with the given inner-node labels (true = source side).
double cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side);

}  // namespace wrc
