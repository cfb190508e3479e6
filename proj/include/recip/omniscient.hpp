#pragma once

#include <cstdint>
#include <vector>

#include "recip/core_model.hpp"
#include "recip/protocol.hpp"

namespace recip {

// t(b), t(g): how often each user arrived.
struct ArrivalCounts {
  std::vector<std::uint64_t> boys;
  std::vector<std::uint64_t> girls;

  std::uint64_t horizon() const;  // sum of t(b); equals the sum of t(g) for a valid trace
};

ArrivalCounts arrival_counts(const RoundTrace& trace, std::size_t n);
ArrivalCounts arrival_counts(const RunResult& run);

// Directed network with integral capacities; max flow by Dinic's algorithm.
class FlowNetwork {
 public:
  struct Arc {
    int from;
    int to;
    std::int64_t capacity;
    std::int64_t flow;
  };

  explicit FlowNetwork(std::size_t nodes);

  int add_arc(int from, int to, std::int64_t capacity);
  std::int64_t max_flow(int source, int sink);

  std::size_t node_count() const { return adj_.size(); }
  std::size_t arc_count() const { return origin_.size(); }
  Arc arc(int id) const;

 private:
  struct Edge {
    int to;
    int rev;
    std::int64_t cap;
  };

  bool build_levels(int s, int t);
  std::int64_t push(int u, int t, std::int64_t limit);

  std::vector<std::vector<Edge>> adj_;
  std::vector<std::pair<int, int>> origin_;  // arc id -> (node, index in adj_[node])
  std::vector<std::int64_t> capacity_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

// Source -> boy capacity t(b), girl -> sink capacity t(g), unit boy -> girl arcs on matching edges.
// Nodes: 0 source, 1 sink, 2 + b boys, 2 + n + g girls.
FlowNetwork build_yardstick_network(const MatchingGraph& graph, const ArrivalCounts& counts,
                                    std::vector<std::pair<UserIndex, UserIndex>>* unit_arcs = nullptr);

struct YardstickSolution {
  std::uint64_t value = 0;
  std::vector<std::pair<UserIndex, UserIndex>> edges;  // matching edges carrying flow
};

YardstickSolution solve_yardstick(const MatchingGraph& graph, const ArrivalCounts& counts);
// M*_T.
std::uint64_t optimal_matches(const MatchingGraph& graph, const ArrivalCounts& counts);

// M / (1 + Delta(M, T)). Order-of-magnitude diagnostic only; not an exact expectation.
double expected_optimal_estimate(const MatchingGraph& graph, std::uint64_t horizon);

}  // namespace recip
