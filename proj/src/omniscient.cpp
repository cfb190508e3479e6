#include "recip/omniscient.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "recip/errors.hpp"

namespace recip {

std::uint64_t ArrivalCounts::horizon() const {
  std::uint64_t t = 0;
  for (auto c : boys) t += c;
  return t;
}

ArrivalCounts arrival_counts(const RoundTrace& trace, std::size_t n) {
  ArrivalCounts c{std::vector<std::uint64_t>(n, 0), std::vector<std::uint64_t>(n, 0)};
  for (const auto& r : trace) {
    if (r.boy >= n || r.girl >= n) throw InputError("trace user id out of range at t=" + std::to_string(r.t));
    ++c.boys[r.boy];
    ++c.girls[r.girl];
  }
  return c;
}

ArrivalCounts arrival_counts(const RunResult& run) {
  return {std::vector<std::uint64_t>(run.boy_arrivals.begin(), run.boy_arrivals.end()),
          std::vector<std::uint64_t>(run.girl_arrivals.begin(), run.girl_arrivals.end())};
}

FlowNetwork::FlowNetwork(std::size_t nodes) : adj_(nodes) {}

int FlowNetwork::add_arc(int from, int to, std::int64_t capacity) {
  if (capacity < 0) throw InputError("negative capacity");
  const int n = static_cast<int>(adj_.size());
  if (from < 0 || to < 0 || from >= n || to >= n) throw InputError("arc endpoint out of range");
  const int a = static_cast<int>(adj_[from].size());
  const int b = static_cast<int>(adj_[to].size()) + (from == to ? 1 : 0);
  adj_[from].push_back({to, b, capacity});
  adj_[to].push_back({from, a, 0});
  origin_.emplace_back(from, a);
  capacity_.push_back(capacity);
  return static_cast<int>(origin_.size()) - 1;
}

FlowNetwork::Arc FlowNetwork::arc(int id) const {
  const auto [u, k] = origin_.at(static_cast<std::size_t>(id));
  const Edge& e = adj_[u][k];
  return {u, e.to, capacity_[id], capacity_[id] - e.cap};
}

bool FlowNetwork::build_levels(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const Edge& e : adj_[u]) {
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[u] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t FlowNetwork::push(int u, int t, std::int64_t limit) {
  if (u == t) return limit;
  for (std::size_t& i = next_[u]; i < adj_[u].size(); ++i) {
    Edge& e = adj_[u][i];
    if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
    const std::int64_t d = push(e.to, t, std::min(limit, e.cap));
    if (d > 0) {
      e.cap -= d;
      adj_[e.to][e.rev].cap += d;
      return d;
    }
  }
  return 0;
}

std::int64_t FlowNetwork::max_flow(int source, int sink) {
  if (source == sink) throw InputError("source equals sink");
  std::int64_t total = 0;
  while (build_levels(source, sink)) {
    next_.assign(adj_.size(), 0);
    while (const std::int64_t d = push(source, sink, std::numeric_limits<std::int64_t>::max())) total += d;
  }
  return total;
}

FlowNetwork build_yardstick_network(const MatchingGraph& graph, const ArrivalCounts& counts,
                                    std::vector<std::pair<UserIndex, UserIndex>>* unit_arcs) {
  const std::size_t n = graph.n();
  if (counts.boys.size() != n || counts.girls.size() != n) throw InputError("arrival counts do not match n");
  FlowNetwork net(2 + 2 * n);
  const int boy0 = 2, girl0 = 2 + static_cast<int>(n);
  for (std::size_t b = 0; b < n; ++b) net.add_arc(0, boy0 + static_cast<int>(b), static_cast<std::int64_t>(counts.boys[b]));
  for (std::size_t g = 0; g < n; ++g) net.add_arc(girl0 + static_cast<int>(g), 1, static_cast<std::int64_t>(counts.girls[g]));
  for (std::size_t b = 0; b < n; ++b) {
    if (counts.boys[b] == 0) continue;
    for (const UserIndex g : graph.neighbors(UserRef::boy(static_cast<UserIndex>(b)))) {
      if (counts.girls[g] == 0) continue;
      net.add_arc(boy0 + static_cast<int>(b), girl0 + static_cast<int>(g), 1);
      if (unit_arcs) unit_arcs->emplace_back(static_cast<UserIndex>(b), g);
    }
  }
  return net;
}

YardstickSolution solve_yardstick(const MatchingGraph& graph, const ArrivalCounts& counts) {
  std::vector<std::pair<UserIndex, UserIndex>> unit;
  FlowNetwork net = build_yardstick_network(graph, counts, &unit);
  YardstickSolution sol;
  sol.value = static_cast<std::uint64_t>(net.max_flow(0, 1));
  const int first_unit = static_cast<int>(2 * graph.n());
  for (std::size_t k = 0; k < unit.size(); ++k) {
    if (net.arc(first_unit + static_cast<int>(k)).flow == 1) sol.edges.push_back(unit[k]);
  }
  return sol;
}

std::uint64_t optimal_matches(const MatchingGraph& graph, const ArrivalCounts& counts) {
  return solve_yardstick(graph, counts).value;
}

double expected_optimal_estimate(const MatchingGraph& graph, std::uint64_t horizon) {
  if (graph.match_count() == 0) return 0.0;
  return static_cast<double>(graph.match_count()) / (1.0 + delta_overload(graph, horizon).value());
}

}  // namespace recip
