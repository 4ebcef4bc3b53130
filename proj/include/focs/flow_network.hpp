#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "focs/instance.hpp"
#include "focs/rational.hpp"

namespace focs {

// Which edges of a flow network a query refers to: (s,j), (j,I_i) or (I_i,t).
enum class EdgeKind { source, job_interval, interval_sink };

struct EdgeRef {
  EdgeKind kind;
  int job = -1;
  int interval = -1;

  static EdgeRef source(int j) { return {EdgeKind::source, j, -1}; }
  static EdgeRef job_interval(int j, int i) { return {EdgeKind::job_interval, j, i}; }
  static EdgeRef interval_sink(int i) { return {EdgeKind::interval_sink, -1, i}; }
};

// Adjacency scan priorities for the augmenting-path search. The identity
// order is the canonical one (jobs ascending, intervals ascending); permuted
// orders exist to demonstrate that results do not depend on the solver's
// tie-breaking.
struct ScanOrder {
  std::vector<int> job_rank;       // position of each job in scan order
  std::vector<int> interval_rank;  // position of each interval in scan order

  static ScanOrder identity(int jobs, int intervals) {
    ScanOrder order;
    order.job_rank.resize(static_cast<size_t>(jobs));
    order.interval_rank.resize(static_cast<size_t>(intervals));
    std::iota(order.job_rank.begin(), order.job_rank.end(), 0);
    std::iota(order.interval_rank.begin(), order.interval_rank.end(), 0);
    return order;
  }
};

struct Flow {
  Rat value;
  std::vector<Rat> source;                // f(s,j)
  std::vector<std::map<int, Rat>> by_job; // f(j,I_i), keyed by interval, edges only
  std::vector<Rat> sink;                  // f(I_i,t), zero where no sink edge

  const Rat& job_flow(int j, int i) const {
    static const Rat zero = 0;
    const auto& edges = by_job.at(static_cast<size_t>(j));
    auto it = edges.find(i);
    return it == edges.end() ? zero : it->second;
  }
};

// The s -> jobs -> intervals -> t network. Source edges always exist (zero
// capacity by default); job->interval edges model availability with e^max
// capacities; sink edges exist only for masked intervals and carry the
// per-iteration g values.
class FlowNetwork {
 public:
  FlowNetwork(int job_count, int interval_count)
      : source_caps_(static_cast<size_t>(job_count), Rat(0)),
        job_edges_(static_cast<size_t>(job_count)),
        sink_caps_(static_cast<size_t>(interval_count)),
        has_sink_(static_cast<size_t>(interval_count), false) {}

  int job_count() const { return static_cast<int>(source_caps_.size()); }
  int interval_count() const { return static_cast<int>(sink_caps_.size()); }
  int node_count() const { return job_count() + interval_count() + 2; }
  int edge_count() const {
    int count = job_count();
    for (const auto& edges : job_edges_) count += static_cast<int>(edges.size());
    for (bool present : has_sink_)
      if (present) ++count;
    return count;
  }

  void set_source_cap(int j, Rat cap) {
    require_nonnegative(cap);
    source_caps_.at(static_cast<size_t>(j)) = std::move(cap);
  }

  void add_job_edge(int j, int i, Rat cap) {
    require_nonnegative(cap);
    check_interval(i);
    auto& edges = job_edges_.at(static_cast<size_t>(j));
    if (edges.count(i)) throw std::invalid_argument("duplicate job edge");
    edges.emplace(i, std::move(cap));
  }

  void add_sink_edge(int i, Rat cap) {
    require_nonnegative(cap);
    check_interval(i);
    if (has_sink_.at(static_cast<size_t>(i))) throw std::invalid_argument("duplicate sink edge");
    has_sink_[static_cast<size_t>(i)] = true;
    sink_caps_[static_cast<size_t>(i)] = std::move(cap);
  }

  void set_sink_cap(int i, Rat cap) {
    require_nonnegative(cap);
    if (!has_sink_edge(i))
      throw std::invalid_argument("no sink edge for interval " + std::to_string(i + 1));
    sink_caps_[static_cast<size_t>(i)] = std::move(cap);
  }

  bool has_job_edge(int j, int i) const {
    return job_edges_.at(static_cast<size_t>(j)).count(i) > 0;
  }
  bool has_sink_edge(int i) const { return has_sink_.at(static_cast<size_t>(i)); }

  const Rat& source_cap(int j) const { return source_caps_.at(static_cast<size_t>(j)); }
  const Rat& job_cap(int j, int i) const {
    const auto& edges = job_edges_.at(static_cast<size_t>(j));
    auto it = edges.find(i);
    if (it == edges.end())
      throw std::invalid_argument("no edge from job " + std::to_string(j + 1) +
                                  " to interval " + std::to_string(i + 1));
    return it->second;
  }
  const Rat& sink_cap(int i) const {
    if (!has_sink_edge(i))
      throw std::invalid_argument("no sink edge for interval " + std::to_string(i + 1));
    return sink_caps_.at(static_cast<size_t>(i));
  }

  const std::map<int, Rat>& job_edges(int j) const {
    return job_edges_.at(static_cast<size_t>(j));
  }

  Rat total_source_cap() const {
    Rat total = 0;
    for (const Rat& cap : source_caps_) total += cap;
    return total;
  }

  std::set<int> sink_intervals() const {
    std::set<int> mask;
    for (int i = 0; i < interval_count(); ++i)
      if (has_sink_[static_cast<size_t>(i)]) mask.insert(i);
    return mask;
  }

  // Exact maximum flow by shortest augmenting paths. Deterministic: the BFS
  // scans adjacency in the given order, so a fixed order yields a fixed flow.
  Flow max_flow() const { return max_flow(ScanOrder::identity(job_count(), interval_count())); }

  Flow max_flow(const ScanOrder& order) const {
    const int n = job_count();
    const int m = interval_count();
    const int source = 0;
    const int sink = n + m + 1;
    auto job_node = [&](int j) { return 1 + j; };
    auto interval_node = [&](int n_, int i) { return 1 + n_ + i; };

    struct REdge {
      int to;
      Rat residual;
      size_t rev;
    };
    std::vector<std::vector<REdge>> graph(static_cast<size_t>(node_count()));
    auto add_edge = [&](int from, int to, const Rat& cap) {
      graph[static_cast<size_t>(from)].push_back({to, cap, graph[static_cast<size_t>(to)].size()});
      graph[static_cast<size_t>(to)].push_back({from, Rat(0), graph[static_cast<size_t>(from)].size() - 1});
    };

    std::vector<int> jobs_by_rank(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) jobs_by_rank[static_cast<size_t>(order.job_rank.at(static_cast<size_t>(j)))] = j;
    std::vector<int> intervals_by_rank(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
      intervals_by_rank[static_cast<size_t>(order.interval_rank.at(static_cast<size_t>(i)))] = i;

    // Remember where each forward edge landed so flows can be read back.
    std::vector<size_t> source_edge_pos(static_cast<size_t>(n));
    std::vector<std::map<int, std::pair<int, size_t>>> job_edge_pos(static_cast<size_t>(n));
    std::vector<size_t> sink_edge_pos(static_cast<size_t>(m));

    for (int j : jobs_by_rank) {
      source_edge_pos[static_cast<size_t>(j)] = graph[source].size();
      add_edge(source, job_node(j), source_cap(j));
    }
    for (int j : jobs_by_rank) {
      const auto& edges = job_edges_[static_cast<size_t>(j)];
      for (int i : intervals_by_rank) {
        auto it = edges.find(i);
        if (it == edges.end()) continue;
        job_edge_pos[static_cast<size_t>(j)][i] = {job_node(j),
                                                   graph[static_cast<size_t>(job_node(j))].size()};
        add_edge(job_node(j), interval_node(n, i), it->second);
      }
    }
    for (int i : intervals_by_rank) {
      if (!has_sink_[static_cast<size_t>(i)]) continue;
      sink_edge_pos[static_cast<size_t>(i)] = graph[static_cast<size_t>(interval_node(n, i))].size();
      add_edge(interval_node(n, i), sink, sink_caps_[static_cast<size_t>(i)]);
    }

    std::vector<std::pair<int, size_t>> parent(static_cast<size_t>(node_count()));
    std::vector<char> seen(static_cast<size_t>(node_count()));
    Rat total = 0;
    for (;;) {
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<int> queue{source};
      seen[static_cast<size_t>(source)] = 1;
      bool reached = false;
      for (size_t head = 0; head < queue.size() && !reached; ++head) {
        int node = queue[head];
        const auto& edges = graph[static_cast<size_t>(node)];
        for (size_t pos = 0; pos < edges.size(); ++pos) {
          const REdge& edge = edges[pos];
          if (edge.residual == 0 || seen[static_cast<size_t>(edge.to)]) continue;
          seen[static_cast<size_t>(edge.to)] = 1;
          parent[static_cast<size_t>(edge.to)] = {node, pos};
          if (edge.to == sink) {
            reached = true;
            break;
          }
          queue.push_back(edge.to);
        }
      }
      if (!reached) break;

      Rat bottleneck;
      bool first = true;
      for (int node = sink; node != source;) {
        auto [from, pos] = parent[static_cast<size_t>(node)];
        const Rat& residual = graph[static_cast<size_t>(from)][pos].residual;
        if (first || residual < bottleneck) bottleneck = residual;
        first = false;
        node = from;
      }
      for (int node = sink; node != source;) {
        auto [from, pos] = parent[static_cast<size_t>(node)];
        REdge& edge = graph[static_cast<size_t>(from)][pos];
        edge.residual -= bottleneck;
        graph[static_cast<size_t>(edge.to)][edge.rev].residual += bottleneck;
        node = from;
      }
      total += bottleneck;
    }

    Flow flow;
    flow.value = total;
    flow.source.resize(static_cast<size_t>(n));
    flow.by_job.resize(static_cast<size_t>(n));
    flow.sink.assign(static_cast<size_t>(m), Rat(0));
    auto flow_on = [&](int from, size_t pos) {
      const REdge& edge = graph[static_cast<size_t>(from)][pos];
      return graph[static_cast<size_t>(edge.to)][edge.rev].residual;  // reverse started at 0
    };
    for (int j = 0; j < n; ++j) {
      flow.source[static_cast<size_t>(j)] = flow_on(source, source_edge_pos[static_cast<size_t>(j)]);
      for (const auto& [i, where] : job_edge_pos[static_cast<size_t>(j)])
        flow.by_job[static_cast<size_t>(j)][i] = flow_on(where.first, where.second);
    }
    for (int i = 0; i < m; ++i)
      if (has_sink_[static_cast<size_t>(i)])
        flow.sink[static_cast<size_t>(i)] = flow_on(interval_node(n, i), sink_edge_pos[static_cast<size_t>(i)]);
    return flow;
  }

 private:
  void check_interval(int i) const {
    if (i < 0 || i >= interval_count()) throw std::invalid_argument("interval index out of range");
  }
  static void require_nonnegative(const Rat& cap) {
    if (cap < 0) throw std::invalid_argument("negative capacity");
  }

  std::vector<Rat> source_caps_;
  std::vector<std::map<int, Rat>> job_edges_;  // per job: interval -> capacity
  std::vector<Rat> sink_caps_;
  std::vector<bool> has_sink_;
};

// Network for an instance: c(s,j) from source_caps, c(j,I_i) = e^max, sink
// edges only for intervals present in sink_caps (the mask).
inline FlowNetwork build_network(const Instance& instance, const AtomicPartition& partition,
                                 const std::vector<Rat>& source_caps,
                                 const std::map<int, Rat>& sink_caps) {
  if (static_cast<int>(source_caps.size()) != instance.size())
    throw std::invalid_argument("one source capacity per job required");
  FlowNetwork network(instance.size(), partition.interval_count());
  for (int j = 0; j < instance.size(); ++j) {
    network.set_source_cap(j, source_caps[static_cast<size_t>(j)]);
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i)
      network.add_job_edge(j, i, energy_cap(instance.job(j), partition, i));
  }
  for (const auto& [i, cap] : sink_caps) network.add_sink_edge(i, cap);
  return network;
}

inline bool is_saturated(const FlowNetwork& network, const Flow& flow, const EdgeRef& edge) {
  switch (edge.kind) {
    case EdgeKind::source:
      return flow.source.at(static_cast<size_t>(edge.job)) == network.source_cap(edge.job);
    case EdgeKind::job_interval:
      return flow.job_flow(edge.job, edge.interval) == network.job_cap(edge.job, edge.interval);
    case EdgeKind::interval_sink:
      return flow.sink.at(static_cast<size_t>(edge.interval)) == network.sink_cap(edge.interval);
  }
  throw std::invalid_argument("unknown edge");
}

namespace detail {

// Single residual step between interval nodes: I_i -> j -> I_i' exists iff
// f(j,I_i) > 0 (reverse edge) and f(j,I_i') < c(j,I_i') (forward edge).
inline std::vector<std::vector<bool>> interval_step_matrix(const FlowNetwork& network,
                                                           const Flow& flow) {
  const int m = network.interval_count();
  std::vector<std::vector<bool>> step(static_cast<size_t>(m),
                                      std::vector<bool>(static_cast<size_t>(m), false));
  for (int j = 0; j < network.job_count(); ++j) {
    std::vector<int> tails, heads;
    for (const auto& [i, cap] : network.job_edges(j)) {
      const Rat& f = flow.job_flow(j, i);
      if (f > 0) tails.push_back(i);
      if (f < cap) heads.push_back(i);
    }
    for (int a : tails)
      for (int b : heads)
        if (a != b) step[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
  }
  return step;
}

}  // namespace detail

inline std::vector<std::vector<bool>> residual_interval_steps(const FlowNetwork& network,
                                                              const Flow& flow) {
  return detail::interval_step_matrix(network, flow);
}

// Reachability between interval nodes through residual paths that visit only
// job and interval vertices (transitive closure of the single steps; paths of
// length >= 1, diagonal excluded).
inline std::vector<std::vector<bool>> residual_interval_reachability(const FlowNetwork& network,
                                                                     const Flow& flow) {
  const int m = network.interval_count();
  auto step = detail::interval_step_matrix(network, flow);
  std::vector<std::vector<bool>> reach = step;
  for (int via = 0; via < m; ++via)
    for (int a = 0; a < m; ++a)
      if (reach[static_cast<size_t>(a)][static_cast<size_t>(via)])
        for (int b = 0; b < m; ++b)
          if (step[static_cast<size_t>(via)][static_cast<size_t>(b)])
            reach[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
  for (int i = 0; i < m; ++i) reach[static_cast<size_t>(i)][static_cast<size_t>(i)] = false;
  return reach;
}

// Active intervals whose sink edge is unsaturated in some maximum flow: the
// sink edge is unsaturated in this flow, or the interval reaches one that is
// through the residual graph. Computed by backward closure from the
// unsaturated-sink set, so the answer does not depend on which maximum flow
// the solver happened to return.
inline std::set<int> subcritical_intervals(const FlowNetwork& network, const Flow& flow,
                                           const std::set<int>& active) {
  const int m = network.interval_count();
  std::vector<char> hit(static_cast<size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    if (network.has_sink_edge(i) && flow.sink[static_cast<size_t>(i)] < network.sink_cap(i))
      hit[static_cast<size_t>(i)] = 1;

  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j < network.job_count(); ++j) {
      bool leads_to_hit = false;
      for (const auto& [i, cap] : network.job_edges(j)) {
        if (hit[static_cast<size_t>(i)] && flow.job_flow(j, i) < cap) {
          leads_to_hit = true;
          break;
        }
      }
      if (!leads_to_hit) continue;
      for (const auto& [i, cap] : network.job_edges(j)) {
        if (!hit[static_cast<size_t>(i)] && flow.job_flow(j, i) > 0) {
          hit[static_cast<size_t>(i)] = 1;
          changed = true;
        }
      }
    }
  }

  std::set<int> result;
  for (int i : active)
    if (hit[static_cast<size_t>(i)]) result.insert(i);
  return result;
}

// Conservation and capacity bounds, checked exactly. Used by tests and
// internal sanity asserts.
inline bool flow_is_valid(const FlowNetwork& network, const Flow& flow) {
  Rat from_source = 0, into_sink = 0;
  for (int j = 0; j < network.job_count(); ++j) {
    const Rat& out = flow.source[static_cast<size_t>(j)];
    if (out < 0 || out > network.source_cap(j)) return false;
    Rat forwarded = 0;
    for (const auto& [i, cap] : network.job_edges(j)) {
      const Rat& f = flow.job_flow(j, i);
      if (f < 0 || f > cap) return false;
      forwarded += f;
    }
    if (forwarded != out) return false;
    from_source += out;
  }
  for (int i = 0; i < network.interval_count(); ++i) {
    Rat incoming = 0;
    for (int j = 0; j < network.job_count(); ++j)
      if (network.has_job_edge(j, i)) incoming += flow.job_flow(j, i);
    const Rat& out = flow.sink[static_cast<size_t>(i)];
    if (!network.has_sink_edge(i)) {
      if (incoming != 0 || out != 0) return false;
      continue;
    }
    if (out < 0 || out > network.sink_cap(i)) return false;
    if (incoming != out) return false;
    into_sink += out;
  }
  return from_source == flow.value && into_sink == flow.value;
}

}  // namespace focs
