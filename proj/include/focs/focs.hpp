#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "focs/flow_network.hpp"
#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"

namespace focs {

// One capacity-raising iteration: the sink caps it ran with (active intervals
// only), the maximum flow value, and the intervals parked as subcritical.
struct IterationRecord {
  int round = 0;
  int iteration = 0;
  std::map<int, Rat> g;
  Rat flow_value;
  std::vector<int> parked;
};

// Round summary: which intervals came out critical, each job's critical load,
// and the end-of-round network/flow needed for the isolation property.
struct RoundRecord {
  int round = 0;
  std::vector<int> critical;
  std::vector<Rat> critical_load;  // per job: restricted flow on (s,j)
  int iterations = 0;
  FlowNetwork network;
  Flow end_flow;
  std::set<int> parked;
};

struct FocsResult {
  Schedule schedule;
  PowerProfile profile;
  std::vector<std::vector<int>> critical_sets;  // per round, ascending indices
  std::vector<int> rank;                        // per interval: 1-based round index
  std::vector<RoundRecord> rounds;
  std::vector<IterationRecord> iterations;  // filled when tracing is on
  int total_iterations = 0;
};

struct FocsOptions {
  bool keep_iteration_trace = false;
  std::optional<ScanOrder> order;  // solver tie-breaking; canonical when absent
};

// g_{r,1}: a constant power profile over the active intervals is the most
// optimistic bound, so each active interval gets demand * |I_i| / L(active).
inline std::map<int, Rat> initial_sink_caps(const Rat& remaining_demand,
                                            const std::set<int>& active,
                                            const AtomicPartition& partition) {
  if (remaining_demand < 0) throw std::invalid_argument("negative demand");
  std::map<int, Rat> caps;
  if (active.empty()) {
    if (remaining_demand > 0)
      throw InfeasibleError("", "positive demand " + rat_to_string(remaining_demand) +
                                    " with no active interval");
    return caps;
  }
  Rat total_length = partition.total_length(active);
  for (int i : active) caps[i] = remaining_demand * partition.length(i) / total_length;
  return caps;
}

// g_{r,k+1}: spread the unserved energy proportionally over the intervals
// still active. Entries for intervals outside `active` stay frozen.
inline std::map<int, Rat> update_sink_caps(const std::map<int, Rat>& caps, const Rat& deficit,
                                           const std::set<int>& active,
                                           const AtomicPartition& partition) {
  if (deficit <= 0) throw std::invalid_argument("capacity update requires a positive deficit");
  if (active.empty())
    throw ProgressViolation("unserved energy " + rat_to_string(deficit) +
                            " but no active interval left to raise");
  std::map<int, Rat> updated = caps;
  Rat total_length = partition.total_length(active);
  for (int i : active) {
    auto it = updated.find(i);
    if (it == updated.end())
      throw std::invalid_argument("active interval " + std::to_string(i + 1) + " has no capacity");
    it->second += deficit * partition.length(i) / total_length;
  }
  return updated;
}

struct RoundOutcome {
  FlowNetwork network;  // capacities as of the feasible iteration
  Flow flow;            // f_r
  std::set<int> critical;
  std::set<int> parked;
  std::vector<IterationRecord> iterations;
};

// One round: raise the active sink capacities until a maximum flow serves the
// whole remaining demand. Subcritical intervals are parked with their sink
// capacity frozen at the current value; parking happens before the
// termination test, so intervals that could be drained in some maximum flow
// never end up critical.
inline RoundOutcome run_round(FlowNetwork network, std::set<int> active,
                              const AtomicPartition& partition, int round_index,
                              const ScanOrder* order = nullptr) {
  const Rat demand = network.total_source_cap();
  std::set<int> parked;
  std::vector<IterationRecord> trace;
  std::map<int, Rat> caps = initial_sink_caps(demand, active, partition);
  const int iteration_bound = partition.interval_count() + 1;

  for (int k = 1;; ++k) {
    for (const auto& [i, g] : caps) network.set_sink_cap(i, g);
    Flow flow = order ? network.max_flow(*order) : network.max_flow();
    std::set<int> newly_parked = subcritical_intervals(network, flow, active);

    IterationRecord record;
    record.round = round_index;
    record.iteration = k;
    record.g = caps;
    record.flow_value = flow.value;
    record.parked.assign(newly_parked.begin(), newly_parked.end());
    trace.push_back(std::move(record));

    for (int i : newly_parked) {
      active.erase(i);
      caps.erase(i);
      parked.insert(i);
    }

    if (flow.value == demand)
      return RoundOutcome{std::move(network), std::move(flow), std::move(active),
                          std::move(parked), std::move(trace)};

    if (newly_parked.empty())
      throw ProgressViolation("round " + std::to_string(round_index) + " iteration " +
                              std::to_string(k) + ": flow " + rat_to_string(flow.value) +
                              " short of demand " + rat_to_string(demand) +
                              " with no subcritical interval (remainder infeasible)");
    if (active.empty())
      throw ProgressViolation("round " + std::to_string(round_index) +
                              ": every interval parked while demand remains unserved");
    if (k >= iteration_bound)
      throw std::logic_error("round exceeded its iteration bound");

    caps = update_sink_caps(caps, demand - flow.value, active, partition);
  }
}

// f_r restricted to the critical columns: job and sink edges copied there,
// zero elsewhere, source edges back-propagated from the kept job edges.
inline Flow restrict_flow(const FlowNetwork& network, const Flow& flow,
                          const std::set<int>& critical) {
  Flow restricted;
  restricted.value = 0;
  restricted.source.assign(static_cast<size_t>(network.job_count()), Rat(0));
  restricted.by_job.resize(static_cast<size_t>(network.job_count()));
  restricted.sink.assign(static_cast<size_t>(network.interval_count()), Rat(0));
  for (int j = 0; j < network.job_count(); ++j) {
    for (const auto& [i, f] : flow.by_job.at(static_cast<size_t>(j))) {
      Rat kept = critical.count(i) ? f : Rat(0);
      restricted.source[static_cast<size_t>(j)] += kept;
      restricted.by_job[static_cast<size_t>(j)].emplace(i, std::move(kept));
    }
    restricted.value += restricted.source[static_cast<size_t>(j)];
  }
  for (int i : critical) restricted.sink[static_cast<size_t>(i)] = flow.sink.at(static_cast<size_t>(i));
  return restricted;
}

// Next round's network: critical sink edges and critical job->interval
// columns removed, source capacities reduced by each job's critical load.
inline FlowNetwork reduce_network(const FlowNetwork& network, const Flow& restricted,
                                  const std::set<int>& critical) {
  FlowNetwork reduced(network.job_count(), network.interval_count());
  for (int j = 0; j < network.job_count(); ++j) {
    Rat cap = network.source_cap(j) - restricted.source.at(static_cast<size_t>(j));
    if (cap < 0) throw std::logic_error("negative source capacity after reduction");
    reduced.set_source_cap(j, std::move(cap));
    for (const auto& [i, edge_cap] : network.job_edges(j))
      if (!critical.count(i)) reduced.add_job_edge(j, i, edge_cap);
  }
  for (int i = 0; i < network.interval_count(); ++i)
    if (network.has_sink_edge(i) && !critical.count(i))
      reduced.add_sink_edge(i, network.sink_cap(i));
  return reduced;
}

// Full solve: rounds of run_round, fixing the schedule on critical intervals
// and reducing the network, until every interval has a rank. The result is
// optimal for every increasing strictly convex differentiable objective of
// the power profile; the solver itself never evaluates one.
inline FocsResult run_focs(const Instance& instance, const FocsOptions& options = {}) {
  AtomicPartition partition = build_partition(instance);
  if (auto bad = find_infeasible_job(instance))
    throw InfeasibleError(*bad, "job " + *bad + " cannot meet its demand within its window");

  const int n = instance.size();
  const int m = partition.interval_count();
  std::vector<Rat> source_caps;
  source_caps.reserve(static_cast<size_t>(n));
  for (const Job& job : instance.jobs()) source_caps.push_back(job.energy);
  std::map<int, Rat> sink_caps;
  for (int i = 0; i < m; ++i) sink_caps[i] = 0;  // overwritten at each round's first iteration
  FlowNetwork network = build_network(instance, partition, source_caps, sink_caps);

  std::set<int> active;
  for (int i = 0; i < m; ++i) active.insert(i);

  Schedule schedule(instance, partition);
  FocsResult result{std::move(schedule), {}, {}, std::vector<int>(static_cast<size_t>(m), 0), {}, {}, 0};

  const ScanOrder* order = options.order ? &*options.order : nullptr;
  int round = 1;
  while (!active.empty()) {
    if (round > m) throw std::logic_error("round bound exceeded");
    RoundOutcome outcome = run_round(std::move(network), active, partition, round, order);
    Flow restricted = restrict_flow(outcome.network, outcome.flow, outcome.critical);
    if (outcome.critical.empty())
      throw ProgressViolation("round " + std::to_string(round) + " produced no critical interval");

    for (int i : outcome.critical) {
      result.rank[static_cast<size_t>(i)] = round;
      active.erase(i);
      for (int j : partition.jobs_in(i)) result.schedule.set_energy(i, j, restricted.job_flow(j, i));
    }

    RoundRecord record{round,
                       std::vector<int>(outcome.critical.begin(), outcome.critical.end()),
                       restricted.source,
                       static_cast<int>(outcome.iterations.size()),
                       outcome.network,
                       outcome.flow,
                       outcome.parked};
    result.total_iterations += record.iterations;
    result.critical_sets.push_back(record.critical);
    if (options.keep_iteration_trace)
      result.iterations.insert(result.iterations.end(), outcome.iterations.begin(),
                               outcome.iterations.end());

    network = reduce_network(outcome.network, restricted, outcome.critical);
    result.rounds.push_back(std::move(record));
    ++round;
  }

  if (!result.schedule.is_complete())
    throw std::logic_error("internal error: final schedule does not meet all demands");
  result.profile = aggregate_power(result.schedule);
  return result;
}

// Round in which interval i became critical.
inline int rank_of(const FocsResult& result, int i) {
  int r = result.rank.at(static_cast<size_t>(i));
  if (r == 0) throw std::logic_error("interval without rank");
  return r;
}

// The summed restricted flows as one flow object, on a network whose sink
// capacities equal the final per-interval loads (every edge the flow uses is
// saturated there exactly when the schedule pins it).
inline std::pair<FlowNetwork, Flow> final_flow(const FocsResult& result) {
  const Instance& instance = result.schedule.instance();
  const AtomicPartition& partition = result.schedule.partition();
  std::vector<Rat> source_caps;
  for (const Job& job : instance.jobs()) source_caps.push_back(job.energy);
  std::map<int, Rat> sink_caps;
  for (int i = 0; i < partition.interval_count(); ++i) sink_caps[i] = result.schedule.column_total(i);
  FlowNetwork network = build_network(instance, partition, source_caps, sink_caps);

  Flow flow;
  flow.value = 0;
  flow.source.assign(static_cast<size_t>(instance.size()), Rat(0));
  flow.by_job.resize(static_cast<size_t>(instance.size()));
  flow.sink.assign(static_cast<size_t>(partition.interval_count()), Rat(0));
  for (int j = 0; j < instance.size(); ++j) {
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i)
      flow.by_job[static_cast<size_t>(j)][i] = result.schedule.energy(i, j);
    flow.source[static_cast<size_t>(j)] = result.schedule.charged(j);
    flow.value += flow.source[static_cast<size_t>(j)];
  }
  for (int i = 0; i < partition.interval_count(); ++i)
    flow.sink[static_cast<size_t>(i)] = result.schedule.column_total(i);
  return {std::move(network), std::move(flow)};
}

}  // namespace focs
