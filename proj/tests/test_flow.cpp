#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "focs/flow_network.hpp"
#include "focs/generator.hpp"
#include "focs/instance.hpp"
#include "focs/verify.hpp"
#include "testutil.hpp"

using namespace focs;

namespace {

std::map<int, Rat> uniform_sink_caps(int m, const Rat& value) {
  std::map<int, Rat> caps;
  for (int i = 0; i < m; ++i) caps[i] = value;
  return caps;
}

// Exhaustive cut enumeration over subsets of inner nodes (source side).
Rat min_cut_by_enumeration(const FlowNetwork& network) {
  const int n = network.job_count();
  const int m = network.interval_count();
  Rat best;
  bool first = true;
  for (uint64_t mask = 0; mask < (uint64_t{1} << (n + m)); ++mask) {
    auto job_in = [&](int j) { return (mask >> j) & 1; };
    auto interval_in = [&](int i) { return (mask >> (n + i)) & 1; };
    Rat cut = 0;
    for (int j = 0; j < n; ++j)
      if (!job_in(j)) cut += network.source_cap(j);
    for (int j = 0; j < n; ++j)
      if (job_in(j))
        for (const auto& [i, cap] : network.job_edges(j))
          if (!interval_in(i)) cut += cap;
    for (int i = 0; i < m; ++i)
      if (interval_in(i) && network.has_sink_edge(i)) cut += network.sink_cap(i);
    if (first || cut < best) {
      best = cut;
      first = false;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("network construction from an instance") {
  Instance fig = test::two_job_three_intervals();
  AtomicPartition partition = build_partition(fig);
  FlowNetwork network =
      build_network(fig, partition, {Rat(2), Rat(2)}, uniform_sink_caps(3, Rat(4, 3)));

  CHECK(network.node_count() == 7);
  CHECK(network.edge_count() == 2 + 4 + 3);
  CHECK(network.job_cap(1, 1) == Rat(2));
  CHECK(network.sink_cap(1) == Rat(4, 3));
  CHECK(network.has_job_edge(0, 0));
  CHECK_FALSE(network.has_job_edge(1, 0));

  Instance capped = test::two_job_capped();
  AtomicPartition capped_partition = build_partition(capped);
  FlowNetwork capped_net =
      build_network(capped, capped_partition, {Rat(2), Rat(2)}, uniform_sink_caps(2, Rat(2)));
  CHECK(capped_net.job_cap(0, 0) == Rat(1));
  CHECK(capped_net.job_cap(0, 1) == Rat(1));
  CHECK(capped_net.job_cap(1, 1) == Rat(2));

  CHECK_THROWS_AS(build_network(fig, partition, {Rat(-1), Rat(2)}, {}), std::invalid_argument);
}

TEST_CASE("empty sink mask admits no flow") {
  Instance fig = test::two_job_three_intervals();
  AtomicPartition partition = build_partition(fig);
  FlowNetwork network = build_network(fig, partition, {Rat(2), Rat(2)}, {});
  CHECK(network.sink_intervals().empty());
  Flow flow = network.max_flow();
  CHECK(flow.value == Rat(0));
  CHECK(flow_is_valid(network, flow));
}

TEST_CASE("maximum flow on the three-interval iterations") {
  Instance fig = test::two_job_three_intervals();
  AtomicPartition partition = build_partition(fig);

  FlowNetwork first =
      build_network(fig, partition, {Rat(2), Rat(2)}, uniform_sink_caps(3, Rat(4, 3)));
  Flow flow = first.max_flow();
  CHECK(flow.value == Rat(10, 3));
  CHECK(flow_is_valid(first, flow));
  // canonical route: the wide job fills the first interval, overflow lands in
  // the third
  CHECK(flow.job_flow(0, 0) == Rat(4, 3));
  CHECK(flow.job_flow(0, 2) == Rat(2, 3));

  std::map<int, Rat> second_caps{{0, Rat(4, 3)}, {1, Rat(2)}, {2, Rat(4, 3)}};
  FlowNetwork second = build_network(fig, partition, {Rat(2), Rat(2)}, second_caps);
  Flow second_flow = second.max_flow();
  CHECK(second_flow.value == Rat(4));
  CHECK(flow_is_valid(second, second_flow));
}

TEST_CASE("saturation is an exact test") {
  Instance fig = test::two_job_three_intervals();
  AtomicPartition partition = build_partition(fig);
  FlowNetwork network =
      build_network(fig, partition, {Rat(2), Rat(2)}, uniform_sink_caps(3, Rat(4, 3)));
  Flow flow = network.max_flow();

  CHECK(is_saturated(network, flow, EdgeRef::interval_sink(1)));   // f = c = 4/3
  CHECK_FALSE(is_saturated(network, flow, EdgeRef::interval_sink(2)));
  CHECK(is_saturated(network, flow, EdgeRef::source(0)));

  FlowNetwork zero_cap(1, 1);
  zero_cap.add_job_edge(0, 0, Rat(1));
  zero_cap.add_sink_edge(0, Rat(0));
  Flow no_flow = zero_cap.max_flow();
  CHECK(no_flow.value == Rat(0));
  CHECK_FALSE(is_saturated(zero_cap, no_flow, EdgeRef::job_interval(0, 0)));  // 0 < 1
  CHECK(is_saturated(zero_cap, no_flow, EdgeRef::interval_sink(0)));          // 0 = 0

  CHECK_THROWS_AS(is_saturated(network, flow, EdgeRef::job_interval(1, 0)),
                  std::invalid_argument);
}

TEST_CASE("residual reachability between intervals") {
  Instance fig = test::two_job_three_intervals();

  Schedule best = test::make_schedule(fig, {{Rat(1), Rat(0), Rat(1)}, {Rat(2)}});
  auto [network, flow] = schedule_flow(best);
  auto reach = residual_interval_reachability(network, flow);
  CHECK(reach[0][2]);
  CHECK(reach[2][0]);
  CHECK(reach[0][1]);  // the wide job sits below its limit in the middle
  CHECK_FALSE(reach[1][0]);
  CHECK_FALSE(reach[1][2]);

  Schedule idle(fig, build_partition(fig));
  auto [idle_net, idle_flow] = schedule_flow(idle);
  auto idle_reach = residual_interval_reachability(idle_net, idle_flow);
  for (const auto& row : idle_reach)
    for (bool cell : row) CHECK_FALSE(cell);

  Instance capped = test::two_job_capped();
  Schedule forced = test::make_schedule(capped, {{Rat(1), Rat(1)}, {Rat(2)}});
  auto [forced_net, forced_flow] = schedule_flow(forced);
  auto forced_reach = residual_interval_reachability(forced_net, forced_flow);
  CHECK_FALSE(forced_reach[1][0]);
  CHECK_FALSE(forced_reach[0][1]);
}

TEST_CASE("subcritical intervals via residual closure") {
  Instance fig = test::two_job_three_intervals();
  AtomicPartition partition = build_partition(fig);
  std::set<int> all{0, 1, 2};

  FlowNetwork first =
      build_network(fig, partition, {Rat(2), Rat(2)}, uniform_sink_caps(3, Rat(4, 3)));
  Flow flow = first.max_flow();
  CHECK(subcritical_intervals(first, flow, all) == std::set<int>{0, 2});

  // feasible final iteration: everything saturated, nothing subcritical
  std::map<int, Rat> final_caps{{0, Rat(1)}, {2, Rat(1)}};
  Instance solo({{"ev1", Rat(0), Rat(3), Rat(2), Rat(2)}});
  // reuse the wide job alone on the reduced network shape
  FlowNetwork reduced(1, 3);
  reduced.set_source_cap(0, Rat(2));
  reduced.add_job_edge(0, 0, Rat(2));
  reduced.add_job_edge(0, 2, Rat(2));
  reduced.add_sink_edge(0, Rat(1));
  reduced.add_sink_edge(2, Rat(1));
  Flow reduced_flow = reduced.max_flow();
  CHECK(reduced_flow.value == Rat(2));
  CHECK(subcritical_intervals(reduced, reduced_flow, {0, 2}).empty());

  Instance capped = test::two_job_capped();
  AtomicPartition capped_partition = build_partition(capped);
  FlowNetwork capped_net =
      build_network(capped, capped_partition, {Rat(2), Rat(2)}, uniform_sink_caps(2, Rat(2)));
  Flow capped_flow = capped_net.max_flow();
  CHECK(capped_flow.sink[0] == Rat(1));
  CHECK(subcritical_intervals(capped_net, capped_flow, {0, 1}) == std::set<int>{0});
}

TEST_CASE("max flow equals min cut on random networks") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    GenParams params;
    params.jobs = 1 + static_cast<int>(seed % 4);
    params.horizon = 4;
    params.seed = seed * 13;
    Instance instance = generate_instance(params);
    AtomicPartition partition = build_partition(instance);

    SplitMix64 rng(seed);
    std::vector<Rat> source_caps;
    for (const Job& job : instance.jobs()) source_caps.push_back(job.energy);
    std::map<int, Rat> sink_caps;
    for (int i = 0; i < partition.interval_count(); ++i)
      if (rng.below(5) != 0)  // leave some intervals without a sink edge
        sink_caps[i] = Rat(static_cast<long long>(rng.below(9)), 4);

    FlowNetwork network = build_network(instance, partition, source_caps, sink_caps);
    Flow flow = network.max_flow();
    CHECK(flow_is_valid(network, flow));
    CHECK(flow.value == min_cut_by_enumeration(network));
  }
}

TEST_CASE("subcritical set does not depend on the solver's tie-breaking") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    GenParams params;
    params.jobs = 2 + static_cast<int>(seed % 4);
    params.seed = seed * 101;
    Instance instance = generate_instance(params);
    AtomicPartition partition = build_partition(instance);
    const int m = partition.interval_count();

    std::vector<Rat> source_caps;
    for (const Job& job : instance.jobs()) source_caps.push_back(job.energy);
    // a mid-iteration-like state: uniform caps at half the flat level
    Rat level = instance.total_energy() / (2 * Rat(partition.total_length(
                    [&] { std::set<int> all; for (int i = 0; i < m; ++i) all.insert(i); return all; }())));
    std::map<int, Rat> sink_caps;
    for (int i = 0; i < m; ++i) sink_caps[i] = level * partition.length(i);
    FlowNetwork network = build_network(instance, partition, source_caps, sink_caps);

    std::set<int> all;
    for (int i = 0; i < m; ++i) all.insert(i);
    std::set<int> canonical = subcritical_intervals(network, network.max_flow(), all);

    SplitMix64 rng(seed);
    for (int trial = 0; trial < 6; ++trial) {
      ScanOrder order = test::shuffled_order(instance.size(), m, rng);
      Flow flow = network.max_flow(order);
      CHECK(flow_is_valid(network, flow));
      CHECK(subcritical_intervals(network, flow, all) == canonical);
    }
  }
}
