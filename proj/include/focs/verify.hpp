#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "focs/flow_network.hpp"
#include "focs/focs.hpp"
#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"

namespace focs {

// Work-transferability (definition level): some job charging in I_i could
// move energy to I_i' without hitting its power limit there.
inline bool work_transferable(const Schedule& schedule, int i, int i2) {
  if (i == i2) throw std::invalid_argument("work transferability needs distinct intervals");
  const AtomicPartition& partition = schedule.partition();
  for (int j : partition.jobs_in(i)) {
    if (!partition.available(j, i2)) continue;
    if (schedule.energy(i, j) > 0 &&
        schedule.energy(i2, j) < energy_cap(schedule.instance().job(j), partition, i2))
      return true;
  }
  return false;
}

inline std::vector<std::vector<bool>> work_transferable_steps(const Schedule& schedule) {
  const int m = schedule.partition().interval_count();
  std::vector<std::vector<bool>> step(static_cast<size_t>(m),
                                      std::vector<bool>(static_cast<size_t>(m), false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b) step[static_cast<size_t>(a)][static_cast<size_t>(b)] = work_transferable(schedule, a, b);
  return step;
}

inline std::vector<std::vector<bool>> work_transferable_closure(const Schedule& schedule) {
  const int m = schedule.partition().interval_count();
  auto step = work_transferable_steps(schedule);
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

// The schedule viewed as a flow: source edges carry each job's charged total,
// sink edges the per-interval loads, job edges the cells.
inline std::pair<FlowNetwork, Flow> schedule_flow(const Schedule& schedule) {
  const Instance& instance = schedule.instance();
  const AtomicPartition& partition = schedule.partition();
  std::vector<Rat> source_caps;
  for (int j = 0; j < instance.size(); ++j) source_caps.push_back(schedule.charged(j));
  std::map<int, Rat> sink_caps;
  for (int i = 0; i < partition.interval_count(); ++i) sink_caps[i] = schedule.column_total(i);
  FlowNetwork network = build_network(instance, partition, source_caps, sink_caps);

  Flow flow;
  flow.value = 0;
  flow.source = source_caps;
  flow.by_job.resize(static_cast<size_t>(instance.size()));
  flow.sink.assign(static_cast<size_t>(partition.interval_count()), Rat(0));
  for (int j = 0; j < instance.size(); ++j) {
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i)
      flow.by_job[static_cast<size_t>(j)][i] = schedule.energy(i, j);
    flow.value += flow.source[static_cast<size_t>(j)];
  }
  for (int i = 0; i < partition.interval_count(); ++i)
    flow.sink[static_cast<size_t>(i)] = schedule.column_total(i);
  return {std::move(network), std::move(flow)};
}

// Work-transferability in flows: the definition-level relation (and its
// transitive closure) must coincide with residual reachability between
// interval nodes, in both directions.
inline bool check_lemma1_equivalence(const Schedule& schedule) {
  auto [network, flow] = schedule_flow(schedule);
  return work_transferable_steps(schedule) == residual_interval_steps(network, flow) &&
         work_transferable_closure(schedule) == residual_interval_reachability(network, flow);
}

struct KktViolation {
  std::string condition;  // "KKT1", "KKT2" or "KKT3"
  int job = -1;
  int interval = -1;        // interval whose power is on the wrong side
  int other_interval = -1;  // interval it was compared against
  Rat power;
  Rat other_power;
};

// Per-job split of the availability range by cell value, plus the found
// violations. Zero/partial/full correspond to e = 0, 0 < e < e^max, e = e^max.
struct KktReport {
  bool pass = false;
  std::vector<KktViolation> violations;
  std::vector<std::vector<int>> zero_set;
  std::vector<std::vector<int>> partial_set;
  std::vector<std::vector<int>> full_set;
};

namespace detail {

struct RatCompare {
  Rat tolerance;  // 0 = exact

  Rat slack(const Rat& a, const Rat& b) const {
    Rat bound = 1;
    if (abs(a) > bound) bound = abs(a);
    if (abs(b) > bound) bound = abs(b);
    return tolerance * bound;
  }
  bool equal(const Rat& a, const Rat& b) const { return abs(a - b) <= slack(a, b); }
  bool greater_equal(const Rat& a, const Rat& b) const { return a >= b - slack(a, b); }
};

}  // namespace detail

// Necessary and sufficient optimality conditions for a complete schedule:
//   KKT1  intervals where j charges below its limit share one power level;
//   KKT2  intervals where j could charge but does not are at least as high
//         as every interval where j is charging;
//   KKT3  intervals where j charges at full power are at most as high as the
//         partial-power level.
// Exact rational comparisons by default; a relative tolerance can be supplied
// for externally produced floating-point schedules.
inline KktReport check_kkt(const Schedule& schedule, const Rat& tolerance = Rat(0)) {
  if (!schedule.is_complete())
    throw std::invalid_argument("KKT check requires a complete schedule");
  const Instance& instance = schedule.instance();
  const AtomicPartition& partition = schedule.partition();
  const detail::RatCompare cmp{tolerance};
  PowerProfile profile = aggregate_power(schedule);
  auto power = [&](int i) -> const Rat& { return profile.power.at(static_cast<size_t>(i)); };

  KktReport report;
  report.zero_set.resize(static_cast<size_t>(instance.size()));
  report.partial_set.resize(static_cast<size_t>(instance.size()));
  report.full_set.resize(static_cast<size_t>(instance.size()));

  for (int j = 0; j < instance.size(); ++j) {
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i) {
      const Rat& cell = schedule.energy(i, j);
      if (cell == 0)
        report.zero_set[static_cast<size_t>(j)].push_back(i);
      else if (cell == energy_cap(instance.job(j), partition, i))
        report.full_set[static_cast<size_t>(j)].push_back(i);
      else
        report.partial_set[static_cast<size_t>(j)].push_back(i);
    }

    const auto& zero = report.zero_set[static_cast<size_t>(j)];
    const auto& partial = report.partial_set[static_cast<size_t>(j)];
    const auto& full = report.full_set[static_cast<size_t>(j)];

    for (size_t k = 1; k < partial.size(); ++k)
      if (!cmp.equal(power(partial[k]), power(partial[0])))
        report.violations.push_back({"KKT1", j, partial[k], partial[0], power(partial[k]),
                                     power(partial[0])});

    for (int z : zero) {
      for (int c : partial)
        if (!cmp.greater_equal(power(z), power(c)))
          report.violations.push_back({"KKT2", j, z, c, power(z), power(c)});
      for (int c : full)
        if (!cmp.greater_equal(power(z), power(c)))
          report.violations.push_back({"KKT2", j, z, c, power(z), power(c)});
    }

    for (int f : full)
      for (int c : partial)
        if (!cmp.greater_equal(power(c), power(f)))
          report.violations.push_back({"KKT3", j, f, c, power(f), power(c)});
  }

  report.pass = report.violations.empty();
  return report;
}

// Multipliers recovered from a schedule: delta per job, gamma for the
// nonnegativity constraints, zeta for the power limits. `failures` lists the
// components that rule out a certificate when the schedule is not optimal.
struct DualCertificate {
  bool valid = false;
  std::vector<Rat> delta;
  std::vector<std::map<int, Rat>> gamma;
  std::vector<std::map<int, Rat>> zeta;
  std::vector<std::string> failures;
};

// delta_j = dF/de at the partial-power level (Eq. pattern: the derivative is
// alpha * p^(alpha-1)); gamma and zeta follow from stationarity with the
// complementary-slackness zeros filled in. For jobs with no partial interval
// the least delta satisfying the full-power rows is the max derivative there.
inline DualCertificate recover_duals(const Schedule& schedule, const Objective& objective) {
  if (!schedule.is_complete())
    throw std::invalid_argument("dual recovery requires a complete schedule");
  const Instance& instance = schedule.instance();
  const AtomicPartition& partition = schedule.partition();
  PowerProfile profile = aggregate_power(schedule);
  KktReport classes = check_kkt(schedule);  // reuse the cell classification

  auto derivative = [&](int i) {
    return Rat(objective.alpha) *
           rat_pow(profile.power.at(static_cast<size_t>(i)), objective.alpha - 1);
  };

  DualCertificate cert;
  cert.delta.assign(static_cast<size_t>(instance.size()), Rat(0));
  cert.gamma.resize(static_cast<size_t>(instance.size()));
  cert.zeta.resize(static_cast<size_t>(instance.size()));

  for (int j = 0; j < instance.size(); ++j) {
    const std::string& id = instance.job(j).id;
    const auto& zero = classes.zero_set[static_cast<size_t>(j)];
    const auto& partial = classes.partial_set[static_cast<size_t>(j)];
    const auto& full = classes.full_set[static_cast<size_t>(j)];

    Rat delta = 0;
    if (!partial.empty()) {
      delta = derivative(partial[0]);
      for (size_t k = 1; k < partial.size(); ++k)
        if (derivative(partial[k]) != delta)
          cert.failures.push_back("stationarity: job " + id +
                                  " has unequal derivatives across partial intervals " +
                                  std::to_string(partial[0] + 1) + " and " +
                                  std::to_string(partial[k] + 1));
    } else if (!full.empty()) {
      delta = derivative(full[0]);
      for (int i : full)
        if (derivative(i) > delta) delta = derivative(i);
    } else if (!zero.empty()) {
      delta = derivative(zero[0]);
      for (int i : zero)
        if (derivative(i) < delta) delta = derivative(i);
    }
    if (delta < 0)
      cert.failures.push_back("delta(" + id + ") = " + rat_to_string(delta) + " is negative");
    cert.delta[static_cast<size_t>(j)] = delta;

    for (int i : zero) {
      Rat gamma = derivative(i) - delta;
      if (gamma < 0)
        cert.failures.push_back("gamma(interval " + std::to_string(i + 1) + ", job " + id +
                                ") = " + rat_to_string(gamma) + " is negative");
      cert.gamma[static_cast<size_t>(j)].emplace(i, std::move(gamma));
      cert.zeta[static_cast<size_t>(j)].emplace(i, Rat(0));
    }
    for (int i : partial) {
      cert.gamma[static_cast<size_t>(j)].emplace(i, Rat(0));
      cert.zeta[static_cast<size_t>(j)].emplace(i, Rat(0));
    }
    for (int i : full) {
      Rat zeta = delta - derivative(i);
      if (zeta < 0)
        cert.failures.push_back("zeta(interval " + std::to_string(i + 1) + ", job " + id +
                                ") = " + rat_to_string(zeta) + " is negative");
      cert.gamma[static_cast<size_t>(j)].emplace(i, Rat(0));
      cert.zeta[static_cast<size_t>(j)].emplace(i, std::move(zeta));
    }
  }

  cert.valid = cert.failures.empty();
  return cert;
}

// Lemma check: powers strictly decrease with rank, across every pair of
// rounds.
inline bool check_monotonicity(const FocsResult& result) {
  const auto& sets = result.critical_sets;
  for (size_t a = 0; a < sets.size(); ++a)
    for (size_t b = a + 1; b < sets.size(); ++b)
      for (int i : sets[a])
        for (int i2 : sets[b])
          if (!(result.profile.power.at(static_cast<size_t>(i)) >
                result.profile.power.at(static_cast<size_t>(i2))))
            return false;
  return true;
}

// Lemma check: at the end of a round, no critical interval can shift work to
// any interval parked during that round.
inline bool check_isolation(const FlowNetwork& network, const Flow& round_flow,
                            const std::set<int>& critical, const std::set<int>& parked) {
  auto reach = residual_interval_reachability(network, round_flow);
  for (int c : critical)
    for (int p : parked)
      if (reach.at(static_cast<size_t>(c)).at(static_cast<size_t>(p))) return false;
  return true;
}

}  // namespace focs
