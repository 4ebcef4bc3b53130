#pragma once

#include <utility>
#include <vector>

#include "focs/focs.hpp"
#include "focs/generator.hpp"
#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"

namespace focs::test {

// Two jobs whose optimal profile differs from the limit-free flat one: the
// first is power-capped at 1, so the second has to spike the final hour.
inline Instance two_job_capped() {
  return Instance({{"ev1", Rat(0), Rat(2), Rat(2), Rat(1)},
                   {"ev2", Rat(1), Rat(2), Rat(2), Rat(2)}});
}

// Two jobs over three unit intervals; the middle interval is critical first,
// the flanks level out a round later.
inline Instance two_job_three_intervals() {
  return Instance({{"ev1", Rat(0), Rat(3), Rat(2), Rat(2)},
                   {"ev2", Rat(1), Rat(2), Rat(2), Rat(2)}});
}

inline Schedule make_schedule(const Instance& instance,
                              const std::vector<std::vector<Rat>>& cells_by_job) {
  AtomicPartition partition = build_partition(instance);
  Schedule schedule(instance, partition);
  for (int j = 0; j < instance.size(); ++j) {
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i) {
      const Rat& value = cells_by_job.at(static_cast<size_t>(j)).at(static_cast<size_t>(i - range.first));
      if (value != 0) schedule.set_energy(i, j, value);
    }
  }
  return schedule;
}

inline ScanOrder shuffled_order(int jobs, int intervals, SplitMix64& rng) {
  ScanOrder order = ScanOrder::identity(jobs, intervals);
  for (int j = jobs - 1; j > 0; --j)
    std::swap(order.job_rank[static_cast<size_t>(j)],
              order.job_rank[rng.below(static_cast<uint64_t>(j) + 1)]);
  for (int i = intervals - 1; i > 0; --i)
    std::swap(order.interval_rank[static_cast<size_t>(i)],
              order.interval_rank[rng.below(static_cast<uint64_t>(i) + 1)]);
  return order;
}

// Grid step fine enough to express every cell of the given schedules exactly.
inline Rat covering_grid_step(const std::vector<const Schedule*>& schedules) {
  BigInt common = 1;
  for (const Schedule* schedule : schedules) {
    const AtomicPartition& partition = schedule->partition();
    for (int j = 0; j < schedule->instance().size(); ++j) {
      common = lcm(common, denominator(schedule->instance().job(j).energy));
      const auto& range = partition.availability(j);
      for (int i = range.first; i <= range.second; ++i) {
        common = lcm(common, denominator(schedule->energy(i, j)));
        common = lcm(common, denominator(energy_cap(schedule->instance().job(j), partition, i)));
      }
    }
  }
  return Rat(1, common);
}

}  // namespace focs::test
