#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "focs/instance.hpp"
#include "focs/rational.hpp"

namespace focs {

// Per-interval, per-job energy assignment. Cells are only meaningful for
// available (interval, job) pairs; setters enforce 0 <= e_{i,j} <= e^max.
// Completeness (every demand met exactly) is a queryable property, not a
// construction invariant, so partial and hand-built schedules can be
// represented and verified.
class Schedule {
 public:
  Schedule(Instance instance, AtomicPartition partition)
      : instance_(std::move(instance)),
        partition_(std::move(partition)),
        cells_(static_cast<size_t>(partition_.interval_count()),
               std::vector<Rat>(static_cast<size_t>(instance_.size()), Rat(0))) {}

  const Instance& instance() const { return instance_; }
  const AtomicPartition& partition() const { return partition_; }

  const Rat& energy(int i, int j) const {
    return cells_.at(static_cast<size_t>(i)).at(static_cast<size_t>(j));
  }

  void set_energy(int i, int j, Rat value) {
    const Job& job = instance_.job(j);
    if (!partition_.available(j, i))
      throw std::invalid_argument("job " + job.id + " is not available on interval " +
                                  std::to_string(i + 1));
    if (value < 0)
      throw std::invalid_argument("negative energy for job " + job.id + " on interval " +
                                  std::to_string(i + 1));
    Rat cap = energy_cap(job, partition_, i);
    if (value > cap)
      throw std::invalid_argument("energy " + rat_to_string(value) + " for job " + job.id +
                                  " on interval " + std::to_string(i + 1) +
                                  " exceeds limit " + rat_to_string(cap));
    cells_[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(value);
  }

  // Total energy assigned to job j.
  Rat charged(int j) const {
    Rat total = 0;
    for (int i = 0; i < partition_.interval_count(); ++i) total += energy(i, j);
    return total;
  }

  // Total energy placed in interval i across jobs.
  Rat column_total(int i) const {
    Rat total = 0;
    for (int j : partition_.jobs_in(i)) total += energy(i, j);
    return total;
  }

  // Every demand met with equality.
  bool is_complete() const {
    for (int j = 0; j < instance_.size(); ++j)
      if (charged(j) != instance_.job(j).energy) return false;
    return true;
  }

 private:
  Instance instance_;
  AtomicPartition partition_;
  std::vector<std::vector<Rat>> cells_;  // [interval][job]
};

struct PowerProfile {
  std::vector<Rat> power;            // aggregated power per interval
  std::vector<Rat> interval_length;  // |I_i|, kept for objective evaluation
};

inline PowerProfile aggregate_power(const Schedule& schedule) {
  const AtomicPartition& partition = schedule.partition();
  PowerProfile profile;
  profile.power.reserve(static_cast<size_t>(partition.interval_count()));
  profile.interval_length.reserve(static_cast<size_t>(partition.interval_count()));
  for (int i = 0; i < partition.interval_count(); ++i) {
    profile.power.push_back(schedule.column_total(i) / partition.length(i));
    profile.interval_length.push_back(partition.length(i));
  }
  return profile;
}

// Time-weighted power sum F = sum_i |I_i| * p_i^alpha. Integer alpha keeps
// evaluation exact; alpha >= 2 gives the strictly convex increasing family
// the solver is optimal for (alpha = 2 is the squared l2 norm).
struct Objective {
  int alpha = 2;
};

inline Rat objective_value(const PowerProfile& profile, const Objective& objective) {
  if (objective.alpha < 2)
    throw std::invalid_argument("objective exponent must be an integer >= 2");
  if (profile.power.size() != profile.interval_length.size())
    throw std::invalid_argument("power profile dimension mismatch");
  Rat total = 0;
  for (size_t i = 0; i < profile.power.size(); ++i)
    total += profile.interval_length[i] * rat_pow(profile.power[i], objective.alpha);
  return total;
}

}  // namespace focs
