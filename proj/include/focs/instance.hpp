#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "focs/rational.hpp"

namespace focs {

// Raised when a demand cannot be met within its window. job_id() is empty for
// aggregate infeasibilities (e.g. no active interval left for residual demand).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(std::string job_id, const std::string& what)
      : std::runtime_error(what), job_id_(std::move(job_id)) {}
  const std::string& job_id() const { return job_id_; }

 private:
  std::string job_id_;
};

// Raised when an iteration can neither reach the demand nor park an interval.
class ProgressViolation : public std::runtime_error {
 public:
  explicit ProgressViolation(const std::string& what) : std::runtime_error(what) {}
};

// One charging session: energy demand inside [arrival, departure] drawn at
// most at power_limit. Zero-energy jobs are allowed.
struct Job {
  std::string id;
  Rat arrival;
  Rat departure;
  Rat energy;
  Rat power_limit;

  Rat window() const { return departure - arrival; }
};

class Instance {
 public:
  explicit Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
    if (jobs_.empty()) throw std::invalid_argument("instance has no jobs");
    std::set<std::string> seen;
    for (const Job& job : jobs_) {
      if (job.arrival >= job.departure)
        throw std::invalid_argument("job " + job.id + ": arrival must precede departure");
      if (job.energy < 0)
        throw std::invalid_argument("job " + job.id + ": negative energy demand");
      if (job.power_limit <= 0)
        throw std::invalid_argument("job " + job.id + ": power limit must be positive");
      if (!seen.insert(job.id).second)
        throw std::invalid_argument("duplicate job id " + job.id);
    }
  }

  int size() const { return static_cast<int>(jobs_.size()); }
  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(int j) const { return jobs_.at(static_cast<size_t>(j)); }

  int index_of(std::string_view id) const {
    for (int j = 0; j < size(); ++j)
      if (jobs_[static_cast<size_t>(j)].id == id) return j;
    return -1;
  }

  Rat total_energy() const {
    Rat total = 0;
    for (const Job& job : jobs_) total += job.energy;
    return total;
  }

 private:
  std::vector<Job> jobs_;
};

// Breakpoint-induced atomic intervals. Every arrival and departure is a
// breakpoint; job j is available on interval i iff the interval lies inside
// [a_j, d_j]. Availability per job is a contiguous index range.
class AtomicPartition {
 public:
  explicit AtomicPartition(const Instance& instance) {
    std::set<Rat> points;
    for (const Job& job : instance.jobs()) {
      points.insert(job.arrival);
      points.insert(job.departure);
    }
    breakpoints_.assign(points.begin(), points.end());
    const int m = static_cast<int>(breakpoints_.size()) - 1;
    lengths_.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
      lengths_.push_back(breakpoints_[static_cast<size_t>(i + 1)] - breakpoints_[static_cast<size_t>(i)]);

    jobs_in_.assign(static_cast<size_t>(m), {});
    range_.assign(static_cast<size_t>(instance.size()), {-1, -1});
    for (int j = 0; j < instance.size(); ++j) {
      const Job& job = instance.job(j);
      for (int i = 0; i < m; ++i) {
        if (job.arrival <= start(i) && end(i) <= job.departure) {
          jobs_in_[static_cast<size_t>(i)].push_back(j);
          auto& r = range_[static_cast<size_t>(j)];
          if (r.first < 0) r.first = i;
          r.second = i;
        }
      }
    }
  }

  int interval_count() const { return static_cast<int>(lengths_.size()); }
  const std::vector<Rat>& breakpoints() const { return breakpoints_; }
  const Rat& start(int i) const { return breakpoints_.at(static_cast<size_t>(i)); }
  const Rat& end(int i) const { return breakpoints_.at(static_cast<size_t>(i) + 1); }
  const Rat& length(int i) const { return lengths_.at(static_cast<size_t>(i)); }

  // J(i): jobs available on interval i, ascending job index.
  const std::vector<int>& jobs_in(int i) const { return jobs_in_.at(static_cast<size_t>(i)); }

  // J^{-1}(j) as an inclusive [first, last] index range.
  const std::pair<int, int>& availability(int j) const { return range_.at(static_cast<size_t>(j)); }

  bool available(int j, int i) const {
    const auto& r = availability(j);
    return r.first <= i && i <= r.second;
  }

  // L operator: combined length of a set of atomic intervals.
  Rat total_length(const std::set<int>& intervals) const {
    Rat total = 0;
    for (int i : intervals) total += length(i);
    return total;
  }

 private:
  std::vector<Rat> breakpoints_;
  std::vector<Rat> lengths_;
  std::vector<std::vector<int>> jobs_in_;
  std::vector<std::pair<int, int>> range_;
};

inline AtomicPartition build_partition(const Instance& instance) {
  return AtomicPartition(instance);
}

// e^max: the most energy job can draw within interval i.
inline Rat energy_cap(const Job& job, const AtomicPartition& partition, int i) {
  return job.power_limit * partition.length(i);
}

// Id of the first job whose demand exceeds power_limit * window, if any.
inline std::optional<std::string> find_infeasible_job(const Instance& instance) {
  for (const Job& job : instance.jobs())
    if (job.energy > job.power_limit * job.window()) return job.id;
  return std::nullopt;
}

inline bool check_feasibility(const Instance& instance) {
  return !find_infeasible_job(instance).has_value();
}

}  // namespace focs
