#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"

namespace focs {

class OracleTooLarge : public std::runtime_error {
 public:
  explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct OracleResult {
  Schedule schedule;
  Rat objective;
  PowerProfile profile;
  bool demands_rounded = false;
  unsigned long long candidates = 0;
};

// Ground truth by brute force: enumerate every schedule whose cells are
// multiples of `step`, evaluate the objective, keep the minimum. Deliberately
// shares no machinery with the flow solver. The candidate count is guarded;
// exceeding the guard throws instead of grinding.
inline OracleResult oracle_solve(const Instance& instance, const Objective& objective,
                                 const Rat& step, unsigned long long guard = 10'000'000ULL) {
  if (step <= 0) throw std::invalid_argument("oracle step must be positive");
  AtomicPartition partition = build_partition(instance);
  const int n = instance.size();
  const int m = partition.interval_count();

  bool rounded = false;
  std::vector<long long> units(static_cast<size_t>(n));
  std::vector<std::vector<long long>> caps(static_cast<size_t>(n));
  std::vector<std::vector<int>> intervals(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Rat exact_units = instance.job(j).energy / step;
    BigInt whole = numerator(exact_units) / denominator(exact_units);
    if (whole * denominator(exact_units) != numerator(exact_units)) {
      rounded = true;
      // nearest grid point, ties up
      whole = (numerator(exact_units) * 2 + denominator(exact_units)) / (denominator(exact_units) * 2);
    }
    if (whole > 1'000'000)
      throw OracleTooLarge("job " + instance.job(j).id + " needs " + whole.str() +
                           " grid units; refine the instance or coarsen the step");
    units[static_cast<size_t>(j)] = whole.convert_to<long long>();

    long long reachable = 0;
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i) {
      Rat cap = energy_cap(instance.job(j), partition, i) / step;
      BigInt floor_cap = numerator(cap) / denominator(cap);
      long long cap_units = floor_cap > 1'000'000 ? 1'000'000 : floor_cap.convert_to<long long>();
      intervals[static_cast<size_t>(j)].push_back(i);
      caps[static_cast<size_t>(j)].push_back(cap_units);
      reachable += cap_units;
    }
    if (reachable < units[static_cast<size_t>(j)])
      throw InfeasibleError(instance.job(j).id,
                            "job " + instance.job(j).id + " cannot place its demand on the grid");
  }

  // candidate count per job: compositions of the demand with per-interval caps
  unsigned long long total = 1;
  for (int j = 0; j < n; ++j) {
    std::vector<unsigned long long> ways(static_cast<size_t>(units[static_cast<size_t>(j)]) + 1, 0);
    ways[0] = 1;
    for (size_t pos = 0; pos < caps[static_cast<size_t>(j)].size(); ++pos) {
      std::vector<unsigned long long> next(ways.size(), 0);
      for (size_t have = 0; have < ways.size(); ++have) {
        if (ways[have] == 0) continue;
        long long cap = caps[static_cast<size_t>(j)][pos];
        for (long long add = 0; add <= cap && have + static_cast<size_t>(add) < next.size(); ++add) {
          unsigned long long& slot = next[have + static_cast<size_t>(add)];
          slot = slot > guard ? slot : slot + ways[have];
        }
      }
      ways = std::move(next);
    }
    unsigned long long count = ways.back();
    if (count == 0 || total > guard / (count ? count : 1))
      total = guard + 1;
    else
      total *= count;
    if (total > guard)
      throw OracleTooLarge("enumeration would exceed " + std::to_string(guard) + " candidates");
  }

  std::vector<Rat> column(static_cast<size_t>(m), Rat(0));
  std::vector<std::vector<long long>> assignment(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    assignment[static_cast<size_t>(j)].assign(intervals[static_cast<size_t>(j)].size(), 0);

  bool have_best = false;
  Rat best_value;
  std::vector<std::vector<long long>> best_assignment;
  unsigned long long visited = 0;

  std::function<void(int)> assign_job = [&](int j) {
    if (j == n) {
      ++visited;
      Rat value = 0;
      for (int i = 0; i < m; ++i)
        value += partition.length(i) *
                 rat_pow(column[static_cast<size_t>(i)] / partition.length(i), objective.alpha);
      if (!have_best || value < best_value) {
        have_best = true;
        best_value = std::move(value);
        best_assignment = assignment;
      }
      return;
    }
    const auto& slots = intervals[static_cast<size_t>(j)];
    std::function<void(size_t, long long)> place = [&](size_t pos, long long remaining) {
      int i = slots[pos];
      if (pos + 1 == slots.size()) {
        if (remaining <= caps[static_cast<size_t>(j)][pos]) {
          assignment[static_cast<size_t>(j)][pos] = remaining;
          column[static_cast<size_t>(i)] += remaining * step;
          assign_job(j + 1);
          column[static_cast<size_t>(i)] -= remaining * step;
        }
        return;
      }
      long long most = caps[static_cast<size_t>(j)][pos] < remaining
                           ? caps[static_cast<size_t>(j)][pos]
                           : remaining;
      for (long long take = 0; take <= most; ++take) {
        assignment[static_cast<size_t>(j)][pos] = take;
        column[static_cast<size_t>(i)] += take * step;
        place(pos + 1, remaining - take);
        column[static_cast<size_t>(i)] -= take * step;
      }
    };
    place(0, units[static_cast<size_t>(j)]);
  };
  assign_job(0);

  if (!have_best)
    throw InfeasibleError("", "no feasible grid schedule exists");

  Schedule best(instance, partition);
  for (int j = 0; j < n; ++j)
    for (size_t pos = 0; pos < intervals[static_cast<size_t>(j)].size(); ++pos)
      best.set_energy(intervals[static_cast<size_t>(j)][pos], j,
                      best_assignment[static_cast<size_t>(j)][pos] * step);

  OracleResult result{std::move(best), std::move(best_value), {}, rounded, visited};
  result.profile = aggregate_power(result.schedule);
  return result;
}

}  // namespace focs
