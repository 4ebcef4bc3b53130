#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "focs/instance.hpp"
#include "focs/rational.hpp"
#include "focs/schedule.hpp"

namespace focs {

// Deterministic across platforms, unlike the standard distributions.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
};

struct GenParams {
  int jobs = 5;
  long long horizon = 8;     // windows are integer subranges of [0, horizon]
  uint64_t seed = 1;
  int max_power_halves = 8;  // power limits drawn from {1/2, 1, ..., halves/2}
  int energy_grid = 4;       // energies are multiples of 1/energy_grid
};

// Random feasible instance: integer windows inside the horizon, power limits
// on a half-unit grid, energy at most power * window by construction.
inline Instance generate_instance(const GenParams& params) {
  if (params.jobs < 1) throw std::invalid_argument("need at least one job");
  if (params.horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (params.energy_grid < 1 || params.energy_grid % 2 != 0)
    throw std::invalid_argument("energy grid must be a positive even integer");

  SplitMix64 rng(params.seed);
  std::vector<Job> jobs;
  jobs.reserve(static_cast<size_t>(params.jobs));
  for (int j = 0; j < params.jobs; ++j) {
    long long arrival = static_cast<long long>(rng.below(static_cast<uint64_t>(params.horizon)));
    long long departure =
        arrival + 1 +
        static_cast<long long>(rng.below(static_cast<uint64_t>(params.horizon - arrival)));
    Rat power(1 + static_cast<long long>(rng.below(static_cast<uint64_t>(params.max_power_halves))), 2);
    Rat reach = power * Rat(departure - arrival) * params.energy_grid;  // integer: grid is even
    uint64_t max_units = numerator(reach).convert_to<uint64_t>();
    Rat energy(static_cast<long long>(rng.below(max_units + 1)), params.energy_grid);
    jobs.push_back({"ev" + std::to_string(j + 1), Rat(arrival), Rat(departure), std::move(energy),
                    std::move(power)});
  }
  return Instance(std::move(jobs));
}

// Independent cells on a 1/grid lattice within [0, e^max]; respects the
// nonnegativity and power-limit constraints but not completeness. Used for
// property tests over arbitrary (partial) schedules.
inline Schedule random_schedule(const Instance& instance, const AtomicPartition& partition,
                                SplitMix64& rng, int grid = 4) {
  Schedule schedule(instance, partition);
  for (int j = 0; j < instance.size(); ++j) {
    const auto& range = partition.availability(j);
    for (int i = range.first; i <= range.second; ++i) {
      Rat scaled = energy_cap(instance.job(j), partition, i) * grid;
      BigInt floor_units = numerator(scaled) / denominator(scaled);
      uint64_t bound = floor_units.convert_to<uint64_t>();
      schedule.set_energy(i, j, Rat(static_cast<long long>(rng.below(bound + 1)), grid));
    }
  }
  return schedule;
}

// Complete random schedule: every demand met exactly, cells on the grid.
// Requires demands and caps on the same grid (true for generated instances
// with grid a multiple of energy_grid and integer breakpoints).
inline Schedule random_complete_schedule(const Instance& instance,
                                         const AtomicPartition& partition, SplitMix64& rng,
                                         int grid = 4) {
  Schedule schedule(instance, partition);
  auto floor_units = [&](const Rat& value) {
    Rat scaled = value * grid;
    return (numerator(scaled) / denominator(scaled)).convert_to<long long>();
  };
  auto ceil_units = [&](const Rat& value) {
    Rat scaled = value * grid;
    BigInt q = numerator(scaled) / denominator(scaled);
    if (q * denominator(scaled) != numerator(scaled)) q += 1;
    return q.convert_to<long long>();
  };
  for (int j = 0; j < instance.size(); ++j) {
    const Job& job = instance.job(j);
    const auto& range = partition.availability(j);
    Rat remaining = job.energy;
    Rat caps_after = 0;
    for (int i = range.first; i <= range.second; ++i) caps_after += energy_cap(job, partition, i);
    for (int i = range.first; i <= range.second; ++i) {
      Rat cap = energy_cap(job, partition, i);
      caps_after -= cap;
      if (i == range.second) {
        schedule.set_energy(i, j, remaining);
        break;
      }
      Rat low = remaining - caps_after;
      if (low < 0) low = 0;
      Rat high = cap < remaining ? cap : remaining;
      long long lo = ceil_units(low), hi = floor_units(high);
      long long pick = lo + static_cast<long long>(rng.below(static_cast<uint64_t>(hi - lo + 1)));
      Rat cell(pick, grid);
      schedule.set_energy(i, j, cell);
      remaining -= cell;
    }
  }
  return schedule;
}

}  // namespace focs
