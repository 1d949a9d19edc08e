#ifndef EPIBATCH_SIMULATE_HPP
#define EPIBATCH_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "epibatch/model.hpp"

namespace epibatch {

struct SimulationConfig {
  RegimeSchedule schedule;
  int horizon_days = 20;   // daily grid t = 0..horizon_days
  int replications = 1;
  std::uint64_t seed = 0;
};

struct ReplicationTrace {
  // day_counts[t][g]: per-group counts at day t; groups follow the mixture
  // active at that time, padded with zeros up to the widest mixture.
  std::vector<std::vector<std::int64_t>> day_counts;
  bool extinct = false;  // total hit 0 at some point

  std::int64_t total_at(int day) const;
};

struct EnsembleSummary {
  std::vector<double> mean;      // per day
  std::vector<double> variance;  // per day, sample variance
  std::vector<double> p05;       // empirical 5% quantile
  std::vector<double> p95;       // empirical 95% quantile
  int replications = 0;
  std::uint64_t seed = 0;
};

// Deterministic per-replication seed derived from the ensemble seed.
std::uint64_t derive_seed(std::uint64_t master, int replication);

// Exact event-driven simulation. Waiting times are exponential in the total
// event rate; a boundary (day mark or regime switch) inside the waiting time
// advances the clock there and resamples, which is exact because the rates
// are piecewise constant and the exponential is memoryless. At a regime
// switch the pooled population is reassigned to the new groups by a
// multinomial draw on the new weights.
ReplicationTrace simulate_once(const RegimeSchedule& schedule, int horizon_days,
                               std::uint64_t seed);

// `replications` independent traces, replication j seeded from
// derive_seed(seed, j); daily mean/variance/quantile summary.
EnsembleSummary simulate_ensemble(const SimulationConfig& config);

}  // namespace epibatch

#endif
