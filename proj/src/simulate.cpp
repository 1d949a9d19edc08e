#include "epibatch/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "epibatch/errors.hpp"

namespace epibatch {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct SwitchPoint {
  double time;
  const Regime* regime;
};

std::vector<SwitchPoint> switch_points(const RegimeSchedule& schedule) {
  std::vector<SwitchPoint> pts;
  for (std::size_t i = 1; i < schedule.regimes.size(); ++i) {
    const auto& r = schedule.regimes[i];
    pts.push_back({std::max(0.0, static_cast<double>(r.start_day) - 2.0), &r});
  }
  return pts;
}

// Multinomial draw of `total` individuals over `weights` via sequential
// conditional binomials.
std::vector<std::int64_t> multinomial(std::mt19937_64& rng, std::int64_t total,
                                      const std::vector<double>& weights) {
  std::vector<std::int64_t> counts(weights.size(), 0);
  double remaining_weight = 1.0;
  std::int64_t remaining = total;
  for (std::size_t i = 0; i + 1 < weights.size() && remaining > 0; ++i) {
    const double p = std::clamp(weights[i] / remaining_weight, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> bin(remaining, p);
    const std::int64_t c = bin(rng);
    counts[i] = c;
    remaining -= c;
    remaining_weight -= weights[i];
    if (remaining_weight <= 0.0) break;
  }
  if (!counts.empty()) counts.back() += remaining;
  return counts;
}

}  // namespace

std::int64_t ReplicationTrace::total_at(int day) const {
  std::int64_t total = 0;
  for (std::int64_t c : day_counts[static_cast<std::size_t>(day)]) total += c;
  return total;
}

std::uint64_t derive_seed(std::uint64_t master, int replication) {
  return splitmix64(master +
                    0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(replication + 1));
}

ReplicationTrace simulate_once(const RegimeSchedule& schedule, int horizon_days,
                               std::uint64_t seed) {
  schedule.validate();
  if (horizon_days < 1) throw ValidationError("horizon must be >= 1 day");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t max_groups = 0;
  for (const auto& r : schedule.regimes) {
    max_groups = std::max(max_groups, r.mixture.size());
  }

  const Regime* regime = &schedule.regimes.front();
  double lambda = event_rate(regime->params, regime->mixture);
  auto counts = apportion_initial(schedule.initial_count, regime->mixture).group_counts;

  const auto switches = switch_points(schedule);
  std::size_t next_switch = 0;

  const auto apply_switch = [&](const Regime& next) {
    std::int64_t total = 0;
    for (std::int64_t c : counts) total += c;
    std::vector<double> weights;
    weights.reserve(next.mixture.size());
    for (const auto& g : next.mixture.groups()) weights.push_back(g.weight);
    counts = multinomial(rng, total, weights);
    regime = &next;
    lambda = event_rate(regime->params, regime->mixture);
  };

  ReplicationTrace trace;
  trace.day_counts.reserve(static_cast<std::size_t>(horizon_days) + 1);
  const auto record = [&]() {
    std::vector<std::int64_t> row(max_groups, 0);
    std::copy(counts.begin(), counts.end(), row.begin());
    trace.day_counts.push_back(std::move(row));
  };
  record();  // day 0

  // Per-group birth/death rates under the current regime; batch size 0
  // makes the birth a no-op, so its rate is excluded (an exact thinning).
  std::vector<double> birth_rate(max_groups), death_rate(max_groups);
  const auto refresh_rates = [&]() {
    const auto& groups = regime->mixture.groups();
    double total = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      birth_rate[i] = 0.0;
      death_rate[i] = 0.0;
      if (counts[i] > 0) {
        if (groups[i].batch_size >= 1) {
          birth_rate[i] = static_cast<double>(counts[i]) * lambda;
        }
        death_rate[i] = static_cast<double>(counts[i]) * regime->params.mu;
      } else if (regime->params.tau > 0.0 && groups[i].batch_size >= 1) {
        birth_rate[i] = regime->params.tau;  // re-seeding out of the empty state
      }
      total += birth_rate[i] + death_rate[i];
    }
    return total;
  };

  double t = 0.0;
  int next_day = 1;
  while (next_day <= horizon_days) {
    // A switch exactly at the current time applies after the day above was
    // recorded, so the recorded breakdown belongs to the old grouping.
    if (next_switch < switches.size() && switches[next_switch].time <= t) {
      apply_switch(*switches[next_switch].regime);
      ++next_switch;
      continue;
    }
    double boundary = static_cast<double>(next_day);
    bool is_switch = false;
    if (next_switch < switches.size() && switches[next_switch].time < boundary) {
      boundary = switches[next_switch].time;
      is_switch = true;
    }

    const double total_rate = refresh_rates();
    if (total_rate > 0.0) {
      const double wait = -std::log1p(-unit(rng)) / total_rate;
      if (t + wait < boundary) {
        t += wait;
        // Pick the group and the event type from the same rate table.
        const auto& groups = regime->mixture.groups();
        double u = unit(rng) * total_rate;
        bool done = false;
        for (std::size_t i = 0; i < groups.size() && !done; ++i) {
          if (u < birth_rate[i]) {
            if (counts[i] > std::numeric_limits<std::int64_t>::max() -
                                groups[i].batch_size) {
              throw NumericsError("population count overflow");
            }
            counts[i] += groups[i].batch_size;
            done = true;
          } else if (u < birth_rate[i] + death_rate[i]) {
            counts[i] -= 1;
            done = true;
          } else {
            u -= birth_rate[i] + death_rate[i];
          }
        }
        // Roundoff past the last group: treat as the last nonzero-rate event.
        if (!done) {
          for (std::size_t i = groups.size(); i-- > 0;) {
            if (death_rate[i] > 0.0) {
              counts[i] -= 1;
              break;
            }
            if (birth_rate[i] > 0.0) {
              counts[i] += groups[i].batch_size;
              break;
            }
          }
        }
        continue;
      }
    }
    // No event before the boundary (memoryless: resample after it).
    t = boundary;
    if (is_switch) {
      apply_switch(*switches[next_switch].regime);
      ++next_switch;
    } else {
      record();
      ++next_day;
    }
  }

  for (const auto& row : trace.day_counts) {
    std::int64_t total = 0;
    for (std::int64_t c : row) total += c;
    if (total == 0) trace.extinct = true;
  }
  return trace;
}

EnsembleSummary simulate_ensemble(const SimulationConfig& config) {
  if (config.replications < 1) throw ValidationError("replications must be >= 1");
  const int days = config.horizon_days;
  const std::size_t n_days = static_cast<std::size_t>(days) + 1;
  const std::size_t reps = static_cast<std::size_t>(config.replications);

  // totals[day][rep]
  std::vector<std::vector<double>> totals(n_days, std::vector<double>(reps));
  for (std::size_t j = 0; j < reps; ++j) {
    const auto trace = simulate_once(config.schedule, days,
                                     derive_seed(config.seed, static_cast<int>(j)));
    for (std::size_t day = 0; day < n_days; ++day) {
      totals[day][j] = static_cast<double>(trace.total_at(static_cast<int>(day)));
    }
  }

  EnsembleSummary summary;
  summary.replications = config.replications;
  summary.seed = config.seed;
  summary.mean.resize(n_days);
  summary.variance.resize(n_days);
  summary.p05.resize(n_days);
  summary.p95.resize(n_days);
  for (std::size_t day = 0; day < n_days; ++day) {
    auto& xs = totals[day];
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = reps > 1 ? var / static_cast<double>(reps - 1) : 0.0;
    std::sort(xs.begin(), xs.end());
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(reps - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, reps - 1);
      const double frac = pos - static_cast<double>(lo);
      return xs[lo] * (1.0 - frac) + xs[hi] * frac;
    };
    summary.mean[day] = mean;
    summary.variance[day] = var;
    summary.p05[day] = quantile(0.05);
    summary.p95[day] = quantile(0.95);
  }
  return summary;
}

}  // namespace epibatch
