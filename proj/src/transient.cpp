#include "epibatch/transient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace epibatch {

namespace {

constexpr double kMaxPoissonMean = 64.0;  // per uniformization step
constexpr double kBoundaryTarget = 1e-10;

// One uniformization step over dt with a = Lambda*dt <= kMaxPoissonMean:
//   v exp(Q dt) = sum_j e^{-a} a^j/j! * v P^j,  P = I + Q/Lambda.
// Truncates when the Poisson tail is below tail_tol; returns the mass lost
// to series truncation (and, under the drop policy, through the boundary).
double uniformization_step(const TruncatedGenerator& gen, double lambda_rate,
                           double dt, double tail_tol, std::vector<double>& probs,
                           std::vector<double>& scratch_v,
                           std::vector<double>& scratch_w) {
  const double a = lambda_rate * dt;
  const std::int64_t n_states = gen.n_max() + 1;
  const double mass_in = std::accumulate(probs.begin(), probs.end(), 0.0);

  std::vector<double>& v = scratch_v;  // v P^j
  std::vector<double>& w = scratch_w;  // accumulated result
  v = probs;
  double weight = std::exp(-a);  // e^{-a} a^j / j!
  double cum = weight;
  w.assign(probs.size(), 0.0);
  for (std::int64_t i = 0; i < n_states; ++i) w[i] = weight * v[i];

  for (std::int64_t j = 1; 1.0 - cum >= tail_tol; ++j) {
    // v <- v P, computed as v + (v Q)/Lambda over the sparse rows.
    probs.assign(v.begin(), v.end());  // reuse probs as the matvec output
    for (std::int64_t row = 0; row < n_states; ++row) {
      const double vr = v[row];
      if (vr == 0.0) continue;
      probs[row] += vr * gen.diagonal(row) / lambda_rate;
      for (const auto& e : gen.off_diagonal(row)) {
        probs[e.col] += vr * e.rate / lambda_rate;
      }
    }
    v.swap(probs);
    weight *= a / static_cast<double>(j);
    cum += weight;
    for (std::int64_t i = 0; i < n_states; ++i) w[i] += weight * v[i];
    if (j > static_cast<std::int64_t>(a + 60.0 * std::sqrt(a + 1.0) + 200.0)) {
      throw NumericsError("uniformization series failed to reach its tolerance");
    }
  }
  probs = w;
  for (double& p : probs) p = std::max(p, 0.0);
  const double mass_out = std::accumulate(probs.begin(), probs.end(), 0.0);
  return std::max(mass_in - mass_out, 0.0);
}

}  // namespace

DistributionVector point_mass(std::int64_t state, std::int64_t n_max) {
  if (state < 0 || state > n_max) {
    throw ValidationError("point-mass state must lie in [0, n_max]");
  }
  DistributionVector dist;
  dist.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  dist.probs[static_cast<std::size_t>(state)] = 1.0;
  return dist;
}

DistributionVector transient_distribution(const TruncatedGenerator& gen,
                                          const DistributionVector& init, double t,
                                          double tol) {
  if (!(tol > 0.0) || tol > 1e-3) {
    throw ValidationError("invalid tolerance: must lie in (0, 1e-3]");
  }
  if (t < 0.0) throw ValidationError("t must be >= 0");
  if (init.probs.size() != static_cast<std::size_t>(gen.n_max()) + 1) {
    throw ValidationError("initial distribution dimension does not match n_max");
  }
  if (t == 0.0) return init;

  DistributionVector result = init;
  result.time = init.time + t;

  const double lambda_rate = gen.max_exit_rate();
  if (lambda_rate <= 0.0) return result;  // zero generator: nothing moves

  const int n_steps =
      std::max(1, static_cast<int>(std::ceil(lambda_rate * t / kMaxPoissonMean)));
  const double dt = t / n_steps;
  const double tail_tol = tol / n_steps;

  std::vector<double> scratch_v, scratch_w;
  for (int s = 0; s < n_steps; ++s) {
    result.mass_defect += uniformization_step(gen, lambda_rate, dt, tail_tol,
                                              result.probs, scratch_v, scratch_w);
  }
  // Probability parked at the truncation boundary is bias, not real mass.
  result.mass_defect += result.probs.back();

  // Truncation warning: non-negligible probability in the top 1% of states.
  const std::size_t n_states = result.probs.size();
  const std::size_t top = std::max<std::size_t>(1, n_states / 100);
  double top_mass = 0.0;
  for (std::size_t i = n_states - top; i < n_states; ++i) top_mass += result.probs[i];
  if (top_mass >= 1e-6) result.truncation_warning = true;

  return result;
}

double expected_active(const DistributionVector& dist) {
  double mean = 0.0;
  for (std::size_t n = 0; n < dist.probs.size(); ++n) {
    mean += static_cast<double>(n) * dist.probs[n];
  }
  return mean;
}

std::pair<double, double> mass_report(const DistributionVector& dist) {
  return {dist.mass_defect, dist.probs.empty() ? 0.0 : dist.probs.back()};
}

std::int64_t auto_truncation(std::int64_t k, int d, double lambda_event, double mu,
                             double tau, double horizon, BoundaryPolicy policy,
                             double tol) {
  std::int64_t n_max =
      std::max<std::int64_t>(4 * k * (static_cast<std::int64_t>(d) + 1), 1024);
  for (;;) {
    const TruncatedGenerator gen(lambda_event, mu, tau, d, n_max, policy);
    const auto dist =
        transient_distribution(gen, point_mass(k, n_max), horizon, tol);
    if (dist.probs.back() < kBoundaryTarget) return n_max;
    if (n_max > (std::int64_t{1} << 40)) {
      throw NumericsError("auto truncation grew past 2^40 states");
    }
    n_max *= 2;
  }
}

MeanEngine engine_from_string(const std::string& s) {
  if (s == "closed-form" || s == "closed_form") return MeanEngine::closed_form;
  if (s == "uniformization") return MeanEngine::uniformization;
  throw ValidationError("unknown engine '" + s +
                        "' (expected closed-form|uniformization)");
}

namespace {

struct Segment {
  double start_time;  // regime takes over at t = start_day - 2 (clamped to 0)
  const Regime* regime;
};

std::vector<Segment> schedule_segments(const RegimeSchedule& schedule) {
  std::vector<Segment> segments;
  segments.reserve(schedule.regimes.size());
  for (const auto& r : schedule.regimes) {
    const double start = std::max(0.0, static_cast<double>(r.start_day) - 2.0);
    segments.push_back({start, &r});
  }
  return segments;
}

bool same_dynamics(const Regime& a, const Regime& b) {
  return a.params.beta == b.params.beta && a.params.mu == b.params.mu &&
         a.params.tau == b.params.tau && a.params.convention == b.params.convention &&
         a.mixture == b.mixture;
}

// Closed-form per-group means: group i grows as exp((lambda_event*d_i - mu)*dt).
class ClosedFormState {
public:
  ClosedFormState(const Regime& regime, std::vector<double> values)
      : regime_(&regime), values_(std::move(values)),
        lambda_(event_rate(regime.params, regime.mixture)) {}

  std::vector<double> at(double dt) const {
    std::vector<double> out(values_.size());
    const auto& groups = regime_->mixture.groups();
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double g = lambda_ * groups[i].batch_size - regime_->params.mu;
      out[i] = values_[i] * std::exp(g * dt);
    }
    return out;
  }

  const Regime& regime() const { return *regime_; }

private:
  const Regime* regime_;
  std::vector<double> values_;
  double lambda_;
};

// Uniformization per-group state: independent truncated generators advanced
// through time; restarted from point masses after a regime switch.
class UniformizationState {
public:
  UniformizationState(const Regime& regime, const std::vector<std::int64_t>& counts,
                      const TransientOptions& options, double segment_horizon)
      : regime_(&regime) {
    const double lambda = event_rate(regime.params, regime.mixture);
    const auto& groups = regime.mixture.groups();
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const std::int64_t k_i = counts[i];
      const int d = groups[i].batch_size;
      std::int64_t n_max = options.n_max;
      if (n_max == 0) {
        n_max = auto_truncation(std::max<std::int64_t>(k_i, 1), d, lambda,
                                regime.params.mu, regime.params.tau,
                                std::max(segment_horizon, 1.0), options.policy,
                                options.tol);
      }
      gens_.emplace_back(lambda, regime.params.mu, regime.params.tau, d, n_max,
                         options.policy);
      dists_.push_back(point_mass(std::min(k_i, n_max), n_max));
    }
  }

  void advance(double dt, double tol) {
    if (dt <= 0.0) return;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      dists_[i] = transient_distribution(gens_[i], dists_[i], dt, tol);
    }
  }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(dists_.size());
    for (const auto& d : dists_) out.push_back(expected_active(d));
    return out;
  }

  double defect() const {
    double sum = 0.0;
    for (const auto& d : dists_) sum += d.mass_defect;
    return sum;
  }

  const Regime& regime() const { return *regime_; }

private:
  const Regime* regime_;
  std::vector<TruncatedGenerator> gens_;
  std::vector<DistributionVector> dists_;
};

}  // namespace

ExpectedTrajectory mean_trajectory(const RegimeSchedule& schedule,
                                   std::span<const double> grid, MeanEngine engine,
                                   const TransientOptions& options) {
  schedule.validate();
  if (grid.empty()) throw ValidationError("empty time grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw ValidationError("grid times must be >= 0");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw ValidationError("grid times must be strictly increasing");
    }
  }

  const auto segments = schedule_segments(schedule);
  std::size_t max_groups = 0;
  for (const auto& r : schedule.regimes) {
    max_groups = std::max(max_groups, r.mixture.size());
  }

  ExpectedTrajectory traj;
  traj.per_group.assign(max_groups, {});

  const auto emit = [&](double t, const std::vector<double>& values, double defect) {
    traj.times.push_back(t);
    double total = 0.0;
    for (double v : values) total += v;
    traj.values.push_back(total);
    for (std::size_t g = 0; g < max_groups; ++g) {
      traj.per_group[g].push_back(g < values.size() ? values[g] : 0.0);
    }
    traj.mass_defect.push_back(defect);
  };

  // Segment boundaries at which the population is pooled and re-split.
  // Boundaries between regimes with identical dynamics are skipped so the
  // composition is exactly the single-regime run.
  if (engine == MeanEngine::closed_form) {
    std::vector<double> values;
    {
      const auto& first = schedule.regimes.front();
      for (const auto& g : first.mixture.groups()) {
        values.push_back(g.weight * static_cast<double>(schedule.initial_count));
      }
    }
    ClosedFormState state(schedule.regimes.front(), values);
    double seg_start = 0.0;
    std::size_t seg = 0;
    for (double t : grid) {
      while (seg + 1 < segments.size() && segments[seg + 1].start_time < t) {
        const double boundary = segments[seg + 1].start_time;
        auto at_boundary = state.at(boundary - seg_start);
        const Regime& next = *segments[seg + 1].regime;
        if (same_dynamics(state.regime(), next)) {
          state = ClosedFormState(next, std::move(at_boundary));
        } else {
          double total = 0.0;
          for (double v : at_boundary) total += v;
          std::vector<double> resplit;
          for (const auto& g : next.mixture.groups()) {
            resplit.push_back(g.weight * total);
          }
          state = ClosedFormState(next, std::move(resplit));
        }
        seg_start = boundary;
        ++seg;
      }
      emit(t, state.at(t - seg_start), 0.0);
    }
  } else {
    const auto segment_horizon = [&](std::size_t seg) {
      const double start = segments[seg].start_time;
      const double end =
          seg + 1 < segments.size() ? segments[seg + 1].start_time : grid.back();
      return std::max(end, grid.back()) - start;
    };
    const auto initial = apportion_initial(schedule.initial_count,
                                           schedule.regimes.front().mixture);
    UniformizationState state(schedule.regimes.front(), initial.group_counts,
                              options, segment_horizon(0));
    double now = 0.0;
    std::size_t seg = 0;
    for (double t : grid) {
      while (seg + 1 < segments.size() && segments[seg + 1].start_time < t) {
        const double boundary = segments[seg + 1].start_time;
        state.advance(boundary - now, options.tol);
        now = boundary;
        const Regime& next = *segments[seg + 1].regime;
        if (!same_dynamics(state.regime(), next)) {
          const auto values = state.values();
          double total = 0.0;
          for (double v : values) total += v;
          std::vector<double> resplit;
          for (const auto& g : next.mixture.groups()) {
            resplit.push_back(g.weight * total);
          }
          const auto counts = largest_remainder_round(resplit);
          state = UniformizationState(next, counts, options,
                                      segment_horizon(seg + 1));
        }
        ++seg;
      }
      state.advance(t - now, options.tol);
      now = t;
      emit(t, state.values(), state.defect());
    }
  }
  return traj;
}

}  // namespace epibatch
