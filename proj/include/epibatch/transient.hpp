#ifndef EPIBATCH_TRANSIENT_HPP
#define EPIBATCH_TRANSIENT_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "epibatch/model.hpp"
#include "epibatch/qbd.hpp"

namespace epibatch {

struct DistributionVector {
  std::vector<double> probs;  // length n_max + 1
  double time = 0.0;
  double mass_defect = 0.0;  // series truncation + dropped/boundary mass bound
  bool truncation_warning = false;  // >= 1e-6 probability in the top 1% of states
};

// Point mass at `state` on {0, ..., n_max}.
DistributionVector point_mass(std::int64_t state, std::int64_t n_max);

// P(t) = init * exp(Q t) by uniformization. The Poisson series is truncated
// when its tail drops below `tol`; long horizons are split into steps with
// Lambda * dt <= 64. tol must lie in (0, 1e-3].
DistributionVector transient_distribution(const TruncatedGenerator& gen,
                                          const DistributionVector& init, double t,
                                          double tol = 1e-10);

// E[N] = sum_n n * p_n.
double expected_active(const DistributionVector& dist);

// (accumulated error bound, probability currently at the truncation boundary).
std::pair<double, double> mass_report(const DistributionVector& dist);

// Smallest truncation (starting at max(4k(d+1), 1024), doubling) whose
// boundary probability at the horizon stays below 1e-10.
std::int64_t auto_truncation(std::int64_t k, int d, double lambda_event, double mu,
                             double tau, double horizon, BoundaryPolicy policy,
                             double tol = 1e-10);

enum class MeanEngine { closed_form, uniformization };

MeanEngine engine_from_string(const std::string& s);

struct ExpectedTrajectory {
  std::vector<double> times;                   // days since observation start
  std::vector<double> values;                  // expected total active cases
  std::vector<std::vector<double>> per_group;  // [group][time], padded with 0
  std::vector<double> mass_defect;             // per time point (0 for closed form)
};

struct TransientOptions {
  double tol = 1e-10;
  std::int64_t n_max = 0;  // 0 = choose automatically per group
  BoundaryPolicy policy = BoundaryPolicy::redirect;
};

// Expected active cases on the given time grid. Grid times are days since
// the first observation day (day j of a series corresponds to t = j - 1);
// a regime starting at day s takes over at t = s - 2, so that growth into
// day s is governed by the new regime. At regime boundaries the total is
// pooled and re-split by the new mixture's weights: real-valued for the
// closed form, rounded by largest remainder for the uniformization engine's
// point-mass restarts. Identical adjacent regimes are continued unchanged.
ExpectedTrajectory mean_trajectory(const RegimeSchedule& schedule,
                                   std::span<const double> grid, MeanEngine engine,
                                   const TransientOptions& options = {});

}  // namespace epibatch

#endif
