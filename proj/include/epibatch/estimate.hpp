#ifndef EPIBATCH_ESTIMATE_HPP
#define EPIBATCH_ESTIMATE_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "epibatch/model.hpp"
#include "epibatch/series.hpp"

namespace epibatch {

struct ParameterEstimate {
  double beta_hat = 0.0;  // mean of new_confirmed_i / active_i over the window
  double mu_hat = 0.0;    // mean of new_disappeared_i / active_i
  std::int64_t k = 0;     // active count on the window's first day
  EstimationWindow window;
};

// Daily-ratio estimators: (1/m) * sum of new_* / same-day active over the
// window. Throws ValidationError when a window day has zero active cases.
double estimate_beta(const DailySeries& series, const EstimationWindow& window);
double estimate_mu(const DailySeries& series, const EstimationWindow& window);

ParameterEstimate estimate_window(const DailySeries& series,
                                  const EstimationWindow& window);

// Windows [1, t_c - 1] and [t_c, m].
std::pair<EstimationWindow, EstimationWindow> split_at_change_point(
    const DailySeries& series, int t_c);

// Exhaustive search for a window whose estimator value lands within tol of
// `target` (beta when use_mu is false). Used to diagnose windowing
// conventions when a reported value does not match the stated rule.
std::optional<EstimationWindow> find_window_matching(const DailySeries& series,
                                                     double target, bool use_mu,
                                                     double tol = 1e-5);

struct RegimeWeightFit {
  std::pair<int, int> pair;  // candidate (d1, d2)
  double r2 = 0.0;           // weight of the second batch size
  GroupMixture mixture() const;
};

struct WeightFit {
  double objective = 0.0;  // RMS relative error of the fitted trajectory
  std::vector<RegimeWeightFit> regimes;
};

// Deterministic grid search (step 0.001 in r2) over candidate batch-size
// pairs, jointly across regimes when a change point splits the series.
// The objective is the RMS relative error between the piecewise closed-form
// mean trajectory and the observed active counts. Ties break toward smaller
// r2, then toward the pair listed first. At most two regimes are supported.
WeightFit fit_weights(const DailySeries& series,
                      std::span<const ParameterEstimate> estimates,
                      std::span<const std::pair<int, int>> candidate_pairs,
                      RateConvention convention);

// Scan t_c in [4, m-3] with per-window single-group exponential fits;
// returns the split minimizing total squared relative error when it improves
// on the no-split fit by at least 15%.
std::optional<int> detect_change_point(const DailySeries& series);

}  // namespace epibatch

#endif
