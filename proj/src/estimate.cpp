#include "epibatch/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epibatch/transient.hpp"

namespace epibatch {

namespace {

double ratio_mean(const DailySeries& series, const EstimationWindow& window,
                  bool use_mu) {
  validate_window(window, series.size());
  double sum = 0.0;
  for (int day = window.first_day; day <= window.last_day; ++day) {
    const auto& row = series.day(day);
    if (row.active <= 0) {
      throw ValidationError("division by zero active count on day " +
                            std::to_string(day));
    }
    const std::int64_t numerator = use_mu ? row.new_disappeared : row.new_confirmed;
    sum += static_cast<double>(numerator) / static_cast<double>(row.active);
  }
  return sum / static_cast<double>(window.length());
}

}  // namespace

double estimate_beta(const DailySeries& series, const EstimationWindow& window) {
  return ratio_mean(series, window, false);
}

double estimate_mu(const DailySeries& series, const EstimationWindow& window) {
  return ratio_mean(series, window, true);
}

ParameterEstimate estimate_window(const DailySeries& series,
                                  const EstimationWindow& window) {
  validate_window(window, series.size());
  return ParameterEstimate{estimate_beta(series, window),
                           estimate_mu(series, window),
                           series.day(window.first_day).active, window};
}

std::pair<EstimationWindow, EstimationWindow> split_at_change_point(
    const DailySeries& series, int t_c) {
  const int m = static_cast<int>(series.size());
  if (t_c < 2 || t_c > m) {
    throw ValidationError("change point " + std::to_string(t_c) +
                          " outside [2, " + std::to_string(m) + "]");
  }
  return {EstimationWindow{1, t_c - 1}, EstimationWindow{t_c, m}};
}

std::optional<EstimationWindow> find_window_matching(const DailySeries& series,
                                                     double target, bool use_mu,
                                                     double tol) {
  const int m = static_cast<int>(series.size());
  std::optional<EstimationWindow> best;
  double best_diff = tol;
  for (int first = 1; first <= m; ++first) {
    for (int last = first; last <= m; ++last) {
      const EstimationWindow w{first, last};
      const double value = ratio_mean(series, w, use_mu);
      const double diff = std::abs(value - target);
      if (diff < best_diff) {
        best_diff = diff;
        best = w;
      }
    }
  }
  return best;
}

GroupMixture RegimeWeightFit::mixture() const {
  return GroupMixture({{pair.first, 1.0 - r2}, {pair.second, r2}},
                      /*allow_pure_decay=*/true);
}

namespace {

constexpr int kGridSteps = 1000;  // r2 grid 0, 0.001, ..., 1

struct Candidate {
  std::size_t pair_index;
  std::pair<int, int> pair;
  double r2;
};

std::vector<Candidate> candidate_grid(
    std::span<const std::pair<int, int>> candidate_pairs) {
  std::vector<Candidate> grid;
  grid.reserve(candidate_pairs.size() * (kGridSteps + 1));
  for (std::size_t p = 0; p < candidate_pairs.size(); ++p) {
    for (int i = 0; i <= kGridSteps; ++i) {
      grid.push_back({p, candidate_pairs[p], static_cast<double>(i) / kGridSteps});
    }
  }
  return grid;
}

// Candidate evaluated within one regime: per-day unit-shape values (the
// trajectory of a population of size 1 under the candidate mixture) so the
// cross-regime composition reduces to a scalar multiplier.
struct RegimeShapes {
  std::vector<double> at_days;  // shape at each grid offset within the regime
  double at_end = 1.0;          // shape at the regime's end boundary
  bool valid = true;
};

RegimeShapes regime_shapes(const Candidate& c, double beta, double mu,
                           RateConvention convention,
                           std::span<const double> offsets, double end_offset) {
  RegimeShapes shapes;
  const double w1 = 1.0 - c.r2;
  const double w2 = c.r2;
  const double d_eff = w1 * c.pair.first + w2 * c.pair.second;
  double lambda = 0.0;
  if (convention == RateConvention::event) {
    lambda = beta;
  } else if (d_eff > 0.0) {
    lambda = beta / d_eff;
  } else if (beta > 0.0) {
    shapes.valid = false;  // flow convention cannot push beta through d_eff = 0
    return shapes;
  }
  const double g1 = lambda * c.pair.first - mu;
  const double g2 = lambda * c.pair.second - mu;
  shapes.at_days.reserve(offsets.size());
  for (double dt : offsets) {
    shapes.at_days.push_back(w1 * std::exp(g1 * dt) + w2 * std::exp(g2 * dt));
  }
  shapes.at_end = w1 * std::exp(g1 * end_offset) + w2 * std::exp(g2 * end_offset);
  return shapes;
}

// Lexicographic tie-break: objective, then r2, then pair order (regime by
// regime for joint fits).
bool better(double obj, std::span<const Candidate* const> choice, double best_obj,
            std::span<const Candidate* const> best_choice) {
  if (obj != best_obj) return obj < best_obj;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i]->r2 != best_choice[i]->r2) return choice[i]->r2 < best_choice[i]->r2;
    if (choice[i]->pair_index != best_choice[i]->pair_index) {
      return choice[i]->pair_index < best_choice[i]->pair_index;
    }
  }
  return false;
}

}  // namespace

WeightFit fit_weights(const DailySeries& series,
                      std::span<const ParameterEstimate> estimates,
                      std::span<const std::pair<int, int>> candidate_pairs,
                      RateConvention convention) {
  if (estimates.empty()) throw ValidationError("fit_weights needs estimates");
  if (estimates.size() > 2) {
    throw ValidationError("joint weight fitting supports at most one change point");
  }
  if (candidate_pairs.empty()) throw ValidationError("no candidate pairs given");
  for (const auto& p : candidate_pairs) {
    if (p.first < 0 || p.second < 0 || p.first == p.second) {
      throw ValidationError("candidate pair batch sizes must be distinct and >= 0");
    }
  }

  const int m = static_cast<int>(series.size());
  const double k = static_cast<double>(series.day(1).active);
  const auto grid = candidate_grid(candidate_pairs);

  // Regime r covers days [start_r, start_{r+1} - 1]; in continuous time it
  // governs [start_r - 2, ...] so growth into day start_r is already the new
  // regime's. Day j sits at t = j - 1.
  std::vector<int> start_days;
  for (const auto& e : estimates) start_days.push_back(e.window.first_day);
  if (start_days.front() != 1) {
    throw ValidationError("first estimate window must start at day 1");
  }

  const auto relative_errors = [&](std::size_t regime, double scale,
                                   const RegimeShapes& shapes) {
    // Sum of squared relative errors over the regime's days.
    const int first = start_days[regime];
    const int last =
        regime + 1 < start_days.size() ? start_days[regime + 1] - 1 : m;
    double sum = 0.0;
    for (int day = first; day <= last; ++day) {
      const double observed = static_cast<double>(series.day(day).active);
      const double model =
          scale * shapes.at_days[static_cast<std::size_t>(day - first)];
      const double rel = (model - observed) / observed;
      sum += rel * rel;
    }
    return sum;
  };

  const auto shapes_for = [&](std::size_t regime, const Candidate& c) {
    const int first = start_days[regime];
    const int last = regime + 1 < start_days.size() ? start_days[regime + 1] - 1 : m;
    const double seg_start =
        regime == 0 ? 0.0 : static_cast<double>(start_days[regime]) - 2.0;
    std::vector<double> offsets;
    for (int day = first; day <= last; ++day) {
      offsets.push_back(static_cast<double>(day - 1) - seg_start);
    }
    const double end_offset =
        regime + 1 < start_days.size()
            ? (static_cast<double>(start_days[regime + 1]) - 2.0) - seg_start
            : 0.0;
    return regime_shapes(c, estimates[regime].beta_hat, estimates[regime].mu_hat,
                         convention, offsets, end_offset);
  };

  WeightFit fit;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<const Candidate*> best_choice;

  if (estimates.size() == 1) {
    std::vector<const Candidate*> choice(1);
    for (const auto& c : grid) {
      const auto shapes = shapes_for(0, c);
      if (!shapes.valid) continue;
      const double sum = relative_errors(0, k, shapes);
      if (!std::isfinite(sum)) continue;
      choice[0] = &c;
      if (best_choice.empty() || better(sum, choice, best_obj, best_choice)) {
        best_obj = sum;
        best_choice = choice;
      }
    }
  } else {
    // Joint search, factored: regime 1 contributes its error sum and the
    // pooled total at the boundary; regime 2's error is quadratic in that
    // total, so the cross terms collapse to three per-candidate scalars.
    struct PreEval {
      const Candidate* c;
      double err_sum;
      double pooled;  // k * shape at the boundary
    };
    struct PostEval {
      const Candidate* c;
      double sum_sq;     // sum over days of (shape/N)^2
      double sum_cross;  // sum over days of shape/N
      int n_days;
    };
    std::vector<PreEval> pre;
    for (const auto& c : grid) {
      const auto shapes = shapes_for(0, c);
      if (!shapes.valid) continue;
      const double err = relative_errors(0, k, shapes);
      if (!std::isfinite(err) || !std::isfinite(shapes.at_end)) continue;
      pre.push_back({&c, err, k * shapes.at_end});
    }
    std::vector<PostEval> post;
    const int first = start_days[1];
    for (const auto& c : grid) {
      const auto shapes = shapes_for(1, c);
      if (!shapes.valid) continue;
      PostEval pe{&c, 0.0, 0.0, 0};
      for (int day = first; day <= m; ++day) {
        const double observed = static_cast<double>(series.day(day).active);
        const double s =
            shapes.at_days[static_cast<std::size_t>(day - first)] / observed;
        pe.sum_sq += s * s;
        pe.sum_cross += s;
        ++pe.n_days;
      }
      if (!std::isfinite(pe.sum_sq)) continue;
      post.push_back(pe);
    }
    std::vector<const Candidate*> choice(2);
    for (const auto& p1 : pre) {
      for (const auto& p2 : post) {
        const double sum = p1.err_sum + p1.pooled * p1.pooled * p2.sum_sq -
                           2.0 * p1.pooled * p2.sum_cross +
                           static_cast<double>(p2.n_days);
        if (!std::isfinite(sum)) continue;
        choice[0] = p1.c;
        choice[1] = p2.c;
        if (best_choice.empty() || better(sum, choice, best_obj, best_choice)) {
          best_obj = sum;
          best_choice = choice;
        }
      }
    }
  }

  if (best_choice.empty()) {
    throw NumericsError("no admissible weight candidate for the given estimates");
  }
  fit.objective = std::sqrt(std::max(best_obj, 0.0) / static_cast<double>(m));
  for (const auto* c : best_choice) {
    fit.regimes.push_back({c->pair, c->r2});
  }
  return fit;
}

namespace {

// Squared relative error of the single-group piecewise exponential implied
// by the window estimates; t_c = 0 means no split.
double piecewise_error(const DailySeries& series, int t_c) {
  const int m = static_cast<int>(series.size());
  const double n1 = static_cast<double>(series.day(1).active);
  double g1, g2 = 0.0;
  if (t_c == 0) {
    const EstimationWindow full{1, m};
    g1 = estimate_beta(series, full) - estimate_mu(series, full);
  } else {
    const auto [pre, post] = split_at_change_point(series, t_c);
    g1 = estimate_beta(series, pre) - estimate_mu(series, pre);
    g2 = estimate_beta(series, post) - estimate_mu(series, post);
  }
  const double t_switch = t_c == 0 ? 0.0 : static_cast<double>(t_c) - 2.0;
  double sum = 0.0;
  for (int day = 1; day <= m; ++day) {
    const double t = static_cast<double>(day - 1);
    double model;
    if (t_c == 0 || t <= t_switch) {
      model = n1 * std::exp(g1 * t);
    } else {
      model = n1 * std::exp(g1 * t_switch) * std::exp(g2 * (t - t_switch));
    }
    const double observed = static_cast<double>(series.day(day).active);
    const double rel = (model - observed) / observed;
    sum += rel * rel;
  }
  return sum;
}

}  // namespace

std::optional<int> detect_change_point(const DailySeries& series) {
  const int m = static_cast<int>(series.size());
  if (m < 8) throw ValidationError("change-point scan needs at least 8 days");
  const double no_split = piecewise_error(series, 0);
  int best_tc = 0;
  double best = no_split;
  for (int t_c = 4; t_c <= m - 3; ++t_c) {
    const double err = piecewise_error(series, t_c);
    if (err < best) {
      best = err;
      best_tc = t_c;
    }
  }
  if (best_tc != 0 && best <= 0.85 * no_split) return best_tc;
  return std::nullopt;
}

}  // namespace epibatch
