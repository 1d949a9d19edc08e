#include "epibatch/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace epibatch {

void Scenario::validate() const {
  if (!std::isfinite(lambda_scale) || lambda_scale <= 0.0) {
    throw ValidationError("lambda_scale must be > 0");
  }
  if (batch_shift > 0) throw ValidationError("batch_shift must be <= 0");
  if (weight_override) {
    for (const auto& weights : *weight_override) {
      double sum = 0.0;
      for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
          throw ValidationError("override weights must be nonnegative");
        }
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("override weights must sum to 1");
      }
    }
  }
}

Scenario scenario_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario file is not valid JSON: ") + e.what());
  }
  Scenario s;
  try {
    s.lambda_scale = j.value("lambda_scale", 1.0);
    const std::string kt = j.value("k_transform", std::string("none"));
    if (kt == "none") {
      s.k_transform = KTransform::none;
    } else if (kt == "halve_ceiling") {
      s.k_transform = KTransform::halve_ceiling;
    } else {
      throw ValidationError("unknown k_transform '" + kt +
                            "' (expected none|halve_ceiling)");
    }
    s.batch_shift = j.value("batch_shift", 0);
    if (j.contains("weight_override") && !j.at("weight_override").is_null()) {
      s.weight_override = j.at("weight_override").get<std::vector<std::vector<double>>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario file: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

RegimeSchedule apply_scenario(const RegimeSchedule& baseline, const Scenario& s) {
  baseline.validate();
  s.validate();
  if (s.weight_override && s.weight_override->size() != baseline.regimes.size()) {
    throw ValidationError("weight_override must list one weight set per regime");
  }

  RegimeSchedule out;
  out.initial_count = baseline.initial_count;
  if (s.k_transform == KTransform::halve_ceiling) {
    out.initial_count = (baseline.initial_count + 1) / 2;  // ceil(k/2)
  }

  for (std::size_t ri = 0; ri < baseline.regimes.size(); ++ri) {
    const auto& regime = baseline.regimes[ri];
    // Resolve the per-event rate under the baseline's own convention first;
    // the scenario edit is then convention independent.
    const double lambda = event_rate(regime.params, regime.mixture) * s.lambda_scale;

    // Shift batch sizes with a floor at 0, merging any that collide.
    std::map<int, double> merged;
    const auto& groups = regime.mixture.groups();
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const int d = std::max(groups[gi].batch_size + s.batch_shift, 0);
      const double w = s.weight_override ? (*s.weight_override)[ri].at(gi)
                                         : groups[gi].weight;
      merged[d] += w;
    }
    std::vector<Group> shifted;
    shifted.reserve(merged.size());
    for (const auto& [d, w] : merged) shifted.push_back({d, w});

    out.regimes.push_back(
        Regime{regime.start_day,
               RegimeParameters{lambda, regime.params.mu, regime.params.tau,
                                RateConvention::event},
               GroupMixture(std::move(shifted), /*allow_pure_decay=*/true)});
  }
  return out;
}

RhoCurve rho_curve(const RegimeSchedule& baseline, const RegimeSchedule& scenario,
                   std::span<const double> grid, MeanEngine engine) {
  const auto base = mean_trajectory(baseline, grid, engine);
  const auto alt = mean_trajectory(scenario, grid, engine);
  RhoCurve curve;
  curve.times.assign(grid.begin(), grid.end());
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (alt.values[i] <= 0.0) {
      throw NumericsError("degenerate scenario: expectation vanished at t = " +
                          std::to_string(grid[i]));
    }
    curve.values[i] = base.values[i] / alt.values[i];
  }
  return curve;
}

ScenarioReport scenario_report(const RegimeSchedule& baseline,
                               std::span<const double> grid, MeanEngine engine) {
  Scenario lambda_half;
  lambda_half.lambda_scale = 0.5;
  Scenario d_shift;
  d_shift.batch_shift = -1;
  Scenario k_half;
  k_half.k_transform = KTransform::halve_ceiling;

  ScenarioReport report;
  report.times.assign(grid.begin(), grid.end());
  report.rho_lambda = rho_curve(baseline, apply_scenario(baseline, lambda_half),
                                grid, engine);
  report.rho_d = rho_curve(baseline, apply_scenario(baseline, d_shift), grid, engine);
  report.rho_k = rho_curve(baseline, apply_scenario(baseline, k_half), grid, engine);
  return report;
}

}  // namespace epibatch
