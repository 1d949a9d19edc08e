#ifndef EPIBATCH_INTERVENTION_HPP
#define EPIBATCH_INTERVENTION_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epibatch/model.hpp"
#include "epibatch/transient.hpp"

namespace epibatch {

enum class KTransform { none, halve_ceiling };

// Parameter edits standing in for non-drug interventions. lambda_scale
// multiplies the per-event rate; batch_shift (<= 0) lowers every batch size
// with a floor at 0; halve_ceiling replaces k by ceil(k/2). mu is never
// touched.
struct Scenario {
  double lambda_scale = 1.0;
  KTransform k_transform = KTransform::none;
  int batch_shift = 0;
  // Optional per-regime weight replacement, aligned with the schedule.
  std::optional<std::vector<std::vector<double>>> weight_override;

  void validate() const;
};

Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Resolves each regime's per-event rate first (so the edit is convention
// independent), then applies the scenario. The result is expressed in the
// event convention. Groups whose shifted batch sizes collide are merged.
RegimeSchedule apply_scenario(const RegimeSchedule& baseline, const Scenario& s);

struct RhoCurve {
  std::vector<double> times;
  std::vector<double> values;  // E[N_baseline(t)] / E[N_scenario(t)]
};

// Pointwise ratio of the two mean trajectories. Throws NumericsError when
// the scenario expectation vanishes at a grid point.
RhoCurve rho_curve(const RegimeSchedule& baseline, const RegimeSchedule& scenario,
                   std::span<const double> grid,
                   MeanEngine engine = MeanEngine::closed_form);

struct ScenarioReport {
  std::vector<double> times;
  RhoCurve rho_lambda;  // lambda_scale = 1/2
  RhoCurve rho_d;       // batch_shift = -1
  RhoCurve rho_k;       // k -> ceil(k/2)
};

ScenarioReport scenario_report(const RegimeSchedule& baseline,
                               std::span<const double> grid,
                               MeanEngine engine = MeanEngine::closed_form);

}  // namespace epibatch

#endif
