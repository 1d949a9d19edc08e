#ifndef EPIBATCH_FIXTURES_HPP
#define EPIBATCH_FIXTURES_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epibatch/model.hpp"
#include "epibatch/series.hpp"

namespace epibatch {

// Published parameter values that accompany a fixture's regime.
struct ReportedRegime {
  int start_day = 1;
  double lambda_reported = 0.0;
  double mu_reported = 0.0;
  std::vector<Group> groups;
};

// One country's observed 20-day series together with the published
// parameters, weights, change point, and end-of-window active count.
struct CountryFixture {
  std::string key;   // e.g. "south-korea"
  std::string name;  // display name
  DailySeries series;
  std::int64_t initial_active = 0;  // k, first-day active count
  std::optional<int> change_point;  // t_c
  std::vector<ReportedRegime> regimes;
  std::int64_t final_active = 0;

  // Schedule built from the reported parameters and weights.
  RegimeSchedule schedule(RateConvention convention) const;
};

// Keys: new-york, india, egypt, south-korea, italy, mexico.
const CountryFixture& fixture(std::string_view key);
std::span<const CountryFixture> all_fixtures();

}  // namespace epibatch

#endif
