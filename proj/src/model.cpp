#include "epibatch/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace epibatch {

namespace {

void require_finite_nonneg(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string(name) + " must be finite and nonnegative");
  }
}

}  // namespace

RateConvention convention_from_string(const std::string& s) {
  if (s == "event") return RateConvention::event;
  if (s == "flow") return RateConvention::flow;
  throw ValidationError("unknown rate convention '" + s + "' (expected event|flow)");
}

std::string to_string(RateConvention c) {
  return c == RateConvention::event ? "event" : "flow";
}

void RegimeParameters::validate() const {
  require_finite_nonneg(beta, "beta");
  require_finite_nonneg(mu, "mu");
  require_finite_nonneg(tau, "tau");
}

GroupMixture::GroupMixture(std::vector<Group> groups, bool allow_pure_decay)
    : groups_(std::move(groups)) {
  if (groups_.empty()) throw ValidationError("mixture needs at least one group");
  double weight_sum = 0.0;
  std::set<int> seen;
  bool any_positive_batch = false;
  for (const auto& g : groups_) {
    if (g.batch_size < 0) throw ValidationError("batch size must be >= 0");
    if (!std::isfinite(g.weight) || g.weight < 0.0 || g.weight > 1.0) {
      throw ValidationError("group weight must lie in [0, 1]");
    }
    if (!seen.insert(g.batch_size).second) {
      throw ValidationError("batch sizes within a mixture must be distinct");
    }
    weight_sum += g.weight;
    if (g.batch_size >= 1) any_positive_batch = true;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw ValidationError("mixture weights must sum to 1 (got " +
                          std::to_string(weight_sum) + ")");
  }
  if (!any_positive_batch && !allow_pure_decay) {
    throw ValidationError(
        "all batch sizes are 0; construct with allow_pure_decay for a "
        "pure-decay mixture");
  }
}

bool GroupMixture::pure_decay() const {
  return std::none_of(groups_.begin(), groups_.end(),
                      [](const Group& g) { return g.batch_size >= 1; });
}

bool GroupMixture::operator==(const GroupMixture& other) const {
  if (groups_.size() != other.groups_.size()) return false;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].batch_size != other.groups_[i].batch_size ||
        groups_[i].weight != other.groups_[i].weight) {
      return false;
    }
  }
  return true;
}

void RegimeSchedule::validate() const {
  if (initial_count < 1) throw ValidationError("initial count k must be >= 1");
  if (regimes.empty()) throw ValidationError("schedule needs at least one regime");
  if (regimes.front().start_day != 1) {
    throw ValidationError("first regime must start at day 1");
  }
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    regimes[i].params.validate();
    if (i > 0 && regimes[i].start_day <= regimes[i - 1].start_day) {
      throw ValidationError("regime start days must be strictly increasing");
    }
  }
}

const Regime& RegimeSchedule::regime_at_day(int day) const {
  if (regimes.empty()) throw ValidationError("empty schedule");
  const Regime* current = &regimes.front();
  for (const auto& r : regimes) {
    if (r.start_day <= day) current = &r;
  }
  return *current;
}

std::int64_t PopulationState::total() const {
  return std::accumulate(group_counts.begin(), group_counts.end(), std::int64_t{0});
}

double effective_batch_size(const GroupMixture& mixture) {
  double d_eff = 0.0;
  for (const auto& g : mixture.groups()) d_eff += g.weight * g.batch_size;
  return d_eff;
}

double event_rate(const RegimeParameters& params, const GroupMixture& mixture) {
  if (params.convention == RateConvention::event) return params.beta;
  const double d_eff = effective_batch_size(mixture);
  if (d_eff <= 0.0) {
    throw ValidationError("zero effective batch size under the flow convention");
  }
  return params.beta / d_eff;
}

std::vector<std::int64_t> largest_remainder_round(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("largest-remainder input must be finite and nonnegative");
    }
    sum += v;
  }
  const std::int64_t target = std::llround(sum);
  std::vector<std::int64_t> result(values.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  remainders.reserve(values.size());
  std::int64_t floored = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    result[i] = static_cast<std::int64_t>(std::floor(values[i]));
    floored += result[i];
    remainders.emplace_back(values[i] - static_cast<double>(result[i]), i);
  }
  std::int64_t missing = target - floored;
  // Largest fractional remainder first; index breaks ties deterministically.
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t i = 0; missing > 0 && i < remainders.size(); ++i, --missing) {
    ++result[remainders[i].second];
  }
  return result;
}

PopulationState apportion_initial(std::int64_t k, const GroupMixture& mixture) {
  if (k < 1) throw ValidationError("k must be >= 1");
  std::vector<double> shares;
  shares.reserve(mixture.size());
  for (const auto& g : mixture.groups()) {
    shares.push_back(g.weight * static_cast<double>(k));
  }
  return PopulationState{largest_remainder_round(shares), 0.0};
}

namespace {

RegimeSchedule schedule_from_json(const nlohmann::json& j) {
  RegimeSchedule schedule;
  if (!j.contains("k")) throw ValidationError("parameter file: missing 'k'");
  schedule.initial_count = j.at("k").get<std::int64_t>();
  RateConvention convention = RateConvention::flow;
  if (j.contains("convention")) {
    convention = convention_from_string(j.at("convention").get<std::string>());
  }
  if (!j.contains("regimes") || !j.at("regimes").is_array() || j.at("regimes").empty()) {
    throw ValidationError("parameter file: 'regimes' must be a non-empty array");
  }
  for (const auto& rj : j.at("regimes")) {
    std::vector<Group> groups;
    for (const auto& gj : rj.at("groups")) {
      groups.push_back({gj.at("d").get<int>(), gj.at("r").get<double>()});
    }
    Regime regime{
        rj.at("start_day").get<int>(),
        RegimeParameters{rj.at("beta").get<double>(), rj.at("mu").get<double>(),
                         rj.value("tau", 0.0), convention},
        GroupMixture(std::move(groups), /*allow_pure_decay=*/true)};
    schedule.regimes.push_back(std::move(regime));
  }
  schedule.validate();
  return schedule;
}

}  // namespace

RegimeSchedule schedule_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("parameter file is not valid JSON: ") + e.what());
  }
  try {
    return schedule_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("parameter file: ") + e.what());
  }
}

std::string schedule_to_json_text(const RegimeSchedule& schedule) {
  nlohmann::json j;
  j["k"] = schedule.initial_count;
  j["convention"] =
      to_string(schedule.regimes.front().params.convention);
  j["regimes"] = nlohmann::json::array();
  for (const auto& r : schedule.regimes) {
    nlohmann::json rj;
    rj["start_day"] = r.start_day;
    rj["beta"] = r.params.beta;
    rj["mu"] = r.params.mu;
    rj["tau"] = r.params.tau;
    rj["groups"] = nlohmann::json::array();
    for (const auto& g : r.mixture.groups()) {
      rj["groups"].push_back({{"d", g.batch_size}, {"r", g.weight}});
    }
    j["regimes"].push_back(std::move(rj));
  }
  return j.dump(2) + "\n";
}

RegimeSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open parameter file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_json_text(buf.str());
}

}  // namespace epibatch
