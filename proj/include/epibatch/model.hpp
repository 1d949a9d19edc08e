#ifndef EPIBATCH_MODEL_HPP
#define EPIBATCH_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epibatch/errors.hpp"

namespace epibatch {

// How the reported per-patient daily rate `beta` maps onto the model's
// per-event infection rate. `event`: beta is the batch-event rate itself.
// `flow`: beta is the new-case flow lambda*d_eff, so the event rate is
// beta / d_eff.
enum class RateConvention { event, flow };

RateConvention convention_from_string(const std::string& s);
std::string to_string(RateConvention c);

struct RegimeParameters {
  double beta = 0.0;  // reported per-patient rate (daily mean of n_i/N_i)
  double mu = 0.0;    // per-patient disappearance rate per day
  double tau = 0.0;   // re-seeding rate out of the empty state, default 0
  RateConvention convention = RateConvention::flow;

  void validate() const;  // throws ValidationError
};

struct Group {
  int batch_size = 1;   // d: new cases per infection event
  double weight = 1.0;  // r: share of the population in this group
};

// An ordered set of batch-size groups with weights summing to 1. Batch sizes
// must be distinct; an all-zero-batch mixture must be requested explicitly.
class GroupMixture {
public:
  explicit GroupMixture(std::vector<Group> groups, bool allow_pure_decay = false);

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  bool pure_decay() const;

  bool operator==(const GroupMixture& other) const;

private:
  std::vector<Group> groups_;
};

struct Regime {
  int start_day = 1;  // 1-based observation day on which this regime takes over
  RegimeParameters params;
  GroupMixture mixture;
};

// Piecewise-constant model: regimes in order of strictly increasing start
// day, the first starting at day 1, plus the initial active count.
struct RegimeSchedule {
  std::int64_t initial_count = 1;  // k
  std::vector<Regime> regimes;

  void validate() const;
  const Regime& regime_at_day(int day) const;  // last regime with start_day <= day
};

struct PopulationState {
  std::vector<std::int64_t> group_counts;
  double time = 0.0;  // days since observation start

  std::int64_t total() const;
};

// Weighted average batch size of the mixture.
double effective_batch_size(const GroupMixture& mixture);

// Per-event infection rate implied by (beta, convention) for the mixture.
// Throws ValidationError under the flow convention when the effective batch
// size is zero and beta > 0 would have to flow through zero-sized batches.
double event_rate(const RegimeParameters& params, const GroupMixture& mixture);

// Integer apportionment of k over the mixture weights by largest remainder.
PopulationState apportion_initial(std::int64_t k, const GroupMixture& mixture);

// Largest-remainder rounding of nonnegative real shares: result sums to
// llround(sum of values), each entry within 1 of its input.
std::vector<std::int64_t> largest_remainder_round(std::span<const double> values);

// JSON parameter-file format:
//   { "k": int, "convention": "event"|"flow",
//     "regimes": [ { "start_day": int, "beta": num, "mu": num,
//                    "tau": num (optional), "groups": [ {"d": int, "r": num}, ... ] } ] }
RegimeSchedule schedule_from_json_text(const std::string& text);
std::string schedule_to_json_text(const RegimeSchedule& schedule);
RegimeSchedule load_schedule(const std::string& path);

}  // namespace epibatch

#endif
