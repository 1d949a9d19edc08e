#ifndef EPIBATCH_SERIES_HPP
#define EPIBATCH_SERIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "epibatch/errors.hpp"

namespace epibatch {

struct DailyRow {
  std::string date;  // ISO-8601 calendar date
  std::int64_t confirmed = 0;        // cumulative
  std::int64_t new_confirmed = 0;    // daily (the n_i column)
  std::int64_t disappeared = 0;      // cumulative cured + dead
  std::int64_t new_disappeared = 0;  // daily (the c_i column)
  std::int64_t active = 0;           // N_i = confirmed - disappeared
};

// Validated daily case series. Strict construction enforces
//   active_i = confirmed_i - disappeared_i            for every row,
//   new_confirmed_i = confirmed_i - confirmed_{i-1}   for i >= 2 (ditto
//   disappeared), nonnegative counts, and dates advancing by exactly one
//   day. Lax construction records the violations as warnings instead.
class DailySeries {
public:
  explicit DailySeries(std::vector<DailyRow> rows, bool lax = false);

  std::size_t size() const { return rows_.size(); }
  const std::vector<DailyRow>& rows() const { return rows_; }
  const DailyRow& day(int day_1based) const;  // 1-based, throws on range error
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  std::vector<DailyRow> rows_;
  std::vector<std::string> warnings_;
};

// Inclusive 1-based day window into a series; its length is the m of the
// daily-ratio estimators.
struct EstimationWindow {
  int first_day = 1;
  int last_day = 1;

  int length() const { return last_day - first_day + 1; }
};

void validate_window(const EstimationWindow& window, std::size_t series_len);

// Days since 1970-01-01 for an ISO date; throws ValidationError on bad input.
std::int64_t parse_iso_date(const std::string& iso);
std::string format_iso_date(std::int64_t days_since_epoch);

}  // namespace epibatch

#endif
