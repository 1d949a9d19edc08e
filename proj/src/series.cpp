#include "epibatch/series.hpp"

#include <chrono>
#include <cstdio>

namespace epibatch {

std::int64_t parse_iso_date(const std::string& iso) {
  int y = 0, m = 0, d = 0;
  char tail = '\0';
  if (std::sscanf(iso.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3) {
    throw ValidationError("invalid ISO-8601 date: '" + iso + "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ValidationError("invalid calendar date: '" + iso + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days_since_epoch) {
  const std::chrono::sys_days sd{std::chrono::days{days_since_epoch}};
  const std::chrono::year_month_day ymd{sd};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

DailySeries::DailySeries(std::vector<DailyRow> rows, bool lax)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("daily series must have at least one row");
  const auto flag = [&](const std::string& message) {
    if (lax) {
      warnings_.push_back(message);
    } else {
      throw ValidationError(message);
    }
  };
  std::int64_t prev_date = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    const std::string row_id = "row " + std::to_string(i + 1);
    const std::int64_t date = parse_iso_date(r.date);
    if (i > 0 && date != prev_date + 1) {
      flag(row_id + ": dates must advance by exactly one day");
    }
    prev_date = date;
    if (r.confirmed < 0 || r.new_confirmed < 0 || r.disappeared < 0 ||
        r.new_disappeared < 0 || r.active < 0) {
      flag(row_id + ": counts must be nonnegative");
    }
    if (r.confirmed - r.disappeared != r.active) {
      flag("active != confirmed - disappeared at " + row_id);
    }
    if (i > 0) {
      if (rows_[i].confirmed - rows_[i - 1].confirmed != r.new_confirmed) {
        flag(row_id + ": new_confirmed is not the confirmed difference");
      }
      if (rows_[i].disappeared - rows_[i - 1].disappeared != r.new_disappeared) {
        flag(row_id + ": new_disappeared is not the disappeared difference");
      }
    }
  }
}

const DailyRow& DailySeries::day(int day_1based) const {
  if (day_1based < 1 || static_cast<std::size_t>(day_1based) > rows_.size()) {
    throw ValidationError("day " + std::to_string(day_1based) +
                          " outside series of length " + std::to_string(rows_.size()));
  }
  return rows_[static_cast<std::size_t>(day_1based - 1)];
}

void validate_window(const EstimationWindow& window, std::size_t series_len) {
  if (window.first_day < 1 || window.last_day < window.first_day ||
      static_cast<std::size_t>(window.last_day) > series_len) {
    throw ValidationError("estimation window [" + std::to_string(window.first_day) +
                          ", " + std::to_string(window.last_day) +
                          "] invalid for series of length " +
                          std::to_string(series_len));
  }
}

}  // namespace epibatch
