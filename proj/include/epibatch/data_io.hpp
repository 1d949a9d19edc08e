#ifndef EPIBATCH_DATA_IO_HPP
#define EPIBATCH_DATA_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epibatch/intervention.hpp"
#include "epibatch/series.hpp"
#include "epibatch/simulate.hpp"
#include "epibatch/transient.hpp"

namespace epibatch {

// CSV with the exact header
//   date,confirmed,new_confirmed,disappeared,new_disappeared,active
DailySeries parse_series_text(const std::string& text, bool lax = false);
DailySeries parse_series_file(const std::string& path, bool lax = false);
std::string series_to_csv(const DailySeries& series);
void write_series(const std::string& path, const DailySeries& series);

// JHU-style cumulative columns -> daily series. disappeared = deaths +
// recovered; new_* are first differences with the first row set to 0.
DailySeries from_cumulative(std::span<const std::int64_t> confirmed,
                            std::span<const std::int64_t> deaths,
                            std::span<const std::int64_t> recovered,
                            std::span<const std::string> dates);

// Trajectory CSV: t,total,group_0,...,mass_defect with 9 significant digits.
std::string trajectory_to_csv(const ExpectedTrajectory& traj);
void write_trajectory(const std::string& path, const ExpectedTrajectory& traj);

// Ensemble CSV: day,mean,var,p05,p95.
std::string ensemble_to_csv(const EnsembleSummary& summary);
void write_ensemble(const std::string& path, const EnsembleSummary& summary);

// Trace CSV: day,group_0,group_1,...
std::string trace_to_csv(const ReplicationTrace& trace);
void write_trace(const std::string& path, const ReplicationTrace& trace);

// Rho report CSV: day,rho_lambda,rho_d,rho_k.
std::string rho_report_to_csv(const ScenarioReport& report);
void write_rho_report(const std::string& path, const ScenarioReport& report);

// Single-scenario CSV: day,rho.
std::string rho_to_csv(const RhoCurve& curve);
void write_rho(const std::string& path, const RhoCurve& curve);

// Deterministic single-file SVG line chart.
struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              std::span<const ChartSeries> series);
void write_svg(const std::string& path, const std::string& svg);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace epibatch

#endif
