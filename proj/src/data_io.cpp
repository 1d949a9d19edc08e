#include "epibatch/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace epibatch {

namespace {

constexpr const char* kSeriesHeader =
    "date,confirmed,new_confirmed,disappeared,new_disappeared,active";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t parse_count(const std::string& cell, std::size_t row, const char* col) {
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(cell, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != cell.size() || cell.empty()) {
    throw ValidationError("row " + std::to_string(row) + ": column '" + col +
                          "' is not an integer: '" + cell + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

DailySeries parse_series_text(const std::string& text, bool lax) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty series file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSeriesHeader) {
    throw ValidationError("header mismatch: expected '" + std::string(kSeriesHeader) +
                          "', got '" + line + "'");
  }
  std::vector<DailyRow> rows;
  std::size_t row_number = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_number;
    const auto cells = split_csv_line(line);
    if (cells.size() != 6) {
      throw ValidationError("row " + std::to_string(row_number) +
                            ": expected 6 columns, got " +
                            std::to_string(cells.size()));
    }
    DailyRow row;
    row.date = cells[0];
    row.confirmed = parse_count(cells[1], row_number, "confirmed");
    row.new_confirmed = parse_count(cells[2], row_number, "new_confirmed");
    row.disappeared = parse_count(cells[3], row_number, "disappeared");
    row.new_disappeared = parse_count(cells[4], row_number, "new_disappeared");
    row.active = parse_count(cells[5], row_number, "active");
    rows.push_back(std::move(row));
  }
  return DailySeries(std::move(rows), lax);
}

DailySeries parse_series_file(const std::string& path, bool lax) {
  return parse_series_text(read_text_file(path), lax);
}

std::string series_to_csv(const DailySeries& series) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& r : series.rows()) {
    out += r.date;
    out += ',' + std::to_string(r.confirmed);
    out += ',' + std::to_string(r.new_confirmed);
    out += ',' + std::to_string(r.disappeared);
    out += ',' + std::to_string(r.new_disappeared);
    out += ',' + std::to_string(r.active);
    out += '\n';
  }
  return out;
}

void write_series(const std::string& path, const DailySeries& series) {
  write_text_file(path, series_to_csv(series));
}

DailySeries from_cumulative(std::span<const std::int64_t> confirmed,
                            std::span<const std::int64_t> deaths,
                            std::span<const std::int64_t> recovered,
                            std::span<const std::string> dates) {
  const std::size_t n = confirmed.size();
  if (n < 2 || deaths.size() != n || recovered.size() != n || dates.size() != n) {
    throw ValidationError("cumulative inputs need equal lengths >= 2");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (confirmed[i] < confirmed[i - 1] || deaths[i] < deaths[i - 1] ||
        recovered[i] < recovered[i - 1]) {
      throw ValidationError("non-monotone cumulative series at row " +
                            std::to_string(i + 1));
    }
  }
  std::vector<DailyRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].date = dates[i];
    rows[i].confirmed = confirmed[i];
    rows[i].disappeared = deaths[i] + recovered[i];
    rows[i].active = rows[i].confirmed - rows[i].disappeared;
    if (i == 0) {
      rows[i].new_confirmed = 0;
      rows[i].new_disappeared = 0;
    } else {
      rows[i].new_confirmed = rows[i].confirmed - rows[i - 1].confirmed;
      rows[i].new_disappeared = rows[i].disappeared - rows[i - 1].disappeared;
    }
  }
  return DailySeries(std::move(rows));
}

std::string trajectory_to_csv(const ExpectedTrajectory& traj) {
  std::string out = "t,total";
  for (std::size_t g = 0; g < traj.per_group.size(); ++g) {
    out += ",group_" + std::to_string(g);
  }
  out += ",mass_defect\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out += format_double(traj.times[i]);
    out += ',' + format_double(traj.values[i]);
    for (const auto& group : traj.per_group) {
      out += ',' + format_double(group[i]);
    }
    out += ',' + format_double(traj.mass_defect[i]);
    out += '\n';
  }
  return out;
}

void write_trajectory(const std::string& path, const ExpectedTrajectory& traj) {
  write_text_file(path, trajectory_to_csv(traj));
}

std::string ensemble_to_csv(const EnsembleSummary& summary) {
  std::string out = "day,mean,var,p05,p95\n";
  for (std::size_t day = 0; day < summary.mean.size(); ++day) {
    out += std::to_string(day);
    out += ',' + format_double(summary.mean[day]);
    out += ',' + format_double(summary.variance[day]);
    out += ',' + format_double(summary.p05[day]);
    out += ',' + format_double(summary.p95[day]);
    out += '\n';
  }
  return out;
}

void write_ensemble(const std::string& path, const EnsembleSummary& summary) {
  write_text_file(path, ensemble_to_csv(summary));
}

std::string trace_to_csv(const ReplicationTrace& trace) {
  std::string out = "day";
  const std::size_t groups = trace.day_counts.empty() ? 0 : trace.day_counts[0].size();
  for (std::size_t g = 0; g < groups; ++g) out += ",group_" + std::to_string(g);
  out += '\n';
  for (std::size_t day = 0; day < trace.day_counts.size(); ++day) {
    out += std::to_string(day);
    for (std::int64_t c : trace.day_counts[day]) out += ',' + std::to_string(c);
    out += '\n';
  }
  return out;
}

void write_trace(const std::string& path, const ReplicationTrace& trace) {
  write_text_file(path, trace_to_csv(trace));
}

std::string rho_report_to_csv(const ScenarioReport& report) {
  std::string out = "day,rho_lambda,rho_d,rho_k\n";
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    out += format_double(report.times[i]);
    out += ',' + format_double(report.rho_lambda.values[i]);
    out += ',' + format_double(report.rho_d.values[i]);
    out += ',' + format_double(report.rho_k.values[i]);
    out += '\n';
  }
  return out;
}

void write_rho_report(const std::string& path, const ScenarioReport& report) {
  write_text_file(path, rho_report_to_csv(report));
}

std::string rho_to_csv(const RhoCurve& curve) {
  std::string out = "day,rho\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out += format_double(curve.times[i]);
    out += ',' + format_double(curve.values[i]);
    out += '\n';
  }
  return out;
}

void write_rho(const std::string& path, const RhoCurve& curve) {
  write_text_file(path, rho_to_csv(curve));
}

namespace {

struct AxisScale {
  double min = 0.0, max = 1.0;

  double unit(double v) const {
    return max > min ? (v - min) / (max - min) : 0.5;
  }
};

AxisScale fit_axis(std::span<const ChartSeries> series, bool y_axis) {
  AxisScale scale;
  bool first = true;
  for (const auto& s : series) {
    const auto& vals = y_axis ? s.y : s.x;
    for (double v : vals) {
      if (!std::isfinite(v)) continue;
      if (first) {
        scale.min = scale.max = v;
        first = false;
      } else {
        scale.min = std::min(scale.min, v);
        scale.max = std::max(scale.max, v);
      }
    }
  }
  if (y_axis) {
    const double pad = (scale.max - scale.min) * 0.05;
    scale.min -= pad;
    scale.max += pad;
    if (scale.min > 0.0 && scale.min < 0.3 * scale.max) scale.min = 0.0;
  }
  if (scale.max == scale.min) scale.max = scale.min + 1.0;
  return scale;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              std::span<const ChartSeries> series) {
  if (series.empty()) throw ValidationError("chart needs at least one series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw ValidationError("chart series '" + s.label + "' is empty or ragged");
    }
  }
  constexpr double W = 800, H = 500;
  constexpr double L = 80, R = 30, T = 50, B = 60;  // margins
  const AxisScale xs = fit_axis(series, false);
  const AxisScale ys = fit_axis(series, true);
  const auto px = [&](double x) { return L + xs.unit(x) * (W - L - R); };
  const auto py = [&](double y) { return H - B - ys.unit(y) * (H - T - B); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"18\">" << title << "</text>\n";

  // axes
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << x_label << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (T + H - B) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      << "transform=\"rotate(-90 20 " << (T + H - B) / 2 << ")\">" << y_label
      << "</text>\n";

  // ticks
  for (int i = 0; i <= 5; ++i) {
    const double fx = xs.min + (xs.max - xs.min) * i / 5.0;
    const double fy = ys.min + (ys.max - ys.min) * i / 5.0;
    char buf[40];
    svg << "<line x1=\"" << px(fx) << "\" y1=\"" << H - B << "\" x2=\"" << px(fx)
        << "\" y2=\"" << H - B + 5 << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", fx);
    svg << "<text x=\"" << px(fx) << "\" y=\"" << H - B + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << buf << "</text>\n";
    svg << "<line x1=\"" << L - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << L
        << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", fy);
    svg << "<text x=\"" << L - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << buf << "</text>\n";
  }

  // polylines + legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(series[s].x[i]),
                    py(series[s].y[i]));
      svg << buf;
    }
    svg << "\"/>\n";
    const double ly = T + 10 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly << "\" x2=\""
        << W - R - 120 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << W - R - 114 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const std::string& svg) {
  write_text_file(path, svg);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace epibatch
