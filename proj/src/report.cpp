#include "tp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace tp::report {

namespace {

std::string escape_xml(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Short coordinate for SVG attributes.
std::string coord(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value + 0.0);
  return buffer;
}

std::string tick_label(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", value + 0.0);
  return buffer;
}

std::pair<double, double> padded_range(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi > *lo) return {*lo, *hi};
  const double pad = *lo == 0.0 ? 1.0 : std::abs(*lo) * 0.1;
  return {*lo - pad, *hi + pad};
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // folds -0
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

double round12(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

nlohmann::ordered_json to_json(const SolveResult& result) {
  return {{"optimal_price", round12(result.optimal_price)},
          {"deviation", round12(result.deviation)},
          {"alpha", round12(result.alpha_at_optimum)},
          {"expected_penalty", round12(result.expected_penalty_at_optimum)},
          {"objective", round12(result.objective_at_optimum)},
          {"solution_kind", std::string(to_string(result.solution_kind))},
          {"second_order_ok", result.second_order_ok}};
}

nlohmann::ordered_json to_json(const EffectDecomposition& effects) {
  return {{"baseline", to_json(effects.baseline)},
          {"perturbed", to_json(effects.perturbed)},
          {"spillover_effect", round12(effects.spillover_effect)},
          {"deterrent_effect", round12(effects.deterrent_effect)}};
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : table.rows) {
    const auto& r = row.result;
    out << table.parameter_name << ',' << format_number(row.parameter_value) << ','
        << format_number(r.optimal_price) << ',' << format_number(r.deviation) << ','
        << format_number(r.alpha_at_optimum) << ','
        << format_number(r.expected_penalty_at_optimum) << ','
        << format_number(r.objective_at_optimum) << ',' << to_string(r.solution_kind) << '\n';
  }
}

Series deviation_series(const SweepTable& table) {
  Series series;
  series.x_label = table.parameter_name;
  series.y_label = "deviation p* - w";
  for (const auto& row : table.rows) {
    series.x.push_back(row.parameter_value);
    series.y.push_back(row.result.deviation);
  }
  return series;
}

void write_line_chart_svg(std::ostream& out, const Series& series, std::string_view title) {
  if (series.x.size() != series.y.size() || series.x.size() < 2)
    throw std::invalid_argument("line chart needs at least two (x, y) points");

  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 70;
  constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;
  constexpr int kDivisions = 5;

  const auto [x_lo, x_hi] = padded_range(series.x);
  const auto [y_lo, y_hi] = padded_range(series.y);
  const auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * kPlotW; };
  const auto sy = [&](double y) { return kTop + kPlotH - (y - y_lo) / (y_hi - y_lo) * kPlotH; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" "
         "height=\"500\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(title)
      << "</text>\n";
  out << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\""
      << coord(kPlotW) << "\" height=\"" << coord(kPlotH)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= kDivisions; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / kDivisions;
    const double fy = y_lo + (y_hi - y_lo) * i / kDivisions;
    const double px = sx(fx), py = sy(fy);
    out << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(kTop + kPlotH) << "\" x2=\""
        << coord(px) << "\" y2=\"" << coord(kTop + kPlotH + 6) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(px) << "\" y=\"" << coord(kTop + kPlotH + 22)
        << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    out << "<line x1=\"" << coord(kLeft - 6) << "\" y1=\"" << coord(py) << "\" x2=\""
        << coord(kLeft) << "\" y2=\"" << coord(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(kLeft - 10) << "\" y=\"" << coord(py + 4)
        << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }

  out << "<text x=\"" << coord(kLeft + kPlotW / 2) << "\" y=\"" << coord(kHeight - 20)
      << "\" text-anchor=\"middle\">" << escape_xml(series.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << coord(kTop + kPlotH / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << coord(kTop + kPlotH / 2)
      << ")\">" << escape_xml(series.y_label) << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if (i) out << ' ';
    out << coord(sx(series.x[i])) << ',' << coord(sy(series.y[i]));
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace tp::report
