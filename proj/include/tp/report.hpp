#pragma once

// Text renderings of solver output: JSON reports, sweep CSV and the SVG
// deviation chart. All formatting is locale-independent and deterministic.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tp/equilibrium.hpp"

namespace tp::report {

/// printf "%.12g"; negative zero prints as "0".
std::string format_number(double value);

/// `value` rounded to 12 significant digits, so JSON output is as stable as
/// the CSV.
double round12(double value);

nlohmann::ordered_json to_json(const SolveResult& result);
nlohmann::ordered_json to_json(const EffectDecomposition& effects);

inline constexpr std::string_view kSweepCsvHeader =
    "param,value,optimal_price,deviation,alpha,expected_penalty,objective,solution_kind";

/// Header plus one LF-terminated row per sweep point.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

struct Series {
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

/// 800x500 viewBox, framed plot area, one polyline, six tick labels per axis
/// (five even divisions).
void write_line_chart_svg(std::ostream& out, const Series& series, std::string_view title);

/// Deviation against the swept parameter.
Series deviation_series(const SweepTable& table);

}  // namespace tp::report
