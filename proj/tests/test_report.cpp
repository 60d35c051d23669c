#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "test_support.hpp"
#include "tp/report.hpp"

namespace tp::report {
namespace {

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(6.25), "6.25");
  EXPECT_EQ(format_number(50.0 / 9.0), "5.55555555556");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(6.249999999999999), "6.25");
  EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(SolveJson, KeysInDocumentedOrder) {
  const auto doc = to_json(closed_form_deviation(testing::canonical_scenario()));
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"optimal_price", "deviation", "alpha",
                                            "expected_penalty", "objective", "solution_kind",
                                            "second_order_ok"}));
  EXPECT_EQ(doc["deviation"], 6.25);
  EXPECT_EQ(doc["alpha"], 0.390625);
  EXPECT_EQ(doc["expected_penalty"], 31.25);
  EXPECT_EQ(doc["solution_kind"], "Interior");
}

TEST(SweepCsv, HeaderAndRows) {
  const SweepTable t = sweep(testing::canonical_scenario(), "theta_2", 0.5, 1.0, 2);
  std::ostringstream out;
  write_sweep_csv(out, t);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, kSweepCsvHeader.size()), kSweepCsvHeader);
  EXPECT_NE(csv.find("\ntheta_2,0.5,20,10,1,"), std::string::npos);
  EXPECT_NE(csv.find(",CornerAtLimit\n"), std::string::npos);
  EXPECT_NE(csv.find("\ntheta_2,1,15,5,0.25,25,"), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(LineChart, SinglePolylineInFixedViewBox) {
  Series s{"theta_2", "deviation", {0.5, 0.75, 1.0}, {10.0, 6.6, 5.0}};
  std::ostringstream out;
  write_line_chart_svg(out, s, "Deviation <test>");
  const std::string svg = out.str();
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  std::size_t count = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1))
    ++count;
  EXPECT_EQ(count, 1u);
  EXPECT_NE(svg.find(">theta_2</text>"), std::string::npos);
  EXPECT_NE(svg.find("Deviation &lt;test&gt;"), std::string::npos);
  // Six tick labels per axis: x ticks at 0.5 ... 1, y ticks at 5 ... 10.
  EXPECT_NE(svg.find(">0.6</text>"), std::string::npos);
  EXPECT_NE(svg.find(">10</text>"), std::string::npos);
  EXPECT_EQ(svg.back(), '\n');
}

TEST(LineChart, FlatSeriesStillRenders) {
  Series s{"x", "y", {0.0, 1.0}, {0.0, 0.0}};
  std::ostringstream out;
  EXPECT_NO_THROW(write_line_chart_svg(out, s, "flat"));
  EXPECT_EQ(out.str().find("nan"), std::string::npos);
}

TEST(LineChart, NeedsTwoPoints) {
  std::ostringstream out;
  EXPECT_THROW(write_line_chart_svg(out, {"x", "y", {1.0}, {1.0}}, "t"), std::invalid_argument);
}

}  // namespace
}  // namespace tp::report
