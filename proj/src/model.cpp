#include "tp/model.hpp"

#include <algorithm>
#include <cmath>

namespace tp {

namespace {

void require_finite(double value, const std::string& path) {
  if (!std::isfinite(value)) throw ValidationError(path, "must be a finite number");
}

void require_rate(double rate, const std::string& path) {
  require_finite(rate, path);
  if (rate < 0.0 || rate >= 1.0) throw ValidationError(path, "tax rate must lie in [0, 1)");
}

}  // namespace

std::string_view to_string(RegimeClass regime) {
  switch (regime) {
    case RegimeClass::HighTP: return "HighTP";
    case RegimeClass::LowTP: return "LowTP";
    case RegimeClass::Neutral: return "Neutral";
  }
  return "?";
}

void validate(const Jurisdiction& j, const std::string& path) {
  require_rate(j.tax_rate, path + ".tax_rate");
  require_finite(j.enforcement_theta, path + ".theta");
  if (j.enforcement_theta < 0.0 || j.enforcement_theta > 1.0)
    throw ValidationError(path + ".theta", "enforcement level must lie in [0, 1]");
  require_finite(j.unit_penalty, path + ".unit_penalty");
  if (j.unit_penalty < 0.0) throw ValidationError(path + ".unit_penalty", "must be >= 0");
}

void validate(const DivisionEconomics& d, const std::string& path) {
  require_finite(d.domestic_sales, path + ".sales");
  require_finite(d.revenue_linear, path + ".revenue_linear");
  require_finite(d.revenue_quadratic, path + ".revenue_quadratic");
  require_finite(d.cost_linear, path + ".cost_linear");
  require_finite(d.cost_quadratic, path + ".cost_quadratic");
  if (d.domestic_sales < 0.0) throw ValidationError(path + ".sales", "must be >= 0");
  if (d.revenue_quadratic < 0.0)
    throw ValidationError(path + ".revenue_quadratic", "must be >= 0 (concave revenue)");
  if (d.cost_quadratic < 0.0)
    throw ValidationError(path + ".cost_quadratic", "must be >= 0 (convex cost)");
}

void validate(const ArmsLengthBand& band, const std::string& path) {
  require_finite(band.arms_length_price, path + ".w");
  require_finite(band.limit_above, path + ".limit_above");
  require_finite(band.limit_below, path + ".limit_below");
  require_finite(band.convexity, path + ".r");
  if (!(band.limit_above > band.arms_length_price))
    throw ValidationError(path + ".limit_above", "must exceed the arm's length price w");
  if (!(band.limit_below < band.arms_length_price))
    throw ValidationError(path + ".limit_below", "must be below the arm's length price w");
  if (!(band.convexity > 1.0)) throw ValidationError(path + ".r", "convexity must be > 1");
}

std::vector<std::string> validate(const Scenario& scenario) {
  validate(scenario.jurisdiction_1, "jurisdictions[0]");
  validate(scenario.jurisdiction_2, "jurisdictions[1]");
  validate(scenario.division_1, "divisions[0]");
  validate(scenario.division_2, "divisions[1]");
  require_finite(scenario.trade_quantity, "trade_quantity");
  if (!(scenario.trade_quantity > 0.0)) throw ValidationError("trade_quantity", "must be > 0");
  validate(scenario.band, "band");

  std::vector<std::string> warnings;
  if (scenario.division_2.domestic_sales - scenario.trade_quantity < 0.0)
    warnings.emplace_back("division 2 output x2 = s2 - m is negative");
  return warnings;
}

RegimeClass classify_regime(double t1, double t2) {
  require_rate(t1, "t1");
  require_rate(t2, "t2");
  if (t2 > t1) return RegimeClass::HighTP;
  if (t1 > t2) return RegimeClass::LowTP;
  return RegimeClass::Neutral;
}

RegimeClass regime_of(const Scenario& scenario) {
  return classify_regime(scenario.jurisdiction_1.tax_rate, scenario.jurisdiction_2.tax_rate);
}

std::optional<ActiveEnforcement> active_enforcement(const Scenario& scenario) {
  const Jurisdiction* harmed = nullptr;
  int index = 0;
  switch (regime_of(scenario)) {
    case RegimeClass::HighTP: harmed = &scenario.jurisdiction_2; index = 2; break;
    case RegimeClass::LowTP: harmed = &scenario.jurisdiction_1; index = 1; break;
    case RegimeClass::Neutral: return std::nullopt;
  }
  return ActiveEnforcement{index, harmed->enforcement_theta, harmed->unit_penalty,
                           harmed->enforcement_theta * harmed->unit_penalty};
}

double active_limit(const ArmsLengthBand& band, RegimeClass regime) {
  switch (regime) {
    case RegimeClass::HighTP: return band.limit_above;
    case RegimeClass::LowTP: return band.limit_below;
    case RegimeClass::Neutral: break;
  }
  throw DomainError("no manipulation side is defined when tax rates are equal");
}

PretaxProfits pretax_profits(const Scenario& s, double price) {
  const double m = s.trade_quantity;
  const auto& d1 = s.division_1;
  const auto& d2 = s.division_2;
  return {d1.revenue(d1.domestic_sales) - d1.cost(d1.domestic_sales + m) + price * m,
          d2.revenue(d2.domestic_sales) - d2.cost(d2.domestic_sales - m) - price * m};
}

double after_tax_profit(const Scenario& s, double price) {
  const double m = s.trade_quantity;
  const auto& d1 = s.division_1;
  const auto& d2 = s.division_2;
  const double t1 = s.jurisdiction_1.tax_rate;
  const double t2 = s.jurisdiction_2.tax_rate;
  const double base_1 = d1.revenue(d1.domestic_sales) - d1.cost(d1.domestic_sales + m);
  const double base_2 = d2.revenue(d2.domestic_sales) - d2.cost(d2.domestic_sales - m);
  return (1.0 - t1) * base_1 + (1.0 - t2) * base_2 + (t2 - t1) * price * m;
}

double detection_probability(const ArmsLengthBand& band, RegimeClass regime, double price) {
  const double limit = active_limit(band, regime);
  const double w = band.arms_length_price;
  const bool high = regime == RegimeClass::HighTP;
  if (high ? price <= w : price >= w) return 0.0;
  if (high ? price >= limit : price <= limit) return 1.0;
  const double ratio = std::abs(price - w) / std::abs(limit - w);
  return std::min(1.0, std::pow(ratio, band.convexity));
}

AlphaDerivatives alpha_derivatives(const ArmsLengthBand& band, RegimeClass regime,
                                   double price) {
  const double limit = active_limit(band, regime);
  const double w = band.arms_length_price;
  const bool high = regime == RegimeClass::HighTP;
  const bool interior = high ? (price > w && price < limit) : (price < w && price > limit);
  if (!interior) {
    const bool at_zero = high ? price <= w : price >= w;
    throw DomainError(at_zero ? "price is on the compliant branch (alpha = 0)"
                              : "price is on the certain-penalty branch (alpha = 1)");
  }
  const double r = band.convexity;
  const double distance = std::abs(price - w);
  const double width_r = std::pow(std::abs(limit - w), r);
  const double sign = high ? 1.0 : -1.0;
  return {sign * r * std::pow(distance, r - 1.0) / width_r,
          (r * r - r) * std::pow(distance, r - 2.0) / width_r};
}

double expected_penalty(const Scenario& s, double price) {
  const auto enforcement = active_enforcement(s);
  if (!enforcement) return 0.0;
  const double alpha = detection_probability(s.band, regime_of(s), price);
  return enforcement->unit_penalty * s.trade_quantity * alpha * enforcement->theta;
}

double objective(const Scenario& s, double price) {
  return after_tax_profit(s, price) - expected_penalty(s, price);
}

double shifting_gain(const Scenario& s, double price) {
  const double wedge = s.jurisdiction_2.tax_rate - s.jurisdiction_1.tax_rate;
  return wedge * s.trade_quantity * (price - s.band.arms_length_price) -
         expected_penalty(s, price);
}

}  // namespace tp
