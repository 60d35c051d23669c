#include "tp/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace tp::oracle {

void validate(const GridSpec& grid) {
  if (!std::isfinite(grid.lower) || !std::isfinite(grid.upper) || !std::isfinite(grid.step))
    throw ValidationError("grid", "bounds and step must be finite");
  if (!(grid.lower < grid.upper)) throw ValidationError("grid.lower", "must be < upper");
  if (!(grid.step > 0.0)) throw ValidationError("grid.step", "must be > 0");
  if (grid.step > grid.upper - grid.lower)
    throw ValidationError("grid.step", "must not exceed upper - lower");
}

double grid_argmax(const Scenario& scenario, const GridSpec& grid) {
  validate(grid);
  const double w = scenario.band.arms_length_price;
  const double width = grid.upper - grid.lower;
  const double ratio = width / grid.step;
  const double whole = std::round(ratio);
  const bool ends_on_upper = std::abs(ratio - whole) <= 1e-9 * std::max(1.0, whole);
  const auto last = static_cast<long long>(ends_on_upper ? whole : std::floor(ratio));

  double best_price = grid.lower;
  double best_value = objective(scenario, best_price);
  for (long long i = 1; i <= last; ++i) {
    const double price = (i == last && ends_on_upper)
                             ? grid.upper
                             : grid.lower + static_cast<double>(i) * grid.step;
    const double value = objective(scenario, price);
    if (value > best_value ||
        (value == best_value && std::abs(price - w) < std::abs(best_price - w))) {
      best_value = value;
      best_price = price;
    }
  }
  return best_price;
}

double default_step(double at) { return 1e-5 * std::max(1.0, std::abs(at)); }

double curvature_step(double distance_from_w) { return 1e-3 * distance_from_w; }

double central_difference(const std::function<double(double)>& f, double at, double h,
                          int order) {
  if (!(h > 0.0)) throw ValidationError("h", "finite-difference step must be > 0");
  switch (order) {
    case 1: return (f(at + h) - f(at - h)) / (2.0 * h);
    case 2: return (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h);
    default: throw ValidationError("order", "finite-difference order must be 1 or 2");
  }
}

ConditionReport check_alpha_conditions(const ArmsLengthBand& band, RegimeClass regime,
                                       int sample_count, std::uint64_t seed,
                                       double relative_tolerance) {
  if (sample_count < 1) throw ValidationError("samples", "sample count must be >= 1");
  tp::validate(band);
  const double w = band.arms_length_price;
  const double limit = active_limit(band, regime);
  const auto alpha = [&](double p) { return detection_probability(band, regime, p); };

  ConditionReport report;
  report.tolerance = relative_tolerance;
  report.zero_at_w_ok = alpha(w) == 0.0;
  report.sign_condition_ok = true;
  report.convexity_ok = true;

  SplitMix64 rng(seed);
  for (int i = 0; i < sample_count; ++i) {
    // Stay clear of both ends so the stencil never straddles a clamp.
    const double price = w + (limit - w) * rng.uniform(0.05, 0.95);
    const double slope = central_difference(alpha, price, default_step(price - w), 1);
    const double curvature =
        central_difference(alpha, price, curvature_step(std::abs(price - w)), 2);

    const double expected_sign = price > w ? 1.0 : -1.0;
    if (!(slope * expected_sign > 0.0)) report.sign_condition_ok = false;
    if (!(curvature > 0.0)) report.convexity_ok = false;

    const AlphaDerivatives analytic = alpha_derivatives(band, regime, price);
    const double slope_error = std::abs(slope - analytic.d_alpha) / std::abs(analytic.d_alpha);
    const double curvature_error =
        std::abs(curvature - analytic.dd_alpha) / std::abs(analytic.dd_alpha);
    report.worst_violation = std::max({report.worst_violation, slope_error, curvature_error});
    ++report.samples_checked;
  }
  report.derivative_match_ok = report.worst_violation <= relative_tolerance;
  return report;
}

}  // namespace tp::oracle
