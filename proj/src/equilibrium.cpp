#include "tp/equilibrium.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace tp {

namespace {

constexpr double kCornerSlack = 1e-12;

double direction(RegimeClass regime) { return regime == RegimeClass::LowTP ? -1.0 : 1.0; }

SolveResult evaluate_at(const Scenario& s, double price, SolutionKind kind) {
  SolveResult out;
  const RegimeClass regime = regime_of(s);
  out.optimal_price = price;
  out.deviation = price - s.band.arms_length_price + 0.0;
  out.alpha_at_optimum =
      regime == RegimeClass::Neutral ? 0.0 : detection_probability(s.band, regime, price);
  out.expected_penalty_at_optimum = expected_penalty(s, price);
  out.objective_at_optimum = objective(s, price);
  out.solution_kind = kind;
  out.second_order_ok = kind == SolutionKind::Interior && second_order_value(s, price) < 0.0;
  return out;
}

// Interior closed form: the deviation is known more precisely than the
// rounded price w + d, so alpha and the penalty are taken from it directly.
SolveResult evaluate_interior(const Scenario& s, double deviation, double width) {
  SolveResult out = evaluate_at(s, s.band.arms_length_price + deviation, SolutionKind::Interior);
  const ActiveEnforcement enforcement = *active_enforcement(s);
  out.deviation = deviation;
  out.alpha_at_optimum = std::min(1.0, std::pow(std::abs(deviation) / width, s.band.convexity));
  out.expected_penalty_at_optimum =
      enforcement.unit_penalty * s.trade_quantity * out.alpha_at_optimum * enforcement.theta;
  return out;
}

// The objective is flat near its maximum: comparing values in precision eps
// only locates the argmax to about sqrt(eps) * |p* - w|. Quad precision keeps
// that well below any tolerance a caller can ask for in double.
using Quad = boost::multiprecision::cpp_bin_float_quad;

// Quad-precision copy of shifting_gain.
class PreciseGain {
 public:
  PreciseGain(const Scenario& s, RegimeClass regime)
      : w_(s.band.arms_length_price),
        limit_(regime == RegimeClass::Neutral ? w_ : active_limit(s.band, regime)),
        r_(s.band.convexity),
        high_(regime == RegimeClass::HighTP),
        neutral_(regime == RegimeClass::Neutral) {
    const Quad m = s.trade_quantity;
    slope_ = (static_cast<Quad>(s.jurisdiction_2.tax_rate) -
              static_cast<Quad>(s.jurisdiction_1.tax_rate)) * m;
    if (const auto e = active_enforcement(s)) {
      scale_ = static_cast<Quad>(e->unit_penalty) * m *
               static_cast<Quad>(e->theta);
    }
  }

  Quad operator()(Quad p) const {
    return slope_ * (p - w_) - scale_ * alpha(p);
  }

 private:
  Quad alpha(Quad p) const {
    if (neutral_) return Quad(0);
    if (high_ ? p <= w_ : p >= w_) return Quad(0);
    if (high_ ? p >= limit_ : p <= limit_) return Quad(1);
    return boost::multiprecision::pow(boost::multiprecision::abs(p - w_) / boost::multiprecision::abs(limit_ - w_), r_);
  }

  Quad w_;
  Quad limit_;
  Quad r_;
  bool high_;
  bool neutral_;
  Quad slope_ = Quad(0);
  Quad scale_ = Quad(0);
};

struct SideOptimum {
  Quad price;
  Quad gain;
};

// Best point of the closed interval [w, limit] (either orientation). Ties at
// every stage favour the point nearer w.
SideOptimum search_side(const PreciseGain& gain, Quad w, Quad limit,
                        Quad tolerance) {
  constexpr int kCoarse = 64;
  std::array<Quad, kCoarse> grid{};
  std::array<Quad, kCoarse> values{};
  int best = 0;
  for (int k = 0; k < kCoarse; ++k) {
    grid[k] = k == kCoarse - 1 ? limit : w + (limit - w) * k / (kCoarse - 1);
    values[k] = gain(grid[k]);
    if (values[k] > values[best]) best = k;
  }

  Quad a = grid[best > 0 ? best - 1 : 0];
  Quad b = grid[best < kCoarse - 1 ? best + 1 : kCoarse - 1];
  if (a > b) std::swap(a, b);

  const Quad inv_phi = (boost::multiprecision::sqrt(Quad(5)) - Quad(1)) / Quad(2);
  Quad c = b - inv_phi * (b - a);
  Quad d = a + inv_phi * (b - a);
  Quad fc = gain(c);
  Quad fd = gain(d);
  while (b - a > tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = gain(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = gain(d);
    }
  }

  SideOptimum out{(a + b) / Quad(2), Quad(0)};
  out.gain = gain(out.price);
  if (boost::multiprecision::abs(out.price - limit) <= tolerance) out = {limit, gain(limit)};
  const Quad at_limit = gain(limit);
  if (at_limit > out.gain) out = {limit, at_limit};
  const Quad at_w = gain(w);
  if (at_w >= out.gain) out = {w, at_w};
  return out;
}

}  // namespace

std::string_view to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::Interior: return "Interior";
    case SolutionKind::CornerAtLimit: return "CornerAtLimit";
    case SolutionKind::NoIncentive: return "NoIncentive";
  }
  return "?";
}

double interior_magnitude(double wedge, double width, double convexity, double combined_factor) {
  const double base = std::abs(wedge) * std::pow(std::abs(width), convexity) /
                      (convexity * combined_factor);
  return std::pow(base, 1.0 / (convexity - 1.0));
}

SolveResult closed_form_deviation(const Scenario& s) {
  validate(s);
  const RegimeClass regime = regime_of(s);
  const double w = s.band.arms_length_price;
  if (regime == RegimeClass::Neutral) return evaluate_at(s, w, SolutionKind::NoIncentive);

  const double limit = active_limit(s.band, regime);
  const double width = std::abs(limit - w);
  const double g = active_enforcement(s)->combined_factor;
  if (g == 0.0) return evaluate_at(s, limit, SolutionKind::CornerAtLimit);

  const double wedge = s.jurisdiction_2.tax_rate - s.jurisdiction_1.tax_rate;
  const double magnitude = interior_magnitude(wedge, width, s.band.convexity, g);
  // Reaching the limit counts as the corner; the relative slack absorbs
  // rounding in inputs such as t2 - t1 = 0.3 - 0.2.
  if (!(magnitude < width * (1.0 - kCornerSlack)))
    return evaluate_at(s, limit, SolutionKind::CornerAtLimit);
  return evaluate_interior(s, direction(regime) * magnitude, width);
}

SolveResult numeric_optimal_price(const Scenario& s, double abs_tolerance) {
  if (!(abs_tolerance > 0.0) || !std::isfinite(abs_tolerance))
    throw ValidationError("abs_tolerance", "must be > 0");
  validate(s);
  const RegimeClass regime = regime_of(s);
  const double w = s.band.arms_length_price;
  const PreciseGain gain(s, regime);
  const Quad tol = abs_tolerance;

  if (regime == RegimeClass::Neutral) {
    SideOptimum best{w, gain(w)};
    for (const double limit : {s.band.limit_below, s.band.limit_above}) {
      const SideOptimum side = search_side(gain, w, limit, tol);
      if (side.gain > best.gain) best = side;
    }
    if (best.price == w) return evaluate_at(s, w, SolutionKind::NoIncentive);
    // Not reached while the Neutral gain is identically zero.
    return evaluate_at(s, static_cast<double>(best.price), SolutionKind::Interior);
  }

  const double limit = active_limit(s.band, regime);
  const SideOptimum side = search_side(gain, w, limit, tol);
  if (side.price == limit) return evaluate_at(s, limit, SolutionKind::CornerAtLimit);
  if (side.price == w) return evaluate_at(s, w, SolutionKind::NoIncentive);
  return evaluate_at(s, static_cast<double>(side.price), SolutionKind::Interior);
}

double second_order_value(const Scenario& s, double price) {
  const RegimeClass regime = regime_of(s);
  if (regime == RegimeClass::Neutral)
    throw DomainError("no interior price exists when tax rates are equal");
  const double g = active_enforcement(s)->combined_factor;
  return -s.trade_quantity * g * alpha_derivatives(s.band, regime, price).dd_alpha;
}

Sensitivity deviation_sensitivity_to_enforcement(const Scenario& s) {
  const SolveResult solved = closed_form_deviation(s);
  switch (solved.solution_kind) {
    case SolutionKind::NoIncentive: return {SensitivityStatus::NoIncentive, 0.0};
    case SolutionKind::CornerAtLimit: return {SensitivityStatus::Clamped, 0.0};
    case SolutionKind::Interior: break;
  }
  const double g = active_enforcement(s)->combined_factor;
  // d is proportional to G^(-1/(r-1)), so dd/dG = -d / ((r - 1) G); the signed
  // deviation carries the regime direction.
  return {SensitivityStatus::Interior, -solved.deviation / ((s.band.convexity - 1.0) * g)};
}

double require_interior_sensitivity(const Scenario& s) {
  const Sensitivity sensitivity = deviation_sensitivity_to_enforcement(s);
  switch (sensitivity.status) {
    case SensitivityStatus::Interior: return sensitivity.value;
    case SensitivityStatus::Clamped:
      throw DomainError("optimum is clamped at the limiting price; deviation does not move with G");
    case SensitivityStatus::NoIncentive:
      throw DomainError("no shifting incentive; deviation is identically zero");
  }
  return 0.0;
}

EffectDecomposition enforcement_effect_decomposition(const Scenario& s,
                                                     EnforcementParameter parameter,
                                                     double new_value) {
  validate(s);
  const auto enforcement = active_enforcement(s);
  if (!enforcement) throw ValidationError("jurisdictions", "tax rates are equal; no harmed jurisdiction");

  Scenario perturbed = s;
  Jurisdiction& harmed =
      enforcement->harmed_jurisdiction == 1 ? perturbed.jurisdiction_1 : perturbed.jurisdiction_2;
  const std::string path =
      "jurisdictions[" + std::to_string(enforcement->harmed_jurisdiction - 1) + "]";
  if (parameter == EnforcementParameter::Theta)
    harmed.enforcement_theta = new_value;
  else
    harmed.unit_penalty = new_value;
  validate(harmed, path);

  EffectDecomposition out;
  out.baseline = closed_form_deviation(s);
  out.perturbed = closed_form_deviation(perturbed);
  out.spillover_effect = std::abs(out.perturbed.deviation) - std::abs(out.baseline.deviation);
  out.deterrent_effect = out.perturbed.objective_at_optimum - out.baseline.objective_at_optimum;
  return out;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{
      "theta_1", "theta_2", "penalty_1", "penalty_2", "t1",
      "t2",      "band_width_above",     "band_width_below", "r", "m"};
  return names;
}

Scenario with_parameter(const Scenario& scenario, std::string_view parameter, double value) {
  Scenario s = scenario;
  if (parameter == "theta_1") s.jurisdiction_1.enforcement_theta = value;
  else if (parameter == "theta_2") s.jurisdiction_2.enforcement_theta = value;
  else if (parameter == "penalty_1") s.jurisdiction_1.unit_penalty = value;
  else if (parameter == "penalty_2") s.jurisdiction_2.unit_penalty = value;
  else if (parameter == "t1") s.jurisdiction_1.tax_rate = value;
  else if (parameter == "t2") s.jurisdiction_2.tax_rate = value;
  else if (parameter == "band_width_above") s.band.limit_above = s.band.arms_length_price + value;
  else if (parameter == "band_width_below") s.band.limit_below = s.band.arms_length_price - value;
  else if (parameter == "r") s.band.convexity = value;
  else if (parameter == "m") s.trade_quantity = value;
  else throw ValidationError("param", "unknown sweep parameter '" + std::string(parameter) + "'");
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw ValidationError("param",
                          std::string(parameter) + " = " + std::to_string(value) +
                              " leaves the valid domain (" + e.what() + ")");
  }
  return s;
}

SweepTable sweep(const Scenario& scenario, std::string_view parameter, double from, double to,
                 int steps) {
  if (steps < 2) throw ValidationError("steps", "steps must be >= 2");
  if (!std::isfinite(from) || !std::isfinite(to) || !(from < to))
    throw ValidationError("range", "from must be < to");
  validate(scenario);

  SweepTable table;
  table.parameter_name = std::string(parameter);
  table.rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double value = i == steps - 1 ? to : from + (to - from) * i / (steps - 1);
    if (!table.rows.empty() && !(value > table.rows.back().parameter_value))
      throw ValidationError("range", "range too narrow for the requested number of steps");
    table.rows.push_back({value, closed_form_deviation(with_parameter(scenario, parameter, value))});
  }
  return table;
}

}  // namespace tp
