#pragma once

// Two-division multinational under transfer-pricing enforcement: profits,
// detection probability, expected penalty and the firm's objective.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tp {

/// Raised for inputs that violate a model invariant. `field()` names the
/// offending field as a dotted path (e.g. "band.r", "jurisdictions[1].theta").
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised when a derivative is requested on a flat (clamped) branch of the
/// detection curve, or on a solution that is not interior.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Jurisdiction {
  double tax_rate = 0.0;           // t_i in [0, 1)
  double enforcement_theta = 0.0;  // theta_i in [0, 1]
  double unit_penalty = 0.0;       // fine per traded unit, >= 0
};

/// Linear-quadratic division economics: R(s) = a s - b s^2, C(x) = c x + d x^2.
struct DivisionEconomics {
  double domestic_sales = 0.0;
  double revenue_linear = 0.0;
  double revenue_quadratic = 0.0;
  double cost_linear = 0.0;
  double cost_quadratic = 0.0;

  double revenue(double sales) const {
    return revenue_linear * sales - revenue_quadratic * sales * sales;
  }
  double cost(double output) const {
    return cost_linear * output + cost_quadratic * output * output;
  }
};

/// Arm's length price w with the limiting prices on either side. The limit
/// in the manipulation direction is where penalty imposition becomes certain.
struct ArmsLengthBand {
  double arms_length_price = 0.0;
  double limit_above = 0.0;
  double limit_below = 0.0;
  double convexity = 2.0;
};

struct Scenario {
  Jurisdiction jurisdiction_1;
  Jurisdiction jurisdiction_2;
  DivisionEconomics division_1;
  DivisionEconomics division_2;
  double trade_quantity = 0.0;
  ArmsLengthBand band;
};

enum class RegimeClass { HighTP, LowTP, Neutral };

std::string_view to_string(RegimeClass regime);

struct ActiveEnforcement {
  int harmed_jurisdiction = 0;  // 2 for HighTP, 1 for LowTP
  double theta = 0.0;
  double unit_penalty = 0.0;
  double combined_factor = 0.0;  // theta * unit_penalty
};

struct PretaxProfits {
  double pi_1 = 0.0;
  double pi_2 = 0.0;
};

struct AlphaDerivatives {
  double d_alpha = 0.0;
  double dd_alpha = 0.0;
};

// Validation. Each throws ValidationError carrying the field path.
void validate(const Jurisdiction& j, const std::string& path = "jurisdiction");
void validate(const DivisionEconomics& d, const std::string& path = "division");
void validate(const ArmsLengthBand& band, const std::string& path = "band");

/// Validates every invariant of the scenario and returns non-fatal warnings
/// (currently only a negative division-2 output, x2 = s2 - m < 0).
std::vector<std::string> validate(const Scenario& scenario);

RegimeClass classify_regime(double t1, double t2);
RegimeClass regime_of(const Scenario& scenario);

/// Harmed jurisdiction's enforcement; empty when rates are equal.
std::optional<ActiveEnforcement> active_enforcement(const Scenario& scenario);

/// Limiting price on the manipulation side of `regime`. Throws DomainError
/// for Neutral.
double active_limit(const ArmsLengthBand& band, RegimeClass regime);

PretaxProfits pretax_profits(const Scenario& scenario, double price);

/// (1 - t1) pi_1 + (1 - t2) pi_2. The transfer term is carried as the single
/// wedge (t2 - t1) p m so that equal rates give a value exactly constant in p.
double after_tax_profit(const Scenario& scenario, double price);

/// Clamped detection curve |p - w|^r / |P - w|^r on the manipulation side.
/// Zero at w and on the compliant side, one at and beyond P.
double detection_probability(const ArmsLengthBand& band, RegimeClass regime, double price);

/// First and second derivative of the detection curve in p. Only defined on
/// the open interval strictly between w and the active limit.
AlphaDerivatives alpha_derivatives(const ArmsLengthBand& band, RegimeClass regime,
                                   double price);

/// unit_penalty * m * alpha * theta of the harmed jurisdiction; 0 if Neutral.
double expected_penalty(const Scenario& scenario, double price);

/// phi = after-tax profit minus expected penalty.
double objective(const Scenario& scenario, double price);

/// objective(p) - objective(w), evaluated without the price-independent
/// revenue and cost terms: (t2 - t1) m (p - w) - expected_penalty(p).
double shifting_gain(const Scenario& scenario, double price);

}  // namespace tp
