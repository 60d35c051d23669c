#pragma once

// Optimal transfer price: closed form, numeric search, curvature,
// enforcement sensitivity, effect decomposition and parameter sweeps.

#include <string>
#include <string_view>
#include <vector>

#include "tp/model.hpp"

namespace tp {

enum class SolutionKind { Interior, CornerAtLimit, NoIncentive };

std::string_view to_string(SolutionKind kind);

struct SolveResult {
  double optimal_price = 0.0;
  double deviation = 0.0;  // optimal_price - w, signed
  double alpha_at_optimum = 0.0;
  double expected_penalty_at_optimum = 0.0;
  double objective_at_optimum = 0.0;
  SolutionKind solution_kind = SolutionKind::NoIncentive;
  bool second_order_ok = false;  // phi_pp < 0; only ever true for interior solutions
};

/// Unsigned distance |p* - w| solving the first-order condition for a
/// detection curve of convexity r:
///   d = ( |t2 - t1| * width^r / (r * G) )^(1 / (r - 1)).
/// For r = 2 this is |t2 - t1| * width^2 / (2 G).
double interior_magnitude(double wedge, double width, double convexity, double combined_factor);

/// Solves the first-order condition analytically. Magnitudes at or beyond
/// the band width, and G = 0, are reported as CornerAtLimit at the active
/// limit; equal tax rates give NoIncentive at w.
SolveResult closed_form_deviation(const Scenario& scenario);

/// Maximizes the objective over the closed interval between w and the
/// active limit: 64-point coarse grid to bracket, then golden-section
/// refinement until the bracket is no wider than `abs_tolerance`.
/// Equal tax rates search both sides and settle on w.
SolveResult numeric_optimal_price(const Scenario& scenario, double abs_tolerance);

/// phi_pp = -m G alpha_pp at an interior price. Throws DomainError outside
/// the open manipulation interval.
double second_order_value(const Scenario& scenario, double price);

enum class SensitivityStatus { Interior, Clamped, NoIncentive };

struct Sensitivity {
  SensitivityStatus status = SensitivityStatus::NoIncentive;
  /// d(p* - w)/dG for the signed deviation. Meaningful only when the
  /// status is Interior; a clamped optimum does not move with G.
  double value = 0.0;

  bool interior() const { return status == SensitivityStatus::Interior; }
};

Sensitivity deviation_sensitivity_to_enforcement(const Scenario& scenario);

/// Same sensitivity, throwing DomainError unless the optimum is interior.
double require_interior_sensitivity(const Scenario& scenario);

enum class EnforcementParameter { Theta, UnitPenalty };

struct EffectDecomposition {
  SolveResult baseline;
  SolveResult perturbed;
  double spillover_effect = 0.0;  // |perturbed.deviation| - |baseline.deviation|
  double deterrent_effect = 0.0;  // perturbed.objective - baseline.objective
};

/// Re-solves with the harmed jurisdiction's theta or unit penalty replaced.
EffectDecomposition enforcement_effect_decomposition(const Scenario& scenario,
                                                     EnforcementParameter parameter,
                                                     double new_value);

struct SweepRow {
  double parameter_value = 0.0;
  SolveResult result;
};

struct SweepTable {
  std::string parameter_name;
  std::vector<SweepRow> rows;
};

/// Names accepted by `with_parameter` and `sweep`.
const std::vector<std::string>& sweep_parameters();

/// Copy of `scenario` with one named parameter replaced, validated.
/// band_width_above / band_width_below set the limit at w +/- value.
Scenario with_parameter(const Scenario& scenario, std::string_view parameter, double value);

SweepTable sweep(const Scenario& scenario, std::string_view parameter, double from, double to,
                 int steps);

}  // namespace tp
