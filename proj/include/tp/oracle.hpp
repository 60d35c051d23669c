#pragma once

// Brute-force and finite-difference checks. Nothing here calls into the
// equilibrium solvers: every result is built from model evaluations only.

#include <cstdint>
#include <functional>

#include "tp/model.hpp"

namespace tp::oracle {

/// SplitMix64: state += 0x9E3779B97F4A7C15, then the output mix
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z ^= z >> 31
/// Portable and bit-reproducible for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct GridSpec {
  double lower = 0.0;
  double upper = 0.0;
  double step = 0.0;
};

void validate(const GridSpec& grid);

/// Grid point maximizing the objective. Points are lower + i*step, with
/// `upper` included when the width is a whole number of steps. Ties go to
/// the point closest to w.
double grid_argmax(const Scenario& scenario, const GridSpec& grid);

/// Default step h = 1e-5 * max(1, |at|).
double default_step(double at);

/// Step for second differences of the detection curve at distance |p - w|
/// from the arm's length price. Second differences need a much wider stencil
/// than first differences: at 1e-5 rounding alone shows up around 1e-5
/// relative, while 1e-3 of the distance keeps truncation and rounding both
/// under 1e-6 for every r in [1.01, 4].
double curvature_step(double distance_from_w);

/// order 1: (f(x+h) - f(x-h)) / 2h; order 2: (f(x+h) - 2f(x) + f(x-h)) / h^2.
double central_difference(const std::function<double(double)>& f, double at, double h,
                          int order);

struct ConditionReport {
  int samples_checked = 0;
  bool zero_at_w_ok = false;
  bool sign_condition_ok = false;
  bool convexity_ok = false;
  bool derivative_match_ok = false;  // analytic vs finite differences
  double tolerance = 0.0;
  /// Largest relative discrepancy between the analytic derivatives and
  /// their finite-difference estimates.
  double worst_violation = 0.0;

  bool all_ok() const {
    return zero_at_w_ok && sign_condition_ok && convexity_ok && derivative_match_ok;
  }
};

/// Seeded interior samples on the manipulation side of `regime`. Checks
/// alpha(w) == 0 exactly, sign of the FD slope against sign(p - w), FD
/// curvature > 0, and analytic alpha_p / alpha_pp against FD to
/// `relative_tolerance`.
ConditionReport check_alpha_conditions(const ArmsLengthBand& band, RegimeClass regime,
                                       int sample_count, std::uint64_t seed,
                                       double relative_tolerance = 1e-6);

}  // namespace tp::oracle
