#pragma once

#include <cmath>
#include <cstdint>

#include "tp/model.hpp"
#include "tp/oracle.hpp"

namespace tp::testing {

/// t1 = 0.2, t2 = 0.3, w = 10, band [0, 20], r = 2, m = 100, harmed
/// jurisdiction (=2) theta = 0.8 and unit penalty 1.0, linear divisions.
inline Scenario canonical_scenario() {
  Scenario s;
  s.jurisdiction_1 = {0.2, 0.5, 0.5};
  s.jurisdiction_2 = {0.3, 0.8, 1.0};
  s.division_1 = {50.0, 5.0, 0.0, 2.0, 0.0};
  s.division_2 = {150.0, 8.0, 0.0, 1.0, 0.0};
  s.trade_quantity = 100.0;
  s.band = {10.0, 20.0, 0.0, 2.0};
  return s;
}

/// Canonical scenario with theta = 0.2, unit penalty 0.5 (interior
/// magnitude 50 exceeds the band width 10).
inline Scenario corner_scenario() {
  Scenario s = canonical_scenario();
  s.jurisdiction_2.enforcement_theta = 0.2;
  s.jurisdiction_2.unit_penalty = 0.5;
  return s;
}

/// Rates swapped: shifting pushes p down toward limit_below = 0. Jurisdiction
/// 1 is harmed and carries theta = 0.8, unit penalty 1.0.
inline Scenario lowtp_scenario() {
  Scenario s = canonical_scenario();
  s.jurisdiction_1 = {0.3, 0.8, 1.0};
  s.jurisdiction_2 = {0.2, 0.5, 0.5};
  return s;
}

inline Scenario neutral_scenario() {
  Scenario s = canonical_scenario();
  s.jurisdiction_1.tax_rate = 0.25;
  s.jurisdiction_2.tax_rate = 0.25;
  return s;
}

inline Jurisdiction& harmed(Scenario& s) {
  return s.jurisdiction_2.tax_rate > s.jurisdiction_1.tax_rate ? s.jurisdiction_2
                                                               : s.jurisdiction_1;
}

/// Value on a 2^-10 lattice, so sums and differences of generated prices
/// are exact in double.
inline double dyadic(oracle::SplitMix64& rng, double lo, double hi) {
  return std::round(rng.uniform(lo, hi) * 1024.0) / 1024.0;
}

/// Random scenario with an interior optimum for convexity r: the harmed
/// penalty is raised until the interior magnitude sits inside `max_fill`
/// of the band. Division economics are random and irrelevant to p*.
inline Scenario random_interior_scenario(oracle::SplitMix64& rng, double r,
                                         double max_fill = 0.9) {
  for (;;) {
    Scenario s;
    const double low = dyadic(rng, 0.05, 0.35);
    const double high = low + dyadic(rng, 0.01, 0.3);
    const bool high_tp = rng.uniform() < 0.5;
    s.jurisdiction_1 = {high_tp ? low : high, dyadic(rng, 0.1, 1.0), dyadic(rng, 0.1, 3.0)};
    s.jurisdiction_2 = {high_tp ? high : low, dyadic(rng, 0.1, 1.0), dyadic(rng, 0.1, 3.0)};
    s.division_1 = {rng.uniform(0, 200), rng.uniform(1, 20), rng.uniform(0, 0.05),
                    rng.uniform(0, 5), rng.uniform(0, 0.05)};
    s.division_2 = {rng.uniform(0, 200), rng.uniform(1, 20), rng.uniform(0, 0.05),
                    rng.uniform(0, 5), rng.uniform(0, 0.05)};
    s.trade_quantity = dyadic(rng, 1.0, 500.0);
    const double w = dyadic(rng, 10.0, 100.0);
    s.band = {w, w + dyadic(rng, 1.0, 10.0), w - dyadic(rng, 1.0, 10.0), r};

    // Interior iff |dt| * width^r / (r G) < width^(r-1), i.e. G above a floor.
    const double wedge = std::abs(s.jurisdiction_2.tax_rate - s.jurisdiction_1.tax_rate);
    const double width = high_tp ? s.band.limit_above - w : w - s.band.limit_below;
    Jurisdiction& j = harmed(s);
    const double g_floor = wedge * width / (r * std::pow(max_fill, r - 1.0));
    if (j.enforcement_theta * j.unit_penalty <= g_floor) {
      j.unit_penalty = std::ceil(g_floor / j.enforcement_theta * rng.uniform(1.05, 3.0) * 1024.0) /
                       1024.0;
    }
    if (j.enforcement_theta * j.unit_penalty > g_floor) return s;
  }
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

}  // namespace tp::testing
