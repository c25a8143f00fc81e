#pragma once

#include <vector>

#include "knot/curve.hpp"

namespace knot {

enum class InnerRule { Graded, Uniform };

struct EnergyQuadSpec {
  int grid_size = 256;  // outer x-grid (trapezoid rule)
  InnerRule inner_rule = InnerRule::Graded;
  double grading_exponent = 3.0;
  double min_offset = 1e-5;  // below this offset a Gauss-Jacobi rule absorbs the w^{2-α} behaviour
  int panels = 64;
  int nodes_per_panel = 16;
  bool estimate_error = true;  // false skips the two comparison evaluations

  void validate() const;
};

struct EnergyValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

// E^α(γ) = ∫∫ (1/|γ(x)-γ(y)|^α - 1/D(γ(x),γ(y))^α) |γ'(x)||γ'(y)| dx dy for a certified unit-speed curve.
// Returns +inf for a curve that is not simple.
EnergyValue ohara_energy(const ClosedCurve& curve, double alpha, const EnergyQuadSpec& quad = {});

// Same functional for an arbitrary regular parametrization (arc-length D, speed weights).
EnergyValue ohara_energy_general(const ClosedCurve& curve, double alpha, const EnergyQuadSpec& quad = {});

// Energy of the unit circle of length 1 from its one-dimensional reduction.
double circle_energy(double alpha);

struct GateauxResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> differences;  // central differences at each step
};

// Richardson-extrapolated central differences (E(γ+th) - E(γ-th))/(2t) over the decreasing steps.
GateauxResult gateaux_fd(const ClosedCurve& curve, const ClosedCurve& direction, double alpha,
                         const std::vector<double>& steps = {4e-3, 2e-3, 1e-3}, const EnergyQuadSpec& quad = {});

}  // namespace knot
