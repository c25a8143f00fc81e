#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "knot/first_variation.hpp"
#include "knot/io.hpp"

namespace knot {

struct VerificationCase {
  std::string id;
  std::string quantity;
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;  // measured <= tolerance (false for non-finite measurements)
};

struct VerificationReport {
  std::string suite;
  std::vector<VerificationCase> cases;
  std::uint64_t seed = 0;
  std::string environment;

  void add(std::string id, std::string quantity, double tolerance, double measured);
  bool passed() const;
  int failures() const;
};

Json report_to_json(const VerificationReport& report);

struct VerifyOptions {
  std::vector<double> alphas{2.25, 2.5, 2.75};
  std::uint64_t seed = 7;
  int modes = 64;
  int grid = 512;
  TruncationLadder ladder;
};

// Suites: multiplier, decomposition, firstvar, bilinear, leibniz, cor42; "all" runs them in that order.
const std::vector<std::string>& verification_suites();
VerificationReport run_suite(const std::string& name, const VerifyOptions& options);

// Circle, three seeded perturbed circles and a trefoil, all unit speed with options.modes modes.
struct NamedCurve {
  std::string name;
  ClosedCurve curve;
};
std::vector<NamedCurve> verification_curves(const VerifyOptions& options);

std::string environment_string();

}  // namespace knot
