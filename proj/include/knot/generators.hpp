#pragma once

#include <cstdint>

#include "knot/curve.hpp"

namespace knot {

// Unit-speed circle of length 1 in the first coordinate plane (modes ±1 only).
ClosedCurve make_circle(int dim = 3);

// Planar circle with a normal bump r(x) = (1 + amplitude·cos 2πkx)/(2π), reparametrized to unit speed.
ClosedCurve make_bumped_circle(int mode, double amplitude, int modes_out = 64, int dim = 3);

// Circle plus seeded perturbations in modes 2..max_mode of relative size amplitude/k²,
// reparametrized to unit speed. Identical seeds give identical curves on every platform.
ClosedCurve make_perturbed_circle(std::uint64_t seed, double amplitude, int max_mode = 8, int modes_out = 64,
                                  int dim = 3);

// Random real trigonometric polynomial with modes 0..max_mode and coefficients of size <= 1/k²
// (uncertified, possibly self-intersecting). Used where only spectral identities are exercised.
ClosedCurve make_random_curve(std::uint64_t seed, int dim, int max_mode);

// (2,3) torus knot ((R + r cos 3t) cos 2t, (R + r cos 3t) sin 2t, r sin 3t) at unit speed and length 1.
ClosedCurve make_trefoil(int modes_out = 64, double minor_ratio = 0.3);

}  // namespace knot
