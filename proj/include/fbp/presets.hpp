#pragma once

#include "fbp/energy.hpp"
#include "fbp/grid.hpp"

#include <string>
#include <vector>

namespace fbp {

/// Boundary data on the outermost node layer plus the energy it is solved with.
struct Problem {
  std::string name;
  GridFunctiond boundary;
  EnergySpec spec;
};

/// One-phase on (0, A): u(0) = 0, u(A) = 1.
Problem example1_problem(double A, int nodes);
/// Two-phase on (-1, 1): u(-1) = -1, u(1) = 1, volume weight eps_weight.
Problem example2_problem(double eps_weight, int nodes);
/// Two-phase on (-A, A) with u = 1 at both ends.
Problem example3_problem(double A, int nodes);

enum class FieldPreset { halfplane, quadratic, rank1, cone, circle, r3 };

std::string to_string(FieldPreset f);
FieldPreset field_preset_from_string(const std::string& s);
std::vector<std::string> field_preset_names();

/// Closed-form 2D fields, in coordinates rotated by `rotation` (radians):
///   halfplane  c (y1^+)^2        quadratic  c (y1^2 + y2^2)
///   rank1      c y1^2            cone       c (y1^2 - y2^2)
///   circle     c (|x - (1/2, 0)|^2 - 1/4), zero set the circle of radius 1/2 through 0
///   r3         c |x|^3
/// with y1 = x.(cos rotation, sin rotation).
GridFunctiond analytic_field(FieldPreset f, const Grid& g, double amplitude = 1.0, double rotation = 0.0);

}  // namespace fbp
