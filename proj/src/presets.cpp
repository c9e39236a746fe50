#include "fbp/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace fbp {

namespace {

GridFunctiond endpoints(const Grid& g, double left, double right) {
  GridFunctiond u(g);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
  v[0] = left;
  v[g.nx - 1] = right;
  return u.with_values(std::move(v));
}

}  // namespace

Problem example1_problem(double A, int nodes) {
  if (!(A > 0.0)) throw std::invalid_argument("example1: A must be > 0");
  EnergySpec spec;
  spec.phase = Phase::one_phase;
  return {"example1", endpoints(Grid::interval(0.0, A, nodes), 0.0, 1.0), spec};
}

Problem example2_problem(double eps_weight, int nodes) {
  if (!(eps_weight > 0.0)) throw std::invalid_argument("example2: eps must be > 0");
  EnergySpec spec;
  spec.chi_weight = eps_weight;
  return {"example2", endpoints(Grid::interval(-1.0, 1.0, nodes), -1.0, 1.0), spec};
}

Problem example3_problem(double A, int nodes) {
  if (!(A > 0.0)) throw std::invalid_argument("example3: A must be > 0");
  return {"example3", endpoints(Grid::interval(-A, A, nodes), 1.0, 1.0), EnergySpec{}};
}

std::string to_string(FieldPreset f) {
  switch (f) {
    case FieldPreset::halfplane: return "halfplane";
    case FieldPreset::quadratic: return "quadratic";
    case FieldPreset::rank1: return "rank1";
    case FieldPreset::cone: return "cone";
    case FieldPreset::circle: return "circle";
    default: return "r3";
  }
}

std::vector<std::string> field_preset_names() { return {"halfplane", "quadratic", "rank1", "cone", "circle", "r3"}; }

FieldPreset field_preset_from_string(const std::string& s) {
  for (auto f : {FieldPreset::halfplane, FieldPreset::quadratic, FieldPreset::rank1, FieldPreset::cone,
                 FieldPreset::circle, FieldPreset::r3})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown field preset '" + s + "'");
}

GridFunctiond analytic_field(FieldPreset f, const Grid& g, double amplitude, double rotation) {
  if (g.dim != 2) throw std::invalid_argument("analytic_field: 2D grid required");
  const double c = std::cos(rotation), s = std::sin(rotation);
  return GridFunctiond::sample(g, [&](double x, double y) {
    const double y1 = c * x + s * y, y2 = -s * x + c * y;
    switch (f) {
      case FieldPreset::halfplane: {
        const double p = std::max(y1, 0.0);
        return amplitude * p * p;
      }
      case FieldPreset::quadratic: return amplitude * (y1 * y1 + y2 * y2);
      case FieldPreset::rank1: return amplitude * y1 * y1;
      case FieldPreset::cone: return amplitude * (y1 * y1 - y2 * y2);
      case FieldPreset::circle: return amplitude * ((y1 - 0.5) * (y1 - 0.5) + y2 * y2 - 0.25);
      default: {
        const double r = std::hypot(x, y);
        return amplitude * r * r * r;
      }
    }
  });
}

}  // namespace fbp
