#pragma once

#include "fbp/energy.hpp"
#include "fbp/minimize.hpp"
#include "fbp/presets.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fbp {

struct ProblemConfig {
  std::string preset = "example1";  ///< example1 | example2 | example3 | custom
  double A = 4.0;
  double eps = 0.1;
  int nodes = 2049;
  std::string table;                ///< grid CSV whose boundary layer is the data (custom)
  bool operator==(const ProblemConfig&) const = default;
};

/// Unset optionals take the preset's value.
struct EnergyConfig {
  double epsilon = 0.0;
  std::optional<double> chi_weight;
  std::optional<Phase> phase;
  bool operator==(const EnergyConfig&) const = default;
};

/// 2D field the diagnostics run on.
struct FieldConfig {
  std::string source = "halfplane";  ///< an analytic preset name, or "file"
  std::string file;
  double amplitude = 1.0;
  double rotation_deg = 0.0;
  int n = 513;
  double lo = -1.0, hi = 1.0;
  bool operator==(const FieldConfig&) const = default;
};

struct DiagnosticsConfig {
  double cx = 0.0, cy = 0.0;
  double rmin = 0.1, rmax = 0.4;
  int nr = 4;
  int n_theta = 512;
  bool richardson = true;
  double r = 0.2;
  std::vector<double> deltas = {0.01, 0.05, 0.1, 0.2};
  std::vector<double> scales = {0.4, 0.2, 0.1};
  std::string mask;
  int k0 = 3;
  std::optional<double> c_bound;
  bool operator==(const DiagnosticsConfig&) const = default;
};

struct RunConfig {
  ProblemConfig problem;
  EnergyConfig energy;
  SolveOptions solve;
  FieldConfig field;
  DiagnosticsConfig diagnostics;
  std::string output_dir = ".";
  bool operator==(const RunConfig&) const = default;

  std::vector<double> radii() const;  ///< nr radii evenly spaced over [rmin, rmax]
  Point center() const { return {diagnostics.cx, diagnostics.cy}; }
};

/// INI text with sections [problem] [energy] [solve] [field] [diagnostics] [output].
/// Unknown sections or keys and malformed values throw ConfigError.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

/// Applies one "section.key=value" override.
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Resolved config as INI; parse_config(write_config(c)) == c.
void write_config(std::ostream& os, const RunConfig& cfg);

/// Range checks; throws ConfigError.
void validate(const RunConfig& cfg);

/// Boundary data and energy for the configured 1D/2D problem.
Problem make_problem(const RunConfig& cfg);

/// The configured diagnostic field.
GridFunctiond make_field(const RunConfig& cfg);

}  // namespace fbp
